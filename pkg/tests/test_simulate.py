from __future__ import annotations

import numpy as np
import pytest

from hitstand import DealerPolicy, VariantConfig, Visibility, overall_metrics, table_value
from hitstand.simulate import SimReport, deal_cards, play_rounds, simulate


class TestDealing:
    def test_without_replacement_respects_counts(self):
        cards = deal_cards(1, 20000, np.random.default_rng(1))
        assert cards.shape == (20000, 6)
        assert cards.min() >= 1 and cards.max() <= 10
        for v in range(1, 10):
            assert (cards == v).sum(axis=1).max() <= 4

    def test_marginals(self):
        cards = deal_cards(2, 100000, np.random.default_rng(2))
        tens = (cards[:, 3] == 10).mean()
        assert abs(tens - 16 / 52) < 0.01

    def test_replacement(self):
        cards = deal_cards(None, 50000, np.random.default_rng(3))
        assert (cards[:, 0] == 1).mean() == pytest.approx(4 / 52, abs=0.005)


class TestPlay:
    def test_forced_push(self, tables):
        cfg = VariantConfig(dealer=DealerPolicy.always_stand())
        rows = np.tile(np.array([10, 10, 10, 10, 5, 5]), (100, 1))
        assert (play_rounds(tables(cfg), rows) == 0).all()

    def test_naturals(self, tables):
        table = tables(VariantConfig())
        rows = np.array([[1, 10, 9, 9, 2, 2], [9, 9, 1, 10, 2, 2], [1, 10, 10, 1, 2, 2]])
        assert list(play_rounds(table, rows)) == [1.5, -1.0, 0.0]

    def test_player_bust(self, tables):
        table = tables(VariantConfig(Visibility.NO_UP))
        # Hard 12 with no information hits; a ten busts it.
        rows = np.array([[10, 2, 10, 6, 10, 5]])
        assert list(play_rounds(table, rows)) == [-1.0]


class TestSimulate:
    def test_deterministic(self, tables):
        cfg = VariantConfig(Visibility.NO_UP)
        a = simulate(cfg, tables(cfg), trials=30000, seed=11, batch_size=7000)
        b = simulate(cfg, tables(cfg), trials=30000, seed=11, batch_size=7000)
        assert a == b
        assert a.batches == 5 and a.wins + a.ties + a.losses == 30000

    def test_workers_do_not_change_the_result(self, tables):
        cfg = VariantConfig(Visibility.ONE_UP)
        a = simulate(cfg, tables(cfg), trials=20000, seed=5, batch_size=5000, workers=1)
        b = simulate(cfg, tables(cfg), trials=20000, seed=5, batch_size=5000, workers=2)
        assert a == b

    def test_seeds_differ(self, tables):
        cfg = VariantConfig(Visibility.NO_UP)
        assert simulate(cfg, tables(cfg), 20000, seed=1) != simulate(cfg, tables(cfg), 20000, seed=2)

    def test_consistent_with_exact(self, tables):
        cfg = VariantConfig(Visibility.TWO_UP, decks=None)
        rep = simulate(cfg, tables(cfg), trials=400000, seed=2024)
        assert rep.within(float(overall_metrics(cfg, tables(cfg)).ev))
        assert rep.within(float(table_value(tables(cfg)).ev))

    @pytest.mark.parametrize("kwargs", [{"trials": 0}, {"batch_size": 0}, {"seed": -1}])
    def test_validation(self, kwargs, tables):
        cfg = VariantConfig(Visibility.NO_UP)
        with pytest.raises(ValueError):
            simulate(cfg, tables(cfg), **{"trials": 10, **kwargs})

    def test_table_mismatch(self, tables):
        with pytest.raises(ValueError):
            simulate(VariantConfig(Visibility.NO_UP, decks=2), tables(VariantConfig(Visibility.NO_UP)), trials=10)

    def test_report_dict(self):
        rep = SimReport(10, 4, 2, 4, 0.0, 0.3, 9)
        d = rep.to_dict()
        assert d["algorithm"].startswith("numpy.PCG64") and "partitioning" in d
        with pytest.raises(ValueError):
            SimReport(10, 4, 2, 5, 0.0, 0.3, 9)
