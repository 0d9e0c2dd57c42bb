from __future__ import annotations

from fractions import Fraction

import pytest

from hitstand import (
    Decision,
    HandLayout,
    ObservableState,
    VariantConfig,
    Visibility,
    Weighting,
    cell_evaluate,
    hard,
    layout_weights,
    soft,
)
from hitstand.cards import NATURAL
from hitstand.strategy import enumerate_layouts, observables

SOFT13_V_HARD14 = ObservableState(soft(13), hard(14))


class TestWorkedCell:
    def test_expectations(self):
        cell = cell_evaluate(SOFT13_V_HARD14, VariantConfig())
        assert cell.ev_hit == Fraction(27679, 115056)
        # Weighted stand EVs: 32/51*(-2/48) + 8/51*(-2/48) + 8/51*(-2/48) + 3/51*0.
        assert cell.ev_stand == Fraction(-2, 51)
        assert cell.decision is Decision.HIT
        assert not cell.asterisk

    def test_layout_weights(self):
        weights = {(w.player_layout, w.dealer_layout): w.weight for w in layout_weights(SOFT13_V_HARD14, VariantConfig())}
        a2 = HandLayout(1, 2)
        assert weights == {
            (a2, HandLayout(4, 10)): Fraction(32, 51),
            (a2, HandLayout(5, 9)): Fraction(8, 51),
            (a2, HandLayout(6, 8)): Fraction(8, 51),
            (a2, HandLayout(7, 7)): Fraction(3, 51),
        }

    def test_replacement_weight(self):
        weights = layout_weights(SOFT13_V_HARD14, VariantConfig(decks=None))
        assert max(w.weight for w in weights) == Fraction(128, 208)


class TestObservables:
    @pytest.mark.parametrize("vis, count", [(Visibility.TWO_UP, 676), (Visibility.ONE_UP, 260), (Visibility.NO_UP, 26)])
    def test_counts(self, vis, count, tables):
        assert len(observables(vis)) == count
        assert len(tables(VariantConfig(vis))) == count

    def test_naturals_are_not_cells(self):
        with pytest.raises(ValueError):
            ObservableState(NATURAL, hard(14))
        with pytest.raises(ValueError):
            ObservableState(hard(14), NATURAL)

    def test_labels(self):
        assert str(ObservableState(hard(16), 1)) == "hard 16 v 11"
        assert str(ObservableState(soft(18))) == "soft 18"


class TestLayouts:
    def test_category_counts_one_deck(self):
        counts = dict(enumerate_layouts(hard(14), 1))
        assert counts[HandLayout(4, 10)] == 128
        assert counts[HandLayout(7, 7)] == 12

    def test_category_counts_replacement(self):
        assert dict(enumerate_layouts(hard(20), None)) == {HandLayout(10, 10): 256}
        assert dict(enumerate_layouts(soft(20), None)) == {HandLayout(1, 9): 32}


class TestWeighting:
    def test_weights_sum_to_one(self, visibility):
        cfg = VariantConfig(visibility)
        for obs in observables(visibility)[::7]:
            assert sum(w.weight for w in layout_weights(obs, cfg)) == 1

    def test_product_equals_joint_with_replacement(self, visibility, tables):
        a = tables(VariantConfig(visibility, None))
        b = tables(VariantConfig(visibility, None, weighting=Weighting.JOINT))
        assert a.cells == b.cells

    def test_product_and_joint_differ_in_a_finite_shoe(self, tables):
        a = tables(VariantConfig())
        b = tables(VariantConfig(weighting=Weighting.JOINT))
        assert any(a[k].ev_hit != b[k].ev_hit for k in a.cells)

    def test_single_player_layout_cells_agree(self):
        # Hard 4 is only (2,2), so both weightings see the same dealer split.
        obs = ObservableState(hard(4), hard(17))
        assert cell_evaluate(obs, VariantConfig()) == cell_evaluate(obs, VariantConfig(weighting=Weighting.JOINT))


class TestTable:
    def test_ties_stand(self, tables):
        cell = tables(VariantConfig()).cell(soft(16), soft(16))
        assert cell.is_tie and cell.decision is Decision.STAND

    def test_replacement_has_no_asterisks(self, visibility, tables):
        assert tables(VariantConfig(visibility, None)).asterisks() == []

    def test_diff_ignores_ties(self, tables):
        finite, limit = tables(VariantConfig()), tables(VariantConfig(decks=None))
        plain = {str(k) for k, _, _ in finite.diff(limit)}
        quiet = {str(k) for k, _, _ in finite.diff(limit, ignore_ties=True)}
        assert "soft 16 v soft 16" in plain - quiet
        assert len(quiet) == 3

    def test_decisions_are_sensible(self, tables):
        t = tables(VariantConfig(Visibility.ONE_UP))
        assert t.decision(hard(8), 10) is Decision.HIT
        assert t.decision(hard(20), 10) is Decision.STAND
        assert t.decision(soft(18), 9) is Decision.HIT

    def test_mark(self, tables):
        t = tables(VariantConfig(Visibility.ONE_UP))
        assert t.cell(hard(16), 9).mark == "H*"
