from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hitstand import DealerPolicy, DeckState, HandLayout, stage1_evs
from hitstand.cards import ALL_LAYOUTS, STANDARD_RULES, evaluate_layout
from hitstand.stage1 import (
    OutcomeTriple,
    evaluate_coefficients_at,
    extract_stage1_coefficients,
    hit_breakdown,
    resolve_stand,
)

H17 = DealerPolicy.parse("H17")
A2, SIX_EIGHT = HandLayout(1, 2), HandLayout(6, 8)
PLAYABLE = [l for l in ALL_LAYOUTS if not evaluate_layout(l).natural]
layouts = st.sampled_from(PLAYABLE)
rules = st.sampled_from(STANDARD_RULES + (DealerPolicy.always_hit(), DealerPolicy.always_stand()))


def _fits(n: int, *layouts: HandLayout) -> bool:
    cards = [c for l in layouts for c in l.cards]
    limit = {v: (16 if v == 10 else 4) * n for v in range(1, 11)}
    return all(cards.count(v) <= limit[v] for v in set(cards))


class TestWorkedExample:
    """Soft 13 as (A,2) against hard 14 as (6,8), one deck, dealer hits soft 17."""

    def test_stand(self):
        res = stage1_evs(A2, SIX_EIGHT, DeckState.fresh(1), H17)
        assert res.stand == OutcomeTriple(Fraction(23, 48), Fraction(0), Fraction(25, 48))

    def test_hit(self):
        res = stage1_evs(A2, SIX_EIGHT, DeckState.fresh(1), H17)
        assert res.hit == OutcomeTriple(Fraction(1334, 2256), Fraction(89, 2256), Fraction(833, 2256))
        assert res.prefers_hit

    def test_breakdown_sums_to_hit_triple(self):
        deck = DeckState.fresh(1).remove(1, 2, 6, 8)
        rows = hit_breakdown(A2, SIX_EIGHT, deck, H17)
        total = [sum(r[i] for r in rows.values()) for i in range(3)]
        res = stage1_evs(A2, SIX_EIGHT, DeckState.fresh(1), H17)
        assert tuple(total) == res.hit.as_tuple()

    def test_breakdown_ace_row(self):
        # Ace makes soft 14; three aces left for the hit, and the dealer's
        # draw decides against 14 with 47 cards remaining.
        deck = DeckState.fresh(1).remove(1, 2, 6, 8)
        row = hit_breakdown(A2, SIX_EIGHT, deck, H17)[1]
        assert sum(row) == Fraction(3, 48)
        assert all((x * 2256).denominator == 1 for x in row)


class TestStand:
    def test_dealer_stands_compares_totals(self):
        t = resolve_stand(evaluate_layout(HandLayout(10, 10)), HandLayout(10, 9), DeckState.fresh(1), DealerPolicy.parse("H17"))
        assert t == OutcomeTriple(Fraction(1), Fraction(0), Fraction(0))

    def test_always_stand_push(self):
        res = stage1_evs(HandLayout(10, 10), HandLayout(10, 10), DeckState.fresh(1), DealerPolicy.always_stand())
        assert res.stand.tie == 1

    def test_naturals_rejected(self):
        with pytest.raises(ValueError):
            stage1_evs(HandLayout(1, 10), SIX_EIGHT, DeckState.fresh(1), H17)


class TestCoefficients:
    @settings(max_examples=60, deadline=None)
    @given(layouts, layouts, rules, st.sampled_from([1, 2, 3, 8, 64, None]))
    def test_closed_form_matches_enumeration(self, player, dealer, rule, n):
        if n is not None and not _fits(n, player, dealer):
            return
        coeffs = extract_stage1_coefficients(player, dealer, rule)
        assert evaluate_coefficients_at(coeffs, n) == stage1_evs(player, dealer, DeckState.fresh(n), rule)

    def test_infinity_spellings(self):
        coeffs = extract_stage1_coefficients(A2, SIX_EIGHT, H17)
        assert evaluate_coefficients_at(coeffs, float("inf")) == evaluate_coefficients_at(coeffs, None)

    def test_replacement_stand_limit(self):
        # Against hard 14 the dealer busts on 8, 9 and the four ten ranks.
        res = stage1_evs(A2, SIX_EIGHT, DeckState.with_replacement(), H17)
        assert res.stand.win == Fraction(24, 52)

    def test_bad_n(self):
        with pytest.raises(ValueError):
            evaluate_coefficients_at(extract_stage1_coefficients(A2, SIX_EIGHT, H17), 0)


class TestTriples:
    @settings(max_examples=40, deadline=None)
    @given(layouts, layouts, rules)
    def test_triples_are_distributions(self, player, dealer, rule):
        res = stage1_evs(player, dealer, DeckState.fresh(1), rule) if _fits(1, player, dealer) else None
        if res is None:
            return
        for t in (res.stand, res.hit):
            assert sum(t.as_tuple()) == 1
            assert all(0 <= x <= 1 for x in t.as_tuple())

    def test_triple_must_sum_to_one(self):
        with pytest.raises(ValueError):
            OutcomeTriple(Fraction(1, 2), Fraction(0), Fraction(0))
