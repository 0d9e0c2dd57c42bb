"""Outcome probabilities when both starting hands are known exactly.

Everything here conditions on the specific two-card layouts of the player and
the dealer.  The player makes one decision (hit once or stand), then the
dealer takes at most one card according to their policy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .cards import (
    RANKS_PER_VALUE,
    VALUES,
    DealerPolicy,
    DeckState,
    HandLayout,
    HandState,
    add_card,
    dealer_must_hit,
    evaluate_layout,
)

WIN, TIE, LOSS = 0, 1, 2


@dataclass(frozen=True)
class OutcomeTriple:
    win: Fraction
    tie: Fraction
    loss: Fraction

    def __post_init__(self) -> None:
        if self.win + self.tie + self.loss != 1:
            raise ValueError(f"outcome probabilities do not sum to 1: {self}")

    @property
    def ev(self) -> Fraction:
        """Expected payout of a unit bet (naturals never reach this level)."""
        return self.win - self.loss

    @classmethod
    def from_counts(cls, counts: tuple[int, int, int], total: int) -> "OutcomeTriple":
        w, t, l = counts
        return cls(Fraction(w, total), Fraction(t, total), Fraction(l, total))

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.win, self.tie, self.loss)


@dataclass(frozen=True)
class Stage1Result:
    stand: OutcomeTriple
    hit: OutcomeTriple

    @property
    def ev_stand(self) -> Fraction:
        return self.stand.ev

    @property
    def ev_hit(self) -> Fraction:
        return self.hit.ev

    @property
    def prefers_hit(self) -> bool:
        return self.ev_hit > self.ev_stand


def compare(player_total: int, dealer: Optional[HandState]) -> int:
    if dealer is None or player_total > dealer.total:
        return WIN
    if player_total == dealer.total:
        return TIE
    return LOSS


def _weights(deck: DeckState) -> tuple[tuple[int, ...], int]:
    return deck.counts, deck.size


def _stand_counts(player_total: int, dealer: HandState, deck: DeckState, policy: DealerPolicy) -> tuple[list[int], int]:
    counts, size = _weights(deck)
    out = [0, 0, 0]
    if not dealer_must_hit(policy, dealer):
        out[compare(player_total, dealer)] = size
        return out, size
    for v in VALUES:
        k = counts[v - 1]
        if k:
            out[compare(player_total, add_card(dealer, v))] += k
    return out, size


def _check_pair(player: HandLayout, dealer: HandLayout) -> tuple[HandState, HandState]:
    p, d = evaluate_layout(player), evaluate_layout(dealer)
    if p.natural or d.natural:
        raise ValueError("naturals are settled before any decision is made")
    return p, d


def resolve_stand(player: HandState, dealer_layout: HandLayout, deck: DeckState, policy: DealerPolicy) -> OutcomeTriple:
    """Outcome distribution when the player stands on ``player``.

    ``deck`` must already have the four dealt cards removed.
    """
    dealer = evaluate_layout(dealer_layout)
    if dealer.natural or player.natural:
        raise ValueError("naturals are settled before any decision is made")
    counts, size = _stand_counts(player.total, dealer, deck, policy)
    return OutcomeTriple.from_counts(tuple(counts), size)


def _hit_counts(player_layout: HandLayout, dealer_layout: HandLayout, deck: DeckState, policy: DealerPolicy) -> tuple[list[int], int]:
    player, dealer = _check_pair(player_layout, dealer_layout)
    counts, size = _weights(deck)
    out = [0, 0, 0]
    denom = 0
    for r in VALUES:
        k = counts[r - 1]
        if not k:
            continue
        after = deck.remove(r)
        sub_size = after.size
        new = add_card(player, r)
        if denom == 0:
            denom = size * sub_size
        if new is None:
            out[LOSS] += k * sub_size
            continue
        sub, _ = _stand_counts(new.total, dealer, after, policy)
        for i in range(3):
            out[i] += k * sub[i]
    return out, denom


def resolve_hit(player_layout: HandLayout, dealer_layout: HandLayout, deck: DeckState, policy: DealerPolicy) -> OutcomeTriple:
    """Outcome distribution when the player takes exactly one card.

    ``deck`` must already have the four dealt cards removed.  A busted
    player loses at once; otherwise the dealer plays from the deck with the
    player's hit card also removed.
    """
    counts, denom = _hit_counts(player_layout, dealer_layout, deck, policy)
    return OutcomeTriple.from_counts(tuple(counts), denom)


def hit_breakdown(player_layout: HandLayout, dealer_layout: HandLayout, deck: DeckState, policy: DealerPolicy) -> dict[int, tuple[Fraction, Fraction, Fraction]]:
    """Joint probabilities P(outcome and hit card = r), keyed by r.

    Each value is a (win, tie, loss) tuple, not normalised per card; summed
    over r they give the result of :func:`resolve_hit`.  ``deck`` excludes the dealt cards.
    """
    player, dealer = _check_pair(player_layout, dealer_layout)
    counts, size = _weights(deck)
    rows = {}
    for r in VALUES:
        k = counts[r - 1]
        after = deck.remove(r) if k else deck
        sub_size = after.size
        new = add_card(player, r)
        if new is None:
            sub = [0, 0, sub_size]
        else:
            sub, _ = _stand_counts(new.total, dealer, after, policy)
        scale = Fraction(k, size * sub_size)
        rows[r] = tuple(scale * s for s in sub)
    return rows


def stage1_evs(player_layout: HandLayout, dealer_layout: HandLayout, deck: DeckState, policy: DealerPolicy) -> Stage1Result:
    """Stand and hit outcomes for fixed layouts dealt from ``deck``.

    Unlike :func:`resolve_stand`/:func:`resolve_hit`, ``deck`` here is the
    shoe *before* the four starting cards were dealt.
    """
    player, _ = _check_pair(player_layout, dealer_layout)
    rest = deck.remove(*player_layout.cards, *dealer_layout.cards)
    return Stage1Result(
        stand=resolve_stand(player, dealer_layout, rest, policy),
        hit=resolve_hit(player_layout, dealer_layout, rest, policy),
    )


# -- closed-form coefficients -------------------------------------------------


@dataclass(frozen=True)
class Stage1Coefficients:
    """Rank counts behind the stage-one probabilities.

    ``stand`` is ``(a, b, c, w, t, l)``: ``a``/``b``/``c`` count the ranks
    (out of 13) whose draw makes the standing player win/push/lose, and
    ``w``/``t``/``l`` count the four dealt cards that fall in those groups.
    ``hit[r]`` holds the same six numbers after a hit card of value ``r``
    (five cards out) plus ``gamma``, the dealt cards of value ``r``.
    """

    stand: tuple[int, int, int, int, int, int]
    hit: dict[int, tuple[int, int, int, int, int, int, int]]

    @property
    def aggregates(self) -> tuple[int, int, int]:
        """``(A, B, C)``, rank-weighted sums of the per-card ``a, b, c``."""
        sums = [0, 0, 0]
        for r, row in self.hit.items():
            m = RANKS_PER_VALUE[r - 1]
            for i in range(3):
                sums[i] += m * row[i]
        return tuple(sums)


def _rank_split(outcomes: dict[int, int], removed: list[int]) -> tuple[int, int, int, int, int, int]:
    ranks = [0, 0, 0]
    gone = [0, 0, 0]
    for v, o in outcomes.items():
        ranks[o] += RANKS_PER_VALUE[v - 1]
    for c in removed:
        gone[outcomes[c]] += 1
    return (*ranks, *gone)


def _dealer_outcomes(player_total: int, dealer: HandState, policy: DealerPolicy) -> dict[int, int]:
    if not dealer_must_hit(policy, dealer):
        fixed = compare(player_total, dealer)
        return {v: fixed for v in VALUES}
    return {v: compare(player_total, add_card(dealer, v)) for v in VALUES}


def extract_stage1_coefficients(player_layout: HandLayout, dealer_layout: HandLayout, policy: DealerPolicy) -> Stage1Coefficients:
    player, dealer = _check_pair(player_layout, dealer_layout)
    dealt = [*player_layout.cards, *dealer_layout.cards]
    stand = _rank_split(_dealer_outcomes(player.total, dealer, policy), dealt)
    hit = {}
    for r in VALUES:
        new = add_card(player, r)
        if new is None:
            outcomes = {v: LOSS for v in VALUES}
        else:
            outcomes = _dealer_outcomes(new.total, dealer, policy)
        hit[r] = (*_rank_split(outcomes, dealt + [r]), dealt.count(r))
    return Stage1Coefficients(stand, hit)


def evaluate_coefficients_at(coeffs: Stage1Coefficients, n: Union[int, None, float]) -> Stage1Result:
    """Evaluate the closed forms at ``n`` decks; ``None`` or ``inf`` is the limit."""
    a, b, c, w, t, l = coeffs.stand
    if n is None or n == float("inf"):
        q = Fraction(4, 52)
        stand = OutcomeTriple(a * q, b * q, c * q)
        sums = [Fraction(0)] * 3
        for r, row in coeffs.hit.items():
            p_r = RANKS_PER_VALUE[r - 1] * q
            for i in range(3):
                sums[i] += row[i] * q * p_r
        return Stage1Result(stand, OutcomeTriple(*sums))
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer or infinity")
    d4, d5 = 52 * n - 4, 52 * n - 5
    stand = OutcomeTriple(
        Fraction(a * 4 * n - w, d4), Fraction(b * 4 * n - t, d4), Fraction(c * 4 * n - l, d4)
    )
    nums = [0, 0, 0]
    for r, row in coeffs.hit.items():
        p_num = RANKS_PER_VALUE[r - 1] * 4 * n - row[6]
        for i in range(3):
            nums[i] += (row[i] * 4 * n - row[3 + i]) * p_num
    hit = OutcomeTriple(*(Fraction(x, d4 * d5) for x in nums))
    return Stage1Result(stand, hit)
