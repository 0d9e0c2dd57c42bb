"""Basic strategy from the information the player can see.

A strategy cell is the player's hand value together with whatever the
variant reveals about the dealer: both cards, the up-card, or nothing.  Its
expectations are the stage-one results averaged over every deal consistent
with that information.
"""

from __future__ import annotations

import enum
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Union

from .cards import (
    ACE,
    ALL_LAYOUTS,
    SINGLE_DECK,
    VALUES,
    DealerPolicy,
    DeckState,
    HandLayout,
    HandState,
    VariantConfig,
    Visibility,
    Weighting,
    evaluate_layout,
    hard,
    soft,
)
from .stage1 import OutcomeTriple, Stage1Result, stage1_evs

log = logging.getLogger(__name__)

DealerInfo = Union[HandState, int, None]

PLAYER_ROWS = tuple(hard(t) for t in range(4, 21)) + tuple(soft(t) for t in range(12, 21))
DEALER_HANDS = PLAYER_ROWS
UP_CARDS = (2, 3, 4, 5, 6, 7, 8, 9, 10, ACE)

_LOSS = OutcomeTriple(Fraction(0), Fraction(0), Fraction(1))


class Decision(enum.Enum):
    HIT = "H"
    STAND = "S"


@dataclass(frozen=True)
class ObservableState:
    """Player hand value plus the visible dealer information.

    ``dealer`` is a :class:`HandState` (both cards up), an up-card value
    (one card up; the ace is stored as 1) or ``None`` (no cards up).
    """

    player: HandState
    dealer: DealerInfo = None

    def __post_init__(self) -> None:
        if self.player.natural:
            raise ValueError("a natural involves no decision")
        if isinstance(self.dealer, HandState) and self.dealer.natural:
            raise ValueError("a visible dealer natural involves no decision")

    @property
    def visibility(self) -> Visibility:
        if isinstance(self.dealer, HandState):
            return Visibility.TWO_UP
        if self.dealer is None:
            return Visibility.NO_UP
        return Visibility.ONE_UP

    @property
    def dealer_label(self) -> str:
        if self.dealer is None:
            return "-"
        if isinstance(self.dealer, HandState):
            return self.dealer.label
        return "11" if self.dealer == ACE else str(self.dealer)

    def __str__(self) -> str:
        if self.dealer is None:
            return self.player.label
        return f"{self.player.label} v {self.dealer_label}"


@dataclass(frozen=True)
class LayoutWeight:
    player_layout: HandLayout
    dealer_layout: HandLayout
    weight: Fraction


@dataclass(frozen=True)
class CellResult:
    observable: ObservableState
    ev_hit: Fraction
    ev_stand: Fraction
    hit: OutcomeTriple
    stand: OutcomeTriple
    asterisk: bool
    # P(observable state and no natural settled beforehand), over all deals.
    mass: Fraction = Fraction(0)
    layout_split: tuple[int, int] = (0, 0)

    @property
    def decision(self) -> Decision:
        return Decision.HIT if self.ev_hit > self.ev_stand else Decision.STAND

    @property
    def is_tie(self) -> bool:
        return self.ev_hit == self.ev_stand

    @property
    def ev(self) -> Fraction:
        return max(self.ev_hit, self.ev_stand)

    @property
    def triple(self) -> OutcomeTriple:
        return self.hit if self.decision is Decision.HIT else self.stand

    @property
    def mark(self) -> str:
        return self.decision.value + ("*" if self.asterisk else "")


# -- layouts and weights ------------------------------------------------------


def ordered_count(counts: tuple[int, ...], cards: tuple[int, ...]) -> int:
    """Number of ordered draws of ``cards`` (as values) from ``counts``."""
    seen = [0] * 10
    total = 1
    for c in cards:
        total *= counts[c - 1] - seen[c - 1]
        seen[c - 1] += 1
        if total <= 0:
            return 0
    return total


def _layout_perms(counts: tuple[int, ...], layout: HandLayout) -> int:
    a, b = layout.cards
    n = ordered_count(counts, (a, b))
    return n if a == b else 2 * n


def _base_counts(decks: Optional[int]) -> tuple[int, ...]:
    return SINGLE_DECK if decks is None else tuple(c * decks for c in SINGLE_DECK)


def enumerate_layouts(hand: HandState, decks: Optional[int]) -> list[tuple[HandLayout, int]]:
    """Distinct layouts evaluating to ``hand`` with their permutation counts.

    Finite shoes give ``32n^2``, ``16n^2 - 4n``, ``128n^2`` or
    ``256n^2 - 16n`` by layout category; ``decks=None`` gives 32/16/128/256
    out of 2704.
    """
    counts = _base_counts(decks)
    out = []
    for layout in ALL_LAYOUTS:
        if evaluate_layout(layout) == hand:
            if decks is None:
                a, b = layout.cards
                k = counts[a - 1] * counts[b - 1] * (1 if a == b else 2)
            else:
                k = _layout_perms(counts, layout)
            out.append((layout, k))
    return out


@dataclass(frozen=True)
class _Deal:
    player: HandLayout
    up: int
    down: int
    count: int

    @property
    def dealer(self) -> HandLayout:
        return HandLayout(self.up, self.down)


@lru_cache(maxsize=64)
def joint_deals(decks: Optional[int]) -> tuple[tuple[_Deal, ...], int]:
    """All starting deals as (player layout, dealer up, dealer down) counts.

    Counts are ordered permutations; the second element is their total,
    ``P(52n, 4)`` for ``n`` decks and ``52^4`` with replacement.
    """
    counts = _base_counts(decks)
    deals = []
    for pl in ALL_LAYOUTS:
        if decks is None:
            a, b = pl.cards
            cp = counts[a - 1] * counts[b - 1] * (1 if a == b else 2)
            rest = counts
        else:
            cp = _layout_perms(counts, pl)
            rest = list(counts)
            for c in pl.cards:
                rest[c - 1] -= 1
        for u in VALUES:
            for d in VALUES:
                if decks is None:
                    cd = counts[u - 1] * counts[d - 1]
                else:
                    cd = ordered_count(tuple(rest), (u, d))
                if cp * cd:
                    deals.append(_Deal(pl, u, d, cp * cd))
    total = sum(x.count for x in deals)
    return tuple(deals), total


@lru_cache(maxsize=64)
def stage1_table(decks: Optional[int], policy: DealerPolicy) -> dict[tuple[HandLayout, HandLayout], Stage1Result]:
    deck = DeckState.fresh(decks)
    table = {}
    playable = [l for l in ALL_LAYOUTS if not evaluate_layout(l).natural]
    for pl in playable:
        for dl in playable:
            table[pl, dl] = stage1_evs(pl, dl, deck, policy)
    return table


def dealer_info(visibility: Visibility, deal: _Deal) -> DealerInfo:
    if visibility is Visibility.TWO_UP:
        return evaluate_layout(deal.dealer)
    if visibility is Visibility.ONE_UP:
        return deal.up
    return None


def _visible_key(visibility: Visibility, deal: _Deal) -> tuple:
    if visibility is Visibility.TWO_UP:
        return (deal.player, deal.dealer)
    if visibility is Visibility.ONE_UP:
        return (deal.player, deal.up)
    return (deal.player,)


def is_covered(config: VariantConfig, deal: _Deal) -> bool:
    """Whether a deal reaches the player's decision (else it is a natural)."""
    if evaluate_layout(deal.player).natural:
        return False
    if evaluate_layout(deal.dealer).natural:
        return not config.peeks
    return True


@lru_cache(maxsize=64)
def _cell_groups(visibility: Visibility, decks: Optional[int], peeks: bool) -> dict[ObservableState, tuple[_Deal, ...]]:
    config = VariantConfig(visibility, decks, peek_on_natural=peeks)
    deals, _ = joint_deals(decks)
    groups: dict[ObservableState, list[_Deal]] = defaultdict(list)
    for deal in deals:
        if is_covered(config, deal):
            key = ObservableState(evaluate_layout(deal.player), dealer_info(visibility, deal))
            groups[key].append(deal)
    return {k: tuple(v) for k, v in groups.items()}


def _consistent(config: VariantConfig, observable: ObservableState) -> list[_Deal]:
    if observable.visibility is not config.visibility:
        raise ValueError(f"{observable} does not match a {config.visibility.value} variant")
    return list(_cell_groups(config.visibility, config.decks, config.peeks).get(observable, ()))


@lru_cache(maxsize=256)
def _player_share(hand: HandState, decks: Optional[int]) -> dict[HandLayout, Fraction]:
    layouts = enumerate_layouts(hand, decks)
    total = sum(k for _, k in layouts)
    return {layout: Fraction(k, total) for layout, k in layouts}


def _deal_weights(config: VariantConfig, deals: list[_Deal]) -> list[tuple[_Deal, Fraction]]:
    """Weight of every consistent deal inside its strategy cell."""
    if config.weighting is Weighting.JOINT:
        total = sum(d.count for d in deals)
        return [(d, Fraction(d.count, total)) for d in deals]
    # Product form: P(player layout | value) * P(dealer cards | that layout, info).
    per_player: dict[HandLayout, int] = defaultdict(int)
    for d in deals:
        per_player[d.player] += d.count
    share = _player_share(evaluate_layout(deals[0].player), config.decks)
    present = sum(share[pl] for pl in per_player)
    return [(d, share[d.player] / present * Fraction(d.count, per_player[d.player])) for d in deals]


def layout_weights(observable: ObservableState, config: VariantConfig) -> list[LayoutWeight]:
    """Probability of each (player, dealer) layout pair within a cell.

    Finite shoes account for the cards the two hands share; with
    replacement the weights factor into the two marginals.  The form of the
    weights follows ``config.weighting``.
    """
    deals = _consistent(config, observable)
    if not deals:
        raise ValueError(f"no deal is consistent with {observable}")
    grouped: dict[tuple[HandLayout, HandLayout], Fraction] = defaultdict(Fraction)
    for deal, w in _deal_weights(config, deals):
        grouped[deal.player, deal.dealer] += w
    return [LayoutWeight(p, d, w) for (p, d), w in sorted(grouped.items())]


# -- cells and tables ---------------------------------------------------------


def _outcomes(stage1, deal: _Deal) -> Stage1Result:
    if evaluate_layout(deal.dealer).natural:
        return Stage1Result(_LOSS, _LOSS)
    return stage1[deal.player, deal.dealer]


def _evaluate(config: VariantConfig, observable: ObservableState, deals: list[_Deal], total: int) -> CellResult:
    stage1 = stage1_table(config.decks, config.dealer)
    weight = sum(d.count for d in deals)
    hit = [Fraction(0)] * 3
    stand = [Fraction(0)] * 3
    by_visible: dict[tuple, Fraction] = defaultdict(Fraction)
    for deal, w in _deal_weights(config, deals):
        res = _outcomes(stage1, deal)
        for i, (h, s) in enumerate(zip(res.hit.as_tuple(), res.stand.as_tuple())):
            hit[i] += w * h
            stand[i] += w * s
        # Only the hit-minus-stand advantage matters for the per-layout choice.
        by_visible[_visible_key(config.visibility, deal)] += deal.count * (res.ev_hit - res.ev_stand)
    hit_t = OutcomeTriple(*hit)
    stand_t = OutcomeTriple(*stand)
    cell_hits = hit_t.ev > stand_t.ev
    if hit_t.ev == stand_t.ev and hit_t != stand_t:
        log.info("exact tie between hit and stand at %s (%s); standing", observable, config)
    n_hit = sum(1 for adv in by_visible.values() if adv > 0)
    n_stand = len(by_visible) - n_hit
    asterisk = (n_stand if cell_hits else n_hit) > 0
    return CellResult(
        observable=observable,
        ev_hit=hit_t.ev,
        ev_stand=stand_t.ev,
        hit=hit_t,
        stand=stand_t,
        asterisk=asterisk,
        mass=Fraction(weight, total),
        layout_split=(n_hit, n_stand),
    )


def cell_evaluate(observable: ObservableState, config: VariantConfig) -> CellResult:
    deals = _consistent(config, observable)
    if not deals:
        raise ValueError(f"no deal is consistent with {observable}")
    return _evaluate(config, observable, deals, joint_deals(config.decks)[1])


def observables(visibility: Visibility) -> list[ObservableState]:
    """Canonical row-major order of strategy cells for a variant."""
    if visibility is Visibility.TWO_UP:
        return [ObservableState(p, d) for p in PLAYER_ROWS for d in DEALER_HANDS]
    if visibility is Visibility.ONE_UP:
        return [ObservableState(p, u) for p in PLAYER_ROWS for u in UP_CARDS]
    return [ObservableState(p) for p in PLAYER_ROWS]


@dataclass
class StrategyTable:
    config: VariantConfig
    cells: dict[ObservableState, CellResult] = field(default_factory=dict)

    def __iter__(self) -> Iterator[CellResult]:
        return iter(self.cells.values())

    def __len__(self) -> int:
        return len(self.cells)

    def __getitem__(self, key: ObservableState) -> CellResult:
        return self.cells[key]

    def cell(self, player: HandState, dealer: DealerInfo = None) -> CellResult:
        return self.cells[ObservableState(player, dealer)]

    def decision(self, player: HandState, dealer: DealerInfo = None) -> Decision:
        return self.cell(player, dealer).decision

    def decisions(self) -> dict[ObservableState, Decision]:
        return {k: c.decision for k, c in self.cells.items()}

    def asterisks(self) -> list[ObservableState]:
        return [k for k, c in self.cells.items() if c.asterisk]

    def diff(self, other: "StrategyTable", ignore_ties: bool = False) -> list[tuple[ObservableState, Decision, Decision]]:
        """Cells whose decision differs, as ``(cell, ours, theirs)``.

        With ``ignore_ties`` a cell where either table is indifferent between
        hitting and standing does not count as a change.
        """
        out = []
        for key, cell in self.cells.items():
            their_cell = other.cells[key]
            if ignore_ties and (cell.is_tie or their_cell.is_tie):
                continue
            if cell.decision is not their_cell.decision:
                out.append((key, cell.decision, their_cell.decision))
        return out

    def same_strategy(self, other: "StrategyTable") -> bool:
        return self.decisions() == other.decisions()


def build_strategy_table(config: VariantConfig) -> StrategyTable:
    total = joint_deals(config.decks)[1]
    groups = _cell_groups(config.visibility, config.decks, config.peeks)
    table = StrategyTable(config)
    for key in observables(config.visibility):
        table.cells[key] = _evaluate(config, key, list(groups[key]), total)
    return table
