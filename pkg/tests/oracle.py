"""Brute-force reference: play every ordered deal card by card.

Nothing here reuses the staged computation.  Six card positions are walked
in order (two player cards, dealer up, dealer down, player hit, dealer hit)
with integer counts, and every path is scaled to the same denominator,
the number of ordered six-card sequences.  The only package object used is
the strategy table, to look up the player's decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from hitstand import HandState, StrategyTable, Visibility
from hitstand.cards import PolicyKind

VALUES = tuple(range(1, 11))


@dataclass(frozen=True)
class OracleResult:
    win: Fraction
    tie: Fraction
    loss: Fraction
    ev: Fraction


def _value(cards: list[int]) -> tuple[int, bool]:
    total = sum(cards)
    if 1 in cards and total + 10 <= 21:
        return total + 10, True
    return total, False


def _is_natural(cards: list[int]) -> bool:
    return len(cards) == 2 and sorted(cards) == [1, 10]


def _dealer_hits(config, total: int, is_soft: bool) -> bool:
    rule = config.dealer
    if rule.kind is PolicyKind.ALWAYS_HIT:
        return True
    if rule.kind is PolicyKind.ALWAYS_STAND:
        return False
    if total != rule.stand_at:
        return total < rule.stand_at
    return is_soft and rule.hit_soft_at_threshold


def _state(cards: list[int]) -> HandState:
    total, is_soft = _value(cards)
    return HandState(total, is_soft)


def brute_force(table: StrategyTable) -> OracleResult:
    config = table.config
    decks: Optional[int] = config.decks
    mult = config.payout.natural_multiplier
    finite = decks is not None
    # With replacement every draw is from 13 equally likely ranks.
    counts = [4 * (decks or 1)] * 9 + [16 * (decks or 1)]
    size = 52 * decks if finite else 52

    def remaining(drawn: int) -> int:
        return size - drawn if finite else size

    def take(v: int) -> int:
        c = counts[v - 1]
        if finite:
            counts[v - 1] -= 1
        return c

    def put(v: int) -> None:
        if finite:
            counts[v - 1] += 1

    win = tie = loss = 0
    ev = Fraction(0)
    denom = 1
    for k in range(6):
        denom *= remaining(k)

    def settle(weight: int, player: int, dealer: int) -> None:
        nonlocal win, tie, loss, ev
        if player > dealer:
            win += weight
            ev += weight
        elif player == dealer:
            tie += weight
        else:
            loss += weight
            ev -= weight

    def dealer_turn(weight: int, player_total: int, dealer_cards: list[int], drawn: int, player_hit: bool) -> None:
        """Finish the round; ``weight`` covers positions drawn so far."""
        # Positions still undrawn after the dealer acts are filled with any card.
        d_total, d_soft = _value(dealer_cards)
        if _dealer_hits(config, d_total, d_soft):
            for g in VALUES:
                cg = take(g)
                if cg:
                    w = weight * cg * (1 if player_hit else remaining(drawn + 1))
                    t, _ = _value(dealer_cards + [g])
                    if t > 21:
                        settle(w, 1, 0)
                    else:
                        settle(w, player_total, t)
                put(g)
        else:
            fill = remaining(drawn) * remaining(drawn + 1) if not player_hit else remaining(drawn)
            settle(weight * fill, player_total, d_total)

    for a in VALUES:
        ca = take(a)
        for b in VALUES:
            cb = take(b)
            for u in VALUES:
                cu = take(u)
                for d in VALUES:
                    cd = take(d)
                    w4 = ca * cb * cu * cd
                    if w4:
                        player, dealer = [a, b], [u, d]
                        rest = remaining(4) * remaining(5)
                        p_nat, d_nat = _is_natural(player), _is_natural(dealer)
                        if p_nat or d_nat:
                            w = w4 * rest
                            if p_nat and d_nat:
                                tie += w
                            elif p_nat:
                                win += w
                                ev += mult * w
                            else:
                                loss += w
                                ev -= w
                        else:
                            hits = _decide(table, player, dealer)
                            p_total, _ = _value(player)
                            if hits:
                                for h in VALUES:
                                    ch = take(h)
                                    if ch:
                                        t, _ = _value(player + [h])
                                        if t > 21:
                                            settle(w4 * ch * remaining(5), 0, 1)
                                        else:
                                            dealer_turn(w4 * ch, t, dealer, 5, True)
                                    put(h)
                            else:
                                dealer_turn(w4, p_total, dealer, 4, False)
                    put(d)
                put(u)
            put(b)
        put(a)

    return OracleResult(Fraction(win, denom), Fraction(tie, denom), Fraction(loss, denom), ev / denom)


def _decide(table: StrategyTable, player: list[int], dealer: list[int]) -> bool:
    vis = table.config.visibility
    if vis is Visibility.TWO_UP:
        info = _state(dealer)
    elif vis is Visibility.ONE_UP:
        info = dealer[0]
    else:
        info = None
    return table.cell(_state(player), info).decision.value == "H"
