"""Overall results of a variant played with its basic strategy."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cards import (
    STANDARD_RULES,
    DealerPolicy,
    HandState,
    PayoutSchedule,
    VariantConfig,
    Visibility,
    Weighting,
    evaluate_layout,
)
from .strategy import Decision, StrategyTable, build_strategy_table, is_covered, joint_deals


@dataclass(frozen=True)
class DealCell:
    player_value: HandState
    dealer_value: HandState
    probability: Fraction


@dataclass(frozen=True)
class OverallResult:
    win: Fraction
    tie: Fraction
    loss: Fraction
    ev: Fraction

    def __post_init__(self) -> None:
        if self.win + self.tie + self.loss != 1:
            raise ValueError("overall probabilities do not sum to 1")

    def metrics(self) -> dict[str, Fraction]:
        return {"P(W)": self.win, "P(L)": self.loss, "P(T)": self.tie, "E[X]": self.ev}


def deal_distribution(decks: Optional[int]) -> list[DealCell]:
    """Joint distribution of the two starting hand values, naturals included."""
    deals, total = joint_deals(decks)
    acc: dict[tuple[HandState, HandState], int] = defaultdict(int)
    for deal in deals:
        acc[evaluate_layout(deal.player), evaluate_layout(deal.dealer)] += deal.count
    return [DealCell(p, d, Fraction(k, total)) for (p, d), k in sorted(acc.items())]


def natural_outcomes(config: VariantConfig) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Win/tie/loss mass and EV contribution of deals settled before any decision."""
    deals, total = joint_deals(config.decks)
    mult = config.payout.natural_multiplier
    win = tie = loss = 0
    for deal in deals:
        if is_covered(config, deal):
            continue
        p_nat = evaluate_layout(deal.player).natural
        d_nat = evaluate_layout(deal.dealer).natural
        if p_nat and d_nat:
            tie += deal.count
        elif p_nat:
            win += deal.count
        else:
            loss += deal.count
    w, t, l = (Fraction(x, total) for x in (win, tie, loss))
    return w, t, l, mult * w - l


def _check_table(config: VariantConfig, table: StrategyTable) -> None:
    built = table.config
    if (built.visibility, built.decks, built.dealer, built.peeks) != (
        config.visibility,
        config.decks,
        config.dealer,
        config.peeks,
    ):
        raise ValueError(f"strategy table was built for {built}, not {config}")


def overall_metrics(config: VariantConfig, table: Optional[StrategyTable] = None) -> OverallResult:
    """Overall win/tie/loss probabilities and expectation under basic strategy.

    Every strategy cell contributes its probability times the outcome triple
    of its chosen option, as weighted by the table.
    """
    if table is None:
        table = build_strategy_table(config)
    else:
        _check_table(config, table)
    win, tie, loss, ev = natural_outcomes(config)
    for cell in table:
        t = cell.triple
        win += cell.mass * t.win
        tie += cell.mass * t.tie
        loss += cell.mass * t.loss
        ev += cell.mass * t.ev
    return OverallResult(win, tie, loss, ev)


def table_value(table: StrategyTable) -> OverallResult:
    """True result of playing ``table``'s decisions deal by deal.

    Uses joint layout weights whatever weighting produced the decisions, so
    the answer equals a direct walk over every possible deal.
    """
    config = table.config.replace(weighting=Weighting.JOINT)
    joint = build_strategy_table(config)
    win, tie, loss, ev = natural_outcomes(config)
    for key, cell in table.cells.items():
        exact = joint.cells[key]
        t = exact.hit if cell.decision is Decision.HIT else exact.stand
        win += exact.mass * t.win
        tie += exact.mass * t.tie
        loss += exact.mass * t.loss
        ev += exact.mass * t.ev
    return OverallResult(win, tie, loss, ev)


SWEEP_RULES = STANDARD_RULES + (DealerPolicy.always_hit(), DealerPolicy.always_stand())


def dealer_rule_sweep(
    visibility: Visibility,
    decks: Optional[int] = 1,
    payout: PayoutSchedule = PayoutSchedule(),
    rules: tuple[DealerPolicy, ...] = SWEEP_RULES,
    peek_on_natural: Optional[bool] = None,
    weighting: Weighting = Weighting.PRODUCT,
) -> dict[str, OverallResult]:
    """Overall results per dealer rule, re-optimising the strategy for each."""
    out = {}
    for rule in rules:
        cfg = VariantConfig(visibility, decks, rule, payout, peek_on_natural, weighting)
        out[rule.name] = overall_metrics(cfg)
    return out
