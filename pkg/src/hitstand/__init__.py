"""Exact analysis of a single-decision blackjack game.

Player and dealer each take at most one hit.  The package computes the
basic strategy and the overall expectation of each variant with exact
rationals, follows both as the number of decks grows, and checks them
against a seeded Monte Carlo playout.
"""

from __future__ import annotations

from .asymptotics import ConvergenceReport, DeckSweep, sweep_decks, verify_limits
from .cards import (
    DealerPolicy,
    DeckState,
    HandLayout,
    HandState,
    PayoutSchedule,
    VariantConfig,
    Visibility,
    Weighting,
    hard,
    parse_card,
    parse_hand,
    parse_layout,
    soft,
)
from .overall import OverallResult, deal_distribution, dealer_rule_sweep, overall_metrics, table_value
from .stage1 import OutcomeTriple, Stage1Result, stage1_evs
from .strategy import CellResult, Decision, ObservableState, StrategyTable, build_strategy_table, cell_evaluate, layout_weights

__version__ = "0.1.0"

__all__ = [
    "CellResult",
    "ConvergenceReport",
    "DealerPolicy",
    "DeckState",
    "DeckSweep",
    "Decision",
    "HandLayout",
    "HandState",
    "ObservableState",
    "OutcomeTriple",
    "OverallResult",
    "PayoutSchedule",
    "Stage1Result",
    "StrategyTable",
    "VariantConfig",
    "Visibility",
    "Weighting",
    "build_strategy_table",
    "cell_evaluate",
    "deal_distribution",
    "dealer_rule_sweep",
    "hard",
    "layout_weights",
    "overall_metrics",
    "parse_card",
    "parse_hand",
    "parse_layout",
    "soft",
    "stage1_evs",
    "sweep_decks",
    "table_value",
    "verify_limits",
]
