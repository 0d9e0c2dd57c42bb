"""Compare computed results with the bundled reference fixtures.

The fixture file is the only place expected numbers live.  Decimal values
are stored as printed strings; a value matches when it lies within half a
unit of its last printed decimal (or the fixture's own tolerance), and a
list of values means any one of them may match.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable, Iterable, Optional

from .cards import (
    DealerPolicy,
    DeckState,
    HandLayout,
    PayoutSchedule,
    VariantConfig,
    Visibility,
    card_name,
    parse_card,
    parse_hand,
    parse_layout,
)
from .exact import fraction_str, rational_round
from .overall import OverallResult, deal_distribution, overall_metrics
from .stage1 import hit_breakdown, stage1_evs
from .strategy import (
    ObservableState,
    StrategyTable,
    build_strategy_table,
    cell_evaluate,
    layout_weights,
)

FIXTURE_FILE = "reference_fixtures.json"


@dataclass(frozen=True)
class Fixture:
    id: str
    suite: str
    kind: str
    source: str
    params: dict
    expected: dict
    tolerance: Optional[str] = None


@dataclass(frozen=True)
class FixtureResult:
    fixture: Fixture
    passed: bool
    expected: str
    actual: str
    detail: str = ""

    @property
    def id(self) -> str:
        return self.fixture.id


def load_fixtures(path: Optional[str] = None) -> list[Fixture]:
    if path is None:
        text = resources.files("hitstand.data").joinpath(FIXTURE_FILE).read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    raw = json.loads(text)
    return [Fixture(**f) for f in raw["fixtures"]]


def suites(fixtures: Optional[list[Fixture]] = None) -> list[str]:
    out: list[str] = []
    for f in fixtures or load_fixtures():
        if f.suite not in out:
            out.append(f.suite)
    return out


def printed_tolerance(printed: str) -> Decimal:
    """Half a unit in the last decimal place of ``printed``."""
    places = -Decimal(printed).as_tuple().exponent
    return Decimal(5) / Decimal(10) ** (places + 1)


def matches_printed(value: Fraction, printed: Iterable[str], tolerance: Optional[str] = None) -> bool:
    for p in printed:
        tol = Fraction(Decimal(tolerance)) if tolerance else Fraction(printed_tolerance(p))
        if abs(value - Fraction(Decimal(p))) <= tol:
            return True
    return False


def _decks(value) -> Optional[int]:
    return None if value is None else int(value)


def _config(params: dict, **overrides) -> VariantConfig:
    cfg = VariantConfig(
        visibility=Visibility.parse(params.get("visibility", "two-up")),
        decks=_decks(params.get("decks", 1)),
        dealer=DealerPolicy.parse(params.get("dealer_rule", "H17")),
        payout=PayoutSchedule.parse(params.get("payout", "3:2")),
    )
    return cfg.replace(**overrides) if overrides else cfg


def _dealer_info(visibility: Visibility, text: str):
    if visibility is Visibility.TWO_UP:
        return parse_hand(text)
    if visibility is Visibility.ONE_UP:
        return parse_card(text)
    return None


@lru_cache(maxsize=256)
def _overall(config: VariantConfig) -> OverallResult:
    return overall_metrics(config)


@lru_cache(maxsize=32)
def _table(config: VariantConfig) -> StrategyTable:
    return build_strategy_table(config)


def _dec(x: Fraction, places: int = 7) -> str:
    return rational_round(x, places)


# -- one checker per fixture kind ----------------------------------------------


def _check_stage1(f: Fixture) -> FixtureResult:
    p = f.params
    res = stage1_evs(parse_layout(p["player"]), parse_layout(p["dealer"]), DeckState.fresh(_decks(p["decks"])), DealerPolicy.parse(p["dealer_rule"]))
    triple = res.hit if p["option"] == "hit" else res.stand
    got = {"win": triple.win, "tie": triple.tie, "loss": triple.loss, "ev": triple.ev}
    want = {k: Fraction(v) for k, v in f.expected.items()}
    return FixtureResult(f, got == want, _fmt(want), _fmt(got))


def _check_breakdown(f: Fixture) -> FixtureResult:
    p = f.params
    pl, dl = parse_layout(p["player"]), parse_layout(p["dealer"])
    deck = DeckState.fresh(_decks(p["decks"])).remove(*pl.cards, *dl.cards)
    rows = hit_breakdown(pl, dl, deck, DealerPolicy.parse(p["dealer_rule"]))
    denom = p["denominator"]
    bad = []
    for card, want in f.expected.items():
        w, t, l = (x * denom for x in rows[parse_card(card)])
        got = {"win": w, "tie": t, "loss": l}
        if any(got[k] != want[k] for k in want):
            bad.append(f"{card}: want {want}, got {({k: str(v) for k, v in got.items()})}")
    return FixtureResult(f, not bad, f"numerators over {denom}", "all match" if not bad else "; ".join(bad))


def _check_stage1_evs(f: Fixture) -> FixtureResult:
    p = f.params
    res = stage1_evs(parse_layout(p["player"]), parse_layout(p["dealer"]), DeckState.fresh(_decks(p["decks"])), DealerPolicy.parse(p["dealer_rule"]))
    got = {"ev_stand": res.ev_stand, "ev_hit": res.ev_hit}
    want = {k: Fraction(v) for k, v in f.expected.items()}
    return FixtureResult(f, got == want, _fmt(want), _fmt(got))


def _observable(f: Fixture) -> tuple[VariantConfig, ObservableState]:
    cfg = _config(f.params)
    return cfg, ObservableState(parse_hand(f.params["player"]), _dealer_info(cfg.visibility, f.params["dealer"]))


def _layout_key(layout: HandLayout) -> str:
    return f"{card_name(layout.first)},{card_name(layout.second)}"


def _check_weights(f: Fixture) -> FixtureResult:
    cfg, obs = _observable(f)
    got = {f"{_layout_key(w.player_layout)}|{_layout_key(w.dealer_layout)}": w.weight for w in layout_weights(obs, cfg)}
    want = {k: Fraction(v) for k, v in f.expected.items()}
    return FixtureResult(f, got == want, _fmt(want), _fmt(got))


def _check_cell(f: Fixture) -> FixtureResult:
    cfg, obs = _observable(f)
    cell = cell_evaluate(obs, cfg)
    ok = cell.ev_stand == Fraction(f.expected["ev_stand"]) and cell.ev_hit == Fraction(f.expected["ev_hit"])
    ok = ok and cell.decision.value == f.expected["decision"]
    got = f"ev_stand={fraction_str(cell.ev_stand)} ev_hit={fraction_str(cell.ev_hit)} decision={cell.decision.value}"
    want = " ".join(f"{k}={v}" for k, v in f.expected.items())
    return FixtureResult(f, ok, want, got)


def _check_deal(f: Fixture) -> FixtureResult:
    p = f.params
    player, dealer = parse_hand(p["player"]), parse_hand(p["dealer"])
    got = next(c.probability for c in deal_distribution(_decks(p["decks"])) if c.player_value == player and c.dealer_value == dealer)
    want = Fraction(f.expected["probability"])
    return FixtureResult(f, got == want, fraction_str(want), fraction_str(got))


def _check_contribution(f: Fixture) -> FixtureResult:
    cfg, obs = _observable(f)
    cell = cell_evaluate(obs, cfg)
    value = cell.mass * cell.ev
    ok = matches_printed(value, [f.expected["value"]], f.tolerance)
    return FixtureResult(f, ok, f.expected["value"], _dec(value, 9))


def _check_overall(f: Fixture) -> FixtureResult:
    cfg = _config(f.params)
    value = _overall(cfg).metrics()[f.params["metric"]]
    printed = f.expected["value"]
    ok = matches_printed(value, printed, f.tolerance)
    return FixtureResult(f, ok, " or ".join(printed), _dec(value), f"diff {float(value - Fraction(Decimal(printed[0]))):+.2e}")


def _check_minimum(f: Fixture) -> FixtureResult:
    cfg = _config(f.params)
    evs = {r: _overall(cfg.replace(dealer=DealerPolicy.parse(r))).ev for r in f.params["rules"]}
    lowest = min(evs, key=evs.get)
    return FixtureResult(f, lowest == f.expected["rule"], f.expected["rule"], lowest)


def _column(visibility: Visibility, label: str):
    return _dealer_info(visibility, label) if label != "-" else None


def compare_strategy(table: StrategyTable, rows: dict[str, str], columns: list[str], asterisks: Iterable[Iterable[str]]) -> dict[str, list]:
    """Cell-by-cell comparison with a printed table.

    Exact ties (both options equally good) accept either printed mark.
    """
    vis = table.config.visibility
    starred = {(p, c) for p, c in asterisks}
    out: dict[str, list] = {"decision": [], "asterisk": [], "tie": []}
    for player, marks in rows.items():
        hand = parse_hand(player)
        for col, mark in zip(columns, marks):
            cell = table.cell(hand, _column(vis, col))
            if cell.is_tie:
                out["tie"].append((player, col, mark, cell.decision.value))
            elif cell.decision.value != mark:
                out["decision"].append((player, col, mark, cell.decision.value))
            if cell.asterisk != ((player, col) in starred):
                out["asterisk"].append((player, col, (player, col) in starred, cell.asterisk))
    return out


def _check_strategy(f: Fixture) -> FixtureResult:
    table = _table(_config(f.params))
    exp = f.expected
    cmp = compare_strategy(table, exp["rows"], exp["columns"], exp["asterisks"])
    n = sum(len(m) for m in exp["rows"].values())
    ok = not cmp["decision"] and not cmp["asterisk"]
    detail = (
        f"{n} cells, {len(cmp['tie'])} exact ties accepted either way; "
        f"decision mismatches {cmp['decision']}; asterisk mismatches "
        + str([(p, c, "expected" if e else "extra") for p, c, e, _ in cmp["asterisk"]])
    )
    got = f"{len(cmp['decision'])} decision and {len(cmp['asterisk'])} asterisk mismatches"
    return FixtureResult(f, ok, "identical table", got, detail)


def _check_replacement_diff(f: Fixture) -> FixtureResult:
    base = _config(f.params)
    finite = _table(base.replace(decks=1))
    limit = _table(base.replace(decks=None))
    got = sorted(
        (k.player.label, k.dealer_label, theirs.value)
        for k, _, theirs in finite.diff(limit, ignore_ties=True)
    )
    want = sorted(tuple(change) for change in f.expected["changes"])
    stars = len(limit.asterisks())
    ok = got == want and stars == f.expected["asterisks"]
    return FixtureResult(f, ok, f"{want}, {f.expected['asterisks']} asterisks", f"{got}, {stars} asterisks")


CHECKERS: dict[str, Callable[[Fixture], FixtureResult]] = {
    "stage1": _check_stage1,
    "hit_breakdown": _check_breakdown,
    "stage1_evs": _check_stage1_evs,
    "weights": _check_weights,
    "cell": _check_cell,
    "deal_probability": _check_deal,
    "contribution": _check_contribution,
    "overall": _check_overall,
    "rule_minimum": _check_minimum,
    "strategy": _check_strategy,
    "replacement_diff": _check_replacement_diff,
}


def _fmt(d: dict) -> str:
    return ", ".join(f"{k}={fraction_str(v) if isinstance(v, Fraction) else v}" for k, v in d.items())


def run_fixtures(selected: Optional[Iterable[str]] = None, fixtures: Optional[list[Fixture]] = None) -> list[FixtureResult]:
    """Evaluate every fixture of the ``selected`` suites (default: all)."""
    fixtures = fixtures if fixtures is not None else load_fixtures()
    wanted = set(selected) if selected else None
    if wanted:
        unknown = wanted - set(suites(fixtures))
        if unknown:
            raise ValueError(f"unknown suite(s): {', '.join(sorted(unknown))}")
    out = []
    for f in fixtures:
        if wanted and f.suite not in wanted:
            continue
        out.append(CHECKERS[f.kind](f))
    return out
