"""How finite-shoe results approach the with-replacement model.

Every quantity of the pipeline is a concrete rational at each deck count
``n`` and at the replacement limit, so convergence is checked directly:
record the gap at each ``n`` and test that it shrinks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .cards import (
    ALL_LAYOUTS,
    DealerPolicy,
    DeckState,
    HandLayout,
    VariantConfig,
    evaluate_layout,
)
from .overall import deal_distribution, overall_metrics
from .stage1 import evaluate_coefficients_at, extract_stage1_coefficients, stage1_evs
from .strategy import ObservableState, build_strategy_table, layout_weights

DEFAULT_N_LIST = (1, 2, 4, 8, 16, 32, 64, 128, 256)
METRICS = ("P(W)", "P(L)", "P(T)", "E[X]")


@dataclass(frozen=True)
class ConvergenceReport:
    quantity: str
    samples: tuple[tuple[int, Fraction], ...]
    limit: Fraction
    strategy_stabilized_at: Optional[int] = None

    def __post_init__(self) -> None:
        ns = [n for n, _ in self.samples]
        if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("samples must be non-empty and strictly increasing in n")

    @property
    def gaps(self) -> list[tuple[int, Fraction]]:
        return [(n, abs(v - self.limit)) for n, v in self.samples]

    @property
    def max_n_gap(self) -> Fraction:
        return self.gaps[-1][1]

    def doubling_ratios(self, from_n: int = 1) -> list[tuple[int, Optional[Fraction]]]:
        """``gap(2k) / gap(k)`` for each ``k >= from_n`` whose double was sampled.

        ``None`` marks a pair where ``gap(k)`` is already zero.
        """
        gaps = dict(self.gaps)
        out = []
        for k, g in self.gaps:
            if k >= from_n and 2 * k in gaps:
                out.append((k, None if g == 0 else gaps[2 * k] / g))
        return out

    def shrinks_by(self, ratio: Fraction, from_n: int = 8) -> bool:
        return all(r is None or r <= ratio for _, r in self.doubling_ratios(from_n))


@dataclass
class DeckSweep:
    """Overall metrics of one variant across deck counts."""

    config: VariantConfig
    n_list: tuple[int, ...]
    reports: dict[str, ConvergenceReport]
    strategy_matches: dict[int, bool] = field(default_factory=dict)

    @property
    def stabilized_at(self) -> Optional[int]:
        """First swept ``n`` from which every table equals the limit table."""
        first = None
        for n in self.n_list:
            if self.strategy_matches[n]:
                if first is None:
                    first = n
            else:
                first = None
        return first

    def rows(self) -> list[dict[str, object]]:
        out = []
        for i, n in enumerate(self.n_list):
            row: dict[str, object] = {"n": n}
            for name, rep in self.reports.items():
                value = rep.samples[i][1]
                row[name] = value
                row[f"gap {name}"] = abs(value - rep.limit)
            row["same strategy as limit"] = self.strategy_matches[n]
            out.append(row)
        return out


def sweep_decks(config: VariantConfig, n_list: Sequence[int] = DEFAULT_N_LIST) -> DeckSweep:
    """Rebuild the strategy and overall metrics at each ``n`` and at the limit.

    The deck setting of ``config`` is ignored.
    """
    ns = tuple(n_list)
    if not ns:
        raise ValueError("n_list must not be empty")
    if any(not isinstance(n, int) or n < 1 for n in ns):
        raise ValueError("deck counts must be positive integers")
    if list(ns) != sorted(set(ns)):
        raise ValueError("n_list must be strictly increasing")

    limit_cfg = config.replace(decks=None)
    limit_table = build_strategy_table(limit_cfg)
    limit = overall_metrics(limit_cfg, limit_table).metrics()

    values: dict[str, list[tuple[int, Fraction]]] = {m: [] for m in METRICS}
    matches = {}
    for n in ns:
        cfg = config.replace(decks=n)
        table = build_strategy_table(cfg)
        for name, v in overall_metrics(cfg, table).metrics().items():
            values[name].append((n, v))
        matches[n] = table.same_strategy(limit_table)
    sweep = DeckSweep(config, ns, {}, matches)
    stab = sweep.stabilized_at
    tag = config.visibility.value
    sweep.reports = {
        m: ConvergenceReport(f"{m}/{tag}", tuple(values[m]), limit[m], stab) for m in METRICS
    }
    return sweep


# -- limits of the building blocks ---------------------------------------------


@dataclass(frozen=True)
class LimitCheck:
    quantity: str
    report: ConvergenceReport
    monotone: bool
    formula_agrees: bool = True

    @property
    def passed(self) -> bool:
        return self.monotone and self.formula_agrees


TAIL = 3
FINAL_GAP = Fraction(1, 1000)


def _monotone(rep: ConvergenceReport, tail: int = TAIL, final_gap: Fraction = FINAL_GAP) -> bool:
    """Gap shrinks over the last ``tail`` samples and ends below ``final_gap``.

    Some values overshoot the limit at small ``n`` and approach it from the
    other side, and a few sit by coincidence close to the limit at ``n = 1``,
    so only the tail of the sweep is required to be monotone.
    """
    gaps = [g for _, g in rep.gaps]
    end = gaps[-tail:]
    return all(b <= a for a, b in zip(end, end[1:])) and gaps[-1] < final_gap


def _stage1_checks(pairs: Iterable[tuple[HandLayout, HandLayout]], policy: DealerPolicy, ns: tuple[int, ...]) -> list[LimitCheck]:
    out = []
    for pl, dl in pairs:
        coeffs = extract_stage1_coefficients(pl, dl, policy)
        limit = stage1_evs(pl, dl, DeckState.with_replacement(), policy)
        agrees = evaluate_coefficients_at(coeffs, None) == limit
        per_n = []
        for n in ns:
            res = stage1_evs(pl, dl, DeckState.fresh(n), policy)
            agrees = agrees and evaluate_coefficients_at(coeffs, n) == res
            per_n.append(res)
        for option in ("stand", "hit"):
            for i, outcome in enumerate(("W", "T", "L")):
                rep = ConvergenceReport(
                    f"stage1 {pl} v {dl} {option} P({outcome})",
                    tuple((n, getattr(r, option).as_tuple()[i]) for n, r in zip(ns, per_n)),
                    getattr(limit, option).as_tuple()[i],
                )
                out.append(LimitCheck(rep.quantity, rep, _monotone(rep), agrees))
    return out


def _weight_checks(observables: Iterable[ObservableState], base: VariantConfig, ns: tuple[int, ...]) -> list[LimitCheck]:
    out = []
    for obs in observables:
        limit = {(w.player_layout, w.dealer_layout): w.weight for w in layout_weights(obs, base.replace(decks=None))}
        per_n = [{(w.player_layout, w.dealer_layout): w.weight for w in layout_weights(obs, base.replace(decks=n))} for n in ns]
        for key, lim in limit.items():
            rep = ConvergenceReport(
                f"weight {obs}: {key[0]} v {key[1]}",
                tuple((n, w.get(key, Fraction(0))) for n, w in zip(ns, per_n)),
                lim,
            )
            out.append(LimitCheck(rep.quantity, rep, _monotone(rep)))
    return out


def _deal_checks(ns: tuple[int, ...]) -> list[LimitCheck]:
    limit = {(c.player_value, c.dealer_value): c.probability for c in deal_distribution(None)}
    per_n = [{(c.player_value, c.dealer_value): c.probability for c in deal_distribution(n)} for n in ns]
    out = []
    for key, lim in limit.items():
        rep = ConvergenceReport(
            f"deal {key[0]} v {key[1]}",
            tuple((n, d.get(key, Fraction(0))) for n, d in zip(ns, per_n)),
            lim,
        )
        out.append(LimitCheck(rep.quantity, rep, _monotone(rep)))
    return out


@dataclass
class LimitReport:
    checks: list[LimitCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[LimitCheck]:
        return [c for c in self.checks if not c.passed]


def verify_limits(
    layout_pairs: Optional[Iterable[tuple[HandLayout, HandLayout]]] = None,
    observables: Optional[Iterable[ObservableState]] = None,
    n_list: Sequence[int] = DEFAULT_N_LIST,
    config: VariantConfig = VariantConfig(),
    include_deals: bool = True,
) -> LimitReport:
    """Check that the pipeline's building blocks move monotonically toward
    their replacement values.

    Stage-one results are also checked against the closed-form coefficients
    at every ``n`` and at the limit.  ``None`` samples mean every playable
    layout pair and every two-card observable of ``config``'s variant.
    """
    ns = tuple(n_list)
    if layout_pairs is None:
        playable = [l for l in ALL_LAYOUTS if not evaluate_layout(l).natural]
        layout_pairs = [(p, d) for p in playable for d in playable]
    if observables is None:
        from .strategy import observables as all_observables

        observables = all_observables(config.visibility)
    checks = _stage1_checks(layout_pairs, config.dealer, ns)
    checks += _weight_checks(observables, config, ns)
    if include_deals:
        checks += _deal_checks(ns)
    return LimitReport(checks)
