"""``hitstand`` command-line interface.

Exit codes: 0 on success, 1 when a reference fixture does not match and 2
for usage errors, which include unknown keys in a config file.
"""

from __future__ import annotations

import configparser
import logging
import sys
from pathlib import Path
from typing import Callable, Optional

import click

from . import report as rep
from .asymptotics import DEFAULT_N_LIST, sweep_decks
from .cards import (
    DealerPolicy,
    PayoutSchedule,
    VariantConfig,
    Visibility,
    Weighting,
    parse_card,
    parse_hand,
    parse_layout,
)
from .overall import SWEEP_RULES, dealer_rule_sweep, overall_metrics, table_value
from .stage1 import stage1_evs
from .strategy import ObservableState, build_strategy_table, cell_evaluate, layout_weights

log = logging.getLogger("hitstand")

ALL = "all"


# -- parameter types -----------------------------------------------------------


class _Parsed(click.ParamType):
    """Wrap one of the library's ``parse`` functions as a click type."""

    def __init__(self, name: str, parse: Callable[[str], object]):
        self.name = name
        self._parse = parse

    def convert(self, value, param, ctx):
        if not isinstance(value, str):
            return value
        try:
            return self._parse(value)
        except (ValueError, KeyError) as exc:
            self.fail(f"{value!r}: {exc}", param, ctx)


DECKS = _Parsed("decks", rep.parse_decks)
DEALER = _Parsed("rule", DealerPolicy.parse)
PAYOUT = _Parsed("payout", PayoutSchedule.parse)
WEIGHTING = _Parsed("weighting", Weighting.parse)
FORMAT = _Parsed("format", rep.Format.parse)
HAND = _Parsed("hand", parse_hand)
LAYOUT = _Parsed("layout", parse_layout)


def _visibility_or_all(text: str):
    return ALL if text.strip().lower() == ALL else Visibility.parse(text)


VISIBILITY = _Parsed("visibility", Visibility.parse)
VISIBILITIES = _Parsed("visibility", _visibility_or_all)


def _n_list(text: str) -> tuple[int, ...]:
    ns = tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    if not ns or any(n < 1 for n in ns) or list(ns) != sorted(set(ns)):
        raise ValueError("expected a strictly increasing list of positive integers")
    return ns


N_LIST = _Parsed("n-list", _n_list)


# -- shared options ------------------------------------------------------------


def _variant_options(all_visibilities: bool = False, decks: bool = True, rule_flags: tuple[str, ...] = ("--dealer", "--dealer-rule")):
    def wrap(f):
        opts = [
            click.option(*rule_flags, "dealer_rule", type=DEALER, default="H17", show_default=True, help="Dealer rule: S15..H18, always-hit or always-stand."),
            click.option("--payout", type=PAYOUT, default="3:2", show_default=True, help="Natural payout, e.g. 3:2 or 6:5."),
            click.option("--peek/--no-peek", "peek", default=None, help="Whether a hidden dealer natural is revealed before the player acts (default depends on the variant)."),
            click.option("--weighting", type=WEIGHTING, default="product", show_default=True, help="Layout weighting inside a strategy cell: product or joint."),
        ]
        if decks:
            opts.append(click.option("--decks", type=DECKS, default="1", show_default=True, help="Number of decks, or 'inf' for drawing with replacement."))
        if all_visibilities:
            opts.append(click.option("--visibility", type=VISIBILITIES, default=ALL, show_default=True, help="two-up, one-up, no-up or all."))
        else:
            opts.append(click.option("--visibility", type=VISIBILITY, default="two-up", show_default=True, help="two-up, one-up or no-up."))
        for opt in reversed(opts):
            f = opt(f)
        return f

    return wrap


def _output_options(f):
    f = click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write to this file instead of stdout.")(f)
    f = click.option("--precision", type=click.IntRange(0, 30), default=6, show_default=True, help="Decimals in rendered values.")(f)
    f = click.option("--format", "fmt", type=FORMAT, default="markdown", show_default=True, help="markdown, csv or jsonl.")(f)
    return f


def _config(visibility: Visibility, decks, dealer_rule, payout, peek, weighting) -> VariantConfig:
    return VariantConfig(visibility, decks, dealer_rule, payout, peek, weighting)


def _visibilities(choice) -> list[Visibility]:
    return list(Visibility) if choice == ALL else [choice]


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        click.echo(text, nl=False)
    else:
        output.write_text(text, encoding="utf-8")
        log.info("wrote %s", output)


# -- config file ---------------------------------------------------------------


def _load_config_file(path: str, group: click.Group) -> dict[str, dict[str, str]]:
    """Turn an INI file into click's ``default_map``.

    Keys under ``[defaults]`` apply to every command that has the option;
    a section named after a command applies to that command only.  Keys use
    option names with dashes or underscores.  Anything unknown is an error.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise click.UsageError(f"cannot parse {path}: {exc}") from None

    def params(cmd: click.Command) -> dict[str, str]:
        """Config key -> parameter name, from each option's long flags."""
        keys = {}
        for p in cmd.params:
            if not p.name:
                continue
            keys[p.name] = p.name
            for opt in p.opts:
                if opt.startswith("--"):
                    keys[opt[2:].replace("-", "_")] = p.name
        return keys

    commands = group.commands
    out: dict[str, dict[str, str]] = {name: {} for name in commands}
    for section in parser.sections():
        if section != "defaults" and section not in commands:
            raise click.UsageError(f"{path}: unknown section [{section}]")
    if parser.has_section("defaults"):
        for key, value in parser.items("defaults"):
            name = key.replace("-", "_")
            resolved = {c: params(cmd).get(name) for c, cmd in commands.items()}
            meanings = [r for r in resolved.values() if r]
            if not meanings:
                raise click.UsageError(f"{path}: unknown key {key!r} in [defaults]")
            # "dealer" is the dealer rule almost everywhere but the visible
            # dealer hand for `cell`; a default follows the common meaning.
            common = max(set(meanings), key=meanings.count)
            for c, cmd in commands.items():
                if common in params(cmd).values():
                    out[c][common] = value
    for section in parser.sections():
        if section == "defaults":
            continue
        known = params(commands[section])
        for key, value in parser.items(section):
            name = key.replace("-", "_")
            if name not in known:
                raise click.UsageError(f"{path}: unknown key {key!r} in [{section}]")
            out[section][known[name]] = value
    return out


# -- commands ------------------------------------------------------------------


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False), default=None, help="INI file with a [defaults] section and per-command sections.")
@click.option("-v", "--verbose", count=True, help="Log progress (-v info, -vv debug) to stderr.")
@click.pass_context
def cli(ctx: click.Context, config_file: Optional[str], verbose: int) -> None:
    """Exact hit/stand strategy and expectation for single-decision blackjack."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if config_file:
        ctx.default_map = _load_config_file(config_file, cli)


@cli.command()
@_variant_options()
@_output_options
def strategy(visibility, decks, dealer_rule, payout, peek, weighting, fmt, precision, output):
    """Basic strategy table for one variant."""
    table = build_strategy_table(_config(visibility, decks, dealer_rule, payout, peek, weighting))
    _emit(rep.render_table(table, fmt, precision), output)


@cli.command()
@_variant_options(all_visibilities=True)
@click.option("--true-value", is_flag=True, help="Also report the value of playing each table deal by deal.")
@_output_options
def overall(visibility, decks, dealer_rule, payout, peek, weighting, true_value, fmt, precision, output):
    """Win, loss and tie probabilities and expected payout."""
    records = []
    for vis in _visibilities(visibility):
        cfg = _config(vis, decks, dealer_rule, payout, peek, weighting)
        table = build_strategy_table(cfg)
        row = {**rep.config_record(cfg), **rep.overall_record(overall_metrics(cfg, table))}
        if true_value:
            row["E[X] played"] = table_value(table).ev
        records.append(row)
    _emit(rep.render_records(records, fmt, precision, "Overall results"), output)


def _rule_records(grid) -> list[dict[str, object]]:
    records = []
    for cfg, results in grid:
        threshold = {k: r.ev for k, r in results.items() if k[0] in "HS"}
        lowest = min(threshold, key=threshold.get) if threshold else None
        for rule, res in results.items():
            records.append({**rep.config_record(cfg.replace(dealer=DealerPolicy.parse(rule))), **rep.overall_record(res), "lowest threshold rule": rule == lowest})
    return records


@cli.command("sweep-rules")
@_variant_options(all_visibilities=True)
@click.option("--figures", type=click.Path(file_okay=False, path_type=Path), default=None, help="Directory for the bar chart.")
@_output_options
def sweep_rules(visibility, decks, dealer_rule, payout, peek, weighting, figures, fmt, precision, output):
    """Expected payout under each dealer rule, re-optimising the strategy each time."""
    grid = []
    for vis in _visibilities(visibility):
        cfg = _config(vis, decks, dealer_rule, payout, peek, weighting)
        grid.append((cfg, dealer_rule_sweep(vis, decks, payout, SWEEP_RULES, peek, weighting)))
    _emit(rep.render_records(_rule_records(grid), fmt, precision, "Expectation by dealer rule"), output)
    if figures:
        from .plotting import plot_rule_sweep

        figures.mkdir(parents=True, exist_ok=True)
        path = plot_rule_sweep({cfg.visibility.value: res for cfg, res in grid}, figures / "rule-sweep.png")
        click.echo(f"figure: {path}", err=True)


def _deck_records(sweeps) -> list[dict[str, object]]:
    records = []
    for vis, sweep in sweeps.items():
        for row in sweep.rows():
            records.append({"visibility": vis, **row, "n": str(row["n"])})
        limit = {name: r.limit for name, r in sweep.reports.items()}
        records.append({"visibility": vis, "n": "inf", **{k: v for name, v in limit.items() for k, v in ((name, v), (f"gap {name}", v - v))}, "same strategy as limit": True})
    return records


@cli.command("sweep-decks")
@_variant_options(all_visibilities=True, decks=False)
@click.option("--decks", "decks_given", default=None, hidden=True, expose_value=True)
@click.option("--n-list", type=N_LIST, default=",".join(map(str, DEFAULT_N_LIST)), show_default=True, help="Comma-separated deck counts.")
@click.option("--figures", type=click.Path(file_okay=False, path_type=Path), default=None, help="Directory for the convergence plot.")
@_output_options
def sweep_decks_cmd(visibility, dealer_rule, payout, peek, weighting, decks_given, n_list, figures, fmt, precision, output):
    """Overall results against the number of decks, next to the with-replacement limit."""
    if decks_given is not None:
        raise click.UsageError("sweep-decks chooses the deck counts itself; use --n-list (the limit is always included)")
    sweeps = {}
    for vis in _visibilities(visibility):
        cfg = _config(vis, 1, dealer_rule, payout, peek, weighting)
        sweeps[vis.value] = sweep_decks(cfg, n_list)
        log.info("%s: strategy equals the limit table from n=%s", vis.value, sweeps[vis.value].stabilized_at)
    title = "Deck sweep; strategy stabilises at " + ", ".join(f"{v}: n={s.stabilized_at}" for v, s in sweeps.items())
    _emit(rep.render_records(_deck_records(sweeps), fmt, precision, title), output)
    if figures:
        from .plotting import plot_deck_sweep

        figures.mkdir(parents=True, exist_ok=True)
        path = plot_deck_sweep(sweeps, figures / "deck-sweep.png")
        click.echo(f"figure: {path}", err=True)


@cli.command("verify-paper")
@click.option("--suite", "suites", multiple=True, help="Only these fixture suites (repeatable).")
@click.option("--list", "list_suites", is_flag=True, help="List suite names and exit.")
@click.option("--fixtures", type=click.Path(exists=True, dir_okay=False), default=None, help="Alternative fixture file.")
@_output_options
def verify_fixtures(suites, list_suites, fixtures, fmt, precision, output):
    """Diff computed results against the bundled reference fixtures."""
    from .verify import load_fixtures, run_fixtures, suites as suite_names

    loaded = load_fixtures(fixtures)
    if list_suites:
        click.echo("\n".join(suite_names(loaded)))
        return
    try:
        results = run_fixtures(suites or None, loaded)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--suite") from None
    records = [
        {"id": r.id, "suite": r.fixture.suite, "passed": r.passed, "expected": r.expected, "actual": r.actual, "source": r.fixture.source}
        for r in results
    ]
    failed = sum(not r.passed for r in results)
    _emit(rep.render_records(records, fmt, precision, "Reference fixtures"), output)
    click.echo(f"{len(results) - failed} passed, {failed} failed", err=True)
    for r in results:
        if not r.passed and r.detail:
            click.echo(f"  {r.id}: {r.detail}", err=True)
    if failed:
        sys.exit(1)


@cli.command()
@_variant_options()
@click.option("--trials", type=click.IntRange(min=1), default=1_000_000, show_default=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--batch-size", type=click.IntRange(min=1), default=1_000_000, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@_output_options
def simulate(visibility, decks, dealer_rule, payout, peek, weighting, trials, seed, batch_size, workers, fmt, precision, output):
    """Monte Carlo playout of the basic strategy, next to the exact values."""
    from fractions import Fraction

    from .simulate import simulate as run

    cfg = _config(visibility, decks, dealer_rule, payout, peek, weighting)
    table = build_strategy_table(cfg)
    sim = run(cfg, table, trials, seed, batch_size, workers)
    exact = overall_metrics(cfg, table).ev
    played = table_value(table).ev
    row = {**rep.config_record(cfg), **sim.to_dict()}
    row["mean_payout"] = f"{sim.mean_payout:.{precision}f}"
    row["std_error"] = f"{sim.std_error:.{precision}f}"
    row["exact E[X]"] = exact
    row["exact E[X] played"] = played
    row["z vs played"] = f"{(sim.mean_payout - float(Fraction(played))) / sim.std_error:+.3f}" if sim.std_error else "n/a"
    _emit(rep.render_records([row], fmt, precision, "Simulation"), output)


@cli.command()
@click.option("--player-layout", type=LAYOUT, required=True, help="Player's two cards, e.g. A,2.")
@click.option("--dealer-layout", type=LAYOUT, required=True, help="Dealer's two cards, e.g. 6,8.")
@click.option("--decks", type=DECKS, default="1", show_default=True)
@click.option("--dealer", "--dealer-rule", "dealer_rule", type=DEALER, default="H17", show_default=True)
@_output_options
def stage1(player_layout, dealer_layout, decks, dealer_rule, fmt, precision, output):
    """Outcome probabilities when both layouts are known."""
    try:
        res = stage1_evs(player_layout, dealer_layout, VariantConfig(decks=decks).deck(), dealer_rule)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    records = [
        {"player": str(player_layout), "dealer": str(dealer_layout), "option": name, "win": t.win, "tie": t.tie, "loss": t.loss, "ev": t.ev}
        for name, t in (("stand", res.stand), ("hit", res.hit))
    ]
    _emit(rep.render_records(records, fmt, precision, "Known layouts"), output)


@cli.command()
@_variant_options(rule_flags=("--dealer-rule",))
@click.option("--player", type=HAND, required=True, help="Player hand value, e.g. soft13.")
@click.option("--dealer", "dealer_info", default=None, help="Visible dealer information: a hand value (two-up) or an up-card (one-up).")
@_output_options
def cell(visibility, decks, dealer_rule, payout, peek, weighting, player, dealer_info, fmt, precision, output):
    """Hit and stand expectations for one strategy cell."""
    cfg = _config(visibility, decks, dealer_rule, payout, peek, weighting)
    try:
        info = _dealer_info(visibility, dealer_info)
        obs = ObservableState(player, info)
        result = cell_evaluate(obs, cfg)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    row = {**rep.config_record(cfg), **rep.cell_record(result)}
    if fmt is rep.Format.MARKDOWN:
        text = rep.markdown_fields(row, precision, f"Cell {obs}")
        weights = [{"player layout": str(w.player_layout), "dealer layout": str(w.dealer_layout), "weight": w.weight} for w in layout_weights(obs, cfg)]
        text += "\n" + rep.render_records(weights, fmt, precision, "Layout weights")
    else:
        text = rep.render_records([row], fmt, precision)
    _emit(text, output)


def _dealer_info(visibility: Visibility, text: Optional[str]):
    if visibility is Visibility.NO_UP:
        if text not in (None, "", "-"):
            raise ValueError("no dealer card is visible in the no-up variant")
        return None
    if text is None:
        raise ValueError("--dealer is required when a dealer card is visible")
    if visibility is Visibility.TWO_UP:
        return parse_hand(text)
    return parse_card(text)


@cli.command("report")
@_variant_options(decks=True, all_visibilities=True)
@click.option("--n-list", type=N_LIST, default=",".join(map(str, DEFAULT_N_LIST)), show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), required=True, help="Directory for tables and figures.")
@click.option("--format", "fmt", type=FORMAT, default="csv", show_default=True, help="Delimited format: csv or jsonl.")
@click.option("--precision", type=click.IntRange(0, 30), default=6, show_default=True)
def report_cmd(visibility, decks, dealer_rule, payout, peek, weighting, n_list, out_dir, fmt, precision):
    """Write strategy tables, overall results, both sweeps and their figures to a directory."""
    from .plotting import plot_deck_sweep, plot_rule_sweep

    if fmt is rep.Format.MARKDOWN:
        raise click.BadParameter("the report writes delimited files; use csv or jsonl", param_hint="--format")
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = fmt.value
    written = []

    def write(name: str, text: str) -> None:
        path = out_dir / name
        path.write_text(text, encoding="utf-8")
        written.append(path)

    vis_list = _visibilities(visibility)
    overall_rows = []
    grid = []
    sweeps = {}
    for vis in vis_list:
        cfg = _config(vis, decks, dealer_rule, payout, peek, weighting)
        table = build_strategy_table(cfg)
        write(f"strategy-{vis.value}.{ext}", rep.render_table(table, fmt, precision))
        write(f"strategy-{vis.value}.md", rep.markdown_table(table))
        overall_rows.append({**rep.config_record(cfg), **rep.overall_record(overall_metrics(cfg, table))})
        grid.append((cfg, dealer_rule_sweep(vis, decks, payout, SWEEP_RULES, peek, weighting)))
        sweeps[vis.value] = sweep_decks(cfg, n_list)
    write(f"overall.{ext}", rep.render_records(overall_rows, fmt, precision))
    write(f"sweep-rules.{ext}", rep.render_records(_rule_records(grid), fmt, precision))
    write(f"sweep-decks.{ext}", rep.render_records(_deck_records(sweeps), fmt, precision))
    written.append(plot_rule_sweep({cfg.visibility.value: res for cfg, res in grid}, out_dir / "rule-sweep.png"))
    written.append(plot_deck_sweep(sweeps, out_dir / "deck-sweep.png"))
    for path in written:
        click.echo(str(path))


def main(argv: Optional[list[str]] = None) -> None:
    cli.main(args=argv, prog_name="hitstand")


if __name__ == "__main__":
    main()
