"""Rendering of results as markdown, csv or json-lines.

Every command produces a list of flat records (dicts).  Fraction values are
written twice in the delimited formats: once as a rounded decimal and once
as an exact ``p/q`` string under the ``<name>_exact`` key, so a diff never
depends on the rounding mode.  Strategy tables additionally have a markdown
layout of their own with merged rows and H/S marks.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from fractions import Fraction
from typing import Optional, Sequence

from .cards import (
    DealerPolicy,
    HandState,
    PayoutSchedule,
    VariantConfig,
    Visibility,
    Weighting,
    parse_hand,
)
from .exact import fraction_str, rational_round
from .overall import OverallResult
from .stage1 import OutcomeTriple
from .strategy import (
    DEALER_HANDS,
    PLAYER_ROWS,
    UP_CARDS,
    CellResult,
    ObservableState,
    StrategyTable,
)


class Format(enum.Enum):
    MARKDOWN = "markdown"
    CSV = "csv"
    JSONL = "jsonl"

    @classmethod
    def parse(cls, text: str) -> "Format":
        t = text.strip().lower()
        if t in ("json-lines", "jsonlines", "json"):
            t = "jsonl"
        if t == "md":
            t = "markdown"
        return cls(t)


EXACT_SUFFIX = "_exact"


# -- configs -------------------------------------------------------------------


def decks_label(decks: Optional[int]) -> str:
    return "inf" if decks is None else str(decks)


def parse_decks(text: str) -> Optional[int]:
    t = str(text).strip().lower()
    if t in ("inf", "infinite", "infinity", "replacement", "with-replacement", "none"):
        return None
    n = int(t)
    if n < 1:
        raise ValueError("number of decks must be positive")
    return n


def config_record(config: VariantConfig) -> dict[str, object]:
    peek = config.peek_on_natural
    return {
        "visibility": config.visibility.value,
        "decks": decks_label(config.decks),
        "dealer_rule": config.dealer.name,
        "payout": config.payout.name,
        "peek": "" if peek is None else str(peek).lower(),
        "weighting": config.weighting.value,
    }


def config_from_record(rec: dict[str, str]) -> VariantConfig:
    peek = rec.get("peek", "")
    return VariantConfig(
        visibility=Visibility.parse(rec["visibility"]),
        decks=parse_decks(rec["decks"]),
        dealer=DealerPolicy.parse(rec["dealer_rule"]),
        payout=PayoutSchedule.parse(rec["payout"]),
        peek_on_natural=None if peek in ("", None) else peek == "true",
        weighting=Weighting.parse(rec.get("weighting", "product")),
    )


# -- records -------------------------------------------------------------------


def overall_record(result: OverallResult) -> dict[str, Fraction]:
    return dict(result.metrics())


def _triple(prefix: str, t: OutcomeTriple) -> dict[str, Fraction]:
    return {f"{prefix}_win": t.win, f"{prefix}_tie": t.tie, f"{prefix}_loss": t.loss}


def cell_record(cell: CellResult) -> dict[str, object]:
    obs = cell.observable
    return {
        "player": obs.player.label,
        "dealer": obs.dealer_label,
        "decision": cell.decision.value,
        "asterisk": cell.asterisk,
        "tie": cell.is_tie,
        "ev_hit": cell.ev_hit,
        "ev_stand": cell.ev_stand,
        **_triple("hit", cell.hit),
        **_triple("stand", cell.stand),
        "mass": cell.mass,
        "hit_groups": cell.layout_split[0],
        "stand_groups": cell.layout_split[1],
    }


def table_records(table: StrategyTable) -> list[dict[str, object]]:
    base = config_record(table.config)
    return [{**base, **cell_record(cell)} for cell in table]


def _plain(value: object, precision: int) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, Fraction):
        return rational_round(value, precision)
    if value is None:
        return ""
    return str(value)


def _expand(rec: dict[str, object], precision: int) -> dict[str, object]:
    """Decimal plus exact columns for every fraction-valued field."""
    out: dict[str, object] = {}
    for k, v in rec.items():
        if isinstance(v, Fraction):
            out[k] = rational_round(v, precision)
            out[k + EXACT_SUFFIX] = fraction_str(v)
        else:
            out[k] = v
    return out


def render_records(records: Sequence[dict[str, object]], fmt: Format, precision: int = 6, title: Optional[str] = None) -> str:
    if fmt is Format.MARKDOWN:
        return markdown_records(records, precision, title)
    if fmt is Format.CSV:
        return csv_records(records, precision)
    return jsonl_records(records, precision)


def markdown_records(records: Sequence[dict[str, object]], precision: int = 6, title: Optional[str] = None) -> str:
    lines = [f"### {title}", ""] if title else []
    if not records:
        return "\n".join(lines + ["(no rows)"]) + "\n"
    cols = list(records[0])
    lines.append("| " + " | ".join(cols) + " |")
    lines.append("|" + "|".join("---" for _ in cols) + "|")
    for rec in records:
        lines.append("| " + " | ".join(_plain(rec.get(c), precision) for c in cols) + " |")
    return "\n".join(lines) + "\n"


def markdown_fields(record: dict[str, object], precision: int = 6, title: Optional[str] = None) -> str:
    """One record as a two-column listing, fractions shown exactly as well."""
    lines = [f"### {title}", ""] if title else []
    lines += ["| field | value |", "|---|---|"]
    for k, v in record.items():
        text = _plain(v, precision)
        if isinstance(v, Fraction) and v.denominator != 1:
            text += f" ({fraction_str(v)})"
        lines.append(f"| {k} | {text} |")
    return "\n".join(lines) + "\n"


def csv_records(records: Sequence[dict[str, object]], precision: int = 6) -> str:
    rows = [_expand(r, precision) for r in records]
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: _plain(v, precision) for k, v in r.items()})
    return buf.getvalue()


def jsonl_records(records: Sequence[dict[str, object]], precision: int = 6) -> str:
    out = []
    for r in records:
        row = {k: (v if isinstance(v, (bool, int, float)) or v is None else str(v)) for k, v in _expand(r, precision).items()}
        out.append(json.dumps(row, ensure_ascii=False))
    return "\n".join(out) + ("\n" if out else "")


# -- strategy tables -----------------------------------------------------------


def _column_label(dealer) -> str:
    if isinstance(dealer, HandState):
        return str(dealer.total)
    if dealer is None:
        return "Decision"
    return "A" if dealer == 1 else str(dealer)


def _merged_rows(table: StrategyTable, players: Sequence[HandState], columns: Sequence) -> list[tuple[str, list[str]]]:
    """Consecutive players with identical marks share one row ("Hard 4 - 11")."""
    rows: list[tuple[list[HandState], list[str]]] = []
    for p in players:
        marks = [table.cell(p, c).mark for c in columns]
        if rows and rows[-1][1] == marks and rows[-1][0][-1].soft == p.soft:
            rows[-1][0].append(p)
        else:
            rows.append(([p], marks))
    out = []
    for group, marks in rows:
        kind = "Soft" if group[0].soft else "Hard"
        label = f"{kind} {group[0].total}" if len(group) == 1 else f"{kind} {group[0].total} - {group[-1].total}"
        out.append((label, marks))
    return out


def _grid(table: StrategyTable, columns: Sequence, header: str) -> list[str]:
    labels = [_column_label(c) for c in columns]
    lines = ["| " + header + " | " + " | ".join(labels) + " |", "|---" + "|:-:" * len(labels) + "|"]
    for section in (False, True):
        players = [p for p in PLAYER_ROWS if p.soft is section]
        for label, marks in _merged_rows(table, players, columns):
            lines.append(f"| {label} | " + " | ".join(marks) + " |")
    return lines


def markdown_table(table: StrategyTable) -> str:
    """Basic strategy in the usual printed layout.

    Player hands run down the rows with hard totals first; dealer
    information runs across.  With both dealer cards showing, hard and soft
    dealer hands get separate tables.  ``*`` marks a cell whose decision is
    not the best one for every way the visible values can be dealt.
    """
    cfg = table.config
    lines = [f"### Basic strategy ({cfg})", ""]
    if cfg.visibility is Visibility.TWO_UP:
        for soft_dealer, name in ((False, "hard"), (True, "soft")):
            cols = [d for d in DEALER_HANDS if d.soft is soft_dealer]
            lines += [f"Dealer {name} totals:", ""]
            lines += _grid(table, cols, "Player \\ Dealer")
            lines.append("")
    elif cfg.visibility is Visibility.ONE_UP:
        lines += _grid(table, UP_CARDS, "Player \\ Up-card")
        lines.append("")
    else:
        lines += _grid(table, [None], "Player")
        lines.append("")
    lines.append("H = hit, S = stand, * = not optimal for every underlying deal.")
    return "\n".join(lines) + "\n"


def render_table(table: StrategyTable, fmt: Format, precision: int = 6) -> str:
    if fmt is Format.MARKDOWN:
        return markdown_table(table)
    return render_records(table_records(table), fmt, precision)


def _dealer_from_label(visibility: Visibility, label: str):
    if visibility is Visibility.TWO_UP:
        return parse_hand(label)
    if visibility is Visibility.ONE_UP:
        return 1 if label in ("11", "A") else int(label)
    return None


def parse_table_csv(text: str) -> StrategyTable:
    """Rebuild a table from :func:`render_table` csv output, exactly."""
    reader = csv.DictReader(io.StringIO(text))
    table: Optional[StrategyTable] = None
    for row in reader:
        config = config_from_record(row)
        if table is None:
            table = StrategyTable(config)
        elif config != table.config:
            raise ValueError("rows from more than one variant")

        def frac(name: str) -> Fraction:
            return Fraction(row[name + EXACT_SUFFIX])

        def triple(prefix: str) -> OutcomeTriple:
            return OutcomeTriple(frac(f"{prefix}_win"), frac(f"{prefix}_tie"), frac(f"{prefix}_loss"))

        obs = ObservableState(parse_hand(row["player"]), _dealer_from_label(config.visibility, row["dealer"]))
        table.cells[obs] = CellResult(
            observable=obs,
            ev_hit=frac("ev_hit"),
            ev_stand=frac("ev_stand"),
            hit=triple("hit"),
            stand=triple("stand"),
            asterisk=row["asterisk"] == "true",
            mass=frac("mass"),
            layout_split=(int(row["hit_groups"]), int(row["stand_groups"])),
        )
    if table is None:
        raise ValueError("no rows to parse")
    return table

