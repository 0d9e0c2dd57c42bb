"""Seeded Monte Carlo playouts, used as an independent check on the exact engine.

Each round is dealt from a fresh shoe.  Six cards are drawn in order: two to
the player, the dealer's up-card and down-card, the player's hit card and the
dealer's hit card.  Cards that end up unused do not matter because every
ordering of a shuffled shoe is equally likely.

Trials are split into fixed-size batches.  Batch ``i`` uses a PCG64 generator
seeded from child ``i`` of ``numpy.random.SeedSequence(seed)``, so a report
depends only on (config, table, trials, seed, batch_size), not on how many
worker processes ran it.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .cards import ACE, SINGLE_DECK, HandState, VariantConfig, Visibility, dealer_must_hit
from .strategy import Decision, StrategyTable, build_strategy_table

ALGORITHM = "numpy.PCG64 via SeedSequence.spawn"
DEFAULT_BATCH = 1_000_000
N_CARDS = 6

# Hand states are coded as total + 22 * soft, so index 0..43 covers every state.
_CODES = 44


def _code(hand: HandState) -> int:
    return hand.total + 22 * hand.soft


@dataclass(frozen=True)
class SimReport:
    trials: int
    wins: int
    ties: int
    losses: int
    mean_payout: float
    std_error: float
    seed: int
    algorithm: str = ALGORITHM
    batch_size: int = DEFAULT_BATCH
    batches: int = 1

    def __post_init__(self) -> None:
        if self.wins + self.ties + self.losses != self.trials:
            raise ValueError("outcome counts must add up to the number of trials")

    @property
    def partitioning(self) -> str:
        return f"{self.batches} batches of up to {self.batch_size} trials, one spawned seed each"

    def within(self, exact: float, sigmas: float = 4.0) -> bool:
        return abs(self.mean_payout - exact) < sigmas * self.std_error

    def to_dict(self) -> dict[str, object]:
        d = asdict(self)
        d["partitioning"] = self.partitioning
        return d


@dataclass(frozen=True)
class _Rules:
    """Lookup arrays describing one variant and one strategy table."""

    visibility: Visibility
    decks: Optional[int]
    multiplier: float
    hits: np.ndarray  # [player code, dealer key] -> player hits
    dealer_hits: np.ndarray  # [dealer code] -> dealer must hit


def _rules(table: StrategyTable) -> _Rules:
    config = table.config
    width = {Visibility.TWO_UP: _CODES, Visibility.ONE_UP: 11, Visibility.NO_UP: 1}[config.visibility]
    hits = np.zeros((_CODES, width), dtype=bool)
    for key, cell in table.cells.items():
        if isinstance(key.dealer, HandState):
            col = _code(key.dealer)
        elif key.dealer is None:
            col = 0
        else:
            col = key.dealer
        hits[_code(key.player), col] = cell.decision is Decision.HIT
    dealer_hits = np.zeros(_CODES, dtype=bool)
    for total in range(4, 22):
        for soft in (False, True):
            if soft and total < 12:
                continue
            dealer_hits[total + 22 * soft] = dealer_must_hit(config.dealer, HandState(total, soft))
    return _Rules(
        config.visibility,
        config.decks,
        float(config.payout.natural_multiplier),
        hits,
        dealer_hits,
    )


def deal_cards(decks: Optional[int], n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` rows of six card values (1..10), each row from a fresh shoe."""
    if decks is None:
        p = np.array(SINGLE_DECK, dtype=float) / sum(SINGLE_DECK)
        return rng.choice(np.arange(1, 11, dtype=np.int8), size=(n, N_CARDS), p=p)
    counts = np.tile(np.array(SINGLE_DECK, dtype=np.int32) * decks, (n, 1))
    size = 52 * decks
    out = np.empty((n, N_CARDS), dtype=np.int8)
    rows = np.arange(n)
    for k in range(N_CARDS):
        pick = rng.integers(0, size - k, size=n)
        cum = np.cumsum(counts, axis=1)
        value = (cum <= pick[:, None]).sum(axis=1)
        out[:, k] = value + 1
        counts[rows, value] -= 1
    return out


def _hand(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    total = a.astype(np.int16) + b
    soft = ((a == ACE) | (b == ACE)) & (total + 10 <= 21)
    return np.where(soft, total + 10, total), soft


def _add(total: np.ndarray, soft: np.ndarray, card: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    base = total - 10 * soft + card
    new_soft = (soft | (card == ACE)) & (base + 10 <= 21)
    new_total = np.where(new_soft, base + 10, base)
    return new_total, new_soft, new_total > 21


def play_rounds(table: StrategyTable, cards: np.ndarray, rules: Optional[_Rules] = None) -> np.ndarray:
    """Payout of each round dealt as ``cards`` (columns as in the module doc)."""
    rules = rules or _rules(table)
    c = np.asarray(cards, dtype=np.int16)
    p_total, p_soft = _hand(c[:, 0], c[:, 1])
    d_total, d_soft = _hand(c[:, 2], c[:, 3])
    p_nat = (p_total == 21) & p_soft
    d_nat = (d_total == 21) & d_soft

    if rules.visibility is Visibility.TWO_UP:
        col = d_total + 22 * d_soft
    elif rules.visibility is Visibility.ONE_UP:
        col = c[:, 2]
    else:
        col = np.zeros(len(c), dtype=np.int16)
    p_code = np.minimum(p_total + 22 * p_soft, _CODES - 1)
    col = np.minimum(col, rules.hits.shape[1] - 1)
    hit = rules.hits[p_code, col]

    h_total, h_soft, bust = _add(p_total, p_soft, c[:, 4])
    final = np.where(hit, h_total, p_total)
    bust &= hit

    d_code = np.minimum(d_total + 22 * d_soft, _CODES - 1)
    dealer_draws = rules.dealer_hits[d_code]
    dd_total, _, d_bust = _add(d_total, d_soft, c[:, 5])
    dealer_final = np.where(dealer_draws, dd_total, d_total)
    d_bust &= dealer_draws

    pay = np.where(final > dealer_final, 1.0, np.where(final == dealer_final, 0.0, -1.0))
    pay = np.where(d_bust, 1.0, pay)
    pay = np.where(bust, -1.0, pay)
    # A hidden dealer natural beats any hand the player finishes with.
    pay = np.where(d_nat, -1.0, pay)
    pay = np.where(p_nat, np.where(d_nat, 0.0, rules.multiplier), pay)
    return pay


def _run_batch(args: tuple) -> tuple[int, int, int, float, float]:
    table, n, seed_seq = args
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    pay = play_rounds(table, deal_cards(table.config.decks, n, rng))
    return int((pay > 0).sum()), int((pay == 0).sum()), int((pay < 0).sum()), float(pay.sum()), float((pay * pay).sum())


def simulate(
    config: VariantConfig,
    table: Optional[StrategyTable] = None,
    trials: int = 1_000_000,
    seed: int = 0,
    batch_size: int = DEFAULT_BATCH,
    workers: int = 1,
) -> SimReport:
    """Play ``trials`` independent rounds with ``table``'s decisions."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if batch_size < 1:
        raise ValueError("batch_size must be at least 1")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if table is None:
        table = build_strategy_table(config)
    elif table.config.visibility is not config.visibility or table.config.decks != config.decks:
        raise ValueError("strategy table was built for a different variant")
    elif table.config != config:
        table = StrategyTable(config, table.cells)

    sizes = [batch_size] * (trials // batch_size)
    if trials % batch_size:
        sizes.append(trials % batch_size)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(table, n, s) for n, s in zip(sizes, children)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_batch, jobs))
    else:
        parts = [_run_batch(j) for j in jobs]

    wins = sum(p[0] for p in parts)
    ties = sum(p[1] for p in parts)
    losses = sum(p[2] for p in parts)
    total = sum(p[3] for p in parts)
    squares = sum(p[4] for p in parts)
    mean = total / trials
    var = (squares - trials * mean * mean) / (trials - 1) if trials > 1 else 0.0
    return SimReport(
        trials=trials,
        wins=wins,
        ties=ties,
        losses=losses,
        mean_payout=mean,
        std_error=math.sqrt(max(var, 0.0) / trials),
        seed=seed,
        batch_size=batch_size,
        batches=len(sizes),
    )
