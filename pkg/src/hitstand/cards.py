"""Card values, decks, hands, dealer rules and variant configuration.

Card values run 1..10.  The ace is stored as 1 and promoted to 11 by hand
evaluation; ten, jack, queen and king share the value 10, so a fresh deck
holds 4 of each value 1..9 and 16 tens per deck.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

ACE = 1
TEN = 10
VALUES = tuple(range(1, 11))

# Cards per value in a single deck (index 0 <-> ace).
SINGLE_DECK = (4, 4, 4, 4, 4, 4, 4, 4, 4, 16)
# Number of distinct ranks behind each value.
RANKS_PER_VALUE = (1, 1, 1, 1, 1, 1, 1, 1, 1, 4)


class DeckError(ValueError):
    """Raised when removing cards that are not in the deck."""


def check_value(card: int) -> int:
    if not isinstance(card, int) or not 1 <= card <= 10:
        raise ValueError(f"card value must be in 1..10, got {card!r}")
    return card


@dataclass(frozen=True)
class DeckState:
    """Remaining cards of an ``n``-deck shoe, or the with-replacement model.

    ``decks=None`` selects the with-replacement model: every draw uses the
    single-deck proportions no matter what has been dealt.
    """

    decks: Optional[int]
    counts: tuple[int, ...] = field(default=SINGLE_DECK)

    def __post_init__(self) -> None:
        if self.decks is not None and self.decks < 1:
            raise ValueError("number of decks must be positive")
        if len(self.counts) != 10 or any(c < 0 for c in self.counts):
            raise DeckError(f"invalid card counts {self.counts}")

    @classmethod
    def fresh(cls, decks: Optional[int]) -> "DeckState":
        if decks is None:
            return cls(None, SINGLE_DECK)
        if decks < 1:
            raise ValueError("number of decks must be positive")
        return cls(decks, tuple(c * decks for c in SINGLE_DECK))

    @classmethod
    def with_replacement(cls) -> "DeckState":
        return cls(None, SINGLE_DECK)

    @property
    def replacement(self) -> bool:
        return self.decks is None

    @property
    def size(self) -> int:
        return sum(self.counts)

    def remove(self, *cards: int) -> "DeckState":
        if self.replacement:
            for c in cards:
                check_value(c)
            return self
        counts = list(self.counts)
        for c in cards:
            check_value(c)
            if counts[c - 1] == 0:
                raise DeckError(f"no card of value {c} left to remove")
            counts[c - 1] -= 1
        return DeckState(self.decks, tuple(counts))

    def count(self, card: int) -> int:
        return self.counts[card - 1]

    def distribution(self) -> list[tuple[int, Fraction]]:
        total = self.size
        return [(v, Fraction(self.counts[v - 1], total)) for v in VALUES]

    def __str__(self) -> str:
        return "with-replacement" if self.replacement else f"{self.decks}-deck"


def draw_distribution(deck: DeckState, removed: Iterable[int] = ()) -> list[tuple[int, Fraction]]:
    """Probability of each next card value after ``removed`` have been dealt."""
    return deck.remove(*removed).distribution()


@dataclass(frozen=True, order=True)
class HandState:
    total: int
    soft: bool = False
    natural: bool = False

    def __post_init__(self) -> None:
        if not 4 <= self.total <= 21:
            raise ValueError(f"hand total out of range: {self.total}")
        if self.soft and self.total < 12:
            raise ValueError("a soft hand totals at least 12")
        if self.natural and not (self.total == 21 and self.soft):
            raise ValueError("a natural is a soft 21")

    @property
    def label(self) -> str:
        if self.natural:
            return "natural"
        return f"{'soft' if self.soft else 'hard'} {self.total}"

    def __str__(self) -> str:
        return self.label


def hard(total: int) -> HandState:
    return HandState(total, False)


def soft(total: int) -> HandState:
    return HandState(total, True)


NATURAL = HandState(21, True, True)

_HAND_RE = re.compile(r"^\s*(hard|soft|h|s)\s*[-_ ]?\s*(\d+)\s*$", re.IGNORECASE)


def parse_hand(text: str) -> HandState:
    """Parse ``"soft13"``, ``"hard 14"``, ``"S17"`` or ``"natural"``."""
    if text.strip().lower() in ("natural", "bj", "blackjack"):
        return NATURAL
    m = _HAND_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse hand {text!r}")
    kind, total = m.group(1).lower(), int(m.group(2))
    return HandState(total, kind.startswith("s"))


@dataclass(frozen=True, order=True)
class HandLayout:
    """Unordered pair of card values, stored with ``first <= second``."""

    first: int
    second: int

    def __post_init__(self) -> None:
        check_value(self.first)
        check_value(self.second)
        if self.first > self.second:
            a, b = self.second, self.first
            object.__setattr__(self, "first", a)
            object.__setattr__(self, "second", b)

    @property
    def cards(self) -> tuple[int, int]:
        return (self.first, self.second)

    @property
    def is_pair(self) -> bool:
        return self.first == self.second

    @property
    def category(self) -> str:
        tens = self.cards.count(TEN)
        if tens == 2:
            return "both-ten"
        if tens == 1:
            return "distinct-one-ten"
        return "pair-no-ten" if self.is_pair else "distinct-no-ten"

    def __str__(self) -> str:
        return f"({card_name(self.first)},{card_name(self.second)})"


def card_name(card: int) -> str:
    return "A" if card == ACE else str(card)


def parse_card(text: str) -> int:
    t = text.strip().upper()
    if t in ("A", "ACE", "11"):
        return ACE
    if t in ("T", "J", "Q", "K"):
        return TEN
    return check_value(int(t))


def parse_layout(text: str) -> HandLayout:
    """Parse ``"A,2"``, ``"6 8"`` or ``"10-4"`` into a layout."""
    parts = [p for p in re.split(r"[,\s/-]+", text.strip()) if p]
    if len(parts) != 2:
        raise ValueError(f"a layout has two cards, got {text!r}")
    return HandLayout(parse_card(parts[0]), parse_card(parts[1]))


ALL_LAYOUTS = tuple(HandLayout(a, b) for a in VALUES for b in VALUES if a <= b)


def evaluate_layout(layout: HandLayout) -> HandState:
    a, b = layout.cards
    if {a, b} == {ACE, TEN}:
        return NATURAL
    total = a + b
    if ACE in (a, b) and total + 10 <= 21:
        return HandState(total + 10, True)
    return HandState(total, False)


def add_card(hand: HandState, card: int) -> Optional[HandState]:
    """Hand after drawing ``card``, or ``None`` on a bust.

    A soft ace is demoted to 1 before a bust is declared, so soft hands never
    bust on a single card.  The result is never a natural.
    """
    check_value(card)
    base = hand.total - 10 if hand.soft else hand.total
    base += card
    if (hand.soft or card == ACE) and base + 10 <= 21:
        return HandState(base + 10, True)
    if base <= 21:
        return HandState(base, False)
    return None


class PolicyKind(enum.Enum):
    THRESHOLD = "threshold"
    ALWAYS_HIT = "always-hit"
    ALWAYS_STAND = "always-stand"


@dataclass(frozen=True)
class DealerPolicy:
    """When the dealer takes their single hit.

    ``Threshold(T, hit_soft)`` hits every total below ``T`` and, when
    ``hit_soft`` is set, a soft ``T`` as well.
    """

    kind: PolicyKind = PolicyKind.THRESHOLD
    stand_at: int = 17
    hit_soft_at_threshold: bool = True

    @classmethod
    def threshold(cls, stand_at: int, hit_soft: bool) -> "DealerPolicy":
        return cls(PolicyKind.THRESHOLD, stand_at, hit_soft)

    @classmethod
    def always_hit(cls) -> "DealerPolicy":
        return cls(PolicyKind.ALWAYS_HIT, 0, False)

    @classmethod
    def always_stand(cls) -> "DealerPolicy":
        return cls(PolicyKind.ALWAYS_STAND, 0, False)

    @classmethod
    def parse(cls, text: str) -> "DealerPolicy":
        t = text.strip().upper().replace("_", "-")
        if t in ("ALWAYS-HIT", "HIT", "AH"):
            return cls.always_hit()
        if t in ("ALWAYS-STAND", "STAND", "AS"):
            return cls.always_stand()
        m = re.fullmatch(r"([HS])(\d+)", t)
        if not m:
            raise ValueError(f"unknown dealer rule {text!r}")
        return cls.threshold(int(m.group(2)), m.group(1) == "H")

    @property
    def name(self) -> str:
        if self.kind is PolicyKind.THRESHOLD:
            return f"{'H' if self.hit_soft_at_threshold else 'S'}{self.stand_at}"
        return self.kind.value

    def must_hit(self, hand: HandState) -> bool:
        return dealer_must_hit(self, hand)

    def __str__(self) -> str:
        return self.name


def dealer_must_hit(policy: DealerPolicy, hand: HandState) -> bool:
    if policy.kind is PolicyKind.ALWAYS_HIT:
        return True
    if policy.kind is PolicyKind.ALWAYS_STAND:
        return False
    if hand.total < policy.stand_at:
        return True
    return hand.total == policy.stand_at and hand.soft and policy.hit_soft_at_threshold


H17 = DealerPolicy.threshold(17, True)
S17 = DealerPolicy.threshold(17, False)
STANDARD_RULES = tuple(
    DealerPolicy.threshold(t, h) for t in (15, 16, 17, 18) for h in (False, True)
)


@dataclass(frozen=True)
class PayoutSchedule:
    natural_multiplier: Fraction = Fraction(3, 2)

    def __post_init__(self) -> None:
        if Fraction(self.natural_multiplier) <= 1:
            raise ValueError("natural multiplier must exceed 1")
        object.__setattr__(self, "natural_multiplier", Fraction(self.natural_multiplier))

    @classmethod
    def parse(cls, text: str) -> "PayoutSchedule":
        t = text.strip().replace("to", ":").replace(" ", "")
        if ":" in t:
            a, b = t.split(":")
            return cls(Fraction(int(a), int(b)))
        return cls(Fraction(t))

    @property
    def name(self) -> str:
        m = self.natural_multiplier
        if m == Fraction(3, 2):
            return "3:2"
        if m == Fraction(6, 5):
            return "6:5"
        return str(m)


THREE_TO_TWO = PayoutSchedule(Fraction(3, 2))
SIX_TO_FIVE = PayoutSchedule(Fraction(6, 5))


class Visibility(enum.Enum):
    TWO_UP = "two-up"
    ONE_UP = "one-up"
    NO_UP = "no-up"

    @classmethod
    def parse(cls, text: str) -> "Visibility":
        t = text.strip().lower().replace("_", "-").replace(" ", "-")
        t = t.replace("-card", "").replace("upcard", "up")
        for v in cls:
            if t == v.value:
                return v
        raise ValueError(f"unknown visibility {text!r}")


class Weighting(enum.Enum):
    """How a strategy cell weighs the layout pairs behind it.

    ``PRODUCT`` multiplies the player's layout share within their hand value
    by the dealer's layout share given that player layout and the visible
    dealer information.  ``JOINT`` uses the full conditional probability of
    the pair given everything visible.  They agree with replacement; for a
    finite shoe only ``JOINT`` makes overall results equal the true value of
    playing the table.
    """

    PRODUCT = "product"
    JOINT = "joint"

    @classmethod
    def parse(cls, text: str) -> "Weighting":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown weighting {text!r}") from None


@dataclass(frozen=True)
class VariantConfig:
    """One variant of the game.

    ``peek_on_natural`` only matters when a dealer natural can be hidden.
    ``None`` picks the variant default: the dealer checks under a visible
    up-card, and with no card showing a hidden natural simply beats the
    player's hand after the decision.
    """

    visibility: Visibility = Visibility.TWO_UP
    decks: Optional[int] = 1
    dealer: DealerPolicy = H17
    payout: PayoutSchedule = THREE_TO_TWO
    peek_on_natural: Optional[bool] = None
    weighting: Weighting = Weighting.PRODUCT

    def __post_init__(self) -> None:
        if self.decks is not None and self.decks < 1:
            raise ValueError("number of decks must be positive")

    @property
    def peeks(self) -> bool:
        if self.visibility is Visibility.TWO_UP:
            return True
        if self.peek_on_natural is None:
            return self.visibility is Visibility.ONE_UP
        return self.peek_on_natural

    def deck(self) -> DeckState:
        return DeckState.fresh(self.decks)

    def replace(self, **changes) -> "VariantConfig":
        from dataclasses import replace

        return replace(self, **changes)

    @property
    def deck_label(self) -> str:
        return "with-replacement" if self.decks is None else f"{self.decks}-deck"

    def __str__(self) -> str:
        extras = ""
        if self.visibility is not Visibility.TWO_UP:
            extras += ", peek" if self.peeks else ", no peek"
        if self.weighting is not Weighting.PRODUCT:
            extras += f", {self.weighting.value} weights"
        return f"{self.visibility.value}, {self.deck_label}, {self.dealer.name}, {self.payout.name}{extras}"
