"""Signed Gauss codes for virtual knot diagrams.

A code is the cyclic sequence of passes a diagram makes through its classical
crossings.  Virtual crossings are never recorded, so a code stands for a
diagram up to the virtual (detour) moves.

Text format: tokens ``O<k><s>`` / ``U<k><s>`` with ``s`` in ``+``/``-``,
optionally separated by whitespace or commas, or the literal ``()`` for the
crossingless diagram.  Example: ``O1+U2+O2+U1+``.
"""

from __future__ import annotations

import enum
import random
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import (
    CrossingVisitedTwiceOver,
    CrossingVisitedTwiceUnder,
    MalformedToken,
    MissingPartnerPass,
    SignMismatch,
    UnknownCrossing,
)

__all__ = [
    "Pass",
    "GaussCode",
    "Parity",
    "parse",
    "serialize",
    "canonicalize",
    "classical_parity",
    "random_code",
    "read_codes",
]

_TOKEN = re.compile(r"([OU])(\d+)([+-])")
_SEPARATORS = re.compile(r"[\s,]+")
# Sort key weight of the strand letter; must exceed any 2*id+1.
_STRAND_WEIGHT = 1 << 20


class Pass(NamedTuple):
    """One visit of the diagram through a classical crossing."""

    crossing: int
    over: bool
    sign: int

    def __str__(self) -> str:
        return f"{'O' if self.over else 'U'}{self.crossing}{'+' if self.sign > 0 else '-'}"


class Parity(enum.Enum):
    EVEN = "Even"
    ODD = "Odd"


def _validate(passes: tuple[Pass, ...]) -> None:
    seen: dict[int, Pass] = {}
    over_seen: set[int] = set()
    under_seen: set[int] = set()
    for p in passes:
        if p.sign not in (1, -1):
            raise MalformedToken(f"sign of crossing {p.crossing} must be +1 or -1")
        if p.crossing < 1:
            raise MalformedToken(f"crossing ids must be positive, got {p.crossing}")
        if p.over:
            if p.crossing in over_seen:
                raise CrossingVisitedTwiceOver(f"crossing {p.crossing} is passed over twice")
            over_seen.add(p.crossing)
        else:
            if p.crossing in under_seen:
                raise CrossingVisitedTwiceUnder(f"crossing {p.crossing} is passed under twice")
            under_seen.add(p.crossing)
        first = seen.setdefault(p.crossing, p)
        if first.sign != p.sign:
            raise SignMismatch(f"crossing {p.crossing} has passes with different signs")
    lonely = sorted(over_seen ^ under_seen)
    if lonely:
        raise MissingPartnerPass(f"crossing {lonely[0]} is visited only once")


@dataclass(frozen=True)
class GaussCode:
    """Immutable, validated signed Gauss code (cyclic pass sequence)."""

    passes: tuple[Pass, ...] = ()

    def __post_init__(self) -> None:
        passes = tuple(Pass(int(c), bool(o), int(s)) for c, o, s in self.passes)
        object.__setattr__(self, "passes", passes)
        _validate(passes)

    @classmethod
    def _trusted(cls, passes: tuple[Pass, ...]) -> "GaussCode":
        # Skips validation; only for passes produced by the engine itself.
        code = object.__new__(cls)
        object.__setattr__(code, "passes", passes)
        return code

    @property
    def n(self) -> int:
        """Number of classical crossings."""
        return len(self.passes) // 2

    def __len__(self) -> int:
        return len(self.passes)

    def crossings(self) -> list[int]:
        return sorted({p.crossing for p in self.passes})

    def sign(self, crossing: int) -> int:
        for p in self.passes:
            if p.crossing == crossing:
                return p.sign
        raise UnknownCrossing(f"crossing {crossing} does not occur in {self}")

    def positions(self, crossing: int) -> tuple[int, int]:
        """Indices of the (over, under) passes of ``crossing``."""
        over = under = None
        for i, p in enumerate(self.passes):
            if p.crossing == crossing:
                if p.over:
                    over = i
                else:
                    under = i
        if over is None or under is None:
            raise UnknownCrossing(f"crossing {crossing} does not occur in {self}")
        return over, under

    def writhe(self) -> int:
        return sum(p.sign for p in self.passes if p.over)

    def is_canonical(self) -> bool:
        return canonicalize(self).passes == self.passes

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"GaussCode({serialize(self)!r})"


def parse(text: str) -> GaussCode:
    """Parse the text format into a validated code (token order = traversal order)."""
    body = _SEPARATORS.sub("", text)
    if body == "()":
        return GaussCode(())
    if not body:
        raise MalformedToken("empty input; use '()' for the crossingless diagram")
    passes = []
    pos = 0
    for match in _TOKEN.finditer(body):
        if match.start() != pos:
            raise MalformedToken(f"unexpected text {body[pos:match.start()]!r} in {text!r}")
        letter, ident, sign = match.groups()
        passes.append(Pass(int(ident), letter == "O", 1 if sign == "+" else -1))
        pos = match.end()
    if pos != len(body):
        raise MalformedToken(f"unexpected text {body[pos:]!r} in {text!r}")
    return GaussCode(tuple(passes))


def serialize(code: GaussCode) -> str:
    if not code.passes:
        return "()"
    return "".join(str(p) for p in code.passes)


def _pass_key(over: bool, label: int, sign: int) -> int:
    return (0 if over else _STRAND_WEIGHT) + 2 * label + (0 if sign > 0 else 1)


def canonical_passes(passes: tuple[Pass, ...]) -> tuple[Pass, ...]:
    """Least rotation+relabeling of a pass sequence (order: O<U, id, +<-)."""
    length = len(passes)
    if length == 0:
        return ()
    # The least word starts with an over pass relabeled 1, positive if possible.
    starts = [i for i, p in enumerate(passes) if p.over and p.sign > 0]
    if not starts:
        starts = [i for i, p in enumerate(passes) if p.over]
    best_key: list[int] | None = None
    best_start = starts[0]
    for start in starts:
        labels: dict[int, int] = {}
        key: list[int] = []
        # abandon a rotation as soon as it compares greater than the best so far
        tied = best_key is not None
        for k in range(length):
            p = passes[(start + k) % length]
            label = labels.get(p.crossing)
            if label is None:
                label = labels[p.crossing] = len(labels) + 1
            value = (0 if p.over else _STRAND_WEIGHT) + 2 * label + (0 if p.sign > 0 else 1)
            if tied:
                ref = best_key[k]  # type: ignore[index]
                if value > ref:
                    break
                if value < ref:
                    tied = False
            key.append(value)
        else:
            if best_key is None or key < best_key:
                best_key, best_start = key, start
    labels = {}
    out = []
    for k in range(length):
        p = passes[(best_start + k) % length]
        label = labels.get(p.crossing)
        if label is None:
            label = labels[p.crossing] = len(labels) + 1
        out.append(Pass(label, p.over, p.sign))
    return tuple(out)


def canonicalize(code: GaussCode) -> GaussCode:
    """Lexicographically least code over rotations and first-occurrence relabelings.

    Reflection is excluded because it reverses the orientation.
    """
    return GaussCode._trusted(canonical_passes(code.passes))


def classical_parity(code: GaussCode, crossing_id: int) -> Parity:
    """Parity of the number of passes strictly between the two visits of a crossing."""
    i, j = code.positions(crossing_id)
    between = abs(i - j) - 1
    return Parity.ODD if between % 2 else Parity.EVEN


def random_code(n: int, rng: random.Random | None = None) -> GaussCode:
    """Uniformly random signed Gauss code with ``n`` crossings (not canonicalized)."""
    rng = rng or random.Random()
    signs = [rng.choice((1, -1)) for _ in range(n)]
    slots = [Pass(c + 1, over, signs[c]) for c in range(n) for over in (True, False)]
    rng.shuffle(slots)
    return GaussCode(tuple(slots))


def read_codes(lines: Iterable[str]) -> list[GaussCode]:
    """Read the one-code-per-line interchange format (``#`` starts a comment line)."""
    codes = []
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        codes.append(parse(stripped))
    return codes
