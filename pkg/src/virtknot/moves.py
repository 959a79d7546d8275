"""Reidemeister moves as rewrites of signed Gauss codes, plus bounded search.

Conventions
-----------
A crossing is positive when the under strand points 90 degrees
counter-clockwise from the over strand (``cross(over, under) > 0``).  The
virtual moves act trivially on codes, so only the classical moves live here:

* R1: a crossing whose two passes are cyclically adjacent (a kink).
* R2: two crossings of opposite sign whose over passes are adjacent and
  whose under passes are adjacent (either relative orientation).
* R3: three crossings whose six passes form three disjoint adjacent pairs
  (the three strands of a triangle) in one of the configurations realised by
  three oriented lines in the plane.  The move reverses each pair.

Move text format (positions are indices into the code the move is applied to;
insert positions range over ``0..len(code)``)::

    R1Delete:k
    R1Insert:p:+:after          (after = under pass follows the over pass)
    R2Delete:a,b
    R2Insert:p,q:+:parallel:after
    R3:i,j,k                    (start indices of the three adjacent pairs)
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import InapplicableMove
from .gauss import GaussCode, Pass, canonical_passes, serialize, parse

__all__ = [
    "Move",
    "MovePath",
    "Equivalent",
    "NotFoundWithinBounds",
    "apply",
    "enumerate_moves",
    "search_equivalence",
    "parse_move",
    "r3_configurations",
]

KINDS = ("R1Insert", "R1Delete", "R2Insert", "R2Delete", "R3")
R3_MODES = ("cyclic", "all")


@dataclass(frozen=True)
class Move:
    kind: str
    crossings: tuple[int, ...] = ()
    positions: tuple[int, ...] = ()
    sign: int = 0
    variant: str = ""
    side: str = ""

    def __str__(self) -> str:
        s = "+" if self.sign > 0 else "-"
        if self.kind == "R1Delete":
            return f"R1Delete:{self.crossings[0]}"
        if self.kind == "R2Delete":
            return f"R2Delete:{self.crossings[0]},{self.crossings[1]}"
        if self.kind == "R1Insert":
            return f"R1Insert:{self.positions[0]}:{s}:{self.side}"
        if self.kind == "R2Insert":
            p, q = self.positions
            return f"R2Insert:{p},{q}:{s}:{self.variant}:{self.side}"
        return "R3:" + ",".join(map(str, self.positions))

    def sort_key(self) -> tuple:
        return (KINDS.index(self.kind), self.crossings, self.positions,
                -self.sign, self.variant, self.side)


def parse_move(text: str) -> Move:
    """Parse the move text format (see module docstring)."""
    parts = text.strip().split(":")
    kind = parts[0]

    def ints(field_: str) -> tuple[int, ...]:
        return tuple(int(x) for x in field_.split(","))

    def sign(field_: str) -> int:
        if field_ not in ("+", "-"):
            raise InapplicableMove(f"bad sign {field_!r} in move {text!r}")
        return 1 if field_ == "+" else -1

    try:
        if kind == "R1Delete" and len(parts) == 2:
            return Move(kind, crossings=ints(parts[1]))
        if kind == "R2Delete" and len(parts) == 2:
            return Move(kind, crossings=ints(parts[1]))
        if kind == "R1Insert" and len(parts) == 4:
            return Move(kind, positions=ints(parts[1]), sign=sign(parts[2]), side=parts[3])
        if kind == "R2Insert" and len(parts) == 5:
            return Move(kind, positions=ints(parts[1]), sign=sign(parts[2]),
                        variant=parts[3], side=parts[4])
        if kind == "R3" and len(parts) == 2:
            return Move(kind, positions=ints(parts[1]))
    except ValueError as exc:
        raise InapplicableMove(f"cannot parse move {text!r}: {exc}") from None
    raise InapplicableMove(f"cannot parse move {text!r}")


# --- R3 local models -------------------------------------------------------

def _local_r3_models() -> dict[tuple, bool]:
    """Signatures of all R3 triangles, mapped to whether the triangle is cyclic.

    Signature: (top strand meets TM first, middle strand meets TM first,
    bottom strand meets TB first, sign TM, sign TB, sign MB) where T/M/B are
    the top/middle/bottom strands and e.g. TM is the crossing of top and
    middle.  Built from three lines through the vertices of a triangle under
    every orientation and height order; the reversed configuration (after
    the move) is added alongside each one.
    """
    vertex = {(0, 1): (0.0, 0.0), (0, 2): (2.0, 0.0), (1, 2): (1.0, 2.0)}
    base = {0: (2.0, 0.0), 1: (1.0, 2.0), 2: (-1.0, 2.0)}
    models: dict[tuple, bool] = {}
    for orient in itertools.product((1, -1), repeat=3):
        direction = {i: (orient[i] * base[i][0], orient[i] * base[i][1]) for i in range(3)}
        for heights in itertools.permutations(range(3)):
            top, mid, bot = sorted(range(3), key=lambda i: -heights[i])

            def key(i: int, j: int) -> tuple[int, int]:
                return (min(i, j), max(i, j))

            def first_on(strand: int, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
                d = direction[strand]
                ta = vertex[a][0] * d[0] + vertex[a][1] * d[1]
                tb = vertex[b][0] * d[0] + vertex[b][1] * d[1]
                return a if ta < tb else b

            def sign(upper: int, lower: int) -> int:
                o, u = direction[upper], direction[lower]
                return 1 if o[0] * u[1] - o[1] * u[0] > 0 else -1

            tm, tb, mb = key(top, mid), key(top, bot), key(mid, bot)
            bits = (
                first_on(top, tm, tb) == tm,
                first_on(mid, tm, mb) == tm,
                first_on(bot, tb, mb) == tb,
            )
            firsts = [bits[0] + bits[1], (not bits[0]) + bits[2], (not bits[1]) + (not bits[2])]
            cyclic = all(f == 1 for f in firsts)
            signs = (sign(top, mid), sign(top, bot), sign(mid, bot))
            models[bits + signs] = cyclic
            flipped = tuple(not b for b in bits) + signs
            models[flipped] = cyclic
    return models


_R3_MODELS = _local_r3_models()


def r3_configurations(mode: str = "all") -> frozenset[tuple]:
    """Valid R3 signatures; ``mode='cyclic'`` keeps cyclically oriented triangles."""
    if mode not in R3_MODES:
        raise ValueError(f"unknown R3 mode {mode!r}; expected one of {R3_MODES}")
    return frozenset(s for s, cyc in _R3_MODELS.items() if mode == "all" or cyc)


_R3_SETS = {mode: r3_configurations(mode) for mode in R3_MODES}


# --- helpers -----------------------------------------------------------------

def _adjacent(i: int, j: int, length: int) -> bool:
    return (i - j) % length in (1, length - 1)


def _next_id(passes: tuple[Pass, ...]) -> int:
    return max((p.crossing for p in passes), default=0) + 1


def _insert_blocks(passes: tuple[Pass, ...], blocks: dict[int, list[Pass]]) -> tuple[Pass, ...]:
    out: list[Pass] = []
    for i in range(len(passes) + 1):
        out.extend(blocks.get(i, ()))
        if i < len(passes):
            out.append(passes[i])
    return tuple(out)


def _r3_signature(passes: tuple[Pass, ...], starts: tuple[int, ...]) -> tuple | None:
    """Signature of the strand triple starting at ``starts`` or None if no triangle."""
    length = len(passes)
    if len(starts) != 3 or length < 6:
        return None
    slots = [(s % length, (s + 1) % length) for s in starts]
    used = [i for pair in slots for i in pair]
    if len(set(used)) != 6:
        return None
    pairs = [(passes[i], passes[j]) for i, j in slots]
    counts: dict[int, int] = {}
    for first, second in pairs:
        if first.crossing == second.crossing:
            return None
        for p in (first, second):
            counts[p.crossing] = counts.get(p.crossing, 0) + 1
    if len(counts) != 3:
        return None
    top = [pr for pr in pairs if pr[0].over and pr[1].over]
    bot = [pr for pr in pairs if not pr[0].over and not pr[1].over]
    mid = [pr for pr in pairs if pr[0].over != pr[1].over]
    if not (len(top) == len(bot) == len(mid) == 1):
        return None
    (t1, t2), (m1, m2), (b1, b2) = top[0], mid[0], bot[0]
    mid_under = m1 if not m1.over else m2
    mid_over = m1 if m1.over else m2
    tm = mid_under.crossing
    mb = mid_over.crossing
    if tm not in (t1.crossing, t2.crossing) or mb not in (b1.crossing, b2.crossing):
        return None
    tb = t2.crossing if t1.crossing == tm else t1.crossing
    if tb not in (b1.crossing, b2.crossing):
        return None
    sign = {p.crossing: p.sign for pr in pairs for p in pr}
    return (t1.crossing == tm, m1.crossing == tm, b1.crossing == tb,
            sign[tm], sign[tb], sign[mb])


# --- apply -------------------------------------------------------------------

def _apply_raw(passes: tuple[Pass, ...], move: Move, r3_set: frozenset) -> tuple[Pass, ...]:
    length = len(passes)
    kind = move.kind
    if kind == "R1Delete":
        (k,) = move.crossings
        idx = [i for i, p in enumerate(passes) if p.crossing == k]
        if len(idx) != 2 or not _adjacent(idx[0], idx[1], length):
            raise InapplicableMove(f"{move} does not match a kink in {serialize(GaussCode._trusted(passes))}")
        return tuple(p for p in passes if p.crossing != k)
    if kind == "R2Delete":
        a, b = move.crossings
        if a == b:
            raise InapplicableMove(f"{move}: crossings must differ")
        pos = {}
        for i, p in enumerate(passes):
            if p.crossing in (a, b):
                pos[(p.crossing, p.over)] = (i, p.sign)
        if len(pos) != 4:
            raise InapplicableMove(f"{move}: unknown crossing")
        (oa, sa), (ob, sb) = pos[(a, True)], pos[(b, True)]
        (ua, _), (ub, _) = pos[(a, False)], pos[(b, False)]
        if sa == sb or not _adjacent(oa, ob, length) or not _adjacent(ua, ub, length):
            raise InapplicableMove(f"{move} does not match an R2 bigon")
        return tuple(p for p in passes if p.crossing not in (a, b))
    if kind == "R1Insert":
        (pos_,) = move.positions
        if not 0 <= pos_ <= length or move.sign not in (1, -1) or move.side not in ("after", "before"):
            raise InapplicableMove(f"{move}: bad parameters")
        k = _next_id(passes)
        over, under = Pass(k, True, move.sign), Pass(k, False, move.sign)
        block = [over, under] if move.side == "after" else [under, over]
        return _insert_blocks(passes, {pos_: block})
    if kind == "R2Insert":
        p, q = move.positions
        if not (0 <= p <= length and 0 <= q <= length) or move.sign not in (1, -1):
            raise InapplicableMove(f"{move}: bad parameters")
        if move.variant not in ("parallel", "antiparallel") or move.side not in ("after", "before"):
            raise InapplicableMove(f"{move}: bad parameters")
        a = _next_id(passes)
        b = a + 1
        over_block = [Pass(a, True, move.sign), Pass(b, True, -move.sign)]
        ua, ub = Pass(a, False, move.sign), Pass(b, False, -move.sign)
        under_block = [ua, ub] if move.variant == "parallel" else [ub, ua]
        if p != q:
            return _insert_blocks(passes, {p: over_block, q: under_block})
        both = over_block + under_block if move.side == "after" else under_block + over_block
        return _insert_blocks(passes, {p: both})
    if kind == "R3":
        sig = _r3_signature(passes, move.positions)
        if sig is None or sig not in r3_set:
            raise InapplicableMove(f"{move} does not match an R3 triangle")
        out = list(passes)
        for s in move.positions:
            i, j = s % length, (s + 1) % length
            out[i], out[j] = out[j], out[i]
        return tuple(out)
    raise InapplicableMove(f"unknown move kind {kind!r}")


def apply(code: GaussCode, move: Move | str) -> GaussCode:
    """Apply a move to ``code`` and return the canonicalized result."""
    if isinstance(move, str):
        move = parse_move(move)
    return GaussCode._trusted(canonical_passes(_apply_raw(code.passes, move, _R3_SETS["all"])))


# --- enumeration -----------------------------------------------------------

def _candidate_moves(passes: tuple[Pass, ...], max_crossings: int, r3: str) -> Iterator[Move]:
    length = len(passes)
    n = length // 2
    by_crossing: dict[int, dict[bool, tuple[int, int]]] = {}
    for i, p in enumerate(passes):
        by_crossing.setdefault(p.crossing, {})[p.over] = (i, p.sign)
    ids = sorted(by_crossing)
    for k in ids:
        (i, _), (j, _) = by_crossing[k][True], by_crossing[k][False]
        if _adjacent(i, j, length):
            yield Move("R1Delete", crossings=(k,))
    for a, b in itertools.combinations(ids, 2):
        (oa, sa), (ob, sb) = by_crossing[a][True], by_crossing[b][True]
        ua, ub = by_crossing[a][False][0], by_crossing[b][False][0]
        if sa != sb and _adjacent(oa, ob, length) and _adjacent(ua, ub, length):
            yield Move("R2Delete", crossings=(a, b))
    gaps = range(max(length, 1))
    if n + 1 <= max_crossings:
        for pos in gaps:
            for sign in (1, -1):
                for side in ("after", "before"):
                    yield Move("R1Insert", positions=(pos,), sign=sign, side=side)
    if n + 2 <= max_crossings:
        for p in gaps:
            for q in gaps:
                for sign in (1, -1):
                    for variant in ("parallel", "antiparallel"):
                        sides = ("after", "before") if p == q else ("after",)
                        for side in sides:
                            yield Move("R2Insert", positions=(p, q), sign=sign,
                                       variant=variant, side=side)
    if n >= 3:
        allowed = _R3_SETS[r3]
        for triple in _r3_triples(passes):
            sig = _r3_signature(passes, triple)
            if sig is not None and sig in allowed:
                yield Move("R3", positions=triple)


def _r3_triples(passes: tuple[Pass, ...]) -> list[tuple[int, int, int]]:
    """Sorted start triples whose adjacent pairs meet crossings {x,y}, {x,z}, {y,z}."""
    length = len(passes)
    by_pair: dict[frozenset, list[int]] = {}
    for i in range(length):
        a, b = passes[i].crossing, passes[(i + 1) % length].crossing
        if a != b:
            by_pair.setdefault(frozenset((a, b)), []).append(i)
    found = set()
    ids = sorted({p.crossing for p in passes})
    for x, y, z in itertools.combinations(ids, 3):
        xy, xz, yz = (by_pair.get(frozenset(s)) for s in ((x, y), (x, z), (y, z)))
        if not (xy and xz and yz):
            continue
        for i in xy:
            for j in xz:
                for k in yz:
                    found.add(tuple(sorted((i, j, k))))
    return sorted(found)


def code_key(code: GaussCode) -> tuple:
    """Total order on codes: crossing count, then the canonical pass order."""
    return (len(code.passes),) + tuple(
        (0 if p.over else 1, p.crossing, 0 if p.sign > 0 else 1) for p in code.passes)


def enumerate_moves(code: GaussCode, max_crossings: int, r3: str = "cyclic") -> list[tuple[Move, GaussCode]]:
    """All moves applicable to ``code`` whose result has at most ``max_crossings`` crossings.

    One entry per distinct canonical result (the least move producing it),
    sorted by the result.  ``r3`` selects the R3 variants that are offered:
    ``"cyclic"`` (default) or ``"all"``.
    """
    if r3 not in R3_MODES:
        raise ValueError(f"unknown R3 mode {r3!r}")
    passes = code.passes
    best: dict[tuple[Pass, ...], Move] = {}
    allowed = _R3_SETS["all"]
    for move in _candidate_moves(passes, max_crossings, r3):
        result = canonical_passes(_apply_raw(passes, move, allowed))
        current = best.get(result)
        if current is None or move.sort_key() < current.sort_key():
            best[result] = move
    out = [(m, GaussCode._trusted(r)) for r, m in best.items()]
    out.sort(key=lambda item: code_key(item[1]))
    return out


# --- search ------------------------------------------------------------------

@dataclass(frozen=True)
class MovePath:
    start: GaussCode
    steps: tuple[tuple[Move, GaussCode], ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def end(self) -> GaussCode:
        return self.steps[-1][1] if self.steps else self.start

    def replay(self) -> bool:
        """True iff every step's code is ``apply`` of its move to the previous code."""
        current = self.start
        for move, code in self.steps:
            try:
                current = apply(current, move)
            except InapplicableMove:
                return False
            if current != code:
                return False
        return True

    def to_records(self) -> list[dict]:
        records: list[dict] = [{"move": None, "code": serialize(self.start)}]
        records += [{"move": str(m), "code": serialize(c)} for m, c in self.steps]
        return records

    def to_json(self) -> str:
        return json.dumps(self.to_records(), sort_keys=True)

    @classmethod
    def from_records(cls, records: list[dict]) -> "MovePath":
        start = parse(records[0]["code"])
        steps = tuple((parse_move(r["move"]), parse(r["code"])) for r in records[1:])
        return cls(start, steps)


@dataclass(frozen=True)
class Equivalent:
    path: MovePath
    states: int = 0


@dataclass(frozen=True)
class NotFoundWithinBounds:
    """No path found; never a proof of inequivalence in general.

    ``exhausted`` is True when one side's component (under the crossing bound)
    was explored completely, so no path exists within ``max_crossings``.
    """

    states: int
    exhausted: bool = False


SearchResult = Union[Equivalent, NotFoundWithinBounds]


def search_equivalence(a: GaussCode, b: GaussCode, max_crossings: int, max_states: int,
                       r3: str = "cyclic") -> SearchResult:
    """Bidirectional breadth-first search for a move path from ``a`` to ``b``.

    Frontiers are expanded in canonical order, so the result and the returned
    path are fully deterministic.
    """
    if max_crossings < 0 or max_states <= 0:
        raise ValueError("bounds must be positive")
    start, goal = GaussCode._trusted(canonical_passes(a.passes)), GaussCode._trusted(canonical_passes(b.passes))
    if start == goal:
        return Equivalent(MovePath(start), 1)
    if max(start.n, goal.n) > max_crossings:
        return NotFoundWithinBounds(0)
    fwd: dict[GaussCode, tuple[GaussCode, Move] | None] = {start: None}
    bwd: dict[GaussCode, tuple[GaussCode, Move] | None] = {goal: None}
    front_f, front_b = [start], [goal]
    while front_f and front_b:
        forward = len(front_f) <= len(front_b)
        own, other = (fwd, bwd) if forward else (bwd, fwd)
        frontier = front_f if forward else front_b
        nxt: list[GaussCode] = []
        for code in frontier:
            for move, result in enumerate_moves(code, max_crossings, r3):
                if result in own:
                    continue
                own[result] = (code, move)
                if result in other:
                    path = _join(fwd, bwd, result, max_crossings, r3)
                    return Equivalent(path, len(fwd) + len(bwd))
                nxt.append(result)
                if len(fwd) + len(bwd) >= max_states:
                    return NotFoundWithinBounds(len(fwd) + len(bwd))
        if forward:
            front_f = nxt
        else:
            front_b = nxt
    return NotFoundWithinBounds(len(fwd) + len(bwd), exhausted=True)


def _join(fwd: dict, bwd: dict, meet: GaussCode, max_crossings: int, r3: str) -> MovePath:
    head: list[tuple[Move, GaussCode]] = []
    node = meet
    while fwd[node] is not None:
        parent, move = fwd[node]
        head.append((move, node))
        node = parent
    start = node
    head.reverse()
    tail: list[tuple[Move, GaussCode]] = []
    node = meet
    while bwd[node] is not None:
        parent, _ = bwd[node]
        # The stored move leads parent -> node; replay needs node -> parent.
        back = next(m for m, c in enumerate_moves(node, max_crossings, r3) if c == parent)
        tail.append((back, parent))
        node = parent
    return MovePath(start, tuple(head + tail))
