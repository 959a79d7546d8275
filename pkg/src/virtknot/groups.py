"""Finite groups given by multiplication tables, and the bundled test family.

The bundled list holds every group of order at most 12 (up to isomorphism)
plus the symmetric group S4.  JSON format for user-supplied groups::

    [{"name": "S3", "table": [[0, 1, ...], ...]}, ...]

``table[i][j]`` is the index of the product ``i * j``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import GroupTableInvalid

__all__ = ["FiniteGroup", "bundled_groups", "load_groups", "cyclic", "dihedral",
           "dicyclic", "symmetric", "alternating", "direct_product"]

DEFAULT_MAX_ORDER = 24


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    table: tuple[tuple[int, ...], ...]
    identity: int = field(init=False)
    inverse: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", table)
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise GroupTableInvalid(f"{self.name}: table must be square and nonempty")
        if any(not 0 <= x < n for row in table for x in row):
            raise GroupTableInvalid(f"{self.name}: entries out of range")
        ident = [e for e in range(n) if all(table[e][x] == x == table[x][e] for x in range(n))]
        if not ident:
            raise GroupTableInvalid(f"{self.name}: no identity element")
        e = ident[0]
        inverse = []
        for x in range(n):
            inv = [y for y in range(n) if table[x][y] == e == table[y][x]]
            if not inv:
                raise GroupTableInvalid(f"{self.name}: element {x} has no inverse")
            inverse.append(inv[0])
        for x, y, z in itertools.product(range(n), repeat=3):
            if table[table[x][y]][z] != table[x][table[y][z]]:
                raise GroupTableInvalid(f"{self.name}: not associative at ({x}, {y}, {z})")
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", tuple(inverse))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverse[x], -k
        out = self.identity
        for _ in range(k):
            out = self.table[out][x]
        return out

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[x][y] == self.table[y][x] for x in range(n) for y in range(x))

    def conjugacy_classes(self) -> list[list[int]]:
        seen: set[int] = set()
        classes = []
        for x in range(self.order):
            if x in seen:
                continue
            cls = sorted({self.table[self.table[g][x]][self.inverse[g]] for g in range(self.order)})
            seen.update(cls)
            classes.append(cls)
        return classes


def _from_elements(name: str, elements: list, mul) -> FiniteGroup:
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return FiniteGroup(name, table)


def cyclic(n: int) -> FiniteGroup:
    return _from_elements(f"C{n}", list(range(n)), lambda a, b: (a + b) % n)


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n, named D{n}."""
    elements = [(i, j) for j in (0, 1) for i in range(n)]

    def mul(x, y):
        (i1, j1), (i2, j2) = x, y
        return ((i1 + (-1) ** j1 * i2) % n, (j1 + j2) % 2)

    return _from_elements(f"D{n}", elements, mul)


def dicyclic(m: int) -> FiniteGroup:
    """Dicyclic group of order 4m (m=2 gives Q8)."""
    elements = [(i, j) for j in (0, 1) for i in range(2 * m)]

    def mul(x, y):
        (i1, j1), (i2, j2) = x, y
        if j1 == 0:
            return ((i1 + i2) % (2 * m), j2)
        if j2 == 0:
            return ((i1 - i2) % (2 * m), 1)
        return ((i1 - i2 + m) % (2 * m), 0)

    return _from_elements("Q8" if m == 2 else f"Dic{m}", elements, mul)


def _perm_group(name: str, perms: list[tuple[int, ...]]) -> FiniteGroup:
    return _from_elements(name, perms, lambda a, b: tuple(a[b[i]] for i in range(len(a))))


def symmetric(n: int) -> FiniteGroup:
    return _perm_group(f"S{n}", sorted(itertools.permutations(range(n))))


def alternating(n: int) -> FiniteGroup:
    def even(p):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inversions % 2 == 0

    return _perm_group(f"A{n}", [p for p in sorted(itertools.permutations(range(n))) if even(p)])


def direct_product(g: FiniteGroup, h: FiniteGroup, name: str | None = None) -> FiniteGroup:
    elements = [(a, b) for a in range(g.order) for b in range(h.order)]
    # identity first so index 0 stays the identity when both factors start with it
    return _from_elements(name or f"{g.name}x{h.name}", elements,
                          lambda x, y: (g.table[x[0]][y[0]], h.table[x[1]][y[1]]))


def bundled_groups() -> list[FiniteGroup]:
    """All 24 groups of order <= 12 plus S4, in order of group order."""
    c2, c3 = cyclic(2), cyclic(3)
    return [
        cyclic(1), c2, c3, cyclic(4), direct_product(c2, c2), cyclic(5),
        cyclic(6), symmetric(3), cyclic(7),
        cyclic(8), direct_product(cyclic(4), c2), direct_product(direct_product(c2, c2), c2, "C2xC2xC2"),
        dihedral(4), dicyclic(2),
        cyclic(9), direct_product(c3, c3),
        cyclic(10), dihedral(5), cyclic(11),
        cyclic(12), direct_product(cyclic(6), c2), dihedral(6), alternating(4), dicyclic(3),
        symmetric(4),
    ]


def load_groups(path: str | Path, max_order: int = DEFAULT_MAX_ORDER) -> list[FiniteGroup]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = data.get("groups", [])
    groups = []
    for entry in data:
        group = FiniteGroup(str(entry["name"]), entry["table"])
        if group.order > max_order:
            raise GroupTableInvalid(f"{group.name}: order {group.order} exceeds limit {max_order}")
        groups.append(group)
    return groups


def dump_groups(groups: list[FiniteGroup]) -> str:
    return json.dumps([{"name": g.name, "table": [list(r) for r in g.table]} for g in groups])
