"""Sheaf condition, plus construction and global sections on finite sites."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from ..errors import SiteError
from .category import FiniteCategory
from .functors import FinitePresheaf, constant_presheaf
from .topology import Coverage, _pullback_mask

__all__ = [
    "Sheaf",
    "SheafFailure",
    "matching_families",
    "amalgamations",
    "sheaf_check",
    "is_separated",
    "plus_construction",
    "sheafify",
    "global_sections",
    "global_invariants",
]

Family = tuple[int, ...]


@dataclass(frozen=True)
class Sheaf:
    def __str__(self) -> str:
        return "Sheaf"


@dataclass(frozen=True)
class SheafFailure:
    object: str
    sieve: tuple[str, ...]
    family: dict[str, str]
    reason: str  # "NoAmalgamation" or "NonUnique"

    def __str__(self) -> str:
        return f"Fails({self.reason})"


SheafResult = Union[Sheaf, SheafFailure]


def _arrows_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def matching_families(cat: FiniteCategory, presheaf: FinitePresheaf, mask: int) -> Iterator[Family]:
    """All matching families on the sieve ``mask``.

    A family is a tuple of element indices, one per arrow of the sieve in
    increasing arrow order.  Choosing ``x_f`` fixes ``x_{f o g} = P(g)(x_f)``
    for every ``g``; by functoriality that single propagation step enforces
    every compatibility condition.
    """
    arrows = _arrows_of(mask)
    pos = {f: k for k, f in enumerate(arrows)}
    values: list[int] = [-1] * len(arrows)
    table = presheaf.table
    sizes = [len(presheaf.elements[cat.dom[f]]) for f in arrows]

    def assign(k: int, x: int, trail: list[int]) -> bool:
        f = arrows[k]
        values[k] = x
        trail.append(k)
        for g in cat.into[cat.dom[f]]:
            j = pos[cat.comp[f][g]]
            y = table[g][x]
            if values[j] < 0:
                values[j] = y
                trail.append(j)
            elif values[j] != y:
                return False
        return True

    def search(k: int) -> Iterator[Family]:
        while k < len(arrows) and values[k] >= 0:
            k += 1
        if k == len(arrows):
            yield tuple(values)
            return
        for x in range(sizes[k]):
            trail: list[int] = []
            if assign(k, x, trail):
                yield from search(k + 1)
            for j in trail:
                values[j] = -1

    yield from search(0)


def amalgamations(cat: FiniteCategory, presheaf: FinitePresheaf, target: int, mask: int,
                  family: Family) -> list[int]:
    arrows = _arrows_of(mask)
    out = []
    for x in range(len(presheaf.elements[target])):
        if all(presheaf.table[f][x] == family[k] for k, f in enumerate(arrows)):
            out.append(x)
    return out


def _family_dict(cat: FiniteCategory, presheaf: FinitePresheaf, mask: int, family: Family) -> dict[str, str]:
    return {cat.arrows[f].id: presheaf.elements[cat.dom[f]][family[k]]
            for k, f in enumerate(_arrows_of(mask))}


def sheaf_check(cat: FiniteCategory, coverage: Coverage, presheaf: FinitePresheaf) -> SheafResult:
    """Check that every matching family on every covering sieve has exactly one amalgamation."""
    for t, obj in enumerate(cat.objects):
        for mask in sorted(coverage.get(obj, ())):
            for family in matching_families(cat, presheaf, mask):
                found = amalgamations(cat, presheaf, t, mask, family)
                if len(found) != 1:
                    return SheafFailure(obj, cat.ids_of(mask), _family_dict(cat, presheaf, mask, family),
                                        "NoAmalgamation" if not found else "NonUnique")
    return Sheaf()


def is_separated(cat: FiniteCategory, coverage: Coverage, presheaf: FinitePresheaf) -> bool:
    """True if distinct elements never have the same restrictions along a cover."""
    for t, obj in enumerate(cat.objects):
        for mask in coverage.get(obj, ()):
            arrows = _arrows_of(mask)
            seen = set()
            for x in range(len(presheaf.elements[t])):
                key = tuple(presheaf.table[f][x] for f in arrows)
                if key in seen:
                    return False
                seen.add(key)
    return True


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the least member as the root so labels are deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _restrict_family(cat: FiniteCategory, mask: int, family: Family, sub: int) -> Family:
    """Restriction of a family on ``mask`` to a subsieve ``sub``."""
    arrows = _arrows_of(mask)
    return tuple(family[k] for k, f in enumerate(arrows) if sub >> f & 1)


def _pull_family(cat: FiniteCategory, h: int, mask: int, family: Family, pulled: int) -> Family:
    """Family on ``h*S`` given by ``y_g = x_{h o g}``."""
    pos = {f: k for k, f in enumerate(_arrows_of(mask))}
    return tuple(family[pos[cat.comp[h][g]]] for g in _arrows_of(pulled))


def plus_construction(cat: FiniteCategory, coverage: Coverage, presheaf: FinitePresheaf) -> FinitePresheaf:
    """One step of the plus construction.

    P+(C) is the set of pairs (covering sieve S, matching family on S) modulo
    the relation generated by restriction to a smaller covering sieve, so two
    families are identified exactly when they agree on a common refinement.
    Each class is named by its least member, written as ``{arrow=element,...}``.
    """
    classes: list[dict] = []
    reps: list[list[tuple[int, Family]]] = []
    for t, obj in enumerate(cat.objects):
        covers = sorted(coverage.get(obj, ()))
        if not covers:
            raise SiteError(f"object {obj!r} has no covering sieve")
        uf = _UnionFind()
        members = []
        for s in covers:
            for fam in matching_families(cat, presheaf, s):
                members.append((s, fam))
                uf.find((s, fam))
        for s, fam in members:
            for r in covers:
                if r != s and r & ~s == 0:
                    uf.union((s, fam), (r, _restrict_family(cat, s, fam, r)))
        roots = sorted({uf.find(m) for m in members})
        rank = {r: k for k, r in enumerate(roots)}
        classes.append({m: rank[uf.find(m)] for m in members})
        reps.append(roots)
    sets = {}
    labels = []
    for t, obj in enumerate(cat.objects):
        names = [_label(cat, presheaf, s, fam) for s, fam in reps[t]]
        labels.append(names)
        sets[obj] = names
    maps = {}
    for h, arrow in enumerate(cat.arrows):
        t, d = cat.cod[h], cat.dom[h]
        mapping = {}
        for k, (s, fam) in enumerate(reps[t]):
            pulled = _pullback_mask(cat, h, s)
            key = (pulled, _pull_family(cat, h, s, fam, pulled))
            if key not in classes[d]:
                raise SiteError("coverage is not stable under pullback")
            mapping[labels[t][k]] = labels[d][classes[d][key]]
        maps[arrow.id] = mapping
    return FinitePresheaf(cat, sets, maps)


def _label(cat: FiniteCategory, presheaf: FinitePresheaf, mask: int, family: Family) -> str:
    """Readable, injective name for a family on the least covering sieve.

    If the sieve contains the identity the family is determined by that one
    value, which is used as the name.  Otherwise entries that are fixed by
    other entries (singleton sets, or arrows factoring through an arrow with
    a non-isomorphic domain) are left out.
    """
    arrows = _arrows_of(mask)
    value = {f: presheaf.elements[cat.dom[f]][family[k]] for k, f in enumerate(arrows)}
    t = cat.cod[arrows[0]] if arrows else None
    if t is not None and cat.ident[t] in value:
        return value[cat.ident[t]]

    def reaches(a: int, b: int) -> bool:
        return any(cat.cod[h] == b for h in cat.out_of[a])

    def redundant(f: int) -> bool:
        if len(presheaf.elements[cat.dom[f]]) == 1:
            return True
        d = cat.dom[f]
        for g in arrows:
            e = cat.dom[g]
            if e == d or reaches(e, d):
                continue
            if any(cat.comp[g][h] == f for h in cat.into[e] if cat.dom[h] == d):
                return True
        return False

    parts = [f"{cat.arrows[f].id}={value[f]}" for f in arrows if not redundant(f)]
    return "{" + ",".join(parts) + "}"


def sheafify(cat: FiniteCategory, coverage: Coverage, presheaf: FinitePresheaf) -> FinitePresheaf:
    """Associated sheaf: the plus construction applied twice."""
    return plus_construction(cat, coverage, plus_construction(cat, coverage, presheaf))


def global_sections(cat: FiniteCategory, presheaf: FinitePresheaf) -> list[dict[str, str]]:
    """Natural transformations from the terminal presheaf, as object -> element maps."""
    n = len(cat.objects)
    values = [-1] * n
    out: list[dict[str, str]] = []

    def consistent(t: int) -> bool:
        for f in cat.into[t]:
            d = cat.dom[f]
            if values[d] >= 0 and presheaf.table[f][values[t]] != values[d]:
                return False
        for f in cat.out_of[t]:
            c = cat.cod[f]
            if values[c] >= 0 and presheaf.table[f][values[c]] != values[t]:
                return False
        return True

    def search(t: int) -> None:
        if t == n:
            out.append({o: presheaf.elements[i][values[i]] for i, o in enumerate(cat.objects)})
            return
        for x in range(len(presheaf.elements[t])):
            values[t] = x
            if consistent(t):
                search(t + 1)
        values[t] = -1

    search(0)
    return out


def global_invariants(cat: FiniteCategory, coverage: Coverage, values: Sequence[str]) -> list[dict[str, str]]:
    """Global sections of the sheafified constant presheaf on ``values``."""
    sheaf = sheafify(cat, coverage, constant_presheaf(cat, values))
    return global_sections(cat, sheaf)
