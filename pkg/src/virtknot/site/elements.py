"""Categories of elements, connected components, and point checkers.

The checkers here work on covariant set-valued functors.  A functor that
passes both ``filtering_check`` and ``continuity_check`` is a point of the
sheaf topos of the site; ``enumerate_points`` searches for such functors
with bounded element sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Union

from ..errors import SiteError
from .category import Arrow, FiniteCategory
from .functors import SetFunctor
from .topology import Coverage

__all__ = [
    "element_name",
    "category_of_elements",
    "pi0",
    "Filtering",
    "FilteringFailure",
    "filtering_check",
    "Continuous",
    "ContinuityFailure",
    "continuity_check",
    "enumerate_points",
]


def element_name(obj: str, element: str) -> str:
    return f"({obj},{element})"


def category_of_elements(cat: FiniteCategory, functor: SetFunctor) -> FiniteCategory:
    """Objects are pairs (C, c) with c in F(C); arrows are the f with F(f)(c1) = c2."""
    objects = []
    arrows = []
    identities = {}
    for t, obj in enumerate(cat.objects):
        for e in functor.elements[t]:
            objects.append(element_name(obj, e))
    arrow_of = {}
    for f, arrow in enumerate(cat.arrows):
        d, c = cat.dom[f], cat.cod[f]
        for i, e in enumerate(functor.elements[d]):
            image = functor.elements[c][functor.table[f][i]]
            aid = f"{arrow.id}@{e}"
            arrows.append(Arrow(aid, element_name(arrow.dom, e), element_name(arrow.cod, image)))
            arrow_of[(f, i)] = aid
            if f == cat.ident[d]:
                identities[element_name(arrow.dom, e)] = aid
    composition = {}
    for f in range(len(cat.arrows)):
        d = cat.dom[f]
        for i in range(len(functor.elements[d])):
            j = functor.table[f][i]
            for g in cat.out_of[cat.cod[f]]:
                composition[(arrow_of[(g, j)], arrow_of[(f, i)])] = arrow_of[(cat.comp[g][f], i)]
    return FiniteCategory(tuple(objects), tuple(arrows), identities, composition)


def pi0(cat: FiniteCategory) -> list[tuple[str, ...]]:
    """Connected components under zig-zags of arrows, ordered by their least object."""
    parent = list(range(len(cat.objects)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in range(len(cat.arrows)):
        a, b = find(cat.dom[f]), find(cat.cod[f])
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[str]] = {}
    for i, obj in enumerate(cat.objects):
        groups.setdefault(find(i), []).append(obj)
    return [tuple(groups[k]) for k in sorted(groups)]


@dataclass(frozen=True)
class Filtering:
    def __str__(self) -> str:
        return "Filtering"


@dataclass(frozen=True)
class FilteringFailure:
    condition: str  # "i", "ii" or "iii"
    witness: dict

    def __str__(self) -> str:
        return f"Fails({self.condition})"


def filtering_check(cat: FiniteCategory, functor: SetFunctor) -> Union[Filtering, FilteringFailure]:
    """Check nonemptiness (i), spans (ii) and equalizing arrows (iii) exhaustively."""
    elems = [(t, i) for t in range(len(cat.objects)) for i in range(len(functor.elements[t]))]
    if not elems:
        return FilteringFailure("i", {})

    def name(t: int, i: int) -> dict:
        return {"object": cat.objects[t], "element": functor.elements[t][i]}

    # reach[(D, d)] = every (C, F(f)d) for f out of D
    reach = {}
    for t, i in elems:
        reach[(t, i)] = {(cat.cod[f], functor.table[f][i]) for f in cat.out_of[t]}
    for a, b in itertools.product(elems, repeat=2):
        if not any(a in r and b in r for r in reach.values()):
            return FilteringFailure("ii", {"first": name(*a), "second": name(*b)})
    for t, i in elems:
        for f, g in itertools.product(cat.out_of[t], repeat=2):
            if f >= g or cat.cod[f] != cat.cod[g]:
                continue
            if functor.table[f][i] != functor.table[g][i]:
                continue
            ok = False
            for e in cat.into[t]:
                if cat.comp[f][e] != cat.comp[g][e]:
                    continue
                if i in functor.table[e]:
                    ok = True
                    break
            if not ok:
                return FilteringFailure("iii", {
                    **name(t, i), "arrows": [cat.arrows[f].id, cat.arrows[g].id]})
    return Filtering()


@dataclass(frozen=True)
class Continuous:
    def __str__(self) -> str:
        return "Continuous"


@dataclass(frozen=True)
class ContinuityFailure:
    object: str
    sieve: tuple[str, ...]
    element: str

    def __str__(self) -> str:
        return "Fails(continuity)"


def continuity_check(cat: FiniteCategory, coverage: Coverage,
                     functor: SetFunctor) -> Union[Continuous, ContinuityFailure]:
    """Every covering sieve must be sent to a jointly surjective family."""
    for t, obj in enumerate(cat.objects):
        for mask in sorted(coverage.get(obj, ())):
            hit = set()
            for f in range(len(cat.arrows)):
                if mask >> f & 1:
                    hit.update(functor.table[f])
            for i, e in enumerate(functor.elements[t]):
                if i not in hit:
                    return ContinuityFailure(obj, cat.ids_of(mask), e)
    return Continuous()


def _functor_key(cat: FiniteCategory, sizes: tuple[int, ...], table: list[tuple[int, ...]]) -> tuple:
    """Canonical key of a functor up to relabelling the elements of each set."""
    best = None
    for perms in itertools.product(*(itertools.permutations(range(s)) for s in sizes)):
        inverse = [_inverse(p) for p in perms]
        key = tuple(tuple(perms[cat.cod[f]][table[f][inverse[cat.dom[f]][y]]]
                          for y in range(sizes[cat.dom[f]]))
                    for f in range(len(cat.arrows)))
        if best is None or key < best:
            best = key
    return (sizes, best)


def _inverse(perm: tuple[int, ...]) -> list[int]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def enumerate_points(cat: FiniteCategory, coverage: Coverage, max_size: int = 1,
                     max_results: int = 10_000) -> list[SetFunctor]:
    """Filtering, continuous functors with all sets of size <= ``max_size``, up to isomorphism.

    The search is exhaustive for the given bound only; points needing larger
    sets are not found.
    """
    if max_size < 1:
        raise SiteError("max_size must be at least 1")
    n, m = len(cat.objects), len(cat.arrows)
    found: dict[tuple, SetFunctor] = {}
    for sizes in itertools.product(range(max_size + 1), repeat=n):
        if not any(sizes):
            continue
        if any(sizes[cat.dom[f]] and not sizes[cat.cod[f]] for f in range(m)):
            continue
        order = [f for f in range(m) if f not in cat.ident]
        table: list[tuple[int, ...] | None] = [None] * m
        for o, f in enumerate(cat.ident):
            table[f] = tuple(range(sizes[o]))

        def consistent() -> bool:
            for f in range(m):
                if table[f] is None:
                    continue
                for g in cat.out_of[cat.cod[f]]:
                    gf = cat.comp[g][f]
                    if table[g] is None or table[gf] is None:
                        continue
                    if tuple(table[g][x] for x in table[f]) != table[gf]:
                        return False
            return True

        def search(k: int) -> None:
            if len(found) >= max_results:
                return
            if k == len(order):
                functor = _make_functor(cat, sizes, table)  # type: ignore[arg-type]
                if isinstance(filtering_check(cat, functor), Filtering) and \
                        isinstance(continuity_check(cat, coverage, functor), Continuous):
                    key = _functor_key(cat, sizes, table)  # type: ignore[arg-type]
                    found.setdefault(key, functor)
                return
            f = order[k]
            for images in itertools.product(range(sizes[cat.cod[f]]), repeat=sizes[cat.dom[f]]):
                table[f] = tuple(images)
                if consistent():
                    search(k + 1)
            table[f] = None

        search(0)
    return [found[k] for k in sorted(found)]


def _make_functor(cat: FiniteCategory, sizes: tuple[int, ...], table: list[tuple[int, ...]]) -> SetFunctor:
    sets = {o: [str(i) for i in range(sizes[t])] for t, o in enumerate(cat.objects)}
    maps = {a.id: {str(i): str(table[f][i]) for i in range(sizes[cat.dom[f]])}
            for f, a in enumerate(cat.arrows)}
    return SetFunctor(cat, sets, maps)
