"""Finite topological spaces and their poset-of-opens sites.

Open sets are named ``{a,b}`` (points sorted by their declared order) and
the empty open is ``{}``.  The site of a space has one object per open, an
arrow ``U->V`` per inclusion, and the open-cover coverage: a sieve covers
``U`` when the union of the domains of its arrows is ``U``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..errors import SiteError
from .category import FiniteCategory, poset_category
from .functors import FinitePresheaf, SetFunctor
from .topology import _all_sieve_masks

__all__ = [
    "FiniteSpace",
    "Site",
    "enumerate_topologies",
    "opens_site",
    "points_functor",
    "stalk_functor",
    "sections_presheaf",
    "intersection_of_images",
]

POINT_NAMES = "abcdefgh"


@dataclass(frozen=True)
class FiniteSpace:
    points: tuple[str, ...]
    opens: tuple[frozenset[str], ...]
    _order: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        points = tuple(str(p) for p in self.points)
        if len(set(points)) != len(points):
            raise SiteError("duplicate points")
        order = {p: i for i, p in enumerate(points)}
        opens = {frozenset(str(x) for x in u) for u in self.opens}
        for u in opens:
            if not u <= set(points):
                raise SiteError("an open set mentions an unknown point")
        opens |= {frozenset(), frozenset(points)}
        for u, v in itertools.combinations(list(opens), 2):
            if u | v not in opens or u & v not in opens:
                raise SiteError("open sets are not closed under union and intersection")
        ordered = tuple(sorted(opens, key=lambda u: (len(u), sorted(order[p] for p in u))))
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "opens", ordered)
        object.__setattr__(self, "_order", order)

    def name(self, u: Iterable[str]) -> str:
        return "{" + ",".join(sorted(u, key=self._order.__getitem__)) + "}"

    def minimal_neighbourhood(self, x: str) -> frozenset[str]:
        out = frozenset(self.points)
        for u in self.opens:
            if x in u:
                out &= u
        return out

    def kolmogorov_class(self, x: str) -> frozenset[str]:
        """Points with exactly the same open neighbourhoods as ``x``."""
        ux = self.minimal_neighbourhood(x)
        return frozenset(y for y in self.points if self.minimal_neighbourhood(y) == ux)

    def is_t0(self) -> bool:
        return all(len(self.kolmogorov_class(x)) == 1 for x in self.points)

    def components(self) -> list[frozenset[str]]:
        """Connected components; points sharing a minimal neighbourhood are linked."""
        parent = {p: p for p in self.points}

        def find(p: str) -> str:
            while parent[p] != p:
                p = parent[p]
            return p

        for x in self.points:
            for y in self.minimal_neighbourhood(x):
                a, b = find(x), find(y)
                if a != b:
                    parent[b] = a
        groups: dict[str, set[str]] = {}
        for p in self.points:
            groups.setdefault(find(p), set()).add(p)
        return sorted((frozenset(g) for g in groups.values()),
                      key=lambda g: min(self._order[p] for p in g))


@dataclass(frozen=True, eq=False)
class Site:
    category: FiniteCategory
    coverage: dict[str, frozenset[int]]
    space: FiniteSpace | None = None


def enumerate_topologies(n: int) -> list[FiniteSpace]:
    """Every topology on the points a, b, ... (n of them), via their specialization preorders."""
    if not 0 <= n <= len(POINT_NAMES):
        raise SiteError("too many points")
    points = POINT_NAMES[:n]
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    spaces = []
    for bits in range(1 << len(pairs)):
        rel = {(i, i) for i in range(n)}
        rel |= {pairs[k] for k in range(len(pairs)) if bits >> k & 1}
        if any((i, k) not in rel for (i, j) in rel for (j2, k) in rel if j == j2):
            continue
        # opens are the up-closed sets of the preorder
        opens = []
        for mask in range(1 << n):
            members = {i for i in range(n) if mask >> i & 1}
            if all(j in members for (i, j) in rel if i in members):
                opens.append(frozenset(points[i] for i in members))
        spaces.append(FiniteSpace(tuple(points), tuple(opens)))
    return spaces


def opens_site(space: FiniteSpace) -> Site:
    """Poset of opens with the open-cover coverage."""
    names = [space.name(u) for u in space.opens]
    by_name = dict(zip(names, space.opens))
    cat = poset_category(names, lambda a, b: by_name[a] <= by_name[b])
    coverage = {}
    for t, obj in enumerate(cat.objects):
        target = by_name[obj]
        covers = []
        for mask in _all_sieve_masks(cat, t):
            union: frozenset[str] = frozenset()
            for f in range(len(cat.arrows)):
                if mask >> f & 1:
                    union |= by_name[cat.arrows[f].dom]
            if union == target:
                covers.append(mask)
        coverage[obj] = frozenset(covers)
    return Site(cat, coverage, space)


def _open_of(site: Site, obj: str) -> frozenset[str]:
    assert site.space is not None
    for u in site.space.opens:
        if site.space.name(u) == obj:
            return u
    raise SiteError(f"{obj!r} is not an open of the space")


def points_functor(site: Site) -> SetFunctor:
    """U -> the points of U, arrows acting by inclusion."""
    cat = site.category
    sets = {o: sorted(_open_of(site, o), key=site.space._order.__getitem__) for o in cat.objects}
    maps = {a.id: {p: p for p in sets[a.dom]} for a in cat.arrows}
    return SetFunctor(cat, sets, maps)


def stalk_functor(site: Site, x: str) -> SetFunctor:
    """U -> {*} if x is in U, else the empty set."""
    cat = site.category
    sets = {o: (["*"] if x in _open_of(site, o) else []) for o in cat.objects}
    maps = {a.id: {e: "*" for e in sets[a.dom]} for a in cat.arrows}
    return SetFunctor(cat, sets, maps)


def sections_presheaf(site: Site, values: Sequence[str]) -> FinitePresheaf:
    """Continuous sections of the projection (discrete values) x X -> X: locally constant maps."""
    space = site.space
    assert space is not None
    values = [str(v) for v in values]
    cat = site.category
    sets: dict[str, list[str]] = {}
    for o in cat.objects:
        u = sorted(_open_of(site, o), key=space._order.__getitem__)
        sections = []
        for choice in itertools.product(values, repeat=len(u)):
            fibres = {}
            for p, v in zip(u, choice):
                fibres.setdefault(v, set()).add(p)
            if all(frozenset(f) in space.opens for f in fibres.values()):
                sections.append(_section_name(u, choice))
        sets[o] = sections
    maps = {}
    for a in cat.arrows:
        small = sorted(_open_of(site, a.dom), key=space._order.__getitem__)
        mapping = {}
        for s in sets[a.cod]:
            assignment = _parse_section(s)
            mapping[s] = _section_name(small, [assignment[p] for p in small])
        maps[a.id] = mapping
    return FinitePresheaf(cat, sets, maps)


def _section_name(points: Sequence[str], values: Sequence[str]) -> str:
    return "[" + ",".join(f"{p}:{v}" for p, v in zip(points, values)) + "]"


def _parse_section(name: str) -> dict[str, str]:
    body = name[1:-1]
    if not body:
        return {}
    return dict(item.split(":", 1) for item in body.split(","))


def intersection_of_images(site: Site, functor: SetFunctor, obj: str, element: str) -> frozenset[frozenset[str]]:
    """Points singled out by an element of a functor on a space site.

    Let S_u be the arrows V -> U whose image contains ``element``.  The
    intersection of their domains is computed, and the result is the set of
    points (taken up to topological indistinguishability) whose minimal
    neighbourhood is exactly that intersection.
    """
    space = site.space
    if space is None:
        raise SiteError("the site has no underlying space")
    cat = site.category
    t = cat.obj_index[obj]
    i = functor.index[t][element]
    common = frozenset(space.points)
    for f in cat.into[t]:
        if i in functor.table[f]:
            common &= _open_of(site, cat.arrows[f].dom)
    return frozenset(space.kolmogorov_class(x) for x in space.points
                     if space.minimal_neighbourhood(x) == common)
