"""Finite categories with exhaustively validated composition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from ..errors import CompositionMismatch, SiteError

__all__ = ["Arrow", "FiniteCategory", "SiteCaps", "poset_category", "discrete_category"]


@dataclass(frozen=True)
class Arrow:
    id: str
    dom: str
    cod: str


@dataclass(frozen=True)
class SiteCaps:
    """Size limits applied to user-supplied sites, functors and presheaves."""

    max_objects: int = 8
    max_arrows: int = 40
    max_elements: int = 6

    def __post_init__(self) -> None:
        if min(self.max_objects, self.max_arrows, self.max_elements) <= 0:
            raise SiteError("site caps must be positive")


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """A small category given by explicit objects, arrows and a composition table.

    ``composition`` maps ``(g, f)`` to ``g o f`` whenever ``cod(f) == dom(g)``.
    Entries involving identities may be omitted; they are filled in.  The
    table is checked for totality, typing, unit laws and associativity.

    Arrows are also addressed by their index in ``arrows``, which fixes the
    deterministic order used for witnesses and bitmask sieves.
    """

    objects: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    identities: Mapping[str, str]
    composition: Mapping[tuple[str, str], str]
    # derived index tables
    obj_index: dict[str, int] = field(init=False, repr=False)
    arrow_index: dict[str, int] = field(init=False, repr=False)
    dom: tuple[int, ...] = field(init=False, repr=False)
    cod: tuple[int, ...] = field(init=False, repr=False)
    ident: tuple[int, ...] = field(init=False, repr=False)
    comp: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    into: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    out_of: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        objects = tuple(str(o) for o in self.objects)
        if len(set(objects)) != len(objects):
            raise SiteError("duplicate object ids")
        obj_index = {o: i for i, o in enumerate(objects)}
        arrows = tuple(self.arrows)
        arrow_index: dict[str, int] = {}
        for i, a in enumerate(arrows):
            if a.id in arrow_index:
                raise SiteError(f"duplicate arrow id {a.id!r}")
            if a.dom not in obj_index or a.cod not in obj_index:
                raise SiteError(f"arrow {a.id!r} has an unknown endpoint")
            arrow_index[a.id] = i
        ident = []
        for o in objects:
            a = self.identities.get(o)
            if a not in arrow_index:
                raise SiteError(f"object {o!r} has no identity arrow")
            if arrows[arrow_index[a]].dom != o or arrows[arrow_index[a]].cod != o:
                raise SiteError(f"identity {a!r} of {o!r} is not an endomorphism")
            ident.append(arrow_index[a])
        dom = tuple(obj_index[a.dom] for a in arrows)
        cod = tuple(obj_index[a.cod] for a in arrows)
        m = len(arrows)
        table = [[-1] * m for _ in range(m)]
        for (g, f), h in self.composition.items():
            for name in (g, f, h):
                if name not in arrow_index:
                    raise SiteError(f"composition mentions unknown arrow {name!r}")
            gi, fi, hi = arrow_index[g], arrow_index[f], arrow_index[h]
            if cod[fi] != dom[gi]:
                raise CompositionMismatch(f"{g} o {f} is not composable")
            if dom[hi] != dom[fi] or cod[hi] != cod[gi]:
                raise CompositionMismatch(f"{g} o {f} = {h} has the wrong type")
            table[gi][fi] = hi
        for f in range(m):
            # f o id = f and id o f = f
            for g, h in ((f, ident[dom[f]]), (ident[cod[f]], f)):
                if table[g][h] not in (-1, f):
                    raise SiteError(f"identity law fails for {arrows[f].id}")
                table[g][h] = f
        for g in range(m):
            for f in range(m):
                if cod[f] == dom[g] and table[g][f] < 0:
                    raise CompositionMismatch(
                        f"composition {arrows[g].id} o {arrows[f].id} is missing")
        into = tuple(tuple(i for i in range(m) if cod[i] == c) for c in range(len(objects)))
        out_of = tuple(tuple(i for i in range(m) if dom[i] == c) for c in range(len(objects)))
        for h in range(m):
            for g in out_of[cod[h]]:
                gh = table[g][h]
                for f in out_of[cod[g]]:
                    if table[f][gh] != table[table[f][g]][h]:
                        raise SiteError(
                            f"composition is not associative at "
                            f"({arrows[f].id}, {arrows[g].id}, {arrows[h].id})")
        set_ = object.__setattr__
        set_(self, "objects", objects)
        set_(self, "arrows", arrows)
        set_(self, "identities", dict(self.identities))
        set_(self, "obj_index", obj_index)
        set_(self, "arrow_index", arrow_index)
        set_(self, "dom", dom)
        set_(self, "cod", cod)
        set_(self, "ident", tuple(ident))
        set_(self, "comp", tuple(tuple(row) for row in table))
        set_(self, "into", into)
        set_(self, "out_of", out_of)

    # sizes ---------------------------------------------------------------
    def check_caps(self, caps: SiteCaps) -> None:
        if len(self.objects) > caps.max_objects:
            raise SiteError(f"{len(self.objects)} objects exceeds the cap {caps.max_objects}")
        if len(self.arrows) > caps.max_arrows:
            raise SiteError(f"{len(self.arrows)} arrows exceeds the cap {caps.max_arrows}")

    # lookups -------------------------------------------------------------
    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self.arrows[self.arrow_index[arrow_id]]
        except KeyError:
            raise SiteError(f"unknown arrow {arrow_id!r}") from None

    def compose(self, g: str, f: str) -> str:
        """The arrow ``g o f`` (apply ``f`` first)."""
        gi, fi = self.arrow_index[g], self.arrow_index[f]
        if self.cod[fi] != self.dom[gi]:
            raise CompositionMismatch(f"{g} o {f} is not composable")
        return self.arrows[self.comp[gi][fi]].id

    def hom(self, a: str, b: str) -> list[str]:
        ai, bi = self.obj_index[a], self.obj_index[b]
        return [self.arrows[i].id for i in self.out_of[ai] if self.cod[i] == bi]

    def mask_of(self, arrow_ids: Iterable[str]) -> int:
        mask = 0
        for a in arrow_ids:
            if a not in self.arrow_index:
                raise SiteError(f"unknown arrow {a!r}")
            mask |= 1 << self.arrow_index[a]
        return mask

    def ids_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.arrows[i].id for i in range(len(self.arrows)) if mask >> i & 1)


def poset_category(elements: Sequence[str], leq) -> FiniteCategory:
    """Category of a finite preorder: one arrow ``a->b`` whenever ``leq(a, b)``."""
    elements = list(elements)
    arrows = []
    for a in elements:
        for b in elements:
            if leq(a, b):
                arrows.append(Arrow(f"{a}->{b}", a, b))
    ids = {a: f"{a}->{a}" for a in elements}
    composition = {}
    for x in elements:
        for y in elements:
            if not leq(x, y):
                continue
            for z in elements:
                if leq(y, z):
                    composition[(f"{y}->{z}", f"{x}->{y}")] = f"{x}->{z}"
    return FiniteCategory(tuple(elements), tuple(arrows), ids, composition)


def discrete_category(objects: Sequence[str]) -> FiniteCategory:
    return poset_category(objects, lambda a, b: a == b)
