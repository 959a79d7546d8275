"""Finite set-valued functors: presheaves (contravariant) and covariant functors.

Both are stored as element lists per object plus one mapping table per
arrow.  Internally every table is a tuple of element indices so that the
exhaustive checkers can work on integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..errors import NotFunctorial, SiteError
from .category import FiniteCategory, SiteCaps

__all__ = ["FinitePresheaf", "SetFunctor", "constant_presheaf", "representable_functor"]


@dataclass(frozen=True, eq=False)
class _SetAssignment:
    cat: FiniteCategory
    sets: Mapping[str, Sequence[str]]
    maps: Mapping[str, Mapping[str, str]]
    elements: tuple[tuple[str, ...], ...] = field(init=False, repr=False)
    index: tuple[dict[str, int], ...] = field(init=False, repr=False)
    table: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    contravariant = False

    def _source_target(self, f: int) -> tuple[int, int]:
        cat = self.cat
        if self.contravariant:
            return cat.cod[f], cat.dom[f]
        return cat.dom[f], cat.cod[f]

    def __post_init__(self) -> None:
        cat = self.cat
        elements = []
        for o in cat.objects:
            if o not in self.sets:
                raise SiteError(f"no set given for object {o!r}")
            elems = tuple(str(x) for x in self.sets[o])
            if len(set(elems)) != len(elems):
                raise SiteError(f"duplicate elements in the set of {o!r}")
            elements.append(elems)
        index = tuple({e: i for i, e in enumerate(es)} for es in elements)
        table = []
        for f, arrow in enumerate(cat.arrows):
            src, tgt = self._source_target(f)
            if f == cat.ident[cat.dom[f]] and arrow.id not in self.maps:
                table.append(tuple(range(len(elements[src]))))
                continue
            mapping = self.maps.get(arrow.id)
            if mapping is None:
                raise SiteError(f"no map given for arrow {arrow.id!r}")
            row = []
            for e in elements[src]:
                if e not in mapping:
                    raise NotFunctorial(f"map of {arrow.id!r} is undefined on {e!r}")
                image = str(mapping[e])
                if image not in index[tgt]:
                    raise NotFunctorial(f"map of {arrow.id!r} sends {e!r} outside its target")
                row.append(index[tgt][image])
            table.append(tuple(row))
        set_ = object.__setattr__
        set_(self, "elements", tuple(elements))
        set_(self, "index", index)
        set_(self, "table", tuple(table))
        self._check_functorial()

    def _check_functorial(self) -> None:
        cat = self.cat
        for o, f in enumerate(cat.ident):
            if self.table[f] != tuple(range(len(self.elements[o]))):
                raise NotFunctorial(f"identity of {cat.objects[o]!r} is not sent to the identity")
        for f in range(len(cat.arrows)):
            for g in cat.out_of[cat.cod[f]]:
                gf = cat.comp[g][f]
                if self.contravariant:
                    # P(g o f) = P(f) o P(g)
                    expected = tuple(self.table[f][x] for x in self.table[g])
                else:
                    # F(g o f) = F(g) o F(f)
                    expected = tuple(self.table[g][x] for x in self.table[f])
                if self.table[gf] != expected:
                    raise NotFunctorial(
                        f"composite {cat.arrows[g].id} o {cat.arrows[f].id} is not respected")

    def check_caps(self, caps: SiteCaps) -> None:
        for o, es in zip(self.cat.objects, self.elements):
            if len(es) > caps.max_elements:
                raise SiteError(f"set of {o!r} has {len(es)} elements, cap is {caps.max_elements}")

    def of(self, obj: str) -> tuple[str, ...]:
        return self.elements[self.cat.obj_index[obj]]

    def apply(self, arrow: str, element: str) -> str:
        f = self.cat.arrow_index[arrow]
        src, tgt = self._source_target(f)
        return self.elements[tgt][self.table[f][self.index[src][element]]]

    def to_dict(self) -> dict:
        cat = self.cat
        maps = {}
        for f, arrow in enumerate(cat.arrows):
            src, tgt = self._source_target(f)
            maps[arrow.id] = {e: self.elements[tgt][self.table[f][i]]
                              for i, e in enumerate(self.elements[src])}
        return {"sets": {o: list(es) for o, es in zip(cat.objects, self.elements)}, "maps": maps}


class FinitePresheaf(_SetAssignment):
    """Contravariant functor: the map of ``f: D -> C`` sends P(C) to P(D)."""

    contravariant = True


class SetFunctor(_SetAssignment):
    """Covariant functor: the map of ``f: D -> C`` sends F(D) to F(C)."""

    contravariant = False


def constant_presheaf(cat: FiniteCategory, values: Sequence[str]) -> FinitePresheaf:
    """The constant presheaf with every restriction the identity."""
    values = [str(v) for v in values]
    return FinitePresheaf(cat, {o: values for o in cat.objects},
                          {a.id: {v: v for v in values} for a in cat.arrows})


def representable_functor(cat: FiniteCategory, obj: str) -> SetFunctor:
    """``Hom(obj, -)`` with arrows acting by postcomposition."""
    sets = {o: cat.hom(obj, o) for o in cat.objects}
    maps = {}
    for a in cat.arrows:
        maps[a.id] = {h: cat.compose(a.id, h) for h in sets[a.dom]}
    return SetFunctor(cat, sets, maps)
