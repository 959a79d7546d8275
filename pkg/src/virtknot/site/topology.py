"""Sieves, coverages and the three Grothendieck-topology axioms.

A sieve on ``C`` is stored as a bitmask over the arrow indices of its
category.  Sieves are compared and listed in increasing mask order, which
together with the object order fixes every witness returned here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from ..errors import CompositionMismatch, SiteError, WrongCodomain
from .category import FiniteCategory

__all__ = [
    "Sieve",
    "Coverage",
    "Valid",
    "Violation",
    "generate_sieve",
    "pullback_sieve",
    "maximal_sieve",
    "all_sieves",
    "is_sieve",
    "is_topology",
    "trivial_coverage",
    "coverage_from_ids",
]


@dataclass(frozen=True)
class Sieve:
    target: str
    mask: int

    def arrows(self, cat: FiniteCategory) -> tuple[str, ...]:
        return cat.ids_of(self.mask)

    def __contains__(self, arrow_index: int) -> bool:
        return bool(self.mask >> arrow_index & 1)


# Coverage: object id -> set of sieve masks on that object
Coverage = Mapping[str, frozenset[int]]


@dataclass(frozen=True)
class Valid:
    def __str__(self) -> str:
        return "Valid"


@dataclass(frozen=True)
class Violation:
    axiom: str  # "maximal", "stability" or "transitivity"
    witness: dict

    def __str__(self) -> str:
        return f"Violation({self.axiom})"


TopologyResult = Union[Valid, Violation]


def _close(cat: FiniteCategory, mask: int) -> int:
    """Least sieve containing the arrows of ``mask`` (closure under precomposition)."""
    todo = [i for i in range(len(cat.arrows)) if mask >> i & 1]
    while todo:
        f = todo.pop()
        for g in cat.into[cat.dom[f]]:
            h = cat.comp[f][g]
            if not mask >> h & 1:
                mask |= 1 << h
                todo.append(h)
    return mask


def generate_sieve(cat: FiniteCategory, target: str, seeds: Iterable[str]) -> Sieve:
    """Least sieve on ``target`` containing every seed arrow."""
    t = cat.obj_index[target]
    mask = 0
    for a in seeds:
        i = cat.arrow_index.get(a)
        if i is None:
            raise SiteError(f"unknown arrow {a!r}")
        if cat.cod[i] != t:
            raise WrongCodomain(f"arrow {a!r} does not have codomain {target!r}")
        mask |= 1 << i
    return Sieve(target, _close(cat, mask))


def maximal_sieve(cat: FiniteCategory, target: str) -> Sieve:
    return Sieve(target, _maximal_mask(cat, cat.obj_index[target]))


def _maximal_mask(cat: FiniteCategory, t: int) -> int:
    mask = 0
    for i in cat.into[t]:
        mask |= 1 << i
    return mask


def _pullback_mask(cat: FiniteCategory, f: int, mask: int) -> int:
    out = 0
    for g in cat.into[cat.dom[f]]:
        if mask >> cat.comp[f][g] & 1:
            out |= 1 << g
    return out


def pullback_sieve(cat: FiniteCategory, f: str, sieve: Sieve) -> Sieve:
    """``f*(S) = {g : f o g in S}``, a sieve on the domain of ``f``."""
    i = cat.arrow_index[f]
    if cat.objects[cat.cod[i]] != sieve.target:
        raise CompositionMismatch(f"arrow {f!r} does not land on {sieve.target!r}")
    return Sieve(cat.objects[cat.dom[i]], _pullback_mask(cat, i, sieve.mask))


def is_sieve(cat: FiniteCategory, target: str, mask: int) -> bool:
    t = cat.obj_index[target]
    if mask & ~_maximal_mask(cat, t):
        return False
    return _close(cat, mask) == mask


def _all_sieve_masks(cat: FiniteCategory, t: int) -> list[int]:
    principal = sorted({_close(cat, 1 << f) for f in cat.into[t]})
    found = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            for p in principal:
                u = s | p
                if u not in found:
                    found.add(u)
                    nxt.append(u)
        frontier = nxt
    return sorted(found)


def all_sieves(cat: FiniteCategory, target: str) -> list[Sieve]:
    """Every sieve on ``target`` (unions of principal sieves), in mask order."""
    return [Sieve(target, m) for m in _all_sieve_masks(cat, cat.obj_index[target])]


def trivial_coverage(cat: FiniteCategory) -> dict[str, frozenset[int]]:
    """Only the maximal sieve covers each object."""
    return {o: frozenset([_maximal_mask(cat, i)]) for i, o in enumerate(cat.objects)}


def coverage_from_ids(cat: FiniteCategory, data: Mapping[str, Iterable[Iterable[str]]]) -> dict[str, frozenset[int]]:
    """Build a coverage from arrow-id lists; each list is closed to a sieve."""
    out: dict[str, frozenset[int]] = {o: frozenset() for o in cat.objects}
    for obj, sieves in data.items():
        if obj not in cat.obj_index:
            raise SiteError(f"coverage names unknown object {obj!r}")
        out[obj] = frozenset(generate_sieve(cat, obj, ids).mask for ids in sieves)
    return out


def is_topology(cat: FiniteCategory, coverage: Coverage) -> TopologyResult:
    """Check maximality, stability and transitivity exhaustively.

    Returns the first violation in the order: axiom, object, sieve mask,
    arrow index.
    """
    cov = [frozenset(coverage.get(o, ())) for o in cat.objects]
    for t, obj in enumerate(cat.objects):
        for mask in sorted(cov[t]):
            if not is_sieve(cat, obj, mask):
                raise SiteError(f"coverage of {obj!r} contains a non-sieve")
    for t, obj in enumerate(cat.objects):
        if _maximal_mask(cat, t) not in cov[t]:
            return Violation("maximal", {"object": obj})
    for t, obj in enumerate(cat.objects):
        for mask in sorted(cov[t]):
            for f in cat.into[t]:
                pulled = _pullback_mask(cat, f, mask)
                if pulled not in cov[cat.dom[f]]:
                    return Violation("stability", {
                        "object": obj,
                        "sieve": list(cat.ids_of(mask)),
                        "arrow": cat.arrows[f].id,
                        "pullback": list(cat.ids_of(pulled)),
                    })
    for t, obj in enumerate(cat.objects):
        covering = sorted(cov[t])
        for r in _all_sieve_masks(cat, t):
            if r in cov[t]:
                continue
            # arrows along which R pulls back to a cover
            local = 0
            for f in cat.into[t]:
                if _pullback_mask(cat, f, r) in cov[cat.dom[f]]:
                    local |= 1 << f
            for s in covering:
                if s & ~local == 0:
                    return Violation("transitivity", {
                        "object": obj,
                        "sieve": list(cat.ids_of(r)),
                        "covering": list(cat.ids_of(s)),
                    })
    return Valid()
