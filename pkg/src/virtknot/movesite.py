"""Finite space whose points are Gauss codes and whose opens are move classes.

Two codes lie in the same component when the bounded search finds a move
path between them.  The opens are all unions of components, so the site of
this space carries exactly the invariants that are constant on the
components found.
"""

from __future__ import annotations

from typing import Sequence

from .errors import SiteError
from .gauss import GaussCode, canonicalize, serialize
from .moves import Equivalent, search_equivalence
from .site.spaces import FiniteSpace

__all__ = ["move_classes", "move_graph_space"]


def move_classes(codes: Sequence[GaussCode], max_crossings: int, max_states: int,
                 r3: str = "cyclic") -> list[list[str]]:
    """Group distinct canonical codes into classes of codes joined by found paths."""
    classes: list[list[GaussCode]] = []
    for code in _unique(codes):
        for cls in classes:
            rep = cls[0]
            bound = max(max_crossings, code.n, rep.n)
            if isinstance(search_equivalence(code, rep, bound, max_states, r3), Equivalent):
                cls.append(code)
                break
        else:
            classes.append([code])
    return [[serialize(c) for c in cls] for cls in classes]


def _unique(codes: Sequence[GaussCode]) -> list[GaussCode]:
    seen = set()
    out = []
    for c in codes:
        k = canonicalize(c)
        if k not in seen:
            seen.add(k)
            out.append(k)
    return out


def move_graph_space(codes: Sequence[GaussCode], max_crossings: int, max_states: int,
                     r3: str = "cyclic", max_opens: int = 8) -> FiniteSpace:
    classes = move_classes(codes, max_crossings, max_states, r3)
    if 2 ** len(classes) > max_opens:
        raise SiteError(f"{len(classes)} move classes give {2 ** len(classes)} opens, "
                        f"cap is {max_opens}")
    points = tuple(p for cls in classes for p in cls)
    opens = []
    for bits in range(1 << len(classes)):
        opens.append(frozenset(p for k, cls in enumerate(classes) if bits >> k & 1 for p in cls))
    return FiniteSpace(points, tuple(opens))
