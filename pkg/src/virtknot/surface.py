"""Abstract knot diagram surface (ribbon graph) built from a Gauss code.

Each classical crossing becomes a disc with four half-edges and each arc of
the code becomes an untwisted band.  The boundary curves are the orbits of
``rotation o band``; capping them with discs gives a closed oriented surface
whose genus is ``(2 - chi - b) / 2``.

Corner table
------------
Half-edges at a crossing are labelled ``OO`` (over, outgoing), ``OI`` (over,
incoming), ``UO`` and ``UI``.  Counter-clockwise cyclic order::

    sign +1:  OO, UO, OI, UI
    sign -1:  OO, UI, OI, UO

This is the only place the convention lives; the boundary tracer, the DOT
export and the bracket state sum all read it from ``ROTATION``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gauss import GaussCode

__all__ = [
    "ROTATION",
    "RibbonSurface",
    "build_ribbon",
    "boundary_count",
    "diagram_genus",
    "half_edges",
    "to_dot",
]

ROTATION = {
    1: ("OO", "UO", "OI", "UI"),
    -1: ("OO", "UI", "OI", "UO"),
}

HalfEdge = tuple[int, str]


def half_edges(code: GaussCode) -> tuple[dict[HalfEdge, HalfEdge], dict[HalfEdge, HalfEdge]]:
    """Return (band involution, counter-clockwise successor) on half-edges."""
    passes = code.passes
    length = len(passes)
    band: dict[HalfEdge, HalfEdge] = {}
    for i, p in enumerate(passes):
        q = passes[(i + 1) % length]
        out = (p.crossing, "OO" if p.over else "UO")
        inc = (q.crossing, "OI" if q.over else "UI")
        band[out] = inc
        band[inc] = out
    succ: dict[HalfEdge, HalfEdge] = {}
    for p in passes:
        if p.over:
            order = ROTATION[p.sign]
            for k in range(4):
                succ[(p.crossing, order[k])] = (p.crossing, order[(k + 1) % 4])
    return band, succ


@dataclass(frozen=True)
class RibbonSurface:
    vertices: tuple[int, ...]
    bands: tuple[tuple[HalfEdge, HalfEdge], ...]
    boundary_curves: int
    euler_characteristic: int
    genus: int
    boundaries: tuple[tuple[HalfEdge, ...], ...] = ()

    @property
    def closed_genus(self) -> int:
        return self.genus


def _trace(band: dict[HalfEdge, HalfEdge], succ: dict[HalfEdge, HalfEdge]) -> list[tuple[HalfEdge, ...]]:
    seen: set[HalfEdge] = set()
    orbits = []
    for start in sorted(band):
        if start in seen:
            continue
        orbit = []
        h = start
        while h not in seen:
            seen.add(h)
            orbit.append(h)
            h = succ[band[h]]
        orbits.append(tuple(orbit))
    return orbits


def build_ribbon(code: GaussCode) -> RibbonSurface:
    """Ribbon surface of the abstract knot diagram of ``code``.

    The crossingless diagram uses the annulus convention: chi = 0, b = 2,
    genus 0.
    """
    if code.n == 0:
        return RibbonSurface((), (), 2, 0, 0)
    band, succ = half_edges(code)
    orbits = _trace(band, succ)
    v = code.n
    e = len(band) // 2
    chi = v - e
    b = len(orbits)
    twice_genus = 2 - chi - b
    assert twice_genus >= 0 and twice_genus % 2 == 0, "ribbon graph data is inconsistent"
    bands = tuple(sorted({tuple(sorted((h, band[h]))) for h in band}))
    return RibbonSurface(tuple(code.crossings()), bands, b, chi, twice_genus // 2, tuple(orbits))


def boundary_count(code: GaussCode) -> int:
    return build_ribbon(code).boundary_curves


def diagram_genus(code: GaussCode) -> int:
    """Genus of the closed surface carrying this diagram; 0 iff the code is classical.

    Not a knot invariant: Reidemeister moves can change it.
    """
    return build_ribbon(code).genus


def to_dot(code: GaussCode) -> str:
    """DOT rendering of the ribbon graph (one node per crossing, one edge per band)."""
    lines = ["graph ribbon {", '  node [shape=circle];']
    if code.n == 0:
        lines.append('  loop [label="()"];')
        lines.append("  loop -- loop;")
    for c in code.crossings():
        sign = code.sign(c)
        rot = " ".join(ROTATION[sign])
        lines.append(f'  c{c} [label="{c}{"+" if sign > 0 else "-"}", rotation="{rot}"];')
    passes = code.passes
    for i, p in enumerate(passes):
        q = passes[(i + 1) % len(passes)]
        tail = "OO" if p.over else "UO"
        head = "OI" if q.over else "UI"
        lines.append(f'  c{p.crossing} -- c{q.crossing} [taillabel="{tail}", headlabel="{head}"];')
    surface = build_ribbon(code)
    lines.append(f'  label="chi={surface.euler_characteristic} b={surface.boundary_curves} '
                 f'genus={surface.genus}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
