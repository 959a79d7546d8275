"""JSON reading and writing of finite sites, presheaves and functors.

Site files look like::

    {
      "objects": ["0", "a", "ab"],
      "arrows": [{"id": "i", "dom": "0", "cod": "a"}, ...],
      "identities": {"0": "id0", ...},
      "composition": [["j", "i", "k"], ...],
      "coverage": {"ab": [["i", "j"], ...], ...},
      "presheaf": {"sets": {...}, "maps": {"i": {"x": "y"}, ...}},
      "functor": {"sets": {...}, "maps": {...}}
    }

``composition`` triples are ``[g, f, g o f]``; those involving identities may
be omitted.  Missing identities are created as ``id_<object>``.  Instead of
objects and arrows a file may give ``"space": {"points": [...], "opens":
[[...], ...]}``, which builds the poset-of-opens site with the open-cover
coverage.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from ..errors import SiteError
from .category import Arrow, FiniteCategory, SiteCaps
from .functors import FinitePresheaf, SetFunctor
from .spaces import FiniteSpace, Site, opens_site
from .topology import coverage_from_ids, trivial_coverage

__all__ = ["SiteDocument", "load_site", "parse_site", "site_to_dict", "presheaf_to_dict"]


@dataclass(frozen=True, eq=False)
class SiteDocument:
    site: Site
    presheaf: FinitePresheaf | None = None
    functor: SetFunctor | None = None


def load_site(path: str | Path, caps: SiteCaps | None = None) -> SiteDocument:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SiteError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_site(data, caps)


def parse_site(data: dict[str, Any], caps: SiteCaps | None = None) -> SiteDocument:
    caps = caps or SiteCaps()
    if not isinstance(data, dict):
        raise SiteError("a site document must be a JSON object")
    if "space" in data:
        space_data = data["space"]
        space = FiniteSpace(tuple(space_data["points"]), tuple(frozenset(u) for u in space_data["opens"]))
        site = opens_site(space)
        if "coverage" in data:
            site = Site(site.category, coverage_from_ids(site.category, data["coverage"]), space)
    else:
        cat = _parse_category(data)
        if "coverage" in data:
            coverage = coverage_from_ids(cat, data["coverage"])
        else:
            coverage = trivial_coverage(cat)
        site = Site(cat, coverage)
    site.category.check_caps(caps)
    presheaf = functor = None
    if "presheaf" in data:
        presheaf = FinitePresheaf(site.category, data["presheaf"]["sets"], data["presheaf"].get("maps", {}))
        presheaf.check_caps(caps)
    if "functor" in data:
        functor = SetFunctor(site.category, data["functor"]["sets"], data["functor"].get("maps", {}))
        functor.check_caps(caps)
    return SiteDocument(site, presheaf, functor)


def _parse_category(data: dict[str, Any]) -> FiniteCategory:
    try:
        objects = [str(o) for o in data["objects"]]
        arrows = [Arrow(str(a["id"]), str(a["dom"]), str(a["cod"])) for a in data.get("arrows", [])]
    except (KeyError, TypeError) as exc:
        raise SiteError(f"malformed site document: {exc}") from None
    identities = {str(k): str(v) for k, v in data.get("identities", {}).items()}
    ids = {a.id for a in arrows}
    for o in objects:
        if o not in identities:
            name = f"id_{o}"
            if name in ids:
                raise SiteError(f"cannot create identity {name!r}: id already used")
            arrows.append(Arrow(name, o, o))
            identities[o] = name
    composition = {}
    for triple in data.get("composition", []):
        if len(triple) != 3:
            raise SiteError("composition entries must be [g, f, g o f]")
        g, f, h = (str(x) for x in triple)
        composition[(g, f)] = h
    return FiniteCategory(tuple(objects), tuple(arrows), identities, composition)


def site_to_dict(site: Site) -> dict[str, Any]:
    cat = site.category
    identity_ids = set(cat.identities.values())
    composition = []
    for g in range(len(cat.arrows)):
        for f in range(len(cat.arrows)):
            if cat.cod[f] != cat.dom[g]:
                continue
            if cat.arrows[g].id in identity_ids or cat.arrows[f].id in identity_ids:
                continue
            composition.append([cat.arrows[g].id, cat.arrows[f].id, cat.arrows[cat.comp[g][f]].id])
    return {
        "objects": list(cat.objects),
        "arrows": [{"id": a.id, "dom": a.dom, "cod": a.cod} for a in cat.arrows],
        "identities": dict(cat.identities),
        "composition": composition,
        "coverage": {o: [list(cat.ids_of(m)) for m in sorted(site.coverage.get(o, ()))]
                     for o in cat.objects},
    }


def presheaf_to_dict(presheaf: FinitePresheaf | SetFunctor) -> dict[str, Any]:
    return presheaf.to_dict()
