"""Finite sites: categories, Grothendieck topologies, sheaves and points.

Everything here is exhaustive: each axiom or condition is checked on every
object, arrow, sieve and family of the (small) input.
"""

from __future__ import annotations

from .category import Arrow, FiniteCategory, SiteCaps, discrete_category, poset_category
from .elements import (
    ContinuityFailure,
    Continuous,
    Filtering,
    FilteringFailure,
    category_of_elements,
    continuity_check,
    enumerate_points,
    filtering_check,
    pi0,
)
from .functors import FinitePresheaf, SetFunctor, constant_presheaf, representable_functor
from .io import SiteDocument, load_site, parse_site, site_to_dict
from .sheaves import (
    Sheaf,
    SheafFailure,
    global_invariants,
    global_sections,
    is_separated,
    matching_families,
    plus_construction,
    sheaf_check,
    sheafify,
)
from .spaces import (
    FiniteSpace,
    Site,
    enumerate_topologies,
    intersection_of_images,
    opens_site,
    points_functor,
    sections_presheaf,
    stalk_functor,
)
from .topology import (
    Sieve,
    Valid,
    Violation,
    all_sieves,
    coverage_from_ids,
    generate_sieve,
    is_sieve,
    is_topology,
    maximal_sieve,
    pullback_sieve,
    trivial_coverage,
)

__all__ = [
    "Arrow", "FiniteCategory", "SiteCaps", "discrete_category", "poset_category",
    "ContinuityFailure", "Continuous", "Filtering", "FilteringFailure",
    "category_of_elements", "continuity_check", "enumerate_points", "filtering_check", "pi0",
    "FinitePresheaf", "SetFunctor", "constant_presheaf", "representable_functor",
    "SiteDocument", "load_site", "parse_site", "site_to_dict",
    "Sheaf", "SheafFailure", "global_invariants", "global_sections", "is_separated",
    "matching_families", "plus_construction", "sheaf_check", "sheafify",
    "FiniteSpace", "Site", "enumerate_topologies", "intersection_of_images", "opens_site",
    "points_functor", "sections_presheaf", "stalk_functor",
    "Sieve", "Valid", "Violation", "all_sieves", "coverage_from_ids", "generate_sieve",
    "is_sieve", "is_topology", "maximal_sieve", "pullback_sieve", "trivial_coverage",
]
