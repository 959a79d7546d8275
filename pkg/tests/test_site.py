from __future__ import annotations

import itertools
import json

import pytest

from conftest import seeded
from oracles import random_concrete_category
from virtknot.errors import CompositionMismatch, NotFunctorial, SiteError, WrongCodomain
from virtknot.site import (
    Arrow,
    ContinuityFailure,
    Continuous,
    FiniteCategory,
    FinitePresheaf,
    FiniteSpace,
    Filtering,
    FilteringFailure,
    SetFunctor,
    Sheaf,
    SheafFailure,
    SiteCaps,
    Valid,
    Violation,
    all_sieves,
    category_of_elements,
    constant_presheaf,
    continuity_check,
    coverage_from_ids,
    discrete_category,
    enumerate_points,
    enumerate_topologies,
    filtering_check,
    generate_sieve,
    global_invariants,
    global_sections,
    intersection_of_images,
    is_separated,
    is_sieve,
    is_topology,
    load_site,
    maximal_sieve,
    opens_site,
    parse_site,
    pi0,
    plus_construction,
    points_functor,
    poset_category,
    pullback_sieve,
    representable_functor,
    sections_presheaf,
    sheaf_check,
    sheafify,
    site_to_dict,
    stalk_functor,
    trivial_coverage,
)

SIERPINSKI = FiniteSpace(("a", "b"), (frozenset("a"),))
DISCRETE2 = FiniteSpace(("a", "b"), (frozenset("a"), frozenset("b")))
INDISCRETE2 = FiniteSpace(("a", "b"), ())


def chain(n: int) -> FiniteCategory:
    return poset_category([str(i) for i in range(n)], lambda x, y: int(x) <= int(y))


# ---------------------------------------------------------------- categories


def test_category_validation():
    objs = ("x",)
    arrows = (Arrow("1", "x", "x"), Arrow("e", "x", "x"))
    with pytest.raises(CompositionMismatch, match="missing"):
        FiniteCategory(objs, arrows, {"x": "1"}, {})
    # e o e = 1 and e o e = e are both fine; an identity clash is not
    FiniteCategory(objs, arrows, {"x": "1"}, {("e", "e"): "e"})
    with pytest.raises(SiteError, match="identity"):
        FiniteCategory(objs, arrows, {"x": "1"}, {("e", "e"): "e", ("1", "e"): "1"})
    with pytest.raises(SiteError, match="no identity"):
        FiniteCategory(objs, arrows, {}, {("e", "e"): "e"})


def test_non_associative_table_is_rejected():
    objs = ("x",)
    arrows = (Arrow("1", "x", "x"), Arrow("p", "x", "x"), Arrow("q", "x", "x"))
    # p and q act as left zeros except p o q = 1, which breaks associativity
    comp = {("p", "p"): "p", ("p", "q"): "1", ("q", "p"): "q", ("q", "q"): "q"}
    with pytest.raises(SiteError, match="associative"):
        FiniteCategory(objs, arrows, {"x": "1"}, comp)


def test_caps():
    cat = chain(3)
    cat.check_caps(SiteCaps())
    with pytest.raises(SiteError):
        cat.check_caps(SiteCaps(max_objects=2))
    with pytest.raises(SiteError):
        SiteCaps(max_arrows=0)


# ---------------------------------------------------------------- sieves


def test_sierpinski_sieves():
    site = opens_site(SIERPINSKI)
    cat = site.category
    assert cat.objects == ("{}", "{a}", "{a,b}")
    s = generate_sieve(cat, "{a,b}", ["{a}->{a,b}"])
    assert set(s.arrows(cat)) == {"{}->{a,b}", "{a}->{a,b}"}
    pulled = pullback_sieve(cat, "{a}->{a,b}", s)
    assert pulled == maximal_sieve(cat, "{a}")


def test_generate_sieve_trivial_cases():
    cat = chain(3)
    assert generate_sieve(cat, "2", ["2->2"]) == maximal_sieve(cat, "2")
    assert generate_sieve(cat, "2", []).mask == 0
    with pytest.raises(WrongCodomain):
        generate_sieve(cat, "2", ["0->1"])


def test_pullback_trivial_cases():
    cat = chain(3)
    for s in all_sieves(cat, "2"):
        assert pullback_sieve(cat, "2->2", s) == s
    assert pullback_sieve(cat, "0->2", maximal_sieve(cat, "2")) == maximal_sieve(cat, "0")
    with pytest.raises(CompositionMismatch):
        pullback_sieve(cat, "0->1", maximal_sieve(cat, "2"))


def test_generated_and_pulled_back_sieves_are_sieves():
    rng = seeded(61)
    for _ in range(100):
        cat = random_concrete_category(rng, max_arrows=16)
        for obj in cat.objects:
            into = [a.id for a in cat.arrows if a.cod == obj]
            seeds = [a for a in into if rng.random() < 0.4]
            s = generate_sieve(cat, obj, seeds)
            assert is_sieve(cat, obj, s.mask)
            for sieve in all_sieves(cat, obj):
                for f in into:
                    pulled = pullback_sieve(cat, f, sieve)
                    assert is_sieve(cat, pulled.target, pulled.mask)


# ---------------------------------------------------------------- topologies


def test_trivial_and_open_cover_coverages_are_topologies():
    cat = chain(3)
    assert isinstance(is_topology(cat, trivial_coverage(cat)), Valid)
    site = opens_site(SIERPINSKI)
    assert isinstance(is_topology(site.category, site.coverage), Valid)


def test_missing_maximal_sieve():
    cat = chain(2)
    result = is_topology(cat, {"0": frozenset(), "1": trivial_coverage(cat)["1"]})
    assert isinstance(result, Violation) and result.axiom == "maximal"
    assert result.witness == {"object": "0"}


def test_stability_counterexample():
    cat = chain(2)
    coverage = coverage_from_ids(cat, {"0": [["0->0"]], "1": [["1->1"], []]})
    result = is_topology(cat, coverage)
    assert isinstance(result, Violation) and result.axiom == "stability"
    assert result.witness["object"] == "1" and result.witness["sieve"] == []
    assert result.witness["arrow"] == "0->1"


def test_transitivity_counterexample():
    cat = chain(3)
    coverage = coverage_from_ids(cat, {
        "0": [["0->0"]],
        "1": [["1->1"], ["0->1"]],
        "2": [["2->2"], ["1->2"]],
    })
    result = is_topology(cat, coverage)
    assert isinstance(result, Violation) and result.axiom == "transitivity"
    assert result.witness["sieve"] == ["0->2"]


def test_topology_counts():
    assert [len(enumerate_topologies(n)) for n in range(5)] == [1, 1, 4, 29, 355]


# ---------------------------------------------------------------- sheaves


def test_trivial_coverage_makes_every_presheaf_a_sheaf():
    cat = chain(3)
    sets = {"0": ["x", "y"], "1": ["x", "y"], "2": ["z"]}
    maps = {"1->2": {"z": "x"}, "0->2": {"z": "y"}, "0->1": {"x": "y", "y": "y"}}
    presheaf = FinitePresheaf(cat, sets, maps)
    assert isinstance(sheaf_check(cat, trivial_coverage(cat), presheaf), Sheaf)


def test_constant_presheaf_on_discrete_space_fails():
    site = opens_site(DISCRETE2)
    result = sheaf_check(site.category, site.coverage, constant_presheaf(site.category, ["0", "1"]))
    assert isinstance(result, SheafFailure)
    assert result.reason in ("NoAmalgamation", "NonUnique")
    # the empty cover of the empty open has one (empty) family and two amalgamations
    assert (result.object, result.sieve, result.reason) == ("{}", (), "NonUnique")


def test_sections_presheaf_is_a_sheaf():
    for space in (DISCRETE2, SIERPINSKI, INDISCRETE2):
        site = opens_site(space)
        presheaf = sections_presheaf(site, ["0", "1"])
        assert isinstance(sheaf_check(site.category, site.coverage, presheaf), Sheaf)
    site = opens_site(DISCRETE2)
    assert len(sections_presheaf(site, ["0", "1"]).of("{a,b}")) == 4


def _isomorphic(cat, p, q) -> bool:
    """Brute-force search for object-wise bijections commuting with restrictions."""
    sizes = [len(p.elements[t]) for t in range(len(cat.objects))]
    if sizes != [len(q.elements[t]) for t in range(len(cat.objects))]:
        return False
    for perms in itertools.product(*(itertools.permutations(range(s)) for s in sizes)):
        if all(perms[cat.dom[f]][p.table[f][x]] == q.table[f][perms[cat.cod[f]][x]]
               for f in range(len(cat.arrows)) for x in range(sizes[cat.cod[f]])):
            return True
    return False


def test_plus_construction_fixes_sheaves():
    for space in (DISCRETE2, SIERPINSKI):
        site = opens_site(space)
        presheaf = sections_presheaf(site, ["0", "1"])
        plus = plus_construction(site.category, site.coverage, presheaf)
        assert _isomorphic(site.category, presheaf, plus)


def test_plus_construction_on_constant_presheaf():
    site = opens_site(DISCRETE2)
    cat, cov = site.category, site.coverage
    sheaf = sheafify(cat, cov, constant_presheaf(cat, ["0", "1"]))
    assert isinstance(sheaf_check(cat, cov, sheaf), Sheaf)
    assert len(global_sections(cat, sheaf)) == 4
    assert _isomorphic(cat, sheaf, sections_presheaf(site, ["0", "1"]))


def test_separated_presheaf_needs_one_plus():
    for n in range(4):
        for space in enumerate_topologies(n):
            site = opens_site(space)
            cat, cov = site.category, site.coverage
            presheaf = constant_presheaf(cat, ["0", "1"])
            once = plus_construction(cat, cov, presheaf)
            assert is_separated(cat, cov, once)
            assert isinstance(sheaf_check(cat, cov, plus_construction(cat, cov, once)), Sheaf)
            if is_separated(cat, cov, presheaf):
                assert isinstance(sheaf_check(cat, cov, once), Sheaf)


@pytest.mark.parametrize("space, size, expected", [
    (SIERPINSKI, 3, 3),
    (DISCRETE2, 2, 4),
    (INDISCRETE2, 2, 2),
    (DISCRETE2, 1, 1),
])
def test_global_invariant_counts(space, size, expected):
    site = opens_site(space)
    values = [str(i) for i in range(size)]
    assert len(global_invariants(site.category, site.coverage, values)) == expected


def test_global_invariants_of_trivial_group_on_any_category():
    rng = seeded(62)
    for _ in range(30):
        cat = random_concrete_category(rng, max_arrows=12)
        assert len(global_invariants(cat, trivial_coverage(cat), ["e"])) == 1


def test_presheaf_must_be_functorial():
    cat = chain(3)
    sets = {"0": ["x", "y"], "1": ["x", "y"], "2": ["x", "y"]}
    swap = {"x": "y", "y": "x"}
    ident = {"x": "x", "y": "y"}
    with pytest.raises(NotFunctorial):
        FinitePresheaf(cat, sets, {"0->1": swap, "1->2": swap, "0->2": swap})
    FinitePresheaf(cat, sets, {"0->1": swap, "1->2": swap, "0->2": ident})


# ---------------------------------------------------------------- elements and pi0


def test_elements_of_constant_singleton_on_discrete_category():
    cat = discrete_category(["p", "q", "r"])
    functor = SetFunctor(cat, {o: ["*"] for o in cat.objects}, {})
    elements = category_of_elements(cat, functor)
    assert len(elements.objects) == 3 and len(elements.arrows) == 3
    assert len(pi0(elements)) == 3


def test_elements_of_representable_on_two_object_poset():
    cat = chain(2)
    elements = category_of_elements(cat, representable_functor(cat, "0"))
    assert elements.objects == ("(0,0->0)", "(1,0->1)")
    non_identity = [a for a in elements.arrows if a.dom != a.cod]
    assert len(non_identity) == 1
    assert (non_identity[0].dom, non_identity[0].cod) == ("(0,0->0)", "(1,0->1)")


def test_empty_sets_contribute_no_elements():
    cat = chain(2)
    elements = category_of_elements(cat, representable_functor(cat, "1"))
    assert elements.objects == ("(1,1->1)",)


def test_pi0_examples():
    assert len(pi0(discrete_category(["x", "y", "z"]))) == 3
    zigzag = FiniteCategory(
        ("a", "b", "c"),
        (Arrow("ia", "a", "a"), Arrow("ib", "b", "b"), Arrow("ic", "c", "c"),
         Arrow("f", "a", "b"), Arrow("g", "c", "b")),
        {"a": "ia", "b": "ib", "c": "ic"}, {})
    assert pi0(zigzag) == [("a", "b", "c")]
    site = opens_site(DISCRETE2)
    components = pi0(category_of_elements(site.category, points_functor(site)))
    assert len(components) == 2


# ---------------------------------------------------------------- points


def test_filtering_examples():
    # meet-semilattice: {}, {a}, {b}, {a,b} under inclusion
    site = opens_site(DISCRETE2)
    cat = site.category
    for obj in cat.objects:
        assert isinstance(filtering_check(cat, representable_functor(cat, obj)), Filtering)
    empty = SetFunctor(cat, {o: [] for o in cat.objects}, {a.id: {} for a in cat.arrows})
    assert filtering_check(cat, empty) == FilteringFailure("i", {})
    two = discrete_category(["p", "q"])
    result = filtering_check(two, SetFunctor(two, {"p": ["*"], "q": ["*"]}, {}))
    assert isinstance(result, FilteringFailure) and result.condition == "ii"


def test_equalizer_condition_failure():
    # two parallel arrows u, v: X -> Y with nothing equalizing them
    cat = FiniteCategory(("X", "Y"),
                         (Arrow("1X", "X", "X"), Arrow("1Y", "Y", "Y"),
                          Arrow("u", "X", "Y"), Arrow("v", "X", "Y")),
                         {"X": "1X", "Y": "1Y"}, {})
    functor = SetFunctor(cat, {"X": ["x"], "Y": ["y"]}, {"u": {"x": "y"}, "v": {"x": "y"}})
    result = filtering_check(cat, functor)
    assert isinstance(result, FilteringFailure) and result.condition == "iii"


def test_continuity_examples():
    cat = chain(3)
    assert isinstance(continuity_check(cat, trivial_coverage(cat), representable_functor(cat, "0")),
                      Continuous)
    site = opens_site(SIERPINSKI)
    for x in "ab":
        assert isinstance(continuity_check(site.category, site.coverage, stalk_functor(site, x)),
                          Continuous)
    constant = SetFunctor(site.category, {o: ["*"] for o in site.category.objects},
                          {a.id: {"*": "*"} for a in site.category.arrows})
    result = continuity_check(site.category, site.coverage, constant)
    assert result == ContinuityFailure("{}", (), "*")


def test_intersection_of_images_picks_the_point():
    site = opens_site(SIERPINSKI)
    for x in "ab":
        functor = stalk_functor(site, x)
        for obj in site.category.objects:
            for e in functor.of(obj):
                assert intersection_of_images(site, functor, obj, e) == {frozenset(x)}
    site = opens_site(INDISCRETE2)
    functor = stalk_functor(site, "a")
    assert intersection_of_images(site, functor, "{a,b}", "*") == {frozenset("ab")}


def test_enumerated_points_match_stalks():
    for n in range(4):
        for space in enumerate_topologies(n):
            site = opens_site(space)
            points = enumerate_points(site.category, site.coverage, 1)
            classes = {space.kolmogorov_class(x) for x in space.points}
            assert len(points) == len(classes)


def test_points_functor_components_biject_with_points():
    space = FiniteSpace(("a", "b", "c"), (frozenset("a"), frozenset("ab"), frozenset("c"),
                                          frozenset("ac")))
    site = opens_site(space)
    components = pi0(category_of_elements(site.category, points_functor(site)))
    labels = [{name.rsplit(",", 1)[1].rstrip(")") for name in comp} for comp in components]
    assert sorted(map(sorted, labels)) == [["a"], ["b"], ["c"]]


# ---------------------------------------------------------------- JSON


def test_load_fixture(tmp_path):
    doc = load_site("fixtures/sierpinski.json")
    cat = doc.site.category
    assert isinstance(is_topology(cat, doc.site.coverage), Valid)
    assert doc.presheaf is not None and doc.functor is not None
    again = parse_site(json.loads(json.dumps(site_to_dict(doc.site))))
    assert again.site.category.objects == cat.objects
    assert again.site.coverage == doc.site.coverage


def test_space_shorthand_and_default_identities():
    doc = parse_site({"space": {"points": ["a", "b"], "opens": [["a"]]}})
    assert doc.site.category.objects == ("{}", "{a}", "{a,b}")
    doc = parse_site({"objects": ["x", "y"], "arrows": [{"id": "f", "dom": "x", "cod": "y"}]})
    assert doc.site.category.identities == {"x": "id_x", "y": "id_y"}
    assert isinstance(is_topology(doc.site.category, doc.site.coverage), Valid)


@pytest.mark.parametrize("data", [
    [],
    {"arrows": []},
    {"objects": ["x"], "composition": [["a", "b"]]},
    {"space": {"points": ["a", "b"], "opens": [["a"], ["b"], ["c"]]}},
    {"objects": ["x"], "coverage": {"y": [[]]}},
])
def test_malformed_documents(data):
    with pytest.raises(SiteError):
        parse_site(data)


def test_caps_apply_to_documents():
    opens = [["a"], ["b"], ["c"], ["a", "b"], ["a", "c"], ["b", "c"]]
    data = {"space": {"points": ["a", "b", "c"], "opens": opens}}
    doc = parse_site(data)
    assert len(doc.site.category.objects) == 8 and len(doc.site.category.arrows) == 27
    with pytest.raises(SiteError):
        parse_site(data, SiteCaps(max_objects=4))
    with pytest.raises(SiteError):
        parse_site(data, SiteCaps(max_arrows=20))
    data["presheaf"] = {"sets": {o: [str(i) for i in range(7)] for o in doc.site.category.objects}}
    with pytest.raises(SiteError):
        parse_site(data)
