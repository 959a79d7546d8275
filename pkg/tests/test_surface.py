from __future__ import annotations

import math

import pytest
from hypothesis import given

from conftest import FIGURE_EIGHT, KISHINO_STYLE, TREFOIL, UNKNOT, VIRTUAL_TREFOIL, codes, seeded
from oracles import face_count, genus_oracle, random_word_code
from virtknot.gauss import Parity, canonicalize, classical_parity, parse
from virtknot.invariants import odd_writhe
from virtknot.moves import apply
from virtknot.surface import boundary_count, build_ribbon, diagram_genus, to_dot

# (chi, b, genus) from the dart-permutation oracle, frozen
GOLDEN = [
    (UNKNOT, 0, 2, 0),
    (TREFOIL, -3, 5, 0),
    (VIRTUAL_TREFOIL, -2, 2, 1),
    (FIGURE_EIGHT, -4, 6, 0),
    (KISHINO_STYLE, -4, 2, 2),
    (parse("O1+U1+"), -1, 3, 0),
]


@pytest.mark.parametrize("code, chi, b, genus", GOLDEN)
def test_golden_surfaces(code, chi, b, genus):
    s = build_ribbon(code)
    assert (s.euler_characteristic, s.boundary_curves, s.genus) == (chi, b, genus)
    assert boundary_count(code) == b and diagram_genus(code) == genus
    if code.n:
        assert face_count(code) == b


def test_ribbon_counts():
    s = build_ribbon(TREFOIL)
    assert len(s.vertices) == 3 and len(s.bands) == 6
    assert sum(len(orbit) for orbit in s.boundaries) == 12


def test_agrees_with_oracle_on_random_codes():
    rng = seeded(21)
    for _ in range(1500):
        code = random_word_code(rng.randint(1, 7), rng)
        assert boundary_count(code) == face_count(code)
        assert diagram_genus(code) == genus_oracle(code)


def test_all_even_codes_agree_with_oracle():
    rng = seeded(22)
    checked = 0
    while checked < 200:
        code = random_word_code(rng.randint(1, 6), rng)
        if all(classical_parity(code, c) is Parity.EVEN for c in code.crossings()):
            assert diagram_genus(code) == genus_oracle(code)
            checked += 1


@given(codes(min_n=1, max_n=7))
def test_surface_invariants(code):
    s = build_ribbon(code)
    assert s.euler_characteristic == -code.n
    assert (2 - s.euler_characteristic - s.boundary_curves) % 2 == 0
    assert 0 <= s.genus <= math.ceil(code.n / 2)
    assert (s.genus == 0) == (s.boundary_curves == code.n + 2)


@given(codes(max_n=6))
def test_genus_ignores_presentation(code):
    assert diagram_genus(canonicalize(code)) == diagram_genus(code)


@given(codes(max_n=7))
def test_genus_zero_forces_zero_odd_writhe(code):
    if diagram_genus(code) == 0:
        assert odd_writhe(code) == 0


def test_genus_is_not_a_move_invariant():
    # a virtual R2 bigon on the unknot: genus 1, one move away from genus 0
    code = parse("O1+O2-U1+U2-")
    assert diagram_genus(code) == 1
    assert diagram_genus(apply(code, "R2Delete:1,2")) == 0


def test_dot_output():
    text = to_dot(TREFOIL)
    assert text.startswith("graph ribbon {") and text.rstrip().endswith("}")
    assert text.count(" -- ") == 6
    assert 'label="chi=-3 b=5 genus=0"' in text
    assert "loop -- loop" in to_dot(UNKNOT)
