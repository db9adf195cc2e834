"""Minimal model construction and the two-machinery comparison."""

from fractions import Fraction

import pytest

from formalpi.errors import (
    CutoffMismatchError,
    DegreeCutoffError,
    InvalidInputError,
    NotSimplyConnectedError,
)
from formalpi.graded_core import AlgebraPresentation
from formalpi.quillen_weight import HomotopyTable, build_model, homotopy_table
from formalpi.sullivan_oracle import (
    compare,
    minimal_model,
    model_violations,
)

from conftest import SIMPLY_CONNECTED

SC_WITH_CHARACTERS = SIMPLY_CONNECTED + ["char_even", "char_torsion"]


def test_two_sphere_golden_model(corpus):
    mm = minimal_model(corpus["s2"], 8)
    assert mm.generator_counts() == {2: 1, 3: 1}
    closed, killer = mm.generators
    assert closed.degree == 2 and closed.differential == ()
    assert closed.image == (("x2", Fraction(1)),)
    assert killer.degree == 3 and killer.image == ()
    # the degree-3 differential is the square of the degree-2 generator
    assert killer.differential == (((0, 0), Fraction(1)),)


@pytest.mark.parametrize("name,deg", [("s3", 3), ("s5", 5)])
def test_odd_spheres_single_closed_generator(corpus, name, deg):
    mm = minimal_model(corpus[name], 8)
    assert mm.generator_counts() == {deg: 1}
    (g,) = mm.generators
    assert g.differential == () and g.image == ((f"x{deg}", Fraction(1)),)


def test_projective_plane_golden_model(corpus):
    mm = minimal_model(corpus["cp2"], 8)
    assert mm.generator_counts() == {2: 1, 5: 1}
    killer = mm.generators_in_degree(5)[0]
    assert killer.differential == (((0, 0, 0), Fraction(1)),)


def test_projective_three_space_golden_model(corpus):
    mm = minimal_model(corpus["cp3"], 8)
    assert mm.generator_counts() == {2: 1, 7: 1}
    killer = mm.generators_in_degree(7)[0]
    assert killer.differential == (((0, 0, 0, 0), Fraction(1)),)


def test_wedge_counts(corpus):
    mm = minimal_model(corpus["wedge_s2_s2"], 8)
    assert mm.generator_counts() == {2: 2, 3: 3, 4: 2, 5: 3, 6: 6, 7: 11, 8: 18}


def test_construction_is_deterministic(corpus):
    a = minimal_model(corpus["rand_formal_2"], 7)
    b = minimal_model(corpus["rand_formal_2"], 7)
    assert a.generators == b.generators


@pytest.mark.parametrize("name", SC_WITH_CHARACTERS)
def test_model_invariants_hold(corpus, name):
    cutoff = 8 if name in ("s2", "wedge_s2_s2") else 6
    mm = minimal_model(corpus[name], cutoff)
    assert model_violations(mm) == []
    for g in mm.generators:
        assert all(len(m) >= 2 for m, _ in g.differential)


def test_compare_passes_spheres_and_plane(corpus):
    mm = minimal_model(corpus["s2"], 10)
    table = homotopy_table(build_model(corpus["s2"], 10, 9))
    rep = compare(mm, table)
    assert rep.passed and rep.status == "PASS"
    assert str(rep) == "PASS through degree 10"

    mm = minimal_model(corpus["cp2"], 8)
    rep = compare(mm, homotopy_table(build_model(corpus["cp2"], 8, 7)))
    assert rep.passed


def test_compare_fails_on_corrupted_table(corpus):
    mm = minimal_model(corpus["s2"], 8)
    good = homotopy_table(build_model(corpus["s2"], 8, 7))
    corrupted = HomotopyTable(
        good.max_m,
        good.max_w,
        good.complete,
        {**good.entries, (4, 3, ()): 1},
        dict(good.pi1_pieces),
    )
    rep = compare(mm, corrupted)
    assert not rep.passed and rep.status == "FAIL"
    assert rep.mismatches == ((4, 0, 1),)
    assert "degree 4" in str(rep)


def test_compare_rejects_cutoff_mismatch(corpus):
    mm = minimal_model(corpus["s2"], 8)
    table = homotopy_table(build_model(corpus["s2"], 6, 5))
    with pytest.raises(CutoffMismatchError):
        compare(mm, table)


def test_rejects_non_simply_connected(corpus):
    for name in ("torus", "char_pair"):
        with pytest.raises(NotSimplyConnectedError):
            minimal_model(corpus[name], 6)


def test_rejects_small_cutoff(corpus):
    with pytest.raises(DegreeCutoffError):
        minimal_model(corpus["s2"], 1)


def test_rejects_invalid_presentation():
    bad = AlgebraPresentation(
        "bad",
        [("e", 0), ("a", 2), ("t", 3)],
        "e",
        {("a", "a"): {"t": Fraction(1)}},
    )
    with pytest.raises(InvalidInputError):
        minimal_model(bad, 6)
