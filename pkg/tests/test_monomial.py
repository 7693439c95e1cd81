import pytest

from cwres.errors import DimensionMismatch, EmptyGeneratorList, NonMonotoneGrading
from cwres.field_linalg import homology
from cwres.monomial import (
    Monomial,
    MonomialIdeal,
    betti_totals,
    cw_lattice_report,
    face_poset_grading,
    gpw_betti,
    homogenize_cellular,
    homogenize_d,
    is_lattice_linear,
    is_minimal,
    is_resolution,
    lcm,
    lcm_lattice,
    lyubeznik_complex,
    minimalize,
    resolution_from_export,
    scarf_complex,
    taylor_complex,
)
from cwres.poset_construction import compare_complexes, d_construction

from conftest import Q


# ---------------------------------------------------------
# Monomials and ideals
# ---------------------------------------------------------

def test_monomial_names():
    assert str(Monomial.of(1, 1, 1)) == "xyz"
    assert str(Monomial.of(2, 0, 1)) == "x^2z"
    assert str(Monomial.one(2)) == "1"
    assert str(Monomial.of(0, 1, 0, 3)) == "x2x4^3"


def test_divides_and_lcm():
    a, b = Monomial.of(1, 1, 0), Monomial.of(0, 1, 1)
    assert a.lcm(b) == Monomial.of(1, 1, 1)
    assert a.divides(a.lcm(b)) and not a.divides(b)
    assert (a.lcm(b) / a) == Monomial.of(0, 0, 1)
    assert lcm([], 3).is_one()


def test_division_needs_a_divisor():
    with pytest.raises(ValueError):
        Monomial.of(1, 0) / Monomial.of(0, 1)
    with pytest.raises(DimensionMismatch):
        Monomial.of(1, 1) / Monomial.of(1, 0, 0)


def test_lcm_needs_variables():
    with pytest.raises(EmptyGeneratorList):
        lcm([])


def test_mixed_variable_counts():
    with pytest.raises(DimensionMismatch):
        Monomial.of(1, 0).divides(Monomial.of(1, 0, 0))


def test_minimalize_keeps_input_order():
    gens = [Monomial.of(1, 1), Monomial.of(1, 0), Monomial.of(0, 2), Monomial.of(1, 0)]
    assert minimalize(gens) == [Monomial.of(1, 0), Monomial.of(0, 2)]


def test_empty_ideal_rejected():
    with pytest.raises(EmptyGeneratorList):
        MonomialIdeal([])


def test_lcm_lattice_of_tri(tri_ideal):
    L = lcm_lattice(tri_ideal)
    assert list(L.poset.elements) == ["1", "xy", "xz", "yz", "xyz"]
    assert L.poset.least_element() == L.bottom == "1"
    assert L.covers(Monomial.of(1, 1, 0), Monomial.of(1, 1, 1))
    assert not L.covers(Monomial.one(3), Monomial.of(1, 1, 1))


def test_lcm_lattice_of_squares(squares_ideal):
    L = lcm_lattice(squares_ideal)
    assert len(L.poset) == 7
    assert L.poset.maximal_elements() == ["x^2y^2"]


# ---------------------------------------------------------
# Cellular resolutions
# ---------------------------------------------------------

def test_taylor_of_tri(tri_ideal, field):
    F = homogenize_cellular(taylor_complex(tri_ideal), field)
    assert F.ranks() == [1, 3, 3, 1]
    assert is_resolution(F, tri_ideal).is_resolution
    assert not is_minimal(F)


def test_scarf_of_tri_is_not_a_resolution(tri_ideal):
    verdict = is_resolution(homogenize_cellular(scarf_complex(tri_ideal), Q), tri_ideal)
    assert not verdict.is_resolution
    assert [f.multidegree for f in verdict.failures] == ["xyz"]


def test_scarf_of_squares(squares_ideal, field):
    F = homogenize_cellular(scarf_complex(squares_ideal), field)
    assert F.ranks() == [1, 3, 2]
    assert is_resolution(F, squares_ideal).is_resolution
    assert is_minimal(F)
    assert is_lattice_linear(F, squares_ideal).is_lattice_linear
    assert F.ranks() == betti_totals(gpw_betti(squares_ideal, field))


def test_taylor_is_not_lattice_linear(tri_ideal):
    verdict = is_lattice_linear(homogenize_cellular(taylor_complex(tri_ideal), Q), tri_ideal)
    assert not verdict.is_lattice_linear
    assert all(w.row_multidegree == w.col_multidegree == "xyz" for w in verdict.witnesses)


def test_lyubeznik_of_tri(tri_ideal):
    X = lyubeznik_complex(tri_ideal)
    assert sorted(c.id for c in X.cells_of_dim(1)) == ["1,2", "1,3"]
    F = homogenize_cellular(X, Q)
    assert is_resolution(F, tri_ideal).is_resolution
    assert is_minimal(F)


def test_lyubeznik_with_order(tri_ideal):
    X = lyubeznik_complex(tri_ideal, [2, 1, 3])
    assert sorted(c.id for c in X.cells_of_dim(1)) == ["2,1", "2,3"]
    assert is_resolution(homogenize_cellular(X, Q), tri_ideal).is_resolution


def test_lyubeznik_order_must_be_permutation(tri_ideal):
    with pytest.raises(DimensionMismatch):
        lyubeznik_complex(tri_ideal, [1, 1, 2])


def test_entry_monomials(squares_ideal):
    F = homogenize_cellular(scarf_complex(squares_ideal), Q)
    assert {str(m) for _, _, _, m in F.entries(1)} == {"x^2", "xy", "y^2"}
    assert {str(m) for _, _, _, m in F.entries(2)} == {"x", "y"}


def test_strand_of_one_is_the_free_module(squares_ideal):
    F = homogenize_cellular(scarf_complex(squares_ideal), Q)
    assert homology(F.strand(Monomial.one(2))).nonzero() == {0: 1}


# ---------------------------------------------------------
# Poset resolutions
# ---------------------------------------------------------

def test_poset_resolution_of_tri(tri_ideal, field):
    L = lcm_lattice(tri_ideal)
    F = homogenize_d(d_construction(L.poset, field), L.monomials)
    assert F.ranks() == [1, 3, 2]
    assert is_resolution(F, tri_ideal).is_resolution
    assert is_minimal(F)


def test_cellular_and_poset_homogenizations_agree(tri_ideal, squares_ideal, koszul_ideal):
    for ideal in (tri_ideal, squares_ideal, koszul_ideal):
        for X in (taylor_complex(ideal), scarf_complex(ideal), lyubeznik_complex(ideal)):
            cellular = homogenize_cellular(X, Q)
            P = X.face_poset().poset
            poset = homogenize_d(d_construction(P, Q), face_poset_grading(X))
            assert is_resolution(cellular, ideal).is_resolution == is_resolution(poset, ideal).is_resolution
            assert compare_complexes(cellular.frame, poset.frame).isomorphic


def test_gpw_betti_of_tri(tri_ideal):
    betti = gpw_betti(tri_ideal, Q)
    assert betti[(2, Monomial.of(1, 1, 1))] == 2
    assert betti_totals(betti) == [1, 3, 2]


def test_unit_ideal_has_no_betti_numbers():
    betti = gpw_betti(MonomialIdeal.of((0, 0), (1, 0)), Q)
    assert betti == {}
    assert betti_totals(betti) == []


def test_cw_lattice_report_koszul(koszul_ideal):
    report, F = cw_lattice_report(koszul_ideal, Q)
    assert report.is_cw and report.lattice_linear_certified
    assert report.intersection_property
    assert F.ranks() == [1, 2, 1]


def test_cw_lattice_report_non_cw(tri_ideal, squares_ideal):
    report, F = cw_lattice_report(tri_ideal, Q)
    assert not report.is_cw and report.witness == "xyz" and F is None
    report, _ = cw_lattice_report(squares_ideal, Q)
    assert report.witness == "x^2y^2"
    assert report.direct_lattice_linear


# ---------------------------------------------------------
# Export
# ---------------------------------------------------------

def test_export_reload(squares_ideal):
    F = homogenize_cellular(scarf_complex(squares_ideal), Q)
    G = resolution_from_export(F.to_export())
    assert G.ranks() == F.ranks()
    assert G.multidegrees == F.multidegrees
    assert is_resolution(G, squares_ideal).is_resolution


def test_export_rejects_wrong_monomial(squares_ideal):
    data = homogenize_cellular(scarf_complex(squares_ideal), Q).to_export()
    data["entries"][0]["monomial"] = [5, 5]
    with pytest.raises(NonMonotoneGrading):
        resolution_from_export(data)
