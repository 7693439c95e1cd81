import pytest

from cwres.cw import (
    EMPTY_CELL,
    Cell,
    RegularCWComplex,
    cellular_chain_complex,
    from_face_poset,
    incidence_numbers,
    restrict_to_multidegree,
    skeleton,
    supports_resolution,
)
from cwres.errors import DimensionMismatch, DuplicateId, MissingMultidegrees, NotCWPoset, UnknownElement
from cwres.field_linalg import homology, verify_complex
from cwres.monomial import lcm_lattice, lyubeznik_complex, scarf_complex, taylor_complex
from cwres.poset import order_complex

from conftest import GF2, GF3, Q


# ---------------------------------------------------------
# Structure
# ---------------------------------------------------------

def test_glued_disks_face_poset(glued_disks):
    P, rank = glued_disks.face_poset()
    assert glued_disks.f_vector() == [1, 4, 5, 2]
    assert len(P) == 12
    assert P.least_element() == EMPTY_CELL
    assert rank["1234"] == 3 and rank["1"] == 1


def test_closure(glued_disks):
    assert glued_disks.closure("123") == {"123", "12", "13", "23", "1", "2", "3"}


def test_cells_need_known_facets():
    with pytest.raises(UnknownElement):
        RegularCWComplex([Cell(id="e", dim=1, facets=("u", "v"))])


def test_facet_dimension_is_checked():
    with pytest.raises(DimensionMismatch):
        RegularCWComplex([Cell(id="u", dim=0), Cell(id="f", dim=2, facets=("u",))])


def test_empty_cell_id_is_reserved():
    with pytest.raises(DuplicateId):
        RegularCWComplex([Cell(id=EMPTY_CELL, dim=0)])


def test_from_face_poset_round_trip(glued_disks):
    P = glued_disks.face_poset().poset
    Y = from_face_poset(P, Q)
    assert Y.f_vector() == [1, 4, 5, 2]
    assert Y.face_poset().poset.is_isomorphic(P)


def test_from_face_poset_rejects_non_cw(tri_ideal):
    with pytest.raises(NotCWPoset) as info:
        from_face_poset(lcm_lattice(tri_ideal).poset, Q)
    assert info.value.witness == "xyz"


def test_skeleton(glued_disks):
    one = skeleton(glued_disks, 1)
    assert one.f_vector() == [1, 4, 5]
    assert homology(cellular_chain_complex(one, Q)).nonzero() == {1: 2}


# ---------------------------------------------------------
# Incidence numbers
# ---------------------------------------------------------

def test_edge_incidence_signs(edge):
    c = incidence_numbers(edge, Q)
    assert Q.to_fraction(c[("e", "u")]) == -1
    assert Q.to_fraction(c[("e", "v")]) == 1
    assert Q.to_fraction(c[("u", EMPTY_CELL)]) == 1


def test_incidences_are_units_and_square_to_zero(glued_disks, field):
    c = incidence_numbers(glued_disks, field)
    assert len(c) == 4 + 2 * 5 + 3 + 4
    assert all(field.to_fraction(v) in (-1, 1) for v in c.values())
    assert verify_complex(cellular_chain_complex(glued_disks, field, c)).is_complex


def assert_face_incidences_mod_two(X):
    C = cellular_chain_complex(X, GF2)
    for d in range(0, X.dim + 1):
        rows = C.labels(d - 1)
        for col, cid in enumerate(C.labels(d)):
            facets = set(X.cell(cid).facets) or {EMPTY_CELL}
            support = {rows[r] for r, _ in C.diff(d).column_items(col)}
            assert support == facets, (X, cid)


def test_gf2_incidences_are_face_incidences(glued_disks):
    assert_face_incidences_mod_two(glued_disks)


@pytest.mark.slow
def test_incidences_on_every_fixture(glued_disks, simplicial_corpus, tri_ideal, squares_ideal, koszul_ideal):
    complexes = [glued_disks] + [RegularCWComplex.from_simplicial(K) for K in simplicial_corpus]
    for I in (tri_ideal, squares_ideal, koszul_ideal):
        complexes += [taylor_complex(I), scarf_complex(I), lyubeznik_complex(I)]
    for X in complexes:
        for field in (Q, GF3):
            c = incidence_numbers(X, field)
            assert all(field.to_fraction(v) in (-1, 1) for v in c.values()), X
            assert verify_complex(cellular_chain_complex(X, field, c)).is_complex, X
        assert_face_incidences_mod_two(X)


def test_glued_disks_is_acyclic(glued_disks, field):
    assert homology(cellular_chain_complex(glued_disks, field)).total() == 0


def test_hollow_triangle_cellular_homology(hollow_triangle, field):
    X = RegularCWComplex.from_simplicial(hollow_triangle)
    assert homology(cellular_chain_complex(X, field)).nonzero() == {1: 1}


def test_validate_accepts_glued_disks(glued_disks):
    assert glued_disks.validate(Q) is glued_disks


def test_barycentric_subdivision_has_same_homology(glued_disks, hollow_triangle):
    for X in (glued_disks, RegularCWComplex.from_simplicial(hollow_triangle)):
        P = X.face_poset().poset
        proper = P.subposet(e for e in P.elements if e != EMPTY_CELL)
        subdivided = RegularCWComplex.from_simplicial(order_complex(proper))
        assert (homology(cellular_chain_complex(subdivided, Q)).nonzero()
                == homology(cellular_chain_complex(X, Q)).nonzero())


# ---------------------------------------------------------
# Labeled complexes
# ---------------------------------------------------------

def test_restrict_taylor_to_multidegree(tri_ideal):
    T = taylor_complex(tri_ideal)
    assert restrict_to_multidegree(T, (1, 1, 0)).ids == ["1"]
    assert len(restrict_to_multidegree(T, (1, 1, 1))) == 7


def test_restrict_needs_multidegrees(glued_disks):
    with pytest.raises(MissingMultidegrees):
        restrict_to_multidegree(glued_disks, (1,))


def test_taylor_supports_resolution(tri_ideal, field):
    verdict = supports_resolution(taylor_complex(tri_ideal), tri_ideal, field)
    assert verdict.is_resolution
    assert verdict.checked == 5


def test_scarf_of_tri_fails_at_xyz(tri_ideal):
    verdict = supports_resolution(scarf_complex(tri_ideal), tri_ideal, Q)
    assert not verdict.is_resolution
    assert [f.multidegree for f in verdict.failures] == ["xyz"]
    assert verdict.failures[0].betti == {"0": 2}


def test_scarf_of_squares_supports_resolution(squares_ideal):
    X = scarf_complex(squares_ideal)
    assert X.f_vector() == [1, 3, 2]
    assert supports_resolution(X, squares_ideal, Q).is_resolution


def test_wrong_vertex_labels(tri_ideal, squares_ideal):
    verdict = supports_resolution(taylor_complex(squares_ideal), tri_ideal, Q)
    assert not verdict.is_resolution
    assert verdict.failures[0].multidegree == "vertex-labels"
