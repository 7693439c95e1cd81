import pytest

from cwres.commands import load_poset
from cwres.errors import (
    CycleDetected,
    DuplicateId,
    NoLeastElement,
    NotComparable,
    NotRanked,
    TransitiveCover,
    UnknownElement,
)
from cwres.field_linalg import homology
from cwres.monomial import lcm_lattice
from cwres.poset import (
    Poset,
    SimplicialComplex,
    build_poset,
    compute_rank,
    half_closed_interval,
    is_cw_poset,
    open_interval,
    order_complex,
)

from conftest import FIXTURES, GF2, Q


@pytest.fixture
def glued_disks_poset():
    P, _ = load_poset(str(FIXTURES / "glued_disks_poset.json"))
    return P


def chain(*names):
    return build_poset(names, zip(names, names[1:]))


# ---------------------------------------------------------
# build_poset
# ---------------------------------------------------------

def test_two_chain():
    P = chain("a", "b")
    assert P.less("a", "b") and not P.less("b", "a")
    assert P.least_element() == "a"


def test_cycle_detected():
    with pytest.raises(CycleDetected):
        build_poset(["a", "b"], [("a", "b"), ("b", "a")])


def test_transitive_cover_rejected():
    with pytest.raises(TransitiveCover) as info:
        build_poset(["0", "a", "c"], [("0", "a"), ("a", "c"), ("0", "c")])
    assert info.value.location == "covers[2]"


def test_duplicate_and_unknown_elements():
    with pytest.raises(DuplicateId):
        build_poset(["a", "a"], [])
    with pytest.raises(UnknownElement):
        build_poset(["a"], [("a", "b")])


def test_glued_disks_hasse_data(glued_disks_poset):
    assert len(glued_disks_poset) == 12
    assert glued_disks_poset.least_element() == "∅"
    assert glued_disks_poset.maximal_elements() == ["123", "1234"]


def test_from_relation_recomputes_covers():
    P = Poset.from_relation(["0", "a", "c"], [("0", "a"), ("a", "c"), ("0", "c")])
    assert P.covers == [("0", "a"), ("a", "c")]


def test_is_isomorphic_with_labels():
    P = build_poset(["a", "b"], [("a", "b")], {"a": "bottom", "b": "top"})
    Q_ = build_poset(["x", "y"], [("x", "y")], {"x": "bottom", "y": "top"})
    R = build_poset(["x", "y"], [("x", "y")], {"x": "top", "y": "bottom"})
    assert P.is_isomorphic(Q_, match_labels=True)
    assert P.is_isomorphic(R) and not P.is_isomorphic(R, match_labels=True)


# ---------------------------------------------------------
# intervals and order complexes
# ---------------------------------------------------------

def test_open_interval_of_chain():
    assert open_interval(chain("a", "b", "c"), "a", "c").elements == ("b",)


def test_open_interval_glued_disks(glued_disks_poset):
    interval = open_interval(glued_disks_poset, "∅", "123")
    assert set(interval.elements) == {"1", "2", "3", "12", "13", "23"}


def test_half_closed_interval_glued_disks(glued_disks_poset):
    assert set(half_closed_interval(glued_disks_poset, "∅", "12").elements) == {"1", "2", "12"}


def test_interval_needs_comparable_ends(glued_disks_poset):
    with pytest.raises(NotComparable):
        open_interval(glued_disks_poset, "12", "13")


def test_order_complex_of_antichain():
    K = order_complex(build_poset(["x", "y"], []))
    assert K.f_vector() == [1, 2]


def test_order_complex_of_chain_is_simplex():
    K = order_complex(chain("a", "b"))
    assert K.facets() == [("a", "b")]


def test_order_complex_hexagon(glued_disks_poset):
    K = order_complex(open_interval(glued_disks_poset, "∅", "123"))
    assert K.f_vector() == [1, 6, 6]
    assert ("1", "12") in K and ("12", "1") not in K
    assert homology(K.chain_complex(Q)).nonzero() == {1: 1}


def test_order_complex_dimension_matches_longest_chain(glued_disks_poset):
    for x in glued_disks_poset.elements[1:]:
        interval = open_interval(glued_disks_poset, "∅", x)
        longest = max((len(c) for c in interval.chains()), default=0)
        assert order_complex(interval).dim == longest - 1


def test_simplicial_complex_must_be_closed():
    with pytest.raises(UnknownElement):
        SimplicialComplex(["a", "b"], [("a", "b")])


# ---------------------------------------------------------
# compute_rank
# ---------------------------------------------------------

def test_rank_glued_disks(glued_disks_poset):
    rank = compute_rank(glued_disks_poset)
    assert rank["∅"] == 0
    assert {rank[v] for v in "1234"} == {1}
    assert {rank[e] for e in ["12", "13", "23", "14", "24"]} == {2}
    assert rank["123"] == rank["1234"] == 3


def test_not_ranked_witness():
    P = build_poset(["0", "a", "b", "c", "d"], [("0", "a"), ("a", "b"), ("0", "c"), ("c", "d"), ("d", "b")])
    with pytest.raises(NotRanked) as info:
        compute_rank(P)
    assert info.value.witness == "b"
    assert len(info.value.short_chain) == 3 and len(info.value.long_chain) == 4


def test_rank_of_two_chain():
    assert compute_rank(chain("0", "1")) == {"0": 0, "1": 1}


def test_rank_needs_least_element():
    with pytest.raises(NoLeastElement):
        compute_rank(build_poset(["a", "b"], []))


# ---------------------------------------------------------
# is_cw_poset
# ---------------------------------------------------------

def test_glued_disks_is_cw(glued_disks_poset):
    report = is_cw_poset(glued_disks_poset, Q)
    assert report.is_cw and report.thin and report.ranked
    assert report.certification == "homology-sphere certified"
    assert all(v.is_sphere for v in report.spheres)


def test_tri_lattice_not_cw(tri_ideal):
    report = is_cw_poset(lcm_lattice(tri_ideal).poset, Q)
    assert not report.is_cw
    assert report.witness == "xyz"
    xyz = next(v for v in report.spheres if v.element == "xyz")
    assert xyz.betti == {"0": 2}


def test_squares_lattice_not_cw(squares_ideal):
    report = is_cw_poset(lcm_lattice(squares_ideal).poset, Q)
    assert not report.is_cw and report.witness == "x^2y^2"


def test_koszul_lattice_is_cw(koszul_ideal):
    assert is_cw_poset(lcm_lattice(koszul_ideal).poset, Q).is_cw


def test_single_element_is_trivial():
    report = is_cw_poset(build_poset(["0"], []))
    assert not report.is_cw and not report.nontrivial


def test_cw_rank_one_and_two_intervals(glued_disks_poset):
    rank = compute_rank(glued_disks_poset)
    for x in glued_disks_poset.elements[1:]:
        size = len(open_interval(glued_disks_poset, "∅", x))
        if rank[x] == 1:
            assert size == 0
        if rank[x] == 2:
            assert size == 2


@pytest.mark.slow
def test_cw_verdict_agrees_over_q_and_gf2(simplicial_corpus):
    from cwres.cw import RegularCWComplex

    for K in simplicial_corpus[::7]:
        P = RegularCWComplex.from_simplicial(K).face_poset().poset
        assert is_cw_poset(P, Q).is_cw == is_cw_poset(P, GF2).is_cw
