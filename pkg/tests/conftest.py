import itertools
import random
from pathlib import Path

import pytest
import sympy

from cwres.commands import load_cw
from cwres.cw import Cell, RegularCWComplex
from cwres.field_linalg import FieldConfig
from cwres.monomial import MonomialIdeal
from cwres.poset import SimplicialComplex

FIXTURES = Path(__file__).parent / "fixtures"

Q = FieldConfig.rationals()
GF2 = FieldConfig.prime(2)
GF3 = FieldConfig.prime(3)


def all_complexes_on(n_vertices):
    """Every simplicial complex with at least one vertex on subsets of range(n_vertices)."""
    vertices = list(range(n_vertices))
    faces = [f for size in range(1, n_vertices + 1) for f in itertools.combinations(vertices, size)]
    complexes = []
    for mask in range(1, 2 ** len(faces)):
        chosen = {f for k, f in enumerate(faces) if mask >> k & 1}
        if all(f[:j] + f[j + 1:] in chosen for f in chosen if len(f) > 1 for j in range(len(f))):
            used = sorted({v for f in chosen for v in f})
            complexes.append(SimplicialComplex(used, chosen))
    return complexes


def brute_force_betti(K):
    """Reduced rational betti numbers of K from sympy ranks of its boundary matrices."""
    by_dim = {}
    for f in K.faces:
        by_dim.setdefault(len(f) - 1, []).append(tuple(sorted(f)))
    by_dim.setdefault(-1, [()])

    def boundary_rank(d):
        if d not in by_dim or d - 1 not in by_dim:
            return 0
        rows = {f: k for k, f in enumerate(by_dim[d - 1])}
        M = sympy.zeros(len(by_dim[d - 1]), len(by_dim[d]))
        for col, face in enumerate(by_dim[d]):
            for j in range(len(face)):
                M[rows[face[:j] + face[j + 1:]], col] = (-1) ** j
        return M.rank()

    betti = {d: len(faces) - boundary_rank(d) - boundary_rank(d + 1) for d, faces in by_dim.items()}
    return {d: b for d, b in betti.items() if b}


def random_complexes(count, n_vertices=5, max_facet=3, seed=20240611):
    rng = random.Random(seed)
    vertices = list(range(n_vertices))
    candidates = [f for size in range(1, max_facet + 1) for f in itertools.combinations(vertices, size)]
    seen, out = set(), []
    while len(out) < count:
        facets = rng.sample(candidates, rng.randint(2, 6))
        K = SimplicialComplex.from_facets(sorted({v for f in facets for v in f}), facets)
        key = frozenset(K.faces)
        if key not in seen and len(K.vertices) == n_vertices:
            seen.add(key)
            out.append(K)
    return out


@pytest.fixture(params=[Q, GF3], ids=["Q", "GF3"])
def field(request):
    return request.param


@pytest.fixture
def glued_disks():
    X, _ = load_cw(str(FIXTURES / "glued_disks.json"))
    return X


@pytest.fixture
def edge():
    return RegularCWComplex([
        Cell(id="u", dim=0),
        Cell(id="v", dim=0),
        Cell(id="e", dim=1, facets=("u", "v")),
    ])


@pytest.fixture
def hollow_triangle():
    return SimplicialComplex.from_facets([1, 2, 3], [(1, 2), (1, 3), (2, 3)])


@pytest.fixture
def tri_ideal():
    return MonomialIdeal.of((1, 1, 0), (0, 1, 1), (1, 0, 1))


@pytest.fixture
def squares_ideal():
    return MonomialIdeal.of((2, 0), (1, 1), (0, 2))


@pytest.fixture
def koszul_ideal():
    return MonomialIdeal.of((1, 0), (0, 1))


@pytest.fixture(scope="session")
def simplicial_corpus():
    return all_complexes_on(4) + random_complexes(40)
