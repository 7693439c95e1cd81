"""
The poset construction D(P).

For a finite poset P with least element 0̂, degree i of D(P) is the direct
sum over all α of the reduced homology H̃_{i-2}(Δ_α), where Δ_α is the
order complex of the open interval (0̂, α). The map from the summand at α
to the summand at a lower cover λ is the Mayer-Vietoris connecting map of
Δ_α = ∪ D_λ (D_λ the order complex of (0̂, λ]) followed by the inclusion
of Δ_{α,λ} into Δ_λ. Degree 1 maps onto D_0 by the identity.

D(P) need not be a complex for a general poset; `DSequence.is_complex`
records what verify_complex found.
"""

import logging
from typing import Any, Dict, Hashable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from cwres.config import parallel_map
from cwres.errors import InputError, NoLeastElement, NotACycle
from cwres.field_linalg import (
    ChainComplexOverField,
    FieldConfig,
    FieldMatrix,
    HomologyResult,
    homology,
    relative_homology,
    verify_complex,
)
from cwres.models import ComplexVerdict, FiltrationSquareVerdict, IsoVerdict
from cwres.poset import (
    Face,
    Poset,
    SimplicialComplex,
    compute_rank,
    half_closed_interval,
    open_interval,
    order_complex,
)

logger = logging.getLogger(__name__)

STRATEGIES = ("smallest-id", "largest-id")

DLabel = Tuple[Hashable, int]


class IntervalHomology(NamedTuple):
    element: Hashable
    complex: SimplicialComplex
    homology: HomologyResult


def _least(P: Poset) -> Hashable:
    least = P.least_element()
    if least is None:
        raise NoLeastElement("poset has no least element")
    return least


def interval_homology_table(P: Poset, field: FieldConfig) -> Dict[Hashable, IntervalHomology]:
    """Homology of Δ_α for every α above 0̂, keyed in element order."""
    least = _least(P)
    others = [x for x in P.elements if x != least]

    def compute(alpha: Hashable) -> IntervalHomology:
        K = order_complex(open_interval(P, least, alpha))
        H = homology(K.chain_complex(field))
        logger.debug("Δ_%s: f-vector %s, betti %s", alpha, K.f_vector(), H.nonzero())
        return IntervalHomology(alpha, K, H)

    return dict(zip(others, parallel_map(compute, others)))


class CoverAssignment:
    """
    Assigns each nonempty face of Δ_α to a lower cover λ of α above the
    face's top element.

    Covers are tried in element order ("smallest-id") or reverse element
    order ("largest-id"); the first one containing the top wins.
    """

    def __init__(self, P: Poset, alpha: Hashable, strategy: str = "smallest-id"):
        if strategy not in STRATEGIES:
            raise InputError(f"unknown cover strategy {strategy!r}", location="strategy")
        self.poset = P
        self.alpha = alpha
        self.strategy = strategy
        covers = P.lower_covers(alpha)
        self.covers = covers if strategy == "smallest-id" else covers[::-1]
        self._by_top: Dict[Hashable, Hashable] = {}

    def __call__(self, face: Face) -> Hashable:
        top = face[-1]
        if top not in self._by_top:
            self._by_top[top] = next(lam for lam in self.covers if self.poset.leq(top, lam))
        return self._by_top[top]

    def mapping(self, faces: Sequence[Face]) -> Dict[Face, Hashable]:
        return {face: self(face) for face in faces if face}

    def component(self, chain: Mapping[Face, Any], lam: Hashable) -> Dict[Face, Any]:
        return {face: c for face, c in chain.items() if face and self(face) == lam}


def cover_assignment(P: Poset, alpha: Hashable, strategy: str = "smallest-id") -> Dict[Face, Hashable]:
    least = _least(P)
    faces = order_complex(open_interval(P, least, alpha)).faces
    return CoverAssignment(P, alpha, strategy).mapping(faces)


def connecting_map(P: Poset, alpha: Hashable, lam: Hashable, cycle: Mapping[Face, Any],
                   assignment: CoverAssignment, table: Mapping[Hashable, IntervalHomology],
                   field: FieldConfig) -> List[Any]:
    """
    Image of the class of `cycle` (a cycle of Δ_α) in the stored basis of
    H̃(Δ_λ): the class of d(z_λ), where z_λ collects the faces assigned to λ.
    """
    cycle = {f: field.vector([c])[0] for f, c in cycle.items()}
    cycle = {f: c for f, c in cycle.items() if not field.is_zero(c)}
    if not cycle:
        return []
    degree = len(next(iter(cycle))) - 1
    if degree == -1:
        # border case: H̃_{-1}(Δ_α) maps identically onto D_0
        return [cycle[()]]
    if SimplicialComplex.boundary(cycle, field):
        raise NotACycle(f"chain is not a cycle of Δ_{alpha}", location=str(alpha))
    w = SimplicialComplex.boundary(assignment.component(cycle, lam), field)
    return table[lam].homology.coordinates(degree - 1, w)


class DSequence:
    """D(P) as a sequence of vector spaces with labeled bases (α, k) and maps φ_i."""

    def __init__(self, poset: Poset, least: Hashable, complex: ChainComplexOverField,
                 table: Dict[Hashable, IntervalHomology], strategy: str):
        self.poset = poset
        self.least = least
        self.complex = complex
        self.table = table
        self.strategy = strategy
        self.verdict: ComplexVerdict = verify_complex(complex)

    @property
    def is_complex(self) -> bool:
        return self.verdict.is_complex

    @property
    def field(self) -> FieldConfig:
        return self.complex.field

    def dims(self) -> List[int]:
        return self.complex.dims()

    def phi(self, i: int) -> FieldMatrix:
        return self.complex.diff(i)

    def basis_at(self, alpha: Hashable) -> Dict[int, List[DLabel]]:
        return {
            i: [label for label in self.complex.labels(i) if label[0] == alpha]
            for i in self.complex.degrees
            if any(label[0] == alpha for label in self.complex.labels(i))
        }

    def degree_of(self, alpha: Hashable) -> List[int]:
        return sorted(self.basis_at(alpha))

    def to_dict(self) -> Dict[str, Any]:
        C = self.complex
        return {
            "dims": self.dims(),
            "is_complex": self.is_complex,
            "basis": {str(i): [[str(a), k] for a, k in C.labels(i)] for i in C.degrees},
            "maps": {
                str(i): [
                    {"row": r, "col": c, "scalar": self.field.format(v)}
                    for (r, c), v in C.diff(i).items()
                ]
                for i in range(C.lo + 1, C.hi + 1)
            },
        }


def d_construction(P: Poset, field: FieldConfig, strategy: str = "smallest-id",
                   table: Optional[Dict[Hashable, IntervalHomology]] = None) -> DSequence:
    """Build D(P) for any finite poset with a least element."""
    least = _least(P)
    table = table if table is not None else interval_homology_table(P, field)

    # (α, k): the k-th basis cycle of H̃_{i-2}(Δ_α), counted within degree i
    labels: Dict[int, List[DLabel]] = {0: [(least, 0)]}
    cycles: List[Tuple[int, Hashable, int, Dict[Face, Any]]] = []
    for alpha in P.elements:
        if alpha == least:
            continue
        H = table[alpha].homology
        for q in sorted(H.cycle_basis):
            for k, chain in enumerate(H.cycles(q)):
                labels.setdefault(q + 2, []).append((alpha, k))
                cycles.append((q + 2, alpha, k, chain))
    top = max(labels)
    for i in range(top + 1):
        labels.setdefault(i, [])
    index = {i: {label: n for n, label in enumerate(ls)} for i, ls in labels.items()}

    entries: Dict[int, Dict[Tuple[int, int], Any]] = {i: {} for i in range(1, top + 1)}
    assignments: Dict[Hashable, CoverAssignment] = {}
    for i, alpha, k, chain in cycles:
        col = index[i][(alpha, k)]
        if i == 1:
            entries[1][(0, col)] = field.one
            continue
        assignment = assignments.setdefault(alpha, CoverAssignment(P, alpha, strategy))
        for lam in P.lower_covers(alpha):
            coordinates = connecting_map(P, alpha, lam, chain, assignment, table, field)
            for t, c in enumerate(coordinates):
                if not field.is_zero(c):
                    entries[i][(index[i - 1][(lam, t)], col)] = c

    diffs = {
        i: FieldMatrix(field, len(labels[i - 1]), len(labels[i]), entries[i])
        for i in range(1, top + 1)
    }
    D = DSequence(P, least, ChainComplexOverField(field, labels, diffs), table, strategy)
    logger.info("D(P): dims %s, is_complex %s", D.dims(), D.is_complex)
    return D


def compare_complexes(C: ChainComplexOverField, D: ChainComplexOverField, shift: int = 0) -> IsoVerdict:
    """
    Compare C with D shifted down by `shift`: degree i of C against degree
    i + shift of D. Equal dimensions and equal differential ranks in every
    degree mean the complexes are isomorphic.
    """
    c_ranks = {i: C.diff(i).rank() for i in C.degrees}
    d_ranks = {i: D.diff(i).rank() for i in D.degrees}
    mismatch = None
    for i in range(min(C.lo, D.lo - shift), max(C.hi, D.hi - shift) + 1):
        if C.dim(i) != D.dim(i + shift) or c_ranks.get(i, 0) != d_ranks.get(i + shift, 0):
            mismatch = i
            break
    return IsoVerdict(
        isomorphic=mismatch is None,
        dims=C.dims(),
        other_dims=D.dims(),
        ranks=[c_ranks[i] for i in C.degrees],
        other_ranks=[d_ranks[i] for i in D.degrees],
        mismatch_degree=mismatch,
    )


def _filtration_faces(P: Poset, alpha: Hashable, level: int, rank: Mapping[Hashable, int],
                      closure: SimplicialComplex) -> List[Face]:
    if level < 0:
        return []
    tops = [g for g in closure.vertices if rank[g] == level]
    return [f for f in closure.faces if not f or any(P.leq(f[-1], g) for g in tops)]


def skeletal_filtration(P: Poset, alpha: Hashable, j: int,
                        rank: Optional[Mapping[Hashable, int]] = None) -> SimplicialComplex:
    """Union of the D_γ over γ <= α with rank(γ) = rank(α) - j; γ = 0̂ contributes {∅}."""
    rank = rank if rank is not None else compute_rank(P)
    least = _least(P)
    closure = order_complex(half_closed_interval(P, least, alpha))
    return SimplicialComplex(closure.vertices, _filtration_faces(P, alpha, rank[alpha] - j, rank, closure))


def _column(D: DSequence, i: int, label: DLabel) -> Dict[DLabel, Any]:
    C = D.complex
    rows = C.labels(i - 1)
    return {rows[r]: v for r, v in C.diff(i).column_items(C.index(i, label))}


def check_filtration_square(P: Poset, alpha: Hashable, j: int, field: FieldConfig,
                            dseq: Optional[DSequence] = None,
                            rank: Optional[Mapping[Hashable, int]] = None) -> FiltrationSquareVerdict:
    """
    Check that the connecting map of Δ^(j+2) ⊂ Δ^(j+1) ⊂ Δ^(j) agrees with φ
    under reindexing, on every relative class of degree >= 1.

    A relative class of (Δ^(j), Δ^(j+1)) at β is the cone β * y over a basis
    cycle y of Δ_β; reindexing sends a relative cycle w to the classes of
    d(w_β) in Δ_β, where w_β collects the faces with top β.
    """
    rank = rank if rank is not None else compute_rank(P)
    D = dseq if dseq is not None else d_construction(P, field)
    level = rank[alpha] - j
    verdict = FiltrationSquareVerdict(element=str(alpha), j=j, holds=True)
    if level < 1:
        return verdict

    closure = order_complex(half_closed_interval(P, D.least, alpha))
    upper = SimplicialComplex(closure.vertices, _filtration_faces(P, alpha, level, rank, closure))
    lower = _filtration_faces(P, alpha, level - 1, rank, closure)
    relative = relative_homology(upper.chain_complex(field), lower)

    betas = [b for b in closure.vertices if rank[b] == level]
    counted: Dict[int, int] = {}
    for beta in betas:
        Hb = D.table[beta].homology
        for q in sorted(Hb.cycle_basis):
            i = q + 1
            if i < 1:
                continue
            for k, y in enumerate(Hb.cycles(q)):
                counted[i] = counted.get(i, 0) + 1
                w = {face + (beta,): c for face, c in y.items()}
                dw = SimplicialComplex.boundary(w, field)

                left: Dict[DLabel, Any] = {}
                for t, c in enumerate(Hb.coordinates(q, dw)):
                    for row, v in _column(D, i + 1, (beta, t)).items():
                        left[row] = left.get(row, field.zero) + c * v

                right: Dict[DLabel, Any] = {}
                by_top: Dict[Hashable, Dict[Face, Any]] = {}
                for face, c in dw.items():
                    if face and rank[face[-1]] == level - 1:
                        by_top.setdefault(face[-1], {})[face] = c
                for gamma, part in by_top.items():
                    coordinates = D.table[gamma].homology.coordinates(q - 1, SimplicialComplex.boundary(part, field))
                    for t, c in enumerate(coordinates):
                        right[(gamma, t)] = c

                left = {r: v for r, v in left.items() if not field.is_zero(v)}
                right = {r: v for r, v in right.items() if not field.is_zero(v)}
                if left != right:
                    logger.info("square fails at α=%s j=%s β=%s degree %s", alpha, j, beta, i)
                    return verdict.model_copy(update={"holds": False, "failing_degree": i,
                                                      "classes": sum(counted.values())})

    for i, b in relative.betti.items():
        if i >= 1 and b != counted.get(i, 0):
            return verdict.model_copy(update={"holds": False, "failing_degree": i,
                                              "classes": sum(counted.values())})
    return verdict.model_copy(update={"classes": sum(counted.values())})


def check_filtration_squares(P: Poset, field: FieldConfig,
                             dseq: Optional[DSequence] = None) -> List[FiltrationSquareVerdict]:
    """Run check_filtration_square for every α above 0̂ and 0 <= j <= rank(α)."""
    rank = compute_rank(P)
    D = dseq if dseq is not None else d_construction(P, field)
    return [
        check_filtration_square(P, alpha, j, field, D, rank)
        for alpha in P.elements
        if alpha != D.least
        for j in range(rank[alpha] + 1)
    ]
