"""
Monomial ideals and their cellular and poset resolutions.

Monomials are exponent vectors; an ideal keeps its minimal generators in
input order. A MultigradedComplex is a field-coefficient frame whose basis
elements carry monomial multidegrees: the entry from a basis element of
multidegree m to one of multidegree m' is the scalar times x^(m - m').
"""

import itertools
import logging
from collections import Counter
from typing import Any, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, field_validator
from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm

from cwres.config import parallel_map
from cwres.cw import (
    EMPTY_CELL,
    RegularCWComplex,
    cellular_chain_complex,
    from_face_poset,
    has_intersection_property,
)
from cwres.errors import (
    DimensionMismatch,
    EmptyGeneratorList,
    InvalidField,
    MissingMultidegrees,
    NonMonotoneGrading,
    NonMonotoneLabels,
    NotAComplex,
)
from cwres.field_linalg import ChainComplexOverField, FieldConfig, FieldMatrix, homology, verify_complex
from cwres.models import (
    CWLatticeReport,
    EntryWitness,
    IdealFile,
    LatticeLinearityVerdict,
    ResolutionFile,
    ResolutionVerdict,
    StrandFailure,
)
from cwres.poset import Poset, SimplicialComplex, is_cw_poset
from cwres.poset_construction import DSequence, interval_homology_table

logger = logging.getLogger(__name__)

_SHORT_NAMES = "xyz"


class Monomial(BaseModel):
    """x^a for an exponent vector a."""

    model_config = ConfigDict(frozen=True)

    exponents: Tuple[int, ...]

    @field_validator("exponents")
    @classmethod
    def _nonnegative(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(e < 0 for e in v):
            raise ValueError("exponents must be nonnegative")
        return v

    @classmethod
    def of(cls, *exponents: int) -> "Monomial":
        return cls(exponents=tuple(exponents))

    @classmethod
    def one(cls, n: int) -> "Monomial":
        return cls(exponents=(0,) * n)

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def is_one(self) -> bool:
        return not any(self.exponents)

    def _check(self, other: "Monomial") -> None:
        if other.n != self.n:
            raise DimensionMismatch(f"monomials in {self.n} and {other.n} variables")

    def divides(self, other: "Monomial") -> bool:
        self._check(other)
        return monomial_divides(self.exponents, other.exponents)

    def lcm(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(exponents=monomial_lcm(self.exponents, other.exponents))

    def __truediv__(self, other: "Monomial") -> "Monomial":
        self._check(other)
        quotient = monomial_div(self.exponents, other.exponents)
        if quotient is None:
            raise ValueError(f"{other} does not divide {self}")
        return Monomial(exponents=quotient)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.degree, tuple(-e for e in self.exponents))

    def __str__(self) -> str:
        if self.is_one():
            return "1"
        names = _SHORT_NAMES if self.n <= len(_SHORT_NAMES) else [f"x{k + 1}" for k in range(self.n)]
        return "".join(
            names[k] if e == 1 else f"{names[k]}^{e}"
            for k, e in enumerate(self.exponents) if e
        )


def divides(a: Monomial, b: Monomial) -> bool:
    return a.divides(b)


def lcm(monomials: Iterable[Monomial], n: Optional[int] = None) -> Monomial:
    """lcm of a family; the empty family gives 1 when n is known."""
    monomials = list(monomials)
    if not monomials:
        if n is None:
            raise EmptyGeneratorList("lcm of no monomials needs the number of variables")
        return Monomial.one(n)
    out = monomials[0]
    for m in monomials[1:]:
        out = out.lcm(m)
    return out


def minimalize(generators: Sequence[Monomial]) -> List[Monomial]:
    """Drop generators divisible by another one; survivors keep input order."""
    if not generators:
        raise EmptyGeneratorList("an ideal needs at least one generator")
    kept: List[Monomial] = []
    for k, g in enumerate(generators):
        if g in kept:
            continue
        if any(h.divides(g) and h != g for h in generators):
            continue
        kept.append(g)
    return kept


class MonomialIdeal:
    """A monomial ideal stored by its minimal generators."""

    def __init__(self, generators: Sequence[Monomial]):
        if not generators:
            raise EmptyGeneratorList("an ideal needs at least one generator")
        n = generators[0].n
        for k, g in enumerate(generators):
            if g.n != n:
                raise DimensionMismatch(f"generator {k} has {g.n} variables, expected {n}",
                                        location=f"generators[{k}]")
        self.n = n
        self.generators: List[Monomial] = minimalize(generators)

    @classmethod
    def from_file(cls, data: IdealFile) -> "MonomialIdeal":
        if not data.generators:
            raise EmptyGeneratorList("an ideal needs at least one generator", location="generators")
        return cls([Monomial(exponents=tuple(g)) for g in data.generators])

    @classmethod
    def of(cls, *generators: Sequence[int]) -> "MonomialIdeal":
        return cls([Monomial(exponents=tuple(g)) for g in generators])

    def contains(self, m: Monomial) -> bool:
        return any(g.divides(m) for g in self.generators)

    def lcm_lattice_monomials(self) -> List[Monomial]:
        """1 and the lcms of all nonempty generator subsets, by degree then reverse-lex."""
        found = {Monomial.one(self.n)}
        for g in self.generators:
            found |= {m.lcm(g) for m in found}
        return sorted(found, key=Monomial.sort_key)

    def lcm_lattice(self) -> "LcmLattice":
        return lcm_lattice(self)

    def to_dict(self) -> Dict[str, Any]:
        return {"vars": self.n, "generators": [list(g.exponents) for g in self.generators]}

    def __repr__(self) -> str:
        return f"MonomialIdeal({', '.join(str(g) for g in self.generators)})"


class LcmLattice:
    """The lcm-lattice as a Poset whose element ids are the monomials' strings."""

    def __init__(self, ideal: MonomialIdeal, poset: Poset, monomials: Dict[str, Monomial]):
        self.ideal = ideal
        self.poset = poset
        self.monomials = monomials
        self.bottom = str(Monomial.one(ideal.n))

    def eta(self, element: Hashable) -> Monomial:
        return self.monomials[element]

    def covers(self, lower: Monomial, upper: Monomial) -> bool:
        a, b = str(lower), str(upper)
        return a in self.poset and b in self.poset and a in self.poset.lower_covers(b)


def lcm_lattice(I: MonomialIdeal) -> LcmLattice:
    elements = I.lcm_lattice_monomials()
    monomials = {str(m): m for m in elements}
    relation = [(str(a), str(b)) for a, b in itertools.permutations(elements, 2) if a.divides(b)]
    poset = Poset.from_relation(list(monomials), relation)
    return LcmLattice(I, poset, monomials)


def _subset_lcm(I: MonomialIdeal, subset: Sequence[int]) -> Monomial:
    return lcm((I.generators[k - 1] for k in subset), I.n)


def _labeled_simplicial(I: MonomialIdeal, K: SimplicialComplex) -> RegularCWComplex:
    return RegularCWComplex.from_simplicial(K, {f: _subset_lcm(I, f).exponents for f in K.faces})


def taylor_complex(I: MonomialIdeal) -> RegularCWComplex:
    """Full simplex on the generators; cell "1,3" is the face {m_1, m_3}."""
    vertices = list(range(1, len(I.generators) + 1))
    return _labeled_simplicial(I, SimplicialComplex.from_facets(vertices, [vertices]))


def scarf_complex(I: MonomialIdeal) -> RegularCWComplex:
    """Faces whose lcm is attained by no other generator subset."""
    vertices = list(range(1, len(I.generators) + 1))
    subsets = [s for size in range(len(vertices) + 1) for s in itertools.combinations(vertices, size)]
    counts = Counter(_subset_lcm(I, s) for s in subsets)
    faces = [s for s in subsets if not s or counts[_subset_lcm(I, s)] == 1]
    return _labeled_simplicial(I, SimplicialComplex(vertices, faces))


def lyubeznik_complex(I: MonomialIdeal, order: Optional[Sequence[int]] = None) -> RegularCWComplex:
    """
    Faces {i_1 < ... < i_k} (positions in `order`, 1-based generator
    indices) such that no earlier generator m_q, q < i_t, divides
    lcm(m_{i_t}, ..., m_{i_k}) for any t.
    """
    r = len(I.generators)
    order = list(order) if order is not None else list(range(1, r + 1))
    if sorted(order) != list(range(1, r + 1)):
        raise DimensionMismatch(f"order must be a permutation of 1..{r}", location="order")

    def rooted(face: Tuple[int, ...]) -> bool:
        positions = [order.index(k) for k in face]
        for t, pos in enumerate(positions):
            tail = _subset_lcm(I, face[t:])
            if any(I.generators[order[q] - 1].divides(tail) for q in range(pos)):
                return False
        return True

    faces = [f for size in range(r + 1) for f in itertools.combinations(order, size) if rooted(f)]
    return _labeled_simplicial(I, SimplicialComplex(order, faces))


def _label_str(label: Hashable) -> str:
    if isinstance(label, tuple):
        return ":".join(str(part) for part in label)
    return str(label)


class MultigradedComplex:
    """A frame in degrees 0..top whose basis elements carry monomials."""

    def __init__(self, frame: ChainComplexOverField, multidegrees: Mapping[int, Sequence[Monomial]]):
        self.frame = frame
        self.field = frame.field
        self.multidegrees: Dict[int, List[Monomial]] = {}
        for i in frame.degrees:
            mdegs = list(multidegrees.get(i, []))
            if len(mdegs) != frame.dim(i):
                raise DimensionMismatch(f"{len(mdegs)} multidegrees for {frame.dim(i)} basis elements",
                                        location=f"degree {i}")
            self.multidegrees[i] = mdegs
        ns = {m.n for ms in self.multidegrees.values() for m in ms}
        if len(ns) > 1:
            raise DimensionMismatch("multidegrees in different numbers of variables")
        self.n = ns.pop() if ns else 0
        for i in range(frame.lo + 1, frame.hi + 1):
            for (r, c), _ in frame.diff(i).items():
                row, col = self.multidegrees[i - 1][r], self.multidegrees[i][c]
                if not row.divides(col):
                    raise NonMonotoneGrading(
                        f"entry from {col} to {row} is not homogeneous",
                        location=f"degree {i}, row {r}, col {c}",
                    )

    @property
    def degrees(self) -> range:
        return self.frame.degrees

    def ranks(self) -> List[int]:
        return self.frame.dims()

    def entry(self, i: int, r: int, c: int) -> Tuple[Any, Monomial]:
        return self.frame.diff(i).entry(r, c), self.multidegrees[i][c] / self.multidegrees[i - 1][r]

    def entries(self, i: int) -> List[Tuple[int, int, Any, Monomial]]:
        return [(r, c, v, self.multidegrees[i][c] / self.multidegrees[i - 1][r])
                for (r, c), v in self.frame.diff(i).items()]

    def strand(self, b: Monomial) -> ChainComplexOverField:
        """Subcomplex on basis elements whose multidegree divides x^b."""
        return self.frame.restricted({
            i: [label for label, m in zip(self.frame.labels(i), self.multidegrees[i]) if m.divides(b)]
            for i in self.frame.degrees
        })

    def to_export(self) -> Dict[str, Any]:
        return {
            "vars": self.n,
            "field": self.field.label,
            "degrees": [
                {"degree": i, "basis": [
                    {"label": _label_str(label), "multidegree": list(m.exponents)}
                    for label, m in zip(self.frame.labels(i), self.multidegrees[i])
                ]}
                for i in self.frame.degrees
            ],
            "entries": [
                {"degree": i, "row": r, "col": c, "scalar": self.field.format(v), "monomial": list(m.exponents)}
                for i in range(self.frame.lo + 1, self.frame.hi + 1)
                for r, c, v, m in self.entries(i)
            ],
        }

    def __repr__(self) -> str:
        return f"MultigradedComplex(ranks={self.ranks()})"


def homogenize_cellular(X: RegularCWComplex, field: FieldConfig,
                        cellular: Optional[ChainComplexOverField] = None) -> MultigradedComplex:
    """The cellular frame of X with cell σ placed in multidegree m_σ and ∅ in degree 0 at 1."""
    missing = [c.id for c in X.cells if c.mdeg is None]
    if missing:
        raise MissingMultidegrees(f"cells without multidegree: {', '.join(missing)}", location=missing[0])
    if not X.cells:
        raise MissingMultidegrees("complex has no cells to carry multidegrees")
    n = len(X.cells[0].mdeg)
    label = {c.id: Monomial(exponents=c.mdeg) for c in X.cells}
    label[EMPTY_CELL] = Monomial.one(n)
    for c in X.cells:
        for facet in c.facets:
            if not label[facet].divides(label[c.id]):
                raise NonMonotoneLabels(f"label {label[facet]} of {facet!r} does not divide {label[c.id]}",
                                        location=f"{c.id}/{facet}")
    frame = (cellular if cellular is not None else cellular_chain_complex(X, field)).shifted(1)
    return MultigradedComplex(frame, {i: [label[cid] for cid in frame.labels(i)] for i in frame.degrees})


def homogenize_d(D: DSequence, eta: Mapping[Hashable, Monomial]) -> MultigradedComplex:
    """F(η): the basis vectors at α sit in multidegree η(α)."""
    if not D.is_complex:
        raise NotAComplex("D(P) is not a complex", location=f"degree {D.verdict.degree}")
    for lo, hi in D.poset.covers:
        if not eta[lo].divides(eta[hi]):
            raise NonMonotoneGrading(f"η({lo}) = {eta[lo]} does not divide η({hi}) = {eta[hi]}",
                                     location=f"{lo}<{hi}")
    frame = D.complex
    return MultigradedComplex(frame, {i: [eta[label[0]] for label in frame.labels(i)] for i in frame.degrees})


def face_poset_grading(X: RegularCWComplex) -> Dict[Hashable, Monomial]:
    """η on the face poset of a labeled complex: cell labels, and 1 at ∅."""
    if not X.has_multidegrees or not X.cells:
        raise MissingMultidegrees("every cell needs a multidegree")
    eta: Dict[Hashable, Monomial] = {c.id: Monomial(exponents=c.mdeg) for c in X.cells}
    eta[EMPTY_CELL] = Monomial.one(len(X.cells[0].mdeg))
    return eta


def is_resolution(F: MultigradedComplex, I: MonomialIdeal) -> ResolutionVerdict:
    """
    Check that F resolves R/I: at every b of the lcm-lattice the strand is
    exact, except for a 1-dimensional H_0 when x^b is not in I.
    """
    if not verify_complex(F.frame):
        return ResolutionVerdict(is_resolution=False, failures=[
            StrandFailure(multidegree="not-a-complex", exponents=[], betti={}),
        ])
    if F.n != I.n:
        raise DimensionMismatch(f"complex in {F.n} variables, ideal in {I.n}")
    lattice = I.lcm_lattice_monomials()

    def check(b: Monomial) -> Optional[StrandFailure]:
        found = homology(F.strand(b)).nonzero()
        expected = {} if I.contains(b) else {0: 1}
        if found != expected:
            return StrandFailure(multidegree=str(b), exponents=list(b.exponents),
                                 betti={str(i): v for i, v in sorted(found.items())})
        return None

    failures = [f for f in parallel_map(check, lattice) if f is not None]
    return ResolutionVerdict(is_resolution=not failures, checked=len(lattice), failures=failures)


def is_minimal(F: MultigradedComplex) -> bool:
    """No nonzero entry carries the monomial 1."""
    return not any(m.is_one() for i in range(F.frame.lo + 1, F.frame.hi + 1) for _, _, _, m in F.entries(i))


def is_lattice_linear(F: MultigradedComplex, I: MonomialIdeal) -> LatticeLinearityVerdict:
    """Every nonzero entry must join multidegrees m' ⋖ m that form a cover of the lcm-lattice."""
    L = lcm_lattice(I)
    witnesses = []
    for i in range(F.frame.lo + 1, F.frame.hi + 1):
        for r, c, _, _ in F.entries(i):
            row, col = F.multidegrees[i - 1][r], F.multidegrees[i][c]
            if not L.covers(row, col):
                witnesses.append(EntryWitness(degree=i, row=r, col=c,
                                              row_multidegree=str(row), col_multidegree=str(col)))
    return LatticeLinearityVerdict(is_lattice_linear=not witnesses, witnesses=witnesses)


def gpw_betti(I: MonomialIdeal, field: FieldConfig) -> Dict[Tuple[int, Monomial], int]:
    """
    Multigraded betti numbers of R/I: β_{i,m} = dim H̃_{i-2}((1, m)) over the
    lcm-lattice. The unit ideal has none since R/R = 0.
    """
    if I.contains(Monomial.one(I.n)):
        return {}
    L = lcm_lattice(I)
    betti: Dict[Tuple[int, Monomial], int] = {(0, Monomial.one(I.n)): 1}
    for element, data in interval_homology_table(L.poset, field).items():
        for q, b in sorted(data.homology.nonzero().items()):
            betti[(q + 2, L.eta(element))] = b
    return betti


def betti_totals(betti: Mapping[Tuple[int, Monomial], int]) -> List[int]:
    top = max((i for i, _ in betti), default=-1)
    return [sum(b for (i, _), b in betti.items() if i == k) for k in range(top + 1)]


def cw_lattice_report(I: MonomialIdeal, field: FieldConfig) -> Tuple[CWLatticeReport, Optional[MultigradedComplex]]:
    """
    If the lcm-lattice is a CW-poset, build the complex it is the face poset
    of and check that its homogenization is a minimal resolution, which
    makes I lattice-linear. Independently, when the Scarf complex resolves I
    it is minimal and lattice-linearity is checked on it directly.
    """
    L = lcm_lattice(I)
    verdict = is_cw_poset(L.poset, field)
    report = CWLatticeReport(is_cw=verdict.is_cw, witness=verdict.witness)
    minimal_complex = None
    if verdict.is_cw:
        X = from_face_poset(L.poset, field, multidegrees={e: m.exponents for e, m in L.monomials.items()})
        F = homogenize_cellular(X, field)
        report.is_resolution = is_resolution(F, I).is_resolution
        report.is_minimal = is_minimal(F)
        report.intersection_property = has_intersection_property(X)
        report.lattice_linear_certified = report.is_resolution and report.is_minimal
        report.direct_lattice_linear = is_lattice_linear(F, I).is_lattice_linear
        report.minimal_cellular = F.to_export()
        minimal_complex = F
    else:
        scarf = homogenize_cellular(scarf_complex(I), field)
        if is_resolution(scarf, I).is_resolution:
            report.direct_lattice_linear = is_lattice_linear(scarf, I).is_lattice_linear
    logger.info("cw_lattice_report %r: is_cw %s, witness %s", I, report.is_cw, report.witness)
    return report, minimal_complex


def resolution_from_export(data: Union[ResolutionFile, Mapping[str, Any]],
                           field: Optional[FieldConfig] = None) -> MultigradedComplex:
    """Rebuild a MultigradedComplex from its export form."""
    if not isinstance(data, ResolutionFile):
        data = ResolutionFile.model_validate(data)
    exported = FieldConfig.parse(data.field)
    if field is None:
        field = exported
    elif field.label != exported.label:
        raise InvalidField(f"resolution has scalars over {exported.label}, not {field.label}", location="field")
    labels = {d.degree: [b.label for b in d.basis] for d in data.degrees}
    mdegs = {d.degree: [Monomial(exponents=tuple(b.multidegree)) for b in d.basis] for d in data.degrees}
    for d in data.degrees:
        for k, b in enumerate(d.basis):
            if len(b.multidegree) != data.vars:
                raise DimensionMismatch(f"multidegree of length {len(b.multidegree)}, expected {data.vars}",
                                        location=f"degrees.{d.degree}.basis.{k}")
    entries: Dict[int, Dict[Tuple[int, int], Any]] = {}
    for k, e in enumerate(data.entries):
        if e.degree not in labels or e.degree - 1 not in labels:
            raise DimensionMismatch(f"entry in degree {e.degree} has no source or target", location=f"entries.{k}")
        if e.row >= len(labels[e.degree - 1]) or e.col >= len(labels[e.degree]):
            raise DimensionMismatch("entry outside the basis", location=f"entries.{k}")
        row, col = mdegs[e.degree - 1][e.row], mdegs[e.degree][e.col]
        if not row.divides(col) or list((col / row).exponents) != e.monomial:
            raise NonMonotoneGrading(f"monomial {e.monomial} is not {col} / {row}", location=f"entries.{k}")
        entries.setdefault(e.degree, {})[(e.row, e.col)] = field.element(e.scalar)
    diffs = {
        i: FieldMatrix(field, len(labels[i - 1]), len(labels[i]), entries.get(i, {}))
        for i in labels if i - 1 in labels
    }
    return MultigradedComplex(ChainComplexOverField(field, labels, diffs), mdegs)
