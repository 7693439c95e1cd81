"""
Regular CW-complexes.

A complex is given by its cells and their facets (codimension-one faces);
the empty cell of dimension -1 is implicit. Incidence numbers are not
supplied by the caller: they are read off the poset construction D(P) of
the face poset, where every cell contributes exactly one basis vector.
"""

import logging
from typing import Any, Dict, Hashable, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict
from sympy.polys.monomials import monomial_divides

from cwres.config import parallel_map
from cwres.errors import (
    DimensionMismatch,
    DuplicateId,
    EntryNotUnit,
    MissingMultidegrees,
    NotCWPoset,
    UnknownElement,
)
from cwres.field_linalg import ChainComplexOverField, FieldConfig, FieldMatrix, homology
from cwres.models import CWFile, ResolutionVerdict, StrandFailure
from cwres.poset import Poset, SimplicialComplex, compute_rank, is_cw_poset
from cwres.poset_construction import DSequence, d_construction

logger = logging.getLogger(__name__)

EMPTY_CELL = "∅"


class Cell(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    dim: int
    facets: Tuple[str, ...] = ()
    mdeg: Optional[Tuple[int, ...]] = None


class FacePoset(NamedTuple):
    poset: Poset
    rank: Dict[Hashable, int]


class RegularCWComplex:
    """Cells in input order; `facets` never mention the empty cell."""

    def __init__(self, cells: Iterable[Cell]):
        self.cells: Tuple[Cell, ...] = tuple(cells)
        self._by_id: Dict[str, Cell] = {}
        for k, cell in enumerate(self.cells):
            if cell.id == EMPTY_CELL or cell.id in self._by_id:
                raise DuplicateId(f"cell id {cell.id!r} is reserved or repeated", location=f"cells[{k}].id")
            if cell.dim < 0:
                raise DimensionMismatch(f"cell {cell.id!r} has negative dimension", location=f"cells[{k}].dim")
            self._by_id[cell.id] = cell
        for k, cell in enumerate(self.cells):
            for facet in cell.facets:
                if facet not in self._by_id:
                    raise UnknownElement(f"cell {cell.id!r} lists unknown facet {facet!r}",
                                         location=f"cells[{k}].facets")
                if self._by_id[facet].dim != cell.dim - 1:
                    raise DimensionMismatch(
                        f"facet {facet!r} of {cell.id!r} has dimension {self._by_id[facet].dim}, "
                        f"expected {cell.dim - 1}",
                        location=f"cells[{k}].facets",
                    )
            if cell.dim > 0 and not cell.facets:
                raise DimensionMismatch(f"cell {cell.id!r} of dimension {cell.dim} has no facets",
                                        location=f"cells[{k}].facets")
            if len(set(cell.facets)) != len(cell.facets):
                raise DuplicateId(f"cell {cell.id!r} repeats a facet", location=f"cells[{k}].facets")
        self._closure: Dict[str, frozenset] = {}

    @classmethod
    def from_file(cls, data: CWFile) -> "RegularCWComplex":
        return cls(
            Cell(id=c.id, dim=c.dim, facets=tuple(f for f in c.facets if f != EMPTY_CELL),
                 mdeg=None if c.mdeg is None else tuple(c.mdeg))
            for c in data.cells
        )

    @classmethod
    def from_simplicial(cls, K: SimplicialComplex,
                        mdeg: Optional[Mapping[Tuple, Tuple[int, ...]]] = None) -> "RegularCWComplex":
        """Cells named "v1,v2,..." after the vertices of each nonempty face."""
        def name(face):
            return ",".join(str(v) for v in face)

        return cls(
            Cell(id=name(f), dim=len(f) - 1,
                 facets=tuple(name(f[:j] + f[j + 1:]) for j in range(len(f))) if len(f) > 1 else (),
                 mdeg=None if mdeg is None else mdeg[f])
            for f in K.faces if f
        )

    @property
    def dim(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    @property
    def ids(self) -> List[str]:
        return [c.id for c in self.cells]

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell_id: object) -> bool:
        return cell_id in self._by_id

    def cell(self, cell_id: str) -> Cell:
        try:
            return self._by_id[cell_id]
        except KeyError:
            raise UnknownElement(f"no cell {cell_id!r}", location=str(cell_id))

    def cells_of_dim(self, d: int) -> List[Cell]:
        return [c for c in self.cells if c.dim == d]

    def f_vector(self) -> List[int]:
        return [1] + [len(self.cells_of_dim(d)) for d in range(self.dim + 1)]

    @property
    def has_multidegrees(self) -> bool:
        return all(c.mdeg is not None for c in self.cells)

    def closure(self, cell_id: str) -> frozenset:
        """Ids of all nonempty faces of a cell, the cell included."""
        if cell_id not in self._closure:
            cell = self.cell(cell_id)
            faces = {cell_id}
            for facet in cell.facets:
                faces |= self.closure(facet)
            self._closure[cell_id] = frozenset(faces)
        return self._closure[cell_id]

    def subcomplex(self, keep: Iterable[str]) -> "RegularCWComplex":
        keep = set(keep)
        return RegularCWComplex(c for c in self.cells if c.id in keep)

    def face_poset(self) -> FacePoset:
        """Poset of all cells and the empty cell, ordered by the facet relation."""
        elements = [EMPTY_CELL] + self.ids
        covers = [(EMPTY_CELL, c.id) for c in self.cells_of_dim(0)]
        covers += [(f, c.id) for c in self.cells for f in c.facets]
        rank = {EMPTY_CELL: 0}
        rank.update({c.id: c.dim + 1 for c in self.cells})
        return FacePoset(Poset(elements, covers), rank)

    def validate(self, field: Optional[FieldConfig] = None) -> "RegularCWComplex":
        """Raise NotCWPoset unless the face poset passes the CW-poset test."""
        report = is_cw_poset(self.face_poset().poset, field)
        if not report.is_cw:
            raise NotCWPoset("; ".join(report.reasons) or "not a CW-poset", witness=report.witness)
        return self

    def to_dict(self) -> Dict[str, Any]:
        out = []
        for c in self.cells:
            entry: Dict[str, Any] = {"id": c.id, "dim": c.dim, "facets": list(c.facets)}
            if c.mdeg is not None:
                entry["mdeg"] = list(c.mdeg)
            out.append(entry)
        return {"cells": out}

    def __repr__(self) -> str:
        return f"RegularCWComplex(f_vector={self.f_vector()})"


def face_poset(X: RegularCWComplex) -> FacePoset:
    return X.face_poset()


def from_face_poset(P: Poset, field: Optional[FieldConfig] = None,
                    multidegrees: Optional[Mapping[Hashable, Tuple[int, ...]]] = None) -> RegularCWComplex:
    """The regular CW-complex whose face poset is P; cells are named str(element)."""
    report = is_cw_poset(P, field)
    if not report.is_cw:
        raise NotCWPoset("; ".join(report.reasons) or "not a CW-poset", witness=report.witness)
    rank = compute_rank(P)
    least = P.least_element()
    return RegularCWComplex(
        Cell(
            id=str(x),
            dim=rank[x] - 1,
            facets=tuple(str(y) for y in P.lower_covers(x) if y != least),
            mdeg=None if multidegrees is None else tuple(multidegrees[x]),
        )
        for x in P.elements if x != least
    )


def incidence_numbers(X: RegularCWComplex, field: FieldConfig,
                      dseq: Optional[DSequence] = None) -> Dict[Tuple[str, str], Any]:
    """
    Incidence numbers c_{σ,τ} for every cell σ and facet τ (τ = ∅ for vertices).

    Each entry is the matrix coefficient of φ between the single basis
    vectors that D(P_X) holds at σ and τ.
    """
    P = X.face_poset().poset
    D = dseq if dseq is not None else d_construction(P, field)
    C = D.complex
    numbers: Dict[Tuple[str, str], Any] = {}
    for cell in X.cells:
        i = cell.dim + 1
        basis = [label for label in C.labels(i) if label[0] == cell.id]
        if len(basis) != 1 or sum(D.table[cell.id].homology.betti.values()) != 1:
            raise NotCWPoset(f"cell {cell.id!r} does not carry a single sphere class", witness=cell.id)
        col = C.index(i, basis[0])
        rows = C.labels(i - 1)
        for facet in (cell.facets or (EMPTY_CELL,)):
            value = field.zero
            for r, v in C.diff(i).column_items(col):
                if rows[r][0] == facet:
                    value = v
            if field.to_fraction(value) not in (-1, 1):
                raise EntryNotUnit(
                    f"incidence number of {cell.id!r} on {facet!r} is {field.format(value)}",
                    location=f"{cell.id}/{facet}",
                )
            numbers[(cell.id, facet)] = value
    return numbers


def cellular_chain_complex(X: RegularCWComplex, field: FieldConfig,
                           incidences: Optional[Mapping[Tuple[str, str], Any]] = None) -> ChainComplexOverField:
    """Augmented cellular chain complex: cells of dimension d in degree d, ∅ in degree -1."""
    incidences = incidences if incidences is not None else incidence_numbers(X, field)
    labels: Dict[int, List[str]] = {-1: [EMPTY_CELL]}
    for d in range(X.dim + 1):
        labels[d] = [c.id for c in X.cells_of_dim(d)]
    index = {d: {cid: k for k, cid in enumerate(ids)} for d, ids in labels.items()}
    diffs = {}
    for d in range(X.dim + 1):
        entries = {}
        for col, cid in enumerate(labels[d]):
            for facet in (X.cell(cid).facets or (EMPTY_CELL,)):
                entries[(index[d - 1][facet], col)] = incidences[(cid, facet)]
        diffs[d] = FieldMatrix(field, len(labels[d - 1]), len(labels[d]), entries)
    return ChainComplexOverField(field, labels, diffs)


def skeleton(X: RegularCWComplex, i: int) -> RegularCWComplex:
    return X.subcomplex(c.id for c in X.cells if c.dim <= i)


def _divides(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        raise DimensionMismatch(f"multidegree of length {len(a)} against {len(b)} variables")
    return monomial_divides(tuple(a), tuple(b))


def _require_multidegrees(X: RegularCWComplex) -> None:
    missing = [c.id for c in X.cells if c.mdeg is None]
    if missing:
        raise MissingMultidegrees(f"cells without multidegree: {', '.join(missing)}", location=missing[0])


def restrict_to_multidegree(X: RegularCWComplex, b: Sequence[int]) -> RegularCWComplex:
    """Cells whose multidegree divides x^b."""
    _require_multidegrees(X)
    return X.subcomplex(c.id for c in X.cells if _divides(c.mdeg, b))


def supports_resolution(X: RegularCWComplex, I: Any, field: FieldConfig,
                        cellular: Optional[ChainComplexOverField] = None) -> ResolutionVerdict:
    """
    Acyclicity criterion on the labeled complex itself: the vertex labels
    must be the minimal generators of I, and every nonempty X_{≼b}, b in
    the lcm-lattice of I, must have zero reduced homology.

    `I` is a MonomialIdeal.
    """
    _require_multidegrees(X)
    vertex_labels = sorted(c.mdeg for c in X.cells_of_dim(0))
    generators = sorted(tuple(g.exponents) for g in I.generators)
    if vertex_labels != generators:
        return ResolutionVerdict(is_resolution=False, failures=[
            StrandFailure(multidegree="vertex-labels", exponents=[], betti={}),
        ])
    C = cellular if cellular is not None else cellular_chain_complex(X, field)
    lattice = list(I.lcm_lattice_monomials())

    def check(m) -> Optional[StrandFailure]:
        kept = {c.id for c in X.cells if _divides(c.mdeg, m.exponents)}
        if not kept:
            return None
        strand = C.restricted({d: [EMPTY_CELL] if d == -1 else [cid for cid in C.labels(d) if cid in kept]
                               for d in C.degrees})
        nonzero = homology(strand).nonzero()
        if nonzero:
            return StrandFailure(multidegree=str(m), exponents=list(m.exponents),
                                 betti={str(i): b for i, b in sorted(nonzero.items())})
        return None

    failures = [f for f in parallel_map(check, lattice) if f is not None]
    return ResolutionVerdict(is_resolution=not failures, checked=len(lattice), failures=failures)


def has_intersection_property(X: RegularCWComplex) -> bool:
    """One maximal cell, and the common faces of any two cells have a greatest element."""
    maximal = [c.id for c in X.cells if not any(c.id in X.cell(o).facets for o in X.ids)]
    if len(maximal) != 1:
        return False
    for k, a in enumerate(X.ids):
        for b in X.ids[k + 1:]:
            common = X.closure(a) & X.closure(b)
            if common and not any(common <= X.closure(g) for g in common):
                return False
    return True
