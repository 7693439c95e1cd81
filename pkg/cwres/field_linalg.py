"""
Exact linear algebra for cwres.

This module provides:
- FieldConfig: the coefficient field (rationals or a prime field)
- FieldMatrix: immutable matrices over that field
- ChainComplexOverField: finite chain complexes of vector spaces with labeled bases
- homology / relative_homology: homology with explicit cycle bases

Elimination is done by sympy's DomainMatrix over QQ or GF(p), so every
scalar is exact. Pivots are chosen by the reduced row echelon form, which
makes all bases deterministic for a given basis order.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Hashable, Iterable, List, Literal, Mapping, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator
from sympy import GF, QQ, isprime
from sympy.polys.matrices import DomainMatrix

from cwres.config import settings
from cwres.errors import (
    CoordinateSolveFailed,
    DimensionMismatch,
    DuplicateId,
    InvalidField,
    NotAComplex,
    NotACycle,
    NotASubcomplex,
    UnknownElement,
)
from cwres.models import ComplexVerdict

logger = logging.getLogger(__name__)

Scalar = Any
Vector = List[Scalar]


@lru_cache(maxsize=None)
def _domain(kind: str, p: Optional[int]):
    return QQ if kind == "q" else GF(p)


class FieldConfig(BaseModel):
    """The coefficient field k: exact rationals or GF(p)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["q", "fp"] = "q"
    p: Optional[int] = None

    @model_validator(mode="after")
    def _check_prime(self) -> "FieldConfig":
        if self.kind == "fp" and (self.p is None or not isprime(self.p)):
            raise ValueError(f"GF(p) needs a prime p, got {self.p}")
        if self.kind == "q" and self.p is not None:
            raise ValueError("p is only meaningful for prime fields")
        return self

    @classmethod
    def rationals(cls) -> "FieldConfig":
        return cls(kind="q")

    @classmethod
    def prime(cls, p: int) -> "FieldConfig":
        try:
            return cls(kind="fp", p=p)
        except ValidationError as e:
            raise InvalidField(str(e.errors()[0]["msg"]), location="p") from e

    @classmethod
    def parse(cls, spec: str) -> "FieldConfig":
        """Parse the CLI form: `q` or `fp:<p>`."""
        spec = spec.strip().lower()
        if spec == "q":
            return cls.rationals()
        if spec.startswith("fp:"):
            try:
                p = int(spec[3:])
            except ValueError:
                raise InvalidField(f"not a prime field spec: {spec!r}", location="--field")
            return cls.prime(p)
        raise InvalidField(f"unknown field {spec!r}; expected q or fp:<p>", location="--field")

    @property
    def domain(self):
        return _domain(self.kind, self.p)

    @property
    def label(self) -> str:
        return "q" if self.kind == "q" else f"fp:{self.p}"

    @property
    def zero(self) -> Scalar:
        return self.domain.zero

    @property
    def one(self) -> Scalar:
        return self.domain.one

    def element(self, value: Union[int, Fraction, str]) -> Scalar:
        """Convert an integer, Fraction or "p/q" string into a field element."""
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            num, den = value.numerator, value.denominator
        else:
            num, den = int(value), 1
        K = self.domain
        if self.kind == "q":
            return K(num, den)
        if den % self.p == 0:
            raise InvalidField(f"{value} has no image in GF({self.p})")
        return K.quo(K(num), K(den))

    def is_zero(self, x: Scalar) -> bool:
        return self.domain.is_zero(x)

    def to_fraction(self, x: Scalar) -> Fraction:
        """Exact value of x; prime-field elements map to their symmetric representative."""
        value = self.domain.to_sympy(x)
        if self.kind == "q":
            return Fraction(int(value.p), int(value.q))
        v = int(value) % self.p
        return Fraction(v - self.p if v > self.p // 2 else v)

    def format(self, x: Scalar) -> str:
        f = self.to_fraction(x)
        return f"{f.numerator}/{f.denominator}"

    def vector(self, values: Iterable[Any]) -> Vector:
        return [_coerce(self, v) for v in values]


def _coerce(field: FieldConfig, value: Any) -> Scalar:
    if isinstance(value, (int, Fraction, str)):
        return field.element(value)
    return value


class FieldMatrix:
    """
    Immutable matrix over a FieldConfig.

    Only nonzero entries are stored. Elimination goes through DomainMatrix,
    dense or sparse depending on `settings.sparse_threshold`.
    """

    __slots__ = ("field", "nrows", "ncols", "_entries")

    def __init__(self, field: FieldConfig, nrows: int, ncols: int,
                 entries: Optional[Mapping[Tuple[int, int], Scalar]] = None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self._entries: Dict[Tuple[int, int], Scalar] = {}
        for (i, j), value in (entries or {}).items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise DimensionMismatch(f"entry ({i}, {j}) outside a {nrows}x{ncols} matrix")
            value = _coerce(field, value)
            if not field.is_zero(value):
                self._entries[(i, j)] = value

    @classmethod
    def zeros(cls, field: FieldConfig, nrows: int, ncols: int) -> "FieldMatrix":
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field: FieldConfig, n: int) -> "FieldMatrix":
        return cls(field, n, n, {(i, i): field.one for i in range(n)})

    @classmethod
    def from_rows(cls, field: FieldConfig, rows: Sequence[Sequence[Any]], ncols: Optional[int] = None) -> "FieldMatrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(row) != ncols for row in rows):
            raise DimensionMismatch("rows of different lengths")
        return cls(field, len(rows), ncols,
                   {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)})

    @classmethod
    def from_columns(cls, field: FieldConfig, nrows: int, columns: Sequence[Sequence[Any]]) -> "FieldMatrix":
        if any(len(col) != nrows for col in columns):
            raise DimensionMismatch(f"columns must have length {nrows}")
        return cls(field, nrows, len(columns),
                   {(i, j): v for j, col in enumerate(columns) for i, v in enumerate(col)})

    @classmethod
    def from_domain_matrix(cls, field: FieldConfig, dm: DomainMatrix) -> "FieldMatrix":
        nrows, ncols = dm.shape
        rows = dm.to_list() if nrows and ncols else []
        return cls(field, nrows, ncols,
                   {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)})

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def entry(self, i: int, j: int) -> Scalar:
        return self._entries.get((i, j), self.field.zero)

    def items(self) -> List[Tuple[Tuple[int, int], Scalar]]:
        """Nonzero entries in row-major order."""
        return sorted(self._entries.items())

    def column_items(self, j: int) -> List[Tuple[int, Scalar]]:
        return sorted((i, v) for (i, c), v in self._entries.items() if c == j)

    def column(self, j: int) -> Vector:
        col = [self.field.zero] * self.nrows
        for i, v in self.column_items(j):
            col[i] = v
        return col

    def to_rows(self) -> List[Vector]:
        rows = [[self.field.zero] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self._entries.items():
            rows[i][j] = v
        return rows

    def is_zero(self) -> bool:
        return not self._entries

    def first_nonzero(self) -> Optional[Tuple[int, int]]:
        return min(self._entries) if self._entries else None

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.field, self.ncols, self.nrows,
                           {(j, i): v for (i, j), v in self._entries.items()})

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "FieldMatrix":
        row_at = {r: k for k, r in enumerate(rows)}
        col_at = {c: k for k, c in enumerate(cols)}
        return FieldMatrix(self.field, len(rows), len(cols), {
            (row_at[i], col_at[j]): v
            for (i, j), v in self._entries.items()
            if i in row_at and j in col_at
        })

    def hstack(self, other: "FieldMatrix") -> "FieldMatrix":
        if other.nrows != self.nrows:
            raise DimensionMismatch(f"cannot stack {self.shape} with {other.shape}")
        entries = dict(self._entries)
        entries.update({(i, j + self.ncols): v for (i, j), v in other._entries.items()})
        return FieldMatrix(self.field, self.nrows, self.ncols + other.ncols, entries)

    def to_domain_matrix(self) -> DomainMatrix:
        K = self.field.domain
        if self.nrows * self.ncols > settings.sparse_threshold:
            rows: Dict[int, Dict[int, Scalar]] = {}
            for (i, j), v in self._entries.items():
                rows.setdefault(i, {})[j] = v
            return DomainMatrix(rows, self.shape, K)
        return DomainMatrix(self.to_rows(), self.shape, K)

    def matmul(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if not (self.nrows and self.ncols and other.ncols) or self.is_zero() or other.is_zero():
            return FieldMatrix.zeros(self.field, self.nrows, other.ncols)
        product = self.to_domain_matrix().matmul(other.to_domain_matrix())
        return FieldMatrix.from_domain_matrix(self.field, product)

    def apply(self, vector: Sequence[Any]) -> Vector:
        """Return M·v."""
        if len(vector) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(vector)} for {self.ncols} columns")
        vector = self.field.vector(vector)
        out = [self.field.zero] * self.nrows
        for (i, j), v in self._entries.items():
            out[i] = out[i] + v * vector[j]
        return out

    def rref(self) -> Tuple[List[Vector], Tuple[int, ...]]:
        """Reduced row echelon form as rows, with the pivot columns."""
        if not (self.nrows and self.ncols) or self.is_zero():
            return self.to_rows(), ()
        reduced, pivots = self.to_domain_matrix().rref()
        return reduced.to_list(), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> List[Vector]:
        """Kernel basis, one vector per free column, with entry 1 at that column."""
        rows, pivots = self.rref()
        K = self.field.domain
        basis = []
        for free in range(self.ncols):
            if free in pivots:
                continue
            v = [K.zero] * self.ncols
            v[free] = K.one
            for k, p in enumerate(pivots):
                v[p] = -rows[k][free]
            basis.append(v)
        return basis

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self._entries == other._entries)

    def __repr__(self) -> str:
        rows = [[str(self.field.to_fraction(v)) for v in row] for row in self.to_rows()]
        return f"FieldMatrix({self.field.label}, {rows})"


def rank(M: FieldMatrix) -> int:
    return M.rank()


def solve_in_span(M: FieldMatrix, v: Sequence[Any]) -> Optional[Vector]:
    """
    Find c with M·c = v.

    Returns None when v is not in the column span of M. Free variables are
    set to zero, so the answer is deterministic.
    """
    if len(v) != M.nrows:
        raise DimensionMismatch(f"vector of length {len(v)} for a matrix with {M.nrows} rows")
    field = M.field
    augmented = M.hstack(FieldMatrix.from_columns(field, M.nrows, [field.vector(v)]))
    rows, pivots = augmented.rref()
    if M.ncols in pivots:
        return None
    coefficients = [field.zero] * M.ncols
    for k, p in enumerate(pivots):
        coefficients[p] = rows[k][M.ncols]
    return coefficients


class ChainComplexOverField:
    """
    A finite chain complex of vector spaces.

    `labels[i]` names the basis of degree i; `diffs[i]` is the matrix of the
    differential from degree i to degree i-1 (rows: degree i-1, columns:
    degree i). Missing differentials are zero.
    """

    def __init__(self, field: FieldConfig, labels: Mapping[int, Sequence[Hashable]],
                 diffs: Optional[Mapping[int, FieldMatrix]] = None):
        self.field = field
        self._labels: Dict[int, Tuple[Hashable, ...]] = {i: tuple(ls) for i, ls in sorted(labels.items())}
        self._index: Dict[int, Dict[Hashable, int]] = {}
        for i, ls in self._labels.items():
            index = {label: k for k, label in enumerate(ls)}
            if len(index) != len(ls):
                raise DuplicateId(f"repeated basis label in degree {i}", location=f"degree {i}")
            self._index[i] = index
        self.lo = min(self._labels) if self._labels else 0
        self.hi = max(self._labels) if self._labels else -1
        self._diffs: Dict[int, FieldMatrix] = {}
        for i, matrix in (diffs or {}).items():
            expected = (self.dim(i - 1), self.dim(i))
            if matrix.shape != expected:
                raise DimensionMismatch(
                    f"differential in degree {i} has shape {matrix.shape}, expected {expected}",
                    location=f"degree {i}",
                )
            if matrix.field != field:
                raise DimensionMismatch("differential over a different field", location=f"degree {i}")
            self._diffs[i] = matrix

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, i: int) -> int:
        return len(self._labels.get(i, ()))

    def dims(self) -> List[int]:
        return [self.dim(i) for i in self.degrees]

    def labels(self, i: int) -> Tuple[Hashable, ...]:
        return self._labels.get(i, ())

    def index(self, i: int, label: Hashable) -> int:
        try:
            return self._index[i][label]
        except KeyError:
            raise UnknownElement(f"{label!r} is not a basis label in degree {i}", location=f"degree {i}")

    def diff(self, i: int) -> FieldMatrix:
        if i in self._diffs:
            return self._diffs[i]
        return FieldMatrix.zeros(self.field, self.dim(i - 1), self.dim(i))

    def vector(self, i: int, chain: Mapping[Hashable, Any]) -> Vector:
        v = [self.field.zero] * self.dim(i)
        for label, coefficient in chain.items():
            v[self.index(i, label)] = _coerce(self.field, coefficient)
        return v

    def chain(self, i: int, vector: Sequence[Scalar]) -> Dict[Hashable, Scalar]:
        return {label: c for label, c in zip(self.labels(i), vector) if not self.field.is_zero(c)}

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.dim(i) for i in self.degrees)

    def shifted(self, k: int) -> "ChainComplexOverField":
        """The same complex with every degree raised by k."""
        return ChainComplexOverField(
            self.field,
            {i + k: ls for i, ls in self._labels.items()},
            {i + k: m for i, m in self._diffs.items()},
        )

    def restricted(self, keep: Mapping[int, Iterable[Hashable]]) -> "ChainComplexOverField":
        """Keep only the given labels per degree; differentials become submatrices."""
        wanted = {i: set(keep.get(i, ())) for i in self.degrees}
        kept = {i: [label for label in self.labels(i) if label in wanted[i]] for i in self.degrees}
        rows_of = {i: [self.index(i, label) for label in kept[i]] for i in self.degrees}
        diffs = {
            i: self.diff(i).submatrix(rows_of.get(i - 1, []), rows_of[i])
            for i in self.degrees if i - 1 in rows_of
        }
        return ChainComplexOverField(self.field, kept, diffs)


def verify_complex(C: ChainComplexOverField) -> ComplexVerdict:
    """Check that consecutive differentials compose to zero; report the first failure."""
    for i in range(C.lo + 2, C.hi + 1):
        witness = C.diff(i - 1).matmul(C.diff(i)).first_nonzero()
        if witness is not None:
            return ComplexVerdict(is_complex=False, degree=i, row=witness[0], col=witness[1])
    return ComplexVerdict(is_complex=True)


class HomologyResult:
    """
    Homology of a chain complex, degree by degree.

    `cycle_basis[i]` holds cycles whose classes form a basis of H_i. Each
    basis cycle is scaled so that its last nonzero coefficient is 1.
    `coordinates` writes any cycle in that basis modulo boundaries.
    """

    def __init__(self, complex: ChainComplexOverField, cycle_basis: Dict[int, List[Vector]],
                 spans: Dict[int, FieldMatrix]):
        self.complex = complex
        self.cycle_basis = cycle_basis
        self.betti = {i: len(basis) for i, basis in cycle_basis.items()}
        self._spans = spans

    def cycles(self, i: int) -> List[Dict[Hashable, Scalar]]:
        return [self.complex.chain(i, z) for z in self.cycle_basis.get(i, [])]

    def coordinates(self, i: int, chain: Union[Mapping[Hashable, Any], Sequence[Any]]) -> Vector:
        """Coordinates of the class of a cycle in the stored basis of H_i."""
        C = self.complex
        if i not in self.cycle_basis:
            if chain and any(not C.field.is_zero(_coerce(C.field, c)) for c in
                             (chain.values() if isinstance(chain, Mapping) else chain)):
                raise CoordinateSolveFailed(f"nonzero chain outside degrees {C.lo}..{C.hi}", location=f"degree {i}")
            return []
        vector = C.vector(i, chain) if isinstance(chain, Mapping) else C.field.vector(chain)
        if any(not C.field.is_zero(x) for x in C.diff(i).apply(vector)):
            raise NotACycle(f"chain is not a cycle in degree {i}", location=f"degree {i}")
        span = self._spans[i]
        solution = solve_in_span(span, vector)
        if solution is None:
            raise CoordinateSolveFailed(f"cycle not expressible in the homology basis", location=f"degree {i}")
        return solution[span.ncols - self.betti[i]:]

    def total(self) -> int:
        return sum(self.betti.values())

    def nonzero(self) -> Dict[int, int]:
        return {i: b for i, b in self.betti.items() if b}

    def to_dict(self) -> Dict[str, int]:
        return {str(i): b for i, b in sorted(self.betti.items())}


def homology(C: ChainComplexOverField) -> HomologyResult:
    """Homology of C with explicit cycle bases."""
    verdict = verify_complex(C)
    if not verdict:
        raise NotAComplex(
            f"differentials do not compose to zero at degree {verdict.degree}",
            location=f"degree {verdict.degree}, row {verdict.row}, col {verdict.col}",
        )
    field = C.field
    K = field.domain
    cycle_basis: Dict[int, List[Vector]] = {}
    spans: Dict[int, FieldMatrix] = {}
    for i in C.degrees:
        cycles = C.diff(i).nullspace()
        boundaries = C.diff(i + 1)
        chosen: List[Vector] = []
        if cycles:
            combined = boundaries.hstack(FieldMatrix.from_columns(field, C.dim(i), cycles))
            _, pivots = combined.rref()
            for p in pivots:
                if p < boundaries.ncols:
                    continue
                z = cycles[p - boundaries.ncols]
                last = next(x for x in reversed(z) if not K.is_zero(x))
                chosen.append([K.quo(x, last) for x in z])
        cycle_basis[i] = chosen
        spans[i] = boundaries.hstack(FieldMatrix.from_columns(field, C.dim(i), chosen))
        logger.debug("degree %s: dim %s, cycles %s, betti %s", i, C.dim(i), len(cycles), len(chosen))
    return HomologyResult(C, cycle_basis, spans)


def relative_homology(C: ChainComplexOverField, selection: Iterable[Hashable]) -> HomologyResult:
    """
    Homology of C modulo the subcomplex spanned by the selected labels.

    The selection applies to every degree; it must be closed under the
    support of the differential.
    """
    selected = set(selection)
    for i in C.degrees:
        below = C.labels(i - 1)
        for j, label in enumerate(C.labels(i)):
            if label not in selected:
                continue
            for r, _ in C.diff(i).column_items(j):
                if below[r] not in selected:
                    raise NotASubcomplex(
                        f"boundary of {label!r} leaves the selection at {below[r]!r}",
                        location=f"degree {i}",
                    )
    quotient = C.restricted({i: [label for label in C.labels(i) if label not in selected] for i in C.degrees})
    return homology(quotient)
