"""
Pydantic models for cwres: input file formats, verdicts and CLI reports.

Loading an input file goes through `load_model`, which validates with
pydantic and turns a ValidationError into an InputError whose location
is the dotted path of the first offending field.
"""

import hashlib
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from cwres.errors import InputError


# Input file formats

class PosetFile(BaseModel):
    elements: List[str]
    covers: List[Tuple[str, str]] = Field(default_factory=list)
    labels: Dict[str, str] = Field(default_factory=dict)


class CellSpec(BaseModel):
    id: str
    dim: int = Field(..., ge=0)
    facets: List[str] = Field(default_factory=list)
    mdeg: Optional[List[int]] = None

    @field_validator("mdeg")
    @classmethod
    def _nonnegative(cls, v: Optional[List[int]]) -> Optional[List[int]]:
        if v is not None and any(e < 0 for e in v):
            raise ValueError("multidegree exponents must be nonnegative")
        return v


class CWFile(BaseModel):
    cells: List[CellSpec]


class IdealFile(BaseModel):
    vars: int = Field(..., ge=1)
    generators: List[List[int]]

    @model_validator(mode="after")
    def _check_shape(self) -> "IdealFile":
        for k, g in enumerate(self.generators):
            if len(g) != self.vars:
                raise ValueError(f"generator {k} has {len(g)} exponents, expected {self.vars}")
            if any(e < 0 for e in g):
                raise ValueError(f"generator {k} has a negative exponent")
        return self


class ComplexFile(BaseModel):
    """Facets of a simplicial complex; an empty face list is the complex {∅}."""

    vertices: Optional[List[str]] = None
    faces: List[List[str]] = Field(default_factory=list)


class ResolutionBasis(BaseModel):
    label: str
    multidegree: List[int]


class ResolutionDegree(BaseModel):
    degree: int
    basis: List[ResolutionBasis]


class ResolutionEntry(BaseModel):
    degree: int
    row: int = Field(..., ge=0)
    col: int = Field(..., ge=0)
    scalar: str
    monomial: List[int]


class ResolutionFile(BaseModel):
    vars: int = Field(..., ge=1)
    field: str = "q"
    degrees: List[ResolutionDegree]
    entries: List[ResolutionEntry] = Field(default_factory=list)

    @model_validator(mode="before")
    @classmethod
    def _unwrap_report(cls, data: Any) -> Any:
        # `resolve` prints its export inside a report
        if isinstance(data, dict) and "command" in data and "result" in data:
            return data["result"]
        return data


# Verdicts

class ComplexVerdict(BaseModel):
    is_complex: bool
    degree: Optional[int] = None
    row: Optional[int] = None
    col: Optional[int] = None

    def __bool__(self) -> bool:
        return self.is_complex


class SphereVerdict(BaseModel):
    element: str
    rank: int
    betti: Dict[str, int]
    is_sphere: bool


class CWPosetReport(BaseModel):
    least_element: Optional[str] = None
    nontrivial: bool = False
    ranked: bool = False
    thin: bool = False
    spheres: List[SphereVerdict] = Field(default_factory=list)
    witness: Optional[str] = None
    reasons: List[str] = Field(default_factory=list)
    certification: str = "homology-sphere certified"
    is_cw: bool = False

    def __bool__(self) -> bool:
        return self.is_cw


class IsoVerdict(BaseModel):
    isomorphic: bool
    dims: List[int]
    other_dims: List[int]
    ranks: List[int]
    other_ranks: List[int]
    mismatch_degree: Optional[int] = None

    def __bool__(self) -> bool:
        return self.isomorphic


class FiltrationSquareVerdict(BaseModel):
    element: str
    j: int
    holds: bool
    classes: int = 0
    failing_degree: Optional[int] = None

    def __bool__(self) -> bool:
        return self.holds


class StrandFailure(BaseModel):
    multidegree: str
    exponents: List[int]
    betti: Dict[str, int]


class ResolutionVerdict(BaseModel):
    is_resolution: bool
    checked: int = 0
    failures: List[StrandFailure] = Field(default_factory=list)

    def __bool__(self) -> bool:
        return self.is_resolution


class EntryWitness(BaseModel):
    degree: int
    row: int
    col: int
    row_multidegree: str
    col_multidegree: str


class LatticeLinearityVerdict(BaseModel):
    is_lattice_linear: bool
    witnesses: List[EntryWitness] = Field(default_factory=list)

    def __bool__(self) -> bool:
        return self.is_lattice_linear


class CWLatticeReport(BaseModel):
    is_cw: bool
    witness: Optional[str] = None
    lattice_linear_certified: bool = False
    intersection_property: Optional[bool] = None
    is_resolution: Optional[bool] = None
    is_minimal: Optional[bool] = None
    direct_lattice_linear: Optional[bool] = None
    minimal_cellular: Optional[Dict[str, Any]] = None


# CLI reports

class RunReport(BaseModel):
    command: str
    arguments: Dict[str, Any] = Field(default_factory=dict)
    field: str = "q"
    inputs: Dict[str, str] = Field(default_factory=dict)
    ok: bool
    result: Any = None
    warnings: List[str] = Field(default_factory=list)
    timing: Optional[float] = None


class ErrorDetail(BaseModel):
    kind: str
    location: Optional[str] = None
    message: str


class ErrorReport(BaseModel):
    command: Optional[str] = None
    ok: bool = False
    error: ErrorDetail


M = TypeVar("M", bound=BaseModel)


def load_model(model: Type[M], path: str) -> Tuple[M, str]:
    """Read and validate a JSON input file; return the model and the sha256 of its bytes."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}", location=path) from e
    digest = hashlib.sha256(data).hexdigest()
    try:
        return model.model_validate_json(data), digest
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or path
        raise InputError(f"{path}: {first['msg']}", location=location) from e
