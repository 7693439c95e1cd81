"""Input loaders shared by the command groups. Each returns the object and the file's sha256."""

from typing import Tuple

from cwres.cw import RegularCWComplex
from cwres.models import ComplexFile, CWFile, IdealFile, PosetFile, load_model
from cwres.monomial import MonomialIdeal
from cwres.poset import Poset, SimplicialComplex


def load_poset(path: str) -> Tuple[Poset, str]:
    data, digest = load_model(PosetFile, path)
    return Poset(data.elements, data.covers, data.labels), digest


def load_cw(path: str) -> Tuple[RegularCWComplex, str]:
    data, digest = load_model(CWFile, path)
    return RegularCWComplex.from_file(data), digest


def load_ideal(path: str) -> Tuple[MonomialIdeal, str]:
    data, digest = load_model(IdealFile, path)
    return MonomialIdeal.from_file(data), digest


def load_complex(path: str) -> Tuple[SimplicialComplex, str]:
    data, digest = load_model(ComplexFile, path)
    vertices = data.vertices
    if vertices is None:
        vertices = list(dict.fromkeys(v for face in data.faces for v in face))
    return SimplicialComplex.from_facets(vertices, data.faces), digest
