"""
Finite posets, order complexes and the CW-poset test.

A Poset is stored as its Hasse diagram in a networkx DiGraph (edges go
from the lower element to the covering one). Element order is the input
order; it breaks every tie in this package ("smallest id" means "first
in the element list").
"""

import itertools
import logging
from typing import Any, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from cwres.config import parallel_map
from cwres.errors import (
    CycleDetected,
    DuplicateId,
    NoLeastElement,
    NotComparable,
    NotRanked,
    TransitiveCover,
    UnknownElement,
)
from cwres.field_linalg import ChainComplexOverField, FieldConfig, FieldMatrix, homology
from cwres.models import CWPosetReport, SphereVerdict

logger = logging.getLogger(__name__)

Face = Tuple[Hashable, ...]


class Poset:
    """A finite poset given by its cover relations."""

    def __init__(self, elements: Sequence[Hashable], covers: Iterable[Tuple[Hashable, Hashable]],
                 labels: Optional[Mapping[Hashable, str]] = None):
        self._elements: Tuple[Hashable, ...] = tuple(elements)
        self._position: Dict[Hashable, int] = {}
        for k, e in enumerate(self._elements):
            if e in self._position:
                raise DuplicateId(f"element {e!r} listed twice", location=f"elements[{k}]")
            self._position[e] = k

        graph = nx.DiGraph()
        graph.add_nodes_from(self._elements)
        covers = [tuple(c) for c in covers]
        for k, (lo, hi) in enumerate(covers):
            for end in (lo, hi):
                if end not in self._position:
                    raise UnknownElement(f"cover uses unknown element {end!r}", location=f"covers[{k}]")
            if lo == hi:
                raise CycleDetected(f"{lo!r} covers itself", location=f"covers[{k}]")
            if graph.has_edge(lo, hi):
                raise DuplicateId(f"cover ({lo!r}, {hi!r}) listed twice", location=f"covers[{k}]")
            graph.add_edge(lo, hi)

        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            path = " -> ".join(str(u) for u, _ in cycle) + f" -> {cycle[0][0]}"
            raise CycleDetected(f"cover relation has a cycle: {path}", location=path)

        reduction = nx.transitive_reduction(graph)
        for k, (lo, hi) in enumerate(covers):
            if not reduction.has_edge(lo, hi):
                raise TransitiveCover(f"({lo!r}, {hi!r}) is implied by other covers", location=f"covers[{k}]")

        self.labels: Dict[Hashable, str] = dict(labels or {})
        for e in self.labels:
            if e not in self._position:
                raise UnknownElement(f"label for unknown element {e!r}", location=f"labels.{e}")
        nx.set_node_attributes(graph, {e: self.labels.get(e, str(e)) for e in self._elements}, "label")
        self._graph = graph
        self._above: Dict[Hashable, frozenset] = {}
        self._linear: Optional[Tuple[Hashable, ...]] = None

    @classmethod
    def from_relation(cls, elements: Sequence[Hashable], relation: Iterable[Tuple[Hashable, Hashable]],
                      labels: Optional[Mapping[Hashable, str]] = None) -> "Poset":
        """Build a poset from any set of pairs a < b; covers are recomputed."""
        graph = nx.DiGraph()
        graph.add_nodes_from(elements)
        graph.add_edges_from(relation)
        if not nx.is_directed_acyclic_graph(graph):
            raise CycleDetected("relation is not antisymmetric", location=str(nx.find_cycle(graph)[0]))
        position = {e: k for k, e in enumerate(elements)}
        covers = sorted(nx.transitive_reduction(graph).edges(), key=lambda c: (position[c[1]], position[c[0]]))
        return cls(elements, covers, labels)

    @property
    def elements(self) -> Tuple[Hashable, ...]:
        return self._elements

    @property
    def covers(self) -> List[Tuple[Hashable, Hashable]]:
        return sorted(self._graph.edges(), key=lambda c: (self._position[c[1]], self._position[c[0]]))

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self._elements)

    def __contains__(self, x: object) -> bool:
        return x in self._position

    def position(self, x: Hashable) -> int:
        try:
            return self._position[x]
        except KeyError:
            raise UnknownElement(f"{x!r} is not an element", location=str(x))

    def label(self, x: Hashable) -> str:
        return self.labels.get(x, str(x))

    def upper_covers(self, x: Hashable) -> List[Hashable]:
        return sorted(self._graph.successors(x), key=self.position)

    def lower_covers(self, x: Hashable) -> List[Hashable]:
        return sorted(self._graph.predecessors(x), key=self.position)

    def above(self, x: Hashable) -> frozenset:
        """Elements strictly greater than x."""
        if x not in self._above:
            self.position(x)
            self._above[x] = frozenset(nx.descendants(self._graph, x))
        return self._above[x]

    def less(self, a: Hashable, b: Hashable) -> bool:
        return b in self.above(a)

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return a == b or self.less(a, b)

    def minimal_elements(self) -> List[Hashable]:
        return [e for e in self._elements if self._graph.in_degree(e) == 0]

    def maximal_elements(self) -> List[Hashable]:
        return [e for e in self._elements if self._graph.out_degree(e) == 0]

    def least_element(self) -> Optional[Hashable]:
        minimal = self.minimal_elements()
        return minimal[0] if len(minimal) == 1 else None

    def linear_extension(self) -> Tuple[Hashable, ...]:
        """Topological order that prefers earlier elements."""
        if self._linear is None:
            self._linear = tuple(nx.lexicographical_topological_sort(self._graph, key=self.position))
        return self._linear

    def subposet(self, subset: Iterable[Hashable]) -> "Poset":
        """Induced subposet; covers are recomputed from the induced order."""
        keep = set(subset)
        for x in keep:
            self.position(x)
        elements = [e for e in self._elements if e in keep]
        relation = [(a, b) for a in elements for b in self.above(a) if b in keep]
        return Poset.from_relation(elements, relation, {e: self.labels[e] for e in elements if e in self.labels})

    def chains(self) -> List[Face]:
        """All nonempty chains, each listed bottom to top."""
        comparability = nx.transitive_closure_dag(self._graph).to_undirected()
        order = {e: k for k, e in enumerate(self.linear_extension())}
        return [tuple(sorted(clique, key=order.__getitem__)) for clique in nx.enumerate_all_cliques(comparability)]

    def is_isomorphic(self, other: "Poset", match_labels: bool = False) -> bool:
        node_match = (lambda a, b: a["label"] == b["label"]) if match_labels else None
        return nx.is_isomorphic(self._graph, other._graph, node_match=node_match)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "elements": [str(e) for e in self._elements],
            "covers": [[str(a), str(b)] for a, b in self.covers],
            "labels": {str(e): label for e, label in self.labels.items()},
        }

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements, {self._graph.number_of_edges()} covers)"


def build_poset(elements: Sequence[Hashable], covers: Iterable[Tuple[Hashable, Hashable]],
                labels: Optional[Mapping[Hashable, str]] = None) -> Poset:
    return Poset(elements, covers, labels)


def _check_less(P: Poset, a: Hashable, b: Hashable) -> None:
    if not P.less(a, b):
        raise NotComparable(f"{a!r} is not below {b!r}", location=f"{a}..{b}")


def open_interval(P: Poset, a: Hashable, b: Hashable) -> Poset:
    """Elements strictly between a and b."""
    _check_less(P, a, b)
    return P.subposet(x for x in P.above(a) if P.less(x, b))


def half_closed_interval(P: Poset, a: Hashable, b: Hashable) -> Poset:
    """Elements x with a < x <= b."""
    _check_less(P, a, b)
    return P.subposet(x for x in P.above(a) if P.leq(x, b))


class SimplicialComplex:
    """
    A finite simplicial complex, always containing the empty face.

    Faces are tuples whose vertices follow the order of `vertices`; for an
    order complex that order is a linear extension, so every face lists its
    chain bottom to top.
    """

    def __init__(self, vertices: Sequence[Hashable], faces: Iterable[Iterable[Hashable]]):
        self.vertices: Tuple[Hashable, ...] = tuple(vertices)
        self._position = {v: k for k, v in enumerate(self.vertices)}
        if len(self._position) != len(self.vertices):
            raise DuplicateId("repeated vertex")
        normalized = {self._normalize(f) for f in faces}
        normalized.add(())
        for face in normalized:
            for k in range(len(face)):
                if face[:k] + face[k + 1:] not in normalized:
                    raise UnknownElement(f"face {face!r} is missing a facet", location=str(face))
        self.faces: List[Face] = sorted(normalized, key=self._sort_key)
        self._face_set = frozenset(self.faces)

    @classmethod
    def from_facets(cls, vertices: Sequence[Hashable], facets: Iterable[Iterable[Hashable]]) -> "SimplicialComplex":
        faces = set()
        for facet in facets:
            facet = tuple(facet)
            for size in range(len(facet) + 1):
                faces.update(itertools.combinations(facet, size))
        return cls(vertices, faces)

    def _normalize(self, face: Iterable[Hashable]) -> Face:
        face = tuple(face)
        for v in face:
            if v not in self._position:
                raise UnknownElement(f"face uses unknown vertex {v!r}", location=str(v))
        if len(set(face)) != len(face):
            raise DuplicateId(f"face {face!r} repeats a vertex", location=str(face))
        return tuple(sorted(face, key=self._position.__getitem__))

    def _sort_key(self, face: Face) -> Tuple[int, Tuple[int, ...]]:
        return (len(face), tuple(self._position[v] for v in face))

    def __contains__(self, face: object) -> bool:
        return face in self._face_set

    def __len__(self) -> int:
        return len(self.faces)

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.faces) - 1

    def faces_of_dim(self, d: int) -> List[Face]:
        return [f for f in self.faces if len(f) == d + 1]

    def f_vector(self) -> List[int]:
        return [len(self.faces_of_dim(d)) for d in range(-1, self.dim + 1)]

    def facets(self) -> List[Face]:
        return [f for f in self.faces
                if not any(len(g) == len(f) + 1 and set(f) <= set(g) for g in self.faces)]

    @staticmethod
    def boundary(chain: Mapping[Face, Any], field: FieldConfig) -> Dict[Face, Any]:
        """Simplicial boundary of a chain given as face -> coefficient."""
        out: Dict[Face, Any] = {}
        for face, c in chain.items():
            for j in range(len(face)):
                sub = face[:j] + face[j + 1:]
                term = c if j % 2 == 0 else -c
                out[sub] = out.get(sub, field.zero) + term
        return {f: c for f, c in out.items() if not field.is_zero(c)}

    def chain_complex(self, field: FieldConfig) -> ChainComplexOverField:
        """Reduced simplicial chain complex, the empty face in degree -1."""
        labels = {d: self.faces_of_dim(d) for d in range(-1, self.dim + 1)}
        index = {d: {f: k for k, f in enumerate(fs)} for d, fs in labels.items()}
        diffs = {}
        for d in range(0, self.dim + 1):
            entries = {}
            for col, face in enumerate(labels[d]):
                for j in range(len(face)):
                    row = index[d - 1][face[:j] + face[j + 1:]]
                    entries[(row, col)] = field.one if j % 2 == 0 else -field.one
            diffs[d] = FieldMatrix(field, len(labels[d - 1]), len(labels[d]), entries)
        return ChainComplexOverField(field, labels, diffs)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "vertices": [str(v) for v in self.vertices],
            "faces": [[str(v) for v in f] for f in self.faces],
            "f_vector": self.f_vector(),
        }

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, f_vector={self.f_vector()})"


def order_complex(P: Poset) -> SimplicialComplex:
    """The simplicial complex of chains of P."""
    return SimplicialComplex(P.linear_extension(), P.chains())


def compute_rank(P: Poset) -> Dict[Hashable, int]:
    """
    Rank function of P, rank(0̂) = 0.

    Raises NotRanked at the first element (in linear-extension order) that
    is reached by maximal chains of different lengths.
    """
    least = P.least_element()
    if least is None:
        raise NoLeastElement("poset has no least element")
    shortest: Dict[Hashable, List[Hashable]] = {least: [least]}
    longest: Dict[Hashable, List[Hashable]] = {least: [least]}
    for x in P.linear_extension():
        if x == least:
            continue
        below = P.lower_covers(x)
        short = min(below, key=lambda p: len(shortest[p]))
        long = max(below, key=lambda p: len(longest[p]))
        shortest[x] = shortest[short] + [x]
        longest[x] = longest[long] + [x]
        if len(shortest[x]) != len(longest[x]):
            raise NotRanked(x, shortest[x], longest[x])
    return {x: len(longest[x]) - 1 for x in P.elements}


def thin_failures(P: Poset, rank: Mapping[Hashable, int]) -> List[Tuple[Hashable, Hashable, int]]:
    """Length-2 intervals [x, y] without exactly two middle elements, as (x, y, count)."""
    failures = []
    for x in P.elements:
        tops = {y for c in P.upper_covers(x) for y in P.upper_covers(c)}
        for y in sorted(tops, key=P.position):
            middle = set(P.upper_covers(x)) & set(P.lower_covers(y))
            if len(middle) != 2:
                failures.append((x, y, len(middle)))
    return failures


def _sphere_verdict(P: Poset, least: Hashable, x: Hashable, rank: int, field: FieldConfig) -> SphereVerdict:
    H = homology(order_complex(open_interval(P, least, x)).chain_complex(field))
    nonzero = H.nonzero()
    return SphereVerdict(
        element=str(x),
        rank=rank,
        betti={str(i): b for i, b in sorted(nonzero.items())},
        is_sphere=nonzero == {rank - 2: 1},
    )


def is_cw_poset(P: Poset, field: Optional[FieldConfig] = None) -> CWPosetReport:
    """
    Test whether P is a CW-poset.

    "Homeomorphic to a sphere" is replaced by a homology check: the order
    complex of every (0̂, x) must have the reduced homology of a sphere of
    dimension rank(x) - 2.
    """
    field = field or FieldConfig.rationals()
    report = CWPosetReport()
    least = P.least_element()
    if least is None:
        report.reasons.append("no least element")
        return report
    report.least_element = str(least)
    report.nontrivial = len(P) > 1
    if not report.nontrivial:
        report.reasons.append("poset has a single element")
        return report
    try:
        rank = compute_rank(P)
    except NotRanked as e:
        report.witness = str(e.witness)
        report.reasons.append(e.message)
        return report
    report.ranked = True

    thin = thin_failures(P, rank)
    report.thin = not thin
    for x, y, count in thin:
        report.reasons.append(f"interval [{x}, {y}] has {count} middle elements")

    others = [x for x in P.elements if x != least]
    report.spheres = parallel_map(lambda x: _sphere_verdict(P, least, x, rank[x], field), others)
    for verdict in report.spheres:
        if not verdict.is_sphere:
            report.reasons.append(f"(0̂, {verdict.element}) is not a homology {verdict.rank - 2}-sphere")

    failing = {str(y) for _, y, _ in thin} | {v.element for v in report.spheres if not v.is_sphere}
    report.witness = next((str(x) for x in P.elements if str(x) in failing), None)
    report.is_cw = report.witness is None
    logger.debug("is_cw_poset: %s elements, witness %s", len(P), report.witness)
    return report
