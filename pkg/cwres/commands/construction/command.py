"""
Construction commands: D(P), its comparison with C(X), and the filtration squares.
"""

from typing import Any, Dict, Tuple

from cwres.commands import load_cw, load_poset
from cwres.cw import cellular_chain_complex, incidence_numbers
from cwres.errors import InputError, UnknownElement
from cwres.field_linalg import FieldConfig
from cwres.poset import Poset, compute_rank
from cwres.poset_construction import check_filtration_square, check_filtration_squares, compare_complexes, d_construction
from cwres.registry import CommandGroup, CommandOutcome


class ConstructionCommands(CommandGroup):

    def execute(self, command_name: str, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        if command_name == "d-construction":
            return self._d_construction(parameters, field)
        elif command_name == "compare":
            return self._compare(parameters, field)
        elif command_name == "filtration-check":
            return self._filtration_check(parameters, field)
        raise InputError(f"Unknown command: {command_name}", location="command")

    def _poset_input(self, parameters: Dict[str, Any], field: FieldConfig) -> Tuple[Poset, Dict[str, str]]:
        given = [name for name in ("poset", "cw") if parameters.get(name)]
        if len(given) != 1:
            raise InputError("needs exactly one of --poset, --cw", location="input")
        path = parameters[given[0]]
        if given[0] == "poset":
            P, digest = load_poset(path)
        else:
            X, digest = load_cw(path)
            P = X.validate(field).face_poset().poset
        return P, {path: digest}

    def _d_construction(self, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        P, inputs = self._poset_input(parameters, field)
        D = d_construction(P, field, parameters.get("strategy") or "smallest-id")
        return CommandOutcome(ok=D.is_complex, result=D.to_dict(), inputs=inputs)

    def _compare(self, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        X, digest = load_cw(parameters["cw"])
        X.validate(field)
        D = d_construction(X.face_poset().poset, field)
        C = cellular_chain_complex(X, field, incidence_numbers(X, field, D))
        verdict = compare_complexes(C, D.complex, 1)
        return CommandOutcome(ok=verdict.isomorphic, result=verdict.model_dump(),
                              inputs={parameters["cw"]: digest})

    def _filtration_check(self, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        P, inputs = self._poset_input(parameters, field)
        D = d_construction(P, field)
        element = parameters.get("element")
        if element is None:
            verdicts = check_filtration_squares(P, field, D)
            if parameters.get("j") is not None:
                verdicts = [v for v in verdicts if v.j == parameters["j"]]
        else:
            if element not in P:
                raise UnknownElement(f"no element {element!r}", location="element")
            rank = compute_rank(P)
            levels = [parameters["j"]] if parameters.get("j") is not None else range(rank[element] + 1)
            verdicts = [check_filtration_square(P, element, j, field, D, rank) for j in levels]
        return CommandOutcome(
            ok=all(v.holds for v in verdicts),
            result=[v.model_dump() for v in verdicts],
            inputs=inputs,
        )
