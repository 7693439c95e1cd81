"""
Topology commands: face posets, order complexes, homology, CW-poset test.
"""

from typing import Any, Dict

from cwres.commands import load_complex, load_cw, load_poset
from cwres.cw import cellular_chain_complex
from cwres.errors import InputError
from cwres.field_linalg import FieldConfig, homology
from cwres.poset import is_cw_poset, order_complex
from cwres.registry import CommandGroup, CommandOutcome


class TopologyCommands(CommandGroup):

    def execute(self, command_name: str, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        if command_name == "face-poset":
            return self._face_poset(parameters, field)
        elif command_name == "order-complex":
            return self._order_complex(parameters)
        elif command_name == "homology":
            return self._homology(parameters, field)
        elif command_name == "is-cw-poset":
            return self._is_cw_poset(parameters, field)
        raise InputError(f"Unknown command: {command_name}", location="command")

    def _face_poset(self, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        X, digest = load_cw(parameters["cw"])
        X.validate(field)
        P, rank = X.face_poset()
        return CommandOutcome(
            ok=True,
            result={"poset": P.to_dict(), "rank": {str(e): rank[e] for e in P}, "f_vector": X.f_vector()},
            inputs={parameters["cw"]: digest},
        )

    def _order_complex(self, parameters: Dict[str, Any]) -> CommandOutcome:
        P, digest = load_poset(parameters["poset"])
        return CommandOutcome(ok=True, result=order_complex(P).to_dict(), inputs={parameters["poset"]: digest})

    def _homology(self, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        given = [name for name in ("complex", "poset", "cw") if parameters.get(name)]
        if len(given) != 1:
            raise InputError("homology needs exactly one of --complex, --poset, --cw", location="homology")
        source = given[0]
        path = parameters[source]
        if source == "complex":
            K, digest = load_complex(path)
            C = K.chain_complex(field)
        elif source == "poset":
            P, digest = load_poset(path)
            C = order_complex(P).chain_complex(field)
        else:
            X, digest = load_cw(path)
            C = cellular_chain_complex(X.validate(field), field)
        return CommandOutcome(ok=True, result=homology(C).to_dict(), inputs={path: digest})

    def _is_cw_poset(self, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        P, digest = load_poset(parameters["poset"])
        report = is_cw_poset(P, field)
        return CommandOutcome(ok=report.is_cw, result=report.model_dump(), inputs={parameters["poset"]: digest})
