"""
Monomial commands: lcm-lattices, resolutions, betti numbers and the CW lattice report.
"""

import logging
from typing import Any, Dict

from cwres.commands import load_ideal
from cwres.errors import InputError
from cwres.field_linalg import FieldConfig
from cwres.models import ResolutionFile, load_model
from cwres.monomial import (
    betti_totals,
    cw_lattice_report,
    gpw_betti,
    homogenize_cellular,
    homogenize_d,
    is_lattice_linear,
    is_minimal,
    is_resolution,
    lcm_lattice,
    lyubeznik_complex,
    resolution_from_export,
    scarf_complex,
    taylor_complex,
)
from cwres.poset_construction import d_construction
from cwres.registry import CommandGroup, CommandOutcome

logger = logging.getLogger(__name__)

NONMINIMAL_WARNING = "lattice-linearity checked on a non-minimal complex"


class MonomialCommands(CommandGroup):

    def execute(self, command_name: str, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        if command_name == "lcm-lattice":
            return self._lcm_lattice(parameters)
        elif command_name == "resolve":
            return self._resolve(parameters, field)
        elif command_name == "verify-resolution":
            return self._verify_resolution(parameters, field)
        elif command_name == "betti":
            return self._betti(parameters, field)
        elif command_name == "cw-lattice-report":
            return self._cw_lattice_report(parameters, field)
        raise InputError(f"Unknown command: {command_name}", location="command")

    def _lcm_lattice(self, parameters: Dict[str, Any]) -> CommandOutcome:
        I, digest = load_ideal(parameters["ideal"])
        L = lcm_lattice(I)
        result = L.poset.to_dict()
        result["monomials"] = {e: list(m.exponents) for e, m in L.monomials.items()}
        return CommandOutcome(ok=True, result=result, inputs={parameters["ideal"]: digest})

    def _resolve(self, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        I, digest = load_ideal(parameters["ideal"])
        kinds = [k for k in ("taylor", "scarf", "lyubeznik", "poset") if parameters.get(k)]
        if len(kinds) != 1:
            raise InputError("resolve needs exactly one of --taylor, --scarf, --lyubeznik, --poset",
                              location="resolve")
        kind = kinds[0]
        if kind == "taylor":
            F = homogenize_cellular(taylor_complex(I), field)
        elif kind == "scarf":
            F = homogenize_cellular(scarf_complex(I), field)
        elif kind == "lyubeznik":
            order = None
            if parameters.get("order"):
                try:
                    order = [int(k) for k in parameters["order"].split(",")]
                except ValueError:
                    raise InputError(f"bad generator order {parameters['order']!r}", location="order")
            F = homogenize_cellular(lyubeznik_complex(I, order), field)
        else:
            L = lcm_lattice(I)
            F = homogenize_d(d_construction(L.poset, field), L.monomials)
        result = F.to_export()
        result["ranks"] = F.ranks()
        return CommandOutcome(ok=True, result=result, inputs={parameters["ideal"]: digest})

    def _verify_resolution(self, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        I, ideal_digest = load_ideal(parameters["ideal"])
        data, resolution_digest = load_model(ResolutionFile, parameters["resolution"])
        F = resolution_from_export(data, field)
        verdict = is_resolution(F, I)
        minimal = is_minimal(F)
        warnings = []
        if not minimal:
            logger.warning(NONMINIMAL_WARNING)
            warnings.append(NONMINIMAL_WARNING)
        return CommandOutcome(
            ok=verdict.is_resolution,
            result={
                "ranks": F.ranks(),
                "resolution": verdict.model_dump(),
                "is_minimal": minimal,
                "lattice_linear": is_lattice_linear(F, I).model_dump(),
            },
            warnings=warnings,
            inputs={parameters["ideal"]: ideal_digest, parameters["resolution"]: resolution_digest},
        )

    def _betti(self, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        I, digest = load_ideal(parameters["ideal"])
        betti = gpw_betti(I, field)
        graded: Dict[str, Dict[str, int]] = {}
        for (i, m), b in sorted(betti.items(), key=lambda item: (item[0][0], item[0][1].sort_key())):
            graded.setdefault(str(i), {})[str(m)] = b
        return CommandOutcome(ok=True, result={"total": betti_totals(betti), "graded": graded},
                              inputs={parameters["ideal"]: digest})

    def _cw_lattice_report(self, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        I, digest = load_ideal(parameters["ideal"])
        report, _ = cw_lattice_report(I, field)
        return CommandOutcome(
            ok=not report.is_cw or report.lattice_linear_certified,
            result=report.model_dump(),
            inputs={parameters["ideal"]: digest},
        )
