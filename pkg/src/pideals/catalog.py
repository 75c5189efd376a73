"""Build submeasures, sets, sequences and masses from their JSON descriptions."""
from __future__ import annotations

from typing import Mapping

from .core import FiniteSupportMeasure, Submeasure, sup_of_measures
from .errors import SpecError
from .masses import Harmonic, mass_from_dict
from .rademacher import jr_submeasure
from .series import induced_submeasure, sequence_from_dict
from .sets import set_from_dict
from .witness import FamilySpec, phi_family
from .zoo import (capped_count_rule, density_submeasure, empty_otimes_fin_submeasure,
                  farah_submeasure, generalized_density_submeasure, measure_block_rule,
                  summable_submeasure, trace_null_submeasure, tree_density_submeasure,
                  tree_summable_submeasure)

PRESETS = ("summable", "density", "generalized-density", "empty-otimes-fin", "farah",
           "trace-null", "tree-summable", "tree-density", "rademacher", "sup-of-measures",
           "induced", "phi-family")

# the nine named ideals, each with default parameters
NAMED_PRESETS = ("summable", "density", "generalized-density", "empty-otimes-fin", "farah",
                 "trace-null", "tree-summable", "tree-density", "rademacher")


def measure_from_dict(d: Mapping) -> FiniteSupportMeasure:
    atoms = d["atoms"] if "atoms" in d else d
    return FiniteSupportMeasure({int(k): v for k, v in atoms.items()})


def family_from_dict(d: Mapping) -> FamilySpec:
    return FamilySpec(d["kind"], d.get("universe", "omega"), d.get("cap"), d.get("partition"))


def submeasure_from_dict(d: Mapping) -> Submeasure:
    preset = d.get("preset")
    if preset == "summable":
        h = mass_from_dict(d["h"]) if "h" in d else Harmonic()
        return summable_submeasure(h)
    if preset == "density":
        return density_submeasure(d.get("partition", "dyadic"), d.get("weights", "uniform"))
    if preset == "generalized-density":
        if "measure" in d:
            rule = measure_block_rule(d["measure"])
        else:
            rule = capped_count_rule(d.get("cap", "n"), d.get("scale", "recip"))
        return generalized_density_submeasure(d.get("partition", "dyadic"), rule)
    if preset == "empty-otimes-fin":
        return empty_otimes_fin_submeasure()
    if preset == "farah":
        return farah_submeasure()
    if preset == "trace-null":
        return trace_null_submeasure()
    if preset == "tree-summable":
        return tree_summable_submeasure()
    if preset == "tree-density":
        return tree_density_submeasure()
    if preset == "rademacher":
        return jr_submeasure(d.get("block_cap"), d.get("mode", "closed-form"))
    if preset == "sup-of-measures":
        return sup_of_measures([measure_from_dict(m) for m in d.get("measures", [])])
    if preset == "induced":
        return induced_submeasure(sequence_from_dict(d["sequence"]), d.get("mode", "auto"))
    if preset == "phi-family":
        return phi_family(mass_from_dict(d["f"]), family_from_dict(d["family"]))
    raise SpecError(f"unknown preset {preset!r}; expected one of {PRESETS}")


__all__ = ["PRESETS", "NAMED_PRESETS", "submeasure_from_dict", "measure_from_dict",
           "family_from_dict", "set_from_dict", "sequence_from_dict", "mass_from_dict"]
