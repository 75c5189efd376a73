"""Command-line front end: one JSON config in, result records out.

    pideals eval --config run.json
    pideals witness trace-family --config fam.json --format table
    pideals reproduce --seed 0

Exit status: 0 success, 2 config error, 3 budget exceeded, 4 a check found a
violation or refutation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

import jsonschema

from . import sweeps
from .catalog import (NAMED_PRESETS, PRESETS, family_from_dict, measure_from_dict,
                      submeasure_from_dict)
from .core import (exh_verdict, fin_verdict, symmetric_difference_metric, tail_matrix,
                   tallness_diagnostic)
from .errors import BudgetExceeded, SpecError
from .masses import MASS_RULES, mass_from_dict
from .rademacher import a_x_projection, rademacher_vector
from .rational import Q, fmt
from .series import (SEQUENCE_RULES, c0_normal_form, cauchy_modulus, column_finiteness_check,
                     ellinf_representation, induced_submeasure, nonpathological_envelope,
                     partial_sum, sequence_from_dict, support_block, bounded_columns_to_gdensity)
from .sets import SET_KINDS, TREE_RULES, SetSpec, as_finite, set_from_dict
from .witness import (FAMILY_KINDS, ExplicitTreeMass, LevelMass, SpineMass, WitnessFamily,
                      bm_sets, covering_sample_check, density_like_search, heavy_branch_search,
                      phi_family, summable_like_check, trace_null_witness_family, union_table)
from .zoo import trace_null_submeasure

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_VIOLATION = 0, 2, 3, 4
DEFAULT_HORIZON = 1 << 14
FORMATS = ("json", "csv", "table")

OPS = ("eval", "tails", "member", "metric", "series-sum", "modulus", "represent", "rademacher",
       "witness", "phi-family", "axioms", "tallness", "sweep", "reproduce")
TARGETS = {
    "represent": ("ellinf", "c0-normal", "gdensity", "envelope"),
    "rademacher": ("vectors", "phi", "checks"),
    "witness": ("summable-like", "density-like", "trace-family", "covering", "heavy-branch",
                "bm"),
    "sweep": ("ellinf-identity", "absval", "envelope", "bounded-columns", "phi-family"),
}

# ---------------------------------------------------------------- schema

_RATIONAL = {"oneOf": [
    {"type": "integer"},
    {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"},
    {"type": "object", "additionalProperties": False,
     "required": ["numerator", "denominator"],
     "properties": {"numerator": {"type": "integer"},
                    "denominator": {"type": "integer", "minimum": 1}}},
]}
_NAT = {"type": "integer", "minimum": 0}
_PARTITION = {"oneOf": [
    {"type": "string"},
    {"type": "object", "additionalProperties": False, "required": ["cuts"],
     "properties": {"cuts": {"type": "array", "items": _NAT}}},
]}
_MASS = {"type": "object", "additionalProperties": False, "required": ["rule"],
         "properties": {"rule": {"enum": list(MASS_RULES)}, "scale": {"$ref": "#/$defs/rational"},
                        "p": {"type": "integer", "minimum": 1},
                        "ratio": {"$ref": "#/$defs/rational"},
                        "weight": {"enum": ["pow2", "recip", "recip-square"]},
                        "width": {"enum": ["full", "n"]},
                        "values": {"type": "array", "items": {"$ref": "#/$defs/rational"}},
                        "k": _NAT}}
_MEASURE = {"type": "object", "additionalProperties": False, "required": ["atoms"],
            "properties": {"atoms": {"type": "object",
                                     "propertyNames": {"pattern": "^[0-9]+$"},
                                     "additionalProperties": {"$ref": "#/$defs/rational"}}}}
_FAMILY = {"type": "object", "additionalProperties": False, "required": ["kind"],
           "properties": {"kind": {"enum": list(FAMILY_KINDS)},
                          "universe": {"enum": ["omega", "tree"]},
                          "cap": {"oneOf": [_NAT, {"enum": ["n", "pow2/n"]}]},
                          "partition": _PARTITION}}
_SET = {"type": "object", "additionalProperties": False, "required": ["kind"],
        "properties": {"kind": {"enum": list(SET_KINDS)},
                       "elements": {"type": "array", "items": _NAT},
                       "intervals": {"type": "array",
                                     "items": {"type": "array", "items": _NAT,
                                               "minItems": 2, "maxItems": 2}},
                       "start": _NAT, "step": {"type": "integer", "minimum": 1},
                       "base": {"type": "integer", "minimum": 2}, "offset": {"type": "integer"},
                       "partition": _PARTITION,
                       "count": {"oneOf": [_NAT, {"enum": ["all", "sqrt", "log"]}]},
                       "rule": {"enum": list(TREE_RULES)}, "level": _NAT,
                       "prefix": {"type": "string", "pattern": "^[01]*$"},
                       "bit": {"enum": [0, 1]}, "m": {"type": "integer", "minimum": 1},
                       "n": _NAT}}
_SEQUENCE = {"type": "object", "additionalProperties": False, "required": ["rule"],
             "properties": {"rule": {"enum": list(SEQUENCE_RULES)},
                            "norm": {"enum": ["ell1", "sup"]},
                            "terms": {"type": "array", "items": {
                                "type": "object", "propertyNames": {"pattern": "^[0-9]+$"},
                                "additionalProperties": {"$ref": "#/$defs/rational"}}},
                            "width": {"type": "integer", "minimum": 1},
                            "measures": {"type": "array", "items": _MEASURE}}}
_SUBMEASURE = {"type": "object", "additionalProperties": False, "required": ["preset"],
               "properties": {"preset": {"enum": list(PRESETS)}, "h": _MASS,
                              "partition": _PARTITION, "weights": {"enum": ["uniform", "recip"]},
                              "measure": {"enum": ["uniform", "recip"]},
                              "cap": {"oneOf": [_NAT, {"enum": ["n", "sqrt", "all"]}]},
                              "scale": {"oneOf": [{"enum": ["pow2", "recip", "recip-square"]},
                                                  {"$ref": "#/$defs/rational"}]},
                              "measures": {"type": "array", "items": _MEASURE, "minItems": 1},
                              "mode": {"enum": ["closed-form", "brute", "auto"]},
                              "block_cap": {"type": "integer", "minimum": 1},
                              "sequence": _SEQUENCE, "f": _MASS, "family": _FAMILY}}
_TREE_MASS = {"type": "object", "additionalProperties": False, "required": ["kind"],
              "properties": {"kind": {"enum": ["level", "spine", "explicit"]},
                             "weight": _MASS, "bit": {"enum": [0, 1]},
                             "weights": {"type": "object",
                                         "propertyNames": {"pattern": "^[0-9]+$"},
                                         "additionalProperties": {"$ref": "#/$defs/rational"}}}}
_PARAMS = {"type": "object", "additionalProperties": False, "properties": {
    "target": {"type": "string"}, "seed": _NAT, "horizon": {"type": "integer", "minimum": 1},
    "budget": {"type": "integer", "minimum": 1}, "cutoffs": {"type": "array", "items": _NAT},
    "epsilon": {"$ref": "#/$defs/rational"}, "delta": {"$ref": "#/$defs/rational"},
    "bar": {"$ref": "#/$defs/rational"}, "threshold": {"$ref": "#/$defs/rational"},
    "k": {"type": "integer", "minimum": 1}, "m": _NAT, "T": {"type": "integer", "minimum": 1},
    "kind": {"enum": ["exh", "fin"]}, "window": {"oneOf": [
        {"type": "array", "items": _NAT}, {"type": "integer", "minimum": 0, "maximum": 14}]},
    "mode": {"enum": ["closed-form", "brute", "auto", "explicit", "symbolic"]},
    "count": _NAT, "pairs": _NAT, "below": {"type": "integer", "minimum": 1},
    "max_size": _NAT, "sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
    "depth": _NAT, "node_budget": {"type": "integer", "minimum": 1},
    "max_pieces": {"type": "integer", "minimum": 1},
    "tree_mass": _TREE_MASS, "h": _MASS, "a": _MASS, "b": _MASS, "f": _MASS,
    "family": _FAMILY, "coefficients": {"type": "array", "items": {"$ref": "#/$defs/rational"}},
    "n": _NAT, "block_cap": {"type": "integer", "minimum": 1},
    "samples": _NAT, "sets_per_instance": _NAT, "universe_size": {"type": "integer",
                                                                   "minimum": 1, "maximum": 10},
    "norm": {"enum": ["ell1", "sup"]}, "tuples": _NAT,
}}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object", "additionalProperties": False, "required": ["op"],
    "$defs": {"rational": _RATIONAL},
    "properties": {
        "op": {"enum": list(OPS)},
        "submeasure": _SUBMEASURE,
        "set": _SET,
        "sets": {"type": "array", "items": _SET},
        "sequence": _SEQUENCE,
        "params": _PARAMS,
        "output": {"type": "object", "additionalProperties": False,
                   "properties": {"format": {"enum": list(FORMATS)}}},
    },
}


class ConfigError(SpecError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


@dataclass(frozen=True)
class RunConfig:
    op: str
    submeasure: Mapping | None = None
    set: Mapping | None = None
    sets: tuple | None = None
    sequence: Mapping | None = None
    params: Mapping = field(default_factory=dict)
    format: str = "json"

    @property
    def seed(self) -> int:
        return self.params.get("seed", 0)

    @property
    def horizon(self) -> int:
        return self.params.get("horizon", DEFAULT_HORIZON)

    @property
    def target(self) -> str | None:
        return self.params.get("target")

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"op": self.op}
        for key in ("submeasure", "set", "sequence"):
            if getattr(self, key) is not None:
                out[key] = _plain(getattr(self, key))
        if self.sets is not None:
            out["sets"] = [_plain(s) for s in self.sets]
        out["params"] = _plain(self.params)
        out["output"] = {"format": self.format}
        return out

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(json.dumps(self.to_dict(), sort_keys=True))


def _plain(x):
    if isinstance(x, Mapping):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _validate(doc):
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is None:
        return
    while err.context:
        err = jsonschema.exceptions.best_match(err.context)
    msg = err.message
    if err.validator == "enum":
        msg = f"{err.instance!r} is not one of {err.validator_value}"
    raise ConfigError(_path(err.absolute_path), msg)


def _semantic(path, fn, *args):
    try:
        return fn(*args)
    except (SpecError, ValueError, ZeroDivisionError, KeyError, TypeError) as exc:
        raise ConfigError(path, str(exc)) from None


_RATIONAL_PARAMS = ("epsilon", "delta", "bar", "threshold")


def parse_config(text: str | Mapping, overrides: Mapping | None = None) -> RunConfig:
    """Validate a config document (text or already-parsed) into a RunConfig."""
    if isinstance(text, Mapping):
        doc = json.loads(json.dumps(text))
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("", f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("", "config must be a JSON object")
    overrides = dict(overrides or {})
    params = dict(doc.get("params", {}))
    for key in ("seed", "horizon", "budget", "target"):
        if overrides.get(key) is not None:
            params[key] = overrides[key]
    if overrides.get("op"):
        doc["op"] = overrides["op"]
    params.setdefault("seed", 0)
    params.setdefault("horizon", DEFAULT_HORIZON)
    doc["params"] = params
    fmt_ = overrides.get("format") or doc.get("output", {}).get("format", "json")
    doc["output"] = {"format": fmt_}
    _validate(doc)
    op = doc["op"]
    if op in TARGETS:
        tgt = params.get("target")
        if tgt not in TARGETS[op]:
            raise ConfigError("params.target",
                              f"{tgt!r} is not one of {list(TARGETS[op])} for op {op!r}")
    # semantic checks, each reported with its path
    if "submeasure" in doc:
        _semantic("submeasure", submeasure_from_dict, doc["submeasure"])
    if "set" in doc:
        _semantic("set", set_from_dict, doc["set"])
    for i, s in enumerate(doc.get("sets", [])):
        _semantic(f"sets[{i}]", set_from_dict, s)
    if "sequence" in doc:
        _semantic("sequence", sequence_from_dict, doc["sequence"])
    for key in _RATIONAL_PARAMS:
        if key in params:
            _semantic(f"params.{key}", Q, params[key])
    for i, c in enumerate(params.get("coefficients", [])):
        _semantic(f"params.coefficients[{i}]", Q, c)
    for key in ("h", "a", "b", "f"):
        if key in params:
            _semantic(f"params.{key}", mass_from_dict, params[key])
    if "family" in params:
        _semantic("params.family", family_from_dict, params["family"])
    return RunConfig(op=op, submeasure=doc.get("submeasure"), set=doc.get("set"),
                     sets=tuple(doc["sets"]) if "sets" in doc else None,
                     sequence=doc.get("sequence"), params=params, format=fmt_)


# ---------------------------------------------------------------- dispatch

@dataclass
class Result:
    records: list[dict]
    rows: list[dict] | None = None
    code: int = EXIT_OK


def _need(cfg: RunConfig, key: str):
    val = getattr(cfg, key)
    if val is None:
        raise ConfigError(key, f"op {cfg.op!r} needs a {key!r} entry")
    return val


def _phi(cfg):
    return submeasure_from_dict(_need(cfg, "submeasure"))


def _set(cfg):
    return set_from_dict(_need(cfg, "set"))


def _sets(cfg):
    return [set_from_dict(s) for s in _need(cfg, "sets")]


def _finite(A: SetSpec, cfg):
    return as_finite(A, None if A.finite else cfg.horizon)


def _tails_rows(tm):
    return [{"cutoff": c, "value": fmt(v)} for c, v in tm.rows()]


def _verdict(v):
    out = {"status": v.status, "certified": v.certified}
    if v.value is not None:
        out["value"] = fmt(v.value)
    if v.epsilon is not None:
        out["epsilon"] = fmt(v.epsilon)
    if v.cutoff is not None:
        out["cutoff"] = v.cutoff
    if v.tail_certificate is not None:
        out["tail_certificate"] = fmt(v.tail_certificate)
    return out


def _vec_rows(h, indices):
    rows = []
    for n in indices:
        v = h(n)
        if not v.is_zero():
            rows.append({"n": n, "vector": v.to_dict(), "norm": fmt(v.norm())})
    return rows


def _tree_mass(d):
    kind = d["kind"]
    if kind == "explicit":
        return ExplicitTreeMass(d.get("weights", {}))
    w = mass_from_dict(d.get("weight", {"rule": "geometric", "ratio": "1/2"}))
    if kind == "level":
        return LevelMass(w)
    return SpineMass(w, d.get("bit", 0))


def op_eval(cfg, rng):
    phi = _phi(cfg)
    F = _finite(_set(cfg), cfg)
    return Result([{"value": fmt(phi(F)), "size": len(F)}])


def op_tails(cfg, rng):
    tm = tail_matrix(_phi(cfg), _set(cfg), cfg.params.get("cutoffs"), cfg.horizon,
                     cfg.params.get("budget"))
    rows = _tails_rows(tm)
    return Result([{"horizon": tm.horizon, "complete": tm.complete, "rows": rows}], rows,
                  EXIT_OK if tm.complete else EXIT_BUDGET)


def op_member(cfg, rng):
    p = cfg.params
    phi, A = _phi(cfg), _set(cfg)
    bar = p.get("bar", 10**6)
    if p.get("kind", "exh") == "fin":
        v = fin_verdict(phi, A, cfg.horizon, bar, p.get("budget"))
    else:
        v = exh_verdict(phi, A, p.get("epsilon", "1/100"), cfg.horizon, p.get("cutoffs"), bar,
                        p.get("budget"))
    rec = _verdict(v)
    rows = _tails_rows(v.evidence) if v.evidence is not None else None
    rec["evidence"] = rows
    return Result([rec], rows)


def op_metric(cfg, rng):
    sets = _sets(cfg)
    if len(sets) != 2:
        raise ConfigError("sets", "metric needs exactly two sets")
    A, B = (_finite(S, cfg) for S in sets)
    return Result([{"value": fmt(symmetric_difference_metric(_phi(cfg), A, B))}])


def op_series_sum(cfg, rng):
    h = sequence_from_dict(_need(cfg, "sequence"))
    v = partial_sum(h, _finite(_set(cfg), cfg))
    return Result([{"vector": v.to_dict(), "norm": fmt(v.norm()), "norm_tag": v.tag}])


def op_modulus(cfg, rng):
    h = sequence_from_dict(_need(cfg, "sequence"))
    win = cfg.params.get("window")
    if not (isinstance(win, list) and len(win) == 2):
        raise ConfigError("params.window", "modulus needs a window [N, M]")
    val = cauchy_modulus(h, _set(cfg), tuple(win), cfg.params.get("mode", "auto"))
    return Result([{"value": fmt(val), "window": win}])


def op_represent(cfg, rng):
    p, tgt = cfg.params, cfg.target
    if tgt == "ellinf":
        phi = _phi(cfg)
        h = _semantic("submeasure", ellinf_representation, phi)
        top = max(n for mu in phi.columns for n in mu.support) + 1
        rows = _vec_rows(h, range(p.get("count", top)))
        return Result([{"columns": len(phi.columns), "rows": rows}], rows)
    if tgt == "c0-normal":
        h = sequence_from_dict(_need(cfg, "sequence"))
        g = _semantic("sequence", c0_normal_form, h)
        rows = _vec_rows(g, range(p.get("count", 16)))
        return Result([{"rows": rows}], rows)
    if tgt == "gdensity":
        sm = _need(cfg, "submeasure")
        if sm.get("preset") != "sup-of-measures":
            raise ConfigError("submeasure.preset", "gdensity needs a sup-of-measures submeasure")
        cols = [measure_from_dict(m) for m in sm["measures"]]
        phi, part = bounded_columns_to_gdensity(cols)
        top = max((n for mu in cols for n in mu.support), default=0) + 1
        profile = column_finiteness_check(cols, top)
        rows = [{"measure": k, "support": list(mu.support),
                 "block": support_block(part, mu.support)} for k, mu in enumerate(cols)]
        ok = all(r["block"] is not None for r in rows)
        rec = {"cuts": list(part.cuts), "placed": ok, "rows": rows,
               "multiplicity": [[m, list(ks)] for m, ks in profile.multiplicity]}
        return Result([rec], rows, EXIT_OK if ok else EXIT_VIOLATION)
    h = sequence_from_dict(_need(cfg, "sequence"))
    universe = [_finite(S, cfg) for S in _sets(cfg)]
    psi = nonpathological_envelope(h, universe)
    tilde = induced_submeasure(h, "brute")
    rows, ok = [], True
    for F in universe:
        a, b = tilde(F), psi(F)
        good = a <= b <= 2 * a
        ok &= good
        rows.append({"F": list(F), "phi_tilde": fmt(a), "psi": fmt(b), "sandwich": good})
    return Result([{"rows": rows, "sandwich": ok}], rows, EXIT_OK if ok else EXIT_VIOLATION)


def op_rademacher(cfg, rng):
    p, tgt = cfg.params, cfg.target
    if tgt == "vectors":
        rows = [{"i": i, "r": [fmt(v) for v in rademacher_vector(i)]}
                for i in range(p.get("count", 10))]
        return Result([{"rows": rows}], rows)
    if tgt == "phi":
        d = {"preset": "rademacher", "mode": p.get("mode", "closed-form")}
        if "block_cap" in p:
            d["block_cap"] = p["block_cap"]
        phi = submeasure_from_dict(d)
        F = _finite(_set(cfg), cfg)
        return Result([{"value": fmt(phi(F)), "A_X": list(a_x_projection(F).items)}])
    out = sweeps.rademacher_suite(rng, tuples=p.get("tuples", 500))
    rows = [{"check": k, "passed": v["passed"], "checked": v["checked"]}
            for k, v in out.items() if k != "passed"]
    return Result([out], rows, EXIT_OK if out["passed"] else EXIT_VIOLATION)


def _family(cfg):
    p = cfg.params
    if cfg.sets is not None:
        return WitnessFamily(_sets(cfg), p.get("epsilon"), p.get("delta"), p.get("k"))
    mode = p.get("mode", "auto")
    return trace_null_witness_family(p.get("m"), p.get("T", 8), p.get("delta"),
                                     "auto" if mode not in ("explicit", "symbolic") else mode,
                                     p.get("epsilon", "1/2"), p.get("k"))


def op_witness(cfg, rng):
    p, tgt = cfg.params, cfg.target
    if tgt in ("summable-like", "trace-family"):
        fam = _family(cfg)
        phi = _phi(cfg) if cfg.submeasure is not None else trace_null_submeasure()
        if tgt == "trace-family":
            if cfg.sets is not None:
                raise ConfigError("sets", "trace-family builds its own sets")
            rows = union_table(fam, sizes=p.get("sizes"))
            ok = all(len({r["formula"], r["inclusion_exclusion"], r.get("leaf_mask",
                                                                         r["formula"])}) == 1
                     for r in rows)
            return Result([{"family": fam.to_dict(), "rows": rows, "agree": ok}], rows,
                          EXIT_OK if ok else EXIT_VIOLATION)
        rep = summable_like_check(phi, fam, p.get("epsilon"), p.get("delta"), p.get("k"),
                                  p.get("budget", 10**6))
        rec = {"family": fam.to_dict(), **rep.to_dict()}
        return Result([rec], rep.values or None, EXIT_OK if rep.passed else EXIT_VIOLATION)
    if tgt == "density-like":
        fam = _family(cfg)
        phi = _phi(cfg) if cfg.submeasure is not None else trace_null_submeasure()
        rep = density_like_search(phi, p.get("epsilon", "1/2"), fam, p.get("budget", 10**4))
        return Result([rep.to_dict()])
    if tgt == "covering":
        h = mass_from_dict(p["h"]) if "h" in p else None
        if h is None:
            raise ConfigError("params.h", "covering needs a mass rule h")
        rows_out = covering_sample_check(_phi(cfg), h, _sets(cfg), cfg.horizon,
                                         p.get("epsilon", "1/100"), p.get("bar", 10**6),
                                         p.get("cutoffs"), p.get("budget"))
        rows = [r.to_dict() for r in rows_out]
        refuted = any(r["refutes"] for r in rows)
        return Result([{"rows": rows, "refuted": refuted}],
                      [{k: v for k, v in r.items() if not k.endswith("tails")} for r in rows],
                      EXIT_VIOLATION if refuted else EXIT_OK)
    if tgt == "heavy-branch":
        if "tree_mass" not in p:
            raise ConfigError("params.tree_mass", "heavy-branch needs a tree mass")
        res = heavy_branch_search(_tree_mass(p["tree_mass"]), p.get("depth", 16),
                                  p.get("threshold", 1), p.get("node_budget", 1 << 18),
                                  p.get("max_pieces"))
        d = res.to_dict()
        rows = [{"n": n, "sum": s, "size": z, "trace_null_tail": t}
                for n, (s, z, t) in enumerate(zip(d["sums"], d["sizes"], d["trace_null_tails"]))]
        return Result([d], rows)
    for key in ("a", "b"):
        if key not in p:
            raise ConfigError(f"params.{key}", "bm needs mass rules a and b")
    res = bm_sets(mass_from_dict(p["a"]), mass_from_dict(p["b"]), p.get("m", 0),
                  cfg.horizon, p.get("cutoffs"))
    return Result([res.to_dict()])


def op_phi_family(cfg, rng):
    p = cfg.params
    if "f" not in p or "family" not in p:
        raise ConfigError("params", "phi-family needs params.f and params.family")
    phi = phi_family(mass_from_dict(p["f"]), family_from_dict(p["family"]))
    F = _finite(_set(cfg), cfg)
    return Result([{"value": fmt(phi(F))}])


def op_axioms(cfg, rng):
    p = cfg.params
    win = p.get("window", 12)
    window = range(win) if isinstance(win, int) else win
    out = sweeps.axiom_sweep(_phi(cfg), rng, window, p.get("pairs", 1000),
                             p.get("below", 1 << 10), p.get("max_size", 24))
    return Result([out], None, EXIT_OK if out["passed"] else EXIT_VIOLATION)


def op_tallness(cfg, rng):
    rep = tallness_diagnostic(_phi(cfg), cfg.horizon)
    rec = {"consistent_with_tall": rep.consistent_with_tall,
           "reached": {fmt(e): r for e, r in zip(rep.epsilons, rep.reached)},
           "tail_max": [fmt(v) for v in rep.tail_max[:32]],
           "singletons": [fmt(v) for v in rep.singletons[:32]]}
    return Result([rec])


def op_sweep(cfg, rng):
    p, tgt = cfg.params, cfg.target
    if tgt == "ellinf-identity":
        out = sweeps.ellinf_identity_sweep(rng, p.get("count", 50), samples=p.get("samples", 1000))
    elif tgt == "absval":
        out = sweeps.absval_sweep(rng, p.get("count", 1000), tag=p.get("norm", "sup"))
    elif tgt == "envelope":
        out = sweeps.envelope_sweep(rng, p.get("count", 200), p.get("universe_size", 6),
                                    tag=p.get("norm", "sup"))
    elif tgt == "bounded-columns":
        out = sweeps.bounded_columns_sweep(rng, p.get("count", 100),
                                           p.get("sets_per_instance", 1000))
    else:
        out = sweeps.phi_family_sweep(rng, p.get("samples", 500))
    return Result([out], None, EXIT_OK if out["passed"] else EXIT_VIOLATION)


def reproduction_suite(seed: int = 0) -> list[dict]:
    """Configs covering every acceptance property, in a fixed order."""
    ps = {"seed": seed}
    suite = [{"op": "axioms", "submeasure": {"preset": name},
              "params": {**ps, "window": 12, "pairs": 1000, "below": 1024}}
             for name in NAMED_PRESETS]
    suite += [
        {"op": "witness", "params": {**ps, "target": "trace-family", "m": 3, "T": 8}},
        {"op": "witness", "params": {**ps, "target": "summable-like", "m": 3, "T": 8,
                                     "epsilon": "1/2", "k": 8}},
        {"op": "sweep", "params": {**ps, "target": "ellinf-identity", "count": 50}},
        {"op": "sweep", "params": {**ps, "target": "absval", "count": 1000}},
        {"op": "sweep", "params": {**ps, "target": "envelope", "count": 200}},
        {"op": "rademacher", "params": {**ps, "target": "checks"}},
        {"op": "sweep", "params": {**ps, "target": "phi-family"}},
        {"op": "sweep", "params": {**ps, "target": "bounded-columns", "count": 100}},
    ]
    return suite


def op_reproduce(cfg, rng):
    records, rows, code = [], [], EXIT_OK
    for doc in reproduction_suite(cfg.seed):
        sub = parse_config(doc)
        res = dispatch(sub)
        for r in res.records:
            records.append(r)
        passed = res.code == EXIT_OK
        rows.append({"op": sub.op, "target": sub.target or sub.submeasure.get("preset"),
                     "passed": passed})
        code = max(code, res.code)
    return Result(records, rows, code)


HANDLERS = {
    "eval": op_eval, "tails": op_tails, "member": op_member, "metric": op_metric,
    "series-sum": op_series_sum, "modulus": op_modulus, "represent": op_represent,
    "rademacher": op_rademacher, "witness": op_witness, "phi-family": op_phi_family,
    "axioms": op_axioms, "tallness": op_tallness, "sweep": op_sweep, "reproduce": op_reproduce,
}


def dispatch(cfg: RunConfig) -> Result:
    """Run one operation; every record carries the op, seed and echoed inputs."""
    rng = random.Random(cfg.seed)
    res = HANDLERS[cfg.op](cfg, rng)
    if cfg.op != "reproduce":
        for r in res.records:
            r.setdefault("status", "ok" if res.code == EXIT_OK else "violation"
                         if res.code == EXIT_VIOLATION else "budget-exceeded")
            r["op"] = cfg.op if cfg.target is None else f"{cfg.op}.{cfg.target}"
            r["seed"] = cfg.seed
            r["inputs"] = cfg.to_dict()
    return res


# ---------------------------------------------------------------- emit

def _cell(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    if v is None:
        return ""
    return str(v)


def _scalar_row(rec):
    return {k: v for k, v in rec.items() if k != "inputs" and not isinstance(v, (dict, list))}


def _approx(v):
    if isinstance(v, str) and "/" in v:
        try:
            x = Fraction(v)
        except ValueError:
            return v
        return f"{v} (~{float(x):.6g})"
    return _cell(v)


def emit(result: Result, format: str = "json", timing: float | None = None) -> str:
    if format == "json":
        lines = []
        for r in result.records:
            if timing is not None:
                r = {**r, "elapsed": f"{timing:.3f}s"}
            lines.append(json.dumps(r, sort_keys=True))
        return "\n".join(lines) + "\n"
    rows = result.rows if result.rows else [_scalar_row(r) for r in result.records]
    header: list[str] = []
    for row in rows:
        for k in row:
            if k not in header:
                header.append(k)
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(row.get(k)) for k in header])
        return buf.getvalue()
    # table: decimals shown next to exact values, marked with "~"
    cells = [[_approx(row.get(k)) for k in header] for row in rows]
    widths = [max([len(h)] + [len(c[i]) for c in cells]) for i, h in enumerate(header)]
    out = ["  ".join(h.ljust(w) for h, w in zip(header, widths)),
           "  ".join("-" * w for w in widths)]
    out += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    if timing is not None:
        out.append(f"elapsed {timing:.3f}s")
    return "\n".join(line.rstrip() for line in out) + "\n"


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pideals", description=__doc__.splitlines()[0])
    ap.add_argument("op", nargs="?", choices=OPS, help="operation (overrides the config)")
    ap.add_argument("target", nargs="?", help="sub-target for represent/rademacher/witness/sweep")
    ap.add_argument("--config", help="path to a JSON config ('-' for stdin)")
    ap.add_argument("--format", choices=FORMATS)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--horizon", type=int)
    ap.add_argument("--budget", type=int)
    ap.add_argument("--timing", action="store_true",
                    help="add elapsed wall time (breaks byte-identical output)")
    ap.add_argument("--print-schema", action="store_true", help="print the config schema")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.print_schema:
        sys.stdout.write(json.dumps(CONFIG_SCHEMA, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    try:
        if args.config == "-":
            text = sys.stdin.read()
        elif args.config:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        elif args.op:
            text = json.dumps({"op": args.op})
        else:
            raise ConfigError("", "give an op or --config")
        cfg = parse_config(text, {"op": args.op, "target": args.target, "seed": args.seed,
                                  "horizon": args.horizon, "budget": args.budget,
                                  "format": args.format})
        start = time.perf_counter()
        res = dispatch(cfg)
        elapsed = time.perf_counter() - start if args.timing else None
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SpecError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(emit(res, cfg.format, elapsed))
    return res.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
