"""Machine-readable reduction reports (JSON) and their reconstruction.

Polynomials are serialized as canonical-form strings under the fixed
monomial order; rational-function coefficients as separate numerator and
denominator strings, so everything can be re-parsed exactly.  Identical
input, flags and seed produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Mapping

from . import __version__
from .elimination import EliminationPlan, ResonanceCondition
from .invariants import InvariantBasis
from .orbit import Generator, OrbitPoly, ParameterSpec
from .parser import parse_poly
from .pipeline import ReductionReport, Stage, Strategy
from .poly import Poly
from .ratfun import RatFun

REPORT_FORMAT_VERSION = 1


def _monomial_str(basis: InvariantBasis, exps) -> str:
    return Poly.monomial(basis.names, exps).monomial_str(tuple(exps))


def _monomial_from_str(basis: InvariantBasis, text: str):
    p = parse_poly(text, basis.names)
    if len(p) != 1 or p.leading()[1] != 1:
        raise ValueError(f"not a monic monomial: {text!r}")
    return p.leading()[0]


def _ratfun_to_obj(r: RatFun) -> dict:
    return {"num": str(r.num), "den": str(r.den)}


def _ratfun_from_obj(obj: Mapping[str, str], names) -> RatFun:
    return RatFun(parse_poly(obj["num"], names), parse_poly(obj["den"], names))


def _orbit_to_obj(f: OrbitPoly) -> list[dict]:
    basis = f.basis
    return [
        {"monomial": _monomial_str(basis, exps), **_ratfun_to_obj(coeff)}
        for exps, coeff in f.sorted_terms()
    ]


def _orbit_from_obj(items, basis: InvariantBasis, params: ParameterSpec) -> OrbitPoly:
    terms = {}
    for item in items:
        exps = _monomial_from_str(basis, item["monomial"])
        terms[exps] = _ratfun_from_obj(item, params.names)
    return OrbitPoly(basis, params, terms)


def report_to_dict(report: ReductionReport, input_digest: str, seed: int) -> dict:
    basis = report.basis
    stages = []
    for stage in report.stages:
        if stage.plan is None:
            stages.append(
                {
                    "target_degree": stage.target_degree,
                    "skipped": stage.skipped,
                }
            )
            continue
        stages.append(
            {
                "target_degree": stage.target_degree,
                "generator": {
                    _monomial_str(basis, exps): _ratfun_to_obj(coeff)
                    for exps, coeff in stage.generator.h.sorted_terms()
                },
                "zeroed": [_monomial_str(basis, e) for e in stage.plan.zeroed_targets],
                "conditions": [str(c.poly) for c in stage.plan.conditions],
            }
        )
    return {
        "format_version": REPORT_FORMAT_VERSION,
        "tool": f"orbitred {__version__}",
        "input_digest": input_digest,
        "seed": seed,
        "mode": report.mode,
        "truncation": report.truncation_order,
        "strategy": {
            "kind": report.strategy.kind,
            "keep": [_monomial_str(basis, e) for e in report.strategy.keep],
        },
        "parameters": {
            "names": list(report.params.names),
            "critical": sorted(report.params.critical),
        },
        "stages": stages,
        "conditions": [str(c.poly) for c in report.conditions],
        "original_potential": _orbit_to_obj(report.original),
        "reduced_potential": _orbit_to_obj(report.reduced),
        "reduced_display": str(report.reduced),
    }


def render_report_json(report: ReductionReport, input_digest: str, seed: int) -> str:
    return json.dumps(
        report_to_dict(report, input_digest, seed), sort_keys=True, indent=2
    ) + "\n"


def report_from_dict(
    data: Mapping, basis: InvariantBasis, params: ParameterSpec
) -> ReductionReport:
    """Rebuild a ReductionReport from its serialized form."""
    if data.get("format_version") != REPORT_FORMAT_VERSION:
        raise ValueError(f"unsupported report format_version {data.get('format_version')!r}")
    stored_names = tuple(data["parameters"]["names"])
    if stored_names != params.names:
        raise ValueError("report parameters do not match the problem definition")
    stages = []
    for item in data["stages"]:
        if "generator" not in item:
            stages.append(Stage(item["target_degree"], None, None, item.get("skipped")))
            continue
        gen_terms = {
            _monomial_from_str(basis, mono): _ratfun_from_obj(obj, params.names)
            for mono, obj in item["generator"].items()
        }
        generator = Generator(OrbitPoly(basis, params, gen_terms))
        plan = EliminationPlan(
            zeroed_targets=[_monomial_from_str(basis, m) for m in item["zeroed"]],
            generator_solution=dict(gen_terms),
            conditions=[
                ResonanceCondition(parse_poly(c, params.names)) for c in item["conditions"]
            ],
        )
        stages.append(Stage(item["target_degree"], generator, plan))
    keep = tuple(_monomial_from_str(basis, m) for m in data["strategy"]["keep"])
    if data["strategy"]["kind"] == "keep_set":
        strategy = Strategy(kind="keep_set", keep=keep)
    else:
        strategy = Strategy()
    return ReductionReport(
        original=_orbit_from_obj(data["original_potential"], basis, params),
        reduced=_orbit_from_obj(data["reduced_potential"], basis, params),
        stages=stages,
        conditions=[
            ResonanceCondition(parse_poly(c, params.names)) for c in data["conditions"]
        ],
        mode=data["mode"],
        truncation_order=data["truncation"],
        strategy=strategy,
        params=params,
        basis=basis,
    )


def render_report_text(report: ReductionReport) -> str:
    """Human-readable summary of a reduction run."""
    basis = report.basis
    lines = [
        f"mode: {report.mode}",
        f"truncation order: {report.truncation_order}",
        f"parameters: {', '.join(report.params.names)}",
        f"critical: {', '.join(sorted(report.params.critical)) or '(none)'}",
        "",
    ]
    for stage in report.stages:
        if stage.plan is None:
            lines.append(f"degree {stage.target_degree}: skipped ({stage.skipped})")
            continue
        zeroed = ", ".join(_monomial_str(basis, e) for e in stage.plan.zeroed_targets)
        lines.append(f"degree {stage.target_degree}: zeroed {zeroed}")
        for exps, coeff in stage.generator.h.sorted_terms():
            lines.append(f"    H[{_monomial_str(basis, exps)}] = {coeff}")
        for cond in stage.plan.conditions:
            lines.append(f"    requires {cond}")
    lines.append("")
    lines.append("conditions (all stages):")
    for cond in report.conditions:
        lines.append(f"    {cond}")
    if not report.conditions:
        lines.append("    (none)")
    lines.append("")
    lines.append(f"reduced potential: {report.reduced}")
    lines.append("")
    return "\n".join(lines)
