"""Command-line interface.

Commands operate on a problem-definition file (see orbitred.problem):

    orbitred pmatrix PROBLEM
    orbitred stability-order PROBLEM
    orbitred general-potential PROBLEM [--truncate N]
    orbitred check-term PROBLEM --term EXPR [--order-targets ...] [--order-generators ...]
    orbitred reduce PROBLEM [--mode ...] [--truncate N] [--out REPORT.json]
    orbitred verify PROBLEM --report REPORT.json --set name=value [...]

Exit status: 0 on success, 1 on domain errors (a potential that cannot be
expressed, no usable source component, violated resonance conditions),
2 on usage or parse errors.  The ORBITRED_SEED environment variable
overrides the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .elimination import NoUsableSourceError, build_transfer, criterion_check, source_component
from .invariants import NotExpressibleError, p_matrix
from .numeric import NumericContext, verify_reduction
from .orbit import OrbitPoly, general_potential, stability_order
from .parser import ParseError, parse_poly
from .pipeline import reduce_potential
from .problem import BuiltProblem, ProblemError, build_problem, parse_problem
from .report import render_report_json, render_report_text, report_from_dict
from .ratfun import RatFun


def _default_seed() -> int:
    env = os.environ.get("ORBITRED_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ProblemError("options", f"ORBITRED_SEED must be an integer, got {env!r}")


def _load(path: str) -> BuiltProblem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemError("file", str(exc))
    return build_problem(parse_problem(text))


def _parse_monomial_list(text: str, basis):
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        p = parse_poly(chunk, basis.names)
        if len(p) != 1 or p.leading()[1] != 1:
            raise ProblemError("options", f"not a monic monomial: {chunk!r}")
        out.append(p.leading()[0])
    return out


def cmd_pmatrix(args) -> int:
    built = _load(args.problem)
    pm = p_matrix(built.basis)
    for i in range(built.basis.r):
        row = ", ".join(str(pm[i, h]) for h in range(built.basis.r))
        print(f"[{row}]")
    return 0


def cmd_stability_order(args) -> int:
    built = _load(args.problem)
    print(stability_order(built.basis))
    return 0


def cmd_general_potential(args) -> int:
    built = _load(args.problem)
    n = args.truncate if args.truncate is not None else built.truncation
    potential, names, _ = general_potential(built.basis, n)
    print(f"truncation order: {n}")
    print(f"parameters ({len(names)}): {', '.join(names)}")
    print(f"potential: {potential}")
    return 0


def cmd_check_term(args) -> int:
    built = _load(args.problem)
    basis, params = built.basis, built.params
    try:
        term_poly = parse_poly(args.term, basis.names)
    except ParseError as exc:
        raise ProblemError("term", str(exc))
    if len(term_poly) != 1:
        raise ProblemError("term", f"expected a single monomial, got {args.term!r}")
    exps, _ = term_poly.leading()
    term = OrbitPoly.monomial(basis, params, exps, built.potential.coeff(exps))
    if term.is_zero():
        term = OrbitPoly.monomial(basis, params, exps, RatFun.const(params.names, 1))
    pm = p_matrix(basis)
    mode = args.mode or built.problem.options.mode
    result = criterion_check(term, built.potential, pm, mode, params)
    print(f"term: {term_poly.monomial_str(exps)}")
    print(f"mode: {mode}")
    if args.order_targets or args.order_generators:
        source = source_component(built.potential, mode, params)
        w_target = basis.weighted_degree(exps)
        targets = (
            _parse_monomial_list(args.order_targets, basis) if args.order_targets else None
        )
        gens = (
            _parse_monomial_list(args.order_generators, basis)
            if args.order_generators
            else None
        )
        t = build_transfer(source, w_target, pm, targets, gens)
        print("transfer matrix (rows: targets, columns: generator monomials):")
        gen_names = [term_poly.monomial_str(e) for e in t.generator_monomials]
        print(f"  columns: {', '.join(gen_names)}")
        for i, texps in enumerate(t.target_monomials):
            row = ", ".join(str(e) for e in t.entries[i])
            print(f"  {term_poly.monomial_str(texps)}: [{row}]")
    if result.eliminable:
        print("eliminable: yes")
        for gexps, coeff in result.generator.h.sorted_terms():
            print(f"  H[{term_poly.monomial_str(gexps)}] = {coeff}")
        for cond in result.conditions:
            print(f"  requires {cond}")
    else:
        print("eliminable: no")
        print(f"  reason: {result.reason}")
    return 0


def cmd_reduce(args) -> int:
    built = _load(args.problem)
    mode = args.mode or built.problem.options.mode
    n = args.truncate if args.truncate is not None else built.truncation
    max_sets = args.max_sets if args.max_sets is not None else built.problem.options.max_sets
    seed = args.seed if args.seed is not None else (
        built.problem.options.seed or _default_seed()
    )
    report = reduce_potential(
        built.potential,
        built.basis,
        built.params,
        mode=mode,
        strategy=built.strategy,
        n=n,
        max_sets=max_sets,
    )
    if args.out:
        payload = render_report_json(report, built.problem.digest, seed)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    sys.stdout.write(render_report_text(report))
    if args.out:
        print(f"wrote machine-readable report to {args.out}")
    return 0


def cmd_verify(args) -> int:
    built = _load(args.problem)
    try:
        with open(args.report, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ProblemError("report", str(exc))
    except json.JSONDecodeError as exc:
        raise ProblemError("report", f"invalid JSON: {exc}")
    if data.get("input_digest") != built.problem.digest:
        raise ValueError(
            "verify: report input_digest does not match the given problem file"
        )
    report = report_from_dict(data, built.basis, built.params)
    values: dict[str, Fraction] = {}
    for item in args.set or []:
        if "=" not in item:
            raise ProblemError("set", f"expected name=value, got {item!r}")
        name, _, value = item.partition("=")
        name = name.strip()
        if name not in built.params.names:
            raise ProblemError("set", f"unknown parameter {name!r}")
        try:
            values[name] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ProblemError("set", f"bad numeric value for {name}: {value!r}")
    seed = args.seed if args.seed is not None else int(data.get("seed", 0)) or _default_seed()
    scales = None
    if args.scales:
        scales = [float(s) for s in args.scales.split(",") if s.strip()]
    ctx = NumericContext(values, built.basis)
    result = verify_reduction(
        built.potential,
        report,
        ctx,
        samples=args.samples,
        scales=scales,
        seed=seed,
    )
    print(result)
    return 0 if result.passed else 1


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitred",
        description="Reduce invariant polynomial potentials in orbit-space coordinates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pmatrix", help="print the Gram matrix of invariant gradients")
    p.add_argument("problem")
    p.set_defaults(func=cmd_pmatrix)

    p = sub.add_parser("stability-order", help="print the truncation order 2*d_r")
    p.add_argument("problem")
    p.set_defaults(func=cmd_stability_order)

    p = sub.add_parser("general-potential", help="most general invariant potential")
    p.add_argument("problem")
    p.add_argument("--truncate", type=int, default=None)
    p.set_defaults(func=cmd_general_potential)

    p = sub.add_parser("check-term", help="decide eliminability of a single term")
    p.add_argument("problem")
    p.add_argument("--term", required=True, help="J-monomial, e.g. 'J1^3'")
    p.add_argument("--mode", choices=("fixed", "varying"), default=None)
    p.add_argument("--order-targets", default=None, help="comma-separated target monomials")
    p.add_argument("--order-generators", default=None, help="comma-separated generator monomials")
    p.set_defaults(func=cmd_check_term)

    p = sub.add_parser("reduce", help="run the staged reduction")
    p.add_argument("problem")
    p.add_argument("--mode", choices=("fixed", "varying"), default=None)
    p.add_argument("--truncate", type=int, default=None)
    p.add_argument("--max-sets", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="write the machine-readable report here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="numerically verify a reduction report")
    p.add_argument("problem")
    p.add_argument("--report", required=True)
    p.add_argument("--set", action="append", metavar="NAME=VALUE")
    p.add_argument("--samples", type=int, default=6)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--scales", default=None, help="comma-separated scales")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ProblemError, ParseError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (NotExpressibleError, NoUsableSourceError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        # downstream consumer (e.g. head) closed the stream; not an error
        try:
            sys.stdout.close()
        except OSError:
            pass
        return 0


if __name__ == "__main__":
    sys.exit(main())
