"""Problem-definition files: a sectioned key-value text format.

A problem file declares the coordinates, the invariants with their
relations, the potential's parameters, the potential itself, and run
options::

    format_version = 1

    [space]
    vars = x, y

    [group]
    generator = -1 0 ; 0 1
    generator = 1 0 ; 0 -1

    [invariants]
    J1 = "x^2"
    J2 = "y^2"
    syzygy = "J1*J2 -> J3^2"        # only for dependent invariants

    [parameters]
    critical = a1
    generic = a2, b1, b2, c

    [potential]
    expr = "a1*J1 + a2*J2 + b1*J1^2 + b2*J2^2 + c*J1*J2"

    [options]
    mode = varying
    truncate = 4
    strategy = max_eliminate
    max_sets = 128
    seed = 42

``expr = general`` requests the most general invariant potential up to the
truncation order; parameter names are then generated (c{degree}_{index})
and the critical list must use those names.  Diagnostics carry the section
name and the line number.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .invariants import InvariantBasis, SyzygyRule
from .orbit import OrbitPoly, ParameterSpec, general_potential, stability_order
from .parser import ParseError, parse_orbit, parse_poly
from .pipeline import Strategy


class ProblemError(ValueError):
    def __init__(self, section: str, message: str, line: int | None = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{section}: {message}{where}")
        self.section = section
        self.line = line


@dataclass
class ProblemOptions:
    mode: str = "varying"
    truncate: int | None = None
    strategy: str = "max_eliminate"
    keep: tuple[str, ...] = ()
    max_sets: int = 4096
    seed: int = 0


@dataclass
class ProblemFile:
    format_version: int
    x_vars: tuple[str, ...]
    group: tuple[tuple[tuple[Fraction, ...], ...], ...] | None
    invariants: tuple[tuple[str, str], ...]  # (name, expression text)
    syzygies: tuple[str, ...]  # "lhs -> rhs" texts
    critical: tuple[str, ...]
    generic: tuple[str, ...]
    potential: str  # expression text, or "general"
    options: ProblemOptions = field(default_factory=ProblemOptions)
    source_text: str = field(default="", compare=False)
    # file line numbers for expression fields, diagnostics only
    lines: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.source_text.encode()).hexdigest()


_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


def _split_names(value: str, section: str, line: int) -> list[str]:
    if not value.strip():
        return []
    names = [v.strip() for v in value.split(",")]
    for n in names:
        if not _NAME_RE.match(n):
            raise ProblemError(section, f"invalid name {n!r}", line)
    return names


def _unquote(value: str, section: str, line: int) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == '"' and value[-1] == '"':
        return value[1:-1]
    return value


def parse_problem(text: str) -> ProblemFile:
    """Parse and validate a problem definition; raises ProblemError."""
    section = "header"
    fields: dict[str, list[tuple[str, str, int]]] = {}
    format_version = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip()
            if section not in ("space", "group", "invariants", "parameters", "potential", "options"):
                raise ProblemError(section or "header", "unknown section", lineno)
            fields.setdefault(section, [])
            continue
        if "=" not in stripped:
            raise ProblemError(section, f"expected key = value, got {stripped!r}", lineno)
        key, value = stripped.split("=", 1)
        key = key.strip()
        value = value.strip()
        if section == "header":
            if key != "format_version":
                raise ProblemError("header", f"unexpected key {key!r} before any section", lineno)
            try:
                format_version = int(value)
            except ValueError:
                raise ProblemError("header", "format_version must be an integer", lineno)
            continue
        fields.setdefault(section, []).append((key, value, lineno))

    if format_version is None:
        format_version = 1

    def section_items(name: str) -> list[tuple[str, str, int]]:
        return fields.get(name, [])

    def single(name: str, key: str, default=None, required=False):
        hits = [(v, ln) for k, v, ln in section_items(name) if k == key]
        if not hits:
            if required:
                raise ProblemError(name, f"missing required key {key!r}")
            return default, None
        if len(hits) > 1:
            raise ProblemError(name, f"duplicate key {key!r}", hits[1][1])
        return hits[0]

    # [space]
    if "space" not in fields:
        raise ProblemError("space", "missing section")
    vars_value, vars_line = single("space", "vars", required=True)
    x_vars = tuple(_split_names(vars_value, "space", vars_line or 0))
    if not x_vars:
        raise ProblemError("space", "vars must list at least one name", vars_line)
    if len(set(x_vars)) != len(x_vars):
        raise ProblemError("space", "duplicate variable names", vars_line)

    # [group]
    group = None
    gen_rows = [(v, ln) for k, v, ln in section_items("group") if k == "generator"]
    extras = [k for k, _, _ in section_items("group") if k != "generator"]
    if extras:
        raise ProblemError("group", f"unknown key {extras[0]!r}")
    if gen_rows:
        mats = []
        n = len(x_vars)
        for value, ln in gen_rows:
            rows = [r.strip() for r in value.split(";")]
            if len(rows) != n:
                raise ProblemError("group", f"generator needs {n} rows", ln)
            mat = []
            for r in rows:
                entries = r.split()
                if len(entries) != n:
                    raise ProblemError("group", f"generator rows need {n} entries", ln)
                try:
                    mat.append(tuple(Fraction(e) for e in entries))
                except ValueError:
                    raise ProblemError("group", f"bad matrix entry in {r!r}", ln)
            mats.append(tuple(mat))
        group = tuple(mats)

    # [invariants]
    if "invariants" not in fields:
        raise ProblemError("invariants", "missing section")
    invariants: list[tuple[str, str]] = []
    syzygies: list[str] = []
    lines: dict = {}
    for key, value, ln in section_items("invariants"):
        if key == "syzygy":
            lines[("syzygy", len(syzygies))] = ln
            syzygies.append(_unquote(value, "invariants", ln))
            continue
        if not _NAME_RE.match(key):
            raise ProblemError("invariants", f"invalid invariant name {key!r}", ln)
        lines[("invariant", key)] = ln
        invariants.append((key, _unquote(value, "invariants", ln)))
    if not invariants:
        raise ProblemError("invariants", "no invariants declared")

    # [parameters]
    critical: list[str] = []
    generic: list[str] = []
    if "parameters" in fields:
        crit_value, crit_line = single("parameters", "critical", default="")
        gen_value, gen_line = single("parameters", "generic", default="")
        critical = _split_names(crit_value or "", "parameters", crit_line or 0)
        generic = _split_names(gen_value or "", "parameters", gen_line or 0)

    # [potential]
    if "potential" not in fields:
        raise ProblemError("potential", "missing section")
    pot_value, pot_line = single("potential", "expr", required=True)
    potential = _unquote(pot_value, "potential", pot_line or 0)
    lines[("potential",)] = pot_line

    # [options]
    options = ProblemOptions()
    for key, value, ln in section_items("options"):
        if key == "mode":
            if value not in ("fixed", "varying"):
                raise ProblemError("options", f"mode must be fixed or varying, got {value!r}", ln)
            options.mode = value
        elif key == "truncate":
            try:
                options.truncate = int(value)
            except ValueError:
                raise ProblemError("options", "truncate must be an integer", ln)
        elif key == "strategy":
            if value not in ("max_eliminate", "keep_set"):
                raise ProblemError("options", f"unknown strategy {value!r}", ln)
            options.strategy = value
        elif key == "keep":
            options.keep = tuple(
                _unquote(v.strip(), "options", ln) for v in value.split(",") if v.strip()
            )
        elif key == "max_sets":
            try:
                options.max_sets = int(value)
            except ValueError:
                raise ProblemError("options", "max_sets must be an integer", ln)
        elif key == "seed":
            try:
                options.seed = int(value)
            except ValueError:
                raise ProblemError("options", "seed must be an integer", ln)
        else:
            raise ProblemError("options", f"unknown key {key!r}", ln)

    pf = ProblemFile(
        format_version=format_version,
        x_vars=x_vars,
        group=group,
        invariants=tuple(invariants),
        syzygies=tuple(syzygies),
        critical=tuple(critical),
        generic=tuple(generic),
        potential=potential,
        options=options,
        source_text=text,
        lines=lines,
    )
    build_problem(pf)  # full validation happens here
    return pf


@dataclass
class BuiltProblem:
    basis: InvariantBasis
    params: ParameterSpec
    potential: OrbitPoly
    strategy: Strategy
    truncation: int
    problem: ProblemFile


def build_problem(pf: ProblemFile) -> BuiltProblem:
    """Materialize basis, parameters and potential; raises ProblemError."""
    inv_polys = []
    for name, expr in pf.invariants:
        try:
            inv_polys.append((name, parse_poly(expr, pf.x_vars)))
        except ParseError as exc:
            raise ProblemError(
                "invariants", f"in {name}: {exc}", pf.lines.get(("invariant", name))
            ) from exc
    for name, p in inv_polys:
        if p.is_zero() or not p.is_homogeneous():
            raise ProblemError("invariants", f"{name} must be homogeneous and nonzero")
    inv_polys.sort(key=lambda np: np[1].total_degree())
    j_names = tuple(name for name, _ in inv_polys)
    if set(j_names) & set(pf.x_vars):
        raise ProblemError("invariants", "invariant names must differ from variables")

    # soundness is reported before orientation so corrupted relations give
    # the more informative diagnostic
    rules = []
    name_to_poly = {name: p for name, p in inv_polys}
    for text in pf.syzygies:
        if "->" not in text:
            raise ProblemError("invariants", f"syzygy must be 'lhs -> rhs', got {text!r}")
        lhs_text, rhs_text = (part.strip() for part in text.split("->", 1))
        try:
            lhs = parse_poly(lhs_text, j_names)
            rhs = parse_poly(rhs_text, j_names)
        except ParseError as exc:
            raise ProblemError("invariants", f"syzygy: {exc}") from exc
        if len(lhs) != 1 or lhs.leading()[1] != 1:
            raise ProblemError("invariants", f"syzygy lhs must be a single monic monomial: {lhs_text!r}")
        expand_map = {name: name_to_poly[name] for name in j_names}
        if not (lhs.substitute(expand_map) - rhs.substitute(expand_map)).is_zero():
            raise ProblemError("invariants", f"unsound syzygy {text!r}: x-expansion of lhs - rhs is nonzero")
        try:
            rules.append(SyzygyRule(lhs.leading()[0], rhs))
        except ValueError as exc:
            raise ProblemError("invariants", str(exc)) from exc

    try:
        basis = InvariantBasis(pf.x_vars, inv_polys, syzygies=rules, group_generators=pf.group)
    except ValueError as exc:
        raise ProblemError("invariants", str(exc)) from exc

    truncation = pf.options.truncate
    if truncation is None:
        truncation = stability_order(basis)

    all_declared = pf.critical + pf.generic
    if len(set(all_declared)) != len(all_declared):
        raise ProblemError("parameters", "parameter declared twice")
    clash = set(all_declared) & (set(pf.x_vars) | set(j_names))
    if clash:
        raise ProblemError("parameters", f"names clash with other sections: {sorted(clash)}")

    if pf.potential.strip() == "general":
        potential, names, params = general_potential(basis, truncation, pf.critical)
        unknown = set(pf.critical) - set(names)
        if unknown:
            raise ProblemError(
                "parameters", f"critical names not generated by 'general': {sorted(unknown)}"
            )
    else:
        params = ParameterSpec.make(all_declared, pf.critical)
        try:
            potential = parse_orbit(pf.potential, basis, params)
        except ParseError as exc:
            raise ProblemError("potential", str(exc), pf.lines.get(("potential",))) from exc

    keep: list = []
    for text in pf.options.keep:
        try:
            kp = parse_poly(text, basis.names)
        except ParseError as exc:
            raise ProblemError("options", f"keep: {exc}") from exc
        if len(kp) != 1 or kp.leading()[1] != 1:
            raise ProblemError("options", f"keep entries must be monic monomials: {text!r}")
        keep.append(kp.leading()[0])
    if pf.options.strategy == "keep_set":
        strategy = Strategy(kind="keep_set", keep=tuple(keep))
    else:
        if keep:
            raise ProblemError("options", "keep requires strategy = keep_set")
        strategy = Strategy()

    return BuiltProblem(
        basis=basis,
        params=params,
        potential=potential,
        strategy=strategy,
        truncation=truncation,
        problem=pf,
    )


def format_problem(pf: ProblemFile) -> str:
    """Canonical text form; parsing it back gives an equal structure."""
    lines = [f"format_version = {pf.format_version}", ""]
    lines += ["[space]", f"vars = {', '.join(pf.x_vars)}", ""]
    if pf.group is not None:
        lines.append("[group]")
        for mat in pf.group:
            rows = " ; ".join(" ".join(str(v) for v in row) for row in mat)
            lines.append(f"generator = {rows}")
        lines.append("")
    lines.append("[invariants]")
    for name, expr in pf.invariants:
        lines.append(f'{name} = "{expr}"')
    for syz in pf.syzygies:
        lines.append(f'syzygy = "{syz}"')
    lines.append("")
    lines.append("[parameters]")
    lines.append(f"critical = {', '.join(pf.critical)}")
    lines.append(f"generic = {', '.join(pf.generic)}")
    lines.append("")
    lines += ["[potential]", f'expr = "{pf.potential}"', ""]
    o = pf.options
    lines.append("[options]")
    lines.append(f"mode = {o.mode}")
    if o.truncate is not None:
        lines.append(f"truncate = {o.truncate}")
    lines.append(f"strategy = {o.strategy}")
    if o.keep:
        lines.append("keep = " + ", ".join(f'"{k}"' for k in o.keep))
    lines.append(f"max_sets = {o.max_sets}")
    lines.append(f"seed = {o.seed}")
    lines.append("")
    return "\n".join(lines)
