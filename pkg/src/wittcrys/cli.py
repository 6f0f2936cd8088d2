"""Command-line surface: reproducible reports over the library operations.

Subcommands: newton, solve-as, valuations, example43, embed, connection,
lubin-tate.  Output is TSV (default) or JSON via --format; `embed` defaults
to JSON since its payload is structured, and `connection` always writes a
system file in the exact format `solve-as` consumes, enabling pipelines.

Exit codes: 0 success, 1 domain errors (error class name on stderr),
2 usage errors (bad flags or malformed files).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import io as wio
from .artin_schreier import boundary_test, geometric_count, solve_over
from .crystal import newton_polygon, standard_module
from .embedding import build_embedding, verify_embedding
from .connection import compile_system, reduce_by_lie_constraints
from .errors import UsageError, WittcrysError
from .fields import make_field
from .valuations import (example_43_report, lubin_tate_w, sum_identity_check,
                         valuation_profile)

__version__ = "0.1.0"


@dataclass
class ReportBundle:
    """Deterministic output of one command invocation."""

    command: str
    input_digest: str
    tables: List[Tuple[str, List[str], List[List[str]]]] = dc_field(default_factory=list)
    diagnostics: Dict[str, str] = dc_field(default_factory=dict)
    exit_status: int = 0
    # pre-rendered payload for commands whose primary output is a file format
    # of its own (embed: plan JSON; connection: a system file)
    raw_payload: Optional[bytes] = None

    def to_tsv(self) -> bytes:
        blocks = []
        multi = len(self.tables) > 1
        for name, header, rows in self.tables:
            lines = []
            if multi:
                lines.append(f"# {name}")
            lines.append("\t".join(header))
            for row in rows:
                lines.append("\t".join(row))
            blocks.append("\n".join(lines))
        out = "\n\n".join(blocks)
        if self.diagnostics:
            diag = "\n".join(f"# {k}\t{v}" for k, v in sorted(self.diagnostics.items()))
            out = out + "\n" + diag if out else diag
        return (out + "\n").encode()

    def to_json(self) -> bytes:
        return wio.canonical_json_bytes({
            "command": self.command,
            "input_digest": self.input_digest,
            "tables": [
                {"name": name, "header": header, "rows": rows}
                for name, header, rows in self.tables
            ],
            "diagnostics": self.diagnostics,
            "exit_status": self.exit_status,
        })


def _emit(bundle: ReportBundle, fmt: str, out: Optional[str], raw: Optional[bytes] = None) -> None:
    data = raw if raw is not None else (bundle.to_json() if fmt == "json" else bundle.to_tsv())
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _frac(x: Fraction) -> str:
    return str(x)


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _cmd_newton(args) -> ReportBundle:
    p, degree, precision, ctype, raw = wio.load_module_spec(args.spec)
    field = make_field(p, degree)
    mod = standard_module(p, precision, ctype, field)
    poly = newton_polygon(mod)
    rows = [[_frac(s), str(m)] for s, m in poly.points]
    return ReportBundle("newton", wio.sha256_hex(raw),
                        [("newton_polygon", ["slope", "mult"], rows)])


def _cmd_valuations(args) -> ReportBundle:
    p, degree, precision, ctype, raw = wio.load_module_spec(args.spec)
    if args.p is not None:
        p = args.p
    prof = valuation_profile(ctype, p)
    rows = []
    for i in range(1, ctype.d_M + 1):
        rows.append([str(i), str(ctype.eps[i - 1]), str(prof.Q[i]),
                     _frac(prof.vZ[i]), _frac(prof.w[i])])
    return ReportBundle("valuations", wio.sha256_hex(raw),
                        [("valuations", ["index", "eps", "Q", "vZ", "w"], rows)])


def _cmd_example43(args) -> ReportBundle:
    for name in ("p", "q0", "q1", "n", "m"):
        if getattr(args, name) is None:
            raise UsageError(f"example43 requires --{name}" if name != "p" else "example43 requires -p")
    rep = example_43_report(args.p, args.q0, args.q1, args.n, args.m)
    rows = [[str(r.index), r.cls, str(r.eps), str(r.Q), _frac(r.vZ), _frac(r.w)]
            for r in rep.rows]
    digest = wio.sha256_hex(
        f"p={args.p} q0={args.q0} q1={args.q1} n={args.n} m={args.m}".encode())
    bundle = ReportBundle("example43", digest,
                          [("valuations", ["index", "class", "eps", "Q", "vZ", "w"], rows)])
    bundle.diagnostics.update(rep.diagnostics)
    for cls in sorted(rep.class_w):
        bundle.diagnostics[f"w_class_{cls}"] = _frac(rep.class_w[cls])
    return bundle


def _cmd_solve_as(args) -> ReportBundle:
    system, raw = wio.load_as_system(args.system)
    ext = args.ext if args.ext is not None else 1
    sol = solve_over(system, ext)
    header = [f"x{i}" for i in range(1, system.nvars + 1)]
    rows = [[wio.elem_to_str(x) for x in v] for v in sol.all]
    m, count = geometric_count(system)
    bundle = ReportBundle("solve-as", wio.sha256_hex(raw),
                          [("solutions", header, rows)])
    bundle.diagnostics.update({
        "extension_degree": str(ext),
        "solution_count": str(len(sol.all)),
        "homogeneous_count": str(len(sol.homogeneous)),
        "particular_exists": "yes" if sol.particular is not None else "no",
        "geometric_m": str(m),
        "geometric_count": str(count),
        "boundary": "yes" if boundary_test(system) else "no",
    })
    return bundle


def _cmd_lubin_tate(args) -> ReportBundle:
    if args.p is None or args.r is None:
        raise UsageError("lubin-tate requires -p and --r")
    ws = lubin_tate_w(args.r, args.p)
    rows = [[str(i + 1), _frac(w)] for i, w in enumerate(ws)]
    digest = wio.sha256_hex(f"p={args.p} r={args.r}".encode())
    bundle = ReportBundle("lubin-tate", digest,
                          [("w_valuations", ["index", "w"], rows)])
    bundle.diagnostics["sum"] = _frac(sum(ws, Fraction(0)))
    bundle.diagnostics["sum_identity"] = "ok" if sum_identity_check(args.r, args.p) else "FAIL"
    bundle.diagnostics["slope"] = _frac(Fraction(1, args.r))
    return bundle


def _embed_plan_obj(plan, report) -> dict:
    classes = []
    for idx, cls in enumerate(plan.classes):
        classes.append({
            "q": cls.q,
            "pattern": list(cls.pattern),
            "weight": cls.weight,
            "members": [list(c) for c in cls.members],
            "s_list": list(cls.s_list),
            "l_list": list(cls.l_list),
            "zeta": [wio.elem_to_str(z) for z in plan.zetas[idx]],
        })
    images = {}
    for i in sorted(plan.images):
        entries = []
        for key in sorted(plan.images[i], key=lambda k: (k[0], str(k))):
            coeff = plan.images[i][key]
            if key[0] == "t":
                keyrepr = {"kind": "tensor", "class": key[1], "weight": key[2],
                           "legs": list(key[3])}
            else:
                keyrepr = {"kind": "unit", "class": key[1], "member": key[2],
                           "slot": key[3]}
            entries.append({"key": keyrepr,
                            "coeff": [wio.elem_to_str(c) for c in coeff.comps]})
        images[str(i)] = entries
    return {
        "r": plan.r,
        "tensor_weights": list(plan.tensor_weights()),
        "classes": classes,
        "images": images,
        "verification": {
            "phi_equivariant": report.phi_equivariant,
            "filtration_compatible": report.filtration_compatible,
            "injective_mod_p": report.injective_mod_p,
            "has_projector": report.has_projector,
            "u_patterns_match": report.u_patterns_match,
            "raw_supports_disjoint": report.supports_disjoint,
            "details": report.details,
        },
    }


def _cmd_embed(args) -> ReportBundle:
    p, degree, precision, ctype, raw = wio.load_module_spec(args.spec)
    field = make_field(p, degree)
    mod = standard_module(p, precision, ctype, field)
    plan = build_embedding(mod, args.r)
    report = verify_embedding(plan)
    bundle = ReportBundle("embed", wio.sha256_hex(raw))
    rows = []
    for idx, cls in enumerate(plan.classes):
        rows.append([str(cls.q), "".join(map(str, cls.pattern)), str(cls.weight),
                     ",".join(map(str, cls.s_list)) or "-",
                     ",".join(map(str, cls.l_list)) or "-",
                     ";".join(wio.elem_to_str(z) for z in plan.zetas[idx])])
    bundle.tables.append(("classes", ["q", "pattern", "weight", "s_list", "l_list", "zeta"], rows))
    bundle.diagnostics.update({
        "r": str(plan.r),
        "phi_equivariant": "ok" if report.phi_equivariant else "FAIL",
        "filtration_compatible": "ok" if report.filtration_compatible else "FAIL",
        "injective_mod_p": "ok" if report.injective_mod_p else "FAIL",
        "has_projector": "ok" if report.has_projector else "FAIL",
    })
    if not report.all_passed:
        bundle.exit_status = 1
    bundle.raw_payload = wio.canonical_json_bytes({
        "command": "embed",
        "input_digest": wio.sha256_hex(raw),
        "plan": _embed_plan_obj(plan, report),
    })
    return bundle


def _cmd_connection(args) -> ReportBundle:
    inp, lie, raw = wio.load_connection_input(args.spec)
    system = compile_system(inp)
    if args.reduce:
        if lie is None:
            raise UsageError("--reduce requires a lie_basis block in the input file")
        system, _ = reduce_by_lie_constraints(system, lie)
    bundle = ReportBundle("connection", wio.sha256_hex(raw))
    bundle.raw_payload = wio.dump_as_system(system)
    return bundle


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wittcrys",
        description=("exact toolkit: truncated Witt vectors, cycle-type modules, "
                     "Frobenius-linear systems, and slope/valuation reports"))
    ap.add_argument("--version", action="version", version=f"wittcrys {__version__}")
    sub = ap.add_subparsers(dest="command")

    def common(sp, spec=False, system=False):
        if spec:
            sp.add_argument("--spec", required=True, help="input JSON file")
        if system:
            sp.add_argument("--system", required=True, help="system JSON file")
        sp.add_argument("--out", help="write output to this path instead of stdout")
        sp.add_argument("--format", choices=("tsv", "json"), default=None)

    sp = sub.add_parser("newton", help="Newton polygon of a module spec")
    common(sp, spec=True)

    sp = sub.add_parser("valuations", help="exact root valuations of a module spec")
    common(sp, spec=True)
    sp.add_argument("-p", type=int, default=None, help="override the spec's prime")

    sp = sub.add_parser("example43", help="two-slope family valuation table")
    common(sp)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("--q0", type=int, required=True)
    sp.add_argument("--q1", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)

    sp = sub.add_parser("solve-as", help="solve a Frobenius-linear system over an extension")
    common(sp, system=True)
    sp.add_argument("--ext", type=int, default=1, help="extension degree (default 1)")

    sp = sub.add_parser("embed", help="tensor-power embedding plan and verification")
    common(sp, spec=True)
    sp.add_argument("--r", type=int, default=None, help="tensor rank (multiple of the minimum)")

    sp = sub.add_parser("connection", help="compile a connection input to a system file")
    common(sp, spec=True)
    sp.add_argument("--reduce", action="store_true",
                    help="apply the span constraints from the input's lie_basis")

    sp = sub.add_parser("lubin-tate", help="w-valuations of the rank-r building block")
    common(sp)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--precision", type=int, default=None, help="unused; accepted for symmetry")
    return ap


_DISPATCH = {
    "newton": _cmd_newton,
    "valuations": _cmd_valuations,
    "example43": _cmd_example43,
    "solve-as": _cmd_solve_as,
    "embed": _cmd_embed,
    "connection": _cmd_connection,
    "lubin-tate": _cmd_lubin_tate,
}


def run(argv: Sequence[str]) -> Tuple[Optional[ReportBundle], int]:
    """Parse argv, execute, emit output; returns (bundle, exit code)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed a message; normalize bad usage to 2
        code = exc.code if isinstance(exc.code, int) else 2
        return None, (0 if code == 0 else 2)
    if not args.command:
        parser.print_usage(sys.stderr)
        return None, 2
    try:
        bundle = _DISPATCH[args.command](args)
    except UsageError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return None, 2
    except WittcrysError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return None, 1

    fmt = args.format
    if args.command == "connection":
        _emit(bundle, "json", args.out, raw=bundle.raw_payload)
    elif args.command == "embed" and (fmt is None or fmt == "json"):
        _emit(bundle, "json", args.out, raw=bundle.raw_payload)
    else:
        _emit(bundle, fmt or "tsv", args.out)
    return bundle, bundle.exit_status


def main() -> None:
    _, code = run(sys.argv[1:])
    sys.exit(code)


if __name__ == "__main__":
    main()
