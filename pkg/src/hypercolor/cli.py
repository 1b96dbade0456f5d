"""Command-line interface: tables, build, family and verify."""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import gf2
from .code import (
    code_for,
    code_to_json,
    color_dependencies,
    logical_basis,
    logical_count,
    nontrivial_string,
    to_alist,
)
from .distance import code_report, estimate_vs_exact, exact_distance
from .errors import (
    ColorDependencyError,
    ComplexCodeMismatchError,
    HypercolorError,
    IncompatibleSignatureError,
    NoComplexError,
    NotThreeColorableError,
    PairingIncompatibleError,
    TooFewFacesError,
)
from .hypgeo import TessellationSignature, distance_estimate, face_count, fundamental_polygon
from .tables import ROW_SETS, compare_genus, format_rows, table_rows
from .tessellation.builder import BUILDERS, build_complex
from .tessellation.coloring import three_color
from .tessellation.complex import coloring_problems, validate_complex
from .tessellation.svg import render_svg

EXIT_OK = 0
EXIT_CONSTRUCTION = 2
EXIT_VERIFICATION = 3
EXIT_BUDGET = 4


def atomic_write(path: str | Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_budget(text: str | None) -> float | None:
    """Seconds from '90', '90s', '2m' or '1h'."""
    if text is None:
        return None
    m = re.fullmatch(r"\s*([0-9]*\.?[0-9]+)\s*([smh]?)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"bad budget {text!r}; use e.g. 60, 60s, 2m")
    scale = {"": 1, "s": 1, "m": 60, "h": 3600}[m.group(2)]
    return float(m.group(1)) * scale


def parse_genera(text: str) -> list[int]:
    """'3', '2-9' or '2,4,7'."""
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-", 1)
            out += list(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _reason(exc: Exception) -> str:
    for cls, name in (
        (TooFewFacesError, "too-few-faces"),
        (NotThreeColorableError, "not-3-colorable"),
        (NoComplexError, "no-complex"),
        (PairingIncompatibleError, "pairing-incompatible"),
        (IncompatibleSignatureError, "incompatible-signature"),
        (ComplexCodeMismatchError, "complex-code-mismatch"),
        (ColorDependencyError, "color-dependency"),
    ):
        if isinstance(exc, cls):
            return name
    return "error"


def _fail(exc: Exception, code: int = EXIT_CONSTRUCTION) -> int:
    print(json.dumps({"status": "error", "reason": _reason(exc), "message": str(exc)}), file=sys.stderr)
    return code


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------


def cmd_tables(args) -> int:
    rows = []
    for g in args.genus:
        rows += table_rows(g, args.rows)
    text = format_rows(rows, args.format)
    if args.output:
        atomic_write(args.output, text)
    else:
        sys.stdout.write(text)
    if not args.compare:
        return EXIT_OK
    mismatches = 0
    for g in args.genus:
        for check in compare_genus(g):
            if not check.ok:
                mismatches += 1
            if not check.ok or args.verbose:
                print(check.describe(), file=sys.stderr)
    print(f"compare: {mismatches} mismatching cells", file=sys.stderr)
    return EXIT_OK if mismatches == 0 else EXIT_VERIFICATION


# --------------------------------------------------------------------------
# build
# --------------------------------------------------------------------------


def _build(args):
    sig = TessellationSignature.of(args.sides, args.genus)
    cx = build_complex(sig, builder=args.builder)
    if "notice" in cx.meta:
        print(f"notice: {cx.meta['notice']}", file=sys.stderr)
    coloring = three_color(cx)
    return sig, cx, coloring, code_for(cx, coloring)


def cmd_build(args) -> int:
    try:
        sig, cx, coloring, code = _build(args)
        logical_count(code)
    except (HypercolorError, ValueError) as exc:
        return _fail(exc)
    result = exact_distance(code, budget=args.budget) if args.budget is not None else None
    report = code_report(code, result)
    out = Path(args.out_dir)
    stem = f"p{sig.p}_g{sig.g}"
    atomic_write(out / f"{stem}_complex.json", json.dumps(cx.to_json(coloring), indent=1) + "\n")
    atomic_write(out / f"{stem}.alist", to_alist(code.H))
    atomic_write(out / f"{stem}_code.json", json.dumps(code_to_json(code), indent=1) + "\n")
    atomic_write(out / f"{stem}_report.json", json.dumps(report.to_json(), indent=1) + "\n")
    if args.svg:
        highlight = nontrivial_string(code, "G")
        support = None if highlight is None else np.nonzero(highlight)[0].tolist()
        polygon = fundamental_polygon(sig.g) if cx.has_embedding else None
        atomic_write(args.svg, render_svg(cx, coloring, polygon, support))
    print(f"[[{code.n},{code.k},{report.d_estimate}-estimate]] builder={cx.meta.get('builder')}")
    if result is not None:
        print(f"distance search: {result.value} ({result.status}, {result.method})")
    if args.strict and result is not None and not result.exact:
        return EXIT_BUDGET
    return EXIT_OK


# --------------------------------------------------------------------------
# family
# --------------------------------------------------------------------------


def cmd_family(args) -> int:
    print("g,p,n_f,n,k,d_estimate,k/n")
    prev = -1.0
    for g in range(2, args.g_max + 1):
        p = 4 + 2 * g
        try:
            sig = TessellationSignature.of(p, g)
            nf = face_count(sig)
            code = code_for(build_complex(sig, builder=args.builder))
            k = logical_count(code)
        except (HypercolorError, ValueError) as exc:
            print(f"family member g={g} failed: {exc}", file=sys.stderr)
            return EXIT_CONSTRUCTION
        est = distance_estimate(p, g)
        rate = k / code.n
        ok = nf == 6 and code.n == 8 + 4 * g and k == 4 * g and est == 4 and rate > prev
        print(f"{g},{p},{nf},{code.n},{k},{est},{rate:.6g}")
        if not ok:
            print(f"family member g={g} does not have the expected parameters", file=sys.stderr)
            return EXIT_VERIFICATION
        prev = rate
    return EXIT_OK


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        sig, cx, coloring, code = _build(args)
    except (HypercolorError, ValueError) as exc:
        return _fail(exc)
    checks: list[tuple[str, bool, str]] = []
    validation = validate_complex(cx, sig)
    for c in validation.checks:
        checks.append((f"complex.{c.name}", c.status != "fail", f"{c.status} {c.detail}".strip()))
    problems = coloring_problems(cx, coloring)
    checks.append(("coloring", not problems, problems[0] if problems else ""))
    hht = (code.H.astype(np.int64) @ code.H.T.astype(np.int64)) % 2
    checks.append(("code.self_orthogonal", not hht.any(), ""))
    checks.append(("code.column_weight_3", bool((code.H.sum(axis=0) == 3).all()), ""))
    try:
        k = logical_count(code)
        checks.append(("code.k", True, f"k={k}"))
    except ComplexCodeMismatchError as exc:
        checks.append(("code.k", False, str(exc)))
    deps = color_dependencies(code, strict=False)
    checks.append(("code.color_dependencies", deps.passed, f"rank deficit {deps.rank_deficit}"))
    try:
        basis = logical_basis(code)
        commute = not ((code.H.astype(np.int64) @ basis.x_logicals.T.astype(np.int64)) % 2).any()
        paired = np.array_equal(basis.pairing, np.eye(basis.k, dtype=np.uint8))
        rs = gf2.RowSpace(code.H)
        outside = all(not rs.contains(v) for v in basis.x_logicals)
        checks.append(("code.logical_basis", commute and paired and outside, f"{basis.k} pairs"))
    except ComplexCodeMismatchError as exc:
        checks.append(("code.logical_basis", False, str(exc)))
    comparison = estimate_vs_exact(sig.p, sig.g, budget=args.budget, code=code)
    report = code_report(code, comparison.result)
    checks.append(("bounds.singleton", report.singleton_ok, f"saturated={report.singleton_saturated}"))
    checks.append(("bounds.hamming", report.hamming_ok, ""))
    hard_ok = all(ok for _, ok, _ in checks)
    summary = {
        "p": sig.p,
        "g": sig.g,
        "builder": cx.meta.get("builder"),
        "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in checks],
        "distance": comparison.to_json(),
        "report": report.to_json(),
        "passed": hard_ok,
    }
    if args.format == "json":
        print(json.dumps(summary, indent=1))
    else:
        for name, ok, detail in checks:
            print(f"{'pass' if ok else 'FAIL'} {name} {detail}".rstrip())
        print(f"distance: {comparison.note}")
        print(
            f"[[{report.n},{report.k}]] d_estimate={report.d_estimate} "
            f"d_exact={report.d_exact} d_status={report.d_status} "
            f"singleton_saturated={report.singleton_saturated}"
        )
        print("verify: pass" if hard_ok else "verify: FAIL")
    if not hard_ok:
        return EXIT_VERIFICATION
    if args.strict and not comparison.result.exact:
        return EXIT_BUDGET
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypercolor",
        description="Color codes on closed hyperbolic surfaces tiled by {p,3} polygons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tables", help="code-parameter tables per genus")
    t.add_argument("--genus", "-g", type=parse_genera, default=list(range(2, 10)),
                   help="genus, range (2-9) or list (2,5); default 2-9")
    t.add_argument("--format", choices=("csv", "md", "json"), default="csv")
    t.add_argument("--rows", choices=ROW_SETS, default="codes",
                   help="codes: tessellations giving a code (default); even: every even p; all: every p")
    t.add_argument("--compare", action="store_true", help="diff against the embedded published values")
    t.add_argument("--output", "-o", help="write the table here instead of stdout")
    t.add_argument("--verbose", "-v", action="store_true", help="list matching cells too")
    t.set_defaults(func=cmd_tables)

    def add_code_args(sp, budget_default):
        sp.add_argument("--sides", "-p", type=int, required=True)
        sp.add_argument("--genus", "-g", type=int, required=True)
        sp.add_argument("--builder", choices=BUILDERS, default="auto")
        sp.add_argument("--budget", type=parse_budget, default=budget_default,
                        help="distance search time budget, e.g. 60s or 2m")
        sp.add_argument("--strict", action="store_true",
                        help="exit 4 when the distance search ends with only an upper bound")

    b = sub.add_parser("build", help="build one code and export it")
    add_code_args(b, None)
    b.add_argument("--svg", metavar="PATH", help="also draw the colored complex")
    b.add_argument("--out-dir", default=".", help="directory for JSON/alist exports")
    b.set_defaults(func=cmd_build)

    f = sub.add_parser("family", help="check the p = 4 + 2g family up to a genus")
    f.add_argument("g_max", type=int, nargs="?", default=9)
    f.add_argument("--builder", choices=BUILDERS, default="auto")
    f.set_defaults(func=cmd_family)

    v = sub.add_parser("verify", help="invariants, distance and bounds for one code")
    add_code_args(v, 60.0)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
