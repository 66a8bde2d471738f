"""Command-line front end.

Exit codes: 0 success, 1 verification failure or unstable run, 2 usage or parse
error, 3 degenerate Legendre correspondence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from .legendre import DegeneracyError, hamiltonian, pseudofiber_classify
from .maxwell_space import FLAVORS, build_chart
from .symalg import Poly

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(args, text: str, payload) -> None:
    out = _dump(payload) if args.format == "json" else text.rstrip("\n") + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _parse_sigma(raw: Optional[str]):
    if raw is None or raw in ("sigma", "symbolic"):
        return None
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--sigma expects a rational number or 'symbolic', got {raw!r}")


# -- hamiltonian ------------------------------------------------------------

def cmd_hamiltonian(args) -> int:
    if args.flavor not in ("ddw", "maxwell-dirac", "ld2"):
        raise UsageError(f"hamiltonian is defined for ddw, maxwell-dirac and ld2, not {args.flavor!r}")
    if args.flavor == "ld2" and args.sigma is None:
        raise UsageError("ld2 needs --sigma (a rational value or 'symbolic')")
    chart = build_chart(args.flavor)
    sigma = _parse_sigma(args.sigma) if args.flavor == "ld2" else None
    H = hamiltonian(chart, sigma=sigma)
    _emit(args, f"H = {H}", {**H.to_json(), "text": str(H)})
    return EXIT_OK


# -- derive -----------------------------------------------------------------

def cmd_derive(args) -> int:
    from .hamilton import derive, recovers_maxwell

    chart = build_chart(args.flavor)
    sigma = _parse_sigma(args.sigma) if args.sigma is not None else Fraction(1)
    if args.flavor == "ld2" and sigma is None:
        raise UsageError("derive ld2 needs a numeric --sigma")
    sysm = derive(chart, sigma=sigma)
    ok = recovers_maxwell(sysm) if chart.constrained else True
    payload = {**sysm.to_json(), "maxwell_recovered": ok if chart.constrained else None}
    _emit(args, sysm.render(), payload)
    if not ok:
        print("error: Maxwell relations not recovered", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# -- bracket ----------------------------------------------------------------

FAMILIES = ("P", "Q")


def _generic(family: str, chart, tag: str):
    idx = chart.idx
    if family == "P":
        return [Poly.var(f"{tag}[{m}]") for m in idx]
    rows = []
    for m in idx:
        row = []
        for n in idx:
            if m == n:
                row.append(Poly.const(0))
            elif m < n:
                row.append(Poly.var(f"{tag}[{m},{n}]"))
            else:
                row.append(-Poly.var(f"{tag}[{n},{m}]"))
        rows.append(row)
    return rows


def _poly_entry(x) -> Poly:
    if isinstance(x, (int, str)):
        return Poly.const(Fraction(x))
    return Poly.from_json(x)


def load_coefficients(path: str, family: str, chart):
    """Coefficient file: {"phi": [Poly JSON, ...]} or {"psi": [[Poly JSON, ...], ...]}."""
    key = "phi" if family == "P" else "psi"
    try:
        with open(path) as fh:
            data = json.load(fh)
        raw = data[key]
        if family == "P":
            vals = [_poly_entry(x) for x in raw]
            if len(vals) != chart.n:
                raise ValueError(f"phi needs {chart.n} entries")
        else:
            vals = [[_poly_entry(x) for x in row] for row in raw]
            if len(vals) != chart.n or any(len(r) != chart.n for r in vals):
                raise ValueError(f"psi needs a {chart.n}x{chart.n} array")
    except (OSError, KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {key} from {path}: {exc}")
    return vals


def cmd_bracket(args) -> int:
    from .observables import bracket_paths, make_P_phi, make_Q_psi

    chart = build_chart(args.chart)
    obs, inputs = [], []
    for pos, (fam, path) in enumerate(((args.family_a, args.coeffs_a), (args.family_b, args.coeffs_b))):
        tag = ("phi" if fam == "P" else "psi") + ("" if pos == 0 else "2")
        coeffs = load_coefficients(path, fam, chart) if path else _generic(fam, chart, tag)
        try:
            o = make_P_phi(coeffs, chart) if fam == "P" else make_Q_psi(coeffs, chart)
        except ValueError as exc:
            raise UsageError(str(exc))
        obs.append(o)
        flat = coeffs if fam == "P" else [c for row in coeffs for c in row]
        inputs.append({"family": fam, "coefficients": [c.to_json() for c in flat]})
    p1, p2, p3 = bracket_paths(*obs)
    agree = p1 == p2 and p2 == p3
    text = f"{{{args.family_a},{args.family_b}}} = {p1}"
    _emit(args, text, {"lhs": p1.to_json(), "text": str(p1), "inputs": inputs, "paths_agree": agree})
    if not agree:
        print("error: bracket computation paths disagree", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- classify ---------------------------------------------------------------

def _parse_point(items: List[str]) -> dict:
    point = {}
    for it in items:
        if "=" not in it:
            raise UsageError(f"point entries look like name=value, got {it!r}")
        k, v = it.split("=", 1)
        try:
            point[k.strip()] = Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad value in {it!r}")
    chart = build_chart("ld2")
    unknown = [k for k in point if k not in chart]
    if unknown:
        raise UsageError(f"unknown coordinates {unknown}")
    return point


def cmd_classify(args) -> int:
    point = _parse_point(args.point)
    st = pseudofiber_classify(point)
    text = f"{st.name} (member={st.member}): {st.detail}; dims " + \
        ", ".join(f"{k}={v}" for k, v in sorted(st.dims.items()))
    _emit(args, text, {**st.to_json(), "point": {k: str(v) for k, v in sorted(point.items())}})
    return EXIT_OK


# -- simulate ---------------------------------------------------------------

def cmd_simulate(args) -> int:
    from .fieldsim import ConvergenceError, InstabilityError, simulate, write_csv

    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}")
    outdir = args.out or "."
    try:
        diag, snaps = simulate(cfg)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"invalid config: {exc}")
    except (InstabilityError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "diagnostics.json"), "w") as fh:
        fh.write(_dump(diag))
    if snaps:
        write_csv(os.path.join(outdir, "snapshots.csv"), snaps)
    summary = {"energy_drift": diag["energy_drift"], "steps": diag["steps"], "out": outdir,
               "snapshots": len(snaps)}
    text = f"steps {diag['steps']}, relative energy drift {diag['energy_drift']:.3e}, " \
           f"{len(snaps)} snapshots written to {outdir}"
    if args.format == "json":
        sys.stdout.write(_dump(summary))
    else:
        print(text)
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def cmd_verify(args) -> int:
    from .suites import SUITES, run_suite

    names = SUITES if args.suite == "all" else (args.suite,)
    reports, extras = [], {}
    for name in names:
        rep, extra = run_suite(name, args.seed, args.quick)
        reports.append(rep)
        if extra:
            extras[name] = extra
    ok = all(r.ok for r in reports)
    lines = []
    for r in reports:
        for c in r.checks:
            lines.append(f"{r.suite:12s} {c.name:26s} {c.status.upper():4s}  {c.detail}")
        if r.suite in extras:
            w = extras[r.suite]
            lines.append(f"{'':12s} witness X:    {w['X']}")
            lines.append(f"{'':12s} witness Xbar: {w['Xbar']}")
    payload = reports[0].to_json() if len(reports) == 1 else {"suites": [r.to_json() for r in reports]}
    if extras:
        payload["witness"] = extras.get("obstruction")
    payload["passed"] = ok
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser -----------------------------------------------------------------

def _common(p: argparse.ArgumentParser, top: bool) -> None:
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--format", choices=("json", "text"), default=d("text"), help="output format")
    p.add_argument("--out", default=d(None), help="write output to this path (simulate: a directory)")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized suites")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="multisym", description="Multisymplectic Maxwell toolkit")
    _common(ap, True)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hamiltonian", help="Hamiltonian function of a chart")
    p.add_argument("flavor", choices=FLAVORS)
    p.add_argument("--sigma", help="rational value or 'symbolic' (ld2 only)")
    _common(p, False)
    p.set_defaults(func=cmd_hamiltonian)

    p = sub.add_parser("derive", help="Hamilton equations of a chart")
    p.add_argument("flavor", choices=FLAVORS)
    p.add_argument("--sigma", help="value of sigma for ld2 (default 1)")
    _common(p, False)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("bracket", help="Poisson bracket of two observable families")
    p.add_argument("family_a", choices=FAMILIES)
    p.add_argument("family_b", choices=FAMILIES)
    p.add_argument("--coeffs-a", help="coefficient file for the first observable")
    p.add_argument("--coeffs-b", help="coefficient file for the second observable")
    p.add_argument("--chart", choices=("ddw", "maxwell-dirac"), default="ddw")
    _common(p, False)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("classify", help="pseudofiber stratum of a 2D momentum point")
    p.add_argument("point", nargs="*", help="coordinates as name=value, e.g. sigma=2 'Pi[A1,2]=1'")
    _common(p, False)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", help="run a configured field simulation")
    p.add_argument("config", help="JSON config with dims, h, dt, steps, init, tolerances")
    _common(p, False)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", choices=("symbolic", "numeric", "obstruction", "all"))
    p.add_argument("--quick", action="store_true", help="reduced resolution and sample counts")
    _common(p, False)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:           # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegeneracyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
