"""Command-line front end.

Exit codes: 0 success, 1 a check failed or a bound violation was detected,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import algebra as ga
from . import chsh, model
from .algebra import DomainError, Sign, TableMode, UnitVector3
from .derivation import check_script

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def compact(p: ga.Multivector) -> str:
    """Short signed rendering used in tables, e.g. ``-1``, ``+b3``, ``-1/2*b1``."""
    terms = []
    for c, name in zip(p.components, ("", "b1", "b2", "b3")):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = ga.format_scalar(abs(c))
        if not name:
            terms.append(f"{sign}{mag}")
        elif mag == "1":
            terms.append(f"{sign}{name}")
        else:
            terms.append(f"{sign}{mag}*{name}")
    return " ".join(terms) if terms else "0"


def _parse_scalar(text: str):
    text = text.strip()
    try:
        if any(ch in text for ch in ".eE") or text.lower() in ("nan", "inf", "-inf"):
            v = float(text)
            if not math.isfinite(v):
                raise ValueError
            return v
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


def parse_vectors(*texts: str) -> list[UnitVector3]:
    """Parse ``x,y,z`` triples; all-rational input stays exact, otherwise float."""
    comps = []
    for t in texts:
        parts = t.split(",")
        if len(parts) != 3:
            raise UsageError(f"expected three comma-separated components, got {t!r}")
        comps.append([_parse_scalar(p) for p in parts])
    if any(isinstance(c, float) for row in comps for c in row):
        comps = [[float(c) for c in row] for row in comps]
    try:
        return [UnitVector3(*row) for row in comps]
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def _num(v) -> float:
    return float(v) + 0.0


# -- tables -----------------------------------------------------------------


def cmd_tables(args, out) -> int:
    modes = [TableMode.CORRECT, TableMode.ERRONEOUS] if args.mode == "both" else [TableMode(args.mode)]
    lams = [Sign.PLUS, Sign.MINUS] if args.lam is None else [Sign(args.lam)]
    ok = True

    out.write("# fixed basis: bj*bk = -delta_jk - eps_jkl bl\n")
    for j in (1, 2, 3):
        for k in (1, 2, 3):
            got = ga.mul(ga.basis(j), ga.basis(k))
            want = ga.Multivector.scalar(-1 if j == k else 0)
            for l in (1, 2, 3):
                want = ga.add(want, ga.scale(-ga.levi_civita(j, k, l), ga.basis(l)))
            status = "" if got == want else "  FAILED"
            ok &= got == want
            out.write(f"b{j}*b{k} = {compact(got)}{status}\n")

    for lam in lams:
        for mode in modes:
            out.write(f"# lambda={lam} mode={mode.value}\n")
            for j in (1, 2, 3):
                for k in (1, 2, 3):
                    true = ga.mul(ga.lambda_basis(j, lam), ga.lambda_basis(k, lam))
                    entry = ga.table_product(j, k, lam, mode)
                    match = entry == true
                    expected = mode is TableMode.CORRECT or lam is Sign.PLUS or j == k
                    ok &= match == expected
                    flag = "" if match else f"  MISMATCH (true product {compact(true)})"
                    out.write(f"B({j},{lam})*B({k},{lam}) = {compact(entry)}{flag}\n")
    out.write("tables: " + ("ok" if ok else "FAILED") + "\n")
    return EXIT_OK if ok else EXIT_FAIL


# -- identities -------------------------------------------------------------


def cmd_identities(args, out) -> int:
    rng = np.random.default_rng(args.seed)
    vs = rng.standard_normal((2 * args.samples, 3))
    vs /= np.linalg.norm(vs, axis=1, keepdims=True)
    floats = [UnitVector3(*map(float, v)) for v in vs]
    pairs = list(zip(floats[::2], floats[1::2]))
    exact = [UnitVector3(1, 0, 0), UnitVector3(Fraction(3, 5), Fraction(4, 5), 0), UnitVector3(0, Fraction(-5, 13), Fraction(12, 13))]
    pairs += [(a, b) for a in exact for b in exact]

    def close(p, c):
        return ga.isclose(p, ga.Multivector.scalar(c) if p.is_exact else ga.Multivector.scalar(float(c)))

    checks = {
        "A_equals_lambda": lambda a, b, lam: close(model.measure_A(a, lam), int(lam)),
        "B_equals_minus_lambda": lambda a, b, lam: close(model.measure_B(b, lam), -int(lam)),
        "AB_equals_minus_one": lambda a, b, lam: close(ga.mul(model.measure_A(a, lam), model.measure_B(b, lam)), -1),
        "unit_square_is_minus_one": lambda a, b, lam: close(ga.mul(ga.embed(a), ga.embed(a)), -1),
        "inverse_of_minus_a_is_a": lambda a, b, lam: ga.isclose(ga.inverse(ga.neg(ga.embed(a))), ga.embed(a)),
        "inverse_of_b_is_minus_b": lambda a, b, lam: ga.isclose(ga.inverse(ga.embed(b)), ga.neg(ga.embed(b))),
        "ab_is_minus_dot_minus_wedge": lambda a, b, lam: ga.isclose(
            ga.mul(ga.embed(a), ga.embed(b)), model.corrected_closed_form(a, b)
        ),
    }
    ok = True
    for name, fn in checks.items():
        passed = all(fn(a, b, lam) for a, b in pairs for lam in Sign)
        ok &= passed
        out.write(f"{name} {'PASS' if passed else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_FAIL


# -- correlate --------------------------------------------------------------


def cmd_correlate(args, out) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    a, b = parse_vectors(args.a, args.b)
    try:
        if args.stream == "fair":
            ls = model.LambdaStream.fair(args.n, args.seed)
        else:
            ls = model.LambdaStream.balanced(args.n, args.seed)
    except DomainError as exc:
        raise UsageError(str(exc)) from None

    if args.mode == "raw":
        value = model.raw_correlation(a, b, ls)
    elif args.mode == "correct":
        value = model.normalized_correlation(a, b, ls).value
    else:
        value = model.estimator_by_table(a, b, ls, TableMode.ERRONEOUS).value
    out.write(
        _json(
            {
                "scalar_part": _num(value.s),
                "bivector_part": [_num(c) for c in value.x],
                "n": len(ls),
                "mode": args.mode,
            }
        )
        + "\n"
    )
    return EXIT_OK


# -- chsh -------------------------------------------------------------------


def _parse_angles(text: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("--settings needs four angles a1,a2,b1,b2 in degrees")
    try:
        angles = tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad --settings {text!r}") from None
    if not all(math.isfinite(x) for x in angles):
        raise UsageError(f"bad --settings {text!r}")
    return angles


def _build_model(args):
    try:
        if args.model == "christian":
            return chsh.christian_lhv()
        return chsh.threshold_detection_lhv(args.tau)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _config(args, angles):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    try:
        return chsh.ExperimentConfig.from_angles(*angles, trials=args.trials, seed=args.seed)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def table_csv(table: chsh.CorrelationTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(chsh.CSV_HEADER)
    w.writerows(chsh.csv_rows(table))
    return buf.getvalue()


def cmd_chsh(args, out) -> int:
    angles = _parse_angles(args.settings)
    lhv = _build_model(args)
    cfg = _config(args, angles)
    table = chsh.run_experiment(lhv, cfg)
    text_csv = table_csv(table)
    text_json = _json(chsh.summary(table)) + "\n"
    if args.csv_out:
        Path(args.csv_out).write_text(text_csv, encoding="utf-8")
    else:
        out.write(text_csv)
    if args.json_out:
        Path(args.json_out).write_text(text_json, encoding="utf-8")
    else:
        out.write(text_json)

    s_all = chsh._maybe_S(table, chsh.Estimator.ALL_EVENTS)
    err_all = table.stderr_S(chsh.Estimator.ALL_EVENTS)
    if s_all is not None and not chsh.bound_holds(s_all, err_all):
        return EXIT_FAIL
    return EXIT_OK


def cmd_scan(args, out) -> int:
    angles = _parse_angles(args.settings)
    try:
        taus = [float(t) for t in args.taus.split(",")]
        for t in taus:
            chsh.threshold_detection_lhv(t)
    except ValueError as exc:
        raise UsageError(f"bad --taus: {exc}") from None
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    report = chsh.scan_detection_loophole(taus, args.trials, args.seed, angles)
    text = json.dumps(report, ensure_ascii=False, indent=2) + "\n"
    if args.json_out:
        Path(args.json_out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    violated = any(r["S_allevents"] is not None and not r["allevents_within_bound"] for r in report["rows"])
    return EXIT_FAIL if violated else EXIT_OK


# -- check ------------------------------------------------------------------


def cmd_check(args, out) -> int:
    try:
        report = check_script(args.script)
    except OSError as exc:
        raise UsageError(f"cannot read {args.script}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise UsageError(f"{args.script} is not UTF-8") from None
    out.write(report.to_json() + "\n" if args.json else report.text())
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bivector-bell", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tables", help="print and verify the basis and lambda multiplication tables")
    t.add_argument("--mode", choices=["correct", "erroneous", "both"], default="both")
    t.add_argument("--lambda", dest="lam", type=int, choices=[1, -1], default=None)
    t.set_defaults(func=cmd_tables)

    i = sub.add_parser("identities", help="check the measurement and inverse identities")
    i.add_argument("--samples", type=int, default=1000)
    i.add_argument("--seed", type=int, default=0)
    i.set_defaults(func=cmd_identities)

    c = sub.add_parser("correlate", help="evaluate a correlation estimator")
    c.add_argument("--a", required=True, help="x,y,z (decimals or p/q)")
    c.add_argument("--b", required=True, help="x,y,z (decimals or p/q)")
    c.add_argument("--n", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--mode", choices=["correct", "erroneous", "raw"], default="correct")
    c.add_argument("--stream", choices=["fair", "balanced"], default="fair")
    c.set_defaults(func=cmd_correlate)

    angles = ",".join(f"{x:g}" for x in chsh.DEFAULT_ANGLES)
    h = sub.add_parser("chsh", help="run a CHSH experiment")
    h.add_argument("--model", choices=["christian", "threshold"], default="christian")
    h.add_argument("--tau", type=float, default=0.0)
    h.add_argument("--trials", type=int, default=100_000)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--settings", default=angles, help="a1,a2,b1,b2 in degrees")
    h.add_argument("--csv-out")
    h.add_argument("--json-out")
    h.set_defaults(func=cmd_chsh)

    s = sub.add_parser("scan-loophole", help="scan the threshold model over detection thresholds")
    s.add_argument("--taus", default=",".join(f"{k / 10:g}" for k in range(10)))
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--settings", default=angles, help="a1,a2,b1,b2 in degrees")
    s.add_argument("--json-out")
    s.set_defaults(func=cmd_scan)

    k = sub.add_parser("check", help="check a .bvd derivation script")
    k.add_argument("script")
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_check)
    return p


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, DomainError) as exc:
        print(f"bivector-bell {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
