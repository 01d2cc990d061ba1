"""Command-line front end: predict, det, classical, tables, verify.

Every subcommand emits a JSON report (or a plain-text rendering with
``--format text``) that validates against the schema shipped in
``data/cli_schema.json``.  Exit status: 0 on success, 1 when a
verification or table diff fails (the report carries a machine-readable
failure list), 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from importlib import resources
from itertools import combinations

from .algebra import (FactoredDeterminant, IncompleteFactorization,
                      factor_linear)
from .lgclassical import (StratumConfigA, StratumConfigBD, closed_form_det_A,
                          closed_form_det_BD, kappa_A, kappa_BD,
                          residue_metric_at, frobenius_check_at)
from .roots import build_root_system, parse_group, reduce_to_fundamental
from .strata import (make_stratum, restricted_arrangement,
                     predict_determinant, q_polynomial, stratum_json_dict)
from . import saitosym

_DATA = resources.files("saitostrata") / "data"

_TABLE_KEYS = {1: ("det", "e8_dim3"), 2: ("det", "e8_dim2"),
               3: ("det", "e7_dim2"), 4: ("sub", "e8_dim3"),
               5: ("sub", "e8_dim2"), 6: ("sub", "e7_dim2")}
_TABLE_GROUPS = {"e8_dim3": ("E", 8), "e8_dim2": ("E", 8),
                 "e7_dim2": ("E", 7)}


class InputError(ValueError):
    """Invalid request; mapped to exit status 2."""


def worker_count():
    """Worker pool size: SAITO_STRATA_THREADS, default logical cores."""
    raw = os.environ.get("SAITO_STRATA_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        val = int(raw)
    except ValueError:
        raise InputError(f"SAITO_STRATA_THREADS must be an integer, "
                         f"got {raw!r}")
    if val < 1:
        raise InputError("SAITO_STRATA_THREADS must be >= 1")
    return val


def load_schema():
    return json.loads((_DATA / "cli_schema.json").read_text())


# ---------------------------------------------------------------------------
# parsing helpers

def _parse_ints(text, what):
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"{what} must be a comma-separated integer list, "
                         f"got {text!r}")


def _parse_fracs(text, what):
    try:
        return [Fraction(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"{what} must be a comma-separated list of "
                         f"rationals, got {text!r}")


def _group(args):
    try:
        return parse_group(args.group)
    except (ValueError, KeyError) as exc:
        raise InputError(f"unknown group {args.group!r}: {exc}")


def _stratum_indices(R, args):
    """The simple-wall index set, from --simple or from a root list."""
    word = None
    if getattr(args, "roots", None):
        vectors = []
        for chunk in args.roots.split(";"):
            vectors.append(_parse_fracs(chunk, "--roots entry"))
        if args.ambient:
            S = [tuple(v) for v in vectors]
        else:
            S = []
            for cs in vectors:
                if len(cs) != R.rank:
                    raise InputError("each --roots vector needs one "
                                     "coefficient per simple root")
                S.append(tuple(sum(cs[i] * R.simple[i][k]
                                   for i in range(R.rank))
                               for k in range(R.ambient_dim)))
        try:
            word, I = reduce_to_fundamental(R, S)
        except ValueError as exc:
            raise InputError(str(exc))
        return sorted(I), word
    if not getattr(args, "simple", None):
        raise InputError("need --simple or --roots")
    I = sorted(set(_parse_ints(args.simple, "--simple")))
    if not I or any(i < 1 or i > R.rank for i in I) or len(I) >= R.rank:
        raise InputError(f"--simple must be a nonempty proper subset "
                         f"of 1..{R.rank}")
    return I, word


def _frac_str(x):
    return str(Fraction(x))


def _form_coeffs(form):
    return [int(c) if Fraction(c).denominator == 1 else _frac_str(c)
            for c in form.coeffs]


def _factor_list(fd: FactoredDeterminant):
    return [{"form": _form_coeffs(form), "exponent": int(e)}
            for form, e in sorted(fd.factors.items())]


# ---------------------------------------------------------------------------
# subcommands

def cmd_predict(args):
    R = _group(args)
    I, word = _stratum_indices(R, args)
    D = make_stratum(R, I)
    arr = restricted_arrangement(D, check_class=not args.fast)
    fd = predict_determinant(D, arr)
    report = {
        "subcommand": "predict",
        "stratum": stratum_json_dict(D, arr),
        "degree": fd.degree(),
        "coefficient": "unknown",
    }
    if word is not None:
        report["reduction_word"] = word
    if args.dump_roots:
        report["roots"] = R.to_json_dict()
    return report, 0


def cmd_det(args):
    R = _group(args)
    if (R.label, R.rank) not in saitosym.SUPPORTED:
        raise InputError(f"group {args.group} has no symbolic backend; "
                         f"supported: "
                         + ", ".join(sorted(f"{l}{r}"
                                            for l, r in saitosym.SUPPORTED)))
    I, _ = _stratum_indices(R, args)
    D = make_stratum(R, I)
    arr = restricted_arrangement(D)
    report = {
        "subcommand": "det",
        "stratum": stratum_json_dict(D, arr),
        "backend": args.backend,
    }
    if args.invariants is not None:
        if (R.label, R.rank) != ("D", 3):
            raise InputError("--invariants selects the two-parameter D3 "
                             "family and needs --group D3")
        a, b = _parse_fracs(args.invariants, "--invariants")[:2]
        try:
            basis = saitosym.quartic_family_d3(a, b)
        except saitosym.DegenerateBasis as exc:
            raise InputError(str(exc))
        report["invariants"] = [_frac_str(a), _frac_str(b)]
    else:
        basis = saitosym.flat_coordinates(R)
        report["normalized_pairing"] = basis.normalized
    if args.backend == "minor":
        det = saitosym.general_formula_det(basis, D)
        c = saitosym.frame_constant(basis, D)
        det = det * c
        try:
            fd = factor_linear(det, [hp.form for hp in arr])
        except IncompleteFactorization as exc:
            return _incomplete(report, exc), 0
    else:
        try:
            fd = saitosym.restricted_saito_det(basis, D, arr)
        except IncompleteFactorization as exc:
            return _incomplete(report, exc), 0
    report["complete"] = True
    report["coefficient"] = _frac_str(fd.coefficient)
    report["factors"] = _factor_list(fd)
    if args.dump_roots:
        report["roots"] = R.to_json_dict()
    return report, 0


def _incomplete(report, exc: IncompleteFactorization):
    report["complete"] = False
    report["partial_factors"] = [
        {"form": _form_coeffs(form), "exponent": int(e)}
        for form, e in sorted((exc.partial or {}).items())]
    if exc.cofactor is not None:
        report["cofactor"] = [
            [list(e), _frac_str(c)]
            for e, c in exc.cofactor.sorted_terms()]
    return report


def cmd_classical(args):
    mults = _parse_ints(args.mult, "--mult")
    try:
        if args.type == "A":
            if args.m is not None:
                raise InputError("--m applies only to types B and D")
            cfg = StratumConfigA(mults)
            fd = closed_form_det_A(cfg)
            kap = kappa_A(cfg)
        else:
            m = 0 if args.m is None else args.m
            cfg = StratumConfigBD(m, mults, kind=args.type)
            fd = closed_form_det_BD(cfg)
            kap = kappa_BD(cfg)
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc))
    report = {
        "subcommand": "classical",
        "type": args.type,
        "mults": mults,
        "kappa": _frac_str(kap),
        "factors": _factor_list(fd),
    }
    if args.type != "A":
        report["m"] = cfg.m
    if args.at is not None:
        xi = _parse_fracs(args.at, "--at")
        if len(xi) != cfg.d:
            raise InputError(f"--at needs {cfg.d} coordinates")
        report["at"] = [_frac_str(x) for x in xi]
        report["closed_form_det"] = _frac_str(fd.evaluate(xi))
        _, det = residue_metric_at(cfg, xi)
        det = complex(det)
        report["oracle_det"] = [det.real, det.imag]
        res = frobenius_check_at(cfg, xi)
        report["residuals"] = {k: res[k] for k in
                               ("gram_euler", "determinant", "idempotency")}
    return report, 0


def _load_table(which):
    if which not in _TABLE_KEYS:
        raise InputError("--which must be 1..6")
    kind, key = _TABLE_KEYS[which]
    fname = ("golden_det_tables.json" if kind == "det"
             else "golden_subsystem_tables.json")
    golden = json.loads((_DATA / fname).read_text())
    return kind, key, golden[key]


def _type_multiset(type_string):
    return sorted(type_string.split("x"))


def cmd_tables(args):
    kind, key, golden = _load_table(args.which)
    label, rank = _TABLE_GROUPS[key]
    R = build_root_system(label, rank)
    rows, diff = [], []
    for entry in golden:
        D = make_stratum(R, entry["simple_indices"])
        arr = restricted_arrangement(D, check_class=False)
        if kind == "det":
            fd = predict_determinant(D, arr)
            got = sorted((tuple(int(c) for c in f.coeffs), int(e))
                         for f, e in fd.factors.items())
            want = sorted((tuple(f["form"]), f["exponent"])
                          for f in entry["factors"])
            row = {"r_d_type": entry["r_d_type"],
                   "simple_indices": entry["simple_indices"],
                   "exponents": sorted(e for _, e in got),
                   "match": got == want}
            if got != want:
                diff.append({"r_d_type": entry["r_d_type"],
                             "simple_indices": entry["simple_indices"],
                             "expected": [[list(f), e] for f, e in want],
                             "got": [[list(f), e] for f, e in got]})
        else:
            by_form = {tuple(int(c) for c in hp.form.coeffs): hp
                       for hp in arr}
            classes, mism, missing = [], [], []
            covered = set()
            for cls in entry["rows"]:
                for form in cls["forms"]:
                    hp = by_form.get(tuple(form))
                    if hp is None:
                        missing.append(form)
                        continue
                    covered.add(tuple(form))
                    got_cls = {
                        "size": hp.rd_beta.size,
                        "type": sorted(c.type_label
                                       for c in hp.rd_beta.components),
                        "component0": hp.component0.type_label,
                        "h": hp.component0.coxeter_number,
                    }
                    want_cls = {
                        "size": cls["size"],
                        "type": _type_multiset(cls["type"]),
                        "component0": cls["component0"],
                        "h": cls["h"],
                    }
                    if got_cls != want_cls:
                        mism.append({"form": form, "expected": want_cls,
                                     "got": got_cls})
                classes.append({"forms": cls["forms"], "size": cls["size"],
                                "type": cls["type"], "h": cls["h"]})
            extra = sorted(f for f in by_form if f not in covered)
            row = {"r_d_type": entry["r_d_type"],
                   "simple_indices": entry["simple_indices"],
                   "classes": len(entry["rows"]),
                   "match": not (mism or missing or extra)}
            if mism or missing or extra:
                diff.append({"r_d_type": entry["r_d_type"],
                             "simple_indices": entry["simple_indices"],
                             "mismatches": mism,
                             "missing_forms": missing,
                             "unlisted_forms": [list(f) for f in extra]})
        rows.append(row)
    report = {"subcommand": "tables", "which": args.which,
              "rows": rows, "diff": diff}
    return report, (1 if diff else 0)


# --- verify ----------------------------------------------------------------

_WORKER_R = None


def _init_worker(label, rank):
    global _WORKER_R
    _WORKER_R = build_root_system(label, rank)


def _verify_stratum(I):
    """Per-stratum combinatorial checks; runs inside the worker pool."""
    R = _WORKER_R
    out = []

    def add(check, passed, detail=""):
        out.append({"stratum": list(I), "check": check,
                    "passed": bool(passed), "detail": detail})

    try:
        D = make_stratum(R, I)
        arr = restricted_arrangement(D, check_class=True)
        add("arrangement_class_consistency", True,
            f"{len(arr)} projective classes")
    except AssertionError as exc:
        add("arrangement_class_consistency", False, str(exc))
        return out
    try:
        fd = predict_determinant(D, arr)
        add("determinant_degree", True, f"degree {fd.degree()}")
    except AssertionError:
        add("determinant_degree", False, "degree != h * dim")
        return out
    if len(I) == 1:
        h = R.coxeter_number
        expect = len(R.positive_roots) - h + 1
        add("mirror_arrangement_count", len(arr) == expect,
            f"|A_D| = {len(arr)}, |A| - h + 1 = {expect}")
    try:
        q0 = q_polynomial(D)
        add("q_polynomial_default", q0.multiset() == fd.multiset())
        for seed in (1, 2, 3):
            qr = q_polynomial(D, rng=random.Random(seed))
            add(f"q_polynomial_random_{seed}",
                qr.multiset() == fd.multiset())
    except Exception as exc:  # noqa: BLE001 - report, never crash the pool
        add("q_polynomial_default", False, repr(exc))
    return out


def cmd_verify(args):
    R = _group(args)
    n = R.rank
    strata = [I for size in range(1, n)
              for I in combinations(range(1, n + 1), size)]
    checks = []
    nproc = min(worker_count(), len(strata))
    if nproc > 1:
        with ProcessPoolExecutor(max_workers=nproc,
                                 initializer=_init_worker,
                                 initargs=(R.label, R.rank)) as pool:
            for res in pool.map(_verify_stratum, strata):
                checks.extend(res)
    else:
        _init_worker(R.label, R.rank)
        for I in strata:
            checks.extend(_verify_stratum(I))

    if (R.label, R.rank) in saitosym.SUPPORTED and not args.skip_symbolic:
        basis = saitosym.flat_coordinates(R)
        checks.append({"stratum": [], "check": "flat_pairing_normalized",
                       "passed": True,
                       "detail": f"normalized={basis.normalized}"})
        for I in strata:
            D = make_stratum(R, I)
            arr = restricted_arrangement(D)
            pred = predict_determinant(D, arr)
            try:
                fd = saitosym.restricted_saito_det(basis, D, arr)
                ok = fd.multiset() == pred.multiset()
                detail = ""
            except IncompleteFactorization as exc:
                ok, detail = False, str(exc)
            checks.append({"stratum": list(I),
                           "check": "restricted_det_matches_prediction",
                           "passed": ok, "detail": detail})
        for item in saitosym.identity_field_checks(basis):
            checks.append({"stratum": [], "check": item["check"],
                           "passed": item["passed"],
                           "detail": item.get("detail", "")})

    checks.sort(key=lambda c: (len(c["stratum"]), c["stratum"], c["check"]))
    failures = [c for c in checks if not c["passed"]]
    report = {"subcommand": "verify", "group": f"{R.label}{R.rank}",
              "passed": not failures, "checks": checks,
              "failures": failures}
    if args.dump_roots:
        report["roots"] = R.to_json_dict()
    return report, (1 if failures else 0)


# ---------------------------------------------------------------------------
# output

def _render_text(report):
    lines = [f"subcommand: {report['subcommand']}"]
    sub = report["subcommand"]
    if sub in ("predict", "det"):
        st = report["stratum"]
        lines.append(f"stratum: {st['group']} I={st['simple_indices']} "
                     f"dim={st['dim']}")
        if sub == "predict":
            facs = [(f["form"], f["exponent"]) for f in st["factors"]]
        elif report["complete"]:
            lines.append(f"coefficient: {report['coefficient']}")
            facs = [(f["form"], f["exponent"]) for f in report["factors"]]
        else:
            lines.append("factorization incomplete over the arrangement")
            facs = [(f["form"], f["exponent"])
                    for f in report["partial_factors"]]
        for form, e in facs:
            lines.append(f"  ({' '.join(str(c) for c in form)})^{e}")
    elif sub == "classical":
        lines.append(f"kappa: {report['kappa']}")
        for f in report["factors"]:
            lines.append(f"  ({' '.join(str(c) for c in f['form'])})"
                         f"^{f['exponent']}")
        if "oracle_det" in report:
            lines.append(f"closed form at point: {report['closed_form_det']}")
            lines.append(f"oracle det: {report['oracle_det']}")
    elif sub == "tables":
        for row in report["rows"]:
            lines.append(f"  {row['r_d_type']:12s} "
                         f"{'ok' if row['match'] else 'DIFF'}")
        lines.append(f"diff entries: {len(report['diff'])}")
    elif sub == "verify":
        for c in report["checks"]:
            mark = "ok " if c["passed"] else "FAIL"
            where = ",".join(str(i) for i in c["stratum"]) or "-"
            lines.append(f"  [{mark}] {c['check']} @ {where}")
        lines.append(f"passed: {report['passed']}")
    return "\n".join(lines) + "\n"


def _emit(report, args):
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = _render_text(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parser

def build_parser():
    parser = argparse.ArgumentParser(
        prog="saitostrata",
        description="Determinants of restricted Saito metrics on "
                    "discriminant strata of finite Coxeter groups.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, group=True):
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--output", help="write the report to a file")
        if group:
            p.add_argument("--group", required=True,
                           help="group label, e.g. A3, B3, D4, F4, E8")
            p.add_argument("--dump-roots", action="store_true",
                           help="include the exact root-system data")

    p = sub.add_parser("predict", help="combinatorial determinant predictor")
    common(p)
    p.add_argument("--simple", help="simple wall indices, e.g. 4,5,6,7,8")
    p.add_argument("--roots",
                   help="semicolon-separated root list; each root as "
                        "comma-separated simple-basis coefficients")
    p.add_argument("--ambient", action="store_true",
                   help="interpret --roots vectors as raw ambient "
                        "coordinates instead of simple-basis coefficients")
    p.add_argument("--fast", action="store_true",
                   help="skip the per-member projective class cross-checks")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("det", help="exact symbolic determinant")
    common(p)
    p.add_argument("--simple", required=True)
    p.add_argument("--backend", choices=("symbolic", "minor"),
                   default="symbolic")
    p.add_argument("--invariants", metavar="a,b",
                   help="use the two-parameter D3 invariant family")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("classical",
                       help="closed-form determinants for A/B/D strata")
    common(p, group=False)
    p.add_argument("--type", choices=("A", "B", "D"), required=True)
    p.add_argument("--mult", required=True,
                   help="multiplicities m0,m1,... (A) or m1,... (B/D)")
    p.add_argument("--m", type=int, help="B/D power exponent (default 0)")
    p.add_argument("--at", help="evaluation point xi1,xi2,... triggering "
                                "the numeric oracle cross-check")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("tables", help="reproduce and diff the golden tables")
    common(p, group=False)
    p.add_argument("--which", type=int, required=True,
                   help="1-3: determinant exponents; 4-6: subsystem data")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="run the property suite for a group")
    common(p)
    p.add_argument("--skip-symbolic", action="store_true",
                   help="combinatorial checks only")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, status = args.func(args)
    except InputError as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return 2
    _emit(report, args)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
