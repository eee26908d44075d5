"""Command line driver: table generators, verification suites, snapshots.

Exit codes: 0 pass, 1 verification failure or snapshot mismatch, 2 usage error.
"""

from __future__ import annotations

import argparse
import configparser
import difflib
import json
import re
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .algebra import AlgebraElement, Key, bracket_table, verify_antisymmetry, verify_backend_agreement, verify_jacobi
from .exact import C, PolyC, parse_rational
from .families import FAMILIES, family_by_recursion, family_closed_form_odd
from .fock import FockState, RealizationParams
from .ring import DJKMRing, RingElement

SCHEMA = 1


class UsageError(ValueError):
    pass


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _c_value(text):
    """--c: a rational specialization; omitted means generic c."""
    return C if text is None else _rational(text)


# -- parsing helpers ------------------------------------------------------------

_MONO = re.compile(r"^\s*(?:t(?:\^\s*\(?\s*(-?\d+)\s*\)?)?)?\s*(?:[,*]?\s*(u))?\s*(?:dt)?\s*$")


def parse_ring_input(text: str) -> RingElement:
    """A monomial "t^k", "t^k,u", "t^k u dt" or the JSON form {even: [...], odd: [...]}."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return RingElement.from_json(json.loads(text))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad ring element JSON: {exc}") from None
    m = _MONO.match(text)
    if not text or not m or not (m.group(1) is not None or "t" in text.replace("dt", "") or m.group(2)):
        raise UsageError(f"cannot parse monomial {text!r}; use t^k, t^k,u or t^k u dt")
    body = text.replace("dt", "")
    k = int(m.group(1)) if m.group(1) is not None else (1 if "t" in body else 0)
    return RingElement.monomial(k, 1 if m.group(2) else 0)


def load_states(path: str) -> list[FockState]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read states file {path}: {exc}") from None
    if data and isinstance(data[0], dict):
        data = [data]
    try:
        return [FockState.from_json(s) for s in data]
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad state in {path}: {exc}") from None


def _report(task: dict, checked: int, violations: list, started: float) -> dict:
    failed = len(violations)
    return {
        "schema": SCHEMA,
        "version": __version__,
        "task": task,
        "counts": {"checked": checked, "passed": checked - failed, "failed": failed},
        "violations": violations,
        "wall_time_s": round(time.perf_counter() - started, 3),
    }


def _emit(args, doc) -> None:
    text = canonical_json(doc)
    if getattr(args, "report", None):
        Path(args.report).write_text(text)
    sys.stdout.write(text)


def _task_echo(args) -> dict:
    skip = {"func", "config", "report"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        if isinstance(v, (Fraction, PolyC)):
            v = str(v)
        elif isinstance(v, list):
            v = [str(x) if isinstance(x, Fraction) else x for x in v]
        out[k] = v
    return out


# -- subcommands ------------------------------------------------------------------


def cmd_families(args) -> int:
    table = family_by_recursion(args.which, args.kmax)
    if args.format == "csv":
        sys.stdout.write(table.to_csv())
    else:
        sys.stdout.write(canonical_json(table.to_json()))
    return 0


def cmd_reduce(args) -> int:
    ring = DJKMRing(_c_value(args.c))
    f = parse_ring_input(args.form)
    z = ring.kassel_cocycle(f, RingElement.t(1))
    sys.stdout.write(canonical_json(z.to_json(full=args.full)))
    return 0


def cmd_bracket(args) -> int:
    from .algebra import _algebra_for

    try:
        a, b = Key.parse(args.a), Key.parse(args.b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    alg = _algebra_for(_c_value(args.c))
    val = alg.bracket(AlgebraElement.basis(a), AlgebraElement.basis(b), args.backend)
    sys.stdout.write(canonical_json(val.to_json()))
    return 0


def _algebra_suites(window: int, c, workers, suites) -> tuple[int, list]:
    runners = {
        "antisymmetry": verify_antisymmetry,
        "jacobi": verify_jacobi,
        "agreement": verify_backend_agreement,
    }
    checked, bad = 0, []
    for name in suites:
        res = runners[name](window, c, workers)
        checked += res["checked"]
        bad += [{"suite": name, **v} for v in res["violations"]]
    return checked, bad


def cmd_verify_algebra(args) -> int:
    t0 = time.perf_counter()
    if args.window < 1:
        raise UsageError("--window must be >= 1")
    checked, bad = _algebra_suites(args.window, _c_value(args.c), args.workers, args.suites)
    doc = _report(_task_echo(args) | {"kind": "verify-algebra"}, checked, bad, t0)
    _emit(args, doc)
    return 1 if bad else 0


def fock_params(args) -> list[RealizationParams]:
    c0s = args.c0 or [Fraction(2), Fraction(3, 5), Fraction(-7, 3)]
    kappas = [args.kappa0] if args.kappa0 is not None else [Fraction(0), Fraction(1), Fraction(-4)]
    if args.params:
        try:
            vals = [parse_rational(x) for x in args.params.split(",")]
        except ValueError as exc:
            raise UsageError(f"bad --params: {exc}") from None
        if len(vals) != 4:
            raise UsageError("--params takes four rationals lambda,mu,nu,varkappa")
        param_sets = [tuple(vals)]
    else:
        param_sets = [(5, 1, 2, 3), (0, 0, 0, 0)]
    rs = (0, 1) if args.r == "both" else (int(args.r),)
    out = []
    for c0 in c0s:
        for kappa0 in kappas:
            for lam, mu, nu, vk in param_sets:
                for r in rs:
                    try:
                        out.append(RealizationParams(c0, r, kappa0, lam, mu, nu, vk))
                    except ValueError as exc:
                        raise UsageError(str(exc)) from None
    return out


def cmd_verify_fock(args) -> int:
    from .realization import default_states, pseudo_random_monomial, verify_realization

    t0 = time.perf_counter()
    if args.window < 0:
        raise UsageError("--window must be >= 0")
    if args.states:
        states = load_states(args.states)
    else:
        states = default_states()
        if args.seed:
            states[-1] = pseudo_random_monomial(args.seed)
    params = fock_params(args)
    conv = {"e1_leading_term": args.e1_reading}
    res = verify_realization(args.window, states, params, conventions=conv, workers=args.workers)
    task = _task_echo(args) | {"kind": "verify-fock", "conventions": res["conventions"], "n_params": len(params)}
    doc = _report(task, res["checked"], res["violations"], t0)
    _emit(args, doc)
    return 1 if res["violations"] else 0


def cmd_report(args) -> int:
    """Quick combined run of every suite at desk scale."""
    from .families import ode_residual, family_elliptic_series, generating_function
    from .realization import verify_realization

    t0 = time.perf_counter()
    checked, bad = 0, []
    for which in (-1, -3):
        table = family_by_recursion(which, 47)
        for n in range(2, 26):
            checked += 1
            if family_closed_form_odd(which, n) != table[2 * n - 3]:
                bad.append({"suite": "families", "witness": [which, 2 * n - 3]})
    for which in (-4, -2):
        series = family_elliptic_series(which, 40)
        table = family_by_recursion(which, 40)
        for k in range(0, 41):
            checked += 1
            if series[k] != table[k]:
                bad.append({"suite": "elliptic", "witness": [which, k]})
    for which in FAMILIES:
        checked += 1
        if not ode_residual(generating_function(which, 30), which, 30).is_zero_to(30):
            bad.append({"suite": "ode", "witness": [which]})
    ring = DJKMRing(C)
    for k in range(-30, 31):
        checked += 1
        if ring.psi(k) != ring.psi_table(k):
            bad.append({"suite": "psi", "witness": [k]})
    n, b = _algebra_suites(args.window, C, args.workers, ("antisymmetry", "agreement", "jacobi"))
    checked, bad = checked + n, bad + b
    res = verify_realization(args.fock_window, workers=args.workers)
    checked += res["checked"]
    bad += [{"suite": "fock", **v} for v in res["violations"]]
    doc = _report(_task_echo(args) | {"kind": "report"}, checked, bad, t0)
    _emit(args, doc)
    return 1 if bad else 0


def snapshot_payload(args) -> dict:
    if args.target == "families":
        return family_by_recursion(args.which, args.kmax).to_json()
    if args.target == "psi":
        ring = DJKMRing(C)
        return {str(k): ring.psi_table(k).to_json(full=True) for k in range(-args.kmax, args.kmax + 1)}
    return bracket_table(args.window)


def cmd_snapshot(args) -> int:
    text = canonical_json(snapshot_payload(args))
    golden = Path(args.golden)
    if args.update:
        golden.parent.mkdir(parents=True, exist_ok=True)
        golden.write_text(text)
        print(f"wrote {golden}")
        return 0
    if not golden.exists():
        raise UsageError(f"golden file {golden} does not exist; pass --update to create it")
    old = golden.read_text()
    if old == text:
        print(f"match {golden}")
        return 0
    diff = list(difflib.unified_diff(old.splitlines(), text.splitlines(), "golden", "current", lineterm="", n=1))
    print(f"mismatch {golden}: {sum(1 for d in diff if d[:1] in '+-') - 2} changed lines")
    print("\n".join(diff[:40]))
    return 1


# -- argument parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="djkm", description="Exact computations in the DJKM algebra.")
    p.add_argument("--version", action="version", version=f"djkm {__version__}")
    sub = p.add_subparsers(dest="kind", required=True)

    def common(sp, workers=False, report=False):
        sp.add_argument("--config", help="flat key = value file supplying flag defaults")
        if workers:
            sp.add_argument("--workers", type=int, default=None, help="worker processes (default: $DJKM_WORKERS or 1)")
        if report:
            sp.add_argument("--report", help="also write the JSON report to this path")

    sp = sub.add_parser("families", help="table of a polynomial family")
    sp.add_argument("--which", type=int, choices=FAMILIES, required=True)
    sp.add_argument("--kmax", type=int, default=50)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    common(sp)
    sp.set_defaults(func=cmd_families)

    sp = sub.add_parser("reduce", help="class of f dt in the central part")
    sp.add_argument("form", help='monomial "t^k", "t^k,u", "t^k u dt" or ring element JSON')
    sp.add_argument("--c", default=None, help="specialize c to a rational p/q")
    sp.add_argument("--full", action="store_true", help="all five coordinates as coefficient arrays")
    common(sp)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("bracket", help="bracket of two basis vectors")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--c", default=None)
    sp.add_argument("--backend", choices=("closed", "kassel"), default="closed")
    common(sp)
    sp.set_defaults(func=cmd_bracket)

    sp = sub.add_parser("verify-algebra", help="Lie axioms and backend agreement")
    sp.add_argument("--window", type=int, default=6)
    sp.add_argument("--c", default=None)
    sp.add_argument(
        "--suites",
        type=lambda s: [x for x in s.split(",") if x],
        default=["antisymmetry", "jacobi", "agreement"],
        help="comma list from antisymmetry, jacobi, agreement",
    )
    common(sp, workers=True, report=True)
    sp.set_defaults(func=cmd_verify_algebra)

    sp = sub.add_parser("verify-fock", help="commutator checks of the free field realization")
    sp.add_argument("--window", type=int, default=3)
    sp.add_argument("--c0", type=_rational, action="append")
    sp.add_argument("--kappa0", type=_rational, default=None)
    sp.add_argument("--params", default=None, help='"lambda,mu,nu,varkappa"')
    sp.add_argument("--r", choices=("0", "1", "both"), default="both")
    sp.add_argument("--states", default=None, help="JSON file with a list of Fock states")
    sp.add_argument("--seed", type=int, default=0, help="seed of the pseudo-random suite state")
    sp.add_argument("--e1-reading", choices=("normal_ordered", "literal"), default="normal_ordered")
    common(sp, workers=True, report=True)
    sp.set_defaults(func=cmd_verify_fock)

    sp = sub.add_parser("report", help="every suite at desk scale")
    sp.add_argument("--window", type=int, default=4, help="algebra window")
    sp.add_argument("--fock-window", type=int, default=2)
    common(sp, workers=True, report=True)
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("snapshot", help="compare canonical output against a golden file")
    sp.add_argument("target", choices=("families", "psi", "brackets"))
    sp.add_argument("--golden", required=True)
    sp.add_argument("--update", action="store_true")
    sp.add_argument("--which", type=int, choices=FAMILIES, default=-3)
    sp.add_argument("--kmax", type=int, default=20)
    sp.add_argument("--window", type=int, default=2)
    common(sp)
    sp.set_defaults(func=cmd_snapshot)
    return p


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> dict:
    """Insert values from --config as defaults; explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    cp = configparser.ConfigParser()
    try:
        cp.read_string("[djkm]\n" + Path(known.config).read_text())
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from None
    return {k.replace("-", "_"): v for k, v in cp["djkm"].items()}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        defaults = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if defaults:
            sub = parser._subparsers._group_actions[0].choices[args.kind]
            explicit = {a.dest for a in sub._actions if any(o in argv for o in a.option_strings)}
            for key, raw in defaults.items():
                action = next((a for a in sub._actions if a.dest == key), None)
                if action is None:
                    raise UsageError(f"unknown config key {key!r} for {args.kind}")
                if key in explicit:
                    continue
                val = action.type(raw) if action.type else raw
                if action.dest == "c0":
                    val = [_rational(x) for x in raw.split(",")]
                setattr(args, key, val)
        return args.func(args)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"djkm: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
