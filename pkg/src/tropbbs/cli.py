"""Command-line front end.

Every failure prints one line ``error <CODE>: <message>`` on stderr and
exits with status 1 (usage errors exit with 2, as argparse does).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bbs, fixtures
from .analysis import analyze
from .bbs import parse_state
from .curve import corner_locus, curve_to_json, split_multiplicity
from .errors import TropBBSError, VerificationFailed
from .trop import TropPoly2, fmt_rational

__all__ = ["main", "parse_state", "run"]


def _q(x):
    return fmt_rational(x)


def _vec(v):
    return [_q(x) for x in v]


def _load(path: str):
    if path.startswith("fixture:"):
        return fixtures.load(path.split(":", 1)[1])
    return parse_state(Path(path).read_text())


def _emit(doc, fmt, text_lines):
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print("\n".join(text_lines))


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args):
    s = _load(args.state)
    states = bbs.trajectory(s, args.steps)
    if args.format == "json":
        doc = []
        for t, st in enumerate(states):
            Q = bbs.solve_Q(st)
            doc.append({"t": t, "W": [_vec(r) for r in st.W], "Q1": _vec(Q[0])})
        _emit(doc, "json", None)
    else:
        print("\n\n".join(bbs.render(st) for st in states))
    return 0


def cmd_period(args):
    s = _load(args.state)
    F = bbs.find_period(s, args.t_max)
    _emit({"F": F}, args.format, [str(F)])
    return 0


def cmd_spectral(args):
    from .spectral import newton_check, spectral_data

    s = _load(args.state)
    sd = spectral_data(s)
    if args.format == "json":
        doc = {
            "support": [[i, j, _q(c)] for (i, j), c in sorted(sd.charpoly_trop.coeffs.items())],
            "newton_check": newton_check(sd).ok,
        }
        if args.exact:
            doc["exact"] = [[c, i, j, k] for (i, j, k), c in sorted(sd.charpoly_exact.terms.items())]
            doc["q_scale"] = sd.scale
        _emit(doc, "json", None)
    else:
        sys.stdout.write(sd.charpoly_trop.to_text())
        if args.exact:
            print("# exact (coefficient x^i y^j q^k)")
            print(sd.charpoly_exact.to_text())
    return 0


def cmd_curve(args):
    if args.poly:
        p = TropPoly2.from_text(Path(args.state).read_text())
        g = split_multiplicity(corner_locus(p))
        doc = curve_to_json(g)
    else:
        a = analyze(_load(args.state))
        doc = curve_to_json(a.graph, a.special)
    print(json.dumps(doc, sort_keys=True, indent=2))
    return 0


def _analysis(args):
    s = _load(args.state)
    basis = fixtures.example2_basis if args.basis == "example2" else None
    return s, analyze(s, basis)


def _fc_doc(a):
    tv = a.vectors
    return {
        "genus": a.genus,
        "d": a.spectral.d,
        "F''": a.Fpp,
        "F'": a.Fp,
        "B": [_vec(r) for r in a.periods.B],
        "basis": [[[e, _q(x), _q(y)] for e, x, y in b] for b in a.periods.basis],
        "T": _vec(tv.T),
        "N": _vec(tv.N),
        "M": [_vec(m) for m in tv.M],
    }


def _fc_text(a):
    tv = a.vectors
    lines = [f"F'' = {a.Fpp}", f"F' = {a.Fp}", f"genus = {a.genus}", f"d = {a.spectral.d}"]
    lines.append("B = " + json.dumps([_vec(r) for r in a.periods.B]))
    lines.append("T = " + json.dumps(_vec(tv.T)))
    lines.append("N = " + json.dumps(_vec(tv.N)))
    for m, v in enumerate(tv.M, 1):
        lines.append(f"M{m} = " + json.dumps(_vec(v)))
    return lines


def cmd_fundamental_cycle(args):
    _, a = _analysis(args)
    _emit(_fc_doc(a), args.format, _fc_text(a))
    return 0


def cmd_verify(args):
    s, a = _analysis(args)
    F = bbs.find_period(s, args.t_max)
    ok = F % a.Fp == 0
    verdict = "PASS" if ok else "FAIL"
    doc = dict(_fc_doc(a), F=F, verdict=verdict, equal=F == a.Fp)
    _emit(doc, args.format, [f"F = {F}", f"F' = {a.Fp}", f"F'' = {a.Fpp}", f"verdict: {verdict} (F' divides F: {ok})"])
    if not ok:
        raise VerificationFailed(f"F'={a.Fp} does not divide F={F}")
    return 0


def cmd_oracle(args):
    from . import oracle

    s = _load(args.state)
    eps = sorted(set(args.eps or [0.05, 0.02]), reverse=True)
    k1 = 2 if s.A == s.B else 1
    checks = [oracle.det_identities_check(s, e, samples=args.samples, seed=args.seed, k1=k1) for e in eps]
    Q = bbs.solve_Q(s)
    grid = oracle.valuation_grid(s, eps, k1=k1)
    diff = max(abs(float(Q[n][m]) - grid[n][m]) for n in range(s.N) for m in range(s.M))
    ncls = bbs.critical_class_count(s)
    ok_val = diff <= args.tol
    ok_det = not any(c["failures"] for c in checks)
    doc = {
        "eps": eps,
        "k1": k1,
        "identities": checks,
        "valuation": {
            "extrapolated": [[round(v, 6) + 0.0 for v in r] for r in grid],
            "Q": [_vec(r) for r in Q],
            "max_abs_diff": diff,
            "tolerance": args.tol,
            "critical_classes": ncls,
            "ambiguous": ncls > 1,
        },
        "pass": ok_val and ok_det,
    }
    print(json.dumps(doc, sort_keys=True, indent=2))
    if not (ok_val and ok_det):
        raise VerificationFailed("oracle disagreement")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropbbs", description="Periodic 2D box-ball system tools.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, fmt=True):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("state", help="state file, or fixture:<name> (example1, example2, soliton)")
        if fmt:
            sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.set_defaults(func=fn)
        return sp

    sp = add("simulate", cmd_simulate, "print the state at t = 0..steps")
    sp.add_argument("--steps", type=int, default=1)
    sp = add("period", cmd_period, "least F with the state recurring")
    sp.add_argument("--t-max", type=int, default=500)
    sp = add("spectral", cmd_spectral, "tropical characteristic polynomial")
    sp.add_argument("--exact", action="store_true", help="also print the exact polynomial in x, y, q")
    sp = add("curve", cmd_curve, "tropical curve as JSON", fmt=False)
    sp.add_argument("--poly", action="store_true", help="input is an 'i j c' polynomial, not a state")
    for name, fn, help in (
        ("fundamental-cycle", cmd_fundamental_cycle, "F'', F', period matrix and translation vectors"),
        ("verify", cmd_verify, "compare F' with the simulated period"),
    ):
        sp = add(name, fn, help)
        sp.add_argument("--basis", choices=("tree", "example2"), default="tree")
        if name == "verify":
            sp.add_argument("--t-max", type=int, default=500)
    sp = add("oracle", cmd_oracle, "discrete-level checks as JSON", fmt=False)
    sp.add_argument("--eps", type=float, action="append", help="repeatable; default 0.05 and 0.02")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=0.05)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("steps", "t_max", "samples"):
        v = getattr(args, name, None)
        if v is not None and v < (0 if name == "steps" else 1):
            print(f"error USAGE: --{name.replace('_', '-')} out of range", file=sys.stderr)
            return 2
    if getattr(args, "eps", None):
        if any(not 0 < e <= 1 for e in args.eps):
            print("error USAGE: --eps must lie in (0, 1]", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except TropBBSError as exc:
        msg = str(exc).replace("\n", " ")
        print(f"error {exc.code}: {msg}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error IO: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())
