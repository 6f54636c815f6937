"""
Command-line front end.

    klpar group      --family A --rank 4
    klpar kl         --family A --rank 4 --sigma 1324 --omega 3412
    klpar r          --family B --rank 3 --sigma e --omega w:1,2,3
    klpar jrel-r     --family A --rank 3 --sigma 123 --omega 321 --j 1
    klpar decompose  --family A --rank 3 --sigma e --omega 321 --j 1
    klpar hypercube  --rank 4 --sigma 1234 --omega 4231
    klpar verify     --suite all --family A --rank 4
    klpar invariance --max-n 4
    klpar export     --table kl --family A --rank 4 --format csv

For type A, ``--rank N`` selects the symmetric group S_N; for B/D it is the
Coxeter rank and for I2 it is m.  Normalized polynomials (P, R, P^∂, I, Q,
γ') print in q; unnormalized ones (marked with a trailing "check") print in v.

Exit status: 0 success, 1 a verification found a failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .coxeter import CoxeterSystem, build_system
from .decomp import p_derived, parabolic_decomposition
from .errors import InternalConsistencyError, KLError
from .hecke import algebra
from .hypercube import hypercube_J, hypercube_Q, hypercube_r
from .invariance import default_budget, invariance_survey
from .laurent import ZERO, format_q, to_json
from .verify import SUITES, SuiteResult, run_suite

CSV_HELP = "CSV columns: sigma, omega, poly_q (normalized polynomial in q, e.g. '1 + q')."


class UsageError(Exception):
    """Bad input detected after argument parsing; maps to exit status 2."""


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _system(args) -> CoxeterSystem:
    fam = args.family.upper()
    rank = args.rank
    if fam == "A":
        if rank < 2:
            raise UsageError("type A needs --rank N >= 2 (the group S_N)")
        rank -= 1
    return build_system(fam, rank)


def _elem(W: CoxeterSystem, text: str, what: str) -> int:
    try:
        return W.parse(text)
    except KLError as exc:
        raise UsageError(f"--{what}: {exc}") from None


def _subset(W: CoxeterSystem, raw: list[str] | None) -> frozenset[int]:
    labels = set()
    for chunk in raw or []:
        for part in chunk.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                labels.add(int(part))
            except ValueError:
                raise UsageError(f"--j: {part!r} is not a generator label") from None
    bad = sorted(labels - set(W.labels))
    if bad:
        raise UsageError(f"--j: generator labels {bad} are not in 1..{W.rank}")
    return frozenset(labels)


def _require_leq(W: CoxeterSystem, x: int, w: int) -> None:
    if not W.bruhat_leq(x, w):
        raise UsageError(f"precondition sigma <= omega violated: {W.format(x)} is not below {W.format(w)}")


def _emit(args, text_lines: list[str], payload: dict) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _qjson(p) -> dict:
    return to_json(p, "q")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_group(args) -> int:
    W = _system(args)
    refl = [W.format(t) for t in W.reflections]
    lines = [
        f"system: {W.name}",
        f"order: {len(W)}",
        f"longest element: {W.format(W.longest)} (length {W.length[W.longest]})",
        f"reflections ({len(refl)}): {' '.join(refl)}",
    ]
    _emit(args, lines, {"system": W.name, "order": len(W), "longest": W.format(W.longest),
                        "longest_length": W.length[W.longest], "reflections": refl})
    return 0


def cmd_kl(args) -> int:
    W = _system(args)
    x, w = _elem(W, args.sigma, "sigma"), _elem(W, args.omega, "omega")
    kl = algebra(W).kl_table()
    P = kl.normalized(x, w)
    lines = [f"P = {format_q(P)}", f"P check = {kl.unnormalized(x, w)}"]
    payload = {"sigma": W.format(x), "omega": W.format(w), "P": _qjson(P),
               "P_check": to_json(kl.unnormalized(x, w))}
    if W.bruhat_leq(x, w):
        pd = p_derived(W, x, w)
        lines.append(f"P^∂ = {format_q(pd.normalized)}")
        payload["P_derived"] = _qjson(pd.normalized)
    else:
        lines.append("P^∂ undefined (sigma is not below omega)")
        payload["P_derived"] = None
    _emit(args, lines, payload)
    return 0


def cmd_r(args) -> int:
    W = _system(args)
    x, w = _elem(W, args.sigma, "sigma"), _elem(W, args.omega, "omega")
    R = algebra(W).r_table()
    lines = [f"R = {format_q(R.normalized(x, w))}", f"R check = {R.unnormalized(x, w)}"]
    _emit(args, lines, {"sigma": W.format(x), "omega": W.format(w),
                        "R": _qjson(R.normalized(x, w)), "R_check": to_json(R.unnormalized(x, w))})
    return 0


def _inverse_relation(W: CoxeterSystem, x: int, w: int, J: frozenset[int]):
    """``Ř_{x,w,J}`` from the inverse R-factorization (second route)."""
    H = algebra(W)
    R = H.r_table()
    P = W.parabolic(J)
    xJ, rep = P.part[x], P.rep[x]
    acc = ZERO
    for k in P.subgroup_elements:
        y = W.mul(k, rep)
        if W.bruhat_leq(x, y) and W.bruhat_leq(y, w):
            acc = acc + R.unnormalized(xJ, k).bar() * R.unnormalized(y, w)
    return acc


def cmd_jrel_r(args) -> int:
    W = _system(args)
    x, w = _elem(W, args.sigma, "sigma"), _elem(W, args.omega, "omega")
    J = _subset(W, args.j)
    rc, r = algebra(W).j_relative_r(x, w, J)
    routes = {"coefficient": rc, "inverse factorization": _inverse_relation(W, x, w, J)}
    if W.family == "A" and J == hypercube_J(W):
        routes["hypercube"] = hypercube_r(W, x, w, check=False).R_check
    agree = len(set(routes.values())) == 1
    lines = [f"R_J = {format_q(r)}", f"R_J check = {rc}",
             f"routes ({', '.join(routes)}): {'agree' if agree else 'DISAGREE'}"]
    _emit(args, lines, {"sigma": W.format(x), "omega": W.format(w), "J": sorted(J),
                        "R_J": _qjson(r), "R_J_check": to_json(rc),
                        "routes": sorted(routes), "routes_agree": agree})
    return 0 if agree else 1


def cmd_decompose(args) -> int:
    W = _system(args)
    x, w = _elem(W, args.sigma, "sigma"), _elem(W, args.omega, "omega")
    _require_leq(W, x, w)
    J = _subset(W, args.j)
    d = parabolic_decomposition(W, x, w, J)
    gp = {W.format(k): g for k, g in d.gamma_prime.items() if g}
    lines = [
        f"P^∂ = {format_q(d.p_derived)}",
        f"I^J = {format_q(d.I)}",
        f"Q^J = {format_q(d.Q)}",
        "γ' = " + (", ".join(f"{k}: {format_q(g)}" for k, g in gp.items()) or "0"),
        "routes: pairing, γ-sum and R_J agree",
    ]
    _emit(args, lines, {"sigma": W.format(x), "omega": W.format(w), "J": sorted(J),
                        "P_derived": _qjson(d.p_derived), "I_J": _qjson(d.I), "Q_J": _qjson(d.Q),
                        "gamma_prime": {k: _qjson(g) for k, g in gp.items()}})
    return 0


def cmd_hypercube(args) -> int:
    if args.family.upper() != "A":
        raise UsageError("hypercube is only available for type A")
    W = _system(args)
    x, w = _elem(W, args.sigma, "sigma"), _elem(W, args.omega, "omega")
    hr = hypercube_r(W, x, w)
    q = hypercube_Q(W, x, w) if W.bruhat_leq(x, w) else None
    payload = {
        "sigma": W.format(x),
        "omega": W.format(w),
        "admissible_A": sorted(hr.admissible_A) if hr.admissible_A is not None else None,
        "R_J": format_q(hr.R),
        "contributing_B": [sorted(B) for B in hr.contributing_B],
        "Q_J": format_q(q) if q is not None else None,
    }
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for k in ("sigma", "omega", "admissible_A", "R_J", "contributing_B", "Q_J"):
            print(f"{k}: {payload[k]}")
    return 0


def _run_one(task: tuple) -> SuiteResult:
    fam, rank, name, samples, seed = task
    return run_suite(name, build_system(fam, rank), samples, seed)


def cmd_verify(args) -> int:
    names = args.suite or ["all"]
    fam = args.family.upper()
    if args.max_rank is not None:
        start = 2 if fam == "A" else {"B": 2, "D": 2, "I2": 3}.get(fam, 1)
        ranks = list(range(start, args.max_rank + 1))
    else:
        ranks = [args.rank]
    if "hypercube" in names and fam != "A":
        raise UsageError("--suite hypercube needs --family A")
    tasks = []
    for rank in ranks:
        W = _system(argparse.Namespace(family=fam, rank=rank))
        suite_names = names if "all" not in names else [n for n in SUITES if n != "hypercube" or W.family == "A"]
        tasks.extend((fam, W.param, n, args.samples, args.seed) for n in suite_names)
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            out = list(ex.map(_run_one, tasks))
    else:
        out = [_run_one(t) for t in tasks]
    failed = 0
    for res in out:
        failed += res.failed
        print(res.line())
        for f in res.failures:
            print(f"  - {f}")
    print(f"total: {sum(r.passed for r in out)} passed, {failed} failed")
    return 1 if failed else 0


def cmd_invariance(args) -> int:
    conj = ["R", "weak"] if args.conjecture == "both" else [args.conjecture]
    budget = args.budget if args.budget is not None else default_budget()
    res = invariance_survey(args.max_n, args.sampler, args.seed, args.samples, conj,
                            budget, args.jobs, args.min_n)
    payload = {k: v.as_dict() for k, v in res.items()}
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 1 if any(v.counterexamples for v in res.values()) else 0


def cmd_export(args) -> int:
    W = _system(args)
    H = algebra(W)
    rows = []
    if args.table == "kl":
        kl = H.kl_table()
        for w in range(len(W)):
            for x in W.below(w):
                rows.append((x, w, kl.normalized(x, w)))
    elif args.table == "r":
        R = H.r_table()
        for w in range(len(W)):
            for x in W.below(w):
                rows.append((x, w, R.normalized(x, w)))
    else:
        J = _subset(W, args.j)
        for w in range(len(W)):
            for x, p in sorted(H.jrel_column(w, J).items()):
                rows.append((x, w, p.shift(W.length[x] - W.length[w])))
    if args.format == "json":
        text = json.dumps([{"sigma": W.format(x), "omega": W.format(w), "poly": to_json(p, "q")}
                           for x, w, p in rows], indent=1)
    else:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["sigma", "omega", "poly_q"])
        for x, w, p in rows:
            wr.writerow([W.format(x), W.format(w), format_q(p)])
        text = buf.getvalue().rstrip("\n")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="klpar", description="Kazhdan-Lusztig polynomials and their parabolic decompositions.")
    sub = p.add_subparsers(dest="command", required=True)

    def system_args(sp, default_family="A", default_rank=None):
        sp.add_argument("--family", default=default_family, choices=["A", "B", "D", "I2", "a", "b", "d", "i2"],
                        help="Coxeter type (default: %(default)s)")
        sp.add_argument("--rank", type=int, required=default_rank is None, default=default_rank,
                        help="S_N for type A; Coxeter rank for B/D; m for I2")

    def pair_args(sp):
        sp.add_argument("--sigma", required=True, help="element: one-line notation, 'e', or 'w:1,2,1'")
        sp.add_argument("--omega", required=True)

    def fmt(sp, choices=("text", "json")):
        sp.add_argument("--format", default="text", choices=list(choices))

    sp = sub.add_parser("group", help="order, longest element and reflections")
    system_args(sp); fmt(sp)
    sp.set_defaults(func=cmd_group)

    sp = sub.add_parser("kl", help="KL polynomial P, its unnormalized form and P^∂")
    system_args(sp); pair_args(sp); fmt(sp)
    sp.set_defaults(func=cmd_kl)

    sp = sub.add_parser("r", help="R-polynomial")
    system_args(sp); pair_args(sp); fmt(sp)
    sp.set_defaults(func=cmd_r)

    sp = sub.add_parser("jrel-r", help="J-relative R-polynomial, computed along independent routes")
    system_args(sp); pair_args(sp); fmt(sp)
    sp.add_argument("--j", action="append", help="generator labels, repeatable or comma separated")
    sp.set_defaults(func=cmd_jrel_r)

    sp = sub.add_parser("decompose", help="P^∂ = I^J + Q^J with γ'")
    system_args(sp); pair_args(sp); fmt(sp)
    sp.add_argument("--j", action="append", help="generator labels, repeatable or comma separated")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("hypercube", help="hypercube data for S_N (J = {s_1..s_{N-2}})")
    system_args(sp); pair_args(sp); fmt(sp, ("json", "text"))
    sp.set_defaults(func=cmd_hypercube)

    sp = sub.add_parser("verify", help="run invariant suites and print pass/fail counts")
    system_args(sp, default_rank=4)
    sp.add_argument("--suite", action="append", choices=sorted(SUITES) + ["all"])
    sp.add_argument("--max-rank", type=int, help="run every rank up to this one instead of --rank")
    sp.add_argument("--samples", type=int, help="sample this many items per check instead of all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes (default: all cores)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("invariance", help="survey relative/filtered combinatorial invariance in S_n")
    sp.add_argument("--max-n", type=int, default=4)
    sp.add_argument("--min-n", type=int, default=2)
    sp.add_argument("--sampler", choices=["exhaustive", "sample"], default="exhaustive")
    sp.add_argument("--samples", type=int, default=200, help="intervals per n when sampling")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--conjecture", choices=["R", "weak", "both"], default="both")
    sp.add_argument("--budget", type=int, help="search nodes per isomorphism (env KLP_BUDGET)")
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sp.set_defaults(func=cmd_invariance)

    sp = sub.add_parser("export", help="export a table as CSV or JSON", epilog=CSV_HELP)
    system_args(sp)
    sp.add_argument("--table", choices=["kl", "r", "jrel"], default="kl")
    sp.add_argument("--j", action="append", help="J for --table jrel")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--output", "-o", help="write to this file instead of stdout")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "family"):
        args.family = args.family.upper()
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"klpar {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except InternalConsistencyError as exc:
        print(f"klpar {args.command}: verification failed: {exc}", file=sys.stderr)
        return 1
    except KLError as exc:
        print(f"klpar {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
