"""
Invariant suites shared by the ``verify`` subcommand and the test-suite.

Each suite walks a system (exhaustively, or over a seeded sample) and counts
passing and failing checks.  A failing check records a one-line reason; a
:class:`~klpar.errors.KLError` raised by a cross-checking routine counts as
a failure rather than aborting the suite.

>>> from klpar.coxeter import build_system
>>> res = run_suite("kl", build_system("A", 2))
>>> res.passed, res.failed
(25, 0)
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .coxeter import CoxeterSystem, Filtration
from .decomp import (chain_factorization, iq_decomposition, monotonicity_check,
                     parabolic_decomposition, r_factorization_check)
from .errors import ConfigurationError, KLError
from .hecke import _check_canonical, algebra
from .hypercube import (admissible_data, admissible_sets, closure_A, condition_chain, condition_incomparable,
                        condition_restriction, context, hypercube_Q, hypercube_r, reduce_B,
                        sigma_B, thmB_hypercube_sets)
from .laurent import ZERO

__all__ = ["SuiteResult", "SUITES", "run_suite", "run_suites", "suite_kl", "suite_iq",
           "suite_parabolic", "suite_factorization", "suite_hypercube"]

MAX_FAILURES_KEPT = 20


@dataclass
class SuiteResult:
    name: str
    system: str
    passed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, what: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES_KEPT:
                self.failures.append(what)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{self.name:<14} {self.system:<10} {status}  passed={self.passed} failed={self.failed}"


def _pairs(W: CoxeterSystem) -> Iterator[tuple[int, int]]:
    for w in range(len(W)):
        for x in W.below(w):
            yield x, w


def _maybe_sample(items: list, samples: int | None, seed: int) -> list:
    if samples is None or samples >= len(items):
        return items
    return random.Random(seed).sample(items, samples)


def _guard(res: SuiteResult, what: str, fn: Callable[[], bool]) -> None:
    try:
        ok = fn()
    except KLError as exc:
        res.record(False, f"{what}: {exc}")
        return
    res.record(bool(ok), what)


# ---------------------------------------------------------------------------

def suite_kl(W: CoxeterSystem, samples: int | None = None, seed: int = 0) -> SuiteResult:
    """Canonical basis is bar-invariant / unitriangular, and ``d(P̌) = Σ Ř P̌``."""
    res = SuiteResult("kl", W.name)
    H = algebra(W)
    kl, R = H.kl_table(), H.r_table()
    for w in range(len(W)):
        c = H.canonical(w, verify=False)
        _guard(res, f"c_{W.format(w)}", lambda: _check_canonical(H, w, c) is None)
    for x, w in _maybe_sample(list(_pairs(W)), samples, seed):
        acc = ZERO
        for k in W.interval(x, w):
            acc = acc + R.unnormalized(x, k) * kl.unnormalized(k, w)
        res.record(acc == kl.unnormalized(x, w).bar(), f"bar identity at ({W.format(x)}, {W.format(w)})")
    return res


def suite_iq(W: CoxeterSystem, samples: int | None = None, seed: int = 0) -> SuiteResult:
    """``Ǐ^τ + Q̌^τ = P̌^∂`` with nonnegative parts; monotonicity on weak covers."""
    res = SuiteResult("iq", W.name)
    triples = [(x, w, t) for x, w in _pairs(W) for t in range(len(W))]
    for x, w, t in _maybe_sample(triples, samples, seed):
        _guard(res, f"I/Q at ({W.format(x)}, {W.format(w)}, {W.format(t)})",
               lambda: iq_decomposition(W, x, w, t) is not None)
    pairs = list(_pairs(W))
    if samples is not None:
        pairs = _maybe_sample(pairs, max(1, samples // max(1, len(W))), seed + 1)
    for t in range(len(W)):
        for s in W.generators:
            st = W.mul(s, t)
            if W.length[st] <= W.length[t]:
                continue
            for x, w in pairs:
                res.record(monotonicity_check(W, x, w, t, st),
                           f"monotonicity at ({W.format(x)}, {W.format(w)}, {W.format(t)} -> {W.format(st)})")
    return res


def suite_parabolic(W: CoxeterSystem, samples: int | None = None, seed: int = 0) -> SuiteResult:
    """Three routes for ``I^J / Q^J``, ``γ'`` solve, and ``Σ P γ = P``."""
    res = SuiteResult("parabolic", W.name)
    H = algebra(W)
    kl = H.kl_table()
    items = [(x, w, J) for J in W.all_subsets() for x, w in _pairs(W)]
    for x, w, J in _maybe_sample(items, samples, seed):
        tag = f"({W.format(x)}, {W.format(w)}, J={sorted(J)})"
        _guard(res, f"routes at {tag}", lambda: parabolic_decomposition(W, x, w, J) is not None)
        P = W.parabolic(J)
        xJ, rep = P.part[x], P.rep[x]
        acc = ZERO
        for k in P.subgroup_elements:
            if W.bruhat_leq(xJ, k):
                acc = acc + kl.normalized(xJ, k) * H.gamma(w, J).get(W.mul(k, rep), ZERO).shift(
                    W.length[W.mul(k, rep)] - W.length[w])
        res.record(acc == kl.normalized(x, w), f"Σ P γ = P at {tag}")
    return res


def suite_factorization(W: CoxeterSystem, samples: int | None = None, seed: int = 0) -> SuiteResult:
    """The three R-factorizations for every ``J`` and the chain factorization."""
    res = SuiteResult("factorization", W.name)
    R = algebra(W).r_table()
    everything = [(x, w) for w in range(len(W)) for x in range(len(W))]
    items = [(x, w, J) for J in W.all_subsets() for x, w in everything]
    for x, w, J in _maybe_sample(items, samples, seed):
        flags = r_factorization_check(W, x, w, J)
        for i, ok in enumerate(flags, start=1):
            res.record(ok, f"identity {i} at ({W.format(x)}, {W.format(w)}, J={sorted(J)})")
    F = Filtration.full_flag(W)
    for x, w in _maybe_sample(everything, samples, seed):
        res.record(chain_factorization(W, F, x, w) == R.normalized(x, w),
                   f"chain at ({W.format(x)}, {W.format(w)})")
    return res


def suite_hypercube(W: CoxeterSystem, samples: int | None = None, seed: int = 0,
                    with_q: bool = True, combinatorics: bool = True, pairs: bool = True) -> SuiteResult:
    """Combinatorial laws and the four-way ``R_J`` agreement (type A only)."""
    res = SuiteResult("hypercube", W.name)
    if W.family != "A":
        raise ConfigurationError("the hypercube suite needs a type A system")
    if combinatorics:
        _hypercube_laws(W, res)
    if pairs:
        _hypercube_pairs(W, res, samples, seed, with_q)
    return res


def _hypercube_laws(W: CoxeterSystem, res: SuiteResult) -> None:
    for s in range(len(W)):
        ctx = context(W, s)
        adm = set(admissible_sets(W, ctx))
        for A in ctx.P:
            tag = f"({W.format(s)}, {sorted(A)})"
            res.record(condition_chain(ctx, A) == condition_restriction(ctx, A) == condition_incomparable(ctx, A),
                       f"equivalent conditions at {tag}")
            red, clo = reduce_B(W, ctx, A), closure_A(W, ctx, A)
            res.record(A <= closure_A(W, ctx, red) and reduce_B(W, ctx, clo) <= A
                       and reduce_B(W, ctx, red) == red and closure_A(W, ctx, clo) == clo,
                       f"Galois laws at {tag}")
            res.record(red in adm, f"B_σ admissible at {tag}")
            if A in adm:
                fiber = {B for B in ctx.P if reduce_B(W, ctx, B) == A}
                res.record(fiber == {B for B in ctx.P if A <= B <= clo}, f"fiber at {tag}")
            if A:
                _guard(res, f"σ^B is the join at {tag}", lambda: sigma_B(W, ctx, A) is not None)
        # sigma_A asserts the length identity for each admissible set
        _guard(res, f"length identity at {W.format(s)}", lambda: admissible_data(W, ctx) is not None)


def _hypercube_pairs(W: CoxeterSystem, res: SuiteResult, samples: int | None, seed: int,
                     with_q: bool) -> None:
    pairs = [(s, w) for s in range(len(W)) for w in range(len(W))]
    for s, w in _maybe_sample(pairs, samples, seed):
        tag = f"({W.format(s)}, {W.format(w)})"
        _guard(res, f"R_J agreement at {tag}", lambda: hypercube_r(W, s, w) is not None)
        _guard(res, f"P(σ,ω) sum at {tag}", lambda: thmB_hypercube_sets(W, s, w) is not None)
        if with_q and W.bruhat_leq(s, w):
            _guard(res, f"hypercube Q^J at {tag}", lambda: hypercube_Q(W, s, w) is not None)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "kl": suite_kl,
    "iq": suite_iq,
    "parabolic": suite_parabolic,
    "hypercube": suite_hypercube,
    "factorization": suite_factorization,
}


def run_suite(name: str, W: CoxeterSystem, samples: int | None = None, seed: int = 0) -> SuiteResult:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ConfigurationError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'") from None
    return fn(W, samples=samples, seed=seed)


def run_suites(names: list[str], W: CoxeterSystem, samples: int | None = None, seed: int = 0) -> list[SuiteResult]:
    """Run suites in order; ``all`` expands to every suite applicable to ``W``."""
    if "all" in names:
        names = [n for n in SUITES if n != "hypercube" or W.family == "A"]
    return [run_suite(n, W, samples, seed) for n in names]
