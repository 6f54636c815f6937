"""
Hypercube combinatorics for ``S_n`` with ``J = {s_1, ..., s_{n-2}}``.

For a permutation ``σ`` and ``t_i = (i, n)``:

* ``D(σ) = {i < n : σ^{-1}(i) < σ^{-1}(n)}``, the indices with ``σ < t_i σ``;
* ``P(σ)`` is the power set of ``D(σ)``;
* ``S(σ) ⊆ P(σ)`` holds the *admissible* sets ``A = {i_1 < ... < i_k}`` with
  ``σ^{-1}(i_k) < ... < σ^{-1}(i_1) < σ^{-1}(n)``;
* ``σ^A = (i_1, ..., i_k, n) σ``, and ``σ^B := σ^{B_σ}`` for any ``B`` in ``P(σ)``.

Sets of indices are frozensets of 1-based integers.  Permutations are
element ids of the type-A system ``build_system("A", n - 1)``.

>>> from klpar.coxeter import build_system
>>> from klpar.laurent import format_q
>>> W = build_system("A", 2)
>>> e = W.identity
>>> sorted(sorted(A) for A in admissible_sets(W, e))
[[], [1], [2]]
>>> W.format(sigma_A(W, e, {1}))
'321'
>>> hr = hypercube_r(W, e, W.longest)
>>> format_q(hr.R), [sorted(B) for B in hr.contributing_B]
('-q + q^2', [[1], [1, 2]])
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .coxeter import CoxeterSystem
from .decomp import parabolic_decomposition
from .errors import (InternalConsistencyError, MalformedInputError, PreconditionError,
                     UnsupportedOperationError)
from .hecke import algebra
from .laurent import ALPHA, ONE, Q, ZERO, LaurentPoly, exact_divide

__all__ = [
    "HypercubeContext", "AdmissibleSet", "HypercubeR", "context", "D_set",
    "P_sets", "reduce_B", "closure_A", "admissible_sets", "is_admissible",
    "condition_chain", "condition_restriction", "condition_incomparable",
    "sigma_A", "sigma_B", "admissible_data", "hypercube_J", "hypercube_r", "hypercube_Q",
    "thmB_hypercube_sets",
]

Indices = frozenset[int]


@dataclass(frozen=True)
class HypercubeContext:
    """``σ`` together with ``D(σ)``; ``t[i]`` is the id of ``(i, n)``."""
    W: CoxeterSystem
    sigma: int
    n: int
    inv: tuple[int, ...]  # inv[i] = σ^{-1}(i), 1-based, inv[0] unused
    D: Indices
    t: dict[int, int] = field(repr=False)

    def pos(self, i: int) -> int:
        return self.inv[i]

    @property
    def P(self) -> list[Indices]:
        """All ``2^{|D|}`` subsets of ``D(σ)``, ordered by bitmask."""
        Ds = sorted(self.D)
        return [frozenset(i for b, i in enumerate(Ds) if mask >> b & 1)
                for mask in range(1 << len(Ds))]


@dataclass(frozen=True)
class AdmissibleSet:
    A: tuple[int, ...]
    closure: Indices
    target: int


@dataclass
class HypercubeR:
    sigma: int
    omega: int
    admissible_A: Indices | None
    R_check: LaurentPoly
    R: LaurentPoly
    contributing_B: list[Indices]


def _require_A(W: CoxeterSystem) -> None:
    if W.family != "A":
        raise UnsupportedOperationError("hypercube formulas are only available for type A")


def context(W: CoxeterSystem, sigma: int) -> HypercubeContext:
    """Build the context for ``σ``; cross-checks ``D(σ)`` against Bruhat order."""
    _require_A(W)
    n = W.n
    p = W.perm(sigma)
    inv = [0] * (n + 1)
    for pos, val in enumerate(p, start=1):
        inv[val] = pos
    t = {i: W.transposition(i, n) for i in range(1, n)}
    D = frozenset(i for i in range(1, n) if inv[i] < inv[n])
    by_order = frozenset(i for i in range(1, n)
                         if W.bruhat_leq(sigma, W.mul(t[i], sigma)) and W.mul(t[i], sigma) != sigma)
    if D != by_order:
        raise InternalConsistencyError(f"D({W.format(sigma)}) disagrees with Bruhat order")
    return HypercubeContext(W, sigma, n, tuple(inv), D, t)


def _ctx(W: CoxeterSystem, sigma: int | HypercubeContext) -> HypercubeContext:
    return sigma if isinstance(sigma, HypercubeContext) else context(W, sigma)


def _subset_of_D(ctx: HypercubeContext, B: Iterable[int]) -> Indices:
    B = frozenset(B)
    if not B <= ctx.D:
        raise PreconditionError(f"{sorted(B)} is not a subset of D(σ) = {sorted(ctx.D)}")
    return B


def D_set(W: CoxeterSystem, sigma: int) -> Indices:
    return context(W, sigma).D


def P_sets(W: CoxeterSystem, sigma: int) -> list[Indices]:
    return context(W, sigma).P


def reduce_B(W: CoxeterSystem, sigma: int | HypercubeContext, B: Iterable[int]) -> Indices:
    """
    ``B_σ``: greedily pick the smallest index, then repeatedly the smallest
    larger index whose position under ``σ^{-1}`` is further left.
    """
    ctx = _ctx(W, sigma)
    B = _subset_of_D(ctx, B)
    out: list[int] = []
    for i in sorted(B):
        if not out or ctx.pos(i) < ctx.pos(out[-1]):
            out.append(i)
    return frozenset(out)


def closure_A(W: CoxeterSystem, sigma: int | HypercubeContext, A: Iterable[int]) -> Indices:
    """``A^σ = {j < n : ∃ i ∈ A, i <= j, σ^{-1}(i) <= σ^{-1}(j) <= σ^{-1}(n)}``."""
    ctx = _ctx(W, sigma)
    A = _subset_of_D(ctx, A)
    pn = ctx.pos(ctx.n)
    return frozenset(j for j in range(1, ctx.n)
                     if any(i <= j and ctx.pos(i) <= ctx.pos(j) <= pn for i in A))


def condition_restriction(ctx: HypercubeContext, A: Iterable[int]) -> bool:
    """``σ^{-1}(i_k) < ... < σ^{-1}(i_1) < σ^{-1}(n)`` for ``A = {i_1 < ... < i_k}``."""
    pos = [ctx.pos(i) for i in sorted(A, reverse=True)] + [ctx.pos(ctx.n)]
    return all(a < b for a, b in zip(pos, pos[1:]))


def condition_chain(ctx: HypercubeContext, A: Iterable[int]) -> bool:
    """``σ < t_{i_1}σ < t_{i_2}t_{i_1}σ < ...`` in Bruhat order."""
    W = ctx.W
    cur = ctx.sigma
    for i in sorted(A):
        nxt = W.mul(ctx.t[i], cur)
        if W.length[nxt] <= W.length[cur] or not W.bruhat_leq(cur, nxt):
            return False
        cur = nxt
    return True


def condition_incomparable(ctx: HypercubeContext, A: Iterable[int]) -> bool:
    """``σ < t_iσ`` for each ``i`` and the ``t_iσ`` are pairwise incomparable."""
    W = ctx.W
    ups = []
    for i in A:
        u = W.mul(ctx.t[i], ctx.sigma)
        if W.length[u] <= W.length[ctx.sigma]:
            return False
        ups.append(u)
    return not any(W.bruhat_leq(a, b) for a, b in itertools.permutations(ups, 2))


def is_admissible(W: CoxeterSystem, sigma: int | HypercubeContext, A: Iterable[int]) -> bool:
    ctx = _ctx(W, sigma)
    return frozenset(A) <= ctx.D and condition_restriction(ctx, A)


def admissible_sets(W: CoxeterSystem, sigma: int | HypercubeContext) -> list[Indices]:
    """``S(σ)`` (always containing the empty set), in bitmask order over ``D(σ)``."""
    ctx = _ctx(W, sigma)
    return [A for A in ctx.P if condition_restriction(ctx, A)]


def sigma_A(W: CoxeterSystem, sigma: int | HypercubeContext, A: Iterable[int]) -> int:
    """``(i_1, ..., i_k, n) σ`` for admissible ``A``; length identity is asserted."""
    ctx = _ctx(W, sigma)
    A = frozenset(A)
    if not is_admissible(W, ctx, A):
        raise PreconditionError(f"{sorted(A)} is not admissible for {W.format(ctx.sigma)}")
    out = ctx.sigma
    for i in sorted(A):
        out = W.mul(ctx.t[i], out)
    gained = W.length[out] - W.length[ctx.sigma]
    if gained != 2 * len(closure_A(W, ctx, A)) - len(A):
        raise InternalConsistencyError(f"length identity fails for σ={W.format(ctx.sigma)}, A={sorted(A)}")
    return out


def admissible_data(W: CoxeterSystem, sigma: int | HypercubeContext) -> list[AdmissibleSet]:
    """``S(σ)`` with each set's closure ``A^σ`` and target ``σ^A``."""
    ctx = _ctx(W, sigma)
    return [AdmissibleSet(tuple(sorted(A)), closure_A(W, ctx, A), sigma_A(W, ctx, A))
            for A in admissible_sets(W, ctx)]


def sigma_B(W: CoxeterSystem, sigma: int | HypercubeContext, B: Iterable[int]) -> int:
    """``σ^B = σ^{B_σ}``, checked against the Bruhat join of ``{t_i σ}``."""
    ctx = _ctx(W, sigma)
    B = frozenset(B)
    via_reduce = sigma_A(W, ctx, reduce_B(W, ctx, B))
    via_join = _join_with_sigma(ctx, B)
    if via_reduce != via_join:
        raise InternalConsistencyError(
            f"σ^B != join for σ={W.format(ctx.sigma)}, B={sorted(B)}")
    return via_reduce


def _join_with_sigma(ctx: HypercubeContext, B: Iterable[int]) -> int | None:
    # join({σ}) = σ for empty B; for nonempty B the σ term is redundant
    return ctx.W.bruhat_join([ctx.sigma] + [ctx.W.mul(ctx.t[i], ctx.sigma) for i in B])


def hypercube_J(W: CoxeterSystem) -> frozenset[int]:
    _require_A(W)
    return frozenset(range(1, W.n - 1))


def hypercube_r(W: CoxeterSystem, sigma: int, omega: int, check: bool = True) -> HypercubeR:
    """
    ``(Ř_{σ,ω,J}, R_{σ,ω,J})`` from the admissible sets and from the
    ``(q-1)^{|B|}`` sum; with ``check`` both are compared with each other
    and with the Hecke-algebra computation.
    """
    ctx = context(W, sigma)
    hit = None
    for A in admissible_sets(W, ctx):
        if sigma_A(W, ctx, A) == omega:
            hit = A
            break
    r_check = ALPHA ** len(hit) if hit is not None else ZERO
    contributing = [B for B in ctx.P if sigma_B(W, ctx, B) == omega]
    r = ZERO
    for B in contributing:
        r = r + (Q - ONE) ** len(B)
    out = HypercubeR(sigma, omega, hit, r_check, r, contributing)
    if check:
        L = W.length
        if r_check.shift(L[sigma] - L[omega]) != r:
            raise InternalConsistencyError(
                f"hypercube Ř and R disagree at ({W.format(sigma)}, {W.format(omega)})")
        alg = algebra(W).j_relative_r(sigma, omega, hypercube_J(W))
        if alg != (r_check, r):
            raise InternalConsistencyError(
                f"hypercube R_J != algebraic R_J at ({W.format(sigma)}, {W.format(omega)})")
    return out


def hypercube_Q(W: CoxeterSystem, sigma: int, omega: int, check: bool = True) -> LaurentPoly:
    """``Q^J_{σ,ω}`` as the hypercube sum over nonempty ``B`` in ``P(σ)``."""
    if not W.bruhat_leq(sigma, omega):
        raise PreconditionError(f"{W.format(sigma)} is not below {W.format(omega)}")
    ctx = context(W, sigma)
    kl = algebra(W).kl_table()
    qinv_minus_one = Q.bar() - ONE
    acc = ZERO
    for B in ctx.P:
        if B:
            acc = acc + qinv_minus_one ** len(B) * kl.normalized(sigma_B(W, ctx, B), omega).bar()
    L = W.length
    try:
        res = exact_divide(acc.shift(2 * (L[sigma] - L[omega])), ONE - Q)
    except MalformedInputError as exc:
        raise InternalConsistencyError("(1-q) does not divide the hypercube sum") from exc
    if check:
        other = parabolic_decomposition(W, sigma, omega, hypercube_J(W)).Q
        if other != res:
            raise InternalConsistencyError(
                f"hypercube Q^J ({res}) != parabolic Q^J ({other}) at ({W.format(sigma)}, {W.format(omega)})")
    return res


def thmB_hypercube_sets(W: CoxeterSystem, sigma: int, omega: int, check: bool = True) -> list[Indices]:
    """
    ``P(σ, ω)``: all ``B ⊆ {1..n-1}`` with ``σ < t_iσ`` for ``i`` in ``B`` and
    ``join({σ} ∪ {t_iσ}) = ω``.  With ``check``, the ``(q-1)^{|B|}`` sum is
    compared with ``R_{σ,ω,J}`` and the family with ``{B : σ^B = ω}``.
    """
    ctx = context(W, sigma)
    out = [B for B in ctx.P if _join_with_sigma(ctx, B) == omega]
    if check:
        hr = hypercube_r(W, sigma, omega)
        if set(out) != set(hr.contributing_B):
            raise InternalConsistencyError("P(σ,ω) differs from {B : σ^B = ω}")
        total = ZERO
        for B in out:
            total = total + (Q - ONE) ** len(B)
        if total != algebra(W).j_relative_r(sigma, omega, hypercube_J(W))[1]:
            raise InternalConsistencyError("sum over P(σ,ω) differs from R_{σ,ω,J}")
    return out
