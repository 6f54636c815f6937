"""
q-derived KL polynomials and their positive decompositions.

For ``x <= w`` the q-derived polynomial ``P̌^∂_{x,w} = (d(P̌) - P̌) / ALPHA``
splits, for every ``tau`` in ``W``, as ``Ǐ^tau + Q̌^tau`` with

    Ǐ^tau_{x,w} = ALPHA^-1 (<f^{x,tau}, c_w> - P̌_{x,w}),   Q̌^tau = d(Ǐ^{w0 tau}).

Taking ``tau = w0^J`` gives the parabolic decomposition ``P^∂ = I^J + Q^J``,
which :func:`parabolic_decomposition` computes along three independent
routes and cross-checks at runtime:

(a) the pairing formula above;
(b) ``I^J = sum_k P^∂_{x_J,k} γ^J_{k·^Jx, w}`` over ``k`` in ``W_J``;
(c) ``Q^J = q^{l(w)-l(x)} / (1-q) · d(sum_{x<k<=w} R_{x,k,J} P_{k,w})``.

All public functions return normalized polynomials (elements of ``Z[q]``
stored as ``LaurentPoly`` in ``v``) unless their name says otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .coxeter import CoxeterSystem, Filtration
from .errors import InternalConsistencyError, MalformedInputError, PreconditionError
from .hecke import algebra
from .laurent import ONE, Q, ZERO, LaurentPoly, divide_by_alpha, exact_divide

__all__ = [
    "DerivedKL", "IQDecomposition", "p_derived", "i_tau", "q_tau",
    "iq_decomposition", "parabolic_decomposition", "solve_gamma_linear_system",
    "r_factorization_check", "chain_factorization", "filtration_factors",
    "monotonicity_check",
]

ONE_MINUS_Q = ONE - Q


@dataclass(frozen=True)
class DerivedKL:
    x: int
    w: int
    check: LaurentPoly       # P̌^∂, bar-invariant
    normalized: LaurentPoly  # P^∂ in Z[q]


@dataclass
class IQDecomposition:
    """``P^∂ = I + Q``; unnormalized parts carry a ``_check`` suffix."""
    x: int
    w: int
    tau: int
    I_check: LaurentPoly
    Q_check: LaurentPoly
    I: LaurentPoly
    Q: LaurentPoly
    p_derived: LaurentPoly
    J: frozenset[int] | None = None
    # kappa in W_J -> γ'_kappa (normalized), parabolic case only
    gamma_prime: dict[int, LaurentPoly] = field(default_factory=dict)


def _norm(W: CoxeterSystem, x: int, w: int, p: LaurentPoly, extra: int = 0) -> LaurentPoly:
    return p.shift(W.length[x] - W.length[w] + extra)


def _require_leq(W: CoxeterSystem, x: int, w: int) -> None:
    if not W.bruhat_leq(x, w):
        raise PreconditionError(f"{W.format(x)} is not below {W.format(w)} in Bruhat order")


def p_derived(W: CoxeterSystem, x: int, w: int) -> DerivedKL:
    _require_leq(W, x, w)
    kl = algebra(W).kl_table()
    pc = kl.unnormalized(x, w)
    try:
        check = divide_by_alpha(pc.bar() - pc)
        # the normalized form must also equal (q^{l(w)-l(x)} d(P) - P) / (q - 1)
        P = kl.normalized(x, w)
        other = exact_divide(P.bar().shift(2 * (W.length[x] - W.length[w])) - P, Q - ONE)
    except MalformedInputError as exc:
        raise InternalConsistencyError(f"P^∂ not exact at ({W.format(x)}, {W.format(w)})") from exc
    normalized = _norm(W, x, w, check, 1)
    if normalized != other:
        raise InternalConsistencyError(f"P^∂ normalizations disagree at ({W.format(x)}, {W.format(w)})")
    return DerivedKL(x, w, check, normalized)


def i_tau(W: CoxeterSystem, x: int, w: int, tau: int) -> LaurentPoly:
    """``Ǐ^tau_{x,w}`` (unnormalized)."""
    _require_leq(W, x, w)
    H = algebra(W)
    diff = H.pairing_f_canonical(tau, x, w) - H.kl_table().unnormalized(x, w)
    try:
        return divide_by_alpha(diff)
    except MalformedInputError as exc:
        raise InternalConsistencyError(f"Ǐ^tau not exact at ({W.format(x)}, {W.format(w)})") from exc


def q_tau(W: CoxeterSystem, x: int, w: int, tau: int) -> LaurentPoly:
    """``Q̌^tau_{x,w} = d(Ǐ^{w0 tau}_{x,w})`` (unnormalized)."""
    return i_tau(W, x, w, W.mul(W.longest, tau)).bar()


def iq_decomposition(W: CoxeterSystem, x: int, w: int, tau: int) -> IQDecomposition:
    """The decomposition at ``tau``, verified exact and coefficient-nonnegative."""
    pd = p_derived(W, x, w)
    ic = i_tau(W, x, w, tau)
    qc = q_tau(W, x, w, tau)
    if ic + qc != pd.check:
        raise InternalConsistencyError(
            f"Ǐ + Q̌ != P̌^∂ at ({W.format(x)}, {W.format(w)}, tau={W.format(tau)})")
    if not (ic.is_nonneg() and qc.is_nonneg()):
        raise InternalConsistencyError(
            f"negative coefficient in I/Q at ({W.format(x)}, {W.format(w)}, tau={W.format(tau)})")
    return IQDecomposition(x, w, tau, ic, qc, _norm(W, x, w, ic, 1), _norm(W, x, w, qc, 1), pd.normalized)


def _gamma_normalized(W: CoxeterSystem, y: int, w: int, J: frozenset[int]) -> LaurentPoly:
    g = algebra(W).gamma(w, J).get(y, ZERO)
    return _norm(W, y, w, g)


def solve_gamma_linear_system(W: CoxeterSystem, x: int, w: int, J: Iterable[int]) -> dict[int, LaurentPoly]:
    """
    Solve ``(P_{z,k})_{z,k in W_J} · (γ'_k) = (P_{z·^Jx, w})_z`` by back
    substitution.  ``W_J`` is linearized by (length, id), which refines Bruhat
    order, so the matrix is upper unitriangular.
    """
    _require_leq(W, x, w)
    P = W.parabolic(J)
    kl = algebra(W).kl_table()
    rep = P.rep[x]
    order = sorted(P.subgroup_elements, key=lambda z: (W.length[z], z))
    sol: dict[int, LaurentPoly] = {}
    for k in reversed(order):
        acc = kl.normalized(W.mul(k, rep), w)
        for k2, g in sol.items():
            if g and k2 != k:
                acc = acc - kl.normalized(k, k2) * g
        sol[k] = acc
    return {k: sol[k] for k in order}


def parabolic_decomposition(W: CoxeterSystem, x: int, w: int, J: Iterable[int]) -> IQDecomposition:
    """
    ``P^∂_{x,w} = I^J + Q^J`` with the ``γ'`` vector, computed three ways.

    Raises :class:`InternalConsistencyError` if the routes disagree, if a part
    has a negative coefficient, or if ``γ'`` from the linear solve differs from
    the hybrid-basis coefficients.
    """
    _require_leq(W, x, w)
    H = algebra(W)
    P = W.parabolic(J)
    J = P.J
    L = W.length
    tag = f"({W.format(x)}, {W.format(w)}, J={sorted(J)})"

    # route (a)
    dec = iq_decomposition(W, x, w, P.longest)
    dec.J = J

    # γ' two ways
    xJ, rep = P.part[x], P.rep[x]
    gamma_prime = {k: _gamma_normalized(W, W.mul(k, rep), w, J)
                   for k in sorted(P.subgroup_elements, key=lambda z: (L[z], z))}
    solved = solve_gamma_linear_system(W, x, w, J)
    if solved != gamma_prime:
        raise InternalConsistencyError(f"γ' linear solve disagrees with hybrid basis at {tag}")
    if not all(g.is_nonneg() for g in gamma_prime.values()):
        raise InternalConsistencyError(f"negative γ' coefficient at {tag}")
    dec.gamma_prime = gamma_prime

    # route (b), restricted and full sums
    restricted = ZERO
    full = ZERO
    for k, g in gamma_prime.items():
        if not g or not W.bruhat_leq(xJ, k):
            continue
        term = p_derived(W, xJ, k).normalized * g
        full = full + term
        y = W.mul(k, rep)
        if y != x and W.bruhat_leq(x, y) and W.bruhat_leq(y, w):
            restricted = restricted + term
    if restricted != full:
        raise InternalConsistencyError(f"terms outside x < k·^Jx <= w contribute to I^J at {tag}")
    if restricted != dec.I:
        raise InternalConsistencyError(f"I^J via γ ({restricted}) != pairing route ({dec.I}) at {tag}")

    # route (c)
    kl = H.kl_table()
    acc = ZERO
    for k in W.interval(x, w):
        if k != x:
            acc = acc + H.j_relative_r(x, k, J)[1] * kl.normalized(k, w)
    try:
        q_route = exact_divide(acc.bar().shift(2 * (L[x] - L[w])), ONE_MINUS_Q)
    except MalformedInputError as exc:
        raise InternalConsistencyError(f"(1-q) does not divide the R_J sum at {tag}") from exc
    if q_route != dec.Q:
        raise InternalConsistencyError(f"Q^J via R_J ({q_route}) != pairing route ({dec.Q}) at {tag}")
    return dec


def r_factorization_check(W: CoxeterSystem, x: int, w: int, J: Iterable[int]) -> tuple[bool, bool, bool]:
    """
    The three parabolic factorizations of R-polynomials:

    (i)   ``Ř_{x,w} = sum_k Ř_{x_J,k} Ř_{k·^Jx, w, J}``
    (ii)  the same identity for normalized polynomials
    (iii) ``Ř_{x,w,J} = sum_k d(Ř_{x_J,k}) Ř_{k·^Jx, w}``

    with ``k`` ranging over ``W_J`` and ``x <= k·^Jx <= w``.  The inverse
    relation is checked on unnormalized polynomials: its normalized form
    needs an extra ``q^{l(k)-l(x_J)}`` inside the sum, since the bar
    involution does not commute with the normalization.
    """
    H = algebra(W)
    R = H.r_table()
    P = W.parabolic(J)
    xJ, rep = P.part[x], P.rep[x]
    s1 = s2 = s3 = ZERO
    for k in P.subgroup_elements:
        y = W.mul(k, rep)
        if not (W.bruhat_leq(x, y) and W.bruhat_leq(y, w)):
            continue
        rj_check, rj = H.j_relative_r(y, w, P.J)
        s1 = s1 + R.unnormalized(xJ, k) * rj_check
        s2 = s2 + R.normalized(xJ, k) * rj
        s3 = s3 + R.unnormalized(xJ, k).bar() * R.unnormalized(y, w)
    return (
        s1 == R.unnormalized(x, w),
        s2 == R.normalized(x, w),
        s3 == H.j_relative_r(x, w, P.J)[0],
    )


def filtration_factors(W: CoxeterSystem, filtration: Filtration, x: int) -> list[int]:
    """
    ``[x_1, ..., x_r]`` with ``x = x_1 ... x_r`` and ``x_i`` a minimal
    representative of ``W_{J_{i-1}} \\ W_{J_i}``.
    """
    filtration.check(W)
    chain = filtration.chain
    factors = []
    cur = x
    for i in range(len(chain) - 1, 0, -1):
        P = W.parabolic(chain[i - 1])
        factors.append(P.rep[cur])
        cur = P.part[cur]
    if cur != W.identity:
        raise InternalConsistencyError("filtration factorization did not terminate at e")
    factors.reverse()
    return factors


def chain_factorization(W: CoxeterSystem, filtration: Filtration, x: int, w: int) -> LaurentPoly:
    """
    ``R_{x,w}`` as the nested sum over ``(k_1, ..., k_{r-1})``, ``k_i`` in
    ``W_{J_i}``, of ``R_{x_1,k_1} · prod R_{k_j x_{j+1}, k_{j+1}, J_j} ·
    R_{k_{r-1} x_r, w, J_{r-1}}``.  Each J-relative factor is evaluated inside
    the parabolic subgroup ``W_{J_{j+1}}`` that contains its arguments.
    """
    H = algebra(W)
    R = H.r_table()
    chain = filtration.chain
    r = len(chain) - 1
    if r == 1:
        return R.normalized(x, w)
    xs = filtration_factors(W, filtration, x)
    # weights[k] = accumulated sum for k in W_{J_j}
    weights: dict[int, LaurentPoly] = {}
    for k in W.parabolic(chain[1]).subgroup_elements:
        val = R.normalized(xs[0], k)
        if val:
            weights[k] = val
    for j in range(1, r - 1):
        nxt: dict[int, LaurentPoly] = {}
        targets = W.parabolic(chain[j + 1]).subgroup_elements
        for k, wt in weights.items():
            y = W.mul(k, xs[j])
            for k2 in targets:
                rj = _jrel_within(W, y, k2, chain[j], chain[j + 1])
                if rj:
                    nxt[k2] = nxt.get(k2, ZERO) + wt * rj
        weights = {k: p for k, p in nxt.items() if p}
    total = ZERO
    for k, wt in weights.items():
        y = W.mul(k, xs[r - 1])
        total = total + wt * H.j_relative_r(y, w, chain[r - 1])[1]
    return total


def _jrel_within(W: CoxeterSystem, x: int, w: int, J: frozenset[int], K: frozenset[int]) -> LaurentPoly:
    """Normalized ``R_{x,w,J}`` computed in the parabolic subgroup ``W_K``."""
    H = algebra(W)
    PK = W.parabolic(K)
    if x not in PK.subgroup_elements or w not in PK.subgroup_elements:
        raise PreconditionError("arguments must lie in W_K")
    tau = W.mul(PK.longest, W.parabolic(J).longest)
    prod = H.left_mul_h(tau, {w: ONE})
    return prod.get(W.mul(tau, x), ZERO).shift(W.length[x] - W.length[w])


def monotonicity_check(W: CoxeterSystem, x: int, w: int, tau1: int, tau2: int) -> bool:
    """Whether ``Ǐ^{tau2}_{x,w} - Ǐ^{tau1}_{x,w}`` has nonnegative coefficients."""
    if not W.weak_left_leq(tau1, tau2):
        raise PreconditionError(f"{W.format(tau1)} is not below {W.format(tau2)} in left weak order")
    return (i_tau(W, x, w, tau2) - i_tau(W, x, w, tau1)).is_nonneg()
