"""
The Hecke algebra of a finite Coxeter system over ``Z[v, v^-1]``.

Conventions: standard basis ``h_w`` with ``h_s^2 = ALPHA h_s + 1`` (that is,
``(h_s + v)(h_s - v^-1) = 0``), bar involution ``d(v) = v^-1``,
``d(h_w) = (h_{w^-1})^-1``.  Unnormalized quantities (``P̌``, ``Ř``, ``γ̌``)
live in ``Z[v, v^-1]``; normalized ones are obtained by multiplying with
``v^(l(x) - l(w))``.

Every coefficient extraction is a product in the standard basis followed by
reading off one coefficient:

* ``Ř_{x,w}``        = bar of the coefficient of ``h_x`` in ``d(h_w)``
* ``<f^{x,t}, X>``   = coefficient of ``h_{tx}`` in ``h_t X``
* ``Ř_{x,w,J}``      = coefficient of ``h_{w0 w0^J x}`` in ``h_{w0 w0^J} h_w``

Everything here is cached on a per-system :class:`HeckeAlgebra`; use
:func:`algebra` to get the shared instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .coxeter import CoxeterSystem
from .errors import InternalConsistencyError, MalformedInputError, PreconditionError
from .laurent import ALPHA, ONE, ZERO, LaurentPoly, divide_by_alpha, peel_symmetric

__all__ = [
    "HeckeElement", "HeckeAlgebra", "KLTable", "RTable", "algebra",
    "h_mul", "d_involution", "h_inverse_gen", "compute_kl_table",
    "compute_r_table", "canonical_basis_element", "f_basis_element",
    "pairing_f", "convex_pairing_oracle", "j_relative_r",
    "hybrid_basis_element", "gamma_table",
]


class HeckeElement:
    """Sparse combination ``sum p_w h_w`` on the standard basis."""

    __slots__ = ("H", "coeffs")

    def __init__(self, H: HeckeAlgebra, coeffs: Mapping[int, LaurentPoly] | None = None):
        self.H = H
        self.coeffs: dict[int, LaurentPoly] = {w: p for w, p in (coeffs or {}).items() if p}

    def coeff(self, w: int) -> LaurentPoly:
        return self.coeffs.get(w, ZERO)

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __add__(self, other: HeckeElement) -> HeckeElement:
        out = dict(self.coeffs)
        for w, p in other.coeffs.items():
            out[w] = out.get(w, ZERO) + p
        return HeckeElement(self.H, out)

    def __sub__(self, other: HeckeElement) -> HeckeElement:
        out = dict(self.coeffs)
        for w, p in other.coeffs.items():
            out[w] = out.get(w, ZERO) - p
        return HeckeElement(self.H, out)

    def __neg__(self) -> HeckeElement:
        return HeckeElement(self.H, {w: -p for w, p in self.coeffs.items()})

    def scale(self, c: LaurentPoly | int) -> HeckeElement:
        return HeckeElement(self.H, {w: p * c for w, p in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return self.H.mul(self, other)
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __repr__(self) -> str:
        W = self.H.W
        if not self.coeffs:
            return "0"
        parts = [f"({p})*h[{W.format(w)}]" for w, p in sorted(self.coeffs.items())]
        return " + ".join(parts)


def _add_into(acc: dict[int, LaurentPoly], w: int, p: LaurentPoly) -> None:
    q = acc.get(w)
    if q is None:
        acc[w] = p
    else:
        s = q + p
        if s:
            acc[w] = s
        else:
            del acc[w]


@dataclass
class KLTable:
    """Unnormalized KL polynomials ``P̌_{x,w}`` for all ``x <= w``."""
    W: CoxeterSystem
    ucheck: dict[tuple[int, int], LaurentPoly]

    def unnormalized(self, x: int, w: int) -> LaurentPoly:
        return self.ucheck.get((x, w), ZERO)

    def normalized(self, x: int, w: int) -> LaurentPoly:
        p = self.ucheck.get((x, w))
        if p is None:
            return ZERO
        return p.shift(self.W.length[x] - self.W.length[w])

    def column(self, w: int) -> dict[int, LaurentPoly]:
        return {x: self.ucheck[(x, w)] for x in self.W.below(w)}


@dataclass
class RTable:
    """Unnormalized R-polynomials ``Ř_{x,w}`` for all ``x <= w``."""
    W: CoxeterSystem
    rcheck: dict[tuple[int, int], LaurentPoly]

    def unnormalized(self, x: int, w: int) -> LaurentPoly:
        return self.rcheck.get((x, w), ZERO)

    def normalized(self, x: int, w: int) -> LaurentPoly:
        p = self.rcheck.get((x, w))
        if p is None:
            return ZERO
        return p.shift(self.W.length[x] - self.W.length[w])


class HeckeAlgebra:
    """Arithmetic and cached tables for ``H(W)``."""

    def __init__(self, W: CoxeterSystem):
        self.W = W
        self._dh: dict[int, dict[int, LaurentPoly]] = {0: {0: ONE}}
        self._r: RTable | None = None
        self._kl: KLTable | None = None
        self._canonical: dict[int, HeckeElement] = {}
        self._left_products: dict[tuple[int, int], dict[int, LaurentPoly]] = {}
        self._jrel: dict[frozenset[int], dict[int, dict[int, LaurentPoly]]] = {}
        self._hybrid: dict[tuple[int, frozenset[int]], HeckeElement] = {}
        self._gamma: dict[tuple[int, frozenset[int]], dict[int, LaurentPoly]] = {}
        self._f: dict[tuple[int, int], HeckeElement] = {}

    # -- constructors -------------------------------------------------------

    def element(self, coeffs: Mapping[int, LaurentPoly | int]) -> HeckeElement:
        return HeckeElement(self, {w: LaurentPoly._coerce(p) for w, p in coeffs.items()})

    def h(self, w: int) -> HeckeElement:
        return HeckeElement(self, {w: ONE})

    def zero(self) -> HeckeElement:
        return HeckeElement(self)

    def one(self) -> HeckeElement:
        return self.h(self.W.identity)

    # -- multiplication -----------------------------------------------------

    def _right_gen(self, coeffs: Mapping[int, LaurentPoly], s: int) -> dict[int, LaurentPoly]:
        W = self.W
        L = W.length
        right = W._right
        out: dict[int, LaurentPoly] = {}
        for w, p in coeffs.items():
            ws = right[w][s - 1]
            _add_into(out, ws, p)
            if L[ws] < L[w]:
                # h_w h_s = h_{ws} + ALPHA h_w
                _add_into(out, w, p * ALPHA)
        return out

    def _left_gen(self, s: int, coeffs: Mapping[int, LaurentPoly]) -> dict[int, LaurentPoly]:
        W = self.W
        L = W.length
        left = W._left
        out: dict[int, LaurentPoly] = {}
        for w, p in coeffs.items():
            sw = left[w][s - 1]
            _add_into(out, sw, p)
            if L[sw] < L[w]:
                _add_into(out, w, p * ALPHA)
        return out

    def right_mul_h(self, X: HeckeElement | Mapping[int, LaurentPoly], w: int) -> dict[int, LaurentPoly]:
        """Coefficients of ``X h_w``."""
        coeffs = X.coeffs if isinstance(X, HeckeElement) else X
        for s in self.W.reduced_word(w):
            coeffs = self._right_gen(coeffs, s)
        return dict(coeffs)

    def left_mul_h(self, w: int, X: HeckeElement | Mapping[int, LaurentPoly]) -> dict[int, LaurentPoly]:
        """Coefficients of ``h_w X``."""
        coeffs = X.coeffs if isinstance(X, HeckeElement) else X
        for s in reversed(self.W.reduced_word(w)):
            coeffs = self._left_gen(s, coeffs)
        return dict(coeffs)

    def mul(self, X: HeckeElement, Y: HeckeElement) -> HeckeElement:
        out: dict[int, LaurentPoly] = {}
        for w, p in Y.coeffs.items():
            for z, c in self.right_mul_h(X, w).items():
                _add_into(out, z, c * p)
        return HeckeElement(self, out)

    # -- the bar involution -------------------------------------------------

    def d_h(self, w: int) -> dict[int, LaurentPoly]:
        """Coefficients of ``d(h_w)``, memoized by induction on length."""
        got = self._dh.get(w)
        if got is not None:
            return got
        word = self.W.reduced_word(w)
        u = self.W.from_word(word[:-1])
        s = word[-1]
        prev = self.d_h(u)
        # d(h_{us}) = d(h_u) d(h_s) = d(h_u) (h_s - ALPHA)
        out = self._right_gen(prev, s)
        for z, p in prev.items():
            _add_into(out, z, -(p * ALPHA))
        self._dh[w] = out
        return out

    def d(self, X: HeckeElement) -> HeckeElement:
        out: dict[int, LaurentPoly] = {}
        for w, p in X.coeffs.items():
            pb = p.bar()
            for z, c in self.d_h(w).items():
                _add_into(out, z, c * pb)
        return HeckeElement(self, out)

    def inverse_h(self, w: int) -> HeckeElement:
        """``h_w^-1 = d(h_{w^-1})``."""
        return HeckeElement(self, self.d_h(self.W.inverse[w]))

    # -- R-polynomials and KL polynomials -----------------------------------

    def r_table(self) -> RTable:
        if self._r is None:
            W = self.W
            rcheck: dict[tuple[int, int], LaurentPoly] = {}
            for w in range(len(W)):
                for x, p in self.d_h(w).items():
                    if not W.bruhat_leq(x, w):
                        raise InternalConsistencyError(
                            f"d(h_{W.format(w)}) has support outside [e, {W.format(w)}]")
                    rcheck[(x, w)] = p.bar()
            self._r = RTable(W, rcheck)
        return self._r

    def kl_table(self) -> KLTable:
        """
        ``P̌`` via ``P̌^∂_{x,w} = ALPHA^-1 sum_{x<k<=w} Ř_{x,k} P̌_{k,w}`` and the
        symmetric peel, by descending induction on ``x`` for each fixed ``w``.
        """
        if self._kl is None:
            W = self.W
            R = self.r_table().rcheck
            ucheck: dict[tuple[int, int], LaurentPoly] = {}
            down = W.down_set
            for w in range(len(W)):
                col: dict[int, LaurentPoly] = {w: ONE}
                below = W.below(w)
                for x in reversed(below):
                    if x == w:
                        continue
                    acc = ZERO
                    for k in W.interval(x, w):
                        if k != x:
                            acc = acc + R[(x, k)] * col[k]
                    try:
                        col[x] = peel_symmetric(divide_by_alpha(acc))
                    except MalformedInputError as exc:
                        raise InternalConsistencyError(
                            f"KL recursion failed at ({W.format(x)}, {W.format(w)}): {exc}") from exc
                for x, p in col.items():
                    ucheck[(x, w)] = p
            self._kl = KLTable(W, ucheck)
        return self._kl

    def canonical(self, w: int, verify: bool = True) -> HeckeElement:
        """``c_w = sum_{x<=w} P̌_{x,w} h_x``."""
        c = self._canonical.get(w)
        if c is None:
            kl = self.kl_table()
            c = HeckeElement(self, {x: kl.ucheck[(x, w)] for x in self.W.below(w)})
            if verify:
                _check_canonical(self, w, c)
            self._canonical[w] = c
        return c

    # -- Dyer-Lehrer bases and pairings -------------------------------------

    def f_basis(self, w: int, tau: int) -> HeckeElement:
        """``f_{w,tau} = h_tau^-1 h_{tau w}``."""
        key = (w, tau)
        f = self._f.get(key)
        if f is None:
            W = self.W
            f = HeckeElement(self, self.right_mul_h(self.inverse_h(tau), W.mul(tau, w)))
            self._f[key] = f
        return f

    def pairing_f(self, tau: int, x: int, X: HeckeElement | Mapping[int, LaurentPoly]) -> LaurentPoly:
        """``<f^{x,tau}, X>``: the coefficient of ``h_{tau x}`` in ``h_tau X``."""
        return self.left_mul_h(tau, X).get(self.W.mul(tau, x), ZERO)

    def tau_canonical(self, tau: int, w: int) -> dict[int, LaurentPoly]:
        """Coefficients of ``h_tau c_w`` (cached)."""
        key = (tau, w)
        got = self._left_products.get(key)
        if got is None:
            got = self.left_mul_h(tau, self.canonical(w))
            self._left_products[key] = got
        return got

    def pairing_f_canonical(self, tau: int, x: int, w: int) -> LaurentPoly:
        """``<f^{x,tau}, c_w>``."""
        return self.tau_canonical(tau, w).get(self.W.mul(tau, x), ZERO)

    def convex_pairing(self, tau: int, kappa: int, x: int, w: int,
                       tup: tuple[int, ...] | None = None) -> LaurentPoly:
        """
        ``<f^{x,tau}, f_{w,kappa}>`` as a signed count of descending reflection
        chains, without any algebra multiplication.

        With ``kappa = tau t_1 ... t_k`` the tuple is consumed from its end:
        the admissible chains are ``w > t_{j_1} w > t_{j_2} t_{j_1} w > ... = x``
        with ``j_1 > j_2 > ...``, each contributing ``(-ALPHA)^(length)``.
        """
        W = self.W
        if tup is None:
            tup = W.convex_tuple(tau, kappa)
            if tup is None:
                raise PreconditionError(
                    f"no convex tuple: {W.format(tau)} is not below {W.format(kappa)} in left weak order")
        if x == w:
            return ONE
        L = W.length
        neg_alpha = -ALPHA
        total = ZERO
        # stack of (current element, largest index still usable, chain length)
        stack = [(w, len(tup), 0)]
        while stack:
            z, limit, n = stack.pop()
            for j in range(limit - 1, -1, -1):
                tz = W.mul(tup[j], z)
                if L[tz] < L[z] and W.bruhat_leq(x, tz):
                    if tz == x:
                        total = total + neg_alpha ** (n + 1)
                    else:
                        stack.append((tz, j, n + 1))
        return total

    # -- J-relative R-polynomials -------------------------------------------

    def jrel_column(self, w: int, J: Iterable[int]) -> dict[int, LaurentPoly]:
        """``x -> Ř_{x,w,J}`` (nonzero entries only)."""
        W = self.W
        P = W.parabolic(J)
        cols = self._jrel.setdefault(P.J, {})
        col = cols.get(w)
        if col is None:
            tau = W.mul(W.longest, P.longest)
            prod = self.left_mul_h(tau, {w: ONE})
            tinv = W.inverse[tau]
            col = {W.mul(tinv, z): p for z, p in prod.items()}
            cols[w] = col
        return col

    def j_relative_r(self, x: int, w: int, J: Iterable[int]) -> tuple[LaurentPoly, LaurentPoly]:
        """``(Ř_{x,w,J}, R_{x,w,J})``."""
        r = self.jrel_column(w, J).get(x, ZERO)
        return r, r.shift(self.W.length[x] - self.W.length[w])

    # -- hybrid basis and Grojnowski-Haiman coefficients ---------------------

    def hybrid(self, w: int, J: Iterable[int]) -> HeckeElement:
        """``h_{w,J} = c_{w_J} h_{^J w}``."""
        P = self.W.parabolic(J)
        key = (w, P.J)
        got = self._hybrid.get(key)
        if got is None:
            wJ, Jw = P.part[w], P.rep[w]
            got = HeckeElement(self, self.right_mul_h(self.canonical(wJ), Jw))
            self._hybrid[key] = got
        return got

    def gamma(self, w: int, J: Iterable[int]) -> dict[int, LaurentPoly]:
        """
        ``x -> γ̌^J_{x,w}``, the coefficients of ``c_w`` on the hybrid basis.

        ``h_{x,J} = h_x + (terms below x)``, so peeling the residual at its
        largest support element (by length, then id) is exact.
        """
        P = self.W.parabolic(J)
        key = (w, P.J)
        got = self._gamma.get(key)
        if got is not None:
            return got
        L = self.W.length
        residual = dict(self.canonical(w).coeffs)
        out: dict[int, LaurentPoly] = {}
        while residual:
            x = max(residual, key=lambda z: (L[z], z))
            c = residual[x]
            out[x] = c
            for z, p in self.hybrid(x, P.J).coeffs.items():
                _add_into(residual, z, -(p * c))
            if x in residual:
                raise InternalConsistencyError("hybrid basis element is not unitriangular")
        self._gamma[key] = out
        return out


def _check_canonical(H: HeckeAlgebra, w: int, c: HeckeElement) -> None:
    W = H.W
    if H.d(c) != c:
        raise InternalConsistencyError(f"c_{W.format(w)} is not bar-invariant")
    for x, p in c.coeffs.items():
        if x == w:
            if p != ONE:
                raise InternalConsistencyError(f"c_{W.format(w)} has diagonal coefficient {p}")
        elif p.min_exp() < 1:
            raise InternalConsistencyError(
                f"coefficient of h_{W.format(x)} in c_{W.format(w)} is {p}, not in vZ[v]")


def algebra(W: CoxeterSystem) -> HeckeAlgebra:
    """The shared :class:`HeckeAlgebra` of ``W``."""
    H = getattr(W, "_hecke", None)
    if H is None:
        H = HeckeAlgebra(W)
        W._hecke = H
    return H


# thin functional wrappers ---------------------------------------------------

def h_mul(X: HeckeElement, Y: HeckeElement) -> HeckeElement:
    return X.H.mul(X, Y)


def h_inverse_gen(W: CoxeterSystem, s: int) -> HeckeElement:
    """``h_s^-1 = h_s - ALPHA`` for a 1-based generator label."""
    H = algebra(W)
    g = W.gen(s)
    return H.element({g: ONE, W.identity: -ALPHA})


def d_involution(X: HeckeElement) -> HeckeElement:
    return X.H.d(X)


def compute_r_table(W: CoxeterSystem) -> RTable:
    return algebra(W).r_table()


def compute_kl_table(W: CoxeterSystem) -> KLTable:
    return algebra(W).kl_table()


def canonical_basis_element(W: CoxeterSystem, w: int) -> HeckeElement:
    return algebra(W).canonical(w)


def f_basis_element(W: CoxeterSystem, w: int, tau: int) -> HeckeElement:
    return algebra(W).f_basis(w, tau)


def pairing_f(W: CoxeterSystem, tau: int, x: int, X: HeckeElement) -> LaurentPoly:
    return algebra(W).pairing_f(tau, x, X)


def convex_pairing_oracle(W: CoxeterSystem, tau: int, kappa: int, x: int, w: int) -> LaurentPoly:
    return algebra(W).convex_pairing(tau, kappa, x, w)


def j_relative_r(W: CoxeterSystem, x: int, w: int, J: Iterable[int]) -> tuple[LaurentPoly, LaurentPoly]:
    return algebra(W).j_relative_r(x, w, J)


def hybrid_basis_element(W: CoxeterSystem, w: int, J: Iterable[int]) -> HeckeElement:
    return algebra(W).hybrid(w, J)


def gamma_table(W: CoxeterSystem, w: int, J: Iterable[int]) -> dict[int, LaurentPoly]:
    return algebra(W).gamma(w, J)
