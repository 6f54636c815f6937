"""
Exact Laurent polynomials in one variable ``v`` with integer coefficients.

The Hecke algebra is defined over ``Z[v, v^-1]``.  Two derived constants are
used everywhere:

* ``ALPHA = v^-1 - v``
* ``Q = v^-2``

Normalized objects (KL polynomials, R-polynomials, ...) are polynomials in
``q``, i.e. Laurent polynomials whose exponents in ``v`` are even and
non-positive.  They are still stored as ``LaurentPoly`` in ``v``; the q-form
only exists as a view (:func:`as_q_polynomial`) for display and export.

>>> p = LaurentPoly({-2: 1, 0: -1, 3: 2})
>>> str(p)
'v^-2 - 1 + 2v^3'
>>> str(p.bar())
'2v^-3 - 1 + v^2'
>>> str((ALPHA.bar() + ALPHA))
'0'
>>> str(peel_symmetric(LaurentPoly({-2: 1, 0: 1, 2: 1})))
'v^3'
"""

from __future__ import annotations

from typing import Iterable, Mapping, Union

from .errors import MalformedInputError, NotAQPolynomialError

__all__ = [
    "LaurentPoly", "ZERO", "ONE", "V", "ALPHA", "Q",
    "bar", "is_nonneg", "as_q_polynomial", "from_q_coefficients",
    "divide_by_alpha", "exact_divide", "peel_symmetric", "format_q",
    "to_json", "from_json",
]

Scalar = Union[int, "LaurentPoly"]


class LaurentPoly:
    """Immutable sparse Laurent polynomial, exponent -> nonzero coefficient."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        t: dict[int, int] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    t[int(e)] = int(c)
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict[int, int]) -> LaurentPoly:
        # caller guarantees there are no zero coefficients
        p = object.__new__(cls)
        p._t = t
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exp: int, coef: int = 1) -> LaurentPoly:
        return cls._raw({exp: coef} if coef else {})

    @classmethod
    def const(cls, c: int) -> LaurentPoly:
        return cls.monomial(0, c)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        """A copy of the exponent -> coefficient map."""
        return dict(self._t)

    def items(self) -> list[tuple[int, int]]:
        """Terms sorted by ascending exponent."""
        return sorted(self._t.items())

    def __getitem__(self, exp: int) -> int:
        return self._t.get(exp, 0)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def min_exp(self) -> int:
        return min(self._t)

    def max_exp(self) -> int:
        return max(self._t)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._t == other._t
        if isinstance(other, int):
            return self._t == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- ring operations --------------------------------------------------

    @staticmethod
    def _coerce(x: Scalar) -> LaurentPoly:
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return LaurentPoly.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    def __add__(self, other: Scalar) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for e, c in other._t.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                del t[e]
        return LaurentPoly._raw(t)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -c for e, c in self._t.items()})

    def __sub__(self, other: Scalar) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other._t:
            return self
        t = dict(self._t)
        for e, c in other._t.items():
            s = t.get(e, 0) - c
            if s:
                t[e] = s
            else:
                del t[e]
        return LaurentPoly._raw(t)

    def __rsub__(self, other: Scalar) -> LaurentPoly:
        return LaurentPoly._coerce(other) - self

    def __mul__(self, other: Scalar) -> LaurentPoly:
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._raw({e: c * other for e, c in self._t.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return ZERO
        if len(b) == 1:
            ((eb, cb),) = b.items()
            return LaurentPoly._raw({e + eb: c * cb for e, c in a.items()})
        if len(a) == 1:
            ((ea, ca),) = a.items()
            return LaurentPoly._raw({e + ea: c * ca for e, c in b.items()})
        t: dict[int, int] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = ea + eb
                t[e] = t.get(e, 0) + ca * cb
        return LaurentPoly._raw({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if len(self._t) == 1:
                ((e, c),) = self._t.items()
                if c in (1, -1):
                    return LaurentPoly.monomial(e * k, c if k % 2 else 1)
            raise ValueError("only monomial units can be raised to negative powers")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``v^k``."""
        if not k:
            return self
        return LaurentPoly._raw({e + k: c for e, c in self._t.items()})

    def bar(self) -> LaurentPoly:
        """The ring involution ``v -> v^-1``."""
        return LaurentPoly._raw({-e: c for e, c in self._t.items()})

    def is_nonneg(self) -> bool:
        return all(c > 0 for c in self._t.values())

    def evaluate(self, v) -> object:
        return sum(c * v ** e for e, c in self._t.items())

    # -- display ----------------------------------------------------------

    def __str__(self) -> str:
        return _format(self.items(), "v")

    def __repr__(self) -> str:
        return f"LaurentPoly({self.items()!r})"


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
V = LaurentPoly.monomial(1)
ALPHA = LaurentPoly({-1: 1, 1: -1})
Q = LaurentPoly.monomial(-2)


def _format(items: Iterable[tuple[int, int]], var: str) -> str:
    out = []
    for e, c in items:
        if e == 0:
            mono = str(abs(c))
        else:
            mono = var if e == 1 else f"{var}^{e}"
            if abs(c) != 1:
                mono = f"{abs(c)}{mono}"
        if not out:
            out.append(f"-{mono}" if c < 0 else mono)
        else:
            out.append(f" - {mono}" if c < 0 else f" + {mono}")
    return "".join(out) if out else "0"


def bar(p: LaurentPoly) -> LaurentPoly:
    return p.bar()


def is_nonneg(p: LaurentPoly) -> bool:
    return p.is_nonneg()


def as_q_polynomial(p: LaurentPoly) -> list[int]:
    """
    Coefficients of ``p`` as a polynomial in ``q = v^-2``, lowest degree first.

    >>> as_q_polynomial(LaurentPoly({0: 1, -4: 1}))
    [1, 0, 1]
    """
    if p.is_zero():
        return []
    coeffs: dict[int, int] = {}
    for e, c in p._t.items():
        if e > 0 or e % 2:
            raise NotAQPolynomialError(f"{p} contains the term v^{e}")
        coeffs[-e // 2] = c
    return [coeffs.get(k, 0) for k in range(max(coeffs) + 1)]


def from_q_coefficients(coeffs: Iterable[int]) -> LaurentPoly:
    return LaurentPoly({-2 * k: c for k, c in enumerate(coeffs)})


def format_q(p: LaurentPoly) -> str:
    """q-form of a normalized quantity, e.g. ``'1 + q + q^2'``."""
    return _format(((k, c) for k, c in enumerate(as_q_polynomial(p)) if c), "q")


def exact_divide(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """
    The quotient ``p / d`` in ``Z[v, v^-1]``; raises if ``d`` does not divide ``p``.

    Long division from the top exponent.  The leading coefficient of ``d`` must
    divide every intermediate leading coefficient, otherwise the division is
    reported as inexact.
    """
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return ZERO
    dt = d._t
    dtop = max(dt)
    dlead = dt[dtop]
    dlow = min(dt)
    rem = dict(p._t)
    quot: dict[int, int] = {}
    # every quotient exponent is at least min(p) - min(d)
    floor = min(rem) - dlow
    while rem:
        top = max(rem)
        k = top - dtop
        if k < floor:
            break
        c, r = divmod(rem[top], dlead)
        if r:
            raise MalformedInputError(f"{p} is not divisible by {d}")
        quot[k] = c
        for e, dc in dt.items():
            s = rem.get(e + k, 0) - c * dc
            if s:
                rem[e + k] = s
            else:
                rem.pop(e + k, None)
    if rem:
        raise MalformedInputError(f"{p} is not divisible by {d}")
    return LaurentPoly._raw(quot)


def divide_by_alpha(p: LaurentPoly) -> LaurentPoly:
    """Exact division by ``ALPHA = v^-1 - v``."""
    return exact_divide(p, ALPHA)


def peel_symmetric(p: LaurentPoly) -> LaurentPoly:
    """
    Recover ``x`` in ``v Z[v]`` from the bar-invariant ``(bar(x) - x) / ALPHA``.

    Since ``(v^-k - v^k) / ALPHA = v^-(k-1) + v^-(k-3) + ... + v^(k-1)``, the top
    term ``a v^(k-1)`` of ``p`` determines the term ``a v^k`` of ``x``; subtract
    the corresponding symmetric string and repeat.
    """
    if p.bar() != p:
        raise MalformedInputError(f"{p} is not bar-invariant")
    rem = dict(p._t)
    out: dict[int, int] = {}
    while rem:
        top = max(rem)
        if top < 0:
            raise MalformedInputError(f"{p} is not of the form (bar(x) - x)/alpha")
        a = rem[top]
        out[top + 1] = a
        for e in range(-top, top + 1, 2):
            s = rem.get(e, 0) - a
            if s:
                rem[e] = s
            else:
                rem.pop(e, None)
    return LaurentPoly._raw(out)


def to_json(p: LaurentPoly, variable: str = "v") -> dict:
    """
    JSON form ``{"variable": "v"|"q", "terms": [{"exp", "coef"}, ...]}``.

    With ``variable="q"`` the exponents are q-degrees and ``p`` must be a
    polynomial in q.
    """
    if variable == "v":
        items = p.items()
    elif variable == "q":
        items = [(k, c) for k, c in enumerate(as_q_polynomial(p)) if c]
    else:
        raise ValueError(f"unknown variable {variable!r}")
    return {"variable": variable, "terms": [{"exp": e, "coef": c} for e, c in items]}


def from_json(obj: Mapping) -> LaurentPoly:
    try:
        variable = obj["variable"]
        terms = {int(t["exp"]): int(t["coef"]) for t in obj["terms"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInputError(f"not a polynomial JSON object: {obj!r}") from exc
    if variable == "v":
        return LaurentPoly(terms)
    if variable == "q":
        return LaurentPoly({-2 * e: c for e, c in terms.items()})
    raise MalformedInputError(f"unknown variable {variable!r}")
