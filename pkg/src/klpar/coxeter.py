"""
Fully tabulated finite Coxeter systems of types A, B, D and I2(m).

Every group is realized concretely and enumerated once:

* ``A_r``  -- the symmetric group ``S_{r+1}`` on one-line notation ``(w(1), ..., w(n))``;
  generator ``k`` is the adjacent transposition ``s_k = (k, k+1)``.
* ``B_r``  -- signed permutations of ``{±1, ..., ±r}``; generator 1 changes the
  sign of position 1, generator ``k+1`` is ``s_k = (k, k+1)``.
* ``D_r``  -- signed permutations with an even number of negative entries;
  generator 1 is ``[-2, -1, 3, ...]``, generator ``k+1`` is ``s_k``.
* ``I2(m)`` -- the dihedral group of order ``2m``, elements ``r^k f^e``;
  generator 1 is ``f``, generator 2 is ``r f``.

Composition is ``(xy)(i) = x(y(i))``, so right multiplication by a generator
acts on positions and left multiplication acts on values.  Generator labels are
1-based everywhere in the public API (``J`` subsets, words, filtrations).

Elements are referred to by integer ids.  Ids follow a BFS enumeration by
length from the identity (id 0) with ties broken by the lexicographic order of
the backing tuple, so every table dump is reproducible.

>>> W = build_system("A", 2)
>>> len(W), W.length[W.longest], len(W.reflections)
(6, 3, 3)
>>> [W.format(w) for w in range(len(W))]
['123', '132', '213', '231', '312', '321']
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    ConfigurationError, MalformedInputError, PreconditionError,
    UnsupportedOperationError,
)

__all__ = [
    "CoxeterSystem", "Element", "ParabolicDescriptor", "Filtration",
    "build_system", "bruhat_leq", "coset_factorize", "weak_left_leq",
    "convex_tuple", "bruhat_join", "restrict_permutation",
]

Backing = tuple


# ---------------------------------------------------------------------------
# family realizations
# ---------------------------------------------------------------------------

def _inversions(w: Sequence[int]) -> int:
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def _neg_sum_pairs(w: Sequence[int]) -> int:
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] + w[j] < 0)


class _SymmetricFamily:
    name = "A"

    def __init__(self, rank: int):
        if rank < 1:
            raise ConfigurationError("type A requires rank >= 1")
        self.n = rank + 1

    def identity(self) -> Backing:
        return tuple(range(1, self.n + 1))

    def generators(self) -> list[Backing]:
        out = []
        for k in range(1, self.n):
            w = list(range(1, self.n + 1))
            w[k - 1], w[k] = w[k], w[k - 1]
            out.append(tuple(w))
        return out

    @staticmethod
    def compose(x: Backing, y: Backing) -> Backing:
        return tuple(x[i - 1] for i in y)

    @staticmethod
    def length(w: Backing) -> int:
        return _inversions(w)

    @staticmethod
    def format(w: Backing) -> str:
        if len(w) <= 9:
            return "".join(map(str, w))
        return ",".join(map(str, w))

    def parse(self, text: str) -> Backing | None:
        if "," in text and len(text.split(",")) != self.n:
            return None
        digits = text.split(",") if "," in text else list(text)
        try:
            w = tuple(int(d) for d in digits)
        except ValueError:
            return None
        if sorted(w) != list(range(1, self.n + 1)):
            return None
        return w


class _SignedFamily:
    def __init__(self, name: str, rank: int):
        self.name = name
        self.n = rank
        if name == "B" and rank < 1:
            raise ConfigurationError("type B requires rank >= 1")
        if name == "D" and rank < 2:
            raise ConfigurationError("type D requires rank >= 2")

    def identity(self) -> Backing:
        return tuple(range(1, self.n + 1))

    def generators(self) -> list[Backing]:
        first = list(range(1, self.n + 1))
        if self.name == "B":
            first[0] = -1
        else:
            first[0], first[1] = -2, -1
        out = [tuple(first)]
        for k in range(1, self.n):
            w = list(range(1, self.n + 1))
            w[k - 1], w[k] = w[k], w[k - 1]
            out.append(tuple(w))
        return out

    @staticmethod
    def compose(x: Backing, y: Backing) -> Backing:
        return tuple(x[i - 1] if i > 0 else -x[-i - 1] for i in y)

    def length(self, w: Backing) -> int:
        if self.name == "B":
            return _inversions(w) + _neg_sum_pairs(w) + sum(1 for a in w if a < 0)
        return _inversions(w) + _neg_sum_pairs(w)

    @staticmethod
    def format(w: Backing) -> str:
        return ",".join(map(str, w))

    def parse(self, text: str) -> Backing | None:
        try:
            w = tuple(int(d) for d in text.split(","))
        except ValueError:
            return None
        if sorted(abs(a) for a in w) != list(range(1, self.n + 1)):
            return None
        if self.name == "D" and sum(1 for a in w if a < 0) % 2:
            return None
        return w


class _DihedralFamily:
    name = "I2"

    def __init__(self, m: int):
        if m < 3:
            raise ConfigurationError("type I2(m) requires m >= 3")
        self.m = m

    def identity(self) -> Backing:
        return (0, 0)

    def generators(self) -> list[Backing]:
        return [(0, 1), (1, 1)]

    def compose(self, x: Backing, y: Backing) -> Backing:
        # (r^a f^b)(r^c f^d) = r^(a + (-1)^b c) f^(b + d)
        a, b = x
        c, d = y
        return ((a + (-c if b else c)) % self.m, (b + d) % 2)

    def length(self, w: Backing) -> int:
        k, f = w
        m = self.m
        if not f:
            return 2 * min(k, m - k)
        if k == 0:
            return 1
        return min(2 * k - 1, 2 * (m - k) + 1)

    @staticmethod
    def format(w: Backing) -> str:
        k, f = w
        return f"r^{k} f" if f else f"r^{k}"

    def parse(self, text: str) -> Backing | None:
        t = text.replace(" ", "")
        f = 0
        if t.endswith("f"):
            f, t = 1, t[:-1]
        if t == "" and f:
            return (0, 1)
        if not t.startswith("r"):
            return None
        t = t[1:]
        if t == "":
            k = 1
        elif t.startswith("^"):
            try:
                k = int(t[1:])
            except ValueError:
                return None
        else:
            return None
        return (k % self.m, f)


_ORDER_FORMULAS = {
    "A": lambda r: _factorial(r + 1),
    "B": lambda r: 2 ** r * _factorial(r),
    "D": lambda r: 2 ** (r - 1) * _factorial(r),
    "I2": lambda m: 2 * m,
}


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _family(family: str, param: int):
    fam = family.upper()
    if fam == "A":
        return _SymmetricFamily(param)
    if fam in ("B", "D"):
        return _SignedFamily(fam, param)
    if fam in ("I2", "I"):
        return _DihedralFamily(param)
    raise ConfigurationError(f"unsupported Coxeter family {family!r}")


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Element:
    """A group element: its id in the enumeration and its concrete backing."""
    id: int
    backing: Backing
    text: str

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class ParabolicDescriptor:
    """Standard parabolic subgroup ``W_J`` with its right-coset factorization."""
    J: frozenset[int]
    subgroup_elements: frozenset[int]
    longest: int
    min_reps: frozenset[int]
    # for every w: w = part[w] * rep[w] with part[w] in W_J and rep[w] in ^J W
    part: tuple[int, ...] = field(repr=False)
    rep: tuple[int, ...] = field(repr=False)


@dataclass(frozen=True)
class Filtration:
    """A chain ``∅ = J_0 ⊊ J_1 ⊊ ... ⊊ J_r = S`` of generator subsets."""
    chain: tuple[frozenset[int], ...]

    def __post_init__(self):
        chain = tuple(frozenset(J) for J in self.chain)
        object.__setattr__(self, "chain", chain)
        if len(chain) < 2 or chain[0]:
            raise PreconditionError("a filtration starts with the empty set and has r >= 1")
        for a, b in zip(chain, chain[1:]):
            if not a < b:
                raise PreconditionError(f"filtration is not strictly increasing at {sorted(b)}")

    @property
    def r(self) -> int:
        return len(self.chain) - 1

    def check(self, W: CoxeterSystem) -> None:
        if self.chain[-1] != frozenset(W.labels):
            raise PreconditionError("the last filtration step must be all of S")

    @classmethod
    def full_flag(cls, W: CoxeterSystem) -> Filtration:
        """``J_k = {1, ..., k}``, the canonical filtration used for type A."""
        return cls(tuple(frozenset(range(1, k + 1)) for k in range(W.rank + 1)))

    @classmethod
    def trivial(cls, W: CoxeterSystem) -> Filtration:
        return cls((frozenset(), frozenset(W.labels)))

    def colors(self, W: CoxeterSystem) -> dict[int, int]:
        """Reflection coloring: ``t -> min{i : t in W_{J_i}}``."""
        self.check(W)
        groups = [W.parabolic(J).subgroup_elements for J in self.chain]
        out = {}
        for t in W.reflections:
            out[t] = next(i for i, G in enumerate(groups) if t in G)
        return out


# ---------------------------------------------------------------------------
# the system
# ---------------------------------------------------------------------------

class CoxeterSystem:
    """
    A finite Coxeter system with all elements enumerated.

    Tables (all indexed by element id):

    ``length``, ``inverse``, ``reflections``, Bruhat down/up sets as int bitsets,
    and right/left multiplication by generators.  General products go through
    the backings (:meth:`mul`).
    """

    def __init__(self, family: str, rank: int):
        self._fam = _family(family, rank)
        self.family = self._fam.name
        self.param = rank
        gens = self._fam.generators()
        self.rank = len(gens)
        self.labels = tuple(range(1, self.rank + 1))
        self.name = f"I2({rank})" if self.family == "I2" else f"{self.family}{rank}"

        # BFS by length, lexicographic tie-break inside each layer
        ident = self._fam.identity()
        compose = self._fam.compose
        seen = {ident}
        layer = [ident]
        elements: list[Backing] = []
        lengths: list[int] = []
        depth = 0
        while layer:
            layer.sort()
            elements.extend(layer)
            lengths.extend([depth] * len(layer))
            nxt = set()
            for b in layer:
                for g in gens:
                    c = compose(b, g)
                    if c not in seen:
                        seen.add(c)
                        nxt.add(c)
            layer = list(nxt)
            depth += 1
        self.elements: list[Backing] = elements
        self.index: dict[Backing, int] = {b: i for i, b in enumerate(elements)}
        self.length: list[int] = lengths
        idx = self.index
        self._right = [[idx[compose(b, g)] for g in gens] for b in elements]
        self._left = [[idx[compose(g, b)] for g in gens] for b in elements]
        self.generators = [idx[g] for g in gens]
        self.identity = 0
        self.longest = len(elements) - 1
        self._words: dict[int, tuple[int, ...]] = {0: ()}
        # (s_1 ... s_k)^-1 = s_k ... s_1
        self.inverse = [self.from_word(reversed(self.reduced_word(w))) for w in range(len(elements))]

        refl = set()
        for w in range(len(elements)):
            for s in self.generators:
                refl.add(self.mul(self.mul(w, s), self.inverse[w]))
        self.reflections: list[int] = sorted(refl)
        self.reflection_set = frozenset(refl)

        self._build_bruhat()
        self._parabolics: dict[frozenset[int], ParabolicDescriptor] = {}

    def _word_by_descent(self, w: int) -> tuple[int, ...]:
        word = []
        while w:
            for k in range(self.rank):
                u = self._right[w][k]
                if self.length[u] < self.length[w]:
                    word.append(k + 1)
                    w = u
                    break
        return tuple(reversed(word))

    def _build_bruhat(self) -> None:
        N = len(self.elements)
        lower: list[list[int]] = [[] for _ in range(N)]
        upper: list[list[int]] = [[] for _ in range(N)]
        L = self.length
        for z in range(N):
            for t in self.reflections:
                tz = self.mul(t, z)
                if L[tz] == L[z] + 1:
                    lower[tz].append(z)
                    upper[z].append(tz)
        down = [0] * N
        for w in range(N):
            bits = 1 << w
            for z in lower[w]:
                bits |= down[z]
            down[w] = bits
        up = [0] * N
        for w in range(N - 1, -1, -1):
            bits = 1 << w
            for z in upper[w]:
                bits |= up[z]
            up[w] = bits
        self.lower_covers = [tuple(sorted(c)) for c in lower]
        self.upper_covers = [tuple(sorted(c)) for c in upper]
        self.down_set = down
        self.up_set = up

    # -- basic queries ------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"CoxeterSystem({self.name}, |W|={len(self)})"

    @property
    def order_formula(self) -> int:
        return _ORDER_FORMULAS[self.family](self.param)

    def element(self, w: int) -> Element:
        return Element(w, self.elements[w], self.format(w))

    def mul(self, a: int, b: int) -> int:
        return self.index[self._fam.compose(self.elements[a], self.elements[b])]

    def mul_many(self, *ws: int) -> int:
        out = self.identity
        for w in ws:
            out = self.mul(out, w)
        return out

    def right_mul(self, w: int, s: int) -> int:
        """``w * s_s`` for a 1-based generator label ``s``."""
        return self._right[w][s - 1]

    def left_mul(self, s: int, w: int) -> int:
        """``s_s * w`` for a 1-based generator label ``s``."""
        return self._left[w][s - 1]

    def reduced_word(self, w: int) -> tuple[int, ...]:
        """A reduced word ``(s_1, ..., s_k)`` with ``w = s_1 ... s_k``."""
        word = self._words.get(w)
        if word is None:
            word = self._word_by_descent(w)
            self._words[w] = word
        return word

    def from_word(self, word: Iterable[int]) -> int:
        w = self.identity
        for s in word:
            if not 1 <= s <= self.rank:
                raise MalformedInputError(f"generator label {s} out of range 1..{self.rank}")
            w = self._right[w][s - 1]
        return w

    def gen(self, s: int) -> int:
        return self.generators[s - 1]

    def is_reflection(self, t: int) -> bool:
        return t in self.reflection_set

    # -- Bruhat order -------------------------------------------------------

    def bruhat_leq(self, a: int, b: int) -> bool:
        return (self.down_set[b] >> a) & 1 == 1

    def interval(self, a: int, b: int) -> list[int]:
        """Elements ``z`` with ``a <= z <= b`` in increasing id order."""
        bits = self.up_set[a] & self.down_set[b]
        return _bits(bits)

    def below(self, b: int) -> list[int]:
        return _bits(self.down_set[b])

    def above(self, a: int) -> list[int]:
        return _bits(self.up_set[a])

    def bruhat_join(self, elems: Iterable[int]) -> int | None:
        """The least upper bound of ``elems`` in Bruhat order, or ``None``."""
        elems = list(elems)
        if not elems:
            raise PreconditionError("bruhat_join needs a non-empty set")
        ub = -1
        for z in elems:
            ub &= self.up_set[z]
        if not ub:
            return None
        # a least element, if any, has minimal length, and ids grow with length
        m = (ub & -ub).bit_length() - 1
        return m if ub & ~self.up_set[m] == 0 else None

    # -- weak order and convex tuples ---------------------------------------

    def weak_left_leq(self, tau: int, kappa: int) -> bool:
        u = self.mul(kappa, self.inverse[tau])
        return self.length[u] + self.length[tau] == self.length[kappa]

    def convex_tuple(self, tau: int, kappa: int) -> tuple[int, ...] | None:
        """
        Reflections ``t_1..t_k`` with ``kappa = tau t_1 ... t_k`` and
        ``l(tau t_1 ... t_i) = l(tau) + i``; ``None`` unless ``tau <=_L kappa``.

        Depth-first, trying reflections in increasing id order and pruning by
        the weak order.  Every step is also a left weak-order cover
        (``tau t_1 ... t_i = s tau t_1 ... t_{i-1}`` for a simple ``s``).
        """
        if not self.weak_left_leq(tau, kappa):
            return None
        target = self.length[kappa]
        L = self.length

        def dfs(cur: int, acc: list[int]) -> list[int] | None:
            if cur == kappa:
                return acc
            for t in self.reflections:
                nxt = self.mul(cur, t)
                if (L[nxt] == L[cur] + 1 and L[nxt] <= target
                        and self.weak_left_leq(cur, nxt) and self.weak_left_leq(nxt, kappa)):
                    found = dfs(nxt, acc + [t])
                    if found is not None:
                        return found
            return None

        out = dfs(tau, [])
        return None if out is None else tuple(out)

    # -- parabolic subgroups ------------------------------------------------

    def _normalize_J(self, J: Iterable[int]) -> frozenset[int]:
        J = frozenset(int(s) for s in J)
        bad = [s for s in J if not 1 <= s <= self.rank]
        if bad:
            raise PreconditionError(f"generator labels {sorted(bad)} not in 1..{self.rank}")
        return J

    def parabolic(self, J: Iterable[int]) -> ParabolicDescriptor:
        J = self._normalize_J(J)
        desc = self._parabolics.get(J)
        if desc is not None:
            return desc
        sub = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for w in frontier:
                for s in J:
                    u = self._right[w][s - 1]
                    if u not in sub:
                        sub.add(u)
                        nxt.append(u)
            frontier = nxt
        N = len(self)
        rep = [0] * N
        part = [0] * N
        L = self.length
        for w in range(N):
            x = w
            moved = True
            while moved:
                moved = False
                for s in J:
                    u = self._left[x][s - 1]
                    if L[u] < L[x]:
                        x = u
                        moved = True
                        break
            rep[w] = x
            part[w] = self.mul(w, self.inverse[x])
        longest = max(sub, key=lambda w: (L[w], w))
        desc = ParabolicDescriptor(
            J=J,
            subgroup_elements=frozenset(sub),
            longest=longest,
            min_reps=frozenset(w for w in range(N) if rep[w] == w),
            part=tuple(part),
            rep=tuple(rep),
        )
        self._parabolics[J] = desc
        return desc

    def coset_factorize(self, w: int, J: Iterable[int]) -> tuple[int, int]:
        """``(w_J, ^J w)`` with ``w = w_J * ^J w``."""
        d = self.parabolic(J)
        return d.part[w], d.rep[w]

    def all_subsets(self) -> list[frozenset[int]]:
        out = []
        for mask in range(1 << self.rank):
            out.append(frozenset(s for s in self.labels if mask >> (s - 1) & 1))
        return out

    # -- text I/O -----------------------------------------------------------

    def format(self, w: int) -> str:
        return self._fam.format(self.elements[w])

    def parse(self, text: str) -> int:
        """
        Parse an element.  Accepted forms: ``e``; ``w:1,2,1`` (a generator
        word, 1-based labels); the family notation (``4231`` for type A,
        ``-2,1,3`` for B/D, ``r^k`` or ``r^k f`` for I2).  For type A a
        comma-separated string that is not a permutation of the right size is
        read as a generator word; for B/D likewise when it is not a signed
        permutation.
        """
        text = text.strip()
        if text in ("e", "id"):
            return self.identity
        if text.startswith("w:") or text.startswith("word:"):
            return self._parse_word(text.split(":", 1)[1])
        b = self._fam.parse(text)
        if b is not None and b in self.index:
            return self.index[b]
        if "," in text or (self.family == "I2" and text.isdigit()):
            return self._parse_word(text)
        raise MalformedInputError(f"cannot parse {text!r} as an element of {self.name}")

    def _parse_word(self, text: str) -> int:
        text = text.strip()
        if not text:
            return self.identity
        try:
            word = [int(x) for x in text.split(",")]
        except ValueError as exc:
            raise MalformedInputError(f"bad generator word {text!r}") from exc
        return self.from_word(word)

    # -- type A helpers -----------------------------------------------------

    def _require_A(self, what: str) -> None:
        if self.family != "A":
            raise UnsupportedOperationError(f"{what} is only defined for type A")

    @property
    def n(self) -> int:
        """Permutation degree for type A (``S_n``)."""
        self._require_A("n")
        return self.rank + 1

    def perm(self, w: int) -> tuple[int, ...]:
        self._require_A("perm")
        return self.elements[w]

    def from_perm(self, p: Sequence[int]) -> int:
        self._require_A("from_perm")
        try:
            return self.index[tuple(p)]
        except KeyError:
            raise MalformedInputError(f"{p!r} is not an element of S_{self.n}") from None

    def transposition(self, i: int, j: int) -> int:
        """The reflection ``(i, j)`` of ``S_n``."""
        self._require_A("transposition")
        p = list(range(1, self.n + 1))
        p[i - 1], p[j - 1] = p[j - 1], p[i - 1]
        return self.index[tuple(p)]

    def restrict(self, w: int, A: Iterable[int]) -> tuple[int, ...]:
        self._require_A("restrict_permutation")
        return restrict_permutation(self.elements[w], A)

    @cached_property
    def reflection_pairs(self) -> dict[int, tuple[int, int]]:
        """Type A: reflection id -> ``(i, j)`` with ``i < j``."""
        self._require_A("reflection_pairs")
        out = {}
        for t in self.reflections:
            p = self.elements[t]
            moved = [k + 1 for k, v in enumerate(p) if v != k + 1]
            out[t] = (moved[0], moved[1])
        return out


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


_CACHE: dict[tuple[str, int], CoxeterSystem] = {}


def build_system(family: str, rank: int) -> CoxeterSystem:
    """Build (or fetch from the process-wide cache) a tabulated system."""
    fam = family.upper()
    key = ("I2" if fam == "I" else fam, int(rank))
    W = _CACHE.get(key)
    if W is None:
        W = CoxeterSystem(family, rank)
        _CACHE[key] = W
    return W


def bruhat_leq(W: CoxeterSystem, a: int, b: int) -> bool:
    return W.bruhat_leq(a, b)


def coset_factorize(W: CoxeterSystem, w: int, J: Iterable[int]) -> tuple[int, int]:
    return W.coset_factorize(w, J)


def weak_left_leq(W: CoxeterSystem, tau: int, kappa: int) -> bool:
    return W.weak_left_leq(tau, kappa)


def convex_tuple(W: CoxeterSystem, tau: int, kappa: int) -> tuple[int, ...] | None:
    return W.convex_tuple(tau, kappa)


def bruhat_join(W: CoxeterSystem, elems: Iterable[int]) -> int | None:
    return W.bruhat_join(elems)


def restrict_permutation(perm: Sequence[int], A: Iterable[int]) -> tuple[int, ...]:
    """
    The pattern of ``perm`` on the positions ``A``.

    >>> restrict_permutation((4, 2, 3, 1), {1, 3})
    (2, 1)
    """
    pos = sorted(A)
    vals = [perm[i - 1] for i in pos]
    order = sorted(vals)
    return tuple(order.index(v) + 1 for v in vals)
