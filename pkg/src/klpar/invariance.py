"""
Bruhat interval graphs and empirical checks of relative / filtered
combinatorial invariance.

The graph ``G[σ, ω]`` has the elements of the Bruhat interval as vertices
and an edge ``z -> tz`` for every reflection ``t`` with ``l(z) < l(tz)`` and
both ends in the interval (not only covers).  Edges carry their reflection.

Isomorphisms are searched by backtracking level by level.  Three modes:

``plain``     edge structure only;
``relative``  additionally, "label in ``W_J``" must be preserved;
``filtered``  edge colors from filtrations must match through an increasing
              map ``γ`` of color indices.

>>> from klpar.coxeter import build_system
>>> W = build_system("A", 2)
>>> G = build_interval_graph(W, W.identity, W.longest)
>>> len(G.vertices), len(G.edges)
(6, 9)
>>> find_isomorphism(G, G).status
'found'
"""

from __future__ import annotations

import itertools
import os
import random
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .coxeter import CoxeterSystem, Filtration, build_system
from .errors import ConfigurationError, PreconditionError
from .hecke import algebra
from .laurent import LaurentPoly, format_q

__all__ = [
    "IntervalGraph", "ColoredIntervalGraph", "IsoWitness", "IsoResult",
    "ConjectureReport", "SurveySummary", "build_interval_graph", "color_edges",
    "mark_edges", "find_isomorphism", "validate_witness", "default_budget",
    "default_conj_R_subset", "default_filtration", "check_conjecture_R_instance",
    "check_conjecture_weak_instance", "coset_witness", "coset_pairs",
    "invariance_survey", "to_dot",
]

DEFAULT_BUDGET = 10**6
MAX_SURVEY_VERTICES = 40


def default_budget() -> int:
    """Search-node budget; ``KLP_BUDGET`` overrides the default of 10^6."""
    raw = os.environ.get("KLP_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        val = int(raw)
    except ValueError:
        raise ConfigurationError(f"KLP_BUDGET must be an integer, got {raw!r}") from None
    if val <= 0:
        raise ConfigurationError("KLP_BUDGET must be positive")
    return val


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------

@dataclass
class IntervalGraph:
    W: CoxeterSystem
    sigma: int
    omega: int
    vertices: tuple[int, ...]           # sorted by (length, id)
    level: dict[int, int]
    edges: dict[tuple[int, int], int]   # (z1, z2) -> t with t z1 = z2
    out: dict[int, list[int]] = field(repr=False)
    inn: dict[int, list[int]] = field(repr=False)

    def level_vector(self) -> tuple[int, ...]:
        c = Counter(self.level.values())
        return tuple(c[i] for i in range(max(c) + 1))


@dataclass
class ColoredIntervalGraph:
    graph: IntervalGraph
    colors: dict[tuple[int, int], int]
    r: int | None = None  # number of filtration colors; None for J-markings


@dataclass
class IsoWitness:
    phi: dict[int, int]
    gamma: dict[int, int] | None = None


@dataclass
class IsoResult:
    status: str  # "found" | "none" | "indeterminate"
    witness: IsoWitness | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


def build_interval_graph(W: CoxeterSystem, sigma: int, omega: int) -> IntervalGraph:
    if not W.bruhat_leq(sigma, omega):
        raise PreconditionError(f"{W.format(sigma)} is not below {W.format(omega)} in Bruhat order")
    verts = tuple(sorted(W.interval(sigma, omega), key=lambda z: (W.length[z], z)))
    vset = set(verts)
    base = W.length[sigma]
    level = {z: W.length[z] - base for z in verts}
    edges: dict[tuple[int, int], int] = {}
    out: dict[int, list[int]] = {z: [] for z in verts}
    inn: dict[int, list[int]] = {z: [] for z in verts}
    for z in verts:
        for t in W.reflections:
            tz = W.mul(t, z)
            if tz in vset and W.length[tz] > W.length[z]:
                edges[(z, tz)] = t
                out[z].append(tz)
                inn[tz].append(z)
    return IntervalGraph(W, sigma, omega, verts, level, edges, out, inn)


def color_edges(graph: IntervalGraph, filtration: Filtration) -> ColoredIntervalGraph:
    """Color each edge by ``min{i : t in W_{J_i}}``."""
    col = filtration.colors(graph.W)
    return ColoredIntervalGraph(graph, {e: col[t] for e, t in graph.edges.items()}, filtration.r)


def mark_edges(graph: IntervalGraph, J: Iterable[int]) -> ColoredIntervalGraph:
    """Mark each edge 1 if its reflection lies in ``W_J``, else 0."""
    sub = graph.W.parabolic(J).subgroup_elements
    return ColoredIntervalGraph(graph, {e: int(t in sub) for e, t in graph.edges.items()})


# ---------------------------------------------------------------------------
# isomorphism search
# ---------------------------------------------------------------------------

def _forced_gamma(c1: set[int], c2: set[int], r1: int, r2: int) -> dict[int, int] | None:
    """
    The only candidate for ``γ`` on the colors actually used: an order
    preserving bijection ``c1 -> c2``.  ``None`` if it does not extend to a
    strictly increasing map ``{1..r1} -> {1..r2}``.
    """
    a, b = sorted(c1), sorted(c2)
    if len(a) != len(b):
        return None
    prev_a, prev_b = 0, 0
    for x, y in zip(a, b):
        if y - prev_b < x - prev_a:
            return None
        prev_a, prev_b = x, y
    if r2 - prev_b < r1 - prev_a:
        return None
    return dict(zip(a, b))


def _extend_gamma(partial: dict[int, int], r1: int, r2: int) -> dict[int, int]:
    """Fill in a strictly increasing ``γ`` on ``{1..r1}`` around ``partial``."""
    out = {}
    fixed = sorted(partial.items())
    lo_a, lo_b = 0, 0
    for x, y in fixed + [(r1 + 1, r2 + 1)]:
        for k, i in enumerate(range(lo_a + 1, x), start=1):
            out[i] = lo_b + k
        if x <= r1:
            out[x] = y
        lo_a, lo_b = x, y
    return out


def _signatures(G: IntervalGraph, col: dict[tuple[int, int], int] | None) -> dict[int, tuple]:
    sig = {}
    for z in G.vertices:
        if col is None:
            o = (len(G.out[z]),)
            i = (len(G.inn[z]),)
        else:
            o = tuple(sorted(col[(z, y)] for y in G.out[z]))
            i = tuple(sorted(col[(y, z)] for y in G.inn[z]))
        sig[z] = (G.level[z], o, i)
    return sig


def find_isomorphism(G1: IntervalGraph | ColoredIntervalGraph, G2: IntervalGraph | ColoredIntervalGraph,
                     mode: str = "plain", budget: int | None = None) -> IsoResult:
    """
    Search for a (colored) isomorphism ``G1 -> G2``.  Returns status
    ``found`` with a validated witness, ``none``, or ``indeterminate`` when
    more than ``budget`` search nodes were expanded.
    """
    if mode not in ("plain", "relative", "filtered"):
        raise ConfigurationError(f"unknown isomorphism mode {mode!r}")
    budget = default_budget() if budget is None else budget
    c1 = c2 = None
    gamma = None
    if mode == "plain":
        g1 = G1.graph if isinstance(G1, ColoredIntervalGraph) else G1
        g2 = G2.graph if isinstance(G2, ColoredIntervalGraph) else G2
    else:
        if not (isinstance(G1, ColoredIntervalGraph) and isinstance(G2, ColoredIntervalGraph)):
            raise PreconditionError(f"mode {mode!r} needs colored graphs")
        g1, g2 = G1.graph, G2.graph
        if mode == "filtered":
            if G1.r is None or G2.r is None:
                raise PreconditionError("filtered mode needs filtration colorings")
            gamma = _forced_gamma(set(G1.colors.values()), set(G2.colors.values()), G1.r, G2.r)
            if gamma is None:
                return IsoResult("none")
            c1 = {e: gamma[c] for e, c in G1.colors.items()}
        else:
            c1 = G1.colors
        c2 = G2.colors

    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return IsoResult("none")
    if g1.level_vector() != g2.level_vector():
        return IsoResult("none")
    s1, s2 = _signatures(g1, c1), _signatures(g2, c2)
    if Counter(s1.values()) != Counter(s2.values()):
        return IsoResult("none")

    by_sig: dict[tuple, list[int]] = defaultdict(list)
    for z in g2.vertices:
        by_sig[s2[z]].append(z)
    order = list(g1.vertices)
    adj1 = {(a, b): (c1[(a, b)] if c1 is not None else 0) for a, b in g1.edges}
    adj2 = {(a, b): (c2[(a, b)] if c2 is not None else 0) for a, b in g2.edges}
    nbrs1 = {z: g1.out[z] + g1.inn[z] for z in g1.vertices}

    phi: dict[int, int] = {}
    used: set[int] = set()
    nodes = 0

    def consistent(u: int, v: int) -> bool:
        for w in nbrs1[u]:
            if w in phi:
                pw = phi[w]
                if (u, w) in adj1:
                    if adj2.get((v, pw)) != adj1[(u, w)]:
                        return False
                elif adj2.get((pw, v)) != adj1[(w, u)]:
                    return False
        # non-edges must map to non-edges: compare counts to mapped vertices
        mapped_nbrs = sum(1 for w in nbrs1[u] if w in phi)
        mapped_img = sum(1 for y in itertools.chain(g2.out[v], g2.inn[v]) if y in used)
        return mapped_nbrs == mapped_img

    def search(k: int) -> bool | None:
        nonlocal nodes
        if k == len(order):
            return True
        u = order[k]
        for v in by_sig[s1[u]]:
            if v in used:
                continue
            nodes += 1
            if nodes > budget:
                return None
            if not consistent(u, v):
                continue
            phi[u] = v
            used.add(v)
            res = search(k + 1)
            if res is None or res:
                return res
            del phi[u]
            used.discard(v)
        return False

    res = search(0)
    if res is None:
        return IsoResult("indeterminate", nodes=nodes)
    if not res:
        return IsoResult("none", nodes=nodes)
    full_gamma = None
    if mode == "filtered":
        full_gamma = _extend_gamma(gamma, G1.r, G2.r)
    witness = IsoWitness(dict(phi), full_gamma)
    if not validate_witness(G1, G2, witness, mode):
        raise AssertionError("isomorphism search produced an invalid witness")
    return IsoResult("found", witness, nodes)


def validate_witness(G1: IntervalGraph | ColoredIntervalGraph, G2: IntervalGraph | ColoredIntervalGraph,
                     witness: IsoWitness, mode: str = "plain", J1: Iterable[int] | None = None,
                     J2: Iterable[int] | None = None) -> bool:
    """Independent edge-by-edge check of a witness (reflections recomputed from ``W``)."""
    g1 = G1.graph if isinstance(G1, ColoredIntervalGraph) else G1
    g2 = G2.graph if isinstance(G2, ColoredIntervalGraph) else G2
    phi = witness.phi
    if set(phi) != set(g1.vertices) or sorted(phi.values()) != sorted(g2.vertices):
        return False
    W1, W2 = g1.W, g2.W
    image_edges = set()
    for (a, b) in g1.edges:
        pa, pb = phi[a], phi[b]
        if (pa, pb) not in g2.edges:
            return False
        image_edges.add((pa, pb))
        t1 = W1.mul(b, W1.inverse[a])
        t2 = W2.mul(pb, W2.inverse[pa])
        if mode == "relative":
            if G1.colors[(a, b)] != G2.colors[(pa, pb)]:
                return False
        elif mode == "filtered":
            gamma = witness.gamma
            if gamma is None or G1.colors[(a, b)] is None:
                return False
            if gamma[G1.colors[(a, b)]] != G2.colors[(pa, pb)]:
                return False
        if t1 != g1.edges[(a, b)] or t2 != g2.edges[(pa, pb)]:
            return False
    if image_edges != set(g2.edges):
        return False
    if mode == "filtered":
        g = witness.gamma
        keys = sorted(g)
        if keys != list(range(1, G1.r + 1)):
            return False
        vals = [g[k] for k in keys]
        if any(b <= a for a, b in zip(vals, vals[1:])) or vals[0] < 1 or vals[-1] > G2.r:
            return False
    return True


# ---------------------------------------------------------------------------
# conjecture checks
# ---------------------------------------------------------------------------

def default_conj_R_subset(W: CoxeterSystem) -> frozenset[int]:
    """Drop the last generator (for ``I2(m)`` this keeps generator 1)."""
    return frozenset(range(1, W.rank))


def default_filtration(W: CoxeterSystem) -> Filtration:
    """
    The canonical filtration obtained by repeatedly dropping the last
    generator; for type A it is the full flag ``J_k = {1..k}``.
    """
    return Filtration.full_flag(W)


@dataclass
class ConjectureReport:
    conjecture: str
    iso_status: str
    hypothesis_met: bool
    polys: tuple[LaurentPoly, LaurentPoly]
    equal: bool
    witness: IsoWitness | None = None

    @property
    def counterexample(self) -> bool:
        return self.hypothesis_met and not self.equal

    def summary(self) -> str:
        if not self.hypothesis_met:
            tail = "hypothesis not satisfied" if self.iso_status == "none" else "search budget exhausted"
            return f"{self.conjecture}: {tail}"
        verdict = "equal" if self.equal else "COUNTEREXAMPLE"
        return f"{self.conjecture}: hypothesis met, {format_q(self.polys[0])} vs {format_q(self.polys[1])}: {verdict}"


def check_conjecture_R_instance(W1: CoxeterSystem, s1: int, w1: int, J1: Iterable[int] | None,
                                W2: CoxeterSystem, s2: int, w2: int, J2: Iterable[int] | None,
                                budget: int | None = None) -> ConjectureReport:
    J1 = default_conj_R_subset(W1) if J1 is None else frozenset(J1)
    J2 = default_conj_R_subset(W2) if J2 is None else frozenset(J2)
    G1 = mark_edges(build_interval_graph(W1, s1, w1), J1)
    G2 = mark_edges(build_interval_graph(W2, s2, w2), J2)
    res = find_isomorphism(G1, G2, "relative", budget)
    p1 = algebra(W1).j_relative_r(s1, w1, J1)[1]
    p2 = algebra(W2).j_relative_r(s2, w2, J2)[1]
    return ConjectureReport("R", res.status, res.found, (p1, p2), p1 == p2, res.witness)


def check_conjecture_weak_instance(W1: CoxeterSystem, s1: int, w1: int, F1: Filtration | None,
                                   W2: CoxeterSystem, s2: int, w2: int, F2: Filtration | None,
                                   budget: int | None = None) -> ConjectureReport:
    F1 = default_filtration(W1) if F1 is None else F1
    F2 = default_filtration(W2) if F2 is None else F2
    G1 = color_edges(build_interval_graph(W1, s1, w1), F1)
    G2 = color_edges(build_interval_graph(W2, s2, w2), F2)
    res = find_isomorphism(G1, G2, "filtered", budget)
    p1 = algebra(W1).kl_table().normalized(s1, w1)
    p2 = algebra(W2).kl_table().normalized(s2, w2)
    return ConjectureReport("weak", res.status, res.found, (p1, p2), p1 == p2, res.witness)


# ---------------------------------------------------------------------------
# coset translation
# ---------------------------------------------------------------------------

def coset_witness(W: CoxeterSystem, sigma: int, omega: int, J: Iterable[int]) -> IsoWitness:
    """``κ -> κ·^Jσ`` from ``G[σ_J, ω_J]`` to ``G[σ, ω]`` (requires ``^Jσ = ^Jω``)."""
    P = W.parabolic(J)
    if P.rep[sigma] != P.rep[omega]:
        raise PreconditionError("σ and ω lie in different right W_J-cosets")
    rep = P.rep[sigma]
    small = W.interval(P.part[sigma], P.part[omega])
    return IsoWitness({k: W.mul(k, rep) for k in small})


def coset_pairs(W: CoxeterSystem) -> list[tuple[int, int, frozenset[int]]]:
    """All ``(σ, ω, J)`` with ``σ <= ω`` and ``^Jσ = ^Jω``, excluding ``J = S``."""
    out = []
    full = frozenset(W.labels)
    for J in W.all_subsets():
        if J == full:
            continue
        P = W.parabolic(J)
        for w in range(len(W)):
            for s in W.below(w):
                if P.rep[s] == P.rep[w]:
                    out.append((s, w, J))
    return out


# ---------------------------------------------------------------------------
# surveys
# ---------------------------------------------------------------------------

@dataclass
class SurveySummary:
    pairs_tested: int = 0
    hypothesis_met: int = 0
    equal: int = 0
    indeterminate: int = 0
    counterexamples: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "pairs_tested": self.pairs_tested,
            "hypothesis_met": self.hypothesis_met,
            "equal": self.equal,
            "indeterminate": self.indeterminate,
            "counterexamples": list(self.counterexamples),
        }

    def merge(self, other: SurveySummary) -> None:
        self.pairs_tested += other.pairs_tested
        self.hypothesis_met += other.hypothesis_met
        self.equal += other.equal
        self.indeterminate += other.indeterminate
        self.counterexamples.extend(other.counterexamples)


Interval = tuple[int, int, int]  # (rank, σ, ω) in type A


def _collect_intervals(ranks: Sequence[int], sampler: str, samples: int, seed: int) -> list[Interval]:
    out: list[Interval] = []
    rng = random.Random(seed)
    for r in ranks:
        W = build_system("A", r)
        pairs = [(s, w) for w in range(len(W)) for s in W.below(w)
                 if len(W.interval(s, w)) <= MAX_SURVEY_VERTICES]
        if sampler == "sample" and len(pairs) > samples:
            # stratify by interval size so small and large intervals both occur
            strata: dict[int, list[tuple[int, int]]] = defaultdict(list)
            for s, w in pairs:
                strata[len(W.interval(s, w))].append((s, w))
            keys = sorted(strata)
            chosen: list[tuple[int, int]] = []
            per = max(1, samples // len(keys))
            for k in keys:
                bucket = strata[k]
                chosen.extend(bucket if len(bucket) <= per else rng.sample(bucket, per))
            pairs = chosen
        out.extend((r, s, w) for s, w in pairs)
    return out


def _cheap_key(iv: Interval) -> tuple:
    r, s, w = iv
    W = build_system("A", r)
    G = build_interval_graph(W, s, w)
    return (G.level_vector(), len(G.edges), tuple(sorted(Counter(_signatures(G, None).values()).items())))


def _check_pair(task: tuple[str, Interval, Interval, int]) -> SurveySummary:
    conj, a, b, budget = task
    Wa, Wb = build_system("A", a[0]), build_system("A", b[0])
    if conj == "R":
        rep = check_conjecture_R_instance(Wa, a[1], a[2], None, Wb, b[1], b[2], None, budget)
    else:
        rep = check_conjecture_weak_instance(Wa, a[1], a[2], None, Wb, b[1], b[2], None, budget)
    out = SurveySummary(pairs_tested=1)
    if rep.iso_status == "indeterminate":
        out.indeterminate = 1
    if rep.hypothesis_met:
        out.hypothesis_met = 1
        if rep.equal:
            out.equal = 1
        else:
            out.counterexamples.append({
                "conjecture": conj,
                "first": {"n": a[0] + 1, "sigma": Wa.format(a[1]), "omega": Wa.format(a[2])},
                "second": {"n": b[0] + 1, "sigma": Wb.format(b[1]), "omega": Wb.format(b[2])},
                "polys": [format_q(p) for p in rep.polys],
            })
    return out


def invariance_survey(n: int, sampler: str = "exhaustive", seed: int = 0, samples: int = 200,
                      conjectures: Sequence[str] = ("R", "weak"), budget: int | None = None,
                      jobs: int = 1, min_n: int = 2) -> dict[str, SurveySummary]:
    """
    Survey interval pairs drawn from ``S_{min_n}, ..., S_n``.

    Intervals (at most 40 vertices) are grouped by cheap graph invariants and
    every pair inside a group is checked with the conjecture's isomorphism
    mode.  ``sampler="sample"`` draws about ``samples`` intervals per rank,
    stratified by size, from a ``random.Random(seed)`` stream.
    """
    if sampler not in ("exhaustive", "sample"):
        raise ConfigurationError(f"unknown sampler {sampler!r}")
    if n < 2 or min_n < 2 or min_n > n:
        raise ConfigurationError("survey needs 2 <= min_n <= n")
    budget = default_budget() if budget is None else budget
    intervals = _collect_intervals(range(min_n - 1, n), sampler, samples, seed)
    groups: dict[tuple, list[Interval]] = defaultdict(list)
    for iv in intervals:
        groups[_cheap_key(iv)].append(iv)
    results: dict[str, SurveySummary] = {}
    for conj in conjectures:
        if conj not in ("R", "weak"):
            raise ConfigurationError(f"unknown conjecture {conj!r}")
        tasks = [(conj, a, b, budget)
                 for key in sorted(groups) for a, b in itertools.combinations(groups[key], 2)]
        summary = SurveySummary()
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                for part in ex.map(_check_pair, tasks, chunksize=64):
                    summary.merge(part)
        else:
            for t in tasks:
                summary.merge(_check_pair(t))
        results[conj] = summary
    return results


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def _label(W: CoxeterSystem, t: int) -> str:
    if W.family == "A":
        i, j = W.reflection_pairs[t]
        return f"t=({i},{j})"
    return "t=" + W.format(t)


def to_dot(G: IntervalGraph | ColoredIntervalGraph, name: str = "interval") -> str:
    """Graphviz DOT text; colored graphs get a ``color`` attribute per edge."""
    g = G.graph if isinstance(G, ColoredIntervalGraph) else G
    cols = G.colors if isinstance(G, ColoredIntervalGraph) else None
    W = g.W
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for z in g.vertices:
        lines.append(f'  v{z} [label="{W.format(z)}"];')
    for (a, b), t in g.edges.items():
        attr = f'label="{_label(W, t)}"'
        if cols is not None:
            c = cols[(a, b)] if G.r is not None else cols[(a, b)] + 1
            attr += f' colorscheme="set19" color="{c}"'
        lines.append(f"  v{a} -> v{b} [{attr}];")
    lines.append("}")
    return "\n".join(lines)
