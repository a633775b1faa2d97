"""Oriented blow-up graphs, path counts and the inequalities built on them.

Vertices are 1..N; an arrow i -> j (always i > j) records that the i-th
centre lies on the strict transform of the j-th exceptional divisor.  p_i is
the number of paths from the top vertex N down to i.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence


@dataclass(frozen=True)
class ResolutionGraph:
    """A downward-oriented graph with codimension labels delta_i >= 1."""

    n: int
    arrows: frozenset
    delta: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        arrows = frozenset((int(i), int(j)) for i, j in self.arrows)
        for i, j in arrows:
            if not 1 <= j < i <= self.n:
                raise ValueError(f"arrow {i}->{j} must point downwards inside 1..{self.n}")
        object.__setattr__(self, "arrows", arrows)
        delta = tuple(int(x) for x in self.delta) or (1,) * self.n
        if len(delta) != self.n or min(delta) < 1:
            raise ValueError("delta needs one entry >= 1 per vertex")
        object.__setattr__(self, "delta", delta)

    @property
    def split(self) -> int:
        """L: the lower part is 1..L (delta >= 2), the upper part L+1..N (delta = 1)."""
        lower = [i for i, x in enumerate(self.delta, 1) if x >= 2]
        upper = [i for i, x in enumerate(self.delta, 1) if x == 1]
        if lower and upper and max(lower) > min(upper):
            raise ValueError("delta is not of the form (>=2, ..., >=2, 1, ..., 1)")
        return len(lower)

    def out(self, i: int) -> tuple:
        return tuple(sorted((j for a, j in self.arrows if a == i), reverse=True))

    def into(self, j: int) -> tuple:
        return tuple(sorted(i for i, b in self.arrows if b == j))

    def to_json(self) -> dict:
        return {"n": self.n, "arrows": sorted([i, j] for i, j in self.arrows), "delta": list(self.delta)}

    @classmethod
    def from_json(cls, data: Mapping) -> "ResolutionGraph":
        return cls(int(data["n"]), frozenset(tuple(a) for a in data["arrows"]), tuple(data.get("delta", ())))


def chain(n: int, delta: Sequence[int] = ()) -> ResolutionGraph:
    return ResolutionGraph(n, frozenset((i, i - 1) for i in range(2, n + 1)), tuple(delta))


def path_counts(graph: ResolutionGraph) -> list:
    """[p_1, ..., p_N] with p_N = 1 and p_j the sum of p_i over arrows i -> j."""
    p = [0] * (graph.n + 1)
    p[graph.n] = 1
    for j in range(graph.n - 1, 0, -1):
        p[j] = sum(p[i] for i in graph.into(j))
    return p[1:]


def is_compatible(graph: ResolutionGraph, a: Sequence) -> bool:
    """a(i) >= sum of a(j) over arrows j -> i with j <= L, at each vertex i = 1..L.

    ``a`` lives on the first L = len(a) vertices only; arrows coming from
    above L are not counted.  A prefix of path_counts is therefore compatible,
    with equality wherever every in-arrow starts inside the prefix.
    """
    if any(x < 0 for x in a):
        raise ValueError("compatible functions are non-negative")
    L = len(a)
    if L > graph.n:
        raise ValueError("more values than vertices")
    return all(a[i - 1] >= sum(a[j - 1] for j in graph.into(i) if j <= L) for i in range(1, L + 1))


def noether_fano_holds(graph: ResolutionGraph, nu: Sequence, n) -> bool:
    """sum p_i nu_i > n * sum p_i delta_i."""
    if len(nu) != graph.n:
        raise ValueError("nu needs one entry per vertex")
    p = path_counts(graph)
    return sum(pi * x for pi, x in zip(p, nu)) > n * sum(pi * d for pi, d in zip(p, graph.delta))


def log_noether_fano_holds(graph: ResolutionGraph, nu: Sequence, n) -> bool:
    """sum p_i nu_i > n (sum p_i + 1)."""
    if len(nu) != graph.n:
        raise ValueError("nu needs one entry per vertex")
    p = path_counts(graph)
    return sum(pi * x for pi, x in zip(p, nu)) > n * (sum(p) + 1)


def is_surface_graph(graph: ResolutionGraph) -> bool:
    """Mandatory arrow i -> i-1, out-degree <= 2, and extra arrows i -> j need (i-1) -> j."""
    if graph.out(1):
        return False
    for i in range(2, graph.n + 1):
        out = graph.out(i)
        if not out or out[0] != i - 1 or len(out) > 2:
            return False
        if len(out) == 2 and out[1] not in graph.out(i - 1):
            return False
    return True


def enumerate_surface_graphs(N: int) -> list:
    """All surface resolution graphs on N vertices, without duplicates."""
    if N < 1:
        raise ValueError("N must be at least 1")
    results = []

    def extend(i: int, arrows: list, prev_out: tuple):
        if i > N:
            results.append(ResolutionGraph(N, frozenset(arrows)))
            return
        base = [(i, i - 1)]
        extend(i + 1, arrows + base, (i - 1,))
        for j in prev_out:
            extend(i + 1, arrows + base + [(i, j)], (i - 1, j))

    if N == 1:
        return [ResolutionGraph(1, frozenset())]
    extend(2, [], ())
    return results


def lemma15_holds(graph: ResolutionGraph) -> bool:
    """(sum p + 1)^2 >= 4 sum p^2."""
    p = path_counts(graph)
    return (sum(p) + 1) ** 2 >= 4 * sum(x * x for x in p)


def lemma15_is_equality(graph: ResolutionGraph) -> bool:
    p = path_counts(graph)
    return (sum(p) + 1) ** 2 == 4 * sum(x * x for x in p)


def lemma16_violations(graph: ResolutionGraph) -> list:
    """Indices i with p_i > sum_{j >= i+2} p_j + 1."""
    p = path_counts(graph)
    bad = []
    for i in range(1, graph.n + 1):
        if p[i - 1] > sum(p[i + 1 :]) + 1:
            bad.append(i)
    return bad


def lemma16_holds(graph: ResolutionGraph) -> bool:
    return not lemma16_violations(graph)


def constrained_quadratic_min(weights: Sequence, coeffs: Sequence, c) -> Fraction:
    """min sum w_i s_i^2 subject to sum p_i s_i = c, i.e. c^2 / sum(p_i^2 / w_i)."""
    if len(weights) != len(coeffs) or not weights:
        raise ValueError("weights and coefficients must be non-empty and of equal length")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    denom = sum(Fraction(p) ** 2 / Fraction(w) for w, p in zip(weights, coeffs))
    if denom == 0:
        raise ValueError("all coefficients are zero")
    return Fraction(c) ** 2 / denom


def surface_multiplicity_bound(graph: ResolutionGraph, n) -> Fraction:
    """(sum p + 1)^2 / sum p^2 * n^2."""
    p = path_counts(graph)
    return Fraction((sum(p) + 1) ** 2, sum(x * x for x in p)) * Fraction(n) ** 2


def counting_bound(sigma_l, sigma_u, n) -> Fraction:
    """(2 S_l + S_u)^2 / (S_l (S_l + S_u)) * n^2 for S_l >= 1, S_u >= 0."""
    if sigma_l < 1 or sigma_u < 0:
        raise ValueError("need sigma_l >= 1 and sigma_u >= 0")
    sl, su = Fraction(sigma_l), Fraction(sigma_u)
    return (2 * sl + su) ** 2 / (sl * (sl + su)) * Fraction(n) ** 2


def graph_sums(graph: ResolutionGraph) -> tuple:
    """(Sigma_l, Sigma_u): path-count mass of the lower and upper parts."""
    p = path_counts(graph)
    L = graph.split
    return sum(p[:L]), sum(p[L:])


@dataclass
class LemmaCensus:
    max_n: int
    graphs_per_n: dict = field(default_factory=dict)
    lemma15_counterexamples: list = field(default_factory=list)
    lemma16_counterexamples: list = field(default_factory=list)
    lemma15_equalities: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.graphs_per_n.values())

    @property
    def clean(self) -> bool:
        return not self.lemma15_counterexamples and not self.lemma16_counterexamples

    def to_json(self) -> dict:
        return {
            "max_n": self.max_n,
            "graphs_per_n": {str(k): v for k, v in sorted(self.graphs_per_n.items())},
            "graphs_checked": self.total,
            "lemma15_counterexamples": self.lemma15_counterexamples,
            "lemma16_counterexamples": self.lemma16_counterexamples,
            "lemma15_equality_cases": self.lemma15_equalities,
            "pass": self.clean,
        }


def lemma_census(max_n: int, *, lemma15=lemma15_holds, lemma16=lemma16_holds) -> LemmaCensus:
    """Check both surface-graph inequalities on every graph with N <= max_n.

    The predicates are injectable so the harness can be fed a corrupted check.
    """
    census = LemmaCensus(max_n)
    for N in range(1, max_n + 1):
        graphs = enumerate_surface_graphs(N)
        census.graphs_per_n[N] = len(graphs)
        for g in graphs:
            entry = {"graph": g.to_json(), "p": path_counts(g)}
            if not lemma15(g):
                census.lemma15_counterexamples.append(entry)
            elif lemma15_is_equality(g):
                census.lemma15_equalities.append(entry)
            if not lemma16(g):
                census.lemma16_counterexamples.append(entry)
    return census

