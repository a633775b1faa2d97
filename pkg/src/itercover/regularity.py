"""Regularity of the local polynomial systems at a point of Q.

A point is regular when the listed q-, w- and h-polynomials cut out a cone of
the expected dimension (number of affine coordinates minus set size).  The
dimension is computed exactly over F_p with a Groebner basis; if the pair cap
is hit, a randomized linear-slice test is used instead.

Verdicts over F_p say nothing certified about the same polynomials over QQ.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .family import TaylorFrame
from .groebner import DEFAULT_MAX_PAIRS, Undecided, groebner_basis, staircase_dimension
from .poly import Polynomial, PrimeField, monomials
from .series import BranchSeries, hypertangent_polynomials

CAVEAT = (
    "dimension computed over F_p for the reduced instance; regularity over QQ "
    "is not certified. Smoothness of Q and normal crossings of the branch "
    "divisors are assumed, not checked."
)
DIMENSION_READING = "target codimension equals the number of polynomials in the set (both classes)"


class ClassInconsistency(ValueError):
    """A frame claims p is off W_i while the constant term of g_i vanishes."""


@dataclass(frozen=True)
class RegularitySet:
    nvars: int
    polynomials: tuple
    labels: tuple

    @property
    def expected_codimension(self) -> int:
        return len(self.polynomials)

    @property
    def expected_dimension(self) -> int:
        return self.nvars - len(self.polynomials)


def build_regularity_set(frame: TaylorFrame) -> RegularitySet:
    desc = frame.descriptor
    branch = set(frame.branch)
    polys, labels = [], []
    for i, qi in enumerate(frame.q, 1):
        for j in range(1, desc.d[i - 1] + 1):
            polys.append(qi[j])
            labels.append(f"q({i},{j})")
    for i in sorted(branch):
        polys.append(frame.w[i - 1][1])
        labels.append(f"w({i},1)")
    for i, wi in enumerate(frame.w, 1):
        if i in branch:
            continue
        li = desc.l[i - 1]
        if wi[0].constant_term() != 1:
            raise ClassInconsistency(f"w({i},0) = {wi[0].constant_term()} but p is not on W_{i}")
        wanted = [j for j in range(li + 1, 2 * li + 1) if not (frame.e == 0 and (i, j) == (desc.m, 2 * li))]
        hs = hypertangent_polynomials(BranchSeries(li, tuple(wi)), wanted)
        for j in wanted:
            polys.append(hs[j])
            labels.append(f"h({i},{j})")
    return RegularitySet(frame.nvars, tuple(polys), tuple(labels))


def eliminate_linear(polys: Sequence[Polynomial]) -> tuple[list, int]:
    """Restrict to the common zero space of the linear members.

    Returns the restricted non-linear polynomials (zero ones dropped) and the
    dimension of the linear space they now live on.  The cone dimension of the
    original system equals that of the restricted one.
    """
    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        return [], None
    n = polys[0].nvars
    dom = polys[0].domain
    p = dom.p
    linear = [f for f in polys if f.degree() == 1]
    rest = [f for f in polys if f.degree() != 1]
    rows = []
    for f in linear:
        row = [0] * n
        for e, c in f.terms.items():
            row[e.index(1)] = c
        rows.append(row)
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if not pivots:
        return rest, n
    free = [c for c in range(n) if c not in pivots]
    n2 = len(free)
    images: list = [None] * n
    for k, c in enumerate(free):
        images[c] = Polynomial.variable(n2, k, dom)
    for row, col in zip(rows, pivots):
        terms = [(tuple(1 if t == k else 0 for t in range(n2)), (-row[c]) % p) for k, c in enumerate(free)]
        images[col] = Polynomial(n2, terms, dom)
    if n2 == 0:
        # only the origin is left; every form of positive degree vanishes there
        return [f for f in rest if f.degree() == 0], 0
    restricted = [f.compose(images) for f in rest]
    return [f for f in restricted if not f.is_zero()], n2


def ideal_dimension(polys: Sequence[Polynomial], *, max_pairs: int = DEFAULT_MAX_PAIRS) -> int:
    """Dimension of the affine cone cut out by homogeneous forms over F_p.

    Raises :class:`Undecided` when the Buchberger pair cap is exceeded.
    Returns -1 if the cone is empty (a nonzero constant is present).
    """
    polys = list(polys)
    if not polys:
        raise ValueError("empty system: ambient dimension unknown")
    n = polys[0].nvars
    for f in polys:
        if not isinstance(f.domain, PrimeField):
            raise TypeError("ideal_dimension works over prime fields")
        if not f.is_homogeneous():
            raise ValueError("ideal_dimension expects homogeneous forms")
    if any(f.degree() == 0 for f in polys):
        return -1
    rest, n2 = eliminate_linear(polys)
    if n2 is None:
        return n
    if not rest:
        return n2
    if n2 == 0:
        return 0
    gb = groebner_basis(rest, max_pairs=max_pairs)
    return staircase_dimension(gb.leading, n2)


def _modular_rank(mat: np.ndarray, p: int) -> int:
    a = mat.astype(np.int64) % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        below = np.nonzero(a[r + 1 :, c])[0] + r + 1
        if below.size:
            factors = a[below, c][:, None]
            a[below] = (a[below] - factors * a[r]) % p
        r += 1
    return r


def only_trivial_zero(polys: Sequence[Polynomial]) -> bool:
    """For n forms in n variables: is the origin their only common zero?

    Decided by the Macaulay matrix in degree sum(d_i - 1) + 1, which has full
    column rank exactly when the forms are a regular sequence.
    """
    rest, n = eliminate_linear(polys)
    if n is None:
        return False
    if n == 0:
        return True
    if len(rest) < n:
        return False
    if len(rest) > n:
        raise ValueError("over-determined system")
    p = rest[0].domain.p
    D = sum(f.degree() - 1 for f in rest) + 1
    cols = monomials(n, D)
    index = {e: i for i, e in enumerate(cols)}
    row_count = sum(comb(D - f.degree() + n - 1, n - 1) for f in rest)
    mat = np.zeros((row_count, len(cols)), dtype=np.int64)
    r = 0
    for f in rest:
        items = list(f.terms.items())
        for shift in monomials(n, D - f.degree()):
            for e, c in items:
                mat[r, index[tuple(a + b for a, b in zip(e, shift))]] = c
            r += 1
    return _modular_rank(mat, p) == len(cols)


def monte_carlo_slice(polys: Sequence[Polynomial], trials: int, seed: int) -> str:
    """Restrict to random linear subspaces of complementary dimension.

    Each trial restricts the r forms to a random r-dimensional subspace and
    asks whether only the origin survives.  A trial with only the trivial zero
    proves the expected dimension, so the verdict is "likely-regular"; if every
    trial exhibits a nonzero common zero, the verdict is "not-regular".
    """
    if trials <= 0:
        return "undecided"
    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        return "undecided"
    n = polys[0].nvars
    r = len(polys)
    dom = polys[0].domain
    if r > n:
        return "undecided"
    rng = random.Random(seed)
    for _ in range(trials):
        images = [
            Polynomial(r, [(tuple(1 if t == k else 0 for t in range(r)), rng.randrange(dom.p)) for k in range(r)], dom)
            for _ in range(n)
        ]
        sliced = [f.compose(images) for f in polys]
        if only_trivial_zero(sliced):
            return "likely-regular"
    return "not-regular"


@dataclass
class RegularityReport:
    point: tuple
    e: int
    method: str
    prime: int
    dimension: int | None
    expected_dimension: int
    verdict: str
    passed: bool
    trials: int = 0
    labels: tuple = ()
    notes: tuple = field(default=(CAVEAT, DIMENSION_READING))

    def to_json(self) -> dict:
        return {
            "point": [str(x) for x in self.point],
            "class": self.e,
            "method": self.method,
            "prime": self.prime,
            "dimension": self.dimension,
            "expected_dimension": self.expected_dimension,
            "verdict": self.verdict,
            "pass": self.passed,
            "trials": self.trials,
            "labels": list(self.labels),
        }


def is_regular(
    frame: TaylorFrame,
    *,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    slice_trials: int = 8,
    seed: int = 0,
) -> RegularityReport:
    if not isinstance(frame.domain, PrimeField):
        raise TypeError("regularity is checked over a prime field")
    p = frame.domain.p
    if p <= 2 ** (2 * max(frame.descriptor.l)):
        raise ValueError(f"prime {p} is too small for the square-root denominators")
    rset = build_regularity_set(frame)
    expected = rset.expected_dimension
    try:
        dim = ideal_dimension(rset.polynomials, max_pairs=max_pairs)
    except Undecided:
        verdict = monte_carlo_slice(rset.polynomials, slice_trials, seed)
        return RegularityReport(
            frame.point, frame.e, "monte-carlo-slice", p, None, expected, verdict,
            verdict == "likely-regular", slice_trials, rset.labels,
        )
    ok = dim == expected
    return RegularityReport(
        frame.point, frame.e, "groebner", p, dim, expected,
        "regular" if ok else "not-regular", ok, 0, rset.labels,
    )
