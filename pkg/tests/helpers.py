"""Independent oracles shared by the test modules."""

from __future__ import annotations

import random
from itertools import product

import numpy as np

from itercover.poly import QQ, Polynomial, random_homogeneous
from itercover.series import BranchSeries


def random_branch_series(rng: random.Random, l: int, nvars: int, *, terms: int = 3, bound: int = 5) -> BranchSeries:
    """Sparse random g = 1 + w1 + ... + w_{2l} over QQ."""
    parts = []
    for j in range(1, 2 * l + 1):
        f = random_homogeneous(nvars, j, rng.randrange(2**32), QQ, coeff_bound=bound)
        items = list(f.terms.items())
        rng.shuffle(items)
        parts.append(Polynomial(nvars, items[:terms], QQ))
    return BranchSeries.from_parts(l, parts, nvars, QQ)


def cone_points(polys, p: int) -> int:
    """Number of points of F_p^n on which every form vanishes (exhaustive)."""
    n = polys[0].nvars
    grid = np.array(list(product(range(p), repeat=n)), dtype=np.int64).reshape(-1, n)
    alive = np.ones(len(grid), dtype=bool)
    for f in polys:
        val = np.zeros(len(grid), dtype=np.int64)
        for e, c in f.terms.items():
            term = np.full(len(grid), c % p, dtype=np.int64)
            for i, k in enumerate(e):
                for _ in range(k):
                    term = term * grid[:, i] % p
            val = (val + term) % p
        alive &= val == 0
    return int(alive.sum())


def naive_reduce(f: Polynomial, basis) -> Polynomial:
    """Full multivariate division by ``basis`` using only Polynomial arithmetic."""
    dom = f.domain
    rem = Polynomial.zero(f.nvars, dom)
    while not f.is_zero():
        e, c = f.leading_term()
        for g in basis:
            ge, gc = g.leading_term()
            if all(a >= b for a, b in zip(e, ge)):
                shift = tuple(a - b for a, b in zip(e, ge))
                f = f - g * Polynomial(f.nvars, [(shift, c * dom.inv(gc))], dom)
                break
        else:
            mono = Polynomial(f.nvars, [(e, c)], dom)
            rem = rem + mono
            f = f - mono
    return rem


def spoly(a: Polynomial, b: Polynomial) -> Polynomial:
    dom = a.domain
    ea, ca = a.leading_term()
    eb, cb = b.leading_term()
    lcm = tuple(max(x, y) for x, y in zip(ea, eb))
    ma = Polynomial(a.nvars, [(tuple(x - y for x, y in zip(lcm, ea)), dom.inv(ca))], dom)
    mb = Polynomial(b.nvars, [(tuple(x - y for x, y in zip(lcm, eb)), dom.inv(cb))], dom)
    return a * ma - b * mb


def linear_form(nvars: int, coeffs, domain) -> Polynomial:
    return Polynomial(nvars, [(tuple(1 if t == i else 0 for t in range(nvars)), c) for i, c in enumerate(coeffs)], domain)


