"""Formal square root of g = 1 + w1 + ... + w_{2l} and its truncations.

Everything is computed exactly.  Over QQ the coefficients are Fractions; the
same code runs over F_p for odd p, which agrees with computing over QQ and
reducing afterwards because only powers of 2 (times small integers) appear in
denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .poly import Polynomial


@lru_cache(maxsize=None)
def half_binomial(i: int) -> Fraction:
    """binomial(1/2, i), the coefficient of t^i in (1 + t)^(1/2)."""
    if i < 0:
        raise ValueError("index must be non-negative")
    if i == 0:
        return Fraction(1)
    return half_binomial(i - 1) * (Fraction(1, 2) - (i - 1)) / i


@dataclass(frozen=True)
class BranchSeries:
    """g = 1 + w[1] + ... + w[2l]; ``w[0]`` is the constant 1."""

    l: int
    w: tuple

    def __post_init__(self):
        if self.l < 1:
            raise ValueError("half-degree must be positive")
        if len(self.w) != 2 * self.l + 1:
            raise ValueError(f"expected components w0..w{2 * self.l}, got {len(self.w)}")
        if self.w[0] != Polynomial.one(self.nvars, self.domain):
            raise ValueError("w0 must be normalized to 1")
        for j, wj in enumerate(self.w):
            if not wj.is_zero() and not wj.is_homogeneous(j):
                raise ValueError(f"w{j} is not homogeneous of degree {j}")

    @classmethod
    def from_parts(cls, l: int, parts, nvars: int | None = None, domain=None) -> "BranchSeries":
        """Build from w1..w_k (k <= 2l); missing tail entries are zero."""
        parts = list(parts)
        if nvars is None or domain is None:
            ref = next(p for p in parts if isinstance(p, Polynomial))
            nvars, domain = ref.nvars, ref.domain
        zero = Polynomial.zero(nvars, domain)
        parts = [zero if p is None else p for p in parts]
        if len(parts) > 2 * l:
            raise ValueError("too many components")
        parts += [zero] * (2 * l - len(parts))
        return cls(l, (Polynomial.one(nvars, domain), *parts))

    @classmethod
    def from_polynomial(cls, l: int, g: Polynomial) -> "BranchSeries":
        comps = g.components(2 * l)
        return cls(l, tuple(comps))

    @property
    def nvars(self) -> int:
        return self.w[-1].nvars

    @property
    def domain(self):
        return self.w[-1].domain

    def polynomial(self) -> Polynomial:
        acc = self.w[0]
        for wj in self.w[1:]:
            acc = acc + wj
        return acc

    def replace(self, updates: dict) -> "BranchSeries":
        w = list(self.w)
        for j, poly in updates.items():
            if not 1 <= j <= 2 * self.l:
                raise ValueError(f"component index {j} out of range")
            w[j] = poly
        return BranchSeries(self.l, tuple(w))


@dataclass(frozen=True)
class TruncatedRoot:
    """[sqrt g]_j = 1 + Phi_1 + ... + Phi_j; ``parts[i-1]`` is Phi_i."""

    j: int
    parts: tuple

    def phi(self, i: int) -> Polynomial:
        return self.parts[i - 1]

    def polynomial(self) -> Polynomial:
        ref = self.parts[0]
        acc = Polynomial.one(ref.nvars, ref.domain)
        for p in self.parts:
            acc = acc + p
        return acc


def _check_order(g: BranchSeries, j: int, upper: int):
    if not 1 <= j <= upper:
        raise ValueError(f"order {j} outside [1, {upper}]")


def truncated_sqrt(g: BranchSeries, j: int) -> TruncatedRoot:
    _check_order(g, j, 2 * g.l)
    dom = g.domain
    s = Polynomial.zero(g.nvars, dom)
    for wj in g.w[1 : j + 1]:
        s = s + wj
    # s has no constant term, so s^i only contributes in degrees >= i
    total = Polynomial.zero(g.nvars, dom)
    power = Polynomial.one(g.nvars, dom)
    for i in range(1, j + 1):
        power = power.mul_truncated(s, j)
        total = total + power.scale(dom.convert(half_binomial(i)))
    comps = total.components(j)
    return TruncatedRoot(j, tuple(comps[1:]))


def root_components(g: BranchSeries, j: int) -> list:
    """[1, Phi_1, ..., Phi_j] from the degree-wise square identity.

    Comparing degree-n parts of (1 + Phi_1 + ...)^2 = g gives
    2 Phi_n = w_n - sum_{0<a<n} Phi_a Phi_{n-a}, which avoids expanding the
    binomial series.  Agrees with :func:`truncated_sqrt`.
    """
    _check_order(g, j, 2 * g.l)
    half = g.domain.convert(Fraction(1, 2))
    phi = [g.w[0]]
    for n in range(1, j + 1):
        acc = g.w[n]
        for a in range(1, n):
            acc = acc - phi[a] * phi[n - a]
        phi.append(acc.scale(half))
    return phi


def hypertangent_polynomials(g: BranchSeries, degrees) -> dict:
    """h_c[g] for several c at once; h_{j+1} is twice the next root component Phi_{j+1}."""
    degrees = list(degrees)
    for c in degrees:
        _check_order(g, c - 1, 2 * g.l - 1)
    phi = root_components(g, max(degrees))
    return {c: phi[c].scale(g.domain.convert(2)) for c in degrees}


def residual(g: BranchSeries, j: int) -> Polynomial:
    """g^(j) = g - [sqrt g]_j^2."""
    root = truncated_sqrt(g, j).polynomial()
    return g.polynomial() - root * root


def hypertangent_polynomial(g: BranchSeries, degree: int) -> Polynomial:
    """h_degree[g]: the degree-``degree`` component of g - [sqrt g]_{degree-1}^2."""
    _check_order(g, degree - 1, 2 * g.l - 1)
    res = residual(g, degree - 1)
    low = res.min_degree()
    if low != -1 and low < degree:
        raise ArithmeticError(f"residual has a nonzero component in degree {low} < {degree}")
    return res.homogeneous_component(degree)


def xi_sequence(g: BranchSeries) -> dict:
    """The polynomials xi_{l+1}, ..., xi_{2l} as a dict keyed by degree.

    They depend on w1..wl only: the upper components of ``g`` are ignored.
    """
    l = g.l
    zero = Polynomial.zero(g.nvars, g.domain)
    work = g.replace({j: zero for j in range(l + 1, 2 * l + 1)})
    xi: dict = {}
    for j in range(l, 2 * l):
        # with w_{j+1} = 0 the hypertangent polynomial is exactly A_j(...)
        xi[j + 1] = -hypertangent_polynomial(work, j + 1)
        work = work.replace({j + 1: xi[j + 1]})
    return xi


def lemma23_substitution_check(g: BranchSeries, c: int) -> bool:
    """After w_j := xi_j for l < j < c, is h_c equal to w_c - xi_c?"""
    l = g.l
    if not l + 1 <= c <= 2 * l:
        raise ValueError(f"order {c} outside [{l + 1}, {2 * l}]")
    xi = xi_sequence(g)
    substituted = g.replace({j: xi[j] for j in range(l + 1, c)})
    return hypertangent_polynomial(substituted, c) == g.w[c] - xi[c]
