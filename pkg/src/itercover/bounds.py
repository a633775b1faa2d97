"""Exact bound calculi for multiplicities, codimensions and degree numerology.

Every quantity here is an integer or a Fraction; comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Sequence

from .family import FamilyDescriptor, degree_of_V, hypertangent_profile, validate_descriptor


class PipelineMismatch(AssertionError):
    """Two independent computations of the same bound disagree."""


def fraction_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RatioProfile:
    ratios: tuple
    e: int

    def __post_init__(self):
        ratios = tuple(Fraction(r) for r in self.ratios)
        if any(r <= 1 for r in ratios):
            raise ValueError("every multiplicity/degree ratio must exceed 1")
        object.__setattr__(self, "ratios", ratios)

    @classmethod
    def from_profile(cls, profile, e: int) -> "RatioProfile":
        return cls(tuple(profile.ratios()), e)


def removed_ratios(profile: RatioProfile) -> list:
    """Indices of the e largest ratios; ties go to the earlier index."""
    order = sorted(range(len(profile.ratios)), key=lambda i: (-profile.ratios[i], i))
    return sorted(order[: profile.e])


def subset_product_bound(profile: RatioProfile) -> Fraction:
    """1 / (minimum product over subsets of size N - e), via sorting."""
    N = len(profile.ratios)
    if not 0 <= profile.e <= N:
        raise ValueError(f"codimension parameter {profile.e} outside [0, {N}]")
    drop = set(removed_ratios(profile))
    kept = [r for i, r in enumerate(profile.ratios) if i not in drop]
    return 1 / prod(kept, start=Fraction(1))


def subset_product_bound_bruteforce(profile: RatioProfile) -> Fraction:
    N = len(profile.ratios)
    best = min(prod(c, start=Fraction(1)) for c in combinations(profile.ratios, N - profile.e))
    return 1 / best


def _a_rule(desc: FamilyDescriptor) -> int:
    return 2 if max(desc.d) >= 3 else min(desc.l)


def class0_lambda_closed(desc: FamilyDescriptor) -> Fraction:
    lm = desc.l[-1]
    a = _a_rule(desc)
    return Fraction(2**desc.k, degree_of_V(desc)) * Fraction(2 * lm, 2 * lm - 1) * Fraction(a + 1, a)


def class0_lambda_profile(desc: FamilyDescriptor) -> Fraction:
    profile = hypertangent_profile(desc, 0)
    return subset_product_bound(RatioProfile.from_profile(profile, desc.k + 1))


def tangent_multiplicity_product(desc: FamilyDescriptor) -> int:
    """Product of the multiplicities of the k tangent hyperplane sections."""
    profile = hypertangent_profile(desc, 0)
    return prod(x.mult for x in profile.entries if x.kind == "f" and x.j == 1)


def class0_lambda(desc: FamilyDescriptor) -> Fraction:
    """Bound on lambda_{k+1} at a class-0 point, cross-checked by two pipelines."""
    closed = class0_lambda_closed(desc)
    generic = class0_lambda_profile(desc)
    if closed != generic:
        raise PipelineMismatch(f"class-0 pipelines disagree for {desc}: {closed} vs {generic}")
    if tangent_multiplicity_product(desc) != 2**desc.k:
        raise PipelineMismatch("tangent multiplicities do not multiply to 2^k")
    return closed


def class0_final_bound(desc: FamilyDescriptor) -> Fraction:
    """(4/deg V) * 3 l_m / (4 l_m - 2).

    This relaxes the (a+1)/a factor of the class-0 estimate to 3/2, so it
    dominates 2^{1-k} * class0_lambda and coincides with it when a = 2.
    """
    lm = desc.l[-1]
    value = Fraction(4, degree_of_V(desc)) * Fraction(3 * lm, 4 * lm - 2)
    if Fraction(2, 2**desc.k) * class0_lambda(desc) > value:
        raise PipelineMismatch("the relaxed class-0 bound is smaller than the estimate it relaxes")
    if value > Fraction(4, degree_of_V(desc)):
        raise PipelineMismatch(f"class-0 bound {value} exceeds 4/deg V")
    return value


def classE_lambda_closed(desc: FamilyDescriptor, e: int) -> Fraction:
    return Fraction(1, prod(desc.d)) * Fraction(1, 2**e) * Fraction(1, 2 ** (desc.m - e)) * 4


def classE_lambda(desc: FamilyDescriptor, e: int) -> Fraction:
    if not 1 <= e <= desc.m:
        raise ValueError(f"class {e} outside [1, {desc.m}]")
    closed = classE_lambda_closed(desc, e)
    generic = subset_product_bound(RatioProfile.from_profile(hypertangent_profile(desc, e), 2))
    # removing the two largest ratios multiplies the reciprocal full product by 4
    if closed != generic:
        raise PipelineMismatch(f"class-{e} pipelines disagree for {desc}: {closed} vs {generic}")
    return closed


def check_degree_identity(n: int, desc: FamilyDescriptor, decomposition: Sequence) -> bool:
    """Given (m_Y, a_Y) pairs with sum a_Y m_Y <= n^2, is every a_Y <= n^2 / m_Y?

    Returns False when the precondition itself fails.
    """
    if any(mY < 1 or aY < 1 for mY, aY in decomposition):
        raise ValueError("classes and coefficients must be positive")
    degV = degree_of_V(desc)
    if sum(aY * mY * degV for mY, aY in decomposition) > n * n * degV:
        return False
    return all(Fraction(aY) <= Fraction(n * n, mY) for mY, aY in decomposition)


@dataclass(frozen=True)
class CodimProblem:
    N: int
    l: int
    m_list: tuple

    def __post_init__(self):
        object.__setattr__(self, "m_list", tuple(int(x) for x in self.m_list))
        if len(self.m_list) != self.l + 1:
            raise ValueError("need l + 1 degrees")
        if not 0 <= self.l <= self.N - 1:
            raise ValueError("need 0 <= l <= N - 1")
        if min(self.m_list) < 2:
            raise ValueError("degrees must be at least 2")


def mu(m_list: Sequence[int], j: int) -> int:
    """Smallest sum of j of the degrees."""
    return sum(sorted(m_list)[:j])


def mu_bruteforce(m_list: Sequence[int], j: int) -> int:
    return min(sum(c) for c in combinations(m_list, j))


def codim_lower_bound(problem: CodimProblem) -> int:
    N = problem.N
    return min((mu(problem.m_list, j + 1) - j) * (N - j) + 1 for j in range(problem.l + 1))


def codim_corollary(problem: CodimProblem) -> int:
    m = min(problem.m_list)
    base = m * problem.N + 1
    if problem.l <= problem.N - 2:
        return base
    return min(base, mu(problem.m_list, problem.l + 1) - problem.l + 1)


def beta_sharp(desc: FamilyDescriptor) -> Fraction:
    """The e = 1 sharp-subcase value; one branch form of half-degree 2 is set aside."""
    if 2 not in desc.l:
        raise ValueError("the sharp subcase needs a branch form with l_i = 2")
    rest = list(desc.l)
    rest.remove(2)
    s = sum(d * (d - 1) for d in desc.d) + sum(x * (3 * x - 1) for x in rest)
    return Fraction(s, 2) + 2


def beta_class0(desc: FamilyDescriptor, last: int | None = None) -> Fraction:
    """Class-0 value; ``last`` (0-based) picks the branch form with the 3l-5 term."""
    last = desc.m - 1 if last is None else last
    s = sum(d * (d - 1) for d in desc.d)
    for i, x in enumerate(desc.l):
        s += x * (3 * x - 5) if i == last else x * (3 * x - 1)
    return Fraction(s, 2) + 2


def lemma25_check(part: str, s: Sequence[int]) -> bool:
    if not s or min(s) < 2:
        raise ValueError("need a non-empty tuple of integers >= 2")
    A = sum(s)
    if part == "i":
        return sum(x * (3 * x - 1) for x in s) >= 5 * A
    if part == "ii":
        return sum(x * (x - 1) for x in s) >= Fraction(A) * (Fraction(A, len(s)) - 1)
    raise ValueError("part must be 'i' or 'ii'")


def epsilon(A, B, k) -> Fraction:
    return Fraction(A) * (Fraction(A, k) - 1) + 5 * B + 4


def zeta(A, k) -> Fraction:
    return Fraction(A) * (Fraction(A, k) - 6)


def epsilon_zeta_check(M: int, k: int) -> bool:
    """eps(A, M+k-2-A) >= 2M on [2k, M+k-2], with zeta minimized where expected."""
    if not 1 <= k <= (M - 1) // 2:
        raise ValueError("need 1 <= k <= (M-1)/2")
    lo, hi = 2 * k, M + k - 2
    values = {A: epsilon(A, M + k - 2 - A, k) for A in range(lo, hi + 1)}
    if any(v < 2 * M for v in values.values()):
        return False
    # eps = zeta + const on the segment, so both share their minimizers
    const = 5 * (M + k - 2) + 4
    if any(values[A] != zeta(A, k) + const for A in values):
        return False
    best = min(zeta(A, k) for A in values)
    expected = 3 * k if 3 * k <= hi else hi
    return zeta(expected, k) == best


def codim_sharp_report(desc: FamilyDescriptor) -> dict:
    """Both branch values of the min(2M - 3, beta) estimate, undecided analytically."""
    beta = beta_sharp(desc)
    return {
        "two_M_minus_3": 2 * desc.M - 3,
        "beta": fraction_str(beta),
        "min": fraction_str(min(Fraction(2 * desc.M - 3), beta)),
        "dominant": "2M-3" if 2 * desc.M - 3 <= beta else "beta",
    }


@dataclass
class BoundReport:
    descriptor: FamilyDescriptor
    degV: int
    class0_lambda: Fraction
    class0_final: Fraction
    classE: list
    passed: bool

    @property
    def threshold(self) -> Fraction:
        return Fraction(4, self.degV)

    def to_json(self) -> dict:
        return {
            "degV": self.degV,
            "class0_lambda": fraction_str(self.class0_lambda),
            "class0_final": fraction_str(self.class0_final),
            "class0_branches": {
                "correct_at_point": fraction_str(self.class0_final),
                "not_correct": fraction_str(self.threshold),
                "reported": fraction_str(max(self.class0_final, self.threshold)),
            },
            "classE": [{"e": e, "value": fraction_str(v)} for e, v in self.classE],
            "threshold": fraction_str(self.threshold),
            "pass": self.passed,
        }


def bound_report(desc: FamilyDescriptor) -> BoundReport:
    ok, problems = validate_descriptor(desc)
    if not ok:
        raise ValueError("; ".join(problems))
    degV = degree_of_V(desc)
    threshold = Fraction(4, degV)
    c0 = class0_lambda(desc)
    c0f = class0_final_bound(desc)
    ce = [(e, classE_lambda(desc, e)) for e in range(1, desc.m + 1)]
    passed = c0f <= threshold and all(v == threshold for _, v in ce)
    return BoundReport(desc, degV, c0, c0f, ce, passed)
