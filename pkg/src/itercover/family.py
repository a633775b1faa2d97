"""Numerology, sampling and local coordinates of iterated double covers.

A family is fixed by (M, k, d, m, l): V has dimension M and sits over the
complete intersection of k forms f_i of degrees d_i in P^{M+k}, with m branch
forms g_i of degrees 2 l_i.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import prod
from typing import Mapping, Sequence

from .poly import (
    Polynomial,
    PrimeField,
    QQ,
    dehomogenize_at_point,
    force_vanish_at,
    normalize_point,
    random_homogeneous,
)
from .seeds import derive


@dataclass(frozen=True)
class FamilyDescriptor:
    M: int
    k: int
    d: tuple
    m: int
    l: tuple

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        object.__setattr__(self, "l", tuple(int(x) for x in self.l))

    @classmethod
    def make(cls, M: int, d: Sequence[int], l: Sequence[int]) -> "FamilyDescriptor":
        return cls(M, len(d), tuple(d), len(l), tuple(l))

    @property
    def nvars(self) -> int:
        """Homogeneous coordinates on P^{M+k}."""
        return self.M + self.k + 1

    def to_json(self) -> dict:
        return {"M": self.M, "k": self.k, "d": list(self.d), "m": self.m, "l": list(self.l)}

    @classmethod
    def from_json(cls, data: Mapping) -> "FamilyDescriptor":
        return cls(int(data["M"]), int(data["k"]), tuple(data["d"]), int(data["m"]), tuple(data["l"]))

    def canonical(self) -> "FamilyDescriptor":
        return FamilyDescriptor(
            self.M, self.k, tuple(sorted(self.d, reverse=True)), self.m, tuple(sorted(self.l, reverse=True))
        )

    def __str__(self):
        return f"(M={self.M}, k={self.k}, d={list(self.d)}, m={self.m}, l={list(self.l)})"


def validate_descriptor(desc: FamilyDescriptor) -> tuple[bool, list[str]]:
    """Check the admissibility constraints; returns (ok, violations)."""
    problems = []
    if desc.M < 4:
        problems.append(f"M = {desc.M} < 4")
    if desc.k < 1:
        problems.append(f"k = {desc.k} < 1 (the iterated double space k = 0 is not supported)")
    if 2 * desc.k > desc.M - 1:
        problems.append(f"2k = {2 * desc.k} > M - 1 = {desc.M - 1}")
    if len(desc.d) != desc.k:
        problems.append(f"len(d) = {len(desc.d)} != k = {desc.k}")
    if desc.m < 1:
        problems.append(f"m = {desc.m} < 1")
    if len(desc.l) != desc.m:
        problems.append(f"len(l) = {len(desc.l)} != m = {desc.m}")
    problems += [f"d_{i + 1} = {x} < 2" for i, x in enumerate(desc.d) if x < 2]
    problems += [f"l_{i + 1} = {x} < 2" for i, x in enumerate(desc.l) if x < 2]
    total = sum(desc.d) + sum(desc.l)
    if total != desc.M + desc.k:
        problems.append(f"sum(d) + sum(l) = {total} != M + k = {desc.M + desc.k}")
    return not problems, problems


def _partitions(total: int, parts: int, largest: int, smallest: int = 2):
    """Non-increasing tuples of ``parts`` integers >= smallest summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    hi = min(largest, total - smallest * (parts - 1))
    for first in range(hi, smallest - 1, -1):
        for rest in _partitions(total - first, parts - 1, first, smallest):
            yield (first,) + rest


def enumerate_descriptors(M: int) -> list[FamilyDescriptor]:
    """Every admissible descriptor of dimension M, with d and l non-increasing."""
    if M < 4:
        raise ValueError("M must be at least 4")
    out = []
    for k in range(1, (M - 1) // 2 + 1):
        total = M + k
        for sum_d in range(2 * k, total - 1):
            sum_l = total - sum_d
            for m in range(1, sum_l // 2 + 1):
                for d in _partitions(sum_d, k, sum_d):
                    for l in _partitions(sum_l, m, sum_l):
                        out.append(FamilyDescriptor(M, k, d, m, l))
    out.sort(key=lambda x: (x.k, x.m, tuple(-v for v in x.d), tuple(-v for v in x.l)))
    return out


def degree_of_V(desc: FamilyDescriptor) -> int:
    return 2**desc.m * prod(desc.d)


def index_check(desc: FamilyDescriptor) -> bool:
    """K_V = -H, i.e. -(M+k+1) + sum(d) + sum(l) = -1."""
    return -(desc.M + desc.k + 1) + sum(desc.d) + sum(desc.l) == -1


@dataclass(frozen=True)
class FamilyInstance:
    descriptor: FamilyDescriptor
    f: tuple
    g: tuple
    domain: object = QQ

    def __post_init__(self):
        desc = self.descriptor
        if len(self.f) != desc.k or len(self.g) != desc.m:
            raise ValueError("polynomial counts do not match the descriptor")
        for fi, di in zip(self.f, desc.d):
            if fi.is_zero() or not fi.is_homogeneous(di) or fi.nvars != desc.nvars:
                raise ValueError(f"f must be a nonzero form of degree {di} in {desc.nvars} variables")
        for gi, li in zip(self.g, desc.l):
            if gi.is_zero() or not gi.is_homogeneous(2 * li) or gi.nvars != desc.nvars:
                raise ValueError(f"g must be a nonzero form of degree {2 * li} in {desc.nvars} variables")

    def to_json(self) -> dict:
        data = {
            "descriptor": self.descriptor.to_json(),
            "f": [p.to_json() for p in self.f],
            "g": [p.to_json() for p in self.g],
        }
        if isinstance(self.domain, PrimeField):
            data["prime"] = self.domain.p
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "FamilyInstance":
        domain = PrimeField(int(data["prime"])) if "prime" in data else QQ
        return cls(
            FamilyDescriptor.from_json(data["descriptor"]),
            tuple(Polynomial.from_json(p, domain) for p in data["f"]),
            tuple(Polynomial.from_json(p, domain) for p in data["g"]),
            domain,
        )


def classify_point(instance: FamilyInstance, p: Sequence) -> tuple[int, tuple]:
    """Class e of p and the sorted 1-based index set of branch forms through p."""
    pt = normalize_point(p, instance.domain)
    for i, fi in enumerate(instance.f, 1):
        if fi.evaluate(pt) != 0:
            raise ValueError(f"point is not on Q: f_{i} does not vanish")
    through = tuple(i for i, gi in enumerate(instance.g, 1) if gi.evaluate(pt) == 0)
    return len(through), through


MAX_RESAMPLES = 64


def sample_instance(
    desc: FamilyDescriptor,
    point: Sequence,
    e: int,
    seed: int,
    domain=QQ,
    *,
    branch: Sequence[int] | None = None,
    coeff_bound: int = 10,
) -> tuple[FamilyInstance, tuple]:
    """Random instance through ``point`` whose class there is exactly e.

    Returns the instance and the set of branch indices through the point;
    by default the set is drawn from the seed.
    """
    ok, problems = validate_descriptor(desc)
    if not ok:
        raise ValueError("; ".join(problems))
    if not 0 <= e <= desc.m:
        raise ValueError(f"class {e} outside [0, {desc.m}]")
    pt = normalize_point(point, domain)
    n = desc.nvars
    if len(pt) != n:
        raise ValueError(f"point needs {n} coordinates")
    if branch is None:
        branch = sorted(random.Random(derive(seed, 0)).sample(range(1, desc.m + 1), e))
    branch = tuple(sorted(branch))
    if len(branch) != e or not set(branch) <= set(range(1, desc.m + 1)):
        raise ValueError(f"branch set {branch} is not an {e}-subset of 1..{desc.m}")

    f = tuple(
        force_vanish_at(
            random_homogeneous(n, di, derive(seed, 1, i), domain, coeff_bound=coeff_bound), pt
        )
        for i, di in enumerate(desc.d)
    )
    g = []
    for i, li in enumerate(desc.l, 1):
        for attempt in range(MAX_RESAMPLES):
            gi = random_homogeneous(n, 2 * li, derive(seed, 2, i, attempt), domain, coeff_bound=coeff_bound)
            if i in branch:
                gi = force_vanish_at(gi, pt)
                break
            if gi.evaluate(pt) != 0:
                break
        else:
            raise RuntimeError(f"could not sample g_{i} avoiding the point")
        g.append(gi)
    # forcing can in principle produce a zero form; treat that as a sampling failure
    if any(p.is_zero() for p in f + tuple(g)):
        raise RuntimeError("sampling produced a zero form")
    return FamilyInstance(desc, f, tuple(g), domain), branch


@dataclass(frozen=True)
class TaylorFrame:
    """Local data of an instance at a point p of Q, in affine coordinates z centred at p.

    ``q[i][j]`` and ``w[i][j]`` are 0-based in i and index-aligned in j.
    """

    descriptor: FamilyDescriptor
    point: tuple
    e: int
    branch: tuple
    q: tuple
    w: tuple
    domain: object = QQ
    scales: tuple = field(default=())

    @property
    def nvars(self) -> int:
        return self.descriptor.M + self.descriptor.k


def taylor_frame(instance: FamilyInstance, p: Sequence) -> TaylorFrame:
    dom = instance.domain
    pt = normalize_point(p, dom)
    e, branch = classify_point(instance, pt)
    q = []
    for fi in instance.f:
        comps = dehomogenize_at_point(fi, pt).components
        if comps[0] != 0:
            raise ArithmeticError("f does not vanish at the point")
        q.append(comps)
    w = []
    scales = []
    for i, gi in enumerate(instance.g, 1):
        comps = dehomogenize_at_point(gi, pt).components
        if i in branch:
            scale = dom.convert(1)
        else:
            scale = dom.inv(comps[0].constant_term())
            comps = tuple(c.scale(scale) for c in comps)
        w.append(tuple(comps))
        scales.append(scale)
    return TaylorFrame(instance.descriptor, pt, e, branch, tuple(q), tuple(w), dom, tuple(scales))


@dataclass(frozen=True)
class ProfileEntry:
    kind: str  # "f", "branch" or "g"
    i: int
    j: int
    degree: int
    mult: int

    @property
    def label(self) -> str:
        return f"branch({self.i})" if self.kind == "branch" else f"{self.kind}({self.i},{self.j})"


@dataclass(frozen=True)
class HypertangentProfile:
    e: int
    entries: tuple

    def ratios(self) -> list:
        from fractions import Fraction

        return [Fraction(x.mult, x.degree) for x in self.entries]


def hypertangent_profile(
    desc: FamilyDescriptor, e: int, branch: Sequence[int] | None = None
) -> HypertangentProfile:
    """(degree, multiplicity) pairs of the hypertangent divisors at a class-e point.

    ``branch`` names the branch forms through the point (default 1..e).
    """
    if not 0 <= e <= desc.m:
        raise ValueError(f"class {e} outside [0, {desc.m}]")
    branch = tuple(range(1, e + 1)) if branch is None else tuple(sorted(branch))
    if len(branch) != e:
        raise ValueError("branch set must have e elements")
    entries = []
    for i, di in enumerate(desc.d, 1):
        entries += [ProfileEntry("f", i, j, j, j + 1) for j in range(1, di)]
    entries += [ProfileEntry("branch", i, 1, 1, 2) for i in branch]
    for i, li in enumerate(desc.l, 1):
        if i in branch:
            continue
        for j in range(li, 2 * li):
            if e == 0 and (i, j) == (desc.m, 2 * li - 1):
                continue
            entries.append(ProfileEntry("g", i, j, j, j + 1))
    return HypertangentProfile(e, tuple(entries))
