"""Hand-built instances whose regularity sets are planted to be degenerate."""

from __future__ import annotations

from dataclasses import dataclass

from .family import FamilyDescriptor, FamilyInstance
from .poly import MERSENNE_31, GF, Polynomial, random_homogeneous


@dataclass(frozen=True)
class PlantedInstance:
    name: str
    instance: FamilyInstance
    point: tuple
    reason: str


def _poly(nvars: int, terms: dict, domain) -> Polynomial:
    return Polynomial(nvars, list(terms.items()), domain)


def _high_order_terms(nvars: int, degree: int, min_order: int, seed: int, domain) -> Polynomial:
    """Random form all of whose terms have x0-degree at most ``degree - min_order``."""
    f = random_homogeneous(nvars, degree, seed, domain)
    return _poly(nvars, {e: c for e, c in f.terms.items() if degree - e[0] >= min_order}, domain)


def class0_shared_factor(prime: int = MERSENNE_31, seed: int = 1) -> PlantedInstance:
    """M=4, d=[2], l=[3] at p = (1:0:...:0).

    q_{1,1} = z5, q_{1,2} = z1 z2 and h_{1,4} = z1^4 share the factor z1, so
    the class-0 set vanishes on a surface cone instead of a line.
    """
    F = GF(prime)
    desc = FamilyDescriptor.make(4, [2], [3])
    n = desc.nvars
    e = lambda *pairs: tuple(dict(pairs).get(i, 0) for i in range(n))
    f = _poly(n, {e((0, 1), (5, 1)): 1, e((1, 1), (2, 1)): 1}, F)
    g = _poly(n, {e((0, 6)): 1, e((0, 2), (1, 4)): 1}, F) + _high_order_terms(n, 6, 5, seed, F)
    inst = FamilyInstance(desc, (f,), (g,), F)
    return PlantedInstance("class0-shared-factor", inst, e((0, 1)), "h(1,4) = z1^4 divides into q(1,2) = z1 z2")


def class1_repeated_linear(prime: int = MERSENNE_31, seed: int = 2) -> PlantedInstance:
    """M=5, d=[3], l=[3] at p = (1:0:...:0) with q_{1,1} = w_{1,1} = z6."""
    F = GF(prime)
    desc = FamilyDescriptor.make(5, [3], [3])
    n = desc.nvars
    e = lambda *pairs: tuple(dict(pairs).get(i, 0) for i in range(n))
    f = _poly(n, {e((0, 2), (6, 1)): 1, e((0, 1), (1, 1), (2, 1)): 1, e((3, 3)): 1}, F)
    g = _poly(n, {e((0, 5), (6, 1)): 1}, F) + _high_order_terms(n, 6, 2, seed, F)
    inst = FamilyInstance(desc, (f,), (g,), F)
    return PlantedInstance("class1-repeated-linear", inst, e((0, 1)), "w(1,1) repeats the linear form q(1,1)")


def planted_degenerate_instances(prime: int = MERSENNE_31) -> list:
    return [class0_shared_factor(prime), class1_repeated_linear(prime)]
