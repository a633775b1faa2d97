"""Exact sparse multivariate polynomials over QQ and prime fields.

Polynomials are immutable maps from dense exponent tuples to nonzero
coefficients.  Rational coefficients are :class:`fractions.Fraction`;
prime-field coefficients are plain ``int`` residues in ``[0, p)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

Exponent = tuple


class Rationals:
    """The field QQ; coefficients are Fractions in lowest terms."""

    name = "QQ"
    characteristic = 0

    def convert(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def norm(self, x):
        return x

    def inv(self, x) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def to_str(self, x) -> str:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The prime field F_p with canonical representatives in ``[0, p)``."""

    def __init__(self, p: int):
        if p < 2:
            raise ValueError(f"not a prime modulus: {p}")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def convert(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def norm(self, x) -> int:
        return x % self.p

    def inv(self, x) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def to_str(self, x) -> str:
        return str(x % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name


QQ = Rationals()
MERSENNE_31 = 2**31 - 1


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def grevlex_key(e: Exponent) -> tuple:
    """Sort key: larger key means larger monomial in graded reverse lex."""
    return (sum(e), tuple(-x for x in reversed(e)))


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables over ``domain``."""

    __slots__ = ("nvars", "domain", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping | Iterable = (), domain=QQ):
        self.nvars = nvars
        self.domain = domain
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            c = domain.convert(c)
            acc[e] = domain.norm(acc.get(e, 0) + c)
        self._terms = {e: c for e, c in acc.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict, domain) -> "Polynomial":
        # trusted constructor: terms already normalized, no zero coefficients
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.domain = domain
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, domain=QQ) -> "Polynomial":
        return cls._raw(nvars, {}, domain)

    @classmethod
    def constant(cls, nvars: int, c, domain=QQ) -> "Polynomial":
        return cls(nvars, [((0,) * nvars, c)], domain)

    @classmethod
    def one(cls, nvars: int, domain=QQ) -> "Polynomial":
        return cls.constant(nvars, 1, domain)

    @classmethod
    def variable(cls, nvars: int, i: int, domain=QQ) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, [(tuple(e), 1)], domain)

    @classmethod
    def monomial(cls, e: Sequence[int], c=1, domain=QQ) -> "Polynomial":
        return cls(len(e), [(tuple(e), c)], domain)

    # -- basic properties ---------------------------------------------
    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self._terms}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs == {d})

    def constant_term(self):
        return self._terms.get((0,) * self.nvars, self.domain.convert(0))

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self._terms.items(), key=lambda t: grevlex_key(t[0]))

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.nvars != self.nvars or other.domain != self.domain:
            raise ValueError("polynomials live in different rings")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.nvars, other, self.domain)

    def __add__(self, other):
        other = self._coerce(other)
        norm = self.domain.norm
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = norm(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.nvars, out, self.domain)

    __radd__ = __add__

    def __neg__(self):
        norm = self.domain.norm
        return Polynomial._raw(self.nvars, {e: norm(-c) for e, c in self._terms.items()}, self.domain)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = self.domain.convert(c)
        if c == 0:
            return Polynomial.zero(self.nvars, self.domain)
        norm = self.domain.norm
        return Polynomial._raw(self.nvars, {e: norm(v * c) for e, v in self._terms.items()}, self.domain)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        return self.mul_truncated(other, None)

    __rmul__ = __mul__

    def mul_truncated(self, other: "Polynomial", max_degree: int | None) -> "Polynomial":
        """Product keeping only terms of total degree <= max_degree."""
        self._check(other)
        norm = self.domain.norm
        out: dict = {}
        a_items = list(self._terms.items())
        b_items = list(other._terms.items())
        if max_degree is not None:
            a_items = [(e, c, sum(e)) for e, c in a_items]
            b_items = [(e, c, sum(e)) for e, c in b_items]
            for ea, ca, da in a_items:
                for eb, cb, db in b_items:
                    if da + db > max_degree:
                        continue
                    e = tuple(x + y for x, y in zip(ea, eb))
                    out[e] = out.get(e, 0) + ca * cb
        else:
            for ea, ca in a_items:
                for eb, cb in b_items:
                    e = tuple(x + y for x, y in zip(ea, eb))
                    out[e] = out.get(e, 0) + ca * cb
        out = {e: v for e, v in ((e, norm(v)) for e, v in out.items()) if v != 0}
        return Polynomial._raw(self.nvars, out, self.domain)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.one(self.nvars, self.domain)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (
                self.nvars == other.nvars
                and self.domain == other.domain
                and self._terms == other._terms
            )
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other, self.domain)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.domain, frozenset(self._terms.items())))
        return self._hash

    # -- structure -----------------------------------------------------
    def homogeneous_component(self, d: int) -> "Polynomial":
        return Polynomial._raw(
            self.nvars, {e: c for e, c in self._terms.items() if sum(e) == d}, self.domain
        )

    def truncate(self, max_degree: int) -> "Polynomial":
        return Polynomial._raw(
            self.nvars, {e: c for e, c in self._terms.items() if sum(e) <= max_degree}, self.domain
        )

    def components(self, top: int | None = None) -> list:
        """Homogeneous components indexed by degree 0..top (default: degree)."""
        top = self.degree() if top is None else top
        buckets: list[dict] = [{} for _ in range(max(top, -1) + 1)]
        for e, c in self._terms.items():
            d = sum(e)
            if d > top:
                raise ValueError(f"term of degree {d} exceeds requested top degree {top}")
            buckets[d][e] = c
        return [Polynomial._raw(self.nvars, b, self.domain) for b in buckets]

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        dom = self.domain
        pt = [dom.convert(x) for x in point]
        total = dom.convert(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = v * x**k
            total = total + v
        return dom.norm(total)

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``images[i]`` for variable ``i``."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not images:
            return self
        target = images[0]
        powers: list[dict] = [{0: Polynomial.one(target.nvars, target.domain)} for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * images[i]
            return cache[k]

        acc: dict = {}
        norm = target.domain.norm
        for e, c in self._terms.items():
            c = target.domain.convert(c)
            term = Polynomial.constant(target.nvars, c, target.domain)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term._terms.items():
                acc[te] = acc.get(te, 0) + tc
        acc = {e: v for e, v in ((e, norm(v)) for e, v in acc.items()) if v != 0}
        return Polynomial._raw(target.nvars, acc, target.domain)

    def change_domain(self, domain) -> "Polynomial":
        """Map coefficients into ``domain`` (e.g. reduce QQ -> F_p)."""
        return Polynomial(self.nvars, self._terms, domain)

    # -- display / serialization --------------------------------------
    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            cs = self.domain.to_str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self.to_string()}, {self.domain!r})"

    def to_json(self) -> dict:
        data = {
            "nvars": self.nvars,
            "terms": [{"c": self.domain.to_str(c), "e": list(e)} for e, c in self.sorted_terms()],
        }
        if isinstance(self.domain, PrimeField):
            data["prime"] = self.domain.p
        return data

    @classmethod
    def from_json(cls, data: Mapping, domain=None) -> "Polynomial":
        if domain is None:
            domain = PrimeField(int(data["prime"])) if "prime" in data else QQ
        return cls(int(data["nvars"]), [(t["e"], Fraction(t["c"])) for t in data["terms"]], domain)


@dataclass(frozen=True)
class HomogeneousDecomposition:
    """Components ``components[d]``, each zero or homogeneous of degree d."""

    components: tuple

    def __getitem__(self, d: int) -> Polynomial:
        return self.components[d]

    def __len__(self):
        return len(self.components)

    def total(self) -> Polynomial:
        acc = self.components[0]
        for c in self.components[1:]:
            acc = acc + c
        return acc


def homogeneous_component(f: Polynomial, d: int) -> Polynomial:
    if d < 0:
        raise ValueError("degree must be non-negative")
    return f.homogeneous_component(d)


def evaluate(f: Polynomial, point: Sequence):
    return f.evaluate(point)


def normalize_point(p: Sequence, domain) -> tuple:
    """Scale a projective point so its first coordinate is 1."""
    pt = [domain.convert(x) for x in p]
    if pt[0] == 0:
        raise ValueError("point lies on the hyperplane x0 = 0; move it to an affine chart first")
    inv = domain.inv(pt[0])
    return tuple(domain.norm(x * inv) for x in pt)


def dehomogenize_at_point(F: Polynomial, p: Sequence) -> HomogeneousDecomposition:
    """Components of F(1, z1 + p1, ..., zn + pn) in affine coordinates centred at p."""
    if not F.is_homogeneous():
        raise ValueError("expected a homogeneous polynomial")
    dom = F.domain
    pt = normalize_point(p, dom)
    n = F.nvars - 1
    images = [Polynomial.one(n, dom)]
    for i in range(n):
        images.append(Polynomial.variable(n, i, dom) + pt[i + 1])
    shifted = F.compose(images)
    top = max(F.degree(), 0)
    return HomogeneousDecomposition(tuple(shifted.components(top)))


def monomials(nvars: int, degree: int) -> list:
    """All exponent tuples of the given total degree, in descending grevlex order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=grevlex_key, reverse=True)
    return out


def random_homogeneous(
    nvars: int,
    degree: int,
    seed: int,
    domain=QQ,
    *,
    coeff_bound: int = 10,
    density: float = 1.0,
) -> Polynomial:
    """Deterministic random form of the given degree.

    Over QQ coefficients are uniform nonzero integers in ``[-coeff_bound, coeff_bound]``;
    over F_p they are uniform in ``F_p \\ {0}``.  ``density < 1`` drops monomials at
    random (at least one is always kept).
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    rng = random.Random(seed)
    mons = monomials(nvars, degree)
    terms = []
    for e in mons:
        if density < 1.0 and rng.random() >= density:
            continue
        if isinstance(domain, PrimeField):
            c = rng.randrange(1, domain.p)
        else:
            c = rng.choice([x for x in range(-coeff_bound, coeff_bound + 1) if x])
        terms.append((e, c))
    if not terms:
        terms.append((mons[rng.randrange(len(mons))], 1))
    return Polynomial(nvars, terms, domain)


def force_vanish_at(F: Polynomial, p: Sequence) -> Polynomial:
    """Return F - F(p) * x0^D, which is homogeneous of degree D and vanishes at p."""
    D = F.degree()
    if D < 0:
        return F
    dom = F.domain
    pt = normalize_point(p, dom)
    val = F.evaluate(pt)
    if val == 0:
        return F
    e = (D,) + (0,) * (F.nvars - 1)
    return F - Polynomial(F.nvars, [(e, val)], dom)
