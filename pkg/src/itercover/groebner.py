"""Buchberger's algorithm over F_p in graded reverse lexicographic order.

Monomials are packed into Python ints: exponent of variable i in bits
[W*i, W*i + W), total degree in the field above the variables.  The top bit
of every field is a guard bit, which makes divisibility a single subtraction
and the grevlex comparison key an affine function of the packed value.

Pair selection follows the normal strategy (smallest lcm first); useless
pairs are discarded with the Gebauer-Moeller installation of Buchberger's
coprime and chain criteria.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .poly import Polynomial, PrimeField

W = 16
FIELD_MASK = (1 << W) - 1
MAX_EXPONENT = (1 << (W - 1)) - 1
DEFAULT_MAX_PAIRS = 200_000


class Undecided(RuntimeError):
    """A resource cap was hit before the computation finished."""


class _Packing:
    def __init__(self, nvars: int):
        self.n = nvars
        self.deg_shift = W * nvars
        self.guard = sum(1 << (W * i + W - 1) for i in range(nvars + 1))

    def pack(self, e) -> int:
        m = 0
        for i, x in enumerate(e):
            if x > MAX_EXPONENT:
                raise OverflowError("exponent too large for packed monomials")
            m |= x << (W * i)
        return m | (sum(e) << self.deg_shift)

    def unpack(self, m: int) -> tuple:
        return tuple((m >> (W * i)) & FIELD_MASK for i in range(self.n))

    def key(self, m: int) -> int:
        return ((m >> self.deg_shift) << (self.deg_shift + 1)) - m

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        m = 0
        deg = 0
        for i in range(self.n):
            s = W * i
            x = max((a >> s) & FIELD_MASK, (b >> s) & FIELD_MASK)
            deg += x
            m |= x << s
        return m | (deg << self.deg_shift)

    def support(self, m: int) -> int:
        mask = 0
        for i in range(self.n):
            if (m >> (W * i)) & FIELD_MASK:
                mask |= 1 << i
        return mask

    def degree(self, m: int) -> int:
        return m >> self.deg_shift


@dataclass
class _Element:
    lm: int
    supp: int
    mons: list  # tail monomials, descending
    coefs: list  # tail coefficients; the leading coefficient is 1


@dataclass
class GroebnerResult:
    nvars: int
    prime: int
    leading: list  # leading exponent tuples of the (not necessarily reduced) basis
    basis: list  # Polynomial objects
    pairs_processed: int
    pairs_created: int


def _to_dict(f: Polynomial, pk: _Packing) -> dict:
    return {pk.pack(e): c for e, c in f.terms.items()}


def _normal_form(f: dict, basis: list, pk: _Packing, p: int, stats: list) -> dict:
    """Fully reduce ``f`` (consumed) modulo the monic elements of ``basis``."""
    key = pk.key
    guard = pk.guard
    heap = [(-key(m), m) for m in f]
    heapq.heapify(heap)
    out = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, 0)
        if not c:
            continue
        mg = m | guard
        for g in basis:
            if (mg - g.lm) & guard == guard:
                break
        else:
            out[m] = c
            continue
        shift = m - g.lm
        stats[0] += 1
        for tm, tc in zip(g.mons, g.coefs):
            mm = tm + shift
            old = f.get(mm)
            if old is None:
                v = (-c * tc) % p
                if v:
                    f[mm] = v
                    heapq.heappush(heap, (-key(mm), mm))
            else:
                v = (old - c * tc) % p
                if v:
                    f[mm] = v
                else:
                    del f[mm]
    return out


def _make_element(f: dict, pk: _Packing, p: int) -> _Element:
    items = sorted(f.items(), key=lambda t: pk.key(t[0]), reverse=True)
    lm, lc = items[0]
    inv = pow(lc, -1, p)
    return _Element(
        lm,
        pk.support(lm),
        [m for m, _ in items[1:]],
        [c * inv % p for _, c in items[1:]],
    )


def _spoly(a: _Element, b: _Element, lcm: int) -> dict:
    out: dict = {}
    sa = lcm - a.lm
    sb = lcm - b.lm
    for m, c in zip(a.mons, a.coefs):
        out[m + sa] = c
    for m, c in zip(b.mons, b.coefs):
        mm = m + sb
        out[mm] = out.get(mm, 0) - c
    return out


def groebner_basis(
    polys: Sequence[Polynomial], *, max_pairs: int = DEFAULT_MAX_PAIRS
) -> GroebnerResult:
    """Groebner basis of the ideal generated by ``polys`` over F_p (grevlex)."""
    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        raise ValueError("need at least one nonzero polynomial to fix the ring")
    dom = polys[0].domain
    if not isinstance(dom, PrimeField):
        raise TypeError("Groebner bases are computed over prime fields only")
    nvars = polys[0].nvars
    p = dom.p
    pk = _Packing(nvars)
    stats = [0]

    elements: list[_Element] = []
    active: list[int] = []  # indices of elements kept in G
    pairs: list = []  # heap of (key(lcm), i, j, lcm)
    live: dict = {}  # (i, j) -> lcm for pairs still pending
    created = processed = 0

    def install(h: _Element):
        nonlocal created
        hi = len(elements)
        elements.append(h)
        divides = pk.divides
        # Gebauer-Moeller: new pairs (h, g) survive the chain criterion among themselves
        pending = [(gi, pk.lcm(h.lm, elements[gi].lm), (h.supp & elements[gi].supp) == 0) for gi in active]
        kept = []
        while pending:
            gi, lcm, coprime = pending.pop(0)
            if coprime or not (
                any(divides(l2, lcm) for _, l2, _ in pending) or any(divides(l2, lcm) for _, l2, _ in kept)
            ):
                kept.append((gi, lcm, coprime))
        # old pairs made redundant by h
        hlm = h.lm
        for (a, b), lab in list(live.items()):
            if divides(hlm, lab):
                if pk.lcm(elements[a].lm, hlm) != lab and pk.lcm(elements[b].lm, hlm) != lab:
                    del live[(a, b)]
        for gi, lcm, coprime in kept:
            if coprime:
                continue
            live[(gi, hi)] = lcm
            heapq.heappush(pairs, (pk.key(lcm), gi, hi, lcm))
            created += 1
        active[:] = [gi for gi in active if not divides(hlm, elements[gi].lm)]
        active.append(hi)

    # seed with inter-reduced generators in increasing grevlex order
    gens = sorted(
        (_to_dict(f, pk) for f in polys),
        key=lambda d: max(pk.key(m) for m in d),
    )
    for gdict in gens:
        r = _normal_form(gdict, [elements[i] for i in active], pk, p, stats)
        if r:
            install(_make_element(r, pk, p))

    while pairs:
        _, a, b, lcm = heapq.heappop(pairs)
        if live.pop((a, b), None) is None:
            continue
        processed += 1
        if processed > max_pairs:
            raise Undecided(f"pair limit {max_pairs} exceeded")
        s = _spoly(elements[a], elements[b], lcm)
        s = {m: c % p for m, c in s.items() if c % p}
        if not s:
            continue
        r = _normal_form(s, [elements[i] for i in active], pk, p, stats)
        if r:
            install(_make_element(r, pk, p))

    basis = []
    leading = []
    for gi in active:
        g = elements[gi]
        terms = [(pk.unpack(g.lm), 1)] + [(pk.unpack(m), c) for m, c in zip(g.mons, g.coefs)]
        basis.append(Polynomial(nvars, terms, dom))
        leading.append(pk.unpack(g.lm))
    return GroebnerResult(nvars, p, leading, basis, processed, created)


def staircase_dimension(leading: Sequence[tuple], nvars: int) -> int:
    """Krull dimension of k[x]/(monomials): largest independent variable set.

    A set S is independent when no leading monomial is supported inside S.
    Returns -1 for the unit ideal.
    """
    supports = []
    for e in leading:
        mask = 0
        for i, x in enumerate(e):
            if x:
                mask |= 1 << i
        if mask == 0:
            return -1
        supports.append(mask)
    full = (1 << nvars) - 1
    for size in range(nvars, -1, -1):
        for combo in combinations(range(nvars), size):
            s = 0
            for i in combo:
                s |= 1 << i
            if all(sup & (full ^ s) for sup in supports):
                return size
    return 0
