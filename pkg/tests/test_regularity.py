from __future__ import annotations

import dataclasses
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import cone_points, linear_form
from itercover.family import FamilyDescriptor, enumerate_descriptors, sample_instance, taylor_frame
from itercover.fixtures import planted_degenerate_instances
from itercover.poly import GF, MERSENNE_31, Polynomial, random_homogeneous
from itercover.regularity import (
    ClassInconsistency,
    build_regularity_set,
    eliminate_linear,
    ideal_dimension,
    is_regular,
    monte_carlo_slice,
    only_trivial_zero,
)

F = GF(MERSENNE_31)
D = FamilyDescriptor.make


def frame_for(desc, e, seed, point=None):
    point = point or (1,) + tuple(range(2, desc.nvars + 1))
    inst, _ = sample_instance(desc, point, e, seed, F)
    return taylor_frame(inst, point)


def test_labels_class0():
    rset = build_regularity_set(frame_for(D(5, [3], [3]), 0, 1))
    assert rset.labels == ("q(1,1)", "q(1,2)", "q(1,3)", "h(1,4)", "h(1,5)")
    assert rset.expected_codimension == 5 and rset.nvars == 6


def test_labels_class1():
    rset = build_regularity_set(frame_for(D(5, [3], [3]), 1, 1))
    assert rset.labels == ("q(1,1)", "q(1,2)", "q(1,3)", "w(1,1)")


@pytest.mark.parametrize("M", [4, 5, 6])
def test_set_sizes_and_degrees(M):
    for desc in enumerate_descriptors(M):
        for e in range(desc.m + 1):
            frame = frame_for(desc, e, 3)
            rset = build_regularity_set(frame)
            if e == 0:
                assert len(rset.polynomials) == M + desc.k - 1
            else:
                off = sum(li for i, li in enumerate(desc.l, 1) if i not in frame.branch)
                assert len(rset.polynomials) == sum(desc.d) + e + off
            for label, poly in zip(rset.labels, rset.polynomials):
                j = 1 if label.startswith("w") else int(label.split(",")[1].rstrip(")"))
                assert poly.is_zero() or poly.is_homogeneous(j)


def test_class_inconsistency_rejected():
    frame = frame_for(D(5, [3], [3]), 1, 4)
    lying = dataclasses.replace(frame, e=0, branch=())
    with pytest.raises(ClassInconsistency):
        build_regularity_set(lying)


def test_small_prime_rejected():
    desc = D(4, [2], [3])
    frame = taylor_frame(*[sample_instance(desc, (1, 1, 2, 3, 4, 5), 0, 1, GF(61))[0], (1, 1, 2, 3, 4, 5)])
    with pytest.raises(ValueError):
        is_regular(frame)


def test_synthetic_linear_set_passes():
    n = 6
    forms = [Polynomial.variable(n, i, F) for i in range(n - 1)]
    assert ideal_dimension(forms) == 1
    assert monte_carlo_slice(forms, 3, seed=0) == "likely-regular"


def test_shared_factor_set_fails():
    n = 6
    z = [Polynomial.variable(n, i, F) for i in range(n)]
    forms = [z[0] * z[1], z[0] * z[2] ** 2, z[3], z[4], z[5] ** 2 + z[0] * z[3]]
    assert ideal_dimension(forms) >= 2


@pytest.mark.parametrize("seed", range(3))
def test_random_instance_passes(seed):
    report = is_regular(frame_for(D(5, [3], [3]), 0, seed))
    assert report.passed and report.method == "groebner" and report.dimension == 1


def test_planted_fixtures_fail():
    for planted in planted_degenerate_instances():
        frame = taylor_frame(planted.instance, planted.point)
        report = is_regular(frame)
        assert not report.passed, planted.name
        assert report.dimension > report.expected_dimension
        # with no pair budget the slice fallback (or a pair-free basis) must still reject
        capped = is_regular(frame, max_pairs=0)
        assert capped.verdict == "not-regular" and not capped.passed


def test_report_json_fields():
    report = is_regular(frame_for(D(4, [2], [3]), 1, 2))
    data = report.to_json()
    for key in ("point", "class", "method", "prime", "dimension", "pass", "trials"):
        assert key in data
    assert data["class"] == 1 and data["prime"] == MERSENNE_31


def test_fallback_when_pair_cap_hit():
    frame = frame_for(D(5, [3], [3]), 0, 8)
    report = is_regular(frame, max_pairs=0, slice_trials=2, seed=1)
    assert report.method == "monte-carlo-slice" and report.dimension is None
    assert report.verdict == "likely-regular" and report.passed and report.trials == 2


def test_slice_examples():
    n = 5
    z = [Polynomial.variable(n, i, F) for i in range(n)]
    assert monte_carlo_slice(z[:4], 1, seed=3) == "likely-regular"
    assert monte_carlo_slice(z[:4], 0, seed=3) == "undecided"
    # the plane z2 = z3 = z4 = 0 lies inside the zero set, but four forms expect a line
    planted = [z[2], z[3] * z[0] + z[4] * z[1], z[4] ** 2 + z[2] * z[3], z[3] * z[4]]
    assert monte_carlo_slice(planted, 4, seed=3) == "not-regular"


def test_slice_agrees_with_groebner():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(2, 5)
        r = rng.randint(1, n - 1)
        polys = [random_homogeneous(n, rng.randint(1, 3), rng.randrange(2**32), F) for _ in range(r)]
        if rng.random() < 0.5:
            polys[-1] = polys[0] * linear_form(n, [rng.randrange(1, 99) for _ in range(n)], F)
        regular = ideal_dimension(polys) == n - r
        assert (monte_carlo_slice(polys, 3, seed=rng.randrange(99)) == "likely-regular") == regular


def test_only_trivial_zero_small_field_oracle():
    # oracle: exhaustive search for nonzero common zeros over F_p and a few extensions-free checks
    p = 7
    Fp = GF(p)
    z = [Polynomial.variable(3, i, Fp) for i in range(3)]
    assert only_trivial_zero([z[0] ** 2, z[1] ** 2, z[2] ** 3])
    assert not only_trivial_zero([z[0] * z[1], z[1] * z[2], z[2] ** 2])
    assert cone_points([z[0] * z[1], z[1] * z[2], z[2] ** 2], p) > 1


def test_eliminate_linear_restriction():
    n = 4
    z = [Polynomial.variable(n, i, F) for i in range(n)]
    rest, dim = eliminate_linear([z[0] - z[1], z[0] * z[2] + z[3] ** 2, z[2]])
    assert dim == 2 and len(rest) == 1 and rest[0].degree() == 2


@settings(max_examples=15)
@given(st.integers(0, 2**32))
def test_generic_extra_form_cuts_dimension(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 5)
    polys = [random_homogeneous(n, rng.randint(1, 3), rng.randrange(2**32), F) for _ in range(rng.randint(1, n - 2))]
    base = ideal_dimension(polys)
    extra = random_homogeneous(n, rng.randint(1, 2), rng.randrange(2**32), F)
    after = ideal_dimension(polys + [extra])
    assert after <= base
    if base >= 1:
        assert after == base - 1
