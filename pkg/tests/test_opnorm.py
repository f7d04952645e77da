import math

import numpy as np
import pytest

from banachlab.groups import SignedPermutation, cyclic_group, invariant_projection, regular_representation
from banachlab.lp import Exponent, lp_norm_array
from banachlab.opnorm import (
    Method,
    OperatorMatrix,
    bicontractive_check,
    block_diag,
    block_psum_norm,
    opnorm_auto,
    opnorm_brute,
    opnorm_exact,
    opnorm_power,
)


def complement(n, p):
    return OperatorMatrix(np.eye(n) - np.full((n, n), 1 / n), p)


def mean(n, p):
    return OperatorMatrix(np.full((n, n), 1 / n), p)


def certified(est, A):
    x = est.witness.entries
    r = lp_norm_array(A.entries @ x, A.p) / lp_norm_array(x, A.p)
    return r == pytest.approx(est.lower, rel=1e-9)


# --- exact ------------------------------------------------------------------


def test_exact_examples():
    e = opnorm_exact(OperatorMatrix(np.eye(2), 1))
    assert e.lower == 1.0 and e.method is Method.EXACT_1
    e = opnorm_exact(complement(3, "inf"))
    assert e.lower == pytest.approx(4 / 3, abs=1e-15) and e.method is Method.EXACT_INF
    for n in (2, 3, 7, 12):
        e = opnorm_exact(complement(n, 2))
        assert e.lower == pytest.approx(1.0, abs=1e-12) and e.method is Method.EXACT_2


def test_exact_matches_numpy_norms(rng):
    for _ in range(20):
        a = rng.standard_normal((5, 5))
        assert opnorm_exact(OperatorMatrix(a, 1)).lower == pytest.approx(np.linalg.norm(a, 1), rel=1e-14)
        assert opnorm_exact(OperatorMatrix(a, "inf")).lower == pytest.approx(np.linalg.norm(a, np.inf), rel=1e-14)
        assert opnorm_exact(OperatorMatrix(a, 2)).lower == pytest.approx(np.linalg.norm(a, 2), rel=1e-12)


def test_exact_rejects_general_p():
    with pytest.raises(ValueError):
        opnorm_exact(OperatorMatrix(np.eye(2), 3))


def test_spike_is_the_inf_maximiser():
    for n in range(3, 11):
        A = complement(n, "inf")
        f = np.ones(n)
        f[-1] = -1
        assert A.ratio(f) == pytest.approx(2 - 2 / n, abs=1e-15)
        assert opnorm_exact(A).lower == pytest.approx(2 - 2 / n, abs=1e-12)


# --- power ------------------------------------------------------------------


def test_power_examples():
    e = opnorm_power(OperatorMatrix(np.eye(3), 3))
    assert e.lower == pytest.approx(1.0, abs=1e-12) and e.converged
    e = opnorm_power(OperatorMatrix(np.diag([2.0, 1.0]), 1.7))
    assert e.lower == pytest.approx(2.0, rel=1e-10)
    x = e.witness.entries / np.max(np.abs(e.witness.entries))
    np.testing.assert_allclose(np.abs(x), [1.0, 0.0], atol=1e-6)
    A = complement(3, 4)
    e = opnorm_power(A)
    b = opnorm_brute(A)
    assert 1 < e.lower < 4 / 3
    assert e.lower == pytest.approx(b.lower, abs=1e-4)


def test_power_rejects_tags_and_bad_iter():
    with pytest.raises(ValueError):
        opnorm_power(OperatorMatrix(np.eye(2), "inf"))
    with pytest.raises(ValueError):
        opnorm_power(OperatorMatrix(np.eye(2), 3), max_iter=0)


def test_power_flags_nonconvergence():
    e = opnorm_power(complement(5, 6), max_iter=1)
    assert e.converged is False
    assert certified(e, complement(5, 6))


def test_power_deterministic():
    A = OperatorMatrix(np.random.default_rng(3).standard_normal((6, 6)), 3.5)
    a, b = opnorm_power(A, seed=9), opnorm_power(A, seed=9)
    assert a.lower == b.lower and np.array_equal(a.witness.entries, b.witness.entries)


def test_power_vs_brute_random():
    rng = np.random.default_rng(2024)
    ps = [1.3, 2.0, 3.0, 8.0]
    for k in range(200):
        n = int(rng.integers(1, 4))
        A = OperatorMatrix(rng.standard_normal((n, n)), ps[k % 4])
        pw, br = opnorm_power(A, seed=k), opnorm_brute(A)
        assert pw.lower == pytest.approx(br.lower, abs=1e-4), (k, n, A.p)
        assert certified(pw, A) and certified(br, A)


# --- brute ------------------------------------------------------------------


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0, "inf"])
def test_brute_identity(p):
    assert opnorm_brute(OperatorMatrix(np.eye(2), p), 1000).lower == pytest.approx(1.0, abs=1e-6)


def test_brute_examples():
    e = opnorm_brute(complement(3, "inf"), 1000)
    assert e.lower == pytest.approx(4 / 3, abs=1e-6)
    assert e.lower == pytest.approx(opnorm_exact(complement(3, "inf")).lower, abs=1e-6)
    swap = OperatorMatrix([[0, 1], [1, 0]], 3)
    assert opnorm_brute(swap).lower == pytest.approx(1.0, abs=1e-12)


def test_brute_rejects_large():
    with pytest.raises(ValueError):
        opnorm_brute(OperatorMatrix(np.eye(5), 3))


def test_brute_matches_exact_at_one_two_inf(rng):
    for _ in range(10):
        a = rng.standard_normal((3, 3))
        for p in (1.0, 2.0, math.inf):
            A = OperatorMatrix(a, p)
            assert opnorm_brute(A).lower == pytest.approx(opnorm_exact(A).lower, rel=1e-6)


# --- invariants -------------------------------------------------------------


@pytest.mark.parametrize("p", [1.0, 1.3, 2.0, 3.0, 8.0, "inf"])
def test_isometries_have_norm_one(p):
    s = SignedPermutation((2, 0, 3, 1), (1, -1, -1, 1))
    for method in (opnorm_auto, opnorm_brute):
        assert method(OperatorMatrix(s.matrix(), p)).lower == pytest.approx(1.0, abs=1e-12)
    if Exponent.of(p).is_interior:
        assert opnorm_power(OperatorMatrix(s.matrix(), p)).lower == pytest.approx(1.0, abs=1e-12)


def test_monotone_in_p_for_z3():
    vals = [opnorm_power(complement(3, p)).lower for p in (2, 4, 8, 16, 32, 64)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= 4 / 3 + 1e-3
    assert vals[0] == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n", [2, 3, 4, 6, 9])
@pytest.mark.parametrize("p", [1.0, 1.5, 3.0, 10.0, "inf"])
def test_complement_bounded_by_two(n, p):
    pr = invariant_projection(regular_representation(cyclic_group(n), p))
    A = OperatorMatrix(pr.complement, p)
    e = opnorm_auto(A)
    assert certified(e, A)
    assert e.lower <= 2 + 1e-9


# --- blocks -----------------------------------------------------------------


def test_block_examples():
    blocks = [complement(n, "inf") for n in (3, 4, 5)]
    e = block_psum_norm(blocks)
    assert e.lower == pytest.approx(1.6, abs=1e-12)
    assert e.witness.blocks == (3, 4, 5)
    assert np.all(e.witness.entries[:7] == 0)
    single = block_psum_norm([complement(4, "inf")])
    assert single.lower == pytest.approx(1.5, abs=1e-12)
    with pytest.raises(ValueError):
        block_psum_norm([])


def test_block_stack_approaches_two():
    vals = [block_psum_norm([complement(n, "inf") for n in range(3, N + 1)]).lower for N in range(3, 30)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    for N, v in zip(range(3, 30), vals):
        assert v == pytest.approx(2 - 2 / N, abs=1e-12)


def test_block_vs_brute_on_two_blocks(rng):
    for p in (1.5, 3.0, 6.0):
        for _ in range(5):
            a, b = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
            blocks = [OperatorMatrix(a, p), OperatorMatrix(b, p)]
            full = OperatorMatrix(block_diag([a, b]), p)
            bb = opnorm_brute(full)
            e = block_psum_norm(blocks)
            assert e.lower == pytest.approx(bb.lower, abs=1e-4)
            assert certified(e, full)


# --- bicontractive -----------------------------------------------------------


def test_bicontractive_examples():
    r = bicontractive_check(mean(3, 2))
    assert r.is_projection and r.norm_p == pytest.approx(1) and r.norm_complement == pytest.approx(1)
    assert r.bicontractive
    is_proj, np_, nc = bicontractive_check(mean(3, "inf"))
    assert is_proj and np_ == pytest.approx(1.0) and nc == pytest.approx(4 / 3)
    assert not bicontractive_check(mean(3, "inf")).bicontractive
    assert tuple(bicontractive_check(OperatorMatrix(np.eye(3), 4))) == (True, pytest.approx(1.0), 0.0)


def test_bicontractive_non_projection():
    r = bicontractive_check(OperatorMatrix([[0, 1], [0, 0]], 2))
    assert not r.is_projection and not r.bicontractive


def test_coordinate_projections_are_bicontractive():
    P = OperatorMatrix(np.diag([1.0, 0.0, 1.0]), 5)
    assert bicontractive_check(P).bicontractive
