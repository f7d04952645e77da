import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from banachlab.groups import (
    FiniteGroup,
    GroupTableError,
    RepresentationError,
    SignedPermRep,
    SignedPermutation,
    cyclic_group,
    direct_product,
    dual_isometry,
    fixed_space_basis,
    format_cayley_table,
    invariant_projection,
    lemma_equivariance_check,
    mean_operator,
    parse_cayley_table,
    read_cayley_file,
    regular_representation,
    rep_from_images,
    spike_witness,
)
from banachlab.lp import DenseVector, duality_map, norm
from banachlab.orthogonality import kato_pairing

# a Latin square with identity 0 that is not associative (a loop of order 5)
LOOP5 = """5
0 1 2 3 4
1 0 3 4 2
2 4 0 1 3
3 2 4 0 1
4 3 1 2 0
"""


# --- groups -----------------------------------------------------------------


def test_cyclic_examples():
    g1 = cyclic_group(1)
    assert g1.order == 1 and g1.identity == 0
    g3 = cyclic_group(3)
    assert g3.identity == 0 and g3.inverse(1) == 2
    g6 = cyclic_group(6)
    assert g6.inverse(2) == 4
    assert all(g6.mul(a, g6.inverse(a)) == 0 for a in g6.elements())
    with pytest.raises(ValueError):
        cyclic_group(0)


def test_direct_product_klein():
    k = direct_product(cyclic_group(2), cyclic_group(2))
    assert k.order == 4
    assert all(k.element_order(g) <= 2 for g in k.elements())


def test_cayley_round_trip(tmp_path):
    g = direct_product(cyclic_group(2), cyclic_group(3))
    path = tmp_path / "g.txt"
    path.write_text(format_cayley_table(g))
    h = read_cayley_file(path)
    np.testing.assert_array_equal(g.cayley, h.cayley)


@pytest.mark.parametrize("text, match", [
    (LOOP5, r"associativity fails for triple"),
    ("2\n0 1\n0 1\n", r"column 0 is not a permutation"),
    ("2\n0 1\n1 1\n", r"row 1 is not a permutation"),
    ("2\n0 1\n1 2\n", r"outside 0..1"),
    ("3\n0 1 2\n1 2 0\n", r"expected 3 table rows"),
    ("2\n0 1\n1\n", r"row 1 has 1 entries"),
    ("x\n", r"bad group order"),
    ("2\n1 0\n0 1\n", None),
])
def test_cayley_validation(text, match):
    if match is None:
        g = parse_cayley_table(text)  # Z_2 with identity at index 1
        assert g.identity == 1
        return
    with pytest.raises(GroupTableError, match=match):
        parse_cayley_table(text)


def test_no_identity_rejected():
    # a Latin square without an identity row/column
    with pytest.raises(GroupTableError, match="identity"):
        FiniteGroup(np.array([[1, 2, 0], [2, 0, 1], [0, 1, 2]])[::-1])


def test_loop_associativity_triple_is_a_real_failure():
    t = np.array([[int(x) for x in r.split()] for r in LOOP5.splitlines()[1:]])
    with pytest.raises(GroupTableError) as exc:
        FiniteGroup(t)
    a, b, c = map(int, str(exc.value).split("(")[1].rstrip(")").split(","))
    assert t[t[a, b], c] != t[a, t[b, c]]


# --- signed permutations ---------------------------------------------------


def test_signed_permutation_algebra():
    s = SignedPermutation((1, 2, 0), (1, -1, 1))
    t = SignedPermutation((0, 2, 1), (-1, 1, 1))
    np.testing.assert_array_equal((s @ t).matrix(), s.matrix() @ t.matrix())
    np.testing.assert_array_equal(s.inverse().matrix(), np.linalg.inv(s.matrix()))
    assert (s @ s.inverse()).is_identity()
    x = np.array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(s.apply(x), s.matrix() @ x)


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0, float("inf")])
def test_signed_permutation_isometry(p):
    s = SignedPermutation((2, 0, 1, 3), (-1, 1, -1, 1))
    v = DenseVector([0.3, -1.7, 2.2, 5.0], p)
    assert norm(s(v)) == norm(v)


def test_dual_isometry_examples():
    assert dual_isometry(SignedPermutation.identity(3)).is_identity()
    flip = SignedPermutation((0, 1), (-1, 1))
    assert dual_isometry(flip) == flip
    shift3 = SignedPermutation((1, 2, 0), (1, 1, 1))
    np.testing.assert_array_equal(np.linalg.inv(shift3.matrix().T), shift3.matrix())
    assert dual_isometry(shift3) == shift3
    assert dual_isometry(dual_isometry(shift3)) == shift3


def test_lemma_examples():
    v = DenseVector([1.0, 2.0, 3.0], 3)
    assert lemma_equivariance_check(SignedPermutation.identity(3), v) == 0.0
    assert lemma_equivariance_check(SignedPermutation((1, 2, 0), (1, 1, 1)), v) <= 1e-9
    flip = SignedPermutation((0, 1), (-1, 1))
    assert lemma_equivariance_check(flip, DenseVector([1.0, 1.0], 1.5)) <= 1e-9


def _perm_strategy(n):
    return st.tuples(st.permutations(list(range(n))), st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n))


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(_perm_strategy(n), st.lists(st.floats(-10, 10), min_size=n, max_size=n))),
       st.floats(1.2, 8.0))
def test_lemma_property(data, p):
    (perm, signs), x = data
    s = SignedPermutation(tuple(perm), tuple(signs))
    v = DenseVector(x, p)
    assert lemma_equivariance_check(s, v) <= 1e-9 * (1 + norm(v))


# --- representations and projections ---------------------------------------


def test_regular_rep_examples():
    r1 = regular_representation(cyclic_group(1), 3)
    assert r1.degree == 1 and r1.images[0].is_identity()
    r3 = regular_representation(cyclic_group(3), 2)
    shift = np.roll(np.eye(3), 1, axis=0)
    np.testing.assert_array_equal(r3.matrices()[1], shift)
    np.testing.assert_array_equal(r3.matrices()[2], shift @ shift)
    rk = regular_representation(direct_product(cyclic_group(2), cyclic_group(2)), 3)
    assert rk.degree == 4
    assert all((s @ s).is_identity() for s in rk.images)


def test_homomorphism_is_checked():
    g = cyclic_group(3)
    good = regular_representation(g).images
    with pytest.raises(RepresentationError, match="homomorphism fails"):
        SignedPermRep(g, (good[0], good[1], good[1]), 2)
    with pytest.raises(RepresentationError, match="identity"):
        SignedPermRep(g, (good[1], good[1], good[1]), 2)


def test_invariant_projection_examples():
    pr = invariant_projection(regular_representation(cyclic_group(3), 3))
    np.testing.assert_allclose(pr.p_invariant, np.full((3, 3), 1 / 3), rtol=0, atol=1e-16)
    triv = invariant_projection(regular_representation(cyclic_group(1)))
    np.testing.assert_array_equal(triv.p_invariant, [[1.0]])
    np.testing.assert_array_equal(triv.complement, [[0.0]])
    flip = rep_from_images(cyclic_group(2), [SignedPermutation((0,), (1,)), SignedPermutation((0,), (-1,))], 3)
    pf = invariant_projection(flip)
    np.testing.assert_array_equal(pf.p_invariant, [[0.0]])
    np.testing.assert_array_equal(pf.complement, [[1.0]])
    assert fixed_space_basis(flip) == []


GROUPS = [cyclic_group(n) for n in (1, 2, 3, 5, 8)] + [
    direct_product(cyclic_group(2), cyclic_group(2)),
    direct_product(cyclic_group(2), cyclic_group(3)),
]


@pytest.mark.parametrize("g", GROUPS, ids=repr)
def test_projection_invariants(g, rng):
    rep = regular_representation(g, 3)
    pr = invariant_projection(rep)
    assert pr.idempotency_defect() <= 1e-12
    assert pr.equivariance_defect(rep) <= 1e-12
    np.testing.assert_allclose(pr.p_invariant, mean_operator(g.order), atol=1e-15)
    assert pr.rank == len(rep.orbits()) == 1
    if g.order >= 2:
        assert np.linalg.matrix_rank(pr.complement) == g.order - 1
        f = rng.standard_normal((20, g.order))
        assert np.max(np.abs((f @ pr.complement.T).sum(axis=1))) <= 1e-12


def test_fixed_space_of_permutation_action():
    # Z_2 swapping coordinates 0,1 and fixing 2: orbits {0,1}, {2}
    g = cyclic_group(2)
    rep = rep_from_images(g, [SignedPermutation.identity(3), SignedPermutation((1, 0, 2), (1, 1, 1))])
    basis = fixed_space_basis(rep)
    assert [b.tolist() for b in basis] == [[1, 1, 0], [0, 0, 1]]
    assert invariant_projection(rep).rank == 2


def test_orthogonal_case_at_p2(rng):
    for g in GROUPS[2:]:
        rep = regular_representation(g, 2)
        pr = invariant_projection(rep)
        for _ in range(10):
            f = rng.standard_normal(g.order)
            v = DenseVector(pr.complement @ f, 2)
            w = DenseVector(np.ones(g.order) * rng.standard_normal(), 2)
            if norm(v) > 0:
                assert abs(kato_pairing(v, w)) <= 1e-9 * (1 + norm(v) * norm(w))


@pytest.mark.parametrize("n", [3, 4, 7])
@pytest.mark.parametrize("p", [1.5, 3.0, 64.0])
def test_finite_groups_are_not_orthogonal(n, p):
    f = spike_witness(n)
    pr = invariant_projection(regular_representation(cyclic_group(n), p))
    v = DenseVector(pr.complement @ f, p)
    w = DenseVector(np.ones(n), p)
    # closed form: J(v) ~ (2/n)^(p-1) * ((n-1) - (n-1)^(p-1)), nonzero for p != 2
    k = kato_pairing(v, w)
    j = duality_map(v).entries
    expected = norm(v) ** (2 - p) * (2 / n) ** (p - 1) * ((n - 1) - (n - 1) ** (p - 1))
    assert k == pytest.approx(expected, rel=1e-9)
    assert abs(k) > 1e-6
    assert np.sign(k) == np.sign(j.sum())


def test_spike_witness_values():
    for n in range(3, 11):
        f = spike_witness(n)
        assert np.max(np.abs(f)) == 1
        assert f.mean() == pytest.approx(1 - 2 / n, abs=1e-15)
        assert np.max(np.abs(f - f.mean())) == pytest.approx(2 - 2 / n, abs=1e-15)
