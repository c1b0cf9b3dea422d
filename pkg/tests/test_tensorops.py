import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hopflattice.tensorops import (LocalOperator, projector_trace, restrict, trace_by_basis,
                                   trace_by_network)


def random_op(rng, dims, factors, k=2):
    legs = [(f, rng.standard_normal((k, dims[f], dims[f]))) for f in factors]
    coeff = rng.standard_normal((k,) * len(factors))
    return LocalOperator(coeff, legs, dims)


def naive_dense(op):
    """Sum over coefficient indices of Kronecker products, composing legs per factor."""
    dims = op.factor_dims
    total = np.zeros((int(np.prod(dims)),) * 2, dtype=complex)
    for idx in np.ndindex(op.coeff.shape):
        per = [np.eye(d) for d in dims]
        for j, (f, m) in enumerate(op.legs):
            per[f] = per[f] @ m[idx[j]]
        full = np.array([[1.0]])
        for p in per:
            full = np.kron(full, p)
        total += op.coeff[idx] * full
    return total


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.lists(st.integers(0, 2), min_size=1, max_size=3))
def test_dense_matches_kronecker_sum(seed, factors):
    rng = np.random.default_rng(seed)
    dims = (2, 3, 2)
    op = random_op(rng, dims, factors)
    assert np.allclose(op.dense(), naive_dense(op))


def test_repeated_factor_composes_in_leg_order():
    rng = np.random.default_rng(1)
    a, b = rng.standard_normal((1, 2, 2)), rng.standard_normal((1, 2, 2))
    op = LocalOperator(np.ones((1, 1)), [(0, a), (0, b)], (2,))
    assert np.allclose(op.local_matrix(), a[0] @ b[0])
    assert op.support == (0,)


def test_product_operator():
    rng = np.random.default_rng(2)
    dims = (2, 2, 3)
    x, y = random_op(rng, dims, [0, 1]), random_op(rng, dims, [1, 2])
    assert np.allclose((x @ y).dense(), x.dense() @ y.dense())
    with pytest.raises(ValueError):
        x @ random_op(rng, (2, 2), [0])


def test_leg_shape_validation():
    with pytest.raises(ValueError):
        LocalOperator(np.ones(2), [(0, np.ones((2, 3, 3)))], (2,))
    with pytest.raises(ValueError):
        LocalOperator(np.ones((2, 2)), [(0, np.ones((2, 2, 2)))], (2,))


def test_restrict_and_apply_agree():
    rng = np.random.default_rng(3)
    dims = (2, 3, 2, 2)
    ops = [random_op(rng, dims, [1, 3]), random_op(rng, dims, [3])]
    mats, support = restrict(ops)
    assert support == (1, 3)
    full = [op.dense() for op in ops]
    psi = rng.standard_normal(dims)
    assert np.allclose(ops[0].apply(psi).reshape(-1), full[0] @ psi.reshape(-1))
    # the full operator is the restricted one tensored with identities
    m = mats[0].reshape(3, 2, 3, 2)
    lifted = np.einsum("aA,bdBD,cC->abcdABCD", np.eye(2), m, np.eye(2)).reshape(24, 24)
    assert np.allclose(lifted, full[0])


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_trace_methods_agree(seed):
    rng = np.random.default_rng(seed)
    dims = (2, 3, 2, 2)
    ops = [random_op(rng, dims, [0, 1]), random_op(rng, dims, [1, 2, 3]), random_op(rng, dims, [3])]
    dense = np.linalg.multi_dot([op.dense() for op in ops])
    expected = np.trace(dense)
    assert trace_by_basis(ops, dims) == pytest.approx(expected)
    assert trace_by_network(ops, dims) == pytest.approx(expected)
    assert projector_trace(ops, dims, method="network") == pytest.approx(expected)


def test_trace_of_empty_product_is_dimension():
    assert trace_by_network([], (2, 3)) == 6
    assert projector_trace([], (2, 3), method="basis") == 6
    with pytest.raises(ValueError):
        projector_trace([], (2,), method="magic")


def test_dense_refuses_huge_space():
    op = LocalOperator(np.ones(1), [(0, np.ones((1, 2, 2)))], (2,) * 20)
    with pytest.raises(MemoryError):
        op.dense()
