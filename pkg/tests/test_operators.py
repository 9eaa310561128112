import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ks_2samp

from secant_sketch import operators as O
from secant_sketch import transforms as T
from secant_sketch.errors import DimensionMismatch, ParameterError, ShapeError, TooLarge
from secant_sketch.operators import BlockParams, Dist, SorsParams


def _small_ops(seed=0):
    return [
        O.make_subgaussian(5, 16, "gaussian", seed),
        O.make_sors(SorsParams(16, 6, T.TransformKind.HADAMARD, seed)),
        O.make_sors(SorsParams(12, 5, T.TransformKind.DCT2, seed)),
        O.make_sors(SorsParams(10, 4, T.TransformKind.COMPLEX_DFT, seed)),
        O.make_sob(16, 6, "dct2", seed),
        O.make_block(BlockParams(40, 3, 2, T.TransformKind.DCT2, Dist.GAUSSIAN, seed)),
        O.make_block(BlockParams(64, 4, 3, T.TransformKind.HADAMARD, Dist.RADEMACHER, seed, use_inner_sign=True)),
        O.IdentityOperator(9),
        O.ScaledOperator(O.make_subgaussian(4, 9, seed=seed), 2.0),
    ]


def test_subgaussian_rademacher_entries():
    A = O.materialize(O.make_subgaussian(3, 3, "rademacher", 11))
    np.testing.assert_allclose(np.abs(A), 1 / math.sqrt(3))


def test_subgaussian_zero_rows():
    with pytest.raises(ParameterError):
        O.make_subgaussian(0, 4)


def test_subgaussian_isotropy_over_seeds():
    vals = [np.sum(O.make_subgaussian(8, 16, "rademacher", s).matrix[:, 0] ** 2) for s in range(200)]
    assert np.mean(vals) == pytest.approx(1.0)
    vals = [np.sum(O.make_subgaussian(8, 16, "gaussian", s).matrix[:, 0] ** 2) for s in range(10**4)]
    assert abs(np.mean(vals) - 1.0) <= 0.05


def test_sors_exhaustive_expectation_n4():
    # Average over all 2^4 sign patterns and 4^4 row draws of ||A e1||^2, with A built by hand.
    H = T.dense_matrix("hadamard", 4)
    total, count = 0.0, 0
    for signs in itertools.product([-1, 1], repeat=4):
        ux = H @ (np.array(signs) * np.eye(4)[0])
        for rows in itertools.product(range(4), repeat=4):
            total += np.sum((math.sqrt(4 / 4) * ux[list(rows)]) ** 2)
            count += 1
    assert total / count == pytest.approx(1.0, abs=1e-14)


def test_sors_matches_definition_with_forced_components():
    op = O.make_sors(SorsParams(8, 3, T.TransformKind.DCT2, 5))
    x = np.random.default_rng(0).standard_normal(8)
    U = T.dense_matrix("dct2", 8)
    expected = math.sqrt(8 / 3) * (U @ (op.signs * x))[op.row_index]
    np.testing.assert_allclose(op.apply(x), expected, atol=1e-13)
    sob = O.make_sob(8, 3, "dct2", 5)
    np.testing.assert_allclose(sob.apply(x), math.sqrt(8 / 3) * (U @ x)[sob.row_index], atol=1e-13)


def test_sors_isometry_when_rows_distinct():
    found = 0
    for seed in range(3000):
        op = O.make_sors(SorsParams(8, 8, T.TransformKind.HADAMARD, seed))
        if len(set(op.row_index.tolist())) == 8:
            x = np.random.default_rng(seed).standard_normal(8)
            assert abs(np.linalg.norm(op.apply(x)) - np.linalg.norm(x)) <= 1e-9 * np.linalg.norm(x)
            found += 1
    assert found > 0


def test_sors_materialized_entry_bound():
    A = O.materialize(O.make_sors(SorsParams(4, 2, T.TransformKind.HADAMARD, 3)))
    assert np.max(np.abs(A)) <= math.sqrt(2) / math.sqrt(2) + 1e-12


def test_sors_invalid_hadamard_length():
    with pytest.raises(Exception) as info:
        O.make_sors(SorsParams(12, 3, T.TransformKind.HADAMARD))
    assert type(info.value).__name__ == "InvalidLength"


def test_block_bookkeeping():
    op = O.make_block(BlockParams(16, 2, 2))
    assert (op.chunks, op.intermediate, op.rows) == (4, 8, 2)
    op = O.make_block(BlockParams(20, 2, 2))
    assert (op.chunks, op.intermediate, op.padded_length) == (5, 10, 20)
    op = O.make_block(BlockParams(18, 2, 2))
    assert (op.chunks, op.intermediate, op.padded_length) == (5, 10, 20)


def test_block_padding_does_not_change_norms():
    op = O.make_block(BlockParams(18, 2, 2, use_outer_sign=False, seed=4))
    x = np.random.default_rng(2).standard_normal(18)
    padded = np.concatenate([x, np.zeros(2)])
    # Manual intermediate: same inner matrix on each chunk of the padded vector.
    U = T.dense_matrix("dct2", 4)
    inner = math.sqrt(2) * U[op.row_index]
    manual = np.concatenate([inner @ padded[4 * k:4 * k + 4] for k in range(5)])
    np.testing.assert_allclose(op.intermediate_apply(x), manual, atol=1e-13)


def test_block_shape_error():
    with pytest.raises(ShapeError):
        O.make_block(BlockParams(64, 2, 3))
    assert O.make_block(BlockParams(64, 2, 3, require_m1_ge_m2=False)).rows == 3


def test_block_matches_eq_form_materialization():
    op = O.make_block(BlockParams(64, 4, 3, T.TransformKind.DCT2, Dist.RADEMACHER, 8))
    U = T.dense_matrix("dct2", 16)
    inner = math.sqrt(4) * U[op.row_index]
    C = np.kron(np.eye(op.chunks), inner)[:, :64]
    E = op.mixing @ C @ np.diag(op.outer_signs) / math.sqrt(3)
    np.testing.assert_allclose(O.materialize(op), E, atol=1e-10)
    x = np.random.default_rng(0).standard_normal(64)
    np.testing.assert_allclose(op.apply(x), E @ x, atol=1e-10)


def test_identity_and_scaled():
    x = np.arange(5.0)
    np.testing.assert_array_equal(O.IdentityOperator(5).apply(x), x)
    np.testing.assert_array_equal(O.ScaledOperator(O.IdentityOperator(5), 2).apply(x), 2 * x)
    np.testing.assert_array_equal(O.materialize(O.IdentityOperator(3)), np.eye(3))


def test_composite():
    inner = O.make_subgaussian(6, 10, seed=1)
    outer = O.make_subgaussian(3, 6, seed=2)
    comp = O.CompositeOperator(outer, inner)
    np.testing.assert_allclose(O.materialize(comp), outer.matrix @ inner.matrix, atol=1e-13)
    with pytest.raises(ShapeError):
        O.CompositeOperator(inner, inner)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        O.make_subgaussian(2, 4).apply(np.ones(5))


def test_materialize_guard():
    with pytest.raises(TooLarge):
        O.materialize(O.IdentityOperator(4000))


def test_flops_models():
    assert O.flops(O.IdentityOperator(7)) == 7
    assert O.flops(O.make_subgaussian(3, 5)) == 30
    sors = O.make_sors(SorsParams(2**16, 16, T.TransformKind.HADAMARD))
    assert sors.flops() == 5 * 2**16 * 16 + 2 * 2**16
    block = O.make_block(BlockParams(2**16, 2**5, 4, T.TransformKind.HADAMARD))
    assert block.flops() == 64 * 5 * 1024 * 10 + 4 * 32 * 64
    transform_ratio = (64 * 5 * 1024 * 10) / (5 * 2**16 * 16)
    assert transform_ratio == pytest.approx(10 / 16)


@pytest.mark.parametrize("idx", range(9))
def test_apply_equals_materialized_product(idx):
    op = _small_ops(3)[idx]
    x = np.random.default_rng(idx).standard_normal((4, op.cols))
    np.testing.assert_allclose(op.apply(x), x @ O.materialize(op).T, atol=1e-10)


def test_isotropy_in_expectation_all_families():
    N = 16
    builders = {
        "subgaussian": lambda s: O.make_subgaussian(4, N, "rademacher", s),
        "sors": lambda s: O.make_sors(SorsParams(N, 4, T.TransformKind.DCT2, s)),
        "sob": lambda s: O.make_sob(N, 4, "hadamard", s),
        "block": lambda s: O.make_block(BlockParams(N, 2, 2, T.TransformKind.DCT2, Dist.RADEMACHER, s)),
    }
    for name, build in builders.items():
        cols = np.zeros(N)
        for s in range(2000):
            cols += np.sum(np.abs(O.materialize(build(s))) ** 2, axis=0)
        means = cols / 2000
        assert np.all((means >= 0.9) & (means <= 1.1)), (name, means)


def test_sign_placement_equivalence_in_distribution():
    # Outer signs alone vs outer plus inner signs: D' D_inner is again uniform random signs.
    x = np.random.default_rng(5).standard_normal(32)
    x /= np.linalg.norm(x)

    def norms(inner: bool):
        return [np.sum(O.make_block(BlockParams(32, 4, 2, T.TransformKind.DCT2, Dist.RADEMACHER, s,
                                                use_outer_sign=True, use_inner_sign=inner)).apply(x) ** 2)
                for s in range(5000)]

    a, b = norms(False), norms(True)
    stat = ks_2samp(a, b).statistic
    critical = 1.628 * math.sqrt(2 / 5000)
    assert stat < critical


def test_serialization_roundtrip():
    for op in _small_ops(7):
        clone = O.from_json(op.to_json())
        x = np.random.default_rng(1).standard_normal(op.cols)
        np.testing.assert_array_equal(clone.apply(x), op.apply(x))


def test_from_dict_errors():
    with pytest.raises(ParameterError):
        O.from_dict({"family": "countsketch"})
    with pytest.raises(ParameterError):
        O.from_dict({"family": "sors", "N": 8})


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 8), st.integers(0, 2**63), st.floats(-5, 5), st.floats(-5, 5))
def test_linearity(idx, seed, alpha, beta):
    op = _small_ops(seed)[idx]
    gen = np.random.default_rng(seed % 2**32)
    x, y = gen.standard_normal((2, op.cols))
    lhs = op.apply(alpha * x + beta * y)
    rhs = alpha * op.apply(x) + beta * op.apply(y)
    scale = abs(alpha) * np.linalg.norm(op.apply(x)) + abs(beta) * np.linalg.norm(op.apply(y)) + 1e-300
    assert np.linalg.norm(lhs - rhs) <= 1e-9 * scale


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 8), st.integers(0, 2**64 - 1))
def test_determinism(idx, seed):
    a, b = _small_ops(seed)[idx], _small_ops(seed)[idx]
    x = np.random.default_rng(0).standard_normal(a.cols)
    assert np.array_equal(a.apply(x), b.apply(x))
