"""The six measures against oracles and hand-derived cases."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_psn
from oracles import (
    egdvm_oracle,
    graphlet_counts_oracle,
    ordered_counts_oracle,
    wegdvm_oracle,
)
from wgdv.atlas import get_atlas
from wgdv.errors import DegenerateInputError, GraphInputError
from wgdv.measures import (
    MatrixMeasure,
    VectorMeasure,
    compute_measure,
    egdvm_matrix,
    graphlet_vector,
    ordered_vector,
    upper_correlations,
    wegdvm_matrix,
)
from wgdv.psn import psn_from_edges


def test_vector_kinds_and_lengths():
    psn = psn_from_edges(4, [(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)])
    assert graphlet_vector(psn).values.shape == (29,)
    assert ordered_vector(psn).values.shape == (42,)
    assert egdvm_matrix(psn).values.shape == (3, 68)
    with pytest.raises(GraphInputError):
        VectorMeasure("graphlet35", np.zeros(30))
    with pytest.raises(GraphInputError):
        VectorMeasure("nope", np.zeros(29))
    with pytest.raises(GraphInputError):
        MatrixMeasure("egdvm", np.zeros((3, 67)))


def test_counts_match_oracle(atlas):
    rng = np.random.default_rng(43)
    for _ in range(10):
        psn = random_psn(rng, int(rng.integers(4, 11)), 0.4)
        np.testing.assert_array_equal(
            graphlet_vector(psn, atlas).values, graphlet_counts_oracle(psn, atlas)
        )
        np.testing.assert_array_equal(
            ordered_vector(psn, atlas).values, ordered_counts_oracle(psn, atlas)
        )
        np.testing.assert_array_equal(
            egdvm_matrix(psn, atlas).values, egdvm_oracle(psn, atlas)
        )


def test_known_small_graphs(atlas):
    tri = psn_from_edges(3, [(1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)])
    v = graphlet_vector(tri, atlas).values
    assert v[1] == 1 and v.sum() == 1
    path = psn_from_edges(3, [(1, 2, 1.0), (2, 3, 1.0)])
    v = graphlet_vector(path, atlas).values
    assert v[0] == 1 and v.sum() == 1
    # ordered classes distinguish labelings the unordered measure merges:
    # 1-2-3 (center 2) vs 2-1-3 (center 1) are different ordered classes
    center2 = psn_from_edges(3, [(1, 2, 1.0), (2, 3, 1.0)])
    center1 = psn_from_edges(3, [(1, 2, 1.0), (1, 3, 1.0)])
    o2 = ordered_vector(center2, atlas).values
    o1 = ordered_vector(center1, atlas).values
    assert o2.sum() == o1.sum() == 1
    assert np.argmax(o2) != np.argmax(o1)
    np.testing.assert_array_equal(
        graphlet_vector(center2, atlas).values, graphlet_vector(center1, atlas).values
    )


def test_path4_wegdvm_hand_case(atlas):
    """Path 1-2-3-4 with weights 1, 2, 3: cell (edge (1,2), 3-path orbit)
    pools weights {1, 2} against {1, 2, 3}, which is t = 0.05 by hand."""
    psn = psn_from_edges(4, [(1, 2, 1.0), (2, 3, 2.0), (3, 4, 3.0)])
    cvm = wegdvm_matrix(psn, atlas, statistic="cvm").values
    assert cvm[0, 0] == pytest.approx(0.05, abs=1e-15)
    # untouched cells stay exactly zero (touched ones may be 0 too: the
    # middle edge pools the whole weight array and t(pool, pool) == 0)
    touch = egdvm_matrix(psn, atlas).values
    assert np.all(cvm[touch == 0] == 0.0)
    assert cvm[1, 4] == 0.0 and touch[1, 4] == 1
    # sum statistic: same cell pools 1+2 over the 2 edges of the 3-path
    total = wegdvm_matrix(psn, atlas, statistic="sum").values
    assert total[0, 0] == pytest.approx(1.5, abs=1e-15)


def test_wegdvm_matches_oracle(atlas):
    rng = np.random.default_rng(47)
    for statistic in ("cvm", "sum"):
        for _ in range(6):
            psn = random_psn(rng, int(rng.integers(4, 10)), 0.45, weights="grid")
            got = wegdvm_matrix(psn, atlas, statistic=statistic).values
            want = wegdvm_oracle(psn, atlas, statistic=statistic)
            np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)


def test_unit_weights_sum_statistic_reproduces_touch_counts(atlas):
    rng = np.random.default_rng(53)
    for _ in range(8):
        psn = random_psn(rng, int(rng.integers(4, 11)), 0.45, weights="unit")
        touch = egdvm_matrix(psn, atlas).values
        summed = wegdvm_matrix(psn, atlas, statistic="sum").values
        assert np.array_equal(summed, touch.astype(np.float64))


def test_monotone_transforms_leave_cvm_identical(atlas):
    rng = np.random.default_rng(59)
    transforms = [
        lambda w: 2.0 * w + 1.0,
        lambda w: w**3,
        np.exp,
        lambda w: np.log1p(w),
        lambda w: w / 8.0,
    ]
    for _ in range(5):
        psn = random_psn(rng, 9, 0.45, weights="grid")
        base = wegdvm_matrix(psn, atlas, statistic="cvm").values
        weights = psn.weights()
        for transform in transforms:
            mapped = transform(weights)
            assert len(np.unique(mapped)) == len(np.unique(weights))
            remapped_psn = psn_from_edges(
                psn.n, [(e.i, e.j, float(mapped[k])) for k, e in enumerate(psn.edges)]
            )
            np.testing.assert_array_equal(
                wegdvm_matrix(remapped_psn, atlas, statistic="cvm").values, base
            )


def test_no_edge_network_yields_empty_outputs(atlas):
    psn = psn_from_edges(5, [])
    assert graphlet_vector(psn, atlas).values.sum() == 0
    assert ordered_vector(psn, atlas).values.sum() == 0
    assert egdvm_matrix(psn, atlas).values.shape == (0, 68)
    assert wegdvm_matrix(psn, atlas).values.shape == (0, 68)
    with pytest.raises(DegenerateInputError):
        upper_correlations(egdvm_matrix(psn, atlas))


class TestUpperCorrelations:
    def test_identical_nonconstant_columns_give_exactly_one(self):
        rng = np.random.default_rng(61)
        col = rng.uniform(size=12)
        x = np.zeros((12, 68))
        x[:, 3] = col
        x[:, 7] = col
        x[:, 9] = rng.uniform(size=12)
        vec = upper_correlations(MatrixMeasure("egdvm", x)).values
        assert vec.shape == (2278,)
        iu = np.triu_indices(68, k=1)
        lookup = {(int(a), int(b)): i for i, (a, b) in enumerate(zip(*iu))}
        assert vec[lookup[(3, 7)]] == 1.0

    def test_zero_variance_columns_give_zero(self):
        x = np.zeros((5, 68))
        x[:, 0] = [1, 2, 3, 4, 5]
        x[:, 1] = 7.0  # constant but nonzero
        vec = upper_correlations(MatrixMeasure("wegdvm", x)).values
        iu = np.triu_indices(68, k=1)
        lookup = {(int(a), int(b)): i for i, (a, b) in enumerate(zip(*iu))}
        assert vec[lookup[(0, 1)]] == 0.0
        assert vec[lookup[(1, 2)]] == 0.0

    def test_values_bounded_and_sign_correct(self):
        rng = np.random.default_rng(67)
        x = rng.normal(size=(30, 68))
        x[:, 1] = -x[:, 0]
        vec = upper_correlations(MatrixMeasure("egdvm", x)).values
        assert np.all(vec >= -1.0) and np.all(vec <= 1.0)
        iu = np.triu_indices(68, k=1)
        lookup = {(int(a), int(b)): i for i, (a, b) in enumerate(zip(*iu))}
        assert vec[lookup[(0, 1)]] == -1.0

    def test_needs_two_rows(self):
        with pytest.raises(DegenerateInputError):
            upper_correlations(MatrixMeasure("egdvm", np.ones((1, 68))))

    def test_matches_numpy_corrcoef(self):
        rng = np.random.default_rng(71)
        x = rng.normal(size=(25, 68))
        vec = upper_correlations(MatrixMeasure("egdvm", x)).values
        ref = np.corrcoef(x, rowvar=False)[np.triu_indices(68, k=1)]
        np.testing.assert_allclose(vec, ref, atol=1e-12)


def test_compute_measure_dispatch(atlas):
    rng = np.random.default_rng(73)
    psn = random_psn(rng, 8, 0.5)
    for name, kind, shape in [
        ("graphlet35", VectorMeasure, (29,)),
        ("ordered34", VectorMeasure, (42,)),
        ("egdvm", MatrixMeasure, (psn.m, 68)),
        ("egdvm-cc", VectorMeasure, (2278,)),
        ("wegdvm", MatrixMeasure, (psn.m, 68)),
        ("wegdvm-cc", VectorMeasure, (2278,)),
    ]:
        result = compute_measure(psn, name)
        assert isinstance(result, kind)
        assert result.values.shape == shape
    with pytest.raises(GraphInputError):
        compute_measure(psn, "gdv")
    with pytest.raises(GraphInputError):
        compute_measure(psn, "wegdvm", statistic="median")


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_property_wegdvm_zero_pattern(seed):
    atlas = get_atlas()
    psn = random_psn(np.random.default_rng(seed), 8, 0.4, weights="grid")
    touch = egdvm_matrix(psn, atlas).values
    summed = wegdvm_matrix(psn, atlas, statistic="sum").values
    # a cell is populated iff it is touched (sum of positive weights > 0)
    np.testing.assert_array_equal(summed > 0.0, touch > 0)
