"""Network-level feature measures.

Six measures are derived from one enumeration pass:

* graphlet35: 29 graphlet occurrence counts (sizes 3-5);
* ordered34: 42 counts of sequence-ordered classes (sizes 3-4);
* egdvm: m x 68 matrix of edge/orbit touch counts;
* wegdvm: m x 68 matrix of per-cell statistics comparing the weights
  pooled from touching occurrences against the network's weight array;
* egdvm-cc / wegdvm-cc: the 2278 upper-triangle Pearson correlations
  of the corresponding matrix's columns.

The comparison statistic is a two-sample Cramer-von Mises t with midranks
for ties.  All rank arithmetic is carried out in exact integers (ranks are
doubled so midranks stay integral), which makes the value independent of
summation order and invariant under any strictly increasing transform of
the weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .atlas import N_ORBITS, GraphletAtlas, get_atlas
from .enumeration import OrbitAccumulator, accumulate, connected_subsets, induced_mask
from .errors import DegenerateInputError, GraphInputError
from .psn import WeightedPSN

MEASURE_NAMES = ("graphlet35", "ordered34", "egdvm", "egdvm-cc", "wegdvm", "wegdvm-cc")
VECTOR_LENGTHS = {"graphlet35": 29, "ordered34": 42, "egdvm_cc": 2278, "wegdvm_cc": 2278}
STATISTICS = ("cvm", "sum")


@dataclass(frozen=True)
class VectorMeasure:
    kind: str            # graphlet35 | ordered34 | egdvm_cc | wegdvm_cc
    values: np.ndarray   # 1-D, length VECTOR_LENGTHS[kind]

    def __post_init__(self):
        if self.kind not in VECTOR_LENGTHS:
            raise GraphInputError(f"unknown vector kind {self.kind!r}")
        if self.values.shape != (VECTOR_LENGTHS[self.kind],):
            raise GraphInputError(
                f"{self.kind} expects shape ({VECTOR_LENGTHS[self.kind]},), "
                f"got {self.values.shape}"
            )


@dataclass(frozen=True)
class MatrixMeasure:
    kind: str            # egdvm | wegdvm
    values: np.ndarray   # (m, 68)

    def __post_init__(self):
        if self.kind not in ("egdvm", "wegdvm"):
            raise GraphInputError(f"unknown matrix kind {self.kind!r}")
        if self.values.ndim != 2 or self.values.shape[1] != N_ORBITS:
            raise GraphInputError(f"expected (m, {N_ORBITS}), got {self.values.shape}")


# -- weight pool ------------------------------------------------------------


class WeightPool:
    """The network's edge weights sorted ascending, with tie-group prefix
    tables that let a rank statistic against the whole pool be evaluated in
    time proportional to the number of touched tie groups."""

    def __init__(self, weights: np.ndarray, position_of_edge: np.ndarray):
        self.values = np.asarray(weights, dtype=np.float64)
        self.position_of_edge = position_of_edge
        m = self.values.size
        if m and np.any(np.diff(self.values) < 0):
            raise GraphInputError("pool values not sorted")
        # tie groups over equal values
        group_of = np.zeros(m, dtype=np.int64)
        if m:
            group_of[1:] = np.cumsum(self.values[1:] != self.values[:-1])
        self.group_of_position = group_of
        n_groups = int(group_of[-1]) + 1 if m else 0
        counts = np.bincount(group_of, minlength=n_groups).astype(np.int64)
        self.group_counts = counts
        before = np.zeros(n_groups + 1, dtype=np.int64)
        np.cumsum(counts, out=before[1:])
        self.group_pool_before = before
        cubes = (counts.astype(object) ** 3 - counts) // 3
        cube_prefix = np.zeros(n_groups + 1, dtype=object)
        cube_prefix[1:] = np.cumsum(cubes)
        self.group_cube_prefix = cube_prefix

    @classmethod
    def from_psn(cls, psn: WeightedPSN) -> "WeightPool":
        positions = psn.weight_positions()
        weights = psn.weights()
        values = np.empty_like(weights)
        values[positions] = weights
        return cls(values, positions)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "WeightPool":
        arr = np.sort(np.asarray(values, dtype=np.float64))
        return cls(arr, np.argsort(np.argsort(values, kind="stable"), kind="stable"))

    def __len__(self) -> int:
        return int(self.values.size)


def _run_term(pool: WeightPool, lo_group: int, hi_group: int, cum_sample: int) -> int:
    """Doubled-square pool contribution of untouched groups in (lo, hi)."""
    pb = pool.group_pool_before
    run_count = int(pb[hi_group] - pb[lo_group + 1])
    if run_count == 0:
        return 0
    cube = int(pool.group_cube_prefix[hi_group] - pool.group_cube_prefix[lo_group + 1])
    return cube + 4 * cum_sample * cum_sample * run_count


def _group_terms(s: int, c: int, pool_below: int, sample_below: int) -> tuple[int, int]:
    """Doubled-square (sample, pool) contributions of one tie group holding
    s sample and c pool elements."""
    doubled_midrank = 2 * (pool_below + sample_below) + c + s + 1
    a = doubled_midrank - 2 * sample_below
    sample_sq = s * a * a - 2 * a * s * (s + 1) + 2 * s * (s + 1) * (2 * s + 1) // 3
    a = doubled_midrank - 2 * pool_below
    pool_sq = c * a * a - 2 * a * c * (c + 1) + 2 * c * (c + 1) * (2 * c + 1) // 3
    return sample_sq, pool_sq


def _finish(sample_sq: int, pool_sq: int, n_sample: int, n_pool: int) -> float:
    u4 = n_sample * sample_sq + n_pool * pool_sq
    return u4 / (4 * n_sample * n_pool * (n_sample + n_pool)) - (
        4 * n_sample * n_pool - 1
    ) / (6 * (n_sample + n_pool))


def cramer_von_mises_hist(hist: Mapping[int, int], pool: WeightPool) -> float:
    """Statistic for a sample given as {pool position: count}."""
    if not hist:
        raise DegenerateInputError("empty sample")
    by_group: dict[int, int] = {}
    group_of = pool.group_of_position
    for pos, cnt in hist.items():
        g = int(group_of[pos])
        by_group[g] = by_group.get(g, 0) + int(cnt)
    n_sample = sum(by_group.values())
    n_pool = len(pool)
    counts = pool.group_counts
    before = pool.group_pool_before
    sample_sq = 0
    pool_sq = 0
    cum = 0
    prev = -1
    for g in sorted(by_group):
        pool_sq += _run_term(pool, prev, g, cum)
        s = by_group[g]
        ss, ps = _group_terms(s, int(counts[g]), int(before[g]), cum)
        sample_sq += ss
        pool_sq += ps
        cum += s
        prev = g
    pool_sq += _run_term(pool, prev, len(counts), cum)
    return _finish(sample_sq, pool_sq, n_sample, n_pool)


def cramer_von_mises(sample: Sequence[float], pool: Sequence[float]) -> float:
    """General two-sample form over explicit value multisets."""
    xs = sorted(float(v) for v in sample)
    ys = sorted(float(v) for v in pool)
    if not xs or not ys:
        raise DegenerateInputError("both samples must be non-empty")
    sample_sq = 0
    pool_sq = 0
    i = j = 0
    while i < len(xs) or j < len(ys):
        if j >= len(ys) or (i < len(xs) and xs[i] <= ys[j]):
            value = xs[i]
        else:
            value = ys[j]
        s = c = 0
        while i < len(xs) and xs[i] == value:
            s += 1
            i += 1
        while j < len(ys) and ys[j] == value:
            c += 1
            j += 1
        ss, ps = _group_terms(s, c, j - c, i - s)
        sample_sq += ss
        pool_sq += ps
    return _finish(sample_sq, pool_sq, len(xs), len(ys))


# -- measures ---------------------------------------------------------------


def graphlet_vector(psn: WeightedPSN, atlas: GraphletAtlas | None = None) -> VectorMeasure:
    """Occurrence counts of the 29 graphlets."""
    atlas = atlas or get_atlas()
    adj = psn.adjacency()
    counts = [0] * len(atlas.graphlets)
    tables = atlas._tables
    for nodes in connected_subsets(adj):
        entry = tables[len(nodes)][induced_mask(adj, nodes)]
        counts[entry[0]] += 1
    return VectorMeasure("graphlet35", np.array(counts, dtype=np.int64))


def ordered_vector(psn: WeightedPSN, atlas: GraphletAtlas | None = None) -> VectorMeasure:
    """Occurrence counts of the 42 sequence-ordered classes (sizes 3-4).

    Node ordinals are already sequence-sorted, so the induced mask over the
    ascending node tuple is the labeled class itself.
    """
    atlas = atlas or get_atlas()
    adj = psn.adjacency()
    counts = [0] * 42
    ordered = atlas._ordered
    for nodes in connected_subsets(adj, min_size=3, max_size=4):
        counts[ordered[len(nodes)][induced_mask(adj, nodes)]] += 1
    return VectorMeasure("ordered34", np.array(counts, dtype=np.int64))


def egdvm_matrix(
    psn: WeightedPSN,
    atlas: GraphletAtlas | None = None,
    accumulator: OrbitAccumulator | None = None,
) -> MatrixMeasure:
    """Edge graphlet degree vector matrix: touch counts, (m, 68) int64."""
    atlas = atlas or get_atlas()
    acc = accumulator if accumulator is not None else accumulate(psn, atlas)
    return MatrixMeasure("egdvm", acc.touch_counts.copy())


def wegdvm_matrix(
    psn: WeightedPSN,
    atlas: GraphletAtlas | None = None,
    statistic: str = "cvm",
    accumulator: OrbitAccumulator | None = None,
) -> MatrixMeasure:
    """Weighted variant: per cell, compare the weights collected from all
    touching occurrences against the network's full weight array.

    statistic "cvm" is the rank statistic; "sum" is the plain sum of the
    collected weights normalized by the orbit's graphlet edge count, so
    with unit weights it reproduces the touch counts exactly.
    """
    if statistic not in STATISTICS:
        raise GraphInputError(f"unknown statistic {statistic!r}")
    atlas = atlas or get_atlas()
    acc = accumulator if accumulator is not None else accumulate(psn, atlas)
    out = np.zeros((psn.m, N_ORBITS), dtype=np.float64)
    if not acc.weight_hists:
        return MatrixMeasure("wegdvm", out)
    pool = WeightPool.from_psn(psn)
    if statistic == "cvm":
        for (e, o), hist in acc.weight_hists.items():
            out[e, o] = cramer_von_mises_hist(hist, pool)
    else:
        values = pool.values
        edge_counts = atlas.orbit_edge_count
        for (e, o), hist in acc.weight_hists.items():
            total = sum(hist[pos] * values[pos] for pos in sorted(hist))
            out[e, o] = total / edge_counts[o]
    return MatrixMeasure("wegdvm", out)


def upper_correlations(matrix: MatrixMeasure) -> VectorMeasure:
    """Pearson correlations of all 2278 column pairs, row-major upper
    triangle.  Pairs involving a zero-variance column are 0."""
    x = np.asarray(matrix.values, dtype=np.float64)
    if x.shape[0] < 2:
        raise DegenerateInputError(
            f"column correlation needs at least 2 rows, got {x.shape[0]}"
        )
    centered = x - x.mean(axis=0)
    gram = centered.T @ centered
    variances = np.diag(gram).copy()
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = gram / np.sqrt(np.outer(variances, variances))
    corr[~np.isfinite(corr)] = 0.0
    flat = variances == 0.0
    corr[flat, :] = 0.0
    corr[:, flat] = 0.0
    np.clip(corr, -1.0, 1.0, out=corr)
    iu = np.triu_indices(x.shape[1], k=1)
    kind = "egdvm_cc" if matrix.kind == "egdvm" else "wegdvm_cc"
    return VectorMeasure(kind, corr[iu])


def compute_measure(
    psn: WeightedPSN,
    measure: str,
    atlas: GraphletAtlas | None = None,
    statistic: str = "cvm",
) -> VectorMeasure | MatrixMeasure:
    """Dispatch by CLI measure name."""
    if measure not in MEASURE_NAMES:
        raise GraphInputError(f"unknown measure {measure!r} (choose from {MEASURE_NAMES})")
    atlas = atlas or get_atlas()
    if measure == "graphlet35":
        return graphlet_vector(psn, atlas)
    if measure == "ordered34":
        return ordered_vector(psn, atlas)
    if measure == "egdvm":
        return egdvm_matrix(psn, atlas)
    if measure == "egdvm-cc":
        return upper_correlations(egdvm_matrix(psn, atlas))
    if measure == "wegdvm":
        return wegdvm_matrix(psn, atlas, statistic=statistic)
    return upper_correlations(wegdvm_matrix(psn, atlas, statistic=statistic))
