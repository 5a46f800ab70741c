"""Independent reference implementations used to validate the fast paths.

Everything here favors obviousness over speed: subsets come from
itertools, connectivity from networkx, and the rank statistic from
scipy's midranks on materialized value arrays.
"""

from __future__ import annotations

import itertools
from collections import defaultdict

import networkx as nx
import numpy as np
from scipy.stats import rankdata

from wgdv.psn import WeightedPSN


def nx_graph(psn: WeightedPSN) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(psn.n))
    g.add_edges_from((e.i - 1, e.j - 1) for e in psn.edges)
    return g


def subsets_oracle(psn: WeightedPSN, min_size: int = 3, max_size: int = 5):
    """All connected induced node subsets, by exhaustive scan."""
    g = nx_graph(psn)
    out = []
    for k in range(min_size, max_size + 1):
        for sub in itertools.combinations(range(psn.n), k):
            if nx.is_connected(g.subgraph(sub)):
                out.append(sub)
    return out


def graphlet_counts_oracle(psn: WeightedPSN, atlas) -> np.ndarray:
    """29-vector from the exhaustive scan; classification by the atlas,
    whose own correctness is established in test_atlas."""
    from wgdv.enumeration import induced_mask

    adj = psn.adjacency()
    counts = np.zeros(29, dtype=np.int64)
    for sub in subsets_oracle(psn):
        gid, _, _ = atlas.classify(induced_mask(adj, sub), len(sub))
        counts[gid] += 1
    return counts


def ordered_counts_oracle(psn: WeightedPSN, atlas) -> np.ndarray:
    from wgdv.enumeration import induced_mask

    adj = psn.adjacency()
    counts = np.zeros(42, dtype=np.int64)
    for sub in subsets_oracle(psn, 3, 4):
        counts[atlas.classify_ordered(induced_mask(adj, sub), len(sub))] += 1
    return counts


def egdvm_oracle(psn: WeightedPSN, atlas) -> np.ndarray:
    """(m, 68) touch counts from the exhaustive scan."""
    from wgdv.atlas import PAIRS
    from wgdv.enumeration import induced_mask

    adj = psn.adjacency()
    edge_pos = {(e.i - 1, e.j - 1): idx for idx, e in enumerate(psn.edges)}
    touch = np.zeros((psn.m, 68), dtype=np.int64)
    for sub in subsets_oracle(psn):
        k = len(sub)
        _, orbit_by_pair, _ = atlas.classify(induced_mask(adj, sub), k)
        for p, (x, y) in enumerate(PAIRS[k]):
            orbit = orbit_by_pair[p]
            if orbit >= 0:
                touch[edge_pos[(sub[x], sub[y])], orbit] += 1
    return touch


def weight_multisets_oracle(psn: WeightedPSN, atlas) -> dict:
    """(edge index, orbit id) -> sorted list of pooled occurrence weights."""
    from wgdv.atlas import PAIRS
    from wgdv.enumeration import induced_mask

    adj = psn.adjacency()
    edge_pos = {(e.i - 1, e.j - 1): idx for idx, e in enumerate(psn.edges)}
    weight_of = {(e.i - 1, e.j - 1): e.weight for e in psn.edges}
    pooled = defaultdict(list)
    for sub in subsets_oracle(psn):
        k = len(sub)
        _, orbit_by_pair, _ = atlas.classify(induced_mask(adj, sub), k)
        present = []
        for p, (x, y) in enumerate(PAIRS[k]):
            if orbit_by_pair[p] >= 0:
                present.append((edge_pos[(sub[x], sub[y])], orbit_by_pair[p],
                                weight_of[(sub[x], sub[y])]))
        occurrence_weights = [w for _, _, w in present]
        for e, orbit, _ in present:
            pooled[(e, orbit)].extend(occurrence_weights)
    return {key: sorted(values) for key, values in pooled.items()}


def cvm_oracle(sample_values, pool_values) -> float:
    """Two-sample statistic with scipy midranks, straight off the formula."""
    x = np.sort(np.asarray(sample_values, dtype=np.float64))
    y = np.sort(np.asarray(pool_values, dtype=np.float64))
    nx_, ny_ = len(x), len(y)
    ranks = rankdata(np.concatenate([x, y]), method="average")
    rx, ry = ranks[:nx_], ranks[nx_:]
    u = nx_ * np.sum((rx - np.arange(1, nx_ + 1)) ** 2) + ny_ * np.sum(
        (ry - np.arange(1, ny_ + 1)) ** 2
    )
    return float(
        u / (nx_ * ny_ * (nx_ + ny_)) - (4 * nx_ * ny_ - 1) / (6 * (nx_ + ny_))
    )


def wegdvm_oracle(psn: WeightedPSN, atlas, statistic: str = "cvm") -> np.ndarray:
    """(m, 68) matrix built entirely from the exhaustive-scan multisets."""
    pooled = weight_multisets_oracle(psn, atlas)
    out = np.zeros((psn.m, 68), dtype=np.float64)
    all_weights = [e.weight for e in psn.edges]
    for (e, orbit), values in pooled.items():
        if statistic == "cvm":
            out[e, orbit] = cvm_oracle(values, all_weights)
        else:
            out[e, orbit] = sum(values) / atlas.orbit_edge_count[orbit]
    return out
