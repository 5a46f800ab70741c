"""Exact enumeration of connected induced subgraphs on 3-5 nodes.

Uses the ESU scheme: grow a subset from a root node, extending only with
exclusive neighbors carrying an id greater than the root.  The recursion
tree visits every connected subset of each intermediate size exactly once,
so one pass with max_size=5 yields all sizes 3-5 without duplicates.
Neighborhoods are plain ints used as bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .atlas import N_ORBITS, N_PAIRS, PAIR_BIT, PAIRS, GraphletAtlas
from .errors import GraphInputError
from .psn import WeightedPSN


def connected_subsets(
    adj: Sequence[int],
    min_size: int = 3,
    max_size: int = 5,
    roots: Iterable[int] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield each connected induced node subset with min_size..max_size
    nodes exactly once, as a sorted tuple of 0-based ids.

    ``roots`` restricts the top-level start nodes; the union over a
    partition of all nodes reproduces the full enumeration, which is what
    the parallel driver relies on.
    """
    n = len(adj)
    if roots is None:
        roots = range(n)

    def extend(nodes: tuple[int, ...], ext: int, excluded: int, gt: int):
        if len(nodes) >= min_size:
            yield tuple(sorted(nodes))
        if len(nodes) == max_size:
            return
        while ext:
            wbit = ext & -ext
            ext ^= wbit
            w = wbit.bit_length() - 1
            grow = adj[w] & ~excluded & gt
            yield from extend(nodes + (w,), ext | grow, excluded | adj[w], gt)

    for v in roots:
        gt = ((1 << n) - 1) & (-1 << (v + 1))
        yield from extend((v,), adj[v] & gt, adj[v] | (1 << v), gt)


def induced_mask(adj: Sequence[int], nodes: tuple[int, ...]) -> int:
    """Pair bitmask of the subgraph induced by sorted 0-based ``nodes``."""
    k = len(nodes)
    mask = 0
    bits = PAIR_BIT[k]
    for p, (x, y) in enumerate(PAIRS[k]):
        if (adj[nodes[x]] >> nodes[y]) & 1:
            mask |= bits[p]
    return mask


@dataclass(frozen=True)
class Occurrence:
    """One induced subgraph hit, in 1-based node ordinals."""

    nodes: tuple[int, ...]                         # ascending
    graphlet_id: int
    edges: tuple[tuple[int, int], ...]             # (i, j) with i < j
    orbit_ids: tuple[int, ...]                     # global orbit per edge
    weights: tuple[float, ...]                     # weight per edge


def iter_occurrences(psn: WeightedPSN, atlas: GraphletAtlas) -> Iterator[Occurrence]:
    """Classified occurrences of all graphlets in the network."""
    adj = psn.adjacency()
    weight_of = {((e.i - 1) << 20) | (e.j - 1): e.weight for e in psn.edges}
    for nodes in connected_subsets(adj):
        k = len(nodes)
        mask = induced_mask(adj, nodes)
        gid, orbit_by_pair, _ = atlas.classify(mask, k)
        edges = []
        orbits = []
        weights = []
        for p, (x, y) in enumerate(PAIRS[k]):
            o = orbit_by_pair[p]
            if o >= 0:
                a, b = nodes[x], nodes[y]
                edges.append((a + 1, b + 1))
                orbits.append(o)
                weights.append(weight_of[(a << 20) | b])
        yield Occurrence(
            tuple(v + 1 for v in nodes), gid, tuple(edges), tuple(orbits), tuple(weights)
        )


def visit_occurrences(
    psn: WeightedPSN, atlas: GraphletAtlas, visitor: Callable[[Occurrence], None]
) -> int:
    """Drive ``visitor`` over every occurrence; returns the count."""
    count = 0
    for occ in iter_occurrences(psn, atlas):
        visitor(occ)
        count += 1
    return count


@dataclass
class OrbitAccumulator:
    """Per-edge, per-orbit tallies gathered during one enumeration pass.

    ``touch_counts[e, o]`` counts occurrences whose orbit o contains edge e.
    ``weight_hists[(e, o)]`` histograms, over positions in the network's
    ascending weight array, the weights of *all* edges of every such
    occurrence, so its total mass is touch_counts[e, o] times the edge
    count of o's graphlet.  Addition of position counts makes merging
    independent of enumeration order.
    """

    n_edges: int
    touch_counts: np.ndarray                          # (m, 68) int64
    weight_hists: dict[tuple[int, int], dict[int, int]]

    def merge(self, other: "OrbitAccumulator") -> "OrbitAccumulator":
        if self.n_edges != other.n_edges:
            raise GraphInputError("accumulators come from different networks")
        self.touch_counts += other.touch_counts
        for key, hist in other.weight_hists.items():
            mine = self.weight_hists.get(key)
            if mine is None:
                self.weight_hists[key] = dict(hist)
            else:
                for pos, cnt in hist.items():
                    mine[pos] = mine.get(pos, 0) + cnt
        return self

    def check_mass(self, atlas: GraphletAtlas) -> None:
        """Verify the histogram-mass relation; used by tests."""
        for (e, o), hist in self.weight_hists.items():
            expected = int(self.touch_counts[e, o]) * atlas.orbit_edge_count[o]
            if sum(hist.values()) != expected:
                raise GraphInputError(
                    f"edge {e} orbit {o}: mass {sum(hist.values())} != {expected}"
                )


def accumulate(
    psn: WeightedPSN, atlas: GraphletAtlas, roots: Iterable[int] | None = None
) -> OrbitAccumulator:
    """One enumeration pass over (optionally a slice of) the network."""
    adj = psn.adjacency()
    edge_index = psn.edge_index()
    pos_of_edge = psn.weight_positions().tolist()
    m = psn.m
    touch = [[0] * N_ORBITS for _ in range(m)]
    hists: dict[tuple[int, int], dict[int, int]] = {}
    tables = atlas._tables
    pairs_by_size = PAIRS
    bits_by_size = PAIR_BIT

    for nodes in connected_subsets(adj, roots=roots):
        k = len(nodes)
        mask = 0
        bits = bits_by_size[k]
        pairs = pairs_by_size[k]
        for p in range(N_PAIRS[k]):
            x, y = pairs[p]
            if (adj[nodes[x]] >> nodes[y]) & 1:
                mask |= bits[p]
        entry = tables[k][mask]
        orbit_by_pair = entry[1]
        eids = []
        orbs = []
        for p in range(N_PAIRS[k]):
            o = orbit_by_pair[p]
            if o >= 0:
                x, y = pairs[p]
                eids.append(edge_index[(nodes[x] << 20) | nodes[y]])
                orbs.append(o)
        occ_positions = [pos_of_edge[e] for e in eids]
        for e, o in zip(eids, orbs):
            touch[e][o] += 1
            hist = hists.get((e, o))
            if hist is None:
                hist = hists[(e, o)] = {}
            for pos in occ_positions:
                hist[pos] = hist.get(pos, 0) + 1

    return OrbitAccumulator(m, np.array(touch, dtype=np.int64).reshape(m, N_ORBITS), hists)
