"""Weighted protein structure networks.

Nodes are residue ordinals 1..n.  Two residues are adjacent when the
minimum distance between their heavy atoms is strictly below the cutoff,
and the edge weight is sqrt(sequence distance / space distance).  Sequence
distance is the ordinal difference by default; author numbering is
available behind a flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DegenerateInputError, FormatError, PsnBuildError
from .pdb_ingest import Residue, ResidueChain


class Edge(NamedTuple):
    i: int        # 1-based ordinal, i < j
    j: int
    d_space: float
    weight: float


@dataclass(frozen=True)
class WeightedPSN:
    n: int
    edges: tuple[Edge, ...]   # sorted by (i, j), each pair at most once
    cutoff: float

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[int]:
        """Bitset neighborhoods over 0-based node ids."""
        adj = [0] * self.n
        for e in self.edges:
            adj[e.i - 1] |= 1 << (e.j - 1)
            adj[e.j - 1] |= 1 << (e.i - 1)
        return adj

    def edge_index(self) -> dict[int, int]:
        """(i-1) << 20 | (j-1) packed key -> position in ``edges``."""
        return {((e.i - 1) << 20) | (e.j - 1): k for k, e in enumerate(self.edges)}

    def weights(self) -> np.ndarray:
        return np.array([e.weight for e in self.edges], dtype=np.float64)

    def weight_positions(self) -> np.ndarray:
        """Position of each edge's weight in the ascending global weight
        array, ties broken by edge position so every edge gets a distinct
        slot."""
        order = np.argsort(self.weights(), kind="stable")
        positions = np.empty(self.m, dtype=np.int64)
        positions[order] = np.arange(self.m)
        return positions


def _min_sq_dist(pa: np.ndarray, pb: np.ndarray) -> float:
    d2 = ((pa[:, None, :] - pb[None, :, :]) ** 2).sum(axis=-1)
    return float(d2.min())


def space_distance(a: Residue, b: Residue) -> float:
    """Minimum distance between heavy atoms of two residues, angstroms."""
    if not a.atoms or not b.atoms:
        raise DegenerateInputError("residue without heavy atoms")
    return math.sqrt(_min_sq_dist(a.coord_array(), b.coord_array()))


def build_psn(
    chain: ResidueChain,
    cutoff: float = 6.0,
    sequence_distance: str = "ordinal",
    accelerate: bool = True,
) -> WeightedPSN:
    """Build the weighted network of a chain.

    ``accelerate`` prunes candidate pairs with a KD-tree over all atoms;
    every surviving pair is re-measured with the exact kernel, so the
    result is bit-identical to the quadratic scan.
    """
    if cutoff <= 0 or not math.isfinite(cutoff):
        raise PsnBuildError(f"cutoff must be positive and finite, got {cutoff}")
    if sequence_distance not in ("ordinal", "author"):
        raise PsnBuildError(f"unknown sequence_distance {sequence_distance!r}")
    n = len(chain.residues)
    if n < 2:
        raise DegenerateInputError("need at least 2 residues")

    coords = [r.coord_array() for r in chain.residues]
    if accelerate:
        sizes = [len(c) for c in coords]
        owner = np.repeat(np.arange(n), sizes)
        stacked = np.concatenate(coords, axis=0)
        from scipy.spatial import cKDTree

        tree = cKDTree(stacked)
        candidates = set()
        for a, b in tree.query_pairs(cutoff):
            ra, rb = int(owner[a]), int(owner[b])
            if ra != rb:
                candidates.add((ra, rb) if ra < rb else (rb, ra))
        pairs: Iterable[tuple[int, int]] = sorted(candidates)
    else:
        pairs = ((i, j) for i in range(n) for j in range(i + 1, n))

    edges = []
    for i, j in pairs:
        d = math.sqrt(_min_sq_dist(coords[i], coords[j]))
        if not d < cutoff:
            continue
        if d <= 0.0:
            ri, rj = chain.residues[i], chain.residues[j]
            raise PsnBuildError(
                f"residues {ri.author_number}{ri.insertion_code} and "
                f"{rj.author_number}{rj.insertion_code} share heavy-atom coordinates"
            )
        if sequence_distance == "ordinal":
            d_seq = j - i
        else:
            d_seq = abs(chain.residues[j].author_number - chain.residues[i].author_number)
            if d_seq == 0:
                ri, rj = chain.residues[i], chain.residues[j]
                raise PsnBuildError(
                    f"author numbering repeats {ri.author_number} "
                    "(insertion codes); use ordinal sequence distance"
                )
        edges.append(Edge(i + 1, j + 1, d, math.sqrt(d_seq / d)))
    return WeightedPSN(n, tuple(edges), cutoff)


def psn_from_edges(
    n: int, weighted_edges: Iterable[tuple[int, int, float]], cutoff: float = math.inf
) -> WeightedPSN:
    """A network from explicit (i, j, weight) triples, 1-based nodes.

    Used for synthetic graphs; d_space is back-filled so the
    weight/space/sequence relation still holds.
    """
    edges = []
    seen = set()
    for i, j, w in weighted_edges:
        if i == j:
            raise PsnBuildError(f"self loop at node {i}")
        if i > j:
            i, j = j, i
        if i < 1 or j > n:
            raise PsnBuildError(f"edge ({i},{j}) outside 1..{n}")
        if (i, j) in seen:
            raise PsnBuildError(f"duplicate edge ({i},{j})")
        if not w > 0 or not math.isfinite(w):
            raise PsnBuildError(f"edge ({i},{j}) weight {w} not positive finite")
        seen.add((i, j))
        edges.append(Edge(i, j, (j - i) / (w * w), w))
    edges.sort(key=lambda e: (e.i, e.j))
    return WeightedPSN(n, tuple(edges), cutoff)


def dump_psn(psn: WeightedPSN) -> str:
    """Plain-text form: header ``n m cutoff`` then one ``i j d_space weight``
    line per edge, floats at 17 significant digits (round-trip exact)."""
    lines = [f"{psn.n} {psn.m} {psn.cutoff:.17g}"]
    for e in psn.edges:
        lines.append(f"{e.i} {e.j} {e.d_space:.17g} {e.weight:.17g}")
    return "\n".join(lines) + "\n"


def load_psn(text: str) -> WeightedPSN:
    lines = text.strip().splitlines()
    if not lines:
        raise FormatError("empty network dump")
    try:
        head = lines[0].split()
        n, m, cutoff = int(head[0]), int(head[1]), float(head[2])
        edges = []
        for line in lines[1:]:
            i, j, d, w = line.split()
            edges.append(Edge(int(i), int(j), float(d), float(w)))
    except (ValueError, IndexError) as exc:
        raise FormatError(f"malformed network dump: {exc}") from None
    if len(edges) != m:
        raise FormatError(f"header says {m} edges, found {len(edges)}")
    return WeightedPSN(n, tuple(edges), cutoff)
