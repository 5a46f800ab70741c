"""Catalog of small connected graphs (graphlets), their edge orbits, and
sequence-ordered classes.

A graph on k nodes is encoded as an integer bitmask over the upper-triangle
node pairs (0,1), (0,2), ..., (k-2,k-1) in lexicographic order.  Pair index p
occupies bit (C-1-p) where C = k*(k-1)/2, i.e. the first pair is the most
significant bit.  With that layout, integer comparison of two masks agrees
with lexicographic comparison of their adjacency bitstrings, so "minimal
code" can be taken over plain ints.

The canonical code of a graph is the minimum mask over all node relabelings.
Identifiers are assigned deterministically:

* graphlets: by (size, canonical code) ascending;
* edge orbits within a graphlet: by their smallest pair index in the
  canonical labeling, numbered globally in graphlet order;
* ordered classes (labeled graphs on sequence-sorted nodes): by
  (size, mask) ascending.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from .errors import AtlasBuildError, GraphInputError

SIZES = (3, 4, 5)
ORDERED_SIZES = (3, 4)

#: Upper-triangle pairs per size, lexicographic order.
PAIRS: dict[int, tuple[tuple[int, int], ...]] = {
    k: tuple((i, j) for i in range(k) for j in range(i + 1, k)) for k in range(2, 6)
}
N_PAIRS: dict[int, int] = {k: len(PAIRS[k]) for k in PAIRS}
#: Bit value of pair index p (most-significant-first layout).
PAIR_BIT: dict[int, tuple[int, ...]] = {
    k: tuple(1 << (N_PAIRS[k] - 1 - p) for p in range(N_PAIRS[k])) for k in PAIRS
}
PAIR_INDEX: dict[int, dict[tuple[int, int], int]] = {
    k: {pair: p for p, pair in enumerate(PAIRS[k])} for k in PAIRS
}
PERMS: dict[int, tuple[tuple[int, ...], ...]] = {
    k: tuple(itertools.permutations(range(k))) for k in range(2, 6)
}

N_GRAPHLETS = 29
N_ORBITS = 68
N_ORDERED = 42
GRAPHLETS_BY_SIZE = {3: 2, 4: 6, 5: 21}
ORDERED_BY_SIZE = {3: 4, 4: 38}


def mask_to_string(mask: int, size: int) -> str:
    """Adjacency bitstring of a mask, first pair leftmost."""
    return format(mask, f"0{N_PAIRS[size]}b")


def permute_mask(mask: int, size: int, perm: tuple[int, ...]) -> int:
    """Mask of the graph with node i relabeled to perm[i]."""
    out = 0
    bits = PAIR_BIT[size]
    index = PAIR_INDEX[size]
    for p, (i, j) in enumerate(PAIRS[size]):
        if mask & bits[p]:
            a, b = perm[i], perm[j]
            if a > b:
                a, b = b, a
            out |= bits[index[(a, b)]]
    return out


def mask_is_connected(mask: int, size: int) -> bool:
    adj = [0] * size
    bits = PAIR_BIT[size]
    for p, (i, j) in enumerate(PAIRS[size]):
        if mask & bits[p]:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        v = frontier
        while v:
            low = v & -v
            v ^= low
            nxt |= adj[low.bit_length() - 1]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << size) - 1


@dataclass(frozen=True)
class EdgeOrbit:
    """One equivalence class of edges under the automorphisms of a graphlet."""

    id: int                          # global id, 0..67
    graphlet_id: int
    pair_indices: tuple[int, ...]    # member pair indices in the canonical labeling
    multiplicity: int                # == len(pair_indices)


@dataclass(frozen=True)
class Graphlet:
    """A connected graph on 3-5 nodes in canonical labeling."""

    id: int                          # global id, 0..28
    size: int
    code: int                        # canonical mask
    edges: tuple[tuple[int, int], ...]
    orbits: tuple[EdgeOrbit, ...]
    orbit_of_pair: tuple[int, ...]   # pair index -> global orbit id, -1 if absent

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def code_string(self) -> str:
        return mask_to_string(self.code, self.size)


class GraphletAtlas:
    """Immutable lookup structure for classification of small induced graphs.

    ``classify`` and ``classify_ordered`` are table lookups over all masks of
    the given size, so the per-occurrence cost during enumeration is O(1).
    """

    def __init__(self) -> None:
        self.graphlets: tuple[Graphlet, ...] = ()
        self.orbits: tuple[EdgeOrbit, ...] = ()
        # per size: mask -> (graphlet id, orbit id per pair, perm to canonical) or None
        self._tables: dict[int, list[tuple[int, tuple[int, ...], tuple[int, ...]] | None]] = {}
        # per size: mask -> ordered class id or None
        self._ordered: dict[int, list[int | None]] = {}
        self._build()
        self._check_counts()
        # flat per-orbit metadata used by the measures
        self.orbit_graphlet = tuple(o.graphlet_id for o in self.orbits)
        self.orbit_multiplicity = tuple(o.multiplicity for o in self.orbits)
        self.orbit_edge_count = tuple(
            self.graphlets[o.graphlet_id].n_edges for o in self.orbits
        )

    # -- construction -----------------------------------------------------

    def _build(self) -> None:
        graphlets: list[Graphlet] = []
        orbits: list[EdgeOrbit] = []
        for size in SIZES:
            perms = PERMS[size]
            n_masks = 1 << N_PAIRS[size]
            canon_of: list[int | None] = [None] * n_masks
            canon_perm: list[tuple[int, ...] | None] = [None] * n_masks
            codes: list[int] = []
            for mask in range(n_masks):
                if not mask_is_connected(mask, size):
                    continue
                best = mask
                best_perm = perms[0]
                for perm in perms:
                    img = permute_mask(mask, size, perm)
                    if img < best:
                        best = img
                        best_perm = perm
                canon_of[mask] = best
                canon_perm[mask] = best_perm
                if best == mask:
                    codes.append(mask)
            codes.sort()
            local_gid = {code: len(graphlets) + i for i, code in enumerate(codes)}

            for code in codes:
                gid = local_gid[code]
                edges = tuple(
                    PAIRS[size][p]
                    for p in range(N_PAIRS[size])
                    if code & PAIR_BIT[size][p]
                )
                autos = [p for p in perms if permute_mask(code, size, p) == code]
                # orbit representative of a pair = min image index over the group
                rep: dict[int, int] = {}
                for p, (i, j) in enumerate(PAIRS[size]):
                    if not code & PAIR_BIT[size][p]:
                        continue
                    images = set()
                    for perm in autos:
                        a, b = perm[i], perm[j]
                        if a > b:
                            a, b = b, a
                        images.add(PAIR_INDEX[size][(a, b)])
                    rep[p] = min(images)
                g_orbits: list[EdgeOrbit] = []
                orbit_of_pair = [-1] * N_PAIRS[size]
                for r in sorted(set(rep.values())):
                    members = tuple(sorted(p for p in rep if rep[p] == r))
                    oid = len(orbits) + len(g_orbits)
                    g_orbits.append(EdgeOrbit(oid, gid, members, len(members)))
                    for p in members:
                        orbit_of_pair[p] = oid
                graphlets.append(
                    Graphlet(gid, size, code, edges, tuple(g_orbits), tuple(orbit_of_pair))
                )
                orbits.extend(g_orbits)

            table: list[tuple[int, tuple[int, ...], tuple[int, ...]] | None] = [None] * n_masks
            for mask in range(n_masks):
                code = canon_of[mask]
                if code is None:
                    continue
                perm = canon_perm[mask]
                assert perm is not None
                g = graphlets[local_gid[code]]
                per_pair = [-1] * N_PAIRS[size]
                for p, (i, j) in enumerate(PAIRS[size]):
                    if not mask & PAIR_BIT[size][p]:
                        continue
                    a, b = perm[i], perm[j]
                    if a > b:
                        a, b = b, a
                    per_pair[p] = g.orbit_of_pair[PAIR_INDEX[size][(a, b)]]
                table[mask] = (g.id, tuple(per_pair), perm)
            self._tables[size] = table

        self.graphlets = tuple(graphlets)
        self.orbits = tuple(orbits)

        next_cid = 0
        for size in ORDERED_SIZES:
            n_masks = 1 << N_PAIRS[size]
            ordered: list[int | None] = [None] * n_masks
            for mask in range(n_masks):
                if mask_is_connected(mask, size):
                    ordered[mask] = next_cid
                    next_cid += 1
            self._ordered[size] = ordered
        self._n_ordered = next_cid

    def _check_counts(self) -> None:
        by_size = {s: sum(1 for g in self.graphlets if g.size == s) for s in SIZES}
        if by_size != GRAPHLETS_BY_SIZE:
            raise AtlasBuildError(f"graphlet counts per size {by_size}")
        if len(self.graphlets) != N_GRAPHLETS:
            raise AtlasBuildError(f"{len(self.graphlets)} graphlets")
        if len(self.orbits) != N_ORBITS:
            raise AtlasBuildError(f"{len(self.orbits)} edge orbits")
        if [o.id for o in self.orbits] != list(range(N_ORBITS)):
            raise AtlasBuildError("orbit ids not sequential")
        if self._n_ordered != N_ORDERED:
            raise AtlasBuildError(f"{self._n_ordered} ordered classes")
        ordered_by_size = {
            s: sum(1 for c in self._ordered[s] if c is not None) for s in ORDERED_SIZES
        }
        if ordered_by_size != ORDERED_BY_SIZE:
            raise AtlasBuildError(f"ordered class counts per size {ordered_by_size}")

    # -- queries -----------------------------------------------------------

    def classify(self, mask: int, size: int) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        """Classify a connected induced graph given as a pair bitmask.

        Returns (graphlet id, global orbit id per pair index (-1 where no
        edge), node permutation onto the canonical labeling).
        """
        if size not in SIZES:
            raise GraphInputError(f"size {size} not in {SIZES}")
        if not 0 <= mask < (1 << N_PAIRS[size]):
            raise GraphInputError(f"mask {mask} out of range for size {size}")
        entry = self._tables[size][mask]
        if entry is None:
            raise GraphInputError("graph is not connected")
        return entry

    def classify_ordered(self, mask: int, size: int) -> int:
        """Ordered-class id of a connected labeled graph on 3 or 4 nodes."""
        if size not in ORDERED_SIZES:
            raise GraphInputError(f"size {size} not in {ORDERED_SIZES}")
        if not 0 <= mask < (1 << N_PAIRS[size]):
            raise GraphInputError(f"mask {mask} out of range for size {size}")
        cid = self._ordered[size][mask]
        if cid is None:
            raise GraphInputError("graph is not connected")
        return cid

    # -- export ------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "sizes": list(SIZES),
            "counts": {
                "graphlets": len(self.graphlets),
                "edge_orbits": len(self.orbits),
                "ordered_classes": self._n_ordered,
            },
            "graphlets": [
                {
                    "id": g.id,
                    "size": g.size,
                    "code": g.code_string,
                    "edges": [list(e) for e in g.edges],
                    "orbits": [
                        {
                            "id": o.id,
                            "edges": [list(PAIRS[g.size][p]) for p in o.pair_indices],
                            "multiplicity": o.multiplicity,
                        }
                        for o in g.orbits
                    ],
                }
                for g in self.graphlets
            ],
            "ordered_classes": [
                {
                    "id": self._ordered[size][mask],
                    "size": size,
                    "code": mask_to_string(mask, size),
                    "edges": [
                        list(PAIRS[size][p])
                        for p in range(N_PAIRS[size])
                        if mask & PAIR_BIT[size][p]
                    ],
                }
                for size in ORDERED_SIZES
                for mask in range(1 << N_PAIRS[size])
                if self._ordered[size][mask] is not None
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@lru_cache(maxsize=1)
def get_atlas() -> GraphletAtlas:
    """The process-wide atlas instance (built once, ~0.2 s)."""
    return GraphletAtlas()
