"""Modularity, Louvain communities, degrees and before/after frame diffs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from . import _kernels
from .frames import SemanticFrame
from .netbuild import Tfmn

LOUVAIN_TOL = 1e-7


@dataclass(frozen=True)
class Partition:
    assignment: Mapping[str, int]

    @property
    def community_count(self) -> int:
        return len(set(self.assignment.values()))

    def communities(self) -> list:
        out: dict = {}
        for s in sorted(self.assignment):
            out.setdefault(self.assignment[s], []).append(s)
        return [out[c] for c in sorted(out)]

    @classmethod
    def from_labels(cls, labels: Mapping[str, object]) -> "Partition":
        """Relabel communities 0..k-1 ordered by their smallest member stem."""
        first: dict = {}
        for s in sorted(labels):
            first.setdefault(labels[s], len(first))
        return cls({s: first[labels[s]] for s in sorted(labels)})

    @classmethod
    def singletons(cls, stems) -> "Partition":
        return cls.from_labels({s: s for s in stems})

    def to_tsv(self) -> str:
        return "".join(f"{s}\t{c}\n" for s, c in sorted(self.assignment.items()))


def _check_cover(net: Tfmn, partition: Partition) -> None:
    nodes = set(net.nodes)
    assigned = set(partition.assignment)
    if nodes != assigned:
        missing = sorted(nodes - assigned)
        extra = sorted(assigned - nodes)
        raise ValueError(f"partition does not match nodes (uncovered: {missing[:5]}, extra: {extra[:5]})")


def modularity(net: Tfmn, partition: Partition, layer: str = "combined") -> float:
    """Newman modularity of ``partition`` over the weights of ``layer``."""
    _check_cover(net, partition)
    stems, src, dst, w = net.edge_arrays(layer)
    if w.size == 0:
        return 0.0
    comm_ids = sorted(set(partition.assignment.values()))
    remap = {c: k for k, c in enumerate(comm_ids)}
    comm = np.array([remap[partition.assignment[s]] for s in stems], dtype=np.int64)
    internal, total = _kernels.community_sums(src, dst, w, comm, len(comm_ids), len(stems))
    two_m = 2.0 * w.sum()
    return float(np.sum(internal / two_m - (total / two_m) ** 2))


# --------------------------------------------------------------------------
# Louvain
# --------------------------------------------------------------------------

@dataclass
class LouvainTrace:
    """Accepted local moves per aggregation level: (node, old, new, gain) rows."""

    levels: list


def _csr(n: int, src: np.ndarray, dst: np.ndarray, w: np.ndarray):
    rows = np.concatenate([src, dst])
    cols = np.concatenate([dst, src])
    vals = np.concatenate([w, w])
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    indptr = np.cumsum(indptr)
    return indptr, cols.astype(np.int64), vals.astype(np.float64)


def _aggregate(n_comm: int, comm: np.ndarray, src, dst, w, self_w):
    """Collapse communities; internal weight moves to the self-loop vector."""
    ca, cb = comm[src], comm[dst]
    new_self = np.bincount(comm, weights=self_w, minlength=n_comm)
    same = ca == cb
    new_self += np.bincount(ca[same], weights=w[same], minlength=n_comm)
    a = np.minimum(ca[~same], cb[~same])
    b = np.maximum(ca[~same], cb[~same])
    key = a * n_comm + b
    uniq, inv = np.unique(key, return_inverse=True)
    agg_w = np.bincount(inv, weights=w[~same], minlength=uniq.size)
    return uniq // n_comm, uniq % n_comm, agg_w, new_self


def louvain_with_trace(net: Tfmn, layer: str = "combined", seed: int = 0, tol: float = LOUVAIN_TOL) -> tuple:
    stems, src, dst, w = net.edge_arrays(layer)
    n0 = len(stems)
    if n0 == 0:
        raise ValueError("louvain needs a non-empty network")
    trace = LouvainTrace([])
    membership = np.arange(n0, dtype=np.int64)
    if w.size == 0:
        return Partition.singletons(stems), trace
    m = float(w.sum())
    rng = np.random.default_rng(seed % 2**64)
    n = n0
    self_w = np.zeros(n, dtype=np.float64)
    while True:
        indptr, indices, weights = _csr(n, src, dst, w)
        degree = np.bincount(src, weights=w, minlength=n) + np.bincount(dst, weights=w, minlength=n) + 2.0 * self_w
        comm = np.arange(n, dtype=np.int64)
        tot = degree.copy()
        order = rng.permutation(n).astype(np.int64)
        moves = []
        while True:
            k, node, old, new, gain = _kernels.local_move_pass(indptr, indices, weights, degree, order, comm, tot, m, tol)
            if k == 0:
                break
            moves.extend(zip(node[:k].tolist(), old[:k].tolist(), new[:k].tolist(), gain[:k].tolist()))
        trace.levels.append(moves)
        if not moves:
            break
        # node ids are sorted-stem order at level 0, so unique() keeps the
        # lexicographic tie-break stable across levels
        labels, comm = np.unique(comm, return_inverse=True)
        comm = comm.astype(np.int64)
        n_comm = labels.size
        membership = comm[membership]
        if n_comm == n:
            break
        src, dst, w, self_w = _aggregate(n_comm, comm, src, dst, w, self_w)
        n = n_comm
    return Partition.from_labels({s: int(c) for s, c in zip(stems, membership)}), trace


def louvain(net: Tfmn, layer: str = "combined", seed: int = 0) -> Partition:
    """Greedy modularity communities; deterministic for a given seed."""
    return louvain_with_trace(net, layer, seed)[0]


# --------------------------------------------------------------------------
# degrees and diffs
# --------------------------------------------------------------------------

def degree_of(net: Tfmn, stem: str, layer: str = "combined") -> int:
    if stem not in net.nodes:
        return 0
    return len(net.adjacency(layer)[stem])


@dataclass(frozen=True)
class FrameDiff:
    target: str
    added: frozenset
    removed: frozenset
    degree_before: int
    degree_after: int

    @property
    def relative_degree_change(self) -> Optional[float]:
        if self.degree_before == 0:
            return None
        return (self.degree_after - self.degree_before) / self.degree_before

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "added": sorted(self.added),
            "removed": sorted(self.removed),
            "degree_before": self.degree_before,
            "degree_after": self.degree_after,
            "relative_change": self.relative_degree_change,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True, indent=1)


def frame_diff(before: SemanticFrame, after: SemanticFrame) -> FrameDiff:
    if before.target != after.target:
        raise ValueError(f"frames have different targets: {before.target!r} vs {after.target!r}")
    return FrameDiff(
        before.target,
        frozenset(after.neighbors - before.neighbors),
        frozenset(before.neighbors - after.neighbors),
        len(before.direct_neighbors),
        len(after.direct_neighbors),
    )
