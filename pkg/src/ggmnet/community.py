"""Random-walk community detection (Walktrap) and modularity scoring.

Nodes whose t-step random-walk visit profiles are close are merged
agglomeratively under a Ward-style criterion; the dendrogram is then cut
at the level of maximum modularity. Only communities joined by at least
one edge are merge candidates, and isolated nodes (degree 0) sit outside
the walk and come back as trailing singleton communities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .netgraph import WeightedNetwork


@dataclass(frozen=True)
class MergeRecord:
    a: int
    b: int
    new_id: int
    height: float


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic one-step walk matrix; zero rows mark isolated nodes."""

    P: np.ndarray
    degrees: np.ndarray
    total_weight: float

    @property
    def isolated(self) -> np.ndarray:
        return self.degrees == 0


@dataclass(frozen=True)
class Partition:
    labels: np.ndarray
    modularity: float
    dendrogram: list[MergeRecord]
    t: int

    @property
    def num_communities(self) -> int:
        return int(self.labels.max()) + 1

    def to_dict(self) -> dict:
        return {
            "labels": [int(v) for v in self.labels],
            "modularity": float(self.modularity),
            "t": self.t,
            "merges": [
                {"a": m.a, "b": m.b, "new_id": m.new_id, "height": m.height}
                for m in self.dendrogram
            ],
        }


def transition_matrix(net: WeightedNetwork) -> TransitionMatrix:
    """P_ij = W_ij / degree_i; rows of degree-0 nodes stay all-zero."""
    degrees = net.W.sum(axis=1)
    P = np.zeros_like(net.W)
    pos = degrees > 0
    P[pos] = net.W[pos] / degrees[pos, None]
    return TransitionMatrix(P=P, degrees=degrees, total_weight=float(net.W.sum()) / 2.0)


def walk_distance(tm: TransitionMatrix, t: int, i: int, j: int) -> float:
    """Distance between walk profiles: sqrt(sum_k (P^t_ik - P^t_jk)^2 / d_k).

    Isolated nodes are excluded from the sum (their degree is 0).
    """
    if t < 1:
        raise ValidationError("t must be >= 1")
    Pt = np.linalg.matrix_power(tm.P, t)
    mask = tm.degrees > 0
    diff = Pt[i, mask] - Pt[j, mask]
    return float(np.sqrt(np.sum(diff**2 / tm.degrees[mask])))


def modularity(net: WeightedNetwork, labels) -> float:
    """Newman modularity Q over ordered node pairs, weighted null model."""
    labels = np.asarray(labels)
    if labels.shape[0] != net.p:
        raise ValidationError("labels length mismatch")
    degrees = net.W.sum(axis=1)
    two_m = float(degrees.sum())
    if two_m == 0:
        raise NumericalError("modularity undefined on an edgeless network")
    Q = 0.0
    for c in np.unique(labels):
        idx = labels == c
        Q += float(net.W[np.ix_(idx, idx)].sum())
        Q -= float(degrees[idx].sum()) ** 2 / two_m
    return Q / two_m


def _profile_distance_sq(prof_a, prof_b, inv_deg) -> float:
    diff = prof_a - prof_b
    return float(np.sum(diff**2 * inv_deg))


def walktrap(net: WeightedNetwork, t: int = 4) -> Partition:
    """Agglomerative random-walk clustering cut at maximum modularity.

    Merging proceeds by the Ward-style criterion on walk-profile distances
    between communities (profiles averaged over members), restricted to
    edge-adjacent community pairs; ties go to the lexicographically
    smallest community-id pair. The returned labels are contiguous from 0,
    with isolated nodes appended as singleton communities.
    """
    if t < 1:
        raise ValidationError("t must be >= 1")
    tm = transition_matrix(net)
    active = np.flatnonzero(~tm.isolated)
    isolated = np.flatnonzero(tm.isolated)
    if active.size == 0:
        raise NumericalError("walktrap undefined on an edgeless network")

    Pt = np.linalg.matrix_power(tm.P, t)
    inv_deg = np.zeros(net.p)
    inv_deg[active] = 1.0 / tm.degrees[active]
    n_active = active.size

    # Community state keyed by integer id; singletons take the node index.
    members: dict[int, list[int]] = {int(v): [int(v)] for v in active}
    profiles: dict[int, np.ndarray] = {int(v): Pt[v].copy() for v in active}
    neighbors: dict[int, set[int]] = {int(v): set() for v in active}
    for i in active:
        for j in np.flatnonzero(net.W[i] > 0):
            if i != j:
                neighbors[int(i)].add(int(j))

    def ward_cost(a: int, b: int) -> float:
        na, nb = len(members[a]), len(members[b])
        d2 = _profile_distance_sq(profiles[a], profiles[b], inv_deg)
        return na * nb / (na + nb) * d2 / n_active

    def snapshot_labels() -> np.ndarray:
        labels = np.full(net.p, -1, dtype=int)
        # Contiguous ids in order of each community's smallest member node.
        ordered = sorted(members, key=lambda c: min(members[c]))
        for new_id, c in enumerate(ordered):
            labels[members[c]] = new_id
        nxt = len(ordered)
        for v in isolated:
            labels[v] = nxt
            nxt += 1
        return labels

    best_labels = snapshot_labels()
    best_q = modularity(net, best_labels)
    merges: list[MergeRecord] = []
    next_id = net.p
    raw_height_max = 0.0

    while True:
        best_pair = None
        best_cost = np.inf
        for a in sorted(members):
            for b in sorted(neighbors[a]):
                if b <= a:
                    continue
                cost = ward_cost(a, b)
                if cost < best_cost - 1e-15 or (
                    abs(cost - best_cost) <= 1e-15 and best_pair is not None and (a, b) < best_pair
                ):
                    best_cost = cost
                    best_pair = (a, b)
        if best_pair is None:
            break
        a, b = best_pair
        na, nb = len(members[a]), len(members[b])
        merged_profile = (na * profiles[a] + nb * profiles[b]) / (na + nb)
        merged_members = members[a] + members[b]
        merged_neighbors = (neighbors[a] | neighbors[b]) - {a, b}
        cid = next_id
        next_id += 1
        for d in (a, b):
            del members[d], profiles[d], neighbors[d]
        for other in merged_neighbors:
            neighbors[other].discard(a)
            neighbors[other].discard(b)
            neighbors[other].add(cid)
        members[cid] = merged_members
        profiles[cid] = merged_profile
        neighbors[cid] = merged_neighbors
        # Report non-decreasing heights: clip Ward inversions to the running max.
        raw_height_max = max(raw_height_max, best_cost)
        merges.append(MergeRecord(a=a, b=b, new_id=cid, height=raw_height_max))

        labels = snapshot_labels()
        q = modularity(net, labels)
        if q >= best_q - 1e-15:
            best_q = q
            best_labels = labels

    return Partition(labels=best_labels, modularity=best_q, dendrogram=merges, t=t)
