"""Weighted network construction and centrality measures.

Edges carry the absolute off-diagonal precision entries; the sign of the
implied partial correlation (-theta_ij scaled by the diagonal) is kept for
reporting only. Shortest-path measures use edge lengths 1/W_ij, so heavier
edges are shorter. Betweenness follows Brandes' accumulation over weighted
shortest paths with each unordered pair counted once; closeness is computed
within each connected component.
"""

from __future__ import annotations

import heapq
import io
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .estimator import PrecisionEstimate

PATH_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class WeightedNetwork:
    """Symmetric nonnegative adjacency with zero diagonal plus edge signs."""

    W: np.ndarray
    edge_sign: np.ndarray
    node_labels: list[str]
    node_domains: Optional[list[str]] = None

    def __post_init__(self):
        W = np.asarray(self.W, dtype=float)
        object.__setattr__(self, "W", W)
        p = W.shape[0]
        if W.shape != (p, p):
            raise ValidationError("W must be square")
        if np.max(np.abs(W - W.T)) > 1e-12:
            raise ValidationError("W must be symmetric")
        if np.any(W < 0):
            raise ValidationError("W must be nonnegative")
        if np.any(np.diag(W) != 0):
            raise ValidationError("W must have zero diagonal")
        if len(self.node_labels) != p:
            raise ValidationError("node_labels length mismatch")

    @property
    def p(self) -> int:
        return self.W.shape[0]

    def edges(self) -> list[tuple[int, int, float, int]]:
        out = []
        for i in range(self.p):
            for j in range(i + 1, self.p):
                if self.W[i, j] > 0:
                    out.append((i, j, float(self.W[i, j]), int(self.edge_sign[i, j])))
        return out


@dataclass(frozen=True)
class CentralitySummary:
    strength: np.ndarray
    closeness: np.ndarray
    betweenness: np.ndarray
    component_ids: np.ndarray
    edge_length_rule: str = "length = 1 / weight"

    def to_rows(self, labels: list[str]) -> list[dict]:
        return [
            {
                "node": labels[i],
                "strength": float(self.strength[i]),
                "closeness": float(self.closeness[i]),
                "betweenness": float(self.betweenness[i]),
                "component": int(self.component_ids[i]),
            }
            for i in range(len(labels))
        ]


def precision_to_adjacency(
    estimate: PrecisionEstimate,
    zero_tol: float = 1e-8,
    node_labels: Optional[list[str]] = None,
    node_domains: Optional[list[str]] = None,
) -> WeightedNetwork:
    """Absolute off-diagonal precision entries above zero_tol become edge weights."""
    theta = estimate.theta
    p = theta.shape[0]
    W = np.abs(theta).copy()
    W[W <= zero_tol] = 0.0
    np.fill_diagonal(W, 0.0)
    W = (W + W.T) / 2.0
    # Partial correlation -theta_ij / sqrt(theta_ii theta_jj): sign flips theta's.
    sign = -np.sign(theta).astype(int)
    sign[W == 0] = 0
    np.fill_diagonal(sign, 0)
    labels = node_labels or [f"V{i + 1}" for i in range(p)]
    return WeightedNetwork(W=W, edge_sign=sign, node_labels=labels, node_domains=node_domains)


def strength(net: WeightedNetwork) -> np.ndarray:
    """Row sums of the adjacency."""
    return net.W.sum(axis=1)


def _adjacency_lists(net: WeightedNetwork) -> list[list[tuple[int, float]]]:
    adj: list[list[tuple[int, float]]] = [[] for _ in range(net.p)]
    for i, j, w, _ in net.edges():
        length = 1.0 / w
        adj[i].append((j, length))
        adj[j].append((i, length))
    return adj


def _dijkstra(adj, source: int, p: int):
    """Single-source distances, path counts, and predecessor DAG.

    Path-length ties are detected with relative slack PATH_TIE_RTOL.
    """
    dist = np.full(p, np.inf)
    sigma = np.zeros(p)
    preds: list[list[int]] = [[] for _ in range(p)]
    dist[source] = 0.0
    sigma[source] = 1.0
    finished_order: list[int] = []
    done = np.zeros(p, dtype=bool)
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        finished_order.append(u)
        for v, length in adj[u]:
            nd = d + length
            tol = PATH_TIE_RTOL * max(1.0, abs(dist[v]) if np.isfinite(dist[v]) else abs(nd))
            if np.isfinite(dist[v]) and abs(nd - dist[v]) <= tol:
                if not done[v]:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
            elif nd < dist[v]:
                dist[v] = nd
                sigma[v] = sigma[u]
                preds[v] = [u]
                heapq.heappush(heap, (nd, v))
    return dist, sigma, preds, finished_order


def shortest_paths(net: WeightedNetwork) -> tuple[np.ndarray, np.ndarray]:
    """All-pairs shortest-path distances and shortest-path counts.

    Unreachable pairs have distance +inf and count 0; the diagonal is
    (0, 1) by convention.
    """
    p = net.p
    adj = _adjacency_lists(net)
    dist = np.full((p, p), np.inf)
    counts = np.zeros((p, p))
    for s in range(p):
        d, sigma, _, _ = _dijkstra(adj, s, p)
        dist[s] = d
        counts[s] = sigma
    return dist, counts


def weighted_betweenness(net: WeightedNetwork) -> np.ndarray:
    """Brandes betweenness over weighted shortest paths, unordered pairs."""
    p = net.p
    adj = _adjacency_lists(net)
    B = np.zeros(p)
    for s in range(p):
        _, sigma, preds, order = _dijkstra(adj, s, p)
        delta = np.zeros(p)
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                B[w] += delta[w]
    return B / 2.0


def connected_components(net: WeightedNetwork) -> np.ndarray:
    """0-based component ids in order of each component's smallest node."""
    p = net.p
    comp = np.full(p, -1, dtype=int)
    adj = _adjacency_lists(net)
    cid = 0
    for start in range(p):
        if comp[start] >= 0:
            continue
        stack = [start]
        comp[start] = cid
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if comp[v] < 0:
                    comp[v] = cid
                    stack.append(v)
        cid += 1
    return comp


def closeness(net: WeightedNetwork) -> np.ndarray:
    """Reciprocal of summed shortest-path distances within each node's component.

    Nodes alone in their component get closeness 0.
    """
    dist, _ = shortest_paths(net)
    comp = connected_components(net)
    p = net.p
    out = np.zeros(p)
    for i in range(p):
        mask = (comp == comp[i]) & (np.arange(p) != i)
        if not np.any(mask):
            continue
        total = float(np.sum(dist[i, mask]))
        out[i] = 1.0 / total if total > 0 else 0.0
    return out


def centrality_summary(net: WeightedNetwork) -> CentralitySummary:
    return CentralitySummary(
        strength=strength(net),
        closeness=closeness(net),
        betweenness=weighted_betweenness(net),
        component_ids=connected_components(net),
    )


def network_to_json(net: WeightedNetwork) -> dict:
    nodes = []
    for i, label in enumerate(net.node_labels):
        node = {"id": i, "label": label}
        if net.node_domains is not None:
            node["domain"] = net.node_domains[i]
        nodes.append(node)
    edges = [
        {"i": i, "j": j, "weight": w, "sign": s} for i, j, w, s in net.edges()
    ]
    return {"nodes": nodes, "edges": edges}


def network_from_json(payload: dict) -> WeightedNetwork:
    """Inverse of network_to_json (ignores any envelope fields)."""
    nodes = payload["nodes"]
    p = len(nodes)
    labels = [n["label"] for n in nodes]
    domains = [n["domain"] for n in nodes] if nodes and "domain" in nodes[0] else None
    W = np.zeros((p, p))
    sign = np.zeros((p, p), dtype=int)
    for e in payload["edges"]:
        i, j = e["i"], e["j"]
        W[i, j] = W[j, i] = e["weight"]
        sign[i, j] = sign[j, i] = e["sign"]
    return WeightedNetwork(W=W, edge_sign=sign, node_labels=labels, node_domains=domains)


def network_to_dot(net: WeightedNetwork, name: str = "ggm") -> str:
    buf = io.StringIO()
    buf.write(f"graph {name} {{\n")
    for i, label in enumerate(net.node_labels):
        buf.write(f'  n{i} [label="{label}"];\n')
    for i, j, w, s in net.edges():
        color = "green" if s > 0 else "red"
        buf.write(f'  n{i} -- n{j} [weight={w:.6g}, color={color}];\n')
    buf.write("}\n")
    return buf.getvalue()


def centrality_to_csv(summary: CentralitySummary, labels: list[str]) -> str:
    lines = ["node,strength,closeness,betweenness"]
    for row in summary.to_rows(labels):
        lines.append(
            f"{row['node']},{row['strength']!r},{row['closeness']!r},{row['betweenness']!r}"
        )
    return "\n".join(lines) + "\n"
