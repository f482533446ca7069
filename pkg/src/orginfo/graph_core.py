"""Undirected weighted graphs: construction, random models, serialization."""
from __future__ import annotations

import json
from dataclasses import dataclass
import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "DegreeSummary",
    "graph_from_json",
    "graph_from_edgelist",
    "graph_to_json",
    "graph_to_obj",
    "make_special",
    "erdos_renyi",
    "barabasi_albert",
    "complement",
    "is_connected",
    "is_spanning_supergraph",
    "degree_summary",
    "SPECIAL_FAMILIES",
    "add_random_edges",
]


class GraphError(ValueError):
    """Raised for malformed graph input or invalid constructor arguments."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Symmetric weighted adjacency on ``n`` nodes.

    ``weights`` is stored as a read-only float array with zero diagonal and
    entries in ``[0, 1]``.
    """

    n: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape != (self.n, self.n):
            raise GraphError(f"weights must be {self.n}x{self.n}, got {w.shape}")
        if self.n < 1:
            raise GraphError("graph needs at least one node")
        if not np.array_equal(w, w.T):
            raise GraphError("weights must be exactly symmetric")
        if np.any(np.diag(w) != 0):
            raise GraphError("self-loops are not allowed")
        if np.any(w < 0) or np.any(w > 1) or not np.all(np.isfinite(w)):
            raise GraphError("weights must lie in [0, 1]")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros((n, n)))

    @classmethod
    def from_edges(cls, n: int, edges, weights=None) -> "Graph":
        w = np.zeros((n, n))
        seen = set()
        if weights is None:
            weights = [1.0] * len(edges)
        if len(weights) != len(edges):
            raise GraphError("weights must be parallel to edges")
        for edge, wt in zip(edges, weights):
            if len(edge) != 2:
                raise GraphError(f"edge must have two endpoints: {edge!r}")
            i, j = edge
            if not (_is_index(i) and _is_index(j)):
                raise GraphError(f"edge endpoints must be integers: {edge!r}")
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise GraphError(f"self-loop at node {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            wt = float(wt)
            if not 0.0 <= wt <= 1.0:
                raise GraphError(f"edge weight {wt} outside [0, 1]")
            w[i, j] = w[j, i] = wt
        return cls(n, w)

    def edges(self) -> list[tuple[int, int, float]]:
        iu, ju = np.nonzero(np.triu(self.weights, 1))
        return [(int(i), int(j), float(self.weights[i, j])) for i, j in zip(iu, ju)]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.n, self.weights.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={len(self.edges())})"


def _is_index(x) -> bool:
    return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


@dataclass(frozen=True)
class DegreeSummary:
    degrees: np.ndarray
    d_max: float
    d_min: float
    edge_count: int


def graph_from_json(text: str) -> Graph:
    """Parse ``{"n": int, "edges": [[i, j], ...], "weights": [...]?}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed JSON: {exc}") from exc
    return _graph_from_obj(data)


def _graph_from_obj(data) -> Graph:
    if not isinstance(data, dict) or "n" not in data:
        raise GraphError('graph JSON must be an object with key "n"')
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise GraphError(f"n must be a positive integer, got {n!r}")
    edges = data.get("edges", [])
    if not isinstance(edges, list):
        raise GraphError('"edges" must be a list')
    weights = data.get("weights")
    if weights is not None and not isinstance(weights, list):
        raise GraphError('"weights" must be a list')
    return Graph.from_edges(n, edges, weights)


def graph_from_edgelist(text: str, n: int) -> Graph:
    """Parse lines of ``i j [w]``; ``#`` starts a comment."""
    edges, weights = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphError(f"line {lineno}: expected 'i j [w]', got {raw!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError as exc:
            raise GraphError(f"line {lineno}: {exc}") from exc
        edges.append((i, j))
        weights.append(w)
    return Graph.from_edges(n, edges, weights)


def graph_to_obj(g: Graph) -> dict:
    edges = g.edges()
    obj = {"n": g.n, "edges": [[i, j] for i, j, _ in edges]}
    if any(w != 1.0 for _, _, w in edges):
        obj["weights"] = [w for _, _, w in edges]
    return obj


def graph_to_json(g: Graph) -> str:
    return json.dumps(graph_to_obj(g))


SPECIAL_FAMILIES = ("complete", "star", "ring", "path", "complete_bipartite", "two_cliques")


def make_special(family: str, n: int, m: int | None = None) -> Graph:
    """Build one of the named graph families on ``n`` nodes.

    ``m`` is the smaller side for ``complete_bipartite`` (nodes ``0..m-1``) and
    the first clique's size for ``two_cliques``. The star's core is node 0.
    """
    if n < 1:
        raise GraphError("n must be >= 1")
    w = np.zeros((n, n))
    if family == "complete":
        w[:] = 1.0
    elif family == "star":
        w[0, 1:] = w[1:, 0] = 1.0
    elif family == "ring":
        if n < 3:
            raise GraphError("ring needs n >= 3")
        for i in range(n):
            w[i, (i + 1) % n] = w[(i + 1) % n, i] = 1.0
    elif family == "path":
        for i in range(n - 1):
            w[i, i + 1] = w[i + 1, i] = 1.0
    elif family == "complete_bipartite":
        if m is None or not 1 <= m <= n - m:
            raise GraphError("complete_bipartite needs 1 <= m <= n - m")
        w[:m, m:] = w[m:, :m] = 1.0
    elif family == "two_cliques":
        if m is None or not 1 <= m <= n - m:
            raise GraphError("two_cliques needs 1 <= m <= n - m")
        w[:m, :m] = 1.0
        w[m:, m:] = 1.0
    else:
        raise GraphError(f"unknown family {family!r}")
    np.fill_diagonal(w, 0.0)
    return Graph(n, w)


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with binary weights; pairs drawn in row-major upper-triangle order."""
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    # draw before thresholding so p=0 and p=1 consume the same stream
    mask = rng.random(iu.size) < p
    w = np.zeros((n, n))
    w[iu[mask], ju[mask]] = 1.0
    return Graph(n, w + w.T)


def barabasi_albert(n: int, m_attach: int, seed: int) -> Graph:
    """Preferential attachment grown from a clique on ``m_attach + 1`` nodes.

    Each new node links to ``m_attach`` distinct existing nodes, drawn without
    replacement with probability proportional to current degree.
    """
    m0 = m_attach + 1
    if m_attach < 1 or m0 >= n:
        raise GraphError(f"need 1 <= m_attach <= n - 2, got m_attach={m_attach}, n={n}")
    rng = np.random.default_rng(seed)
    w = np.zeros((n, n))
    w[:m0, :m0] = 1.0
    np.fill_diagonal(w, 0.0)
    deg = w.sum(axis=1)
    for v in range(m0, n):
        probs = deg[:v] / deg[:v].sum()
        targets = rng.choice(v, size=m_attach, replace=False, p=probs)
        w[v, targets] = w[targets, v] = 1.0
        deg[targets] += 1.0
        deg[v] = m_attach
    return Graph(n, w)


def complement(g: Graph) -> Graph:
    w = 1.0 - g.weights
    np.fill_diagonal(w, 0.0)
    return Graph(g.n, w)


def is_connected(g: Graph) -> bool:
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    stack = [0]
    adj = g.weights > 0
    while stack:
        i = stack.pop()
        nbrs = np.nonzero(adj[i] & ~seen)[0]
        seen[nbrs] = True
        stack.extend(nbrs.tolist())
    return bool(seen.all())


def is_spanning_supergraph(g_big: Graph, g_small: Graph) -> bool:
    if g_big.n != g_small.n:
        raise GraphError(f"size mismatch: {g_big.n} vs {g_small.n}")
    return bool(np.all(g_big.weights >= g_small.weights))


def degree_summary(g: Graph) -> DegreeSummary:
    degrees = g.weights.sum(axis=1)
    return DegreeSummary(
        degrees=degrees,
        d_max=float(degrees.max()),
        d_min=float(degrees.min()),
        edge_count=int(np.count_nonzero(g.weights > 0) // 2),
    )


def add_random_edges(g: Graph, k: int, rng: np.random.Generator) -> Graph:
    """Return a spanning supergraph of ``g`` with up to ``k`` extra unit edges."""
    iu, ju = np.triu_indices(g.n, 1)
    free = np.nonzero(g.weights[iu, ju] == 0)[0]
    pick = rng.permutation(free)[:k]
    w = np.array(g.weights)
    w[iu[pick], ju[pick]] = w[ju[pick], iu[pick]] = 1.0
    return Graph(g.n, w)

