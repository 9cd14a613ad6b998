"""Undirected weighted simple graphs and the traversal primitives built on them.

A :class:`Graph` is immutable after construction: every operation in this
package is a pure function of (graph, arguments), so graphs can be shared
freely across threads and worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InputError

__all__ = [
    "Graph",
    "VertexSet",
    "DistanceField",
    "PathCounts",
    "as_vertex_set",
    "load_edge_list",
    "parse_label_file",
    "format_edge_list",
    "is_connected",
    "multi_source_distances",
    "shortest_path_counts",
    "weighted_degree",
]


class Graph:
    """Simple undirected graph with strictly positive edge weights.

    Vertex ids are the integers ``0..n-1``.  Edges are stored once as
    ``(u, v)`` pairs with ``u < v``; neighbor queries are symmetric.
    Construction validates simplicity (no self-loops, no duplicates) and
    weight positivity, then freezes adjacency.
    """

    __slots__ = ("n", "edges", "weights", "labels", "_adj", "_adj_w", "_hash")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]],
        weights: Iterable[float] | None = None,
        labels: Sequence[str] | None = None,
    ):
        if n <= 0:
            raise InputError("graph needs at least one vertex")
        edge_list: list[tuple[int, int]] = []
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            edge_list.append((u, v) if u < v else (v, u))
        if weights is None:
            weight_list = [1.0] * len(edge_list)
        else:
            weight_list = [float(w) for w in weights]
            if len(weight_list) != len(edge_list):
                raise InputError("weights must parallel edges")
        order = sorted(range(len(edge_list)), key=lambda i: edge_list[i])
        edge_list = [edge_list[i] for i in order]
        weight_list = [weight_list[i] for i in order]
        seen: set[tuple[int, int]] = set()
        for e in edge_list:
            if e in seen:
                raise InputError(f"duplicate edge {e}")
            seen.add(e)
        for e, w in zip(edge_list, weight_list):
            if not w > 0:
                raise InputError(f"non-positive weight {w} on edge {e}")
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise InputError(f"expected {n} labels, got {len(labels)}")

        adj: list[list[int]] = [[] for _ in range(n)]
        adj_w: list[list[float]] = [[] for _ in range(n)]
        for (u, v), w in zip(edge_list, weight_list):
            adj[u].append(v)
            adj_w[u].append(w)
            adj[v].append(u)
            adj_w[v].append(w)

        self.n = n
        self.edges = tuple(edge_list)
        self.weights = tuple(weight_list)
        self.labels = labels
        self._adj = tuple(tuple(a) for a in adj)
        self._adj_w = tuple(tuple(a) for a in adj_w)
        self._hash = hash((n, self.edges, self.weights, self.labels))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def neighbor_weights(self, v: int) -> tuple[float, ...]:
        """Weights parallel to ``neighbors(v)``."""
        return self._adj_w[v]

    def is_unweighted(self) -> bool:
        return all(w == 1.0 for w in self.weights)

    def vertices(self) -> range:
        return range(self.n)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def vertex_by_label(self, name: str) -> int:
        if self.labels is not None:
            try:
                return self.labels.index(name)
            except ValueError:
                pass
        if name.isdigit() and int(name) < self.n:
            return int(name)
        raise InputError(f"unknown vertex label {name!r}")

    def relabel(self, labels: Sequence[str]) -> "Graph":
        return Graph(self.n, self.edges, self.weights, labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.edges == other.edges
            and self.weights == other.weights
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        kind = "unweighted" if self.is_unweighted() else "weighted"
        return f"Graph(n={self.n}, m={self.m}, {kind})"

    # Pickle support: __slots__ without __dict__ needs explicit state.
    def __getstate__(self):
        return (self.n, self.edges, self.weights, self.labels)

    def __setstate__(self, state):
        self.__init__(state[0], state[1], state[2], state[3])


@dataclass(frozen=True)
class VertexSet:
    """Canonical vertex subset: sorted, distinct, nonempty members."""

    members: tuple[int, ...]

    def __post_init__(self):
        if not self.members:
            raise InputError("vertex set must be nonempty")
        if any(self.members[i] >= self.members[i + 1] for i in range(len(self.members) - 1)):
            raise InputError("vertex set members must be strictly increasing")
        if self.members[0] < 0:
            raise InputError("vertex ids must be nonnegative")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def complement(self, n: int) -> tuple[int, ...]:
        inside = set(self.members)
        return tuple(v for v in range(n) if v not in inside)

    def check_proper(self, g: Graph) -> None:
        if self.members[-1] >= g.n:
            raise InputError(f"vertex {self.members[-1]} outside graph with n={g.n}")
        if len(self.members) >= g.n:
            raise InputError("vertex set must be a proper subset of V")


def as_vertex_set(s: VertexSet | Iterable[int]) -> VertexSet:
    """Normalize any iterable of vertex ids to canonical form."""
    if isinstance(s, VertexSet):
        return s
    return VertexSet(tuple(sorted(set(int(v) for v in s))))


@dataclass(frozen=True)
class DistanceField:
    """Hop distances from every vertex to the nearest member of ``source``."""

    source: VertexSet
    dist: tuple[int, ...]

    def total(self) -> int:
        return sum(self.dist)


@dataclass(frozen=True)
class PathCounts:
    """Per-vertex distance and number of shortest paths from ``source``.

    Counts are exact Python integers, so they never overflow.
    """

    source: int
    dist: tuple[int, ...]
    sigma: tuple[int, ...]


UNREACHED = -1


def bfs_counts(
    adj: Sequence[Sequence[int]],
    source: int,
    banned: frozenset[int] = frozenset(),
) -> tuple[list[int], list[int]]:
    """Single-source BFS with shortest-path counting, skipping ``banned`` vertices.

    Returns (dist, sigma) lists over all vertex ids; banned or unreachable
    vertices keep dist == -1 and sigma == 0.
    """
    n = len(adj)
    dist = [UNREACHED] * n
    sigma = [0] * n
    dist[source] = 0
    sigma[source] = 1
    queue = [source]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        du1 = dist[u] + 1
        su = sigma[u]
        for v in adj[u]:
            if v in banned:
                continue
            if dist[v] == UNREACHED:
                dist[v] = du1
                queue.append(v)
            if dist[v] == du1:
                sigma[v] += su
    return dist, sigma


def load_edge_list(
    text: str,
    weighted: bool = False,
    labels: Sequence[str] | None = None,
) -> Graph:
    """Parse a line-oriented edge list into a canonical :class:`Graph`.

    Lines hold ``u v`` or ``u v w``; ``#`` starts a comment.  If every
    endpoint token is a nonnegative integer the tokens are vertex ids and
    ``n`` is the largest id plus one.  Otherwise tokens are string names:
    they are interned in first-seen order, unless ``labels`` is given, in
    which case the label list fixes the id of every name.
    """
    raw: list[tuple[str, str, float, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if weighted:
            if len(parts) != 3:
                raise InputError(f"line {lineno}: expected 'u v w', got {body!r}")
            try:
                w = float(parts[2])
            except ValueError as exc:
                raise InputError(f"line {lineno}: bad weight {parts[2]!r}") from exc
        else:
            if len(parts) == 3:
                try:
                    w = float(parts[2])
                except ValueError as exc:
                    raise InputError(f"line {lineno}: bad weight {parts[2]!r}") from exc
            elif len(parts) == 2:
                w = 1.0
            else:
                raise InputError(f"line {lineno}: expected 'u v [w]', got {body!r}")
        if w <= 0:
            raise InputError(f"line {lineno}: non-positive weight {w}")
        raw.append((parts[0], parts[1], w, lineno))
    if not raw:
        raise InputError("edge list is empty")

    all_numeric = all(a.isdigit() and b.isdigit() for a, b, _, _ in raw)
    name_to_id: dict[str, int] = {}
    if labels is not None:
        name_to_id = {name: i for i, name in enumerate(labels)}

    def resolve(token: str, lineno: int) -> int:
        if labels is not None and token in name_to_id:
            return name_to_id[token]
        if all_numeric and labels is None:
            return int(token)
        if labels is not None:
            raise InputError(f"line {lineno}: token {token!r} not in label file")
        if token not in name_to_id:
            name_to_id[token] = len(name_to_id)
        return name_to_id[token]

    edges: list[tuple[int, int]] = []
    weights: list[float] = []
    seen: set[tuple[int, int]] = set()
    for a, b, w, lineno in raw:
        u, v = resolve(a, lineno), resolve(b, lineno)
        if u == v:
            raise InputError(f"line {lineno}: self-loop at {a!r}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise InputError(f"line {lineno}: duplicate edge {a!r} {b!r}")
        seen.add(key)
        edges.append(key)
        weights.append(w)

    if labels is not None:
        n = len(labels)
        final_labels: Sequence[str] | None = labels
    elif all_numeric:
        n = max(max(u, v) for u, v in edges) + 1
        final_labels = None
    else:
        n = len(name_to_id)
        final_labels = [name for name, _ in sorted(name_to_id.items(), key=lambda kv: kv[1])]
    return Graph(n, edges, weights, final_labels)


def parse_label_file(text: str) -> list[str]:
    """Parse ``index<TAB>label`` lines into a dense label list."""
    entries: dict[int, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].rstrip("\n")
        if not body.strip():
            continue
        if "\t" not in body:
            raise InputError(f"label line {lineno}: expected 'index<TAB>label'")
        idx_s, label = body.split("\t", 1)
        try:
            idx = int(idx_s)
        except ValueError as exc:
            raise InputError(f"label line {lineno}: bad index {idx_s!r}") from exc
        if idx in entries:
            raise InputError(f"label line {lineno}: duplicate index {idx}")
        entries[idx] = label.strip()
    if not entries:
        raise InputError("label file is empty")
    n = max(entries) + 1
    missing = [i for i in range(n) if i not in entries]
    if missing:
        raise InputError(f"label file missing indices {missing}")
    return [entries[i] for i in range(n)]


def format_edge_list(g: Graph, use_labels: bool = False) -> str:
    """Render a graph in the canonical edge-list format the loader accepts."""
    lines = []
    for (u, v), w in zip(g.edges, g.weights):
        a, b = (g.label(u), g.label(v)) if use_labels else (str(u), str(v))
        if a > b:
            a, b = b, a
        if w == 1.0:
            lines.append(f"{a} {b}")
        else:
            lines.append(f"{a} {b} {w!r}")
    lines.sort()
    return "\n".join(lines) + "\n"


def is_connected(g: Graph) -> bool:
    """True iff a single component spans every vertex."""
    if g.n == 1:
        return True
    seen = bytearray(g.n)
    seen[0] = 1
    stack = [0]
    count = 1
    adj = g._adj
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = 1
                count += 1
                stack.append(v)
    return count == g.n


def multi_source_distances(g: Graph, s: VertexSet | Iterable[int]) -> DistanceField:
    """Hop distance from every vertex to the nearest member of ``s``.

    Weights are ignored: distances here are purely combinatorial.
    """
    vs = as_vertex_set(s)
    if vs.members[-1] >= g.n:
        raise InputError(f"vertex {vs.members[-1]} outside graph")
    dist = [UNREACHED] * g.n
    queue: list[int] = []
    for v in vs.members:
        dist[v] = 0
        queue.append(v)
    head = 0
    adj = g._adj
    while head < len(queue):
        u = queue[head]
        head += 1
        du1 = dist[u] + 1
        for v in adj[u]:
            if dist[v] == UNREACHED:
                dist[v] = du1
                queue.append(v)
    return DistanceField(source=vs, dist=tuple(dist))


def shortest_path_counts(g: Graph, u: int) -> PathCounts:
    """Distances and exact shortest-path counts from source ``u``."""
    if not 0 <= u < g.n:
        raise InputError(f"vertex {u} outside graph")
    dist, sigma = bfs_counts(g._adj, u)
    return PathCounts(source=u, dist=tuple(dist), sigma=tuple(sigma))


def weighted_degree(g: Graph, u: int) -> float:
    """Sum of incident edge weights; equals the degree when unweighted."""
    if not 0 <= u < g.n:
        raise InputError(f"vertex {u} outside graph")
    return sum(g._adj_w[u])
