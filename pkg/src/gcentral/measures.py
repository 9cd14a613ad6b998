"""The four group-centrality scores for vertex subsets of a connected graph.

Degree and closeness are computed in exact rational arithmetic so ties are
exact; betweenness combines exact integer path counts per pair with a
floating-point sum; the random-walk score lives in :mod:`gcentral.randomwalk`
and is re-exported through :func:`evaluate`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InputError
from .graph import Graph, VertexSet, as_vertex_set, bfs_counts, multi_source_distances

__all__ = [
    "Measure",
    "Score",
    "group_degree",
    "group_closeness",
    "group_betweenness",
    "sigma_through_set",
    "evaluate",
]


class Measure(enum.Enum):
    """A group-centrality measure together with its optimization direction."""

    DEGREE = "degree"
    CLOSENESS = "closeness"
    BETWEENNESS = "betweenness"
    RANDOMWALK = "randomwalk"

    @property
    def maximize(self) -> bool:
        """Higher is more central for degree and betweenness; lower for the rest."""
        return self in (Measure.DEGREE, Measure.BETWEENNESS)

    @property
    def exact(self) -> bool:
        """Whether scores carry an exact rational representation."""
        return self in (Measure.DEGREE, Measure.CLOSENESS)

    @classmethod
    def parse(cls, name: str) -> "Measure":
        key = name.strip().lower().replace("-", "").replace("_", "")
        for m in cls:
            if m.value == key:
                return m
        raise InputError(f"unknown measure {name!r}")


@dataclass(frozen=True)
class Score:
    """A measure value, optionally with its exact rational form."""

    value: float
    exact: Fraction | None = None

    @property
    def exact_num(self) -> int | None:
        return self.exact.numerator if self.exact is not None else None

    @property
    def exact_den(self) -> int | None:
        return self.exact.denominator if self.exact is not None else None

    @staticmethod
    def from_fraction(f: Fraction) -> "Score":
        return Score(value=float(f), exact=f)

    def render(self) -> str:
        """Human-readable form: exact rational first when one exists."""
        if self.exact is not None:
            return f"{self.exact.numerator}/{self.exact.denominator} ({self.value:.6f})"
        return f"{self.value:.6f}"


def _check_proper(g: Graph, s: VertexSet) -> None:
    s.check_proper(g)


def group_degree(g: Graph, s: VertexSet | Iterable[int]) -> Score:
    """Fraction of non-members adjacent to the set; 1 iff the set dominates.

    Multiple ties from one outside vertex into the set count once.
    """
    vs = as_vertex_set(s)
    _check_proper(g, vs)
    inside = set(vs.members)
    covered = 0
    outside = 0
    for v in range(g.n):
        if v in inside:
            continue
        outside += 1
        if any(w in inside for w in g.neighbors(v)):
            covered += 1
    return Score.from_fraction(Fraction(covered, outside))


def group_closeness(g: Graph, s: VertexSet | Iterable[int]) -> Score:
    """Mean hop distance from non-members to the set; 1 iff the set dominates."""
    vs = as_vertex_set(s)
    _check_proper(g, vs)
    field = multi_source_distances(g, vs)
    if min(field.dist) < 0:
        raise InputError("graph is disconnected; group closeness is undefined")
    outside = g.n - len(vs)
    return Score.from_fraction(Fraction(sum(field.dist), outside))


def sigma_through_set(
    g: Graph, u: int, v: int, s: VertexSet | Iterable[int]
) -> tuple[int, int]:
    """Count shortest u-v paths that meet the set, and all shortest u-v paths.

    Uses the complement route: paths avoiding the set are exactly the
    shortest paths of the original length that survive in the graph with the
    set's vertices removed.  If u and v fall apart or drift farther there,
    every shortest path crosses the set.
    """
    vs = as_vertex_set(s)
    if u in vs or v in vs:
        raise InputError("endpoints must lie outside the set")
    if u == v:
        raise InputError("endpoints must differ")
    dist, sigma = bfs_counts(g._adj, u)
    total = sigma[v]
    if total == 0:
        raise InputError(f"no path between {u} and {v}; graph is disconnected")
    banned = frozenset(vs.members)
    dist_sub, sigma_sub = bfs_counts(g._adj, u, banned)
    avoiding = sigma_sub[v] if dist_sub[v] == dist[v] else 0
    return total - avoiding, total


def group_betweenness(g: Graph, s: VertexSet | Iterable[int]) -> Score:
    """Mean fraction, over outside pairs, of their geodesics meeting the set.

    Exact integer path counts per pair, summed in floating point, normalized
    by the number of outside pairs.  Value 1 iff the set is a vertex cover.
    """
    vs = as_vertex_set(s)
    _check_proper(g, vs)
    comp = vs.complement(g.n)
    c = len(comp)
    if c < 2:
        raise InputError("group betweenness needs at least two outside vertices")
    banned = frozenset(vs.members)
    adj = g._adj
    bc = 0.0
    for i, u in enumerate(comp):
        dist, sigma = bfs_counts(adj, u)
        dist_sub, sigma_sub = bfs_counts(adj, u, banned)
        for v in comp[i + 1 :]:
            total = sigma[v]
            if total == 0:
                raise InputError("graph is disconnected; group betweenness is undefined")
            avoiding = sigma_sub[v] if dist_sub[v] == dist[v] else 0
            bc += (total - avoiding) / total
    return Score(value=2.0 * bc / (c * (c - 1)))


def evaluate(g: Graph, s: VertexSet | Iterable[int], measure: Measure) -> Score:
    """Score one set under one measure (reference implementations)."""
    if measure is Measure.DEGREE:
        return group_degree(g, s)
    if measure is Measure.CLOSENESS:
        return group_closeness(g, s)
    if measure is Measure.BETWEENNESS:
        return group_betweenness(g, s)
    from .randomwalk import group_randomwalk

    return group_randomwalk(g, s)
