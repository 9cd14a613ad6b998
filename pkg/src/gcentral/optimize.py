"""Exact search for the most central size-k vertex set, by full enumeration.

Subsets are enumerated in colexicographic order and scored independently;
the global optimum is returned together with the *complete* list of tying
sets, since several measures routinely produce many co-optimal groups.

Ties are exact rational comparisons for degree and closeness, and relative
1e-9 comparisons for betweenness and random-walk scores, so floating-point
noise can neither fabricate nor destroy a tie.

Parallel runs partition the subset space by the leading (largest) element;
workers evaluate disjoint partitions and the results are merged by a pure
reduction that is independent of scheduling, so output is byte-identical
for any worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import ExitStack
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceededError, InputError
from .graph import Graph, VertexSet, bfs_counts, is_connected
from .measures import Measure, Score
from . import measures as _measures
from .randomwalk import transition_matrix

__all__ = [
    "OptimumResult",
    "DecisionResult",
    "CrossMeasureReport",
    "optimumset",
    "optimumset_decision",
    "cross_measure_report",
    "colex_subsets",
    "score_subset",
    "set_float_tie_tolerance",
    "MEASURE_ORDER",
    "DEFAULT_BUDGET",
    "FLOAT_TIE_REL",
]

DEFAULT_BUDGET = 10_000_000

#: Relative tolerance classifying two floating-point scores as tied.
FLOAT_TIE_REL = 1e-9
_FLOAT_TIE_ABS = 1e-12


def set_float_tie_tolerance(rel: float) -> None:
    """Override the relative tie tolerance for betweenness/random-walk scores."""
    global FLOAT_TIE_REL
    if not 0.0 < rel < 1.0:
        raise InputError(f"tie tolerance must lie in (0, 1); got {rel}")
    FLOAT_TIE_REL = rel


def _is_tie(value, best) -> bool:
    if isinstance(best, Fraction):
        return value == best
    return math.isclose(value, best, rel_tol=FLOAT_TIE_REL, abs_tol=_FLOAT_TIE_ABS)


def _keep_rel() -> float:
    # Retention window while scanning a partition; generous multiple of the
    # tie tolerance so no global tie can be pruned by a tighter local best.
    return 10.0 * FLOAT_TIE_REL


def _within_keep_window(value: float, best: float) -> bool:
    return abs(value - best) <= _keep_rel() * max(1.0, abs(value), abs(best))


def colex_subsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All size-k subsets of range(n) in colexicographic order."""
    if k == 0:
        yield ()
        return
    for b in range(k - 1, n):
        for rest in colex_subsets(b, k - 1):
            yield rest + (b,)


# ---------------------------------------------------------------------------
# Evaluation kernels.  Dense numpy implementations of the same complement-
# route semantics as gcentral.measures; the reference implementations there
# stay the normative ones and the test suite pins the two together.


class _SigmaOverflow(Exception):
    pass


def _apsp_layers(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All-pairs hop distances and shortest-path counts by layered matmul.

    Counts ride in float64, which is exact for integers below 2**53; a
    guard trips to the arbitrary-precision Python route before any count
    could lose exactness.
    """
    c = a.shape[0]
    dist = np.full((c, c), -1, dtype=np.int16)
    np.fill_diagonal(dist, 0)
    sigma = np.eye(c)
    frontier = np.eye(c)
    guard = 2.0**53 / (2 * max(c, 2))
    t = 0
    while True:
        t += 1
        if frontier.max() > guard:
            raise _SigmaOverflow
        nxt = frontier @ a
        newly = (dist < 0) & (nxt > 0)
        if not newly.any():
            break
        dist[newly] = t
        sigma[newly] = nxt[newly]
        nxt *= newly
        frontier = nxt
    return dist, sigma


class _GraphKernels:
    """Per-graph dense arrays shared by every subset evaluation."""

    def __init__(self, g: Graph):
        self.g = g
        n = g.n
        adj = np.zeros((n, n))
        for u, v in g.edges:
            adj[u, v] = 1.0
            adj[v, u] = 1.0
        self.adj = adj
        self.adj_bool = adj > 0
        self._dist: np.ndarray | None = None
        self._sigma: np.ndarray | None = None
        self._p: np.ndarray | None = None
        self._triu: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def dist_sigma(self) -> tuple[np.ndarray, np.ndarray | None]:
        """Base distances and path counts; counts are None when they exceed
        the float64-exact range (betweenness then takes the big-int route)."""
        if self._dist is None:
            try:
                self._dist, self._sigma = _apsp_layers(self.adj)
            except _SigmaOverflow:
                dist = [bfs_counts(self.g._adj, u)[0] for u in range(self.g.n)]
                self._dist = np.asarray(dist, dtype=np.int16)
                self._sigma = None
        return self._dist, self._sigma

    def transition(self) -> np.ndarray:
        if self._p is None:
            self._p = transition_matrix(self.g)
        return self._p

    def triu(self, c: int) -> tuple[np.ndarray, np.ndarray]:
        if c not in self._triu:
            self._triu[c] = np.triu_indices(c, 1)
        return self._triu[c]


@lru_cache(maxsize=8)
def _kernels_for(g: Graph) -> _GraphKernels:
    return _GraphKernels(g)


def _complements_of(n: int, subsets: np.ndarray) -> np.ndarray:
    """Row-wise sorted complements, shape (N, n - k)."""
    big = subsets.shape[0]
    mask = np.ones((big, n), dtype=bool)
    mask[np.arange(big)[:, None], subsets] = False
    return np.nonzero(mask)[1].reshape(big, n - subsets.shape[1])


def _score_block_degree(k: _GraphKernels, subsets: np.ndarray, comp: np.ndarray) -> list:
    c = comp.shape[1]
    touched = k.adj_bool[comp[:, :, None], subsets[:, None, :]].any(axis=2)
    return [Fraction(int(x), c) for x in touched.sum(axis=1)]


def _score_block_closeness(k: _GraphKernels, subsets: np.ndarray, comp: np.ndarray) -> list:
    c = comp.shape[1]
    dist, _ = k.dist_sigma()
    d = dist[subsets[:, :, None], comp[:, None, :]].min(axis=1)
    return [Fraction(int(x), c) for x in d.sum(axis=1, dtype=np.int64)]


def _score_block_betweenness(k: _GraphKernels, subsets: np.ndarray, comp: np.ndarray) -> list:
    big, c = comp.shape
    if c < 2:
        # A single outside vertex leaves no outside pairs: every geodesic
        # between them is vacuously mediated, which is also what the
        # vertex-cover characterization needs (V minus one vertex always
        # covers every edge).
        return [1.0] * big
    dist, sigma = k.dist_sigma()
    if sigma is None:
        # Base-graph counts exceed the float64-exact range; use big integers.
        return [_measures.group_betweenness(k.g, tuple(s)).value for s in subsets]
    a = k.adj[comp[:, :, None], comp[:, None, :]]
    try:
        d_sub, s_sub = _apsp_layers_batch(a)
    except _SigmaOverflow:
        return [_measures.group_betweenness(k.g, tuple(s)).value for s in subsets]
    iu, iv = k.triu(c)
    rows, cols = comp[:, iu], comp[:, iv]
    avoid = np.where(
        d_sub[:, iu, iv] == dist[rows, cols], s_sub[:, iu, iv] / sigma[rows, cols], 0.0
    )
    pairs = iu.size
    # math.fsum: correctly rounded, so the score cannot depend on how
    # subsets were grouped into evaluation blocks (numpy reductions pick
    # shape-dependent summation orders).
    return [2.0 * (pairs - math.fsum(row)) / (c * (c - 1)) for row in avoid]


def _score_block_randomwalk(k: _GraphKernels, subsets: np.ndarray, comp: np.ndarray) -> list:
    big, c = comp.shape
    p = k.transition()
    a = -p[comp[:, :, None], comp[:, None, :]]
    idx = np.arange(c)
    a[:, idx, idx] += 1.0
    h = np.linalg.solve(a, np.ones((big, c, 1)))[:, :, 0]
    return [math.fsum(row) / c for row in h]


def _apsp_layers_batch(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Layered distance/count recursion over a stack of adjacency matrices.

    Each (c, c) slice runs the exact same recursion as
    :func:`_apsp_layers`, so a subset's numbers do not depend on which
    block it was evaluated in.
    """
    big, c, _ = a.shape
    dist = np.full((big, c, c), -1, dtype=np.int16)
    idx = np.arange(c)
    dist[:, idx, idx] = 0
    sigma = np.zeros((big, c, c))
    sigma[:, idx, idx] = 1.0
    frontier = sigma.copy()
    guard = 2.0**53 / (2 * max(c, 2))
    t = 0
    while True:
        t += 1
        if frontier.max() > guard:
            raise _SigmaOverflow
        nxt = frontier @ a
        newly = (dist < 0) & (nxt > 0)
        if not newly.any():
            break
        dist[newly] = t
        sigma[newly] = nxt[newly]
        nxt *= newly
        frontier = nxt
    return dist, sigma


_BLOCK_SCORERS = {
    Measure.DEGREE: _score_block_degree,
    Measure.CLOSENESS: _score_block_closeness,
    Measure.BETWEENNESS: _score_block_betweenness,
    Measure.RANDOMWALK: _score_block_randomwalk,
}

_BLOCK = 512


def _score_block(g: Graph, subsets: Sequence[tuple[int, ...]], measure: Measure) -> list:
    kernels = _kernels_for(g)
    arr = np.asarray(subsets, dtype=np.intp)
    return _BLOCK_SCORERS[measure](kernels, arr, _complements_of(g.n, arr))


def score_subset(g: Graph, subset: tuple[int, ...], measure: Measure):
    """Raw comparable score (Fraction or float) used by the enumerator."""
    return _score_block(g, [tuple(subset)], measure)[0]


# ---------------------------------------------------------------------------
# Partitioned enumeration


@dataclass
class _PartialResult:
    """Windowed optimum over one slice of the subset space."""

    best: object | None
    candidates: list[tuple[object, tuple[int, ...]]]
    evaluated: int


def _iter_partition_subsets(k: int, leading: Sequence[int]) -> Iterator[tuple[int, ...]]:
    for b in leading:
        for rest in colex_subsets(b, k - 1):
            yield rest + (b,)


def _scan_partitions(
    g: Graph, k: int, measure: Measure, leading: Sequence[int]
) -> _PartialResult:
    maximize = measure.maximize
    exact = measure.exact
    best = None
    candidates: list[tuple[object, tuple[int, ...]]] = []
    evaluated = 0

    def absorb(block: list[tuple[int, ...]]) -> None:
        nonlocal best, candidates, evaluated
        values = _score_block(g, block, measure)
        evaluated += len(block)
        for value, subset in zip(values, block):
            if best is None:
                best = value
                candidates = [(value, subset)]
                continue
            improved = value > best if maximize else value < best
            if exact:
                if improved:
                    best = value
                    candidates = [(value, subset)]
                elif value == best:
                    candidates.append((value, subset))
            else:
                if improved:
                    best = value
                    candidates = [
                        (v, s) for v, s in candidates if _within_keep_window(v, best)
                    ]
                    candidates.append((value, subset))
                elif _within_keep_window(value, best):
                    candidates.append((value, subset))

    block: list[tuple[int, ...]] = []
    for subset in _iter_partition_subsets(k, leading):
        block.append(subset)
        if len(block) == _BLOCK:
            absorb(block)
            block = []
    if block:
        absorb(block)
    return _PartialResult(best=best, candidates=candidates, evaluated=evaluated)


def _merge_partials(
    partials: Iterable[_PartialResult], measure: Measure
) -> _PartialResult:
    maximize = measure.maximize
    best = None
    merged: list[tuple[object, tuple[int, ...]]] = []
    evaluated = 0
    for part in partials:
        evaluated += part.evaluated
        if part.best is None:
            continue
        if best is None or (part.best > best if maximize else part.best < best):
            best = part.best
        merged.extend(part.candidates)
    if best is not None and not measure.exact:
        merged = [(v, s) for v, s in merged if _within_keep_window(v, best)]
    return _PartialResult(best=best, candidates=merged, evaluated=evaluated)


def _scan_task(args) -> _PartialResult:
    g, k, measure, leading, tie_rel = args
    global FLOAT_TIE_REL
    FLOAT_TIE_REL = tie_rel  # propagate a CLI override into spawned workers
    return _scan_partitions(g, k, measure, leading)


@dataclass(frozen=True)
class OptimumResult:
    """Optimal value and the complete, lexicographically sorted tie list."""

    measure: Measure
    k: int
    best: Score
    optimal_sets: tuple[VertexSet, ...]
    evaluated: int
    wall_time: float

    @property
    def extra_count(self) -> int:
        return max(0, len(self.optimal_sets) - 2)

    def to_json_dict(self, include_timing: bool = False) -> dict:
        out: dict = {
            "measure": self.measure.value,
            "k": self.k,
            "best": {"value": self.best.value},
            "optimal_sets": [list(s.members) for s in self.optimal_sets],
            "evaluated": self.evaluated,
        }
        if self.best.exact is not None:
            out["best"]["exact"] = f"{self.best.exact_num}/{self.best.exact_den}"
        if include_timing:
            out["wall_time_s"] = round(self.wall_time, 6)
        return out


@dataclass(frozen=True)
class DecisionResult:
    """Witness for ``score == alpha`` at size k, if any exists."""

    measure: Measure
    k: int
    alpha: float
    witness: VertexSet | None

    def to_json_dict(self) -> dict:
        return {
            "measure": self.measure.value,
            "k": self.k,
            "alpha": self.alpha,
            "witness": list(self.witness.members) if self.witness is not None else None,
        }


def _check_enumeration_args(g: Graph, k: int, budget: int) -> int:
    if not 1 <= k < g.n:
        raise InputError(f"k must satisfy 1 <= k < n; got k={k}, n={g.n}")
    total = math.comb(g.n, k)
    if total > budget:
        raise BudgetExceededError(
            f"C({g.n}, {k}) = {total} subsets exceeds budget {budget}", subsets=total
        )
    return total


def _leading_chunks(n: int, k: int, workers: int) -> list[list[int]]:
    """Split leading elements into contiguous chunks of similar subset mass."""
    leading = list(range(k - 1, n))
    if workers <= 1 or len(leading) == 1:
        return [leading]
    sizes = [math.comb(b, k - 1) for b in leading]
    total = sum(sizes)
    target = total / min(workers, len(leading))
    chunks: list[list[int]] = []
    cur: list[int] = []
    acc = 0
    for b, sz in zip(leading, sizes):
        cur.append(b)
        acc += sz
        if acc >= target and len(chunks) < workers - 1:
            chunks.append(cur)
            cur = []
            acc = 0
    if cur:
        chunks.append(cur)
    return chunks


def optimumset(
    g: Graph,
    k: int,
    measure: Measure,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    pool: ProcessPoolExecutor | None = None,
) -> OptimumResult:
    """Enumerate every size-k subset and return the optimum with all ties.

    Parameters
    ----------
    budget : int
        Refuse to run when C(n, k) exceeds this subset count.
    workers : int
        Partition the search across this many processes.  Results are
        byte-identical for any value.
    pool : ProcessPoolExecutor, optional
        Reuse an existing pool (its size then caps effective parallelism).
    """
    if not is_connected(g):
        raise InputError("optimumset requires a connected graph")
    total = _check_enumeration_args(g, k, budget)
    start = time.perf_counter()
    chunks = _leading_chunks(g.n, k, workers)
    if (workers <= 1 and pool is None) or len(chunks) == 1:
        partials = [_scan_partitions(g, k, measure, chunk) for chunk in chunks]
    else:
        tasks = [(g, k, measure, chunk, FLOAT_TIE_REL) for chunk in chunks]
        if pool is not None:
            partials = list(pool.map(_scan_task, tasks))
        else:
            with ProcessPoolExecutor(max_workers=workers) as own:
                partials = list(own.map(_scan_task, tasks))
    merged = _merge_partials(partials, measure)
    assert merged.evaluated == total
    best = merged.best
    ties = sorted(s for v, s in merged.candidates if _is_tie(v, best))
    score = Score.from_fraction(best) if isinstance(best, Fraction) else Score(value=float(best))
    return OptimumResult(
        measure=measure,
        k=k,
        best=score,
        optimal_sets=tuple(VertexSet(s) for s in ties),
        evaluated=merged.evaluated,
        wall_time=time.perf_counter() - start,
    )


def optimumset_decision(
    g: Graph,
    k: int,
    measure: Measure,
    alpha: float,
    budget: int = DEFAULT_BUDGET,
) -> DecisionResult:
    """First subset (in colexicographic order) scoring exactly ``alpha``.

    Exact measures match ``alpha`` as a rational; floating-point measures
    match within the tie tolerance.
    """
    if not is_connected(g):
        raise InputError("optimumset_decision requires a connected graph")
    _check_enumeration_args(g, k, budget)
    target = Fraction(alpha).limit_denominator(10**12) if measure.exact else float(alpha)
    block: list[tuple[int, ...]] = []

    def first_match(block: list[tuple[int, ...]]) -> tuple[int, ...] | None:
        for value, subset in zip(_score_block(g, block, measure), block):
            if _is_tie(value, target):
                return subset
        return None

    for subset in colex_subsets(g.n, k):
        block.append(subset)
        if len(block) == _BLOCK:
            hit = first_match(block)
            if hit is not None:
                return DecisionResult(measure=measure, k=k, alpha=alpha, witness=VertexSet(hit))
            block = []
    if block:
        hit = first_match(block)
        if hit is not None:
            return DecisionResult(measure=measure, k=k, alpha=alpha, witness=VertexSet(hit))
    return DecisionResult(measure=measure, k=k, alpha=alpha, witness=None)


MEASURE_ORDER = (Measure.DEGREE, Measure.CLOSENESS, Measure.BETWEENNESS, Measure.RANDOMWALK)


@dataclass(frozen=True)
class CrossMeasureReport:
    """Optima for every (k, measure) cell plus pairwise optima overlap."""

    k_max: int
    measures: tuple[Measure, ...]
    cells: dict[tuple[int, Measure], OptimumResult]
    jaccard: dict[tuple[int, Measure, Measure], float]
    wall_time: float

    def to_json_dict(self, include_timing: bool = False) -> dict:
        out: dict = {"k_max": self.k_max, "rows": [], "jaccard": []}
        for k in range(1, self.k_max + 1):
            for m in self.measures:
                out["rows"].append(self.cells[(k, m)].to_json_dict())
        for (k, ma, mb), j in sorted(
            self.jaccard.items(), key=lambda kv: (kv[0][0], kv[0][1].value, kv[0][2].value)
        ):
            out["jaccard"].append({"k": k, "a": ma.value, "b": mb.value, "overlap": round(j, 9)})
        if include_timing:
            out["wall_time_s"] = round(self.wall_time, 6)
        return out


def _optima_union(result: OptimumResult) -> frozenset[int]:
    members: set[int] = set()
    for s in result.optimal_sets:
        members.update(s.members)
    return frozenset(members)


def cross_measure_report(
    g: Graph,
    k_max: int,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    pool: ProcessPoolExecutor | None = None,
    measures: Sequence[Measure] = MEASURE_ORDER,
) -> CrossMeasureReport:
    """Optimal sets per size and measure, in the layout of the result tables.

    For every k in 1..k_max and every requested measure, runs
    :func:`optimumset`; also reports, per k, the Jaccard overlap between
    the unions of optimal-set members of every measure pair.
    """
    if not 1 <= k_max < g.n:
        raise InputError(f"k_max must satisfy 1 <= k_max < n; got {k_max}, n={g.n}")
    worst_k = max(range(1, k_max + 1), key=lambda k: math.comb(g.n, k))
    worst = math.comb(g.n, worst_k)
    if worst > budget:
        raise BudgetExceededError(
            f"C({g.n}, {worst_k}) = {worst} subsets exceeds budget {budget}", subsets=worst
        )
    measures = tuple(measures)
    start = time.perf_counter()
    cells: dict[tuple[int, Measure], OptimumResult] = {}
    with ExitStack() as stack:
        if workers > 1 and pool is None:
            pool = stack.enter_context(ProcessPoolExecutor(max_workers=workers))
        for k in range(1, k_max + 1):
            for m in measures:
                cells[(k, m)] = optimumset(g, k, m, budget=budget, workers=workers, pool=pool)
    jaccard: dict[tuple[int, Measure, Measure], float] = {}
    for k in range(1, k_max + 1):
        unions = {m: _optima_union(cells[(k, m)]) for m in measures}
        for i, ma in enumerate(measures):
            for mb in measures[i + 1 :]:
                union = unions[ma] | unions[mb]
                inter = unions[ma] & unions[mb]
                jaccard[(k, ma, mb)] = len(inter) / len(union) if union else 1.0
    return CrossMeasureReport(
        k_max=k_max,
        measures=measures,
        cells=cells,
        jaccard=jaccard,
        wall_time=time.perf_counter() - start,
    )
