"""Entropy, periodic-point counts and countability of a pruned shift graph."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .groups import SymmetricGroup
from .shift_graph import SCC, ShiftGraph, prune, scc_decomposition

DEFAULT_TOL = 1e-10
DEFAULT_MAX_R = 12
MAX_POWER_ITERATIONS = 1_000_000
PATH_LIMIT = 1_000_000


class Verdict(str, enum.Enum):
    FINITE = "FiniteShift"
    # a pruned graph with acyclic links between cycles has countably many points
    COUNTABLE = "CountableShift"
    UNCOUNTABLE = "UncountableShift"

    def __str__(self):
        return self.value


class ConvergenceError(RuntimeError):
    pass


class PathExplosion(RuntimeError):
    pass


def _require_pruned(graph: ShiftGraph) -> ShiftGraph:
    return graph if graph.pruned else prune(graph)


def _scc_matrix(graph: ShiftGraph, scc: SCC) -> sparse.csr_matrix:
    idx = np.array(scc.vertices)
    return graph.adjacency()[idx][:, idx]


def perron_root(matrix, tol: float = DEFAULT_TOL) -> float:
    """Spectral radius of an irreducible nonnegative matrix.

    Power iteration on ``M + I``, which is primitive, so the iterates converge
    even when ``M`` is periodic.  Stops once the Collatz-Wielandt bounds
    ``min (Bx)_i/x_i <= rho(B) <= max (Bx)_i/x_i`` are within ``tol``.
    """
    m = sparse.csr_matrix(matrix, dtype=float)
    n = m.shape[0]
    shifted = m + sparse.identity(n, format="csr")
    x = np.full(n, 1.0 / n)
    for _ in range(MAX_POWER_ITERATIONS):
        y = shifted @ x
        ratios = y / x
        lo, hi = ratios.min(), ratios.max()
        if hi - lo < tol:
            return 0.5 * (lo + hi) - 1.0
        x = y / y.sum()
    raise ConvergenceError(f"power iteration did not converge on a {n}x{n} component")


@dataclass(frozen=True)
class SCCSummary:
    size: int
    edges: int
    is_simple_cycle: bool
    spectral_radius: float


def scc_spectral_radius(graph: ShiftGraph, scc: SCC, tol: float = DEFAULT_TOL) -> float:
    if not scc.has_cycle:
        return 0.0
    if scc.is_simple_cycle:
        return 1.0
    return perron_root(_scc_matrix(graph, scc), tol)


def entropy(graph: ShiftGraph, tol: float = DEFAULT_TOL) -> float:
    """Natural log of the Perron root of the adjacency matrix; 0 for an empty shift."""
    graph = _require_pruned(graph)
    radius = max((scc_spectral_radius(graph, c, tol) for c in scc_decomposition(graph)), default=0.0)
    return math.log(radius) if radius > 1.0 else 0.0


def _matrix_traces(m: sparse.csr_matrix, max_r: int) -> list[int]:
    """Exact trace(M^r) for r = 1..max_r."""
    n = m.shape[0]
    dense = m.toarray()
    row_max = int(dense.sum(axis=1).max())
    # row sums of M^r are at most row_max^r; stay inside int64 when that bound allows
    if n * row_max ** max_r < 2 ** 62:
        work = dense.astype(np.int64)
    else:
        work = dense.astype(object)
    power = work.copy()
    traces = [int(np.trace(power))]
    for _ in range(max_r - 1):
        power = power @ work
        traces.append(int(np.trace(power)))
    return traces


def fix_counts(graph: ShiftGraph, max_r: int = DEFAULT_MAX_R) -> list[int]:
    """``[trace(A^r) for r in 1..max_r]``: the number of points of period dividing r."""
    if max_r < 1:
        raise ValueError("max_r must be at least 1")
    graph = _require_pruned(graph)
    totals = [0] * max_r
    for scc in scc_decomposition(graph):
        if not scc.has_cycle:
            continue
        if scc.is_simple_cycle:
            length = scc.size
            for r in range(length, max_r + 1, length):
                totals[r - 1] += length
            continue
        for k, tr in enumerate(_matrix_traces(_scc_matrix(graph, scc), max_r)):
            totals[k] += tr
    return totals


def countability_verdict(graph: ShiftGraph) -> Verdict:
    graph = _require_pruned(graph)
    sccs = scc_decomposition(graph)
    if any(c.has_cycle and not c.is_simple_cycle for c in sccs):
        return Verdict.UNCOUNTABLE
    if all(c.is_simple_cycle for c in sccs):
        return Verdict.FINITE
    return Verdict.COUNTABLE


def growth_rate_estimate(counts: list[int]) -> float:
    """``log(counts[-1]) / R``, taken as 0 when the last count is 0 or 1."""
    last = counts[-1]
    return math.log(last) / len(counts) if last > 1 else 0.0


def closed_paths(graph: ShiftGraph, r: int, limit: int = PATH_LIMIT):
    """Yield every closed edge path of length r as a tuple of edge indices.

    A path is anchored at the source of its first edge, so rotations of one
    cycle are distinct paths, matching trace(A^r).
    """
    graph = _require_pruned(graph)
    comp = np.full(graph.num_vertices, -1)
    for k, scc in enumerate(scc_decomposition(graph)):
        comp[list(scc.vertices)] = k
    out: list[list[int]] = [[] for _ in range(graph.num_vertices)]
    for e in range(graph.num_edges):
        s, d = int(graph.src[e]), int(graph.dst[e])
        if comp[s] == comp[d]:
            out[s].append(e)

    emitted = 0
    dst = graph.dst.tolist()
    for start in range(graph.num_vertices):
        stack = [(start, [])]
        while stack:
            v, path = stack.pop()
            if len(path) == r:
                if v == start:
                    emitted += 1
                    if emitted > limit:
                        raise PathExplosion(f"more than {limit} closed paths of length {r}")
                    yield tuple(path)
                continue
            for e in reversed(out[v]):
                stack.append((dst[e], path + [e]))


@dataclass(frozen=True)
class TransitiveStats:
    total: int
    transitive: int
    subgroups: int


def is_transitive(G: SymmetricGroup, gens) -> bool:
    orbit, frontier = {0}, [0]
    perms = [G.perm(g) for g in set(gens)]
    while frontier:
        i = frontier.pop()
        for p in perms:
            j = p[i]
            if j not in orbit:
                orbit.add(j)
                frontier.append(j)
    return len(orbit) == G.degree


def transitive_stats(graph: ShiftGraph, r: int, limit: int = PATH_LIMIT) -> TransitiveStats:
    """Count period-r representations whose image acts transitively on the N symbols.

    The image of the representation attached to a closed path is generated by
    all edge labels along it.  Each index-N subgroup of the period-r quotient
    has exactly (N-1)! transitive representations over it.
    """
    G = graph.group
    if not isinstance(G, SymmetricGroup):
        raise TypeError("transitive_stats needs a symmetric group")
    total = transitive = 0
    for path in closed_paths(graph, r, limit):
        total += 1
        gens = graph.labels[list(path)].ravel().tolist()
        if is_transitive(G, gens):
            transitive += 1
    per_subgroup = math.factorial(G.degree - 1)
    if transitive % per_subgroup:
        raise ArithmeticError(f"{transitive} transitive representations is not a multiple of {per_subgroup}")
    return TransitiveStats(total, transitive, transitive // per_subgroup)


@dataclass(frozen=True)
class DynamicsReport:
    entropy: float
    fix_counts: list[int]
    verdict: Verdict
    scc_summary: list[SCCSummary] = field(repr=False)
    growth_rate: float
    empty: bool
    vertices: int
    edges: int

    @property
    def points(self) -> int | None:
        """Number of points of a finite shift (vertices on disjoint cycles)."""
        return self.vertices if self.verdict is Verdict.FINITE else None


def analyze(graph: ShiftGraph, max_r: int = DEFAULT_MAX_R, tol: float = DEFAULT_TOL) -> DynamicsReport:
    graph = _require_pruned(graph)
    sccs = scc_decomposition(graph)
    summary = [SCCSummary(c.size, c.num_edges, c.is_simple_cycle, scc_spectral_radius(graph, c, tol))
               for c in sccs]
    radius = max((s.spectral_radius for s in summary), default=0.0)
    counts = fix_counts(graph, max_r)
    return DynamicsReport(
        entropy=math.log(radius) if radius > 1.0 else 0.0,
        fix_counts=counts,
        verdict=countability_verdict(graph),
        scc_summary=summary,
        growth_rate=growth_rate_estimate(counts),
        empty=graph.num_vertices == 0,
        vertices=graph.num_vertices,
        edges=graph.num_edges,
    )


def format_report(report: DynamicsReport) -> str:
    lines = [
        f"vertices {report.vertices}, edges {report.edges}",
        f"entropy {report.entropy:.12f}" + ("  (empty shift)" if report.empty else ""),
        f"verdict {report.verdict}",
        f"growth estimate {report.growth_rate:.12f}  (log fix_R / R, R={len(report.fix_counts)})",
        "",
        f"{'r':>4}  {'|Fix(sigma^r)|':>20}",
    ]
    lines += [f"{r:>4}  {c:>20}" for r, c in enumerate(report.fix_counts, start=1)]
    nonsimple = [s for s in report.scc_summary if s.edges and not s.is_simple_cycle]
    cycles = sum(1 for s in report.scc_summary if s.is_simple_cycle)
    lines.append("")
    lines.append(f"components: {len(report.scc_summary)} ({cycles} simple cycles)")
    for s in nonsimple:
        lines.append(f"  size {s.size}, edges {s.edges}, spectral radius {s.spectral_radius:.12f}")
    return "\n".join(lines) + "\n"


def format_machine(report: DynamicsReport) -> str:
    lines = [f"entropy={report.entropy!r}", f"verdict={report.verdict}",
             f"growth_rate={report.growth_rate!r}"]
    lines += [f"fix_r_{r}={c}" for r, c in enumerate(report.fix_counts, start=1)]
    return "\n".join(lines) + "\n"
