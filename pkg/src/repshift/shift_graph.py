"""The directed multigraph whose bi-infinite edge paths are the representations of K.

Vertices are tuples of images of the U-generators; each edge is a
homomorphism B -> Sigma (an assignment of the B-generators passing every
relator), running from its restriction to U to its restriction to V pulled
back along phi.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .groups import DENSE_TABLE_LIMIT, FiniteGroup
from .hnn import HnnSystem
from .words import evaluate, evaluate_many

DEFAULT_EDGE_CAP = 10_000_000


class EdgeCapExceeded(RuntimeError):
    def __init__(self, required: int, cap: int):
        super().__init__(f"{required} assignments exceed the edge cap of {cap}")
        self.required = required
        self.cap = cap


def default_edge_cap() -> int:
    return int(os.environ.get("REPSHIFT_EDGE_CAP", DEFAULT_EDGE_CAP))


@dataclass(frozen=True, eq=False)
class ShiftGraph:
    group: FiniteGroup
    system: HnnSystem
    vertices: np.ndarray  # (V, m) element handles
    labels: np.ndarray  # (E, base_rank) element handles
    src: np.ndarray  # (E,) vertex indices
    dst: np.ndarray
    pruned: bool = False

    @classmethod
    def from_edges(cls, num_vertices: int, edges) -> "ShiftGraph":
        """A bare graph with unlabeled vertices, for analysing hand-made adjacency data."""
        edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        return cls(None, None, np.zeros((num_vertices, 0), dtype=np.int32),
                   np.zeros((len(edges), 0), dtype=np.int32), edges[:, 0], edges[:, 1])

    @classmethod
    def from_adjacency(cls, matrix) -> "ShiftGraph":
        a = np.asarray(matrix, dtype=np.int64)
        edges = [(i, j) for i in range(len(a)) for j in range(len(a)) for _ in range(a[i, j])]
        return cls.from_edges(len(a), edges)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.src)

    def adjacency(self) -> sparse.csr_matrix:
        """A[i, j] = number of edges i -> j."""
        n = self.num_vertices
        return sparse.coo_matrix(
            (np.ones(self.num_edges, dtype=np.int64), (self.src, self.dst)), shape=(n, n)
        ).tocsr()

    def out_degrees(self) -> np.ndarray:
        return np.bincount(self.src, minlength=self.num_vertices)

    def in_degrees(self) -> np.ndarray:
        return np.bincount(self.dst, minlength=self.num_vertices)

    def vertex(self, i: int) -> tuple[int, ...]:
        return tuple(int(g) for g in self.vertices[i])

    def label(self, e: int) -> tuple[int, ...]:
        return tuple(int(g) for g in self.labels[e])

    @cached_property
    def edge_index(self) -> dict[tuple[int, ...], int]:
        """Map from assignment tuple to edge index (labels are distinct)."""
        return {self.label(e): e for e in range(self.num_edges)}

    @cached_property
    def vertex_index(self) -> dict[tuple[int, ...], int]:
        return {self.vertex(i): i for i in range(self.num_vertices)}


def _assignment_columns(order: int, rank: int, count: int) -> list[np.ndarray]:
    idx = np.arange(count, dtype=np.int64)
    return [((idx // order ** (rank - 1 - i)) % order).astype(np.int32) for i in range(rank)]


def _evaluate_dense(sys: HnnSystem, G: FiniteGroup, count: int):
    cols = _assignment_columns(G.order, sys.base_rank, count)
    keep = np.ones(count, dtype=bool)
    for rel in sys.relators:
        keep &= evaluate_many(rel, cols, G) == G.identity
    cols = [c[keep] for c in cols]
    n = int(keep.sum())
    labels = np.stack(cols, axis=1) if cols else np.zeros((n, 0), dtype=np.int32)
    src = [evaluate_many(w, cols, G) for w in sys.u_words]
    dst = [evaluate_many(w, cols, G) for w in sys.v_words]
    as_rows = lambda vals: np.stack(vals, axis=1) if vals else np.zeros((n, 0), dtype=np.int32)
    return labels, as_rows(src), as_rows(dst)


def _evaluate_loop(sys: HnnSystem, G: FiniteGroup):
    labels, src, dst = [], [], []
    for assign in itertools.product(G.elements, repeat=sys.base_rank):
        if any(evaluate(r, assign, G) != G.identity for r in sys.relators):
            continue
        labels.append(assign)
        src.append([evaluate(w, assign, G) for w in sys.u_words])
        dst.append([evaluate(w, assign, G) for w in sys.v_words])
    shape = lambda rows, width: np.array(rows, dtype=np.int32).reshape(len(rows), width)
    return shape(labels, sys.base_rank), shape(src, sys.m), shape(dst, sys.m)


def build_graph(sys: HnnSystem, G: FiniteGroup, edge_cap: int | None = None,
                dense: bool | None = None) -> ShiftGraph:
    """Unpruned graph with one edge per homomorphism B -> G, in lexicographic assignment order."""
    cap = default_edge_cap() if edge_cap is None else edge_cap
    count = G.order ** sys.base_rank
    if count > cap:
        raise EdgeCapExceeded(count, cap)
    if dense is None:
        dense = G.order <= DENSE_TABLE_LIMIT
    if dense:
        labels, u_img, v_img = _evaluate_dense(sys, G, count)
    else:
        labels, u_img, v_img = _evaluate_loop(sys, G)

    n = len(labels)
    if sys.m == 0:
        vertices = np.zeros((1 if n else 0, 0), dtype=np.int32)
        src = dst = np.zeros(n, dtype=np.int64)
    else:
        # vertices are sorted lexicographically; only realized endpoints appear
        vertices, inverse = np.unique(np.concatenate([u_img, v_img]), axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        src, dst = inverse[:n].astype(np.int64), inverse[n:].astype(np.int64)
    return ShiftGraph(G, sys, vertices.astype(np.int32), labels.astype(np.int32), src, dst)


def subgraph(graph: ShiftGraph, keep_vertices: np.ndarray, pruned: bool) -> ShiftGraph:
    keep_vertices = np.asarray(keep_vertices, dtype=bool)
    keep_edges = keep_vertices[graph.src] & keep_vertices[graph.dst]
    remap = np.cumsum(keep_vertices) - 1
    return ShiftGraph(
        graph.group,
        graph.system,
        graph.vertices[keep_vertices],
        graph.labels[keep_edges],
        remap[graph.src[keep_edges]],
        remap[graph.dst[keep_edges]],
        pruned=pruned,
    )


def prune(graph: ShiftGraph) -> ShiftGraph:
    """Drop sources and sinks repeatedly; what survives is the bi-infinite-path core."""
    n = graph.num_vertices
    indeg = graph.in_degrees().astype(np.int64)
    outdeg = graph.out_degrees().astype(np.int64)
    out_edges = [[] for _ in range(n)]
    in_edges = [[] for _ in range(n)]
    for e, (s, d) in enumerate(zip(graph.src.tolist(), graph.dst.tolist())):
        out_edges[s].append(e)
        in_edges[d].append(e)

    alive = np.ones(n, dtype=bool)
    edge_alive = np.ones(graph.num_edges, dtype=bool)
    work = [v for v in range(n) if indeg[v] == 0 or outdeg[v] == 0]
    src, dst = graph.src, graph.dst
    while work:
        v = work.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for e in out_edges[v]:
            if edge_alive[e]:
                edge_alive[e] = False
                w = dst[e]
                indeg[w] -= 1
                if alive[w] and indeg[w] == 0:
                    work.append(w)
        for e in in_edges[v]:
            if edge_alive[e]:
                edge_alive[e] = False
                w = src[e]
                outdeg[w] -= 1
                if alive[w] and outdeg[w] == 0:
                    work.append(w)
    return subgraph(graph, alive, pruned=True)


@dataclass(frozen=True)
class SCC:
    vertices: tuple[int, ...]
    num_edges: int  # edges with both ends inside the component
    is_simple_cycle: bool

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def has_cycle(self) -> bool:
        return self.num_edges > 0


def scc_decomposition(graph: ShiftGraph) -> list[SCC]:
    """Strongly connected components, ordered by their least vertex index."""
    n = graph.num_vertices
    if n == 0:
        return []
    _, comp = connected_components(graph.adjacency(), directed=True, connection="strong")
    internal = comp[graph.src] == comp[graph.dst]
    edges_in = np.bincount(comp[graph.src[internal]], minlength=comp.max() + 1)
    internal_out = np.bincount(graph.src[internal], minlength=n)

    members: dict[int, list[int]] = {}
    for v, c in enumerate(comp.tolist()):
        members.setdefault(c, []).append(v)
    result = []
    for c, verts in sorted(members.items(), key=lambda kv: kv[1][0]):
        k = int(edges_in[c])
        simple = k == len(verts) and all(internal_out[v] == 1 for v in verts)
        result.append(SCC(tuple(verts), k, simple))
    return result


def format_vertex(graph: ShiftGraph, i: int) -> str:
    return "[" + ", ".join(graph.group.format_element(int(g)) for g in graph.vertices[i]) + "]"


def format_label(graph: ShiftGraph, e: int) -> str:
    return " ".join(f"{chr(97 + k)}={graph.group.format_element(int(g))}"
                    for k, g in enumerate(graph.labels[e]))


def to_dot(graph: ShiftGraph) -> str:
    lines = ["digraph shift {"]
    for i in range(graph.num_vertices):
        lines.append(f'  v{i} [label="{format_vertex(graph, i)}"];')
    for e in range(graph.num_edges):
        lines.append(f'  v{graph.src[e]} -> v{graph.dst[e]} [label="{format_label(graph, e)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(graph: ShiftGraph, path: str | Path) -> None:
    Path(path).write_text(to_dot(graph))


def to_csv(graph: ShiftGraph) -> str:
    dense = graph.adjacency().toarray()
    return "".join(",".join(str(int(c)) for c in row) + "\n" for row in dense)


def export_csv(graph: ShiftGraph, path: str | Path) -> None:
    Path(path).write_text(to_csv(graph))
