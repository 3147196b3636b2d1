"""Search symmetric groups for positive-entropy representation shifts.

A positive entropy at any S_N certifies that the commutator subgroup is not
finitely generated, hence the knot is not fibered.  Failing to find one says
nothing about fiberedness.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dynamics import DEFAULT_TOL, entropy
from .groups import FiniteGroup, Subgroup, SymmetricGroup, coset_index, subgroup_closure
from .hnn import HnnSystem
from .shift_graph import EdgeCapExceeded, ShiftGraph, build_graph, prune
from .words import evaluate

PROBE_MIN_N = 2
PROBE_MAX_N = 6


class NoSeparation(ValueError):
    """rho(U) is all of rho(K), so there are no cosets to permute."""


class EnumerationLimit(RuntimeError):
    pass


@dataclass(frozen=True)
class Witness:
    group: str
    entropy: float


@dataclass(frozen=True)
class ProbeVerdict:
    knot: str
    witnesses: list[Witness]  # one entry per degree scanned, in order
    skipped: list[tuple[str, int]] = field(default_factory=list)  # (group, required edges)
    certified_by: Optional[Witness] = None
    n_max: int = 0

    @property
    def certified(self) -> bool:
        return self.certified_by is not None

    @property
    def conclusion(self) -> str:
        if self.certified_by:
            return "CertifiedNonfibered"
        return "NoWitnessFound"


def probe_knot(sys: HnnSystem, n_max: int = 5, edge_cap: Optional[int] = None,
               tol: float = DEFAULT_TOL, progress=None) -> ProbeVerdict:
    """Scan S_2..S_{n_max} in order and stop at the first positive entropy."""
    if not PROBE_MIN_N <= n_max <= PROBE_MAX_N:
        raise ValueError(f"n_max must be between {PROBE_MIN_N} and {PROBE_MAX_N}")
    witnesses, skipped = [], []
    for n in range(PROBE_MIN_N, n_max + 1):
        G = SymmetricGroup(n)
        try:
            graph = prune(build_graph(sys, G, edge_cap))
        except EdgeCapExceeded as exc:
            skipped.append((G.name, exc.required))
            if progress:
                progress(G.name, None)
            continue
        h = entropy(graph, tol)
        w = Witness(G.name, h)
        witnesses.append(w)
        if progress:
            progress(G.name, h)
        if h > 0:
            return ProbeVerdict(sys.name, witnesses, skipped, w, n_max)
    return ProbeVerdict(sys.name, witnesses, skipped, None, n_max)


@dataclass(frozen=True)
class GRep:
    """A homomorphism G -> Sigma: the image of the stable letter plus images of B's generators."""

    x_image: int
    base_images: tuple[int, ...]
    rho_u: Subgroup
    rho_k: Subgroup

    @property
    def separated(self) -> bool:
        return self.rho_u.order < self.rho_k.order


def conjugate_images(G: FiniteGroup, x: int, images, steps: int) -> list[list[int]]:
    """``[[x^-j b x^j for b in images] for j in range(steps)]``."""
    rows, cur = [], list(images)
    for _ in range(steps):
        rows.append(cur)
        cur = [G.conjugate(b, x) for b in cur]
    return rows


def image_of_k(G: FiniteGroup, x: int, base_images) -> Subgroup:
    gens = [g for row in conjugate_images(G, x, base_images, G.element_order(x)) for g in row]
    return subgroup_closure(gens, G)


def find_g_reps(sys: HnnSystem, G: FiniteGroup, limit: int = 1_000_000) -> list[GRep]:
    """Every homomorphism from the HNN group to G, ordered by (base images, x image)."""
    space = G.order ** (sys.base_rank + 1)
    if space > limit:
        raise EnumerationLimit(f"{space} candidate assignments exceed the limit {limit}")
    graph = build_graph(sys, G, edge_cap=limit)
    table, inv = G.table, G.inverses
    reps = []
    for e in range(graph.num_edges):
        base = graph.label(e)
        u_img = graph.vertices[graph.src[e]]
        v_img = graph.vertices[graph.dst[e]]
        xs = np.arange(G.order)
        ok = np.ones(G.order, dtype=bool)
        for u, v in zip(u_img, v_img):
            ok &= table[table[inv[xs], u], xs] == v
        rho_u = subgroup_closure([int(g) for g in u_img], G)
        for x in np.flatnonzero(ok).tolist():
            reps.append(GRep(x, base, rho_u, image_of_k(G, x, base)))
    return reps


def check_g_rep(sys: HnnSystem, G: FiniteGroup, x: int, base_images) -> bool:
    """Does ``x^-1 u_i x = v_i`` hold for every i, with all relators of B satisfied?"""
    if any(evaluate(r, base_images, G) != G.identity for r in sys.relators):
        return False
    return all(
        G.conjugate(evaluate(u, base_images, G), x) == evaluate(v, base_images, G)
        for u, v in zip(sys.u_words, sys.v_words)
    )


Perm = tuple[int, ...]


def _perm_mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[i] for i in p)


def _perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def evaluate_perm(w, images: tuple[Perm, ...], degree: int) -> Perm:
    """Evaluate a word on raw image arrays; works for any degree."""
    acc = tuple(range(degree))
    for gen, sign in w.letters:
        acc = _perm_mul(acc, images[gen] if sign > 0 else _perm_inv(images[gen]))
    return acc


@dataclass(frozen=True)
class PeriodicPoint:
    """A closed path in the S_N graph coming from the action on cosets of rho(U) in rho(K).

    Permutations are stored as image arrays so that N may exceed the degrees
    for which ``SymmetricGroup`` enumerates elements.
    """

    degree: int
    period: int
    labels: list[tuple[Perm, ...]]  # one permutation per B-generator, one tuple per edge
    vertices: list[tuple[Perm, ...]]  # vertex j is the source of edge j
    fixed_symbol: int  # the coset rho(U) itself

    def in_group(self, SN: SymmetricGroup):
        """Labels and vertices as element handles of ``SN``."""
        conv = lambda perms: tuple(SN.from_perm(p) for p in perms)
        return [conv(lab) for lab in self.labels], [conv(v) for v in self.vertices]


def coset_rep_construct(rep: GRep, sys: HnnSystem, G: FiniteGroup) -> PeriodicPoint:
    """Turn a separating representation into a periodic point of the S_N shift.

    Symbols are the right cosets of rho(U) in rho(K); an element k of rho(K)
    acts by right multiplication.  Edge j carries, for each B-generator b, the
    action of ``x^-j b x^j``; after order(x) edges the labels repeat.
    """
    if not rep.separated:
        raise NoSeparation("rho(U) equals rho(K)")
    reps, where = coset_index(rep.rho_u, rep.rho_k)
    n = len(reps)

    def action(k: int) -> Perm:
        return tuple(where[G._mul(c, k)] for c in reps)

    period = G.element_order(rep.x_image)
    labels = [tuple(action(b) for b in row)
              for row in conjugate_images(G, rep.x_image, rep.base_images, period)]
    vertices = [tuple(evaluate_perm(u, lab, n) for u in sys.u_words) for lab in labels]
    for j, lab in enumerate(labels):
        target = tuple(evaluate_perm(v, lab, n) for v in sys.v_words)
        if target != vertices[(j + 1) % period]:
            raise AssertionError(f"coset path does not close at step {j}")
    return PeriodicPoint(n, period, labels, vertices, where[G.identity])


def path_in_graph(point: PeriodicPoint, graph: ShiftGraph) -> list[int]:
    """Edge indices realizing ``point`` in ``graph``; raises KeyError if any edge is missing."""
    labels, vertices = point.in_group(graph.group)
    edges = []
    for j, lab in enumerate(labels):
        e = graph.edge_index[lab]
        if graph.vertex(graph.src[e]) != vertices[j]:
            raise KeyError(f"edge {j} starts at the wrong vertex")
        if graph.vertex(graph.dst[e]) != vertices[(j + 1) % point.period]:
            raise KeyError(f"edge {j} ends at the wrong vertex")
        edges.append(e)
    return edges
