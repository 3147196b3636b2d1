"""Finite groups: symmetric groups S_N and groups given by a Cayley table.

Elements are integer handles ``0 .. order-1``.  For ``SymmetricGroup`` the
handle is the rank of the image array in lexicographic order, so comparing
handles is the same as comparing image arrays.  Products follow the
left-to-right convention: ``(g*h)(i) = h(g(i))``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

# Largest order for which a dense multiplication table is materialized.
DENSE_TABLE_LIMIT = 1000
MAX_DEGREE = 8


class GroupError(ValueError):
    pass


class FiniteGroup:
    """Base class.  Subclasses provide ``order``, ``identity`` and ``_mul``."""

    order: int
    identity: int

    def _mul(self, g: int, h: int) -> int:
        raise NotImplementedError

    def _inv(self, g: int) -> int:
        raise NotImplementedError

    def check(self, g: int) -> int:
        if not isinstance(g, (int, np.integer)) or not 0 <= g < self.order:
            raise GroupError(f"{g!r} is not an element of {self.name}")
        return int(g)

    @property
    def name(self) -> str:
        raise NotImplementedError

    @property
    def elements(self) -> range:
        return range(self.order)

    def compose(self, g: int, h: int) -> int:
        return self._mul(self.check(g), self.check(h))

    def inverse(self, g: int) -> int:
        return self._inv(self.check(g))

    def power(self, g: int, k: int) -> int:
        g = self.check(g)
        if k < 0:
            g, k = self._inv(g), -k
        result = self.identity
        while k:
            if k & 1:
                result = self._mul(result, g)
            g = self._mul(g, g)
            k >>= 1
        return result

    def element_order(self, g: int) -> int:
        g = self.check(g)
        r, acc = 1, g
        while acc != self.identity:
            acc = self._mul(acc, g)
            r += 1
        return r

    def conjugate(self, g: int, x: int) -> int:
        """x^-1 g x."""
        return self._mul(self._mul(self._inv(x), g), x)

    @cached_property
    def table(self) -> np.ndarray:
        """Dense multiplication table, ``table[g, h] = g*h``."""
        if self.order > DENSE_TABLE_LIMIT:
            raise GroupError(f"{self.name} is too large for a dense table")
        n = self.order
        t = np.empty((n, n), dtype=np.int32)
        for g in range(n):
            for h in range(n):
                t[g, h] = self._mul(g, h)
        t.setflags(write=False)
        return t

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.array([self._inv(g) for g in range(self.order)], dtype=np.int32)
        inv.setflags(write=False)
        return inv

    def format_element(self, g: int) -> str:
        return str(self.check(g))

    def __repr__(self) -> str:
        return f"<{self.name}>"


class SymmetricGroup(FiniteGroup):
    def __init__(self, degree: int):
        if not 1 <= degree <= MAX_DEGREE:
            raise GroupError(f"symmetric degree must be in 1..{MAX_DEGREE}, got {degree}")
        self.degree = degree
        self._perms = list(itertools.permutations(range(degree)))
        self._rank = {p: i for i, p in enumerate(self._perms)}
        self.order = len(self._perms)
        self.identity = 0

    @property
    def name(self) -> str:
        return f"S{self.degree}"

    def __eq__(self, other):
        return isinstance(other, SymmetricGroup) and other.degree == self.degree

    def __hash__(self):
        return hash(("S", self.degree))

    def perm(self, g: int) -> tuple[int, ...]:
        return self._perms[self.check(g)]

    def from_perm(self, images: Sequence[int]) -> int:
        key = tuple(int(i) for i in images)
        try:
            return self._rank[key]
        except KeyError:
            raise GroupError(f"{list(images)} is not a permutation of 0..{self.degree - 1}") from None

    def from_cycles(self, *cycles: Sequence[int]) -> int:
        """Element from 0-indexed disjoint cycles, e.g. ``from_cycles((0, 1))``."""
        img = list(range(self.degree))
        for c in cycles:
            for i, a in enumerate(c):
                img[a] = c[(i + 1) % len(c)]
        return self.from_perm(img)

    def _mul(self, g, h):
        p, q = self._perms[g], self._perms[h]
        return self._rank[tuple(q[i] for i in p)]

    def _inv(self, g):
        p = self._perms[g]
        out = [0] * self.degree
        for i, v in enumerate(p):
            out[v] = i
        return self._rank[tuple(out)]

    @cached_property
    def table(self) -> np.ndarray:
        if self.order > DENSE_TABLE_LIMIT:
            raise GroupError(f"{self.name} is too large for a dense table")
        perms = np.array(self._perms, dtype=np.int64)
        n = self.order
        # composed[g, h, i] = h(g(i))
        composed = perms[np.arange(n)[None, :, None], perms[:, None, :]]
        weights = self.degree ** np.arange(self.degree - 1, -1, -1)
        # lexicographic rank order coincides with base-N code order
        t = np.searchsorted(perms @ weights, composed @ weights).astype(np.int32)
        t.setflags(write=False)
        return t

    def moves(self, g: int, point: int) -> int:
        return self._perms[g][point]

    def format_element(self, g: int) -> str:
        """Cycle notation on symbols 1..N, e.g. ``(1 2 3)``; identity is ``()``."""
        p = self.perm(g)
        seen, parts = set(), []
        for start in range(self.degree):
            if start in seen or p[start] == start:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i + 1)
                i = p[i]
            parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) or "()"


class CayleyGroup(FiniteGroup):
    """A group given by its full multiplication table, validated eagerly."""

    def __init__(self, table: Sequence[Sequence[int]], identity: int, label: str = "cayley"):
        t = np.asarray(table, dtype=np.int64)
        n = len(t)
        if n == 0 or t.shape != (n, n):
            raise GroupError("Cayley table must be a non-empty square array")
        if t.min() < 0 or t.max() >= n:
            raise GroupError("Cayley table entries out of range")
        if not 0 <= identity < n:
            raise GroupError("identity index out of range")
        ident = np.arange(n)
        if not (np.array_equal(t[identity], ident) and np.array_equal(t[:, identity], ident)):
            raise GroupError("identity does not act as identity")
        for k in range(n):
            if len(np.unique(t[k])) != n or len(np.unique(t[:, k])) != n:
                raise GroupError("Cayley table is not a Latin square")
        # (g*h)*k == g*(h*k) for all triples
        for g in range(n):
            if not np.array_equal(t[t[g]], t[g][t]):
                raise GroupError("Cayley table is not associative")
        self._t = t.astype(np.int32)
        self._t.setflags(write=False)
        self.order = n
        self.identity = int(identity)
        self.label = label
        self._inverse = [int(np.flatnonzero(t[g] == identity)[0]) for g in range(n)]

    @classmethod
    def from_elements(cls, elements: Sequence, mul, label: str = "cayley") -> "CayleyGroup":
        """Tabulate ``mul`` over a list of hashable elements.

        The identity is detected from the table; element i of the result is ``elements[i]``.
        """
        elements = list(elements)
        index = {e: i for i, e in enumerate(elements)}
        table = [[index[mul(g, h)] for h in elements] for g in elements]
        ident = next(
            i for i, row in enumerate(table) if row == list(range(len(elements)))
        )
        return cls(table, ident, label=label)

    @property
    def name(self) -> str:
        return f"{self.label}[{self.order}]"

    def _mul(self, g, h):
        return int(self._t[g, h])

    def _inv(self, g):
        return self._inverse[g]

    @cached_property
    def table(self) -> np.ndarray:
        return self._t


def parse_cayley(text: str, label: str = "cayley") -> CayleyGroup:
    """Strict parser: ``order <n>``, ``identity <i>``, then n rows of n indices."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    try:
        key, n = lines[0].split()
        if key != "order":
            raise ValueError
        n = int(n)
        key, ident = lines[1].split()
        if key != "identity":
            raise ValueError
        ident = int(ident)
    except (IndexError, ValueError):
        raise GroupError("Cayley file must start with 'order <n>' and 'identity <i>'") from None
    rows = lines[2:]
    if len(rows) != n:
        raise GroupError(f"expected {n} table rows, found {len(rows)}")
    table = []
    for lineno, row in enumerate(rows, start=3):
        try:
            vals = [int(v) for v in row.split()]
        except ValueError:
            raise GroupError(f"line {lineno}: non-integer entry") from None
        if len(vals) != n:
            raise GroupError(f"line {lineno}: expected {n} entries, found {len(vals)}")
        table.append(vals)
    return CayleyGroup(table, ident, label=label)


def load_cayley(path: str | Path) -> CayleyGroup:
    path = Path(path)
    return parse_cayley(path.read_text(), label=path.stem)


def format_cayley(G: FiniteGroup) -> str:
    rows = [f"order {G.order}", f"identity {G.identity}"]
    rows += [" ".join(str(int(v)) for v in G.table[g]) for g in G.elements]
    return "\n".join(rows) + "\n"


def parse_group_spec(spec: str) -> FiniteGroup:
    """``S<k>`` for a symmetric group, ``cayley:<path>`` for a table file."""
    if spec.startswith("cayley:"):
        return load_cayley(spec[len("cayley:"):])
    if spec[:1] in ("S", "s") and spec[1:].isdigit():
        return SymmetricGroup(int(spec[1:]))
    raise GroupError(f"unrecognized group spec {spec!r} (use S<k> or cayley:<path>)")


@dataclass(frozen=True)
class Subgroup:
    group: FiniteGroup
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._set

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def issubset(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def __len__(self):
        return len(self.elements)


def subgroup_closure(gens: Iterable[int], G: FiniteGroup) -> Subgroup:
    """Smallest subgroup containing ``gens`` (orbit of the identity under right multiplication)."""
    gens = sorted({G.check(g) for g in gens} - {G.identity})
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for e in frontier:
            for s in gens:
                p = G._mul(e, s)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return Subgroup(G, tuple(sorted(seen)))


def right_cosets(H: Subgroup, K: Subgroup) -> list[int]:
    """Representatives of the right cosets Hg of H in K, each the least element of its coset.

    Representatives are listed in increasing order, so the coset H itself
    (represented by its least element) comes first only when that element is
    smaller than every other representative.
    """
    if H.group is not K.group and H.group != K.group:
        raise GroupError("subgroups live in different groups")
    if not H.issubset(K):
        raise GroupError("H is not contained in K")
    G = K.group
    reps = []
    covered = set()
    for g in K.elements:
        if g in covered:
            continue
        coset = {G._mul(h, g) for h in H.elements}
        covered |= coset
        reps.append(min(coset))
    return sorted(reps)


def coset_index(H: Subgroup, K: Subgroup) -> tuple[list[int], dict[int, int]]:
    """Coset representatives plus a map from each element of K to its coset's position."""
    reps = right_cosets(H, K)
    G = K.group
    where = {}
    for idx, g in enumerate(reps):
        for h in H.elements:
            where[G._mul(h, g)] = idx
    return reps, where


def elements_of_order_dividing(r: int, G: FiniteGroup) -> int:
    if r < 1:
        raise GroupError("r must be positive")
    return sum(1 for g in G.elements if G.power(g, r) == G.identity)


def symmetric_order(degree: int) -> int:
    return math.factorial(degree)
