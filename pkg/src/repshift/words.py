"""Freely reduced words over generators ``a..z`` (inverses ``A..Z``)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .groups import FiniteGroup

MAX_RANK = 26


class WordError(ValueError):
    pass


def _reduce(letters):
    out = []
    for gen, sign in letters:
        if out and out[-1] == (gen, -sign):
            out.pop()
        else:
            out.append((gen, sign))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __invert__(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return "".join(chr((97 if s > 0 else 65) + g) for g, s in self.letters)

    def __repr__(self):
        return f"Word({str(self)!r})"

    @property
    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)


def parse_word(text: str, rank: int) -> Word:
    letters = []
    for ch in text.strip():
        if "a" <= ch <= "z":
            letters.append((ord(ch) - 97, 1))
        elif "A" <= ch <= "Z":
            letters.append((ord(ch) - 65, -1))
        else:
            raise WordError(f"illegal character {ch!r} in word {text!r}")
        if letters[-1][0] >= rank:
            raise WordError(f"generator {ch!r} out of range for rank {rank}")
    return Word(tuple(letters))


def format_word(w: Word) -> str:
    return str(w)


def generator(i: int) -> Word:
    return Word(((i, 1),))


def evaluate(w: Word, assignment: Sequence[int], G: FiniteGroup) -> int:
    """Image of ``w`` under the homomorphism sending generator i to ``assignment[i]``."""
    if w.max_generator >= len(assignment):
        raise WordError(f"word {w} needs {w.max_generator + 1} generators, assignment has {len(assignment)}")
    images = [G.check(g) for g in assignment]
    inverses = {}
    acc = G.identity
    for gen, sign in w.letters:
        if sign > 0:
            g = images[gen]
        else:
            g = inverses.get(gen)
            if g is None:
                g = inverses[gen] = G._inv(images[gen])
        acc = G._mul(acc, g)
    return acc


def evaluate_many(w: Word, columns: Sequence[np.ndarray], G: FiniteGroup) -> np.ndarray:
    """Vectorized ``evaluate`` over many assignments.

    ``columns[i]`` holds the image of generator i for every assignment.
    """
    table, inv = G.table, G.inverses
    n = len(columns[0]) if len(columns) else 1
    acc = np.full(n, G.identity, dtype=np.int32)
    for gen, sign in w.letters:
        col = columns[gen] if sign > 0 else inv[columns[gen]]
        acc = table[acc, col]
    return acc


def abelianized_exponents(w: Word, rank: int) -> list[int]:
    vec = [0] * rank
    for gen, sign in w.letters:
        if gen >= rank:
            raise WordError(f"generator index {gen} out of range for rank {rank}")
        vec[gen] += sign
    return vec
