"""Augmented group systems presented as HNN extensions ``<x, B | x^-1 u_i x = v_i>``.

Also holds the built-in knot catalog and the Alexander polynomial check used
to validate it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping, Optional

import sympy

from .words import Word, WordError, abelianized_exponents, format_word, parse_word


class HnnFormatError(ValueError):
    """Malformed or inconsistent HNN system data."""


@dataclass(frozen=True)
class HnnSystem:
    name: str
    base_rank: int
    u_words: tuple[Word, ...]
    v_words: tuple[Word, ...]
    relators: tuple[Word, ...] = ()
    genus_hint: Optional[int] = None
    # metadata only; no algorithm reads it
    fibered_hint: Optional[bool] = field(default=None, compare=False)

    def __post_init__(self):
        if self.base_rank < 0:
            raise HnnFormatError("base_rank must be non-negative")
        if len(self.u_words) != len(self.v_words):
            raise HnnFormatError(
                f"{self.name}: {len(self.u_words)} u-words but {len(self.v_words)} v-words"
            )
        for w in self.u_words + self.v_words + self.relators:
            if w.max_generator >= self.base_rank:
                raise HnnFormatError(f"{self.name}: word {w} uses a generator beyond base_rank {self.base_rank}")

    @property
    def m(self) -> int:
        return len(self.u_words)


def parse_system(text: str) -> HnnSystem:
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        if key not in ("name", "base_rank", "relators", "u", "v", "genus", "fibered"):
            raise HnnFormatError(f"line {lineno}: unknown key {key!r}")
        if key in fields:
            raise HnnFormatError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = rest.strip()

    for required in ("name", "base_rank"):
        if required not in fields:
            raise HnnFormatError(f"missing '{required}' line")
    try:
        rank = int(fields["base_rank"])
    except ValueError:
        raise HnnFormatError(f"bad base_rank {fields['base_rank']!r}") from None

    def words(key):
        body = fields.get(key, "")
        if not body:
            return ()
        try:
            return tuple(parse_word(tok.strip(), rank) for tok in body.split(","))
        except WordError as exc:
            raise HnnFormatError(f"{key}: {exc}") from None

    genus = None
    if "genus" in fields:
        try:
            genus = int(fields["genus"])
        except ValueError:
            raise HnnFormatError(f"bad genus {fields['genus']!r}") from None
    fibered = None
    if "fibered" in fields:
        flag = fields["fibered"].lower()
        if flag not in ("yes", "no"):
            raise HnnFormatError("fibered must be 'yes' or 'no'")
        fibered = flag == "yes"

    return HnnSystem(
        name=fields["name"],
        base_rank=rank,
        u_words=words("u"),
        v_words=words("v"),
        relators=words("relators"),
        genus_hint=genus,
        fibered_hint=fibered,
    )


def load_system(path: str | Path) -> HnnSystem:
    return parse_system(Path(path).read_text())


def format_system(sys: HnnSystem) -> str:
    lines = [f"name {sys.name}", f"base_rank {sys.base_rank}"]
    if sys.relators:
        lines.append("relators " + ", ".join(map(format_word, sys.relators)))
    lines.append(("u " + ", ".join(map(format_word, sys.u_words))).rstrip())
    lines.append(("v " + ", ".join(map(format_word, sys.v_words))).rstrip())
    if sys.genus_hint is not None:
        lines.append(f"genus {sys.genus_hint}")
    if sys.fibered_hint is not None:
        lines.append("fibered " + ("yes" if sys.fibered_hint else "no"))
    return "\n".join(lines) + "\n"


class KnotCatalog(Mapping[str, HnnSystem]):
    def __init__(self, entries: Mapping[str, HnnSystem], aliases: Mapping[str, str] = ()):
        self._entries = dict(entries)
        self._aliases = dict(aliases)

    def __getitem__(self, name: str) -> HnnSystem:
        key = self._aliases.get(name, name)
        try:
            return self._entries[key]
        except KeyError:
            raise KeyError(
                f"unknown knot {name!r}; catalog has: {', '.join(self.names())}"
            ) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def names(self) -> list[str]:
        return list(self._entries)


CATALOG_ORDER = ("unknot", "trefoil", "figure-eight", "5_2", "6_1")
CATALOG_ALIASES = {"0_1": "unknot", "3_1": "trefoil", "4_1": "figure-eight"}

# Pinned normalized Alexander polynomials, coefficients from t^0 upward.
KNOWN_ALEXANDER = {
    "unknot": (1,),
    "trefoil": (1, -1, 1),
    "figure-eight": (1, -3, 1),
    "5_2": (2, -3, 2),
    "6_1": (2, -5, 2),
}

_catalog_cache: Optional[KnotCatalog] = None


def builtin_catalog() -> KnotCatalog:
    global _catalog_cache
    if _catalog_cache is None:
        pkg = resources.files("repshift") / "catalog"
        entries = {}
        for name in CATALOG_ORDER:
            sys = parse_system((pkg / f"{name}.knot").read_text())
            if alexander_poly(sys) != KNOWN_ALEXANDER[name]:
                raise HnnFormatError(f"catalog entry {name} fails its Alexander polynomial check")
            entries[name] = sys
        _catalog_cache = KnotCatalog(entries, CATALOG_ALIASES)
    return _catalog_cache


def resolve_knot(source: str) -> HnnSystem:
    """Catalog name, or a path to a knot file."""
    cat = builtin_catalog()
    if source in cat or source in CATALOG_ALIASES:
        return cat[source]
    path = Path(source)
    if path.is_file():
        return load_system(path)
    return cat[source]


def exponent_matrix(words, rank: int) -> list[list[int]]:
    return [abelianized_exponents(w, rank) for w in words]


def alexander_poly(sys: HnnSystem) -> tuple[int, ...]:
    """``det(t*E_U - E_V)`` from the exponent-sum matrices, normalized.

    Normalization removes any factor ``t^k`` and makes the constant term positive.
    """
    if sys.relators:
        raise HnnFormatError("alexander_poly requires a free base group")
    if sys.m != sys.base_rank:
        raise HnnFormatError(
            f"exponent matrices are {sys.m}x{sys.base_rank}; a square system is required"
        )
    t = sympy.Symbol("t")
    eu = sympy.Matrix(exponent_matrix(sys.u_words, sys.base_rank)) if sys.m else sympy.zeros(0, 0)
    ev = sympy.Matrix(exponent_matrix(sys.v_words, sys.base_rank)) if sys.m else sympy.zeros(0, 0)
    det = sympy.expand((t * eu - ev).det(method="bareiss")) if sys.m else sympy.Integer(1)
    coeffs = [int(c) for c in reversed(sympy.Poly(det, t).all_coeffs())]
    return normalize_poly(coeffs)


def normalize_poly(coeffs) -> tuple[int, ...]:
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if not any(coeffs):
        return (0,)
    while coeffs[0] == 0:
        coeffs.pop(0)
    if coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    return tuple(coeffs)


def format_poly(coeffs) -> str:
    """``(1, -1, 1)`` -> ``t^2 - t + 1``, highest degree first."""
    terms = []
    for deg in range(len(coeffs) - 1, -1, -1):
        c = coeffs[deg]
        if c == 0:
            continue
        mag = abs(c)
        if deg == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + ("t" if deg == 1 else f"t^{deg}")
        if not terms:
            terms.append(("-" if c < 0 else "") + body)
        else:
            terms.append(("- " if c < 0 else "+ ") + body)
    return " ".join(terms) or "0"
