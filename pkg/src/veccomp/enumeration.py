"""Exhaustive generation of compositions, partitions and the bijections between them.

Everything here is a lazy generator.  The streams double as brute-force
oracles for the counting and congruence modules, so they deliberately
avoid any shortcut through those modules.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .model import MultiIndex, WeightFunction, box_points

__all__ = [
    "ColoredComposition",
    "VectorPartition",
    "SetPartition",
    "enumerate_compositions",
    "count_compositions",
    "enumerate_partitions",
    "set_partitions",
    "set_partition_to_vector_partition",
    "vector_partition_to_set_partition",
    "decode_product_color",
    "encode_product_color",
    "cross_and_dash",
    "scolor_to_one_two",
    "one_two_to_scolor",
    "scolor_bijection",
]


@dataclass(frozen=True, order=True)
class ColoredComposition:
    parts: tuple[MultiIndex, ...]
    colors: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.parts)

    def total(self) -> MultiIndex | None:
        if not self.parts:
            return None
        acc = self.parts[0]
        for p in self.parts[1:]:
            acc = acc + p
        return acc

    def to_json(self) -> dict:
        return {"parts": [list(p) for p in self.parts], "colors": list(self.colors)}


@dataclass(frozen=True, order=True)
class VectorPartition:
    """Unordered composition: ``(part, multiplicity)`` pairs in lex order plus zero parts."""

    multiplicities: tuple[tuple[MultiIndex, int], ...]
    zero: int = 0

    @property
    def includes_zero(self) -> bool:
        return self.zero > 0

    @property
    def size(self) -> int:
        """Number of nonzero parts (with multiplicity)."""
        return sum(r for _, r in self.multiplicities)

    @property
    def k(self) -> int:
        return self.size + self.zero

    def as_dict(self) -> dict[MultiIndex, int]:
        return dict(self.multiplicities)

    def multiplicity_vector(self, order: Sequence[Sequence[int]]) -> tuple[int, ...]:
        d = self.as_dict()
        return tuple(d.get(MultiIndex(s), 0) for s in order)


@dataclass(frozen=True)
class SetPartition:
    blocks: frozenset[frozenset[int]]

    @classmethod
    def of(cls, blocks) -> "SetPartition":
        return cls(frozenset(frozenset(b) for b in blocks))

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(b)) for b in self.blocks))

    def __len__(self) -> int:
        return len(self.blocks)


# Compositions ---------------------------------------------------------------

def _uncolored(target: tuple[int, ...], support, k: int | None, smax: tuple[int, ...]):
    """Ordered part sequences summing to ``target`` in lexicographic order."""
    dim = len(target)

    def rec(rem, left):
        if left is None:
            if not any(rem):
                yield ()
                return
        elif left == 0:
            if not any(rem):
                yield ()
            return
        elif any(r > left * m for r, m in zip(rem, smax)):
            return
        nxt = None if left is None else left - 1
        for s in support:
            if all(s[j] <= rem[j] for j in range(dim)):
                rest = tuple(rem[j] - s[j] for j in range(dim))
                for tail in rec(rest, nxt):
                    yield (s,) + tail

    yield from rec(target, k)


def enumerate_compositions(target: Sequence[int], f: WeightFunction,
                           k: int | None = None) -> Iterator[ColoredComposition]:
    """Every ``f``-weighted composition of ``target`` exactly once.

    With ``k`` set only compositions with ``k`` parts are produced.  Order
    is lexicographic in the part sequence, then in the color tuple.
    """
    target = MultiIndex(target)
    if target.dim != f.dim:
        raise ValueError("dimension mismatch")
    weights = dict(f.support_within(target))
    if k is None and weights.get(MultiIndex.zeros(f.dim)):
        raise ValueError("f(0) != 0 gives infinitely many compositions; fix k")
    if k is not None and k < 0:
        raise ValueError("k must be >= 0")
    support = sorted(weights)
    smax = tuple(max(col) for col in zip(*support)) if support else (0,) * f.dim
    for parts in _uncolored(tuple(target), support, k, smax):
        for colors in itertools.product(*(range(1, weights[p] + 1) for p in parts)):
            yield ColoredComposition(parts, colors)


def count_compositions(target: Sequence[int], f: WeightFunction, k: int | None = None) -> int:
    return sum(1 for _ in enumerate_compositions(target, f, k))


# Vector partitions ----------------------------------------------------------

def enumerate_partitions(target: Sequence[int], k: int | None = None, include_zero: bool = False,
                         parts: Sequence[Sequence[int]] | None = None) -> Iterator[VectorPartition]:
    """Vector partitions of ``target``.

    ``parts`` defaults to every nonzero ``s <= target``.  With ``k`` set the
    partitions have exactly ``k`` parts; with ``include_zero`` the zero
    part fills up to ``k`` (which then is required).
    """
    target = MultiIndex(target)
    if include_zero and k is None:
        raise ValueError("include_zero needs a fixed number of parts k")
    if parts is None:
        parts = [s for s in box_points(target) if not s.is_zero()]
    else:
        parts = sorted({MultiIndex(s) for s in parts if not MultiIndex(s).is_zero()})
        parts = [s for s in parts if s.fits_in(target)]
    dim = target.dim

    def rec(i, rem, used):
        if not any(rem):
            yield ()
            return
        if i == len(parts):
            return
        s = parts[i]
        cap = min((rem[j] // s[j] for j in range(dim) if s[j]), default=0)
        if k is not None:
            cap = min(cap, k - used)
        for r in range(cap, -1, -1):
            rest = tuple(rem[j] - r * s[j] for j in range(dim))
            for tail in rec(i + 1, rest, used + r):
                yield ((s, r),) + tail if r else tail

    for combo in rec(0, tuple(target), 0):
        size = sum(r for _, r in combo)
        if k is None:
            yield VectorPartition(combo)
        elif include_zero:
            yield VectorPartition(combo, k - size)
        elif size == k:
            yield VectorPartition(combo)


# Set partitions via 0/1 vectors ---------------------------------------------

def vector_partition_to_set_partition(vp: VectorPartition) -> SetPartition:
    blocks = []
    for part, r in vp.multiplicities:
        if r != 1 or any(c > 1 for c in part):
            raise ValueError("not a partition of the all-ones vector into distinct parts")
        blocks.append(frozenset(i + 1 for i, c in enumerate(part) if c))
    return SetPartition(frozenset(blocks))


def set_partition_to_vector_partition(sp: SetPartition, n: int) -> VectorPartition:
    parts = sorted(MultiIndex(1 if i + 1 in b else 0 for i in range(n)) for b in sp.blocks)
    return VectorPartition(tuple((p, 1) for p in parts))


def set_partitions(n: int, k: int) -> Iterator[SetPartition]:
    """Set partitions of ``{1..n}`` into ``k`` blocks via partitions of ``(1,...,1)``."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if n == 0:
        yield SetPartition(frozenset())
        return
    for vp in enumerate_partitions(MultiIndex.ones(n), k=k):
        yield vector_partition_to_set_partition(vp)


# s-color compositions and the cross-and-dash code ---------------------------

def decode_product_color(part: Sequence[int], color: int) -> tuple[int, ...]:
    """Split a color in ``1..prod(part)`` into per-coordinate colors.

    Colors are numbered in lexicographic order of the coordinate tuples,
    first coordinate most significant.
    """
    if not 1 <= color <= math.prod(part):
        raise ValueError(f"color {color} out of range for part {tuple(part)}")
    out = []
    rest = color - 1
    for size in reversed(part):
        rest, c = divmod(rest, size)
        out.append(c + 1)
    return tuple(reversed(out))


def encode_product_color(part: Sequence[int], colors: Sequence[int]) -> int:
    idx = 0
    for size, c in zip(part, colors):
        idx = idx * size + (c - 1)
    return idx + 1


def _row_symbols(sizes: Sequence[int], colors: Sequence[int]) -> list[str]:
    out: list[str] = []
    for j, (size, c) in enumerate(zip(sizes, colors)):
        if j:
            out.append("x")
        out.extend("-" * (c - 1) + "x" + "-" * (size - c))
    return out


def cross_and_dash(comp: ColoredComposition) -> list[str]:
    """One cross-and-dash string per coordinate of an s-color composition.

    A part of size ``pi`` with color ``c`` is ``c-1`` dashes, a cross, then
    ``pi-c`` dashes; consecutive parts are separated by a further cross.
    """
    dim = comp.parts[0].dim if comp.parts else 0
    per_coord = [decode_product_color(p, c) for p, c in zip(comp.parts, comp.colors)]
    return [
        "".join(_row_symbols([p[i] for p in comp.parts], [cc[i] for cc in per_coord]))
        for i in range(dim)
    ]


def scolor_to_one_two(comp: ColoredComposition) -> ColoredComposition:
    """Image of an s-color composition as a composition with parts in ``{1,2}^N``."""
    rows = cross_and_dash(comp)
    columns = zip(*([1 if ch == "x" else 2 for ch in row] for row in rows))
    parts = tuple(MultiIndex(col) for col in columns)
    return ColoredComposition(parts, (1,) * len(parts))


def _parse_row(values: Sequence[int]) -> list[tuple[int, int]]:
    """Invert :func:`_row_symbols`: ``(size, color)`` pairs from a row of 1s and 2s."""
    parts = []
    pos, n = 0, len(values)
    while True:
        before = 0
        while pos < n and values[pos] == 2:
            before += 1
            pos += 1
        if pos == n:
            raise ValueError("row does not encode a colored composition")
        pos += 1  # the part's own cross
        after = 0
        while pos < n and values[pos] == 2:
            after += 1
            pos += 1
        parts.append((before + 1 + after, before + 1))
        if pos == n:
            return parts
        pos += 1  # separator cross
        if pos == n:
            raise ValueError("row ends in a separator")


def one_two_to_scolor(comp: ColoredComposition) -> ColoredComposition:
    """Inverse of :func:`scolor_to_one_two`."""
    if not comp.parts:
        raise ValueError("empty composition")
    dim = comp.parts[0].dim
    rows = [_parse_row([p[i] for p in comp.parts]) for i in range(dim)]
    if len({len(r) for r in rows}) != 1:
        raise ValueError("rows encode different numbers of parts")
    parts, colors = [], []
    for j in range(len(rows[0])):
        sizes = tuple(rows[i][j][0] for i in range(dim))
        cols = tuple(rows[i][j][1] for i in range(dim))
        parts.append(MultiIndex(sizes))
        colors.append(encode_product_color(sizes, cols))
    return ColoredComposition(tuple(parts), tuple(colors))


def scolor_bijection(ell: int, dim: int) -> Iterator[tuple[ColoredComposition, ColoredComposition]]:
    """Pairs (s-color composition of ``ell*1``, its image composition of ``(2*ell-1)*1``)."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    f = WeightFunction.product(dim)
    for comp in enumerate_compositions(MultiIndex((ell,) * dim), f):
        yield comp, scolor_to_one_two(comp)
