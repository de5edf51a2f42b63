"""Exact values of weighted vector composition counts.

``binom(k, target, f)`` is the number (total weight) of ``f``-weighted
compositions of ``target`` into exactly ``k`` ordered parts, i.e. the
coefficient of ``x**target`` in ``(sum_s f(s) x**s)**k``.  It is computed
row by row with the Pascal-like recurrence

    row_k[l] = sum_s f(s) * row_{k-1}[l - s]

over the dense box ``[0, target]``.  Each row is a numpy object array of
Python ints, so values never overflow; shifted slices keep the inner loop
out of the interpreter.

The other routines here evaluate the alternative identities for the same
numbers (multinomial sum over vector partitions, Vandermonde split,
absorption, single-part extraction) and the closed forms of the classical
special cases.  They exist to cross-check each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .model import MultiIndex, WeightFunction, box_points

__all__ = [
    "CoefficientTable",
    "build_table",
    "binom",
    "binom_via_partitions",
    "vandermonde_split",
    "vandermonde_table",
    "absorption_check",
    "extract_part",
    "extract_part_table",
    "c_f",
    "cf_table",
    "cf_via_rows",
    "bracket_sum",
    "row_sum",
    "RowSum",
    "delannoy",
    "weighted_delannoy",
    "whitney",
    "whitney_diagonal",
    "andrews_cf",
    "unit_cube_cf",
    "sequence",
    "SEQUENCE_FAMILIES",
]


def _target(target: Sequence[int], f: WeightFunction) -> MultiIndex:
    t = target if isinstance(target, MultiIndex) else MultiIndex(target)
    if t.dim != f.dim:
        raise ValueError(f"target has dimension {t.dim} but weights have dimension {f.dim}")
    return t


def _check_mod(mod: int | None) -> None:
    if mod is not None and mod < 2:
        raise ValueError("modulus must be >= 2")


def _reduce(arr: np.ndarray, mod: int | None) -> np.ndarray:
    if mod is not None:
        arr %= mod
    return arr


def _zeros(box: Sequence[int]) -> np.ndarray:
    return np.zeros(tuple(b + 1 for b in box), dtype=object)


def _unit_row(box: Sequence[int], mod: int | None = None) -> np.ndarray:
    row = _zeros(box)
    row[(0,) * len(box)] = 1 if mod is None else 1 % mod
    return row


def _shift_slices(s: Sequence[int], box: Sequence[int]):
    dst = tuple(slice(si, None) for si in s)
    src = tuple(slice(0, b + 1 - si) for si, b in zip(s, box))
    return dst, src


def _next_row(prev: np.ndarray, support, box, mod) -> np.ndarray:
    nxt = _zeros(box)
    for s, w in support:
        dst, src = _shift_slices(s, box)
        nxt[dst] += w * prev[src]
    return _reduce(nxt, mod)


def _iter_rows(f: WeightFunction, box: Sequence[int], mod: int | None = None):
    """Yield rows 0, 1, 2, ... over ``box`` forever."""
    support = f.support_within(box)
    row = _unit_row(box, mod)
    while True:
        yield row
        row = _next_row(row, support, box, mod)


@dataclass(frozen=True)
class CoefficientTable:
    """Rows ``0..kmax`` of the coefficient array over a fixed box.

    ``rows[k][l]`` is the number of ``f``-weighted compositions of ``l``
    with ``k`` parts (reduced mod ``modulus`` when set).  Any ``l`` inside
    the box gives the same value it would get with ``box = l``.
    """

    f: WeightFunction
    box: MultiIndex
    rows: tuple
    modulus: int | None = None

    @property
    def kmax(self) -> int:
        return len(self.rows) - 1

    def value(self, k: int, target: Sequence[int]) -> int:
        target = MultiIndex(target)
        if k > self.kmax or not target.fits_in(self.box):
            raise IndexError(f"({k}, {tuple(target)}) outside table")
        return int(self.rows[k][tuple(target)])


def build_table(f: WeightFunction, box: Sequence[int], kmax: int, mod: int | None = None) -> CoefficientTable:
    _check_mod(mod)
    box = _target(box, f)
    rows = []
    for k, row in enumerate(_iter_rows(f, box, mod)):
        rows.append(row)
        if k == kmax:
            break
    return CoefficientTable(f, box, tuple(rows), mod)


def _row(k: int, f: WeightFunction, box: Sequence[int], mod: int | None = None) -> np.ndarray:
    for i, row in enumerate(_iter_rows(f, box, mod)):
        if i == k:
            return row
    raise AssertionError("unreachable")


def binom(k: int, target: Sequence[int], f: WeightFunction, mod: int | None = None) -> int:
    """Number of ``f``-weighted vector compositions of ``target`` with ``k`` parts.

    >>> from veccomp.model import preset
    >>> binom(15, (10, 10), preset("delannoy"))
    756756
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    _check_mod(mod)
    target = _target(target, f)
    return int(_row(k, f, target, mod)[tuple(target)])


def binom_via_partitions(k: int, target: Sequence[int], f: WeightFunction) -> int:
    """Same number as :func:`binom`, summed over vector partitions.

    Each partition with multiplicities ``r_i`` of the nonzero parts
    ``s_i`` (and ``k - sum r_i`` zero parts) contributes
    ``multinomial(k; r) * prod f(s_i)**r_i``.
    """
    from .enumeration import enumerate_partitions

    if k < 0:
        raise ValueError("k must be >= 0")
    target = _target(target, f)
    support = f.support_within(target)
    weights = dict(support)
    f0 = weights.pop(MultiIndex.zeros(f.dim), 0)
    total = 0
    for vp in enumerate_partitions(target, k=k, include_zero=True, parts=list(weights)):
        zero = vp.zero
        if zero and not f0:
            continue
        coeff = 1
        remaining = k
        term = f0**zero
        for s, r in vp.multiplicities:
            coeff *= math.comb(remaining, r)
            remaining -= r
            term *= weights[s] ** r
        total += coeff * term
    return total


def _convolve(a: np.ndarray, b: np.ndarray, mod: int | None = None) -> np.ndarray:
    """Truncated convolution of two arrays over the same box."""
    box = tuple(n - 1 for n in a.shape)
    out = np.zeros(a.shape, dtype=object)
    for idx in zip(*np.nonzero(a)):
        dst, src = _shift_slices(idx, box)
        out[dst] += a[idx] * b[src]
    return _reduce(out, mod)


def vandermonde_table(split: Sequence[int], box: Sequence[int], f: WeightFunction,
                      mod: int | None = None) -> np.ndarray:
    """Array over ``box`` of ``sum_{q_1+...+q_r=l} prod binom(k_i, q_i)``."""
    if not split:
        raise ValueError("empty split")
    if any(ki < 0 for ki in split):
        raise ValueError("split parts must be >= 0")
    box = _target(box, f)
    table = build_table(f, box, max(split), mod)
    acc = table.rows[split[0]]
    for ki in split[1:]:
        acc = _convolve(acc, table.rows[ki], mod)
    return acc


def vandermonde_split(split: Sequence[int], target: Sequence[int], f: WeightFunction,
                      mod: int | None = None) -> int:
    """Evaluate the Vandermonde convolution for the split ``k = k_1 + ... + k_r``."""
    target = _target(target, f)
    return int(vandermonde_table(split, target, f, mod)[tuple(target)])


def absorption_check(k: int, target: Sequence[int], f: WeightFunction, i: int,
                     table: CoefficientTable | None = None):
    """Both sides of ``l * binom(k, l) = (k/i) sum_s s binom(i, s) binom(k-i, l-s)``.

    Returns ``(lhs, rhs)`` as tuples of ints (``rhs`` entries stay
    ``Fraction`` only if the scaling fails to be integral, which would be a
    bug).  A prebuilt ``table`` covering ``target`` and row ``k`` may be
    passed to avoid recomputation.
    """
    if not 0 < i <= k:
        raise ValueError(f"need 0 < i <= k, got i={i}, k={k}")
    target = _target(target, f)
    if table is None:
        table = build_table(f, target, k)
    elif table.modulus is not None:
        raise ValueError("absorption needs exact rows")
    ti = tuple(target)
    value = int(table.rows[k][ti])
    lhs = tuple(c * value for c in target)
    sums = [0] * f.dim
    row_i, row_rest = table.rows[i], table.rows[k - i]
    for s in box_points(target):
        a = row_i[tuple(s)]
        if not a:
            continue
        b = row_rest[tuple(c - d for c, d in zip(target, s))]
        if b:
            for j, sj in enumerate(s):
                sums[j] += sj * a * b
    rhs = []
    for v in sums:
        q = Fraction(k * v, i)
        rhs.append(int(q) if q.denominator == 1 else q)
    return lhs, tuple(rhs)


def extract_part_table(k: int, box: Sequence[int], f: WeightFunction, m: Sequence[int],
                       mod: int | None = None) -> np.ndarray:
    """Array over ``box`` of ``sum_i f(m)^i C(k,i) binom_{f|f(m)=0}(k-i, l - i m)``."""
    box = _target(box, f)
    m = _target(m, f)
    fm = f(m)
    g = f.without(m)
    table = build_table(g, box, k, mod)
    out = np.zeros(table.rows[0].shape, dtype=object)
    for i in range(k + 1):
        coeff = fm**i * math.comb(k, i)
        if not coeff:
            break
        shift = m * i
        if not shift.fits_in(box):
            break
        dst, src = _shift_slices(shift, box)
        out[dst] += coeff * table.rows[k - i][src]
    return _reduce(out, mod)


def extract_part(k: int, target: Sequence[int], f: WeightFunction, m: Sequence[int],
                 mod: int | None = None) -> int:
    """Count by the number ``i`` of parts equal to ``m``.

    Sums ``f(m)^i * C(k, i) * binom(k - i, target - i*m)`` with ``m``
    removed from the weighting.
    """
    target = _target(target, f)
    return int(extract_part_table(k, target, f, m, mod)[tuple(target)])


def cf_table(box: Sequence[int], f: WeightFunction, mod: int | None = None) -> np.ndarray:
    """``c_f`` on every point of ``box`` via ``c(l) = sum_m f(m) c(l - m)``."""
    _check_mod(mod)
    box = _target(box, f)
    if f(MultiIndex.zeros(f.dim)):
        raise ValueError("c_f diverges when f(0) != 0")
    support = [(tuple(s), w) for s, w in f.support_within(box)]
    c = _zeros(box)
    for pt in box_points(box):
        if not any(pt):
            c[pt] = 1 if mod is None else 1 % mod
            continue
        acc = 0
        for s, w in support:
            if all(a <= b for a, b in zip(s, pt)):
                prev = c[tuple(a - b for a, b in zip(pt, s))]
                if prev:
                    acc += w * prev
        c[tuple(pt)] = acc if mod is None else acc % mod
    return c


def c_f(target: Sequence[int], f: WeightFunction, mod: int | None = None) -> int:
    """Number of ``f``-weighted compositions of ``target`` with any number of parts.

    Requires ``f(0) == 0``; otherwise every target has infinitely many
    compositions.
    """
    target = _target(target, f)
    return int(cf_table(target, f, mod)[tuple(target)])


def cf_via_rows(target: Sequence[int], f: WeightFunction) -> int:
    """``sum_{k=0}^{K} binom(k, target)`` with ``K = sum(target)``.

    With ``f(0) = 0`` every part lowers the coordinate sum by at least
    one, so no composition has more than ``sum(target)`` parts.
    """
    target = _target(target, f)
    if f(MultiIndex.zeros(f.dim)):
        raise ValueError("c_f diverges when f(0) != 0")
    table = build_table(f, target, sum(target))
    return sum(int(r[tuple(target)]) for r in table.rows)


def bracket_sum(k: int, r: Sequence[int], m: Sequence[int], f: WeightFunction,
                mod: int | None = None) -> int:
    """Sum of row ``k`` over the lattice ``l = A m + r`` (``A`` diagonal, entries >= 0).

    Coordinates with ``m_i = 0`` are pinned to ``l_i = r_i``.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    r = _target(r, f)
    m = _target(m, f)
    if not f.finite:
        raise ValueError("bracket sums need a finite-support weighting")
    box = f.max_part() * k
    if not r.fits_in(box):
        return 0
    row = _row(k, f, box, mod)
    axes = []
    for ri, mi, bi in zip(r, m, box):
        axes.append(list(range(ri, bi + 1, mi)) if mi else [ri])
    total = int(row[np.ix_(*axes)].sum()) if all(axes) else 0
    return total if mod is None else total % mod


class RowSum(NamedTuple):
    closed_form: int
    direct: int


def row_sum(k: int, f: WeightFunction) -> RowSum:
    """Row-``k`` total as ``M**k`` (``M`` the total weight) and by direct summation."""
    if not f.finite:
        raise ValueError("row sums need a finite-support weighting")
    box = f.max_part() * k
    direct = int(_row(k, f, box).sum())
    return RowSum(f.total_weight() ** k, direct)


# Closed forms -------------------------------------------------------------

def _gbinom(n: int, r: int) -> int:
    """Binomial coefficient with possibly negative upper index."""
    if r < 0:
        return 0
    if n >= 0:
        return math.comb(n, r)
    return (-1) ** r * math.comb(r - n - 1, r)


def delannoy(m: int, n: int) -> int:
    return sum(2**d * math.comb(m, d) * math.comb(n, d) for d in range(min(m, n) + 1))


def weighted_delannoy(a: int, b: int, c: int, m: int, n: int) -> int:
    """Steps ``(1,0)``, ``(0,1)``, ``(1,1)`` carrying ``a``, ``b``, ``c`` colors."""
    if min(a, b, c) < 1:
        raise ValueError("weights a, b, c must be >= 1")
    return sum(
        math.comb(m, d) * math.comb(n, d) * (a * b + c) ** d * a ** (m - d) * b ** (n - d)
        for d in range(min(m, n) + 1)
    )


def whitney(m: int, n: int) -> int:
    """Compositions of ``(m, n)`` with parts in ``{1,2}^2``.

    A composition with ``j`` parts has ``m - j`` coordinates equal to 2 in
    the first row and ``n - j`` in the second, chosen independently.
    """
    return sum(math.comb(j, m - j) * math.comb(j, n - j) for j in range(min(m, n) + 1))


def whitney_diagonal(n: int) -> int:
    """``sum_k C(n-k, k)**2``, the diagonal of :func:`whitney`."""
    return sum(math.comb(n - k, k) ** 2 for k in range(n // 2 + 1))


def andrews_cf(target: Sequence[int]) -> int:
    """Compositions of ``target`` into arbitrary nonzero parts."""
    target = MultiIndex(target)
    total = 0
    for k in range(sum(target) + 1):
        for i in range(k + 1):
            prod = 1
            for lj in target:
                prod *= _gbinom(lj + k - i - 1, lj)
                if not prod:
                    break
            total += (-1) ** i * math.comb(k, i) * prod
    return total


def unit_cube_cf(target: Sequence[int]) -> int:
    """Compositions of ``target`` into nonzero parts from ``{0,1}^N``."""
    target = MultiIndex(target)
    total = 0
    for k in range(max(target), sum(target) + 1):
        for i in range(k + 1):
            prod = 1
            for lj in target:
                prod *= math.comb(k - i, lj)
                if not prod:
                    break
            total += (-1) ** i * math.comb(k, i) * prod
    return total


def _diag_cf(f: WeightFunction, length: int, dim: int) -> list[int]:
    table = cf_table((length,) * dim, f)
    return [int(table[(l,) * dim]) for l in range(1, length + 1)]


SEQUENCE_FAMILIES = ("delannoy", "whitney", "andrews", "unitcube", "scolor")


def sequence(family: str, length: int, dim: int = 2) -> list[int]:
    """Diagonal values ``l = 1..length`` of a classical family.

    ``dim`` applies to the ``andrews``, ``unitcube`` and ``scolor``
    families; ``delannoy`` and ``whitney`` are two-dimensional.
    """
    ls = range(1, length + 1)
    if family == "delannoy":
        return [delannoy(l, l) for l in ls]
    if family == "whitney":
        return [whitney(l, l) for l in ls]
    if family == "andrews":
        return [andrews_cf((l,) * dim) for l in ls]
    if family == "unitcube":
        return [unit_cube_cf((l,) * dim) for l in ls]
    if family == "scolor":
        return _diag_cf(WeightFunction.product(dim), length, dim)
    raise ValueError(f"unknown family {family!r}; choose from {SEQUENCE_FAMILIES}")
