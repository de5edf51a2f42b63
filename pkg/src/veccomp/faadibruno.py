"""Partial derivatives of ``G(F(x))`` as sums over vector compositions.

A term is ``coeff * G^(r)(F(x)) * prod (d^s F)^mult``.  Two expansions are
offered: one term per vector partition of the derivative order, or one
raw term per ordered composition (merged on demand).  ``validate_numeric``
checks either against a computer-algebra derivative for polynomial G, F.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .enumeration import enumerate_compositions, enumerate_partitions
from .model import MultiIndex, WeightFunction, box_points

__all__ = [
    "DerivTerm",
    "expand_partition_form",
    "expand_composition_form",
    "merge_terms",
    "hardy_case",
    "Polynomial",
    "Validation",
    "validate_numeric",
]


def _mfact(v: Sequence[int]) -> int:
    return math.prod(math.factorial(c) for c in v)


@dataclass(frozen=True, order=True)
class DerivTerm:
    g_order: int
    factors: tuple[tuple[MultiIndex, int], ...]
    coefficient: Fraction

    @property
    def key(self) -> tuple:
        return (self.g_order, self.factors)

    def to_json(self) -> dict:
        c = self.coefficient
        return {
            "coeff": str(c.numerator) if c.denominator == 1 else str(c),
            "g_order": self.g_order,
            "factors": [{"part": list(s), "mult": r} for s, r in self.factors],
        }


def _target(ell: Sequence[int]) -> MultiIndex:
    ell = MultiIndex(ell)
    if ell.dim == 0 or ell.is_zero():
        raise ValueError("derivative order must be nonzero")
    return ell


def expand_partition_form(ell: Sequence[int]) -> list[DerivTerm]:
    """One term per vector partition of ``ell`` into nonzero parts."""
    ell = _target(ell)
    lf = _mfact(ell)
    terms = []
    for vp in enumerate_partitions(ell):
        coeff = Fraction(lf)
        for s, r in vp.multiplicities:
            coeff /= math.factorial(r) * _mfact(s) ** r
        if coeff.denominator != 1:
            raise ArithmeticError(f"non-integral coefficient {coeff} for {vp}")
        factors = tuple(sorted(vp.multiplicities))
        terms.append(DerivTerm(vp.size, factors, coeff))
    return sorted(terms)


def _all_nonzero_parts(ell: MultiIndex) -> WeightFunction:
    return WeightFunction.indicator([s for s in box_points(ell) if not s.is_zero()])


def expand_composition_form(ell: Sequence[int], merge: bool = False) -> list[DerivTerm]:
    """Raw terms, one per ordered composition of ``ell``; optionally merged."""
    ell = _target(ell)
    lf = _mfact(ell)
    raw = []
    for comp in enumerate_compositions(ell, _all_nonzero_parts(ell)):
        n = comp.k
        coeff = Fraction(lf, math.factorial(n) * math.prod(_mfact(m) for m in comp.parts))
        factors = tuple(sorted(Counter(comp.parts).items()))
        raw.append(DerivTerm(n, factors, coeff))
    return merge_terms(raw) if merge else raw


def merge_terms(terms: Sequence[DerivTerm]) -> list[DerivTerm]:
    acc: dict[tuple, Fraction] = {}
    for t in terms:
        acc[t.key] = acc.get(t.key, Fraction(0)) + t.coefficient
    return sorted(DerivTerm(r, fac, c) for (r, fac), c in acc.items() if c)


def hardy_case(N: int) -> list[DerivTerm]:
    """Expansion for the all-ones order: one unit-coefficient term per set partition of ``[N]``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return expand_partition_form(MultiIndex.ones(N))


# Numeric validation ----------------------------------------------------------

class Polynomial:
    """Sparse polynomial ``{exponent tuple: coefficient}`` in ``dim`` variables."""

    def __init__(self, terms: Mapping[Sequence[int], float], dim: int):
        self.dim = dim
        self.terms = {}
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != dim or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for a {dim}-variable polynomial")
            if c:
                self.terms[e] = self.terms.get(e, 0) + c

    @classmethod
    def parse(cls, spec, dim: int | None = None) -> "Polynomial":
        """Accepts ``{"3": 1}`` (univariate), ``[[exps, coeff], ...]`` or ``[{"e":..., "c":...}]``."""
        if isinstance(spec, Polynomial):
            return spec
        items = []
        if isinstance(spec, Mapping):
            for k, v in spec.items():
                e = [int(x) for x in str(k).split(",")] if isinstance(k, str) else k
                items.append((e if isinstance(e, (list, tuple)) else [e], v))
        elif isinstance(spec, (list, tuple)):
            for entry in spec:
                if isinstance(entry, Mapping):
                    e, c = entry["e"], entry["c"]
                else:
                    e, c = entry
                items.append((e if isinstance(e, (list, tuple)) else [e], c))
        else:
            raise ValueError("polynomial spec must be a mapping or a list")
        if not items:
            raise ValueError("empty polynomial")
        d = dim if dim is not None else len(items[0][0])
        return cls({tuple(e): c for e, c in items}, d)

    def derivative(self, order: Sequence[int]) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            if all(a >= o for a, o in zip(e, order)):
                f = math.prod(math.perm(a, o) for a, o in zip(e, order))
                ne = tuple(a - o for a, o in zip(e, order))
                out[ne] = out.get(ne, 0) + c * f
        return Polynomial(out, self.dim)

    def __call__(self, x: Sequence[float]) -> float:
        return sum(c * math.prod(xi**a for xi, a in zip(x, e)) for e, c in self.terms.items())

    def to_sympy(self, symbols):
        return sum(c * math.prod(s**a for s, a in zip(symbols, e)) for e, c in self.terms.items())


def evaluate_expansion(terms: Sequence[DerivTerm], G: Polynomial, F: Polynomial,
                       point: Sequence[float]) -> float:
    u = F(point)
    total = 0.0
    for t in terms:
        value = float(t.coefficient) * G.derivative((t.g_order,))((u,))
        for s, r in t.factors:
            value *= F.derivative(s)(point) ** r
        total += value
    return total


def _sympy_derivative(ell: MultiIndex, G: Polynomial, F: Polynomial, point) -> float:
    import sympy

    xs = sympy.symbols(f"x0:{F.dim}")
    u = sympy.Symbol("u")
    composed = G.to_sympy([u]).subs(u, F.to_sympy(xs))
    expr = sympy.diff(composed, *[(x, n) for x, n in zip(xs, ell) if n])
    return float(expr.subs(dict(zip(xs, point))))


def _finite_difference(fn, ell: Sequence[int], point: Sequence[float], h: float) -> float:
    """Nested central differences for the mixed partial of order ``ell``."""
    order = [i for i, n in enumerate(ell) for _ in range(n)]

    def diff(j, x):
        if j == len(order):
            return fn(x)
        i = order[j]
        up = list(x)
        dn = list(x)
        up[i] += h
        dn[i] -= h
        return (diff(j + 1, up) - diff(j + 1, dn)) / (2 * h)

    return diff(0, list(point))


class Validation(NamedTuple):
    expansion: float
    oracle: float
    error: float
    relative: bool
    finite_difference: float


def validate_numeric(ell: Sequence[int], G, F, point: Sequence[float],
                     form: str = "partition", h: float = 1e-3) -> Validation:
    """Compare the expansion at ``point`` with an exact symbolic derivative.

    ``error`` is relative unless the true derivative is zero, in which case
    it is absolute (``relative`` is then False).
    """
    ell = _target(ell)
    F = Polynomial.parse(F, ell.dim)
    G = Polynomial.parse(G, 1)
    if F.dim != ell.dim or len(point) != ell.dim:
        raise ValueError("dimension mismatch between order, F and point")
    if form == "partition":
        terms = expand_partition_form(ell)
    elif form == "composition":
        terms = expand_composition_form(ell, merge=True)
    else:
        raise ValueError(f"unknown form {form!r}")
    value = evaluate_expansion(terms, G, F, point)
    oracle = _sympy_derivative(ell, G, F, point)
    fd = _finite_difference(lambda x: G((F(x),)), ell, point, h)
    if oracle == 0:
        return Validation(value, oracle, abs(value), False, fd)
    return Validation(value, oracle, abs(value - oracle) / abs(oracle), True, fd)
