"""Congruence and divisibility predictors, each paired with a direct check.

Predictors compute a residue the way the corresponding theorem says it
can be obtained (usually much cheaper than the number itself).  The
``check_*`` functions compare that prediction with the exact coefficient
reduced by the same modulus and return a :class:`CongruenceReport`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Sequence

from .counting import binom, bracket_sum, build_table, c_f, weighted_delannoy
from .enumeration import enumerate_partitions
from .model import MultiIndex, WeightFunction, box_points

__all__ = [
    "CongruenceReport",
    "is_prime",
    "parity",
    "prime_row",
    "prime_power_row",
    "lucas",
    "fast_mod_p",
    "divisibility_modulus",
    "babbage",
    "mod_p_reduction",
    "non_multiple_row",
    "pn_row_congruence",
    "glaisher",
    "linear_recurrence_congruence",
    "razpet",
    "mann_shanks",
    "MannShanksResult",
    "check_parity",
    "check_prime_row",
    "check_prime_power_row",
    "check_lucas",
    "check_fast_mod_p",
    "check_divisibility",
    "THEOREMS",
]


@dataclass(frozen=True)
class CongruenceReport:
    claim: str
    modulus: int
    predicted: int
    actual: int
    witness: dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.predicted == self.actual

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "modulus": self.modulus,
            "predicted": self.predicted,
            "actual": self.actual,
            "holds": self.holds,
            "witness": self.witness,
        }


def _report(claim, modulus, predicted, actual, **witness) -> CongruenceReport:
    return CongruenceReport(claim, modulus, predicted % modulus, actual % modulus, witness)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def _idx(target: Sequence[int], f: WeightFunction) -> MultiIndex:
    t = MultiIndex(target)
    if t.dim != f.dim:
        raise ValueError(f"target has dimension {t.dim} but weights have dimension {f.dim}")
    return t


# Parity -------------------------------------------------------------------

def parity(k: int, target: Sequence[int], f: WeightFunction) -> int:
    """``binom(k, target, f) mod 2`` by halving ``k``.

    Even ``k``: zero if some entry is odd, else the value at
    ``(k/2, target/2)``.  Odd ``k``: sum of ``f(s)`` times the value at
    ``((k-1)/2, (target-s)/2)`` over parts ``s`` with ``target - s`` even.
    """
    target = _idx(target, f)

    @lru_cache(maxsize=None)
    def rec(k: int, t: MultiIndex) -> int:
        if k == 0:
            return int(t.is_zero())
        if k % 2 == 0:
            if not t.divisible_by(2):
                return 0
            return rec(k // 2, t // 2)
        acc = 0
        for s, w in f.support_within(t):
            if w % 2 and (t - s).divisible_by(2):
                acc ^= rec(k // 2, (t - s) // 2)
        return acc

    return rec(k, target)


def check_parity(k: int, target: Sequence[int], f: WeightFunction) -> CongruenceReport:
    return _report("parity", 2, parity(k, target, f), binom(k, target, f, mod=2))


# Rows indexed by primes and prime powers ------------------------------------

def prime_power_row(p: int, e: int, target: Sequence[int], f: WeightFunction) -> int:
    """``binom(p**e, target) mod p``: ``f(target / p**e)`` if divisible, else 0."""
    _require_prime(p)
    if e < 1:
        raise ValueError("exponent must be >= 1")
    target = _idx(target, f)
    q = p**e
    if target.divisible_by(q):
        return f(target // q) % p
    return 0


def prime_row(p: int, target: Sequence[int], f: WeightFunction) -> int:
    """``binom(p, target) mod p``: ``f(target / p)`` if divisible, else 0."""
    return prime_power_row(p, 1, target, f)


def check_prime_row(p: int, target: Sequence[int], f: WeightFunction) -> CongruenceReport:
    return _report("prime-row", p, prime_row(p, target, f), binom(p, target, f, mod=p))


def check_prime_power_row(p: int, e: int, target: Sequence[int], f: WeightFunction) -> CongruenceReport:
    q = p**e
    return _report("prime-power", p, prime_power_row(p, e, target, f), binom(q, target, f, mod=p))


def _small_rows(f: WeightFunction, box: MultiIndex, p: int):
    """Rows ``0..p-1`` mod ``p`` over ``box``."""
    return build_table(f, box, p - 1, mod=p).rows


def lucas(k: int, target: Sequence[int], p: int, f: WeightFunction) -> int:
    """``binom(k, target) mod p`` from the base-``p`` digits of ``k``.

    Sums ``prod_j binom(k_j, m_j)`` over ``m_0 + m_1 p + ... = target``.
    """
    _require_prime(p)
    target = _idx(target, f)
    digits = []
    while k:
        k, d = divmod(k, p)
        digits.append(d)
    rows = _small_rows(f, target, p)

    @lru_cache(maxsize=None)
    def rec(j: int, t: MultiIndex) -> int:
        if j == len(digits):
            return int(t.is_zero())
        row = rows[digits[j]]
        acc = 0
        for m0 in box_points(t):
            v = row[tuple(m0)]
            if v and (t - m0).divisible_by(p):
                acc += v * rec(j + 1, (t - m0) // p)
        return acc % p

    return rec(0, target)


def fast_mod_p(k: int, target: Sequence[int], p: int, f: WeightFunction) -> int:
    """``binom(k, target) mod p`` by one base-``p`` digit at a time.

    With ``k = k0 + k1 p`` and ``target = l0 + x p`` (``l0`` reduced mod
    ``p``), sums ``binom(k1, x - m) * binom(k0, l0 + m p)`` over ``m <= x``
    and recurses on ``k1`` until it drops below ``p``.
    """
    _require_prime(p)
    target = _idx(target, f)
    rows = _small_rows(f, target, p)

    @lru_cache(maxsize=None)
    def rec(k: int, t: MultiIndex) -> int:
        if k < p:
            return int(rows[k][tuple(t)])
        k1, k0 = divmod(k, p)
        l0 = MultiIndex(c % p for c in t)
        x = MultiIndex(c // p for c in t)
        acc = 0
        for m in box_points(x):
            v = rows[k0][tuple(l0 + m * p)]
            if v:
                acc += v * rec(k1, x - m)
        return acc % p

    return rec(k, target)


def check_lucas(k: int, target: Sequence[int], p: int, f: WeightFunction) -> CongruenceReport:
    return _report("lucas", p, lucas(k, target, p, f), binom(k, target, f, mod=p))


def check_fast_mod_p(k: int, target: Sequence[int], p: int, f: WeightFunction) -> CongruenceReport:
    return _report("fast-modp", p, fast_mod_p(k, target, p, f), binom(k, target, f, mod=p))


# Divisibility ---------------------------------------------------------------

def divisibility_modulus(k: int, target: Sequence[int]) -> int:
    """``lcm_i k / gcd(k, l_i)``, a divisor of every ``binom(k, target, f)``.

    The lcm equals the product of maximal prime powers over the ``t_i``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return math.lcm(*(k // math.gcd(k, li) for li in target))


def check_divisibility(k: int, target: Sequence[int], f: WeightFunction) -> CongruenceReport:
    M = divisibility_modulus(k, target)
    value = binom(k, target, f)
    return CongruenceReport("divisibility", M, 0, value % M,
                            {"t": [k // math.gcd(k, li) for li in target], "value": str(value)})


# Congruences modulo p^2 -----------------------------------------------------

def _g_weights(p: int, box: MultiIndex, f: WeightFunction) -> WeightFunction:
    """``g(x) = binom(p, x p, f)`` tabulated for ``x <= box`` (zero elsewhere)."""
    row = build_table(f, box * p, p).rows[p]
    table = {x: int(row[tuple(x * p)]) for x in box_points(box)}
    return WeightFunction(f.dim, "explicit", table, name=f"g[p={p}]")


def babbage(n: int, p: int, m: Sequence[int], f: WeightFunction) -> CongruenceReport:
    """``binom(n p, m p, f) == binom(n, m, g) (mod p**2)`` with ``g(x) = binom(p, x p, f)``."""
    _require_prime(p)
    m = _idx(m, f)
    mod = p * p
    g = _g_weights(p, m, f)
    actual = binom(n * p, m * p, f)
    predicted = binom(n, m, g)
    return _report("babbage", mod, predicted, actual,
                   lhs=str(actual), rhs=str(predicted),
                   g={",".join(map(str, x)): str(w) for x, w in sorted(g.table.items())})


def mod_p_reduction(n: int, p: int, m: Sequence[int], f: WeightFunction) -> CongruenceReport:
    """``binom(n p, m p, f) == binom(n, m, f) (mod p)``."""
    _require_prime(p)
    m = _idx(m, f)
    actual = binom(n * p, m * p, f)
    predicted = binom(n, m, f)
    return _report("modp", p, predicted, actual, lhs=str(actual), rhs=str(predicted))


def non_multiple_row(n: int, p: int, target: Sequence[int], f: WeightFunction) -> CongruenceReport:
    """``binom(n p, l)`` mod ``p**2`` when ``l`` is not a multiple of ``p``.

    Prediction: ``n * sum binom(p, k, f) * binom(n-1, x, g)`` over nonzero
    ``k <= l`` with ``l - k = x p``.
    """
    _require_prime(p)
    target = _idx(target, f)
    if target.divisible_by(p):
        raise ValueError("target is a multiple of p; use babbage")
    mod = p * p
    actual = binom(n * p, target, f)
    predicted = 0
    terms = {}
    if n >= 1:
        xbox = target // p
        g = _g_weights(p, xbox, f)
        row_p = build_table(f, target, p).rows[p]
        gtable = build_table(g, xbox, n - 1).rows[n - 1]
        for k in box_points(target):
            if k.is_zero() or not (target - k).divisible_by(p):
                continue
            a = int(row_p[tuple(k)])
            b = int(gtable[tuple((target - k) // p)])
            if a and b:
                terms[",".join(map(str, k))] = [str(a), str(b)]
                predicted += a * b
        predicted *= n
    return _report("non-multiple", mod, predicted, actual, value=str(actual), terms=terms)


def pn_row_congruence(p: int, n: int, f: WeightFunction) -> CongruenceReport:
    """``binom(p n, p * 1, f)`` mod ``p n`` from the unit-vector selections.

    Only partitions of the all-ones vector into ``k <= min(n, N)`` distinct
    0/1 parts survive, each with multinomial ``(pn)! / ((p!)^k (p(n-k))!)``.
    """
    _require_prime(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    dim = f.dim
    ones = MultiIndex.ones(dim)
    mod = p * n
    f0 = f(MultiIndex.zeros(dim))
    predicted = 0
    for k in range(1, min(n, dim) + 1):
        multinom = math.factorial(p * n) // (math.factorial(p) ** k * math.factorial(p * (n - k)))
        for vp in enumerate_partitions(ones, k=k):
            term = multinom * f0 ** (p * (n - k))
            for s, _ in vp.multiplicities:
                term *= f(s) ** p
            predicted += term
    actual = binom(p * n, ones * p, f)
    return _report("pn-row", mod, predicted, actual, value=str(actual))


# Sums over rows ------------------------------------------------------------

def glaisher(k: int, r: Sequence[int], m: Sequence[int], p: int, f: WeightFunction) -> CongruenceReport:
    """Bracket sums of rows ``k`` and ``k + p - 1`` agree mod ``p`` when ``p == 1 (mod m_i)``.

    Requires every ``m_i >= 1`` and ``r_i < m_i``: outside that range the
    congruence fails on small examples.
    """
    _require_prime(p)
    if k < 1:
        raise ValueError("k must be >= 1")
    r = _idx(r, f)
    m = _idx(m, f)
    for mi, ri in zip(m, r):
        if mi < 1:
            raise ValueError("every modulus m_i must be >= 1")
        if (p - 1) % mi:
            raise ValueError(f"p={p} is not 1 mod {mi}")
        if ri >= mi:
            raise ValueError(f"residue r_i={ri} must be below m_i={mi}")
    lhs = bracket_sum(k + p - 1, r, m, f)
    rhs = bracket_sum(k, r, m, f)
    return _report("glaisher", p, rhs, lhs, lhs=str(lhs), rhs=str(rhs))


def linear_recurrence_congruence(n: int, p: int, b: int, f: WeightFunction) -> CongruenceReport:
    """``c(n + m p^b) == sum_j f(j) c(n + (m-j) p^b) (mod p)`` for one-dimensional ``f``.

    ``m`` is the largest part with nonzero weight.
    """
    _require_prime(p)
    if f.dim != 1:
        raise ValueError("the recurrence congruence needs a one-dimensional weighting")
    if not f.finite:
        raise ValueError("weighting must vanish almost everywhere")
    if f((0,)):
        raise ValueError("f(0) must be 0")
    if n < 0 or b < 0:
        raise ValueError("n and b must be >= 0")
    m = f.max_part()[0]
    step = p**b
    top = n + m * step
    c = build_cf_values(top, f, p)
    lhs = c[top]
    rhs = sum(f((j,)) * c[n + (m - j) * step] for j in range(1, m + 1))
    return _report("recurrence", p, rhs, lhs, order=m)


def build_cf_values(top: int, f: WeightFunction, mod: int | None = None) -> list[int]:
    from .counting import cf_table

    table = cf_table((top,), f, mod)
    return [int(v) for v in table]


def razpet(a: int, b: int, c: int, digits: Sequence[Sequence[int]], p: int) -> CongruenceReport:
    """Lucas property of weighted Delannoy numbers.

    ``digits`` lists ``(a_k, b_k)`` pairs least significant first; the left
    side is computed by the generic engine, the right side from the closed
    form.
    """
    _require_prime(p)
    if not digits:
        raise ValueError("need at least one digit pair")
    for ak, bk in digits:
        if not (0 <= ak < p and 0 <= bk < p):
            raise ValueError(f"digit pair ({ak}, {bk}) out of range for p={p}")
    x = sum(ak * p**j for j, (ak, _) in enumerate(digits))
    y = sum(bk * p**j for j, (_, bk) in enumerate(digits))
    f = WeightFunction.explicit({(1, 0): a, (0, 1): b, (1, 1): c}, name="weighted-delannoy")
    lhs = c_f((x, y), f, mod=p)
    rhs = 1
    for ak, bk in digits:
        rhs = rhs * weighted_delannoy(a, b, c, ak, bk) % p
    return _report("razpet", p, rhs, lhs, target=[x, y])


# Prime criterion ----------------------------------------------------------

@dataclass(frozen=True)
class MannShanksResult:
    q: int
    dim: int
    witnesses: tuple[int, ...]

    @property
    def verdict(self) -> str:
        return "composite" if self.witnesses else "prime-consistent"

    def to_json(self) -> dict:
        return {"q": self.q, "dim": self.dim, "verdict": self.verdict, "witnesses": list(self.witnesses)}


def mann_shanks(q: int, dim: int, max_dim: int = 3) -> MannShanksResult:
    """Every ``m`` with ``0 < 2m <= q`` for which ``m`` does not divide ``binom(m, (q-2m)*1)``.

    Weights are 1 on ``{0,1}^dim``.  For ``dim = 1`` an empty witness list
    is equivalent to ``q`` being prime.
    """
    if q < 2 or dim < 1:
        raise ValueError("need q >= 2 and dim >= 1")
    if dim > max_dim:
        raise ValueError(f"dim {dim} exceeds cap {max_dim}")
    f = _cube_weights(dim)
    witnesses = []
    for m in range(2, q // 2 + 1):
        target = MultiIndex(((q - 2 * m),) * dim)
        if binom(m, target, f, mod=m) != 0:
            witnesses.append(m)
    return MannShanksResult(q, dim, tuple(witnesses))


@lru_cache(maxsize=None)
def _cube_weights(dim: int) -> WeightFunction:
    return WeightFunction.indicator(box_points((1,) * dim), name=f"cube{dim}")


# Theorem registry used by the CLI ------------------------------------------

def _t(params, key):
    return MultiIndex(params[key])


THEOREMS: dict[str, Callable[[dict, WeightFunction | None], CongruenceReport]] = {
    "parity": lambda q, f: check_parity(q["k"], _t(q, "target"), f),
    "prime-row": lambda q, f: check_prime_row(q["p"], _t(q, "target"), f),
    "babbage": lambda q, f: babbage(q["n"], q["p"], _t(q, "m"), f),
    "modp": lambda q, f: mod_p_reduction(q["n"], q["p"], _t(q, "m"), f),
    "prime-power": lambda q, f: check_prime_power_row(q["p"], q["e"], _t(q, "target"), f),
    "non-multiple": lambda q, f: non_multiple_row(q["n"], q["p"], _t(q, "target"), f),
    "divisibility": lambda q, f: check_divisibility(q["k"], _t(q, "target"), f),
    "pn-row": lambda q, f: pn_row_congruence(q["p"], q["n"], f),
    "lucas": lambda q, f: check_lucas(q["k"], _t(q, "target"), q["p"], f),
    "fast-modp": lambda q, f: check_fast_mod_p(q["k"], _t(q, "target"), q["p"], f),
    "glaisher": lambda q, f: glaisher(q["k"], _t(q, "r"), _t(q, "m"), q["p"], f),
    "recurrence": lambda q, f: linear_recurrence_congruence(q["n"], q["p"], q["b"], f),
    "razpet": lambda q, f: razpet(q["a"], q["b"], q["c"], q["digits"], q["p"]),
}
