"""Gaussian and diagonal approximations for the exact counts.

Moments are exact rationals; floats appear only when a density or a
closed-form asymptotic is evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .counting import binom, c_f
from .model import MultiIndex, WeightFunction, box_points

__all__ = [
    "GaussianModel",
    "uniform_moments",
    "clt_approx",
    "delannoy_diag_asymp",
    "unit_cube_diag_asymp",
    "one_two_cube_diag_asymp",
    "relative_error",
    "approximate",
    "METHODS",
]

Matrix = tuple[tuple[Fraction, ...], ...]


def _det_inv_exact(a: Matrix) -> tuple[Fraction, Matrix]:
    """Determinant and inverse by Gauss-Jordan over the rationals."""
    n = len(a)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ValueError("covariance matrix is singular")
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        pv = m[c][c]
        det *= pv
        m[c] = [v / pv for v in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                factor = m[r][c]
                m[r] = [x - factor * y for x, y in zip(m[r], m[c])]
    return det, tuple(tuple(row[n:]) for row in m)


@dataclass(frozen=True)
class GaussianModel:
    """Mean, covariance and count scale of a sum of i.i.d. uniform draws."""

    mean: tuple[Fraction, ...]
    covariance: Matrix
    scale: int = 1

    @property
    def dim(self) -> int:
        return len(self.mean)

    def scaled(self, k: int, base: int) -> "GaussianModel":
        return GaussianModel(
            tuple(k * m for m in self.mean),
            tuple(tuple(k * v for v in row) for row in self.covariance),
            base**k,
        )

    def determinant(self) -> float:
        if self.dim <= 4:
            return float(_det_inv_exact(self.covariance)[0])
        return float(np.linalg.det(np.array(self.covariance, dtype=float)))

    def density(self, x: Sequence[float]) -> float:
        n = self.dim
        d = np.array([xi - float(mi) for xi, mi in zip(x, self.mean)])
        if n <= 4:
            det, inv = _det_inv_exact(self.covariance)
            det = float(det)
            inv = np.array(inv, dtype=float)
        else:
            cov = np.array(self.covariance, dtype=float)
            det = float(np.linalg.det(cov))
            if det == 0:
                raise ValueError("covariance matrix is singular")
            inv = np.linalg.inv(cov)
        if det <= 0:
            raise ValueError("covariance matrix is not positive definite")
        quad = float(d @ inv @ d)
        return (2 * math.pi) ** (-n / 2) * det**-0.5 * math.exp(-quad / 2)

    def count_approx(self, x: Sequence[float]) -> float:
        return self.scale * self.density(x)


def uniform_moments(S: Iterable[Sequence[int]]) -> GaussianModel:
    points = sorted({MultiIndex(s) for s in S})
    if not points:
        raise ValueError("S must be nonempty")
    n = len(points)
    dim = points[0].dim
    mean = tuple(Fraction(sum(p[i] for p in points), n) for i in range(dim))
    cov = tuple(
        tuple(Fraction(sum(p[i] * p[j] for p in points), n) - mean[i] * mean[j] for j in range(dim))
        for i in range(dim)
    )
    return GaussianModel(mean, cov)


def clt_approx(k: int, target: Sequence[int], S: Iterable[Sequence[int]]) -> float:
    """``|S|**k`` times the normal density with mean ``k mu`` and covariance ``k Sigma``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    S = {MultiIndex(s) for s in S}
    model = uniform_moments(S).scaled(k, len(S))
    return model.count_approx([float(t) for t in target])


def delannoy_diag_asymp(ell: int) -> float:
    if ell < 1:
        raise ValueError("ell must be >= 1")
    L = math.sqrt(2)
    x0 = L - 1
    return x0 ** (-2 * ell) * math.sqrt(1 / (L * (2 - L) ** 2 * 2 * math.pi * ell))


def unit_cube_diag_asymp(ell: int, N: int) -> float:
    """Diagonal asymptotic for the indicator on ``{0,1}^N`` without the origin."""
    if ell < 1 or N < 1:
        raise ValueError("ell and N must be >= 1")
    t = 2 ** (1 / N) - 1
    denom = t * 2 ** ((N * N - 1) / (2 * N)) * math.sqrt(N * (math.pi * ell) ** (N - 1))
    return t ** (-N * ell) / denom


def one_two_cube_diag_asymp(ell: int, N: int) -> float:
    """Diagonal asymptotic for the indicator on ``{1,2}^N``."""
    if ell < 1 or N < 1:
        raise ValueError("ell and N must be >= 1")
    phi = (math.sqrt(5) - 1) / 2
    A = -(phi ** (N - 1)) * (1 + phi) ** (N - 1) * (1 + 2 * phi)
    h = N * (phi / (1 + 3 * phi + 2 * phi**2)) ** (N - 1)
    b0 = 1 / (-phi * A * math.sqrt((2 * math.pi) ** (N - 1) * h))
    return phi ** (-ell * N) * b0 * ell ** ((1 - N) / 2)


def relative_error(approx: float, exact: int) -> float:
    """``|approx - exact| / exact``, safe for integers beyond float range."""
    if exact == 0:
        raise ValueError("exact value is zero")
    if approx <= 0:
        return abs(approx - exact) / exact if exact < 2**1000 else 1.0
    return abs(math.expm1(math.log(approx) - math.log(exact)))


# Exact counterparts -----------------------------------------------------------

def _cube(N: int) -> WeightFunction:
    return WeightFunction.indicator([s for s in box_points((1,) * N) if not s.is_zero()])


def _one_two(N: int) -> WeightFunction:
    return WeightFunction.indicator([tuple(c + 1 for c in s) for s in box_points((1,) * N)])


DELANNOY_STEPS = ((0, 1), (1, 0), (1, 1))


def _clt(params: dict) -> tuple[float, int | None]:
    S = [tuple(s) for s in params.get("S", DELANNOY_STEPS)]
    k, target = params["k"], params["target"]
    exact = binom(k, target, WeightFunction.indicator(S))
    return clt_approx(k, target, S), exact


def _delannoy(params: dict) -> tuple[float, int]:
    ell = params["ell"]
    return delannoy_diag_asymp(ell), c_f((ell, ell), _cube(2))


def _unitcube(params: dict) -> tuple[float, int]:
    ell, N = params["ell"], params.get("N", 2)
    return unit_cube_diag_asymp(ell, N), c_f((ell,) * N, _cube(N))


def _onetwo(params: dict) -> tuple[float, int]:
    ell, N = params["ell"], params.get("N", 3)
    return one_two_cube_diag_asymp(ell, N), c_f((ell,) * N, _one_two(N))


METHODS = {"clt": _clt, "delannoy": _delannoy, "unitcube": _unitcube, "onetwo": _onetwo}


def approximate(method: str, params: dict, exact: bool = True) -> dict:
    """Approximation plus, when requested, the exact count and relative error."""
    try:
        fn = METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None
    if not exact:
        approx = {
            "clt": lambda q: clt_approx(q["k"], q["target"], q.get("S", DELANNOY_STEPS)),
            "delannoy": lambda q: delannoy_diag_asymp(q["ell"]),
            "unitcube": lambda q: unit_cube_diag_asymp(q["ell"], q.get("N", 2)),
            "onetwo": lambda q: one_two_cube_diag_asymp(q["ell"], q.get("N", 3)),
        }[method](params)
        return {"approx": approx}
    approx, value = fn(params)
    return {"approx": approx, "exact": str(value), "rel_err": relative_error(approx, value)}
