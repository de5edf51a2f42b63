import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from veccomp.asymptotics import (
    GaussianModel,
    approximate,
    clt_approx,
    delannoy_diag_asymp,
    one_two_cube_diag_asymp,
    relative_error,
    uniform_moments,
    unit_cube_diag_asymp,
)
from veccomp.counting import binom, c_f, delannoy
from veccomp.model import WeightFunction

DELANNOY = [(0, 1), (1, 0), (1, 1)]
CUBE2 = WeightFunction.indicator(DELANNOY)


def numpy_density(points, k, x):
    """Independent oracle: float moments and a numpy solve."""
    arr = np.array(points, dtype=float)
    mu = arr.mean(axis=0) * k
    cov = np.atleast_2d(np.cov(arr.T, bias=True)) * k
    d = np.asarray(x, dtype=float) - mu
    n = len(mu)
    quad = d @ np.linalg.solve(cov, d)
    return len(points) ** k * math.exp(-quad / 2) / math.sqrt((2 * math.pi) ** n * np.linalg.det(cov))


def test_delannoy_moments_exact():
    g = uniform_moments(DELANNOY)
    assert g.mean == (Fraction(2, 3), Fraction(2, 3))
    assert g.covariance == ((Fraction(2, 9), Fraction(-1, 9)), (Fraction(-1, 9), Fraction(2, 9)))
    one = uniform_moments([(0,), (1,)])
    assert one.mean == (Fraction(1, 2),) and one.covariance == ((Fraction(1, 4),),)


@pytest.mark.parametrize("nu", [(1,), (2,), (1, 1), (2, 3), (1, 2, 1), (3, 1, 2)])
def test_box_determinant(nu):
    S = list(itertools.product(*(range(v + 1) for v in nu)))
    g = uniform_moments(S)
    expected = math.prod(((v + 1) ** 2 - 1) / 12 for v in nu)
    assert g.determinant() == pytest.approx(expected, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=4, max_size=9),
       st.integers(2, 12))
def test_density_matches_numpy(S, k):
    S = sorted(S)
    if abs(np.linalg.det(np.cov(np.array(S, dtype=float).T, bias=True))) < 1e-9:
        return
    x = tuple(float(sum(c) // len(S) * k) for c in zip(*S))
    got = clt_approx(k, x, S)
    assert got == pytest.approx(numpy_density(S, k, x), rel=1e-9)
    g = uniform_moments(S)
    assert g.covariance == tuple(zip(*g.covariance))
    assert all(g.covariance[i][i] >= 0 for i in range(2))


def test_high_dimension_falls_back_to_numpy():
    S = [s for s in itertools.product((0, 1), repeat=5) if sum(s) <= 2]
    x = [2.0] * 5
    assert clt_approx(6, x, S) == pytest.approx(numpy_density(S, 6, x), rel=1e-9)


def test_singular_covariance_rejected():
    with pytest.raises(ValueError):
        clt_approx(4, (2, 2), [(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        uniform_moments([])


def test_clt_examples():
    a15 = clt_approx(15, (10, 10), DELANNOY)
    assert binom(15, (10, 10), CUBE2) == 756756
    assert a15 == pytest.approx(791096.70, abs=0.01)
    assert relative_error(a15, 756756) < 0.05
    a18 = clt_approx(18, (12, 12), DELANNOY)
    assert binom(18, (12, 12), CUBE2) == 17153136
    assert a18 == pytest.approx(17799675.85, abs=0.02)
    assert relative_error(a18, 17153136) < 0.04


@pytest.mark.parametrize("k", [2, 6, 10, 40, 200])
def test_one_dimensional_form(k):
    assert clt_approx(k, (k // 2,), [(0,), (1,)]) == pytest.approx(
        2 ** (k + 1) / math.sqrt(2 * math.pi * k), rel=1e-12)


def test_clt_error_shrinks_along_mean_direction():
    errs = [relative_error(clt_approx(k, (2 * k // 3,) * 2, DELANNOY), binom(k, (2 * k // 3,) * 2, CUBE2))
            for k in (9, 12, 15, 18)]
    assert all(b <= a + 0.01 for a, b in zip(errs, errs[1:]))


def test_delannoy_asymptotic():
    assert relative_error(delannoy_diag_asymp(10), delannoy(10, 10)) < 0.02
    assert delannoy_diag_asymp(1) > 0
    errs = [relative_error(delannoy_diag_asymp(l), delannoy(l, l)) for l in (20, 40, 80)]
    assert errs[0] > errs[1] > errs[2]
    ratio = delannoy(61, 61) / delannoy(60, 60)
    assert ratio == pytest.approx(3 + 2 * math.sqrt(2), rel=0.01)


def test_unit_cube_reduces_to_delannoy_for_two_dims():
    for ell in (1, 5, 10):
        assert unit_cube_diag_asymp(ell, 2) == pytest.approx(delannoy_diag_asymp(ell), rel=1e-12)


@pytest.mark.parametrize("N,ells", [(2, (6, 8, 10)), (3, (4, 6, 8))])
def test_unit_cube_within_ten_percent(N, ells):
    f = WeightFunction.indicator([s for s in itertools.product((0, 1), repeat=N) if any(s)])
    errs = [relative_error(unit_cube_diag_asymp(l, N), c_f((l,) * N, f)) for l in ells]
    assert errs[-1] < 0.10
    assert errs[0] > errs[1] > errs[2]


def test_one_two_cube():
    fib = [0, 1]
    for _ in range(40):
        fib.append(fib[-1] + fib[-2])
    # {1,2}-compositions of ell are Fibonacci numbers F(ell+1)
    assert relative_error(one_two_cube_diag_asymp(20, 1), fib[21]) < 1e-6
    f2 = WeightFunction.indicator(list(itertools.product((1, 2), repeat=2)))
    errs = [relative_error(one_two_cube_diag_asymp(l, 2), c_f((l, l), f2)) for l in (8, 10, 12)]
    assert errs[-1] < 0.06 and errs[0] > errs[1] > errs[2]
    # value of the closed form at N=3, ell=9 (6.12% above the exact 17899)
    assert one_two_cube_diag_asymp(9, 3) == pytest.approx(18995.30, abs=0.01)


def test_relative_error_handles_huge_integers():
    exact = 10 ** 400
    assert relative_error(1.0, 2) == 0.5
    assert relative_error(float("1e300"), 10 ** 300) == pytest.approx(0.0, abs=1e-12)
    assert relative_error(-1.0, exact) == 1.0
    with pytest.raises(ValueError):
        relative_error(1.0, 0)


def test_approximate_envelope():
    out = approximate("clt", {"k": 15, "target": [10, 10]})
    assert out["exact"] == "756756" and out["rel_err"] < 0.05
    assert approximate("onetwo", {"ell": 9})["exact"] == "17899"
    assert "exact" not in approximate("unitcube", {"ell": 50, "N": 2}, exact=False)
    with pytest.raises(ValueError):
        approximate("nope", {})


def test_scaled_model_counts():
    g = GaussianModel((Fraction(1, 2),), ((Fraction(1, 4),),)).scaled(4, 2)
    assert g.scale == 16 and g.mean == (2,) and g.covariance == ((1,),)
