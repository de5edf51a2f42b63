import itertools
import math
from functools import lru_cache

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from veccomp.counting import (
    absorption_check,
    andrews_cf,
    binom,
    binom_via_partitions,
    bracket_sum,
    build_table,
    c_f,
    cf_via_rows,
    delannoy,
    extract_part,
    row_sum,
    sequence,
    unit_cube_cf,
    vandermonde_split,
    weighted_delannoy,
    whitney,
    whitney_diagonal,
)
from veccomp.model import WeightFunction, box_points, preset


def sympy_binom(k, target, f):
    """Coefficient of x^target in (sum f(s) x^s)^k, by polynomial algebra."""
    xs = sympy.symbols(f"x0:{len(target)}")
    gen = sum(w * sympy.Mul(*[x**e for x, e in zip(xs, s)]) for s, w in f.support_within(target))
    poly = sympy.Poly(sympy.expand(gen**k), *xs) if gen != 0 else None
    if poly is None:
        return int(k == 0 and not any(target))
    return int(poly.coeff_monomial(sympy.Mul(*[x**e for x, e in zip(xs, target)])))


@lru_cache(maxsize=None)
def paths(m, n, steps):
    """Lattice paths from (0,0) to (m,n) with the given steps."""
    if (m, n) == (0, 0):
        return 1
    return sum(paths(m - a, n - b, steps) for a, b in steps if a <= m and b <= n)


# Reference values -------------------------------------------------------------------

@pytest.mark.parametrize("k,target,name,value", [
    (2, (1, 2), "intro", 4),
    (3, (3, 3), "ex170", 13),
    (5, (3, 6), "ex170", 80),
    (6, (3, 6), "ex170", 170),
    (8, (5, 9), "ex170", 4368),
    (3, (0, 3), "ex170", 1),
    (15, (10, 10), "delannoy", 756756),
    (18, (12, 12), "delannoy", 17153136),
    (12, (2, 3), "nonmultiple", 407880),
    (12, (9, 8), "divisibility", 44742060),
    (21, (20, 19, 18), "parity3", 7301700),
    (19, (3, 16, 2), "parity3", 8356358620683),
])
def test_binom_reference_values(k, target, name, value):
    assert binom(k, target, preset(name)) == value


def test_lemma_special_cases():
    f = preset("divisibility")  # f(0) = 1
    assert binom(0, (0, 0), f) == 1
    assert binom(0, (1, 0), f) == 0
    g = WeightFunction.explicit({(0, 0, 0): 3, (1, 0, 0): 1})
    assert binom(5, (0, 0, 0), g) == 3**5
    assert binom(1, (2, 1), preset("ex170")) == 1
    assert binom(1, (2, 2), preset("ex170")) == 0


@pytest.mark.parametrize("name,k,target", [
    ("intro", 3, (2, 2)), ("ex170", 4, (3, 4)), ("divisibility", 3, (2, 3)),
    ("nonmultiple", 4, (2, 2)), ("parity3", 3, (2, 1, 2)), ("product2", 3, (4, 3)),
])
def test_binom_matches_polynomial_power(name, k, target):
    f = preset(name)
    assert binom(k, target, f) == sympy_binom(k, target, f)


@given(st.integers(0, 12), st.integers(0, 12))
def test_one_dimensional_binomial(k, l):
    f = WeightFunction.indicator([(0,), (1,)])
    assert binom(k, (l,), f) == math.comb(k, l)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["intro", "ex170", "divisibility", "nonmultiple", "product2"]),
       st.integers(0, 7), st.tuples(st.integers(0, 5), st.integers(0, 5)), st.integers(2, 30))
def test_modular_path_agrees_with_exact(name, k, target, mod):
    f = preset(name)
    assert binom(k, target, f, mod=mod) == binom(k, target, f) % mod


def test_bad_modulus_and_dimension():
    with pytest.raises(ValueError):
        binom(2, (1, 2), preset("intro"), mod=1)
    with pytest.raises(ValueError):
        binom(2, (1, 2, 3), preset("intro"))


def test_table_rows_follow_the_recurrence():
    f = preset("ex170")
    t = build_table(f, (4, 4), 5)
    assert t.value(0, (0, 0)) == 1 and t.value(0, (1, 0)) == 0
    for k in range(1, 6):
        for l in box_points((4, 4)):
            expect = sum(w * t.value(k - 1, l - s) for s, w in f.support_within(l))
            assert t.value(k, l) == expect


# Identities ---------------------------------------------------------------------

@pytest.mark.parametrize("name,k,target", [
    ("intro", 2, (1, 2)), ("ex170", 3, (0, 3)), ("divisibility", 4, (3, 2)),
    ("nonmultiple", 5, (2, 3)), ("parity3", 4, (2, 2, 1)), ("product2", 4, (4, 4)),
])
def test_partition_form(name, k, target):
    f = preset(name)
    assert binom_via_partitions(k, target, f) == binom(k, target, f)


def test_partition_form_single_part():
    f = preset("ex170")
    for x in box_points((3, 3)):
        assert binom_via_partitions(1, x, f) == f(x)


def test_vandermonde_examples():
    f = preset("ex170")
    assert vandermonde_split((3, 3), (3, 6), f) == 170
    assert vandermonde_split((2, 2), (2, 2), preset("delannoy")) == binom(4, (2, 2), preset("delannoy"))
    with pytest.raises(ValueError):
        vandermonde_split((), (1, 1), f)


def test_vandermonde_one_split_is_the_recurrence():
    f = preset("intro")
    for l in box_points((3, 3)):
        rec = sum(w * binom(3, l - s, f) for s, w in f.support_within(l))
        assert vandermonde_split((1, 3), l, f) == rec


def test_row_four_at_two_two_brute_force():
    # compositions of (2,2) into four parts from {(0,1),(1,0),(1,1)}: only the
    # arrangements of two (1,0) and two (0,1)
    f = preset("delannoy")
    parts = [(0, 1), (1, 0), (1, 1)]
    brute = sum(1 for seq in itertools.product(parts, repeat=4)
                if tuple(map(sum, zip(*seq))) == (2, 2))
    assert brute == 6 == vandermonde_split((2, 2), (2, 2), f)


def test_absorption_examples():
    assert absorption_check(2, (1, 2), preset("intro"), 1) == ((4, 8), (4, 8))
    lhs, rhs = absorption_check(12, (9, 8), preset("divisibility"), 1)
    assert lhs == rhs == (9 * 44742060, 8 * 44742060)
    assert absorption_check(3, (0, 0), preset("ex170"), 2) == ((0, 0), (0, 0))
    with pytest.raises(ValueError):
        absorption_check(2, (1, 2), preset("intro"), 3)


def test_absorption_rhs_is_rational_scaled():
    lhs, rhs = absorption_check(5, (3, 4), preset("ex170"), 3)
    assert all(isinstance(v, int) for v in rhs)
    assert lhs == rhs


def test_extract_part_examples():
    assert extract_part(3, (3, 3), preset("ex170"), (1, 1)) == 13
    assert extract_part(2, (1, 2), preset("intro"), (1, 1)) == 4
    # the i = 0 term vanishes, so the i = 1 term 2 * f((1,1)) * binom(1, (0,1)) carries all 4
    g = preset("intro").without((1, 1))
    assert binom(2, (1, 2), g) == 0
    assert extract_part(3, (2, 2), preset("intro"), (5, 5)) == binom(3, (2, 2), preset("intro"))


# c_f and closed forms ------------------------------------------------------------

def test_cf_reference_values():
    assert c_f((1, 2), preset("intro")) == 7
    assert c_f((9, 9, 9), preset("onetwo3")) == 17899
    prod = WeightFunction.product(2)
    assert [c_f((l, l), prod) for l in range(1, 9)] == [1, 5, 26, 153, 931, 5794, 36631, 234205]


def test_cf_rejects_zero_part():
    with pytest.raises(ValueError):
        c_f((1, 1), preset("divisibility"))


@pytest.mark.parametrize("name,target", [
    ("intro", (3, 2)), ("delannoy", (4, 4)), ("ex170", (3, 5)), ("whitney", (5, 6)),
    ("unitcube3", (2, 3, 2)), ("product2", (3, 3)), ("fibonacci", (9,)),
])
def test_cf_is_sum_over_rows(name, target):
    f = preset(name)
    assert c_f(target, f) == cf_via_rows(target, f)
    assert c_f(target, f, mod=7) == c_f(target, f) % 7


def test_fibonacci_and_delannoy_by_paths():
    f = preset("fibonacci")
    fib = [1, 1]
    for _ in range(20):
        fib.append(fib[-1] + fib[-2])
    assert [c_f((n,), f) for n in range(20)] == fib[:20]
    steps = ((0, 1), (1, 0), (1, 1))
    wsteps = ((1, 1), (1, 2), (2, 1), (2, 2))
    for m, n in itertools.product(range(13), repeat=2):
        assert delannoy(m, n) == paths(m, n, steps) == c_f((m, n), preset("delannoy"))
        assert whitney(m, n) == paths(m, n, wsteps) == c_f((m, n), preset("whitney"))


def test_whitney_diagonal_and_a051286():
    expect = [1, 2, 5, 11, 26, 63, 153, 376, 931, 2317, 5794, 14545, 36631, 92512, 234205]
    assert [whitney_diagonal(n) for n in range(1, 16)] == expect
    assert sequence("whitney", 15) == expect


def test_whitney_general_form_differs_from_diagonal_formula_off_diagonal():
    # the diagonal-only formula sum C(m-k,k) C(n-k,k) gives 1 at (1, 0)
    naive = sum(math.comb(1 - k, k) * math.comb(0 - k, k) for k in range(1) if 0 - k >= 0)
    assert naive == 1 and whitney(1, 0) == 0 == paths(1, 0, ((1, 1), (1, 2), (2, 1), (2, 2)))


@pytest.mark.parametrize("a,b,c", [(1, 1, 1), (2, 3, 1), (1, 2, 3), (3, 1, 2)])
def test_weighted_delannoy_matches_engine(a, b, c):
    f = WeightFunction.explicit({(1, 0): a, (0, 1): b, (1, 1): c})
    for m, n in itertools.product(range(9), repeat=2):
        assert weighted_delannoy(a, b, c, m, n) == c_f((m, n), f)


def test_unit_cube_and_andrews_forms():
    for N in (1, 2, 3):
        cube = WeightFunction.indicator([s for s in box_points((1,) * N) if any(s)])
        for l in box_points((3,) * N):
            assert unit_cube_cf(l) == c_f(l, cube)
        for l in range(1, 6):
            assert andrews_cf((l,) * N) == 2 ** (l - 1) * unit_cube_cf((l,) * N)
    assert delannoy(1, 1) == 3


def test_andrews_against_all_nonzero_parts():
    for N in (1, 2, 3):
        f = WeightFunction.custom(N, lambda s: int(any(s)))
        for l in box_points((3,) * N if N < 3 else (2, 2, 2)):
            assert andrews_cf(l) == c_f(l, f)


def test_delannoy_second_closed_form():
    for m, n in itertools.product(range(10), repeat=2):
        alt = sum(math.comb(n, d) * math.comb(m + n - d, n) for d in range(n + 1))
        assert delannoy(m, n) == alt


def test_scolor_sequence_equals_one_two_diagonal():
    s = sequence("scolor", 6)
    assert s == [1, 5, 26, 153, 931, 5794]
    g = preset("whitney")
    assert s == [c_f((2 * l - 1,) * 2, g) for l in range(1, 7)]
    g3 = preset("onetwo3")
    assert sequence("scolor", 4, dim=3) == [c_f((2 * l - 1,) * 3, g3) for l in range(1, 5)]
    with pytest.raises(ValueError):
        sequence("nope", 3)


# Bracket and row sums -------------------------------------------------------------

def test_bracket_sum_reference_values():
    f = preset("delannoy")
    assert bracket_sum(2, (1, 0), (4, 1), f) == 4
    assert bracket_sum(6, (1, 0), (4, 1), f) == 204


def test_bracket_sum_against_direct_lattice_sum():
    f = preset("ex170")
    for k, r, m in [(3, (1, 2), (2, 3)), (4, (0, 1), (0, 2)), (2, (2, 0), (3, 0)), (5, (0, 0), (1, 1))]:
        box = (k * 2, k * 2)
        direct = sum(binom(k, l, f) for l in box_points(box)
                     if all((li == ri) if mi == 0 else (li >= ri and (li - ri) % mi == 0)
                            for li, ri, mi in zip(l, r, m)))
        assert bracket_sum(k, r, m, f) == direct


@pytest.mark.parametrize("k", range(6))
def test_row_sum_is_power_of_total_weight(k):
    for name in ("delannoy", "intro", "divisibility", "parity3"):
        f = preset(name)
        rs = row_sum(k, f)
        assert rs.closed_form == rs.direct == f.total_weight() ** k
        assert bracket_sum(k, (0,) * f.dim, (1,) * f.dim, f) == rs.closed_form
    assert row_sum(1, preset("delannoy")).direct == 3
    assert row_sum(2, preset("delannoy")).direct == 9


def test_row_sum_requires_finite_support():
    with pytest.raises(ValueError):
        row_sum(2, WeightFunction.product(2))
