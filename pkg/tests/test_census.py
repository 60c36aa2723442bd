import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hypercube_indsets.census import (
    DyadicRational,
    LogValue,
    asymptotic_estimate,
    count_graph_independent_sets,
    count_independent_sets,
    f_k,
    f_k_lower,
    lower_bound_assembly,
    ratio_table,
    sap_sum,
    upper_bound_check,
)
from hypercube_indsets.errors import DomainError, EnumerationLimitError
from hypercube_indsets.graph_core import (
    build_hypercube,
    complete_bipartite,
    random_regular_bipartite,
)

COUNTS = {1: 3, 2: 7, 3: 35, 4: 743, 5: 254475}
COUNT_D6 = 19768832143


def brute_independent_sets(g):
    edges = [(u, w) for u in range(g.n) for w in g.neighbors(u) if u < w]
    return sum(1 for m in range(1 << g.n)
               if all(not (m >> u & 1 and m >> w & 1) for u, w in edges))


# ---------------------------------------------------------------- number types

def test_dyadic_normalises():
    assert DyadicRational(6, 2) == DyadicRational(3, 1)
    assert DyadicRational(0, 5) == DyadicRational(0, 0)
    assert str(DyadicRational(3, 1)) == "3/2^1"
    assert str(DyadicRational(4, 0)) == "4/2^0"
    with pytest.raises(DomainError):
        DyadicRational(1, -1)
    with pytest.raises(DomainError):
        DyadicRational.from_fraction(Fraction(1, 3))


@given(st.integers(-10**6, 10**6), st.integers(0, 40),
       st.integers(-10**6, 10**6), st.integers(0, 40))
def test_dyadic_arithmetic(p, q, r, s):
    x, y = DyadicRational(p, q), DyadicRational(r, s)
    fx, fy = Fraction(p, 2**q), Fraction(r, 2**s)
    assert (x + y).to_fraction() == fx + fy
    assert (x * y).to_fraction() == fx * fy
    assert DyadicRational.parse(str(x)) == x
    assert DyadicRational.from_fraction(fx) == x


def test_log_value_basics():
    assert LogValue.from_int(0).sign == 0
    assert float(LogValue.from_int(1024)) == 1024.0
    assert float(LogValue.from_int(-5)) == pytest.approx(-5.0)
    assert LogValue.power_of_two(3) == LogValue.from_int(8)
    assert float(LogValue.from_int(5) - LogValue.from_int(5)) == 0.0
    assert LogValue.from_int(-3) < LogValue.from_int(0) < LogValue.from_int(2)
    assert LogValue.from_int(3).ratio(LogValue.from_int(4)) == pytest.approx(0.75)


@given(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9))
def test_log_value_matches_integers(a, b):
    la, lb = LogValue.from_int(a), LogValue.from_int(b)
    assert float(la + lb) == pytest.approx(a + b, rel=1e-12, abs=1e-6)
    assert float(la - lb) == pytest.approx(a - b, rel=1e-12, abs=1e-6)
    assert float(la * lb) == pytest.approx(a * b, rel=1e-12)
    assert (la < lb) == (a < b)


def test_log_value_huge_exponents():
    big = LogValue.power_of_two(2**40)
    total = big + LogValue.power_of_two(2**40 - 1)
    with mpmath.workprec(128):
        assert abs(total.log2 - (2**40 + mpmath.log(1.5, 2))) < mpmath.mpf(2) ** -80
    assert (big - big).sign == 0


# ---------------------------------------------------------------- counts

@pytest.mark.parametrize("method", ["exact", "branch", "pairs"])
def test_counts_by_method(method):
    for d, want in COUNTS.items():
        assert count_independent_sets(d, method) == want


def test_sides_method():
    for d, want in COUNTS.items():
        assert count_independent_sets(d, "sides") == want


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_counts_against_brute_force(d):
    assert count_independent_sets(d) == oracles.independent_set_count(d)


@pytest.mark.slow
def test_extended_d6():
    assert count_independent_sets(6, "pairs", extended=True) == COUNT_D6
    assert count_independent_sets(6, "branch", extended=True) == COUNT_D6


def test_count_limits():
    with pytest.raises(DomainError):
        count_independent_sets(6)
    with pytest.raises(DomainError):
        count_independent_sets(6, "sides", extended=True)
    with pytest.raises(DomainError):
        count_independent_sets(7, extended=True)
    with pytest.raises(DomainError):
        count_independent_sets(3, "magic")
    with pytest.raises(DomainError):
        count_independent_sets(0)


def test_generic_graph_counts():
    assert count_graph_independent_sets(complete_bipartite(3)) == 2 * 2**3 - 1
    q3 = build_hypercube(3)
    assert count_graph_independent_sets(q3, q3.even) == 16
    assert count_graph_independent_sets(q3, 0) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1), st.data())
def test_generic_counts_against_brute_force(n, seed, data):
    d = data.draw(st.integers(1, n))
    g = random_regular_bipartite(n, d, np.random.default_rng(seed))
    assert count_graph_independent_sets(g) == brute_independent_sets(g)


def test_count_budget():
    with pytest.raises(EnumerationLimitError):
        count_graph_independent_sets(build_hypercube(5), budget=10)


# ---------------------------------------------------------------- small-set sum

def test_sap_sum_values():
    assert sap_sum(1).to_fraction() == 1
    assert sap_sum(2).to_fraction() == 1
    assert str(sap_sum(3)) == "3/2^1"
    for d in (1, 2, 3, 4):
        assert sap_sum(d).to_fraction() == oracles.small_set_sum(d)


def test_sap_sum_sandwich():
    for d in range(1, 6):
        s = sap_sum(d).to_fraction()
        top = 2 ** 2 ** (d - 1)
        assert top <= COUNTS[d] <= 2 * s * top
        assert upper_bound_check(d)
    with pytest.raises(DomainError):
        sap_sum(6)


# ---------------------------------------------------------------- f(k)

@pytest.mark.parametrize("d", [3, 4, 5])
def test_f_k_against_oracle(d):
    for k in range(0, 4):
        assert f_k(d, k) == oracles.f_count(d, k)
        assert f_k_lower(d, k) == oracles.f_lower(d, k)
        assert f_k(d, k) >= f_k_lower(d, k)


def test_f_k_closed_forms_match_enumeration():
    for d in range(3, 9):
        half = 2 ** (d - 1)
        far = half - 1 - math.comb(d, 2)
        assert f_k(d, 2) == half * far // 2
        assert f_k(d, 1) == half and f_k(d, 0) == 1


def test_f_k_larger_dimensions():
    for d, k in [(7, 3), (8, 3)]:
        assert f_k(d, k) >= f_k_lower(d, k) > 0


def test_f_k_limits():
    with pytest.raises(EnumerationLimitError):
        f_k(13, 3)
    with pytest.raises(EnumerationLimitError):
        f_k(8, 4, budget=100)
    with pytest.raises(DomainError):
        f_k(4, -1)


def test_f_k_lower_index_shift():
    assert f_k_lower(4, 2) == 4
    # with j - 1 the first factor exceeds 2^{d-1}, giving more than f_k itself
    assert f_k_lower(4, 2, literal=True) == 60
    assert f_k_lower(4, 2, literal=True) > f_k(4, 2)
    assert f_k_lower(3, 3) == 0


# ---------------------------------------------------------------- bounds

def test_asymptotic_values():
    assert float(asymptotic_estimate(1)) == pytest.approx(2 * math.sqrt(math.e) * 2, rel=1e-12)
    with mpmath.workprec(128):
        assert abs(asymptotic_estimate(3).log2 - mpmath.mpf("5.72134752044448170")) < 1e-15
        assert abs(asymptotic_estimate(10).log2 - mpmath.mpf("513.72134752044448170")) < 1e-12
    with pytest.raises(DomainError):
        asymptotic_estimate(0)


def test_ratio_table():
    rows = ratio_table(5)
    assert [d for d, _ in rows] == [1, 2, 3, 4, 5]
    for d, r in rows:
        want = COUNTS[d] / (2 * math.sqrt(math.e) * 2 ** 2 ** (d - 1))
        assert r == pytest.approx(want, rel=1e-12)
    assert rows[-1][1] > rows[-2][1]


def test_lower_bound_sign_by_dimension():
    # 2^{2d^2} swamps the main term exactly for 2 <= d <= 7
    for d in range(1, 12):
        rep = lower_bound_assembly(d)
        assert rep.correction_dominates == (2 <= d <= 7)
        assert rep.value.sign == (-1 if 2 <= d <= 7 else 1)


def test_lower_bound_report_fields():
    rep = lower_bound_assembly(14)
    assert not rep.correction_dominates
    want = sum((oracles.f_lower(14, k) / 2 ** (14 * k) for k in range(15)), Fraction(0))
    assert rep.main_sum == want
    assert 0.9 < rep.ratio_to_asymptotic < 1.0
    with pytest.raises(DomainError):
        lower_bound_assembly(31)


def test_lower_bound_tends_to_asymptotic():
    ratios = [lower_bound_assembly(d).ratio_to_asymptotic for d in (14, 18, 22, 26, 30)]
    assert ratios == sorted(ratios)
    assert 1 - ratios[-1] < 1e-3
