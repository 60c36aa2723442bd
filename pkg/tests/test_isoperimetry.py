import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypercube_indsets.errors import DomainError, EnumerationLimitError
from hypercube_indsets.graph_core import build_hypercube, from_vertices, members, parse_vertex
from hypercube_indsets.isoperimetry import (
    SMALL_SET_CONSTANT,
    all_hamming_balls,
    boundary_ratio,
    check_small_set_expansion,
    even_ball_inner_radius,
    hamming_ball,
    layer_mask,
    layer_ratio,
    min_ball_neighborhood,
    min_neighborhood,
    star_ball,
)
from hypercube_indsets.structure import is_small


def vs(*bits):
    return from_vertices(parse_vertex(b) for b in bits)


# exhaustive minima of |N(A)| over even A of each size 0..2^{d-1}
MIN_NEIGHBORHOOD = {
    3: [0, 3, 4, 4, 4],
    4: [0, 4, 6, 7, 7, 8, 8, 8, 8],
    5: [0, 5, 8, 10, 11, 11, 13, 14, 14, 15, 15, 15, 16, 16, 16, 16, 16],
}


def test_hamming_ball_examples():
    q3 = build_hypercube(3)
    assert hamming_ball(3, "even", 1, 0) == vs("000")
    assert hamming_ball(3, "even", 4, 0) == q3.even
    assert hamming_ball(3, "even", 2, 0) == vs("000", "011")
    assert hamming_ball(3, "odd", 1, 0) == vs("001")
    with pytest.raises(DomainError):
        hamming_ball(3, "even", 5)
    with pytest.raises(DomainError):
        hamming_ball(3, "both", 1)


def test_boundary_ratio_examples():
    q2, q3 = build_hypercube(2), build_hypercube(3)
    assert boundary_ratio(q3, vs("000")) == Fraction(2, 3)
    assert boundary_ratio(q3, vs("000", "011")) == Fraction(1, 2)
    assert boundary_ratio(q2, vs("00")) == Fraction(1, 2)
    with pytest.raises(DomainError):
        boundary_ratio(q3, 0)


def test_min_neighborhood_examples():
    assert min_neighborhood(3, "even", 1)[0] == 3
    assert min_neighborhood(3, "even", 2) == (4, vs("000", "011"))
    assert min_neighborhood(4, "even", 2)[0] == 6
    with pytest.raises(EnumerationLimitError):
        min_neighborhood(6, "even", 3)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_min_neighborhood_frozen(d):
    got = [min_neighborhood(d, "even", s)[0] for s in range((1 << (d - 1)) + 1)]
    assert got == MIN_NEIGHBORHOOD[d]
    assert got == [min_ball_neighborhood(d, "even", s) for s in range((1 << (d - 1)) + 1)]


def test_min_neighborhood_minimiser_is_first():
    q4 = build_hypercube(4)
    best, arg = min_neighborhood(4, "even", 3)
    ev = members(q4.even)
    first = next(from_vertices(c) for c in itertools.combinations(ev, 3)
                 if q4.neighborhood(from_vertices(c)).bit_count() == best)
    assert arg == first


def test_sampled_mode_is_an_upper_bound():
    for d in (4, 5):
        for s in (1, 3, 6):
            exact = min_neighborhood(d, "even", s)[0]
            assert min_neighborhood(d, "even", s, mode="sampled", samples=200, seed=1)[0] >= exact
    best, arg = min_neighborhood(8, "even", 9, mode="sampled", samples=50)
    q8 = build_hypercube(8)
    assert arg.bit_count() == 9 and best == q8.neighborhood(arg).bit_count()
    assert best <= q8.neighborhood(star_ball(8, "even", 9)).bit_count()


def test_ball_variants():
    for d in (3, 4, 5):
        for s in range((1 << (d - 1)) + 1):
            assert star_ball(d, "even", s).bit_count() == s
    balls = list(all_hamming_balls(4, "even", 3))
    assert len(balls) == len(set(balls))
    assert hamming_ball(4, "even", 3, 0) in balls


def test_layer_ratio_examples():
    assert layer_ratio(5, 1) == (Fraction(1), Fraction(1))
    assert layer_ratio(4, 0) == (Fraction(1, 4), Fraction(1, 4))
    assert layer_ratio(6, 1) == (Fraction(15, 20), Fraction(3, 4))
    with pytest.raises(DomainError):
        layer_ratio(4, 2)


def test_layer_ratio_on_subsets():
    layer = layer_mask(6, 2)
    part = from_vertices(members(layer)[:5])
    ratio, bound = layer_ratio(6, 1, part)
    assert ratio <= bound
    with pytest.raises(DomainError):
        layer_ratio(6, 1, 1)


def test_small_set_expansion_examples():
    assert check_small_set_expansion(3, 1).max_ratio == Fraction(1, 3)
    assert check_small_set_expansion(4, 2).max_ratio == Fraction(1, 3)
    rep = check_small_set_expansion(4, 4)
    assert rep.max_ratio == Fraction(4, 7) and rep.mode == "exhaustive"
    assert rep.holds and rep.bound == SMALL_SET_CONSTANT / 4


@pytest.mark.parametrize("d", range(3, 10))
def test_small_set_constant(d):
    rep = check_small_set_expansion(d, d, samples=200, seed=d)
    assert rep.holds
    assert rep.max_ratio * d <= Fraction(16, 7)


def test_even_ball_inner_radius():
    assert even_ball_inner_radius(5, 1) == 0
    assert even_ball_inner_radius(5, 11) == 2
    assert even_ball_inner_radius(6, 1 + 15 + 15) == 4


@pytest.mark.parametrize("d", [3, 4, 5])
def test_quarter_radius_boundary_ratio(d):
    # sets no larger than 2^{d-2} whose even ball would have radius <= d/4
    cube = build_hypercube(d)
    ev = members(cube.even)
    checked = 0
    for s in range(1, (1 << (d - 2)) + 1):
        if even_ball_inner_radius(d, s) > d / 4:
            continue
        for combo in itertools.combinations(ev, s):
            assert boundary_ratio(cube, from_vertices(combo)) >= Fraction(1, 3)
            checked += 1
    assert checked > 0


@given(st.integers(2, 12), st.data())
def test_layer_ratio_property(d, data):
    i = data.draw(st.integers(0, (d - 1) // 2))
    ratio, bound = layer_ratio(d, i)
    assert ratio <= bound
    assert ratio == Fraction(math.comb(d, 2 * i), math.comb(d, 2 * i + 1))


@settings(max_examples=100)
@given(st.integers(2, 6), st.data())
def test_boundary_ratio_positive(d, data):
    cube = build_hypercube(d)
    ev = members(cube.even)
    A = from_vertices(data.draw(st.lists(st.sampled_from(ev), min_size=1, unique=True)))
    r = boundary_ratio(cube, A)
    if is_small(cube, A):
        assert r > 0
    assert 0 <= r < 1
