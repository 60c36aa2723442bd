import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hypercube_indsets.errors import (
    BipartitenessError,
    GraphParseError,
    NoPathError,
    RegularityError,
    SizeLimitError,
)
from hypercube_indsets.graph_core import (
    RegularBipartiteGraph,
    build_hypercube,
    co_degree,
    complete_bipartite,
    distance,
    dump_graph,
    format_vertex,
    from_vertices,
    load_graph,
    members,
    nabla,
    neighborhood,
    parse_vertex,
    random_regular_bipartite,
)


def vs(*bits):
    return from_vertices(parse_vertex(b) for b in bits)


def test_vertex_strings():
    assert parse_vertex("011") == 3
    assert format_vertex(3, 3) == "011"
    assert format_vertex(parse_vertex("1010"), 4) == "1010"


def test_small_cubes():
    q1 = build_hypercube(1)
    assert q1.n == 2 and q1.num_edges() == 1
    assert q1.even.bit_count() == q1.odd.bit_count() == 1
    q2 = build_hypercube(2)
    assert q2.even == vs("00", "11") and q2.odd == vs("01", "10")
    assert co_degree(build_hypercube(3)) == 2


@pytest.mark.parametrize("d", [0, 21, -1])
def test_dimension_limits(d):
    with pytest.raises(SizeLimitError):
        build_hypercube(d)


def test_neighborhood_examples():
    q3 = build_hypercube(3)
    assert neighborhood(q3, vs("000")) == vs("001", "010", "100")
    assert neighborhood(q3, 0) == 0
    assert neighborhood(build_hypercube(2), vs("00", "11")) == vs("01", "10")


def test_distance_examples():
    q3, q4 = build_hypercube(3), build_hypercube(4)
    assert distance(q3, 0, 7) == 3
    assert distance(q3, 0, 0) == 0
    assert distance(q4, 0, parse_vertex("0011")) == 2


def test_distance_disconnected():
    # two disjoint edges: X = {0, 1}, Y = {2, 3}
    g = RegularBipartiteGraph([[2], [3], [0], [1]], 0b0011)
    assert g.distance(0, 2) == 1
    with pytest.raises(NoPathError):
        g.distance(0, 3)


def test_nabla_examples():
    q3, q2 = build_hypercube(3), build_hypercube(2)
    assert nabla(q3, vs("000"), q3.odd).count == 3
    assert nabla(q3, q3.even, q3.odd).count == 12
    assert nabla(q2, vs("00"), vs("11")).count == 0
    assert nabla(q3, vs("000"), q3.odd, with_edges=True).edges == ((0, 1), (0, 2), (0, 4))


@pytest.mark.parametrize("d", range(2, 7))
def test_codegree_hypercube(d):
    assert co_degree(build_hypercube(d)) == 2


def test_codegree_others():
    assert co_degree(complete_bipartite(3)) == 3
    assert co_degree(build_hypercube(1)) == 0
    assert co_degree(build_hypercube(2)) == 2


def test_generic_graph_matches_hypercube():
    cube = build_hypercube(5)
    generic = RegularBipartiteGraph(cube.adjacency, cube.even)
    rng = np.random.default_rng(1)
    for _ in range(50):
        A = int(rng.integers(0, 1 << 32))
        B = int(rng.integers(0, 1 << 32))
        assert generic.neighborhood(A) == cube.neighborhood(A)
        assert generic.incidences(A, B) == cube.incidences(A, B)
        for k in range(0, 7):
            assert generic.at_least(B, k) == cube.at_least(B, k)
    assert co_degree(generic) == 2


def test_validation_rejects_bad_adjacency():
    with pytest.raises(BipartitenessError):
        RegularBipartiteGraph([[1], [0]], 0b11)
    with pytest.raises(RegularityError):
        RegularBipartiteGraph([[2, 2], [3, 3], [0, 0], [1, 1]], 0b0011)
    with pytest.raises(RegularityError):
        RegularBipartiteGraph([[2], [3], [1], [0]], 0b0011)


@pytest.mark.parametrize("n,d", [(3, 1), (6, 2), (6, 5), (12, 6), (24, 10), (5, 5)])
def test_random_regular_bipartite(n, d):
    g = random_regular_bipartite(n, d, np.random.default_rng(n * 31 + d))
    assert g.n == 2 * n and g.degree == d
    assert g.class_x.bit_count() == n


# ---------------------------------------------------------------- file format

Q2_TEXT = """# the 4-cycle
bipartite 2 2 2
0 2
0 3
1 2
1 3
"""


def test_load_round_trip(tmp_path):
    path = tmp_path / "q2.txt"
    path.write_text(Q2_TEXT)
    g = load_graph(path)
    assert g.n == 4 and g.num_edges() == 4 and g.degree == 2
    out = tmp_path / "again.txt"
    dump_graph(g, out)
    assert load_graph(out).adjacency.tolist() == g.adjacency.tolist()


@pytest.mark.parametrize("text,error,line", [
    ("bipartite 2 2 2\n0 2\n0 3\n1 2\n", RegularityError, 4),
    ("bipartite 2 2 2\n0 1\n", BipartitenessError, 2),
    ("bipartite 2 2 2\n0 2\n0 2\n", RegularityError, 3),
    ("bipartite 2 2 3\n", RegularityError, 1),
    ("graph 2 2 2\n", GraphParseError, 1),
    ("bipartite 1 1 1\n0 x\n", GraphParseError, 2),
    ("bipartite 1 1 1\n0 7\n", GraphParseError, 2),
    ("", GraphParseError, 1),
])
def test_load_errors_carry_line(tmp_path, text, error, line):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(error) as info:
        load_graph(path)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


# ---------------------------------------------------------------- properties

dims = st.integers(min_value=1, max_value=6)


@st.composite
def cube_and_sets(draw):
    d = draw(dims)
    n = 1 << d
    A = draw(st.integers(min_value=0, max_value=(1 << n) - 1))
    B = draw(st.integers(min_value=0, max_value=(1 << n) - 1))
    return d, A, B


@given(cube_and_sets())
def test_neighborhood_matches_oracle(case):
    d, A, _ = case
    g = build_hypercube(d)
    assert set(members(g.neighborhood(A))) == oracles.nbhd(d, members(A))


@given(cube_and_sets())
def test_neighborhood_size_bound(case):
    d, A, _ = case
    g = build_hypercube(d)
    NA = g.neighborhood(A).bit_count()
    assert NA <= d * A.bit_count()
    disjoint = all(not (g.neighbor_mask(u) & g.neighbor_mask(w))
                   for u in members(A) for w in members(A) if u < w)
    assert (NA == d * A.bit_count()) == disjoint


@given(cube_and_sets())
def test_neighborhood_monotone(case):
    d, A, B = case
    g = build_hypercube(d)
    assert g.neighborhood(A & B) & ~g.neighborhood(A) == 0


@given(dims, st.data())
def test_distance_is_hamming(d, data):
    g = build_hypercube(d)
    u = data.draw(st.integers(0, g.n - 1))
    v = data.draw(st.integers(0, g.n - 1))
    assert g.distance(u, v) == (u ^ v).bit_count()
    assert RegularBipartiteGraph.distance(g, u, v) == (u ^ v).bit_count()


@given(dims)
def test_classes_are_independent(d):
    g = build_hypercube(d)
    assert g.neighborhood(g.even) & g.even == 0
    assert g.neighborhood(g.odd) & g.odd == 0


@given(cube_and_sets())
def test_nabla_identity(case):
    d, A, _ = case
    g = build_hypercube(d)
    inside = sum(1 for u in members(A) for w in members(g.neighbor_mask(u) & A) if u < w)
    assert nabla(g, A, g.full & ~A).count + 2 * inside == d * A.bit_count()


@given(cube_and_sets())
def test_at_least_matches_counts(case):
    d, _, B = case
    g = build_hypercube(d)
    counts = [len(oracles.cube_nbrs(d, v) & set(members(B))) for v in range(g.n)]
    for k in range(d + 2):
        assert members(g.at_least(B, k)) == [v for v in range(g.n) if counts[v] >= k]


@settings(max_examples=30)
@given(st.integers(2, 10), st.data())
def test_random_graphs_are_regular_bipartite(n, data):
    d = data.draw(st.integers(1, n))
    seed = data.draw(st.integers(0, 2**32 - 1))
    g = random_regular_bipartite(n, d, np.random.default_rng(seed))
    assert all(len(g.neighbors(v)) == d for v in range(g.n))
    assert g.neighborhood(g.class_x) & g.class_x == 0
