import random
import warnings

import pytest

from rigideq import (
    LinearCircuit,
    MultiPoly,
    PrimeField,
    circuit_matrix,
    embed_circuit,
    find_nonzero_point,
    poly_eval,
    universal_eval,
    universal_graph,
    universal_map,
)
from rigideq.lincircuit import (
    CircuitError,
    format_circuit,
    parse_circuit,
    topological_order,
    universal_map_bruteforce,
)

from conftest import random_poly


# ---------------------------------------------------------------- circuits


def test_circuit_matrix_single_edge(f101):
    c = LinearCircuit(f101, 1, 1, ((0, 1, 7),), (1,))
    assert circuit_matrix(c) == [[7]]


def test_circuit_matrix_parallel_paths(f101):
    # two parallel edges X1 -> v with labels a, b summing at v
    c = LinearCircuit(f101, 1, 1, ((0, 1, 30), (0, 1, 80)), (1,))
    assert circuit_matrix(c) == [[(30 + 80) % 101]]


def test_circuit_matrix_identity_wiring(f101):
    n = 3
    edges = tuple((i, n + i, 1) for i in range(n))
    c = LinearCircuit(f101, n, n, edges, tuple(range(n, 2 * n)))
    assert circuit_matrix(c) == [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def test_circuit_matrix_two_layers(f101):
    # v4 = 2*x0 + 3*x1; out2 = 5*v4; out3 = x0 + 7*v4
    edges = ((0, 4, 2), (1, 4, 3), (4, 2, 5), (0, 3, 1), (4, 3, 7))
    c = LinearCircuit(f101, 2, 2, edges, (2, 3))
    assert circuit_matrix(c) == [[10, 15], [(1 + 14) % 101, 21]]


def test_cycle_detected(f101):
    c = LinearCircuit(f101, 1, 1, ((1, 2, 1), (2, 1, 1)), (2,))
    with pytest.raises(CircuitError, match="cycle"):
        topological_order(c)


def test_circuit_validation(f101):
    with pytest.raises(CircuitError, match="input"):
        LinearCircuit(f101, 2, 1, ((2, 0, 1),), (2,))
    with pytest.raises(CircuitError):
        LinearCircuit(f101, 1, 2, ((0, 1, 1),), (1,))


def test_circuit_parse_format_round_trip(f101):
    text = "2 2\n0 4 2\n1 4 3\n4 2 5\n4 3 7\n2 3\n"
    c = parse_circuit(text, f101)
    assert c.n_inputs == 2 and c.size == 4 and c.outputs == (2, 3)
    assert parse_circuit(format_circuit(c), f101) == c


# ---------------------------------------------------------------- universal graph


def test_universal_graph_edge_count(f101):
    g = universal_graph(f101, 2, 2, L=2, w=2)
    # layers 2,2,2,2: 2*2 + 2*4 + 2*6 = 24 edges
    assert g.edge_count == 24
    assert g.sv_params.N == 24 and g.sv_params.k == 2
    # edge order: (target layer, target index, source layer, source index)
    assert g.edges[0] == ((0, 0), (1, 0))
    assert g.edges[1] == ((0, 1), (1, 0))
    assert g.edges[2] == ((0, 0), (1, 1))


def test_universal_graph_field_too_small():
    with pytest.raises(ValueError, match="field too small"):
        universal_graph(PrimeField(23), 2, 2, L=2, w=2)  # needs p > 24


def test_universal_graph_warns_when_too_small_for_budget(f101):
    with pytest.warns(UserWarning, match="cannot hold"):
        universal_graph(f101, 2, 5, L=2, w=2)  # w*L = 4 < s_budget = 5


@pytest.mark.filterwarnings("ignore:universal graph")
def test_universal_map_matches_bruteforce(f101):
    for n, s, L, w in [(1, 1, 1, 1), (2, 2, 1, 1), (2, 2, 2, 2)]:
        g = universal_graph(f101, n, s, L=L, w=w)
        dp = universal_map(g)
        bf = universal_map_bruteforce(g)
        assert dp.coordinates == bf.coordinates
        assert dp.label == f"universal({n},{s},{L},{w})"


def test_universal_map_single_path(f101):
    # n=1, L=1, w=1: paths X1 -> out (direct) and X1 -> v -> out
    g = universal_graph(f101, 1, 1, L=1, w=1)
    assert g.edge_count == 3
    um = universal_map(g)
    assert um.out_arity == 1


def test_universal_map_zero_at_x_zero(f101):
    rng = random.Random("lc:xzero")
    g = universal_graph(f101, 2, 2, L=2, w=2)
    um = universal_map(g)
    for _ in range(10):
        point = [0, 0] + [rng.randrange(f101.p) for _ in range(2)]
        assert um.evaluate(point) == [0, 0, 0, 0]


def test_universal_eval_matches_symbolic(f101):
    rng = random.Random("lc:ueval")
    g = universal_graph(f101, 2, 2, L=2, w=2)
    um = universal_map(g)
    for _ in range(20):
        xs = [rng.randrange(f101.p) for _ in range(2)]
        ys = [rng.randrange(f101.p) for _ in range(2)]
        mat = universal_eval(g, xs, ys)
        flat = um.evaluate(xs + ys)
        # coordinate order is row-major over (input i, output j)
        for i in range(2):
            for j in range(2):
                assert mat[i][j] == flat[i * 2 + j]


def test_embed_identity_circuit(f101):
    n = 2
    g = universal_graph(f101, n, n, L=2, w=2)
    edges = tuple((i, n + i, 1) for i in range(n))
    c = LinearCircuit(f101, n, n, edges, tuple(range(n, 2 * n)))
    xs, ys = embed_circuit(c, g)
    mat = universal_eval(g, xs, ys)
    # universal_eval entry [i][j] = coefficient of input i at output j
    want = circuit_matrix(c)
    assert [[mat[i][j] for i in range(n)] for j in range(n)] == want


def test_embed_random_circuits(f101):
    rng = random.Random("lc:embed")
    g = universal_graph(f101, 2, 4, L=2, w=2)
    for _ in range(20):
        # vertices: inputs 0,1; internals 4 (depth 1), 5 (depth <= 2); outputs 2,3
        edges = []
        internal_edges = [(0, 4), (1, 4), (0, 5), (1, 5), (4, 5)]
        out_edges = [(0, 2), (1, 2), (4, 2), (5, 2), (0, 3), (1, 3), (4, 3), (5, 3)]
        for cand in rng.sample(internal_edges, rng.randrange(0, 3)):
            edges.append((*cand, rng.randrange(1, f101.p)))
        for cand in rng.sample(out_edges, rng.randrange(0, 3)):
            edges.append((*cand, rng.randrange(1, f101.p)))
        if len(edges) > 4:
            edges = edges[:4]
        c = LinearCircuit(f101, 2, 2, tuple(edges), (2, 3))
        xs, ys = embed_circuit(c, g)
        mat = universal_eval(g, xs, ys)
        want = circuit_matrix(c)
        assert [[mat[i][j] for i in range(2)] for j in range(2)] == want


@pytest.mark.filterwarnings("ignore:universal graph")
def test_embed_rejects_misfits(f101):
    g = universal_graph(f101, 1, 2, L=1, w=1)
    # depth-2 chain cannot fit in L=1
    deep = LinearCircuit(f101, 1, 1, ((0, 2, 1), (2, 3, 1), (3, 1, 1)), (1,))
    with pytest.raises(CircuitError, match="does not fit"):
        embed_circuit(deep, g)
    big = LinearCircuit(f101, 1, 1, ((0, 1, 1), (0, 1, 2), (0, 1, 3)), (1,))
    with pytest.raises(CircuitError, match="does not fit"):
        embed_circuit(big, g)
    out_of_inputs = LinearCircuit(f101, 1, 1, (), (0,))
    with pytest.raises(CircuitError, match="input"):
        embed_circuit(out_of_inputs, g)


# ---------------------------------------------------------------- nonzero point


def test_find_nonzero_point_examples():
    F7 = PrimeField(7)
    q = MultiPoly.variable(F7, 2, 0) * MultiPoly.variable(F7, 2, 1) - MultiPoly.constant(F7, 2, 1)
    assert find_nonzero_point(q, 2) == (0, 0)  # q(0,0) = -1 != 0
    x1 = MultiPoly.variable(F7, 1, 0)
    assert find_nonzero_point(x1, 2) == (1,)


def test_find_nonzero_point_errors(f101):
    with pytest.raises(ValueError, match="zero polynomial"):
        find_nonzero_point(MultiPoly.zero(f101, 2), 3)
    q = MultiPoly.monomial(f101, (4, 0))
    with pytest.raises(ValueError, match="degree bound"):
        find_nonzero_point(q, 3)
    small = MultiPoly.variable(PrimeField(3), 1, 0)
    with pytest.raises(ValueError, match="field too small"):
        find_nonzero_point(small, 5)


def test_find_nonzero_point_property(f101):
    rng = random.Random("lc:nonzero")
    for _ in range(50):
        q = random_poly(rng, f101, rng.randrange(1, 6), 10)
        pt = find_nonzero_point(q, 10)
        assert all(0 <= a <= 10 for a in pt)
        assert poly_eval(q, pt) != 0
