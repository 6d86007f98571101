import itertools

import pytest
from hypothesis import given, strategies as st

from oracles import brute_copies, naive_min_mono
from randramsey.arrowing import (
    SearchBudgetExceeded, arrows, arrows_lambda, color_rich_graph, min_mono_copies, mono_copies,
    rich_pairs, robust_min_mono,
)
from randramsey.graphs import (
    BLUE, RED, EdgeColoring, Graph, Pattern, PatternError, complete_graph, cycle_graph,
    empty_graph, path_graph, single_edge,
)

K3 = Pattern(complete_graph(3))
P3 = Pattern(path_graph(3))
E3 = Pattern(single_edge(3))


def pentagon_split() -> EdgeColoring:
    G = complete_graph(5)
    return EdgeColoring.from_map(G, {e: RED if (e[1] - e[0]) in (1, 4) else BLUE for e in G.edges})


def random_graph(n, bits):
    pairs = list(itertools.combinations(range(n), 2))
    return Graph(n, tuple(p for p, b in zip(pairs, bits) if b))


# mono copies ---------------------------------------------------------------------

def test_mono_copies_all_red_K6():
    G = complete_graph(6)
    assert mono_copies(G, K3, EdgeColoring.constant(G, RED)) == (20, 0)


def test_mono_copies_pentagon_pentagram():
    assert mono_copies(complete_graph(5), K3, pentagon_split()) == (0, 0)


@given(st.lists(st.integers(0, 1), min_size=6, max_size=6))
def test_every_edge_copy_is_monochromatic(cols):
    G = complete_graph(4)
    red, blue = mono_copies(G, E3, EdgeColoring(G, tuple(cols)))
    assert red + blue == 12


@given(st.lists(st.integers(0, 1), min_size=10, max_size=10))
def test_color_swap_swaps_counts(cols):
    G = complete_graph(5)
    chi = EdgeColoring(G, tuple(cols))
    r, b = mono_copies(G, K3, chi)
    assert mono_copies(G, K3, chi.swapped()) == (b, r)


def test_mono_copies_needs_edges():
    G = complete_graph(3)
    with pytest.raises(PatternError):
        mono_copies(G, Pattern(empty_graph(3)), EdgeColoring.constant(G, RED))


# search ------------------------------------------------------------------------------

@pytest.mark.parametrize("n, expected", [(3, 0), (5, 0), (6, 2), (7, 4)])
def test_min_mono_cliques(n, expected):
    G = complete_graph(n)
    rep = min_mono_copies(G, K3)
    assert rep.min_mono == expected
    assert sum(mono_copies(G, K3, rep.witness)) == expected


@pytest.mark.parametrize("n, verdict", [(5, False), (6, True)])
def test_arrows_ramsey_33(n, verdict):
    assert arrows(complete_graph(n), K3) is verdict


def test_arrows_single_edge_pattern():
    assert arrows(cycle_graph(4), Pattern(single_edge(2)))
    assert arrows(complete_graph(4), E3)


@pytest.mark.parametrize("lam, verdict", [(0, True), (2, True), (3, False)])
def test_arrows_lambda_K6(lam, verdict):
    assert arrows_lambda(complete_graph(6), K3, lam) is verdict


def test_arrows_lambda_zero_is_vacuous():
    assert arrows_lambda(empty_graph(2), K3, 0)


def test_engine_matches_naive_loop_on_sample(atlas):
    for g in atlas[:160]:
        if g.number_of_edges() == 0:
            continue
        G = Graph(g.number_of_nodes(), tuple(g.edges()))
        for F in (K3, P3):
            if F.k > G.n:
                continue
            assert min_mono_copies(G, F).min_mono == naive_min_mono(G.n, G.edges, F.k, F.edges)


def test_subgraph_monotonicity_on_K5():
    pairs = list(itertools.combinations(range(5), 2))
    mins = {}
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        mins[bits] = min_mono_copies(random_graph(5, bits), K3).min_mono
    for bits, val in mins.items():
        for j, b in enumerate(bits):
            if b:
                smaller = bits[:j] + (0,) + bits[j + 1:]
                assert mins[smaller] <= val
                # arrowing is monotone under adding edges
                assert (mins[smaller] >= 1) <= (val >= 1)


def test_witness_independent_of_worker_count():
    G = complete_graph(7)
    a = min_mono_copies(G, K3, jobs=1)
    b = min_mono_copies(G, K3, jobs=3)
    assert a.min_mono == b.min_mono == 4
    assert a.witness == b.witness


def test_first_edge_stays_red_in_witness():
    rep = min_mono_copies(complete_graph(6), K3)
    assert rep.witness.colors[0] == RED


def test_budget_is_reported():
    with pytest.raises(SearchBudgetExceeded):
        min_mono_copies(complete_graph(8), K3, budget=1000)


# robustness ---------------------------------------------------------------------

@pytest.mark.parametrize("G, h, expected", [(complete_graph(6), 0, 2), (complete_graph(6), 1, 0),
                                            (complete_graph(3), 3, 0), (complete_graph(7), 1, 2)])
def test_robust_min_mono(G, h, expected):
    assert robust_min_mono(G, K3, h) == expected


def test_robust_min_mono_matches_deletion_loop():
    G = complete_graph(6)
    worst = min(min_mono_copies(G.without_edges(rm), K3).min_mono
                for rm in itertools.combinations(G.edges, 2))
    assert robust_min_mono(G, K3, 2) == worst


def test_robust_rejects_bad_h():
    with pytest.raises(ValueError):
        robust_min_mono(complete_graph(3), K3, 4)


# rich pairs -----------------------------------------------------------------------

def test_rich_pairs_K4_all_red():
    G = complete_graph(4)
    chi = EdgeColoring.constant(G, RED)
    rp = rich_pairs(G, chi, E3, P3, (0, 1), 1)
    assert set(rp.x.values()) == {4}
    assert rp.base == G
    assert rich_pairs(G, chi, E3, P3, (0, 1), 5).base.m == 0


def test_rich_pairs_empty_host():
    G = empty_graph(5)
    rp = rich_pairs(G, EdgeColoring(G, ()), E3, P3, (0, 1), 1)
    assert rp.base.m == 0 and set(rp.x.values()) == {0}


def test_rich_pairs_rejects_mismatch():
    G = complete_graph(4)
    with pytest.raises(PatternError):
        rich_pairs(G, EdgeColoring.constant(G, RED), K3, P3, (0, 1), 1)


def brute_x(G, chi, F_i, F_next, f):
    """x_uv by checking every mono F_i copy against every pair."""
    a, b = f
    rest = [e for e in F_next.edges if e != tuple(f)]
    x = {}
    copies = brute_copies(G.n, G.edges, F_i.k, F_i.edges)
    mono = [(S, img) for S, img in copies if len({chi.color(*e) for e in img}) == 1]
    for u, v in itertools.combinations(range(G.n), 2):
        count = 0
        for S, img in mono:
            if u not in S or v not in S:
                continue
            hit = False
            for perm in itertools.permutations(sorted(S)):
                phi = dict(zip(range(F_next.k), perm))
                if {phi[a], phi[b]} != {u, v}:
                    continue
                if frozenset(tuple(sorted((phi[s], phi[t]))) for s, t in rest) == img:
                    hit = True
                    break
            count += hit
        x[(u, v)] = count
    return x, len(mono)


@given(st.integers(4, 5).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(0, 2), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))))
def test_rich_pairs_against_brute_force(data):
    n, cells = data
    pairs = list(itertools.combinations(range(n), 2))
    G = Graph(n, tuple(p for p, c in zip(pairs, cells) if c))
    chi = EdgeColoring(G, tuple(c - 1 for c in cells if c))
    for F_i, F_next, f, per_copy in ((E3, P3, (0, 1), 2), (P3, K3, (0, 2), 1)):
        rp = rich_pairs(G, chi, F_i, F_next, f, 2)
        x, mono = brute_x(G, chi, F_i, F_next, f)
        assert rp.x == x
        # double counting: each mono copy is closed by the same number of pairs
        assert sum(x.values()) == per_copy * mono
        assert rp.base.edges == tuple(p for p in pairs if x[p] >= 2)
        heavy = sum(v for v in x.values() if v >= 2)
        assert heavy**2 <= rp.base.m * sum(v * v for v in x.values())


def test_pink_azure_examples():
    G = complete_graph(4)
    red = EdgeColoring.constant(G, RED)
    rp = rich_pairs(G, red, E3, P3, (0, 1), 1)
    assert set(color_rich_graph(rp, red, 1).colors) == {0}
    blue = EdgeColoring.constant(G, BLUE)
    rp = rich_pairs(G, blue, E3, P3, (0, 1), 1)
    assert set(color_rich_graph(rp, blue, 1).colors) == {1}


def test_pair_with_one_red_three_blue_is_azure():
    # pair {0,1}: meeting edges 0-2 red, 0-3, 1-2, 1-3 blue; 2-3 red as well
    G = complete_graph(4)
    chi = EdgeColoring.from_map(G, {e: RED if e in ((0, 2), (2, 3)) else BLUE for e in G.edges})
    rp = rich_pairs(G, chi, E3, P3, (0, 1), 1)
    assert (rp.x_red[(0, 1)], rp.x_blue[(0, 1)]) == (1, 3)
    colored = color_rich_graph(rp, chi, 2)
    assert colored.label(rp.base.edge_index[(0, 1)]) == "azure"


def test_color_rich_graph_rejects_foreign_coloring():
    G = complete_graph(4)
    rp = rich_pairs(G, EdgeColoring.constant(G, RED), E3, P3, (0, 1), 1)
    with pytest.raises(ValueError):
        color_rich_graph(rp, EdgeColoring.constant(G, BLUE), 1)
