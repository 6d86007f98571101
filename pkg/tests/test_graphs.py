import math
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st
from networkx.algorithms import isomorphism as nxiso

from oracles import brute_count, mF_by_edge_subsets
from randramsey.graphs import (
    EdgeColoring, Graph, GraphParseError, Pattern, PatternError, UndefinedDensityError,
    admissible_edge_order, automorphism_count, canonical_form, complete_graph, count_copies,
    count_embeddings, cycle_graph, density_dF, empty_graph, expected_copies, is_admissible,
    is_isomorphic, max_density_mF, named_graph, parse_coloring, parse_graph, path_graph,
    single_edge,
)


def from_nx(g) -> Graph:
    return Graph(g.number_of_nodes(), tuple(g.edges()))


# parsing ---------------------------------------------------------------------

def test_parse_triangle():
    G = parse_graph("3 3\n0 1\n0 2\n1 2")
    assert G == complete_graph(3)


def test_parse_edge_plus_isolated_with_comments():
    G = parse_graph("# F_1 for k = 3\n3 1\n\n  # the edge\n1 0\n")
    assert G.n == 3 and G.edges == ((0, 1),)


@pytest.mark.parametrize("text, line, fragment", [
    ("2 2\n0 1\n0 1", 3, "duplicate"),
    ("2 2\n0 1\n1 0", 3, "duplicate"),
    ("3 1\n2 2", 2, "self-loop"),
    ("3 1\n0 3", 2, "out of range"),
    ("3 1\n0 x", 2, "integers"),
    ("3 1\n0 1 2", 2, "u v"),
    ("3\n0 1", 1, "header"),
    ("3 2\n0 1", 2, "expected 2"),
    ("", 1, "empty"),
])
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(GraphParseError) as info:
        parse_graph(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_text_round_trip():
    G = cycle_graph(5)
    assert parse_graph(G.to_text()) == G


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(2, ((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        Graph(2, ((1, 1),))


@pytest.mark.parametrize("name, n, m", [("K5", 5, 10), ("P3", 3, 2), ("C4", 4, 4),
                                        ("E3", 3, 1), ("N4", 4, 0)])
def test_named_graphs(name, n, m):
    G = named_graph(name)
    assert (G.n, G.m) == (n, m)


# densities -------------------------------------------------------------------

@pytest.mark.parametrize("F, d", [(single_edge(2), Fraction(1, 2)), (single_edge(5), Fraction(1, 2)),
                                  (complete_graph(3), Fraction(2)), (path_graph(3), Fraction(1))])
def test_density_dF(F, d):
    assert density_dF(F) == d


def test_densities_undefined_without_edges():
    with pytest.raises(UndefinedDensityError):
        density_dF(empty_graph(3))
    with pytest.raises(UndefinedDensityError):
        max_density_mF(empty_graph(3))


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_mF_of_cliques(k):
    assert max_density_mF(complete_graph(k))[0] == Fraction(k + 1, 2)


def test_mF_path_with_isolated_vertices():
    m, witness = max_density_mF(path_graph(3, total=5))
    assert m == 1
    assert is_isomorphic(witness, path_graph(3))


def test_mF_single_edge_with_isolated():
    assert max_density_mF(single_edge(4))[0] == Fraction(1, 2)


def test_mF_matches_edge_subset_enumeration_exhaustively(atlas):
    for g in atlas:
        if g.number_of_nodes() > 5 or g.number_of_edges() == 0:
            continue
        F = Pattern(from_nx(g))
        k = F.k
        mF = F.m_F
        assert mF == mF_by_edge_subsets(k, F.edges)
        assert mF >= F.d_F
        if F.max_degree <= 1:
            assert mF == Fraction(1, 2)
        else:
            assert mF >= 1
        if k >= 3:  # a lone edge has density 1/2, not 3/2
            assert mF <= Fraction(k + 1, 2)
            assert (mF == Fraction(k + 1, 2)) == (F.e_F == math.comb(k, 2))


# admissibility ---------------------------------------------------------------

def test_is_admissible_examples():
    assert is_admissible(complete_graph(3), 3)
    assert not is_admissible(Graph(4, ((0, 1), (2, 3))), 4)
    assert is_admissible(single_edge(3), 3)
    assert not is_admissible(complete_graph(3), 4)


def test_admissible_chain_of_triangle():
    chain = admissible_edge_order(Pattern.of("K3"))
    pats = [p for p, _ in chain]
    assert is_isomorphic(pats[0].graph, single_edge(3))
    assert is_isomorphic(pats[1].graph, path_graph(3))
    assert pats[2].graph == complete_graph(3)
    assert chain[0][1] is None
    for (prev, _), (cur, f) in zip(chain, chain[1:]):
        assert cur.minus(f) == prev


def test_admissible_chain_trivial():
    chain = admissible_edge_order(Pattern(single_edge(3)))
    assert len(chain) == 1 and chain[0][1] is None


@pytest.mark.parametrize("k", [4, 5])
def test_admissible_chain_of_cliques(k):
    chain = admissible_edge_order(Pattern(complete_graph(k)))
    assert len(chain) == math.comb(k, 2)
    for i, (p, _) in enumerate(chain, start=1):
        assert p.e_F == i and is_admissible(p, k)


def test_admissible_chain_rejects_matching():
    with pytest.raises(PatternError):
        admissible_edge_order(Pattern(Graph(4, ((0, 1), (2, 3)))))


# copies ------------------------------------------------------------------------

@pytest.mark.parametrize("G, F, count", [
    (complete_graph(4), complete_graph(3), 4),
    (complete_graph(4), path_graph(3), 12),
    (complete_graph(4), single_edge(3), 12),
    (complete_graph(6), complete_graph(3), 20),
    (complete_graph(4), cycle_graph(4), 3),
    (complete_graph(2), complete_graph(3), 0),
])
def test_count_copies_examples(G, F, count):
    assert count_copies(G, Pattern(F)) == count


PATTERNS = [complete_graph(3), path_graph(3), single_edge(3), single_edge(4), cycle_graph(4),
            path_graph(3, total=4), Graph(4, ((0, 1), (2, 3))), Graph(4, ((0, 1), (0, 2), (0, 3)))]


def test_count_copies_against_brute_force(atlas):
    for g in atlas:
        if g.number_of_nodes() > 6:
            continue
        G = from_nx(g)
        for F in PATTERNS:
            if F.n > G.n:
                continue
            assert count_copies(G, Pattern(F)) == brute_count(G.n, G.edges, F.n, F.edges)


def test_copies_times_aut_equals_monomorphisms(atlas):
    # independent embedding enumerator: networkx subgraph monomorphisms
    for g in atlas:
        if g.number_of_nodes() > 6:
            continue
        G = from_nx(g)
        for F in PATTERNS:
            if F.n > G.n:
                continue
            P = Pattern(F)
            Fg = nx.Graph()
            Fg.add_nodes_from(range(F.n))
            Fg.add_edges_from(F.edges)
            gm = nxiso.GraphMatcher(g, Fg)
            monos = sum(1 for _ in gm.subgraph_monomorphisms_iter())
            assert count_copies(G, P) * P.aut == monos
            assert count_embeddings(F, G) == monos


@pytest.mark.parametrize("F, aut", [(complete_graph(4), 24), (path_graph(3), 2),
                                    (single_edge(4), 4), (cycle_graph(5), 10)])
def test_automorphisms(F, aut):
    assert automorphism_count(F) == aut
    assert math.factorial(F.n) % aut == 0


def test_canonical_form_agrees_with_networkx(atlas):
    small = [g for g in atlas if g.number_of_nodes() == 5]
    forms = {}
    for g in small:
        forms.setdefault(canonical_form(from_nx(g)), []).append(g)
    # atlas lists each isomorphism class exactly once
    assert len(forms) == len(small)
    rng = random.Random(3)
    for g in small[::4]:
        perm = list(range(5))
        rng.shuffle(perm)
        h = nx.relabel_nodes(g, dict(zip(range(5), perm)))
        assert canonical_form(from_nx(h)) == canonical_form(from_nx(g))


@pytest.mark.parametrize("n, p, F, mu", [
    (4, Fraction(1, 2), complete_graph(3), Fraction(1, 2)),
    (2, Fraction(1, 3), complete_graph(3), 0),
    (6, 1, complete_graph(3), 20),
])
def test_expected_copies_examples(n, p, F, mu):
    assert expected_copies(n, p, Pattern(F)) == mu


@given(st.integers(0, 10), st.sampled_from([0, Fraction(1, 4), Fraction(1, 2), 1]),
       st.sampled_from(PATTERNS + [complete_graph(5), path_graph(5)]))
def test_expected_copies_sandwich(n, p, F):
    P = Pattern(F)
    mu = expected_copies(n, p, P)
    if n < P.k:
        assert mu == 0
        return
    pe = Fraction(p) ** P.e_F
    assert math.comb(n, P.k) * pe <= mu <= Fraction(n) ** P.k * pe
    if p == 1:
        assert mu == count_copies(complete_graph(n), P)


# colorings -----------------------------------------------------------------------

def test_coloring_parse_and_swap():
    G = complete_graph(3)
    chi = parse_coloring("0\n1\n# c\n0\n", G)
    assert chi.colors == (0, 1, 0)
    assert chi.color(2, 0) == 1
    assert chi.swapped().colors == (1, 0, 1)
    assert parse_coloring(chi.to_text(), G) == chi


@pytest.mark.parametrize("text", ["0\n1\n", "0\n1\n2\n", "0\n1\n1\n0\n"])
def test_coloring_parse_errors(text):
    with pytest.raises(GraphParseError):
        parse_coloring(text, complete_graph(3))


def test_coloring_length_checked():
    with pytest.raises(ValueError):
        EdgeColoring(complete_graph(3), (0, 1))
