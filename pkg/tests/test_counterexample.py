import random

import pytest
from hypothesis import given, settings, strategies as st

from counterexample import BitString, all_bitstrings, parity_classes, build_hypergraphs, edge_order_isomorphic, \
    region_counts, satisfies_cube_equation, sample_cube_solution, parity_rigidity_holds, edge_deleted_isomorphism, \
    build_tree, build_counterexample, base_case_pair, hypomorphism_witness, certify_non_isomorphic, \
    check_counterexample, grandparent_hypergraph, genderize, lift_isomorphism
from errors import BadN, BadIndex, BadOrdering, UnevenSplit, GenderLabellingImpossible
from isomorphism import verify_isomorphism, find_isomorphism, are_r_hypomorphic
from pedigree import sub_pedigree, pedigree_depth, find_gender_labelling, is_valid_gender_labelling, \
    as_discrete_generation, parent_graph, extant_labels
from pedigree_io import hypergraph_text

import networkx as nx


def bits(n, text):
    return BitString(n, int(text, 2))


def kept_labels(n, j):
    return [label for label in extant_labels(n) if label != f"x{j}"]


def test_bitstring_digits_count_from_the_right():
    k = bits(4, "0011")
    assert k.digit(1) == 1 and k.digit(3) == 0
    assert str(k.with_digit(4, 1)) == "1011"
    assert str(k.flipped(2)) == "0001"
    assert k.ones() == 2 and k.zeros() == 2
    assert k.is_even


def test_parity_classes():
    even, odd = parity_classes(3)
    assert {str(k) for k in even} == {"000", "011", "101", "110"}
    assert {str(k) for k in odd} == {"001", "010", "100", "111"}
    with pytest.raises(BadN):
        parity_classes(2)


def test_hypergraphs_for_four(golden_dir):
    g, h = build_hypergraphs(4)
    assert hypergraph_text(g, h) == (golden_dir / "counterexample_n4" / "hypergraphs.txt").read_text()


def test_three_gives_triangle_and_star():
    g, h = build_hypergraphs(3, keep_isolated=False)
    triangle = nx.Graph([tuple(edge) for edge in g.edges])
    star = nx.Graph([tuple(edge) for edge in h.edges])
    assert nx.is_isomorphic(triangle, nx.cycle_graph(3))
    assert nx.is_isomorphic(star, nx.star_graph(3))
    assert bits(3, "111") in set.intersection(*(set(edge) for edge in h.edges))


def test_region_counts_of_even_hypergraph():
    g, h = build_hypergraphs(4)
    assert region_counts(g) == {k: 1 for k in all_bitstrings(4) if k.is_even}
    assert region_counts(h) == {k: 1 for k in all_bitstrings(4) if not k.is_even}
    assert not edge_order_isomorphic(g, h)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_deleting_an_edge_makes_the_hypergraphs_isomorphic(n):
    g, h = build_hypergraphs(n)
    for i in range(1, n + 1):
        assert edge_order_isomorphic(g.without_edge(i), h.without_edge(i))


def test_first_edge_deleted_isomorphism_for_four():
    expected = {
        "0000": "0001", "0011": "0010", "0101": "0100", "1001": "1000",
        "0110": "0111", "1010": "1011", "1100": "1101", "1111": "1110",
    }
    mapping = edge_deleted_isomorphism(4, 1)
    assert {str(k): str(v) for k, v in mapping.items()} == expected


def test_edge_deleted_isomorphism_flips_one_digit():
    mapping = edge_deleted_isomorphism(4, 2)
    assert mapping[bits(4, "0000")] == bits(4, "0010")
    assert mapping[bits(4, "1111")] == bits(4, "1101")
    assert all(mapping[k].flipped(2) == k for k in mapping)


@pytest.mark.parametrize("n", [3, 4])
def test_edge_deleted_isomorphism_is_unique(n):
    for i in range(1, n + 1):
        edge_deleted_isomorphism(n, i)


def test_edge_deleted_isomorphism_index_range():
    with pytest.raises(BadIndex):
        edge_deleted_isomorphism(4, 0)
    with pytest.raises(BadIndex):
        edge_deleted_isomorphism(4, 5)


@pytest.mark.parametrize("n", range(3, 13))
def test_region_counts_solve_cube_equation(n):
    g, h = build_hypergraphs(n)
    a, b = region_counts(g), region_counts(h)
    assert satisfies_cube_equation(a, b, n)
    assert parity_rigidity_holds(a, b, n)


def test_cube_equation_rejects_unbalanced_counts():
    a = {bits(3, "000"): 1}
    assert not satisfies_cube_equation(a, {}, 3)


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_sampled_solutions_are_rigid(n, seed):
    a, b = sample_cube_solution(n, random.Random(seed))
    assert all(count >= 0 for count in list(a.values()) + list(b.values()))
    assert satisfies_cube_equation(a, b, n)
    assert parity_rigidity_holds(a, b, n)


def test_tree_for_three():
    g, _ = build_hypergraphs(3, keep_isolated=False)
    tree = build_tree("x1", g.edges[0], (2, 3))
    assert tree.index == 1
    assert tree.depth == 1
    assert tree.internal_tuples() == [()]
    assert tree.leaf((0,)) == bits(3, "101")
    assert tree.leaf((1,)) == bits(3, "011")


def test_tree_with_reordered_digits():
    g, _ = build_hypergraphs(5, keep_isolated=False)
    tree = build_tree("x5", g.edges[4], (2, 3, 1, 4))
    assert tree.index == 5
    assert tree.depth == 3
    left = tree.subtrees[(0,)]
    assert len(left) == 4
    assert all(k.digit(2) == 0 for k in left)
    assert len(tree.internal_tuples()) == 7
    assert {tree.leaf(path) for path in tree.subtrees if len(path) == 3} == g.edges[4]


def test_tree_needs_balanced_leaves():
    uneven = [BitString(4, v) for v in (2, 3, 6, 7)]
    with pytest.raises(UnevenSplit):
        build_tree("x1", uneven, (2, 3, 4))
    with pytest.raises(UnevenSplit):
        build_tree("x1", uneven[:3], (2, 3, 4))


def test_bad_orderings():
    g, _ = build_hypergraphs(4)
    with pytest.raises(BadOrdering):
        build_tree("x1", g.edges[0], (2, 2, 3))
    with pytest.raises(BadOrdering):
        build_counterexample(4, {1: (1, 2, 3)})
    with pytest.raises(BadIndex):
        build_counterexample(4, {5: (1, 2, 3, 4)})


@pytest.mark.parametrize("n", range(3, 8))
def test_vertex_and_founder_counts(n):
    pair = build_counterexample(n)
    t, u = pair.pedigrees
    assert len(t) == n * (2 ** (n - 2) - 1) + 2 ** (n - 1) - 1
    assert len(u) == n * (2 ** (n - 2) - 1) + 2 ** (n - 1)
    assert len(t.founders) == 2 ** (n - 1) - 1
    assert len(u.founders) == 2 ** (n - 1)
    assert pedigree_depth(t) == pedigree_depth(u) == n - 2
    assert as_discrete_generation(t).depth == n - 2
    assert certify_non_isomorphic(pair)


def test_four_has_nineteen_and_twenty_vertices():
    t, u = build_counterexample(4).pedigrees
    assert (len(t), len(u)) == (19, 20)


def test_base_case_is_star_and_triangle():
    star, triangle = base_case_pair()
    star_graph = parent_graph(as_discrete_generation(star)).as_multigraph()
    triangle_graph = parent_graph(as_discrete_generation(triangle)).as_multigraph()
    assert nx.is_isomorphic(nx.Graph(star_graph), nx.star_graph(3))
    assert nx.is_isomorphic(nx.Graph(triangle_graph), nx.cycle_graph(3))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_witnesses_verify(n):
    pair = build_counterexample(n)
    t, u = pair.pedigrees
    for j in range(1, n + 1):
        kept = kept_labels(n, j)
        witness = hypomorphism_witness(pair, j)
        assert verify_isomorphism(sub_pedigree(t, kept), sub_pedigree(u, kept), witness)


def test_witness_acts_on_founders_by_digit_flip():
    pair = build_counterexample(4)
    witness = hypomorphism_witness(pair, 1)
    flip = edge_deleted_isomorphism(4, 1)
    for k, v in pair.t.founders.items():
        assert witness[v] == pair.u.founders[flip[k]]


def test_witness_index_range():
    with pytest.raises(BadIndex):
        hypomorphism_witness(build_counterexample(3), 4)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_check_counterexample_searches_small_orders(n):
    report = check_counterexample(build_counterexample(n))
    assert report.method == "search"
    assert report.holds
    assert set(report.generic) == set(range(1, n + 1))


@pytest.mark.slow
@pytest.mark.parametrize("n", range(6, 11))
def test_check_counterexample_larger_orders(n):
    report = check_counterexample(build_counterexample(n))
    assert report.holds
    assert report.method == ("search" if n <= 6 else "founder-count")


@given(st.integers(0, 10 ** 6))
@settings(max_examples=10, deadline=None)
def test_any_orderings_give_a_counterexample(seed):
    rng = random.Random(seed)
    n = 5
    orderings = {}
    for i in range(1, n + 1):
        digits = [d for d in range(1, n + 1) if d != i]
        rng.shuffle(digits)
        orderings[i] = tuple(digits)
    pair = build_counterexample(n, orderings)
    assert pair.orderings == tuple(orderings[i] for i in range(1, n + 1))
    report = check_counterexample(pair, generic_max_n=0)
    assert report.method == "founder-count"
    assert report.holds


def test_triangle_needs_genderizing():
    _, triangle = base_case_pair()
    with pytest.raises(GenderLabellingImpossible):
        find_gender_labelling(triangle)
    gendered = genderize(triangle)
    assert len(gendered.pedigree) == 2 * len(triangle) + triangle.order
    assert gendered.pedigree.labels == triangle.labels
    assert is_valid_gender_labelling(gendered.pedigree, find_gender_labelling(gendered.pedigree))


def test_genderized_copies_follow_parent_couples():
    _, triangle = base_case_pair()
    gendered = genderize(triangle)
    first, second = triangle.parents[0]
    male = gendered.copy_with_couple(0, first)
    female = gendered.copy_with_couple(0, second)
    assert set(gendered.pedigree.parents[male]) == {gendered.male[first], gendered.female[first]}
    assert set(gendered.pedigree.parents[female]) == {gendered.male[second], gendered.female[second]}


@pytest.mark.parametrize("n", [3, 4])
def test_genderized_pair_is_still_a_counterexample(n):
    pair = build_counterexample(n)
    t, u = pair.pedigrees
    gendered_t, gendered_u = genderize(t), genderize(u)
    assert find_isomorphism(gendered_t.pedigree, gendered_u.pedigree) is None
    assert are_r_hypomorphic(gendered_t.pedigree, gendered_u.pedigree, n - 1)
    for j in range(1, n + 1):
        kept = kept_labels(n, j)
        lifted = lift_isomorphism(gendered_t, gendered_u, hypomorphism_witness(pair, j))
        assert verify_isomorphism(
            sub_pedigree(gendered_t.pedigree, kept), sub_pedigree(gendered_u.pedigree, kept), lifted)


@pytest.mark.slow
def test_genderized_pair_of_five():
    t, u = build_counterexample(5).pedigrees
    gendered_t, gendered_u = genderize(t).pedigree, genderize(u).pedigree
    assert are_r_hypomorphic(gendered_t, gendered_u, 4)
    assert not are_r_hypomorphic(gendered_t, gendered_u, 5)


@pytest.mark.parametrize("n", [4, 5])
def test_grandparent_hypergraphs_only_differ_at_the_top(n):
    t, u = build_counterexample(n).pedigrees
    g, h = build_hypergraphs(n, keep_isolated=False)
    assert edge_order_isomorphic(grandparent_hypergraph(t, n - 2), g)
    assert edge_order_isomorphic(grandparent_hypergraph(u, n - 2), h)
    assert not edge_order_isomorphic(grandparent_hypergraph(t, n - 2), grandparent_hypergraph(u, n - 2))
    for d in range(n - 2):
        assert edge_order_isomorphic(grandparent_hypergraph(t, d), grandparent_hypergraph(u, d))
