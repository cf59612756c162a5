import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from builders import build, twins4, cycle4, triangle3, star3
from errors import PedigreeValidationError, EmptySubset, UnknownLabel, UnknownVertex, NotLayered, \
    GenderLabellingImpossible, BAD_OUT_DEGREE, ISOLATED_VERTEX, EXTANT_HAS_CHILD, DUPLICATE_PARENT, \
    CYCLIC_ANCESTRY, UNKNOWN_VERTEX, DUPLICATE_EXTANT
from pedigree import validate, sub_pedigree, ancestors, descendants, vertex_depth, pedigree_depth, \
    as_discrete_generation, mating_graph, find_gender_labelling, is_valid_gender_labelling, parent_graph, \
    relabel, random_relabel, random_discrete_generation, label_sort_key, extant_labels


def test_valid_pedigree_exposes_parents_and_children():
    pedigree = twins4()
    assert pedigree.order == 4
    assert pedigree.labels == ("x1", "x2", "x3", "x4")
    assert pedigree.parents_of_label("x2") == (4, 5)
    assert pedigree.children[4] == (0, 1)
    assert pedigree.founders == frozenset(range(4, 10))


def test_validation_reports_every_violation():
    with pytest.raises(PedigreeValidationError) as info:
        validate([0, 1, 2, 3], [(0, 1)], {"x1": 0})
    kinds = info.value.kinds()
    assert BAD_OUT_DEGREE in kinds
    assert ISOLATED_VERTEX in kinds
    assert {v.vertex for v in info.value.violations if v.kind == ISOLATED_VERTEX} == {2, 3}


def test_extant_vertex_with_child_is_rejected():
    with pytest.raises(PedigreeValidationError) as info:
        validate([0, 1, 2, 3, 4], [(0, 3), (0, 4), (1, 0), (1, 2)], {"x1": 0})
    assert EXTANT_HAS_CHILD in info.value.kinds()


def test_duplicate_parent_is_rejected():
    with pytest.raises(PedigreeValidationError) as info:
        validate([0, 1], [(0, 1), (0, 1)], {"x1": 0})
    assert DUPLICATE_PARENT in info.value.kinds()


def test_cyclic_ancestry_is_rejected():
    with pytest.raises(PedigreeValidationError) as info:
        validate([0, 1, 2, 3], [(3, 0), (3, 1), (0, 1), (0, 2), (1, 0), (1, 2)], {"x1": 3})
    assert CYCLIC_ANCESTRY in info.value.kinds()


def test_unknown_and_duplicate_extant_vertices_are_rejected():
    with pytest.raises(PedigreeValidationError) as info:
        validate([0, 1, 2], [(0, 1), (0, 9)], {"x1": 0, "x2": 0})
    assert UNKNOWN_VERTEX in info.value.kinds()
    assert DUPLICATE_EXTANT in info.value.kinds()


def test_labels_sort_naturally():
    assert sorted(["x10", "x2", "x1"], key=label_sort_key) == ["x1", "x2", "x10"]
    assert extant_labels(3) == ("x1", "x2", "x3")
    assert len({label_sort_key("x1"), label_sort_key("x1"), label_sort_key("x10")}) == 2


def test_sub_pedigree_keeps_ancestors_only():
    pedigree = twins4()
    sub = sub_pedigree(pedigree, ["x3"])
    assert sub.vertices == frozenset({2, 6, 7})
    assert sub.labels == ("x3",)
    assert sub_pedigree(pedigree, pedigree.labels) == pedigree


def test_sub_pedigree_rejects_empty_and_unknown_subsets():
    with pytest.raises(EmptySubset):
        sub_pedigree(twins4(), [])
    with pytest.raises(UnknownLabel):
        sub_pedigree(twins4(), ["x9"])


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_sub_pedigree_composes(seed, depth):
    rng = random.Random(seed)
    pedigree = random_discrete_generation(5, depth, rng)
    outer = rng.sample(pedigree.labels, 4)
    inner = rng.sample(outer, 2)
    assert sub_pedigree(sub_pedigree(pedigree, outer), inner) == sub_pedigree(pedigree, inner)


def test_ancestors_and_descendants_are_reflexive():
    pedigree = twins4()
    assert ancestors(pedigree, [0]) == {0, 4, 5}
    assert descendants(pedigree, 4) == {4, 0, 1}


def test_depths():
    pedigree = build({0: (1, 2), 1: (3, 4), 2: (3, 4)}, [0])
    assert vertex_depth(pedigree, 0) == 0
    assert vertex_depth(pedigree, 3) == 2
    assert pedigree_depth(pedigree) == 2
    with pytest.raises(UnknownVertex):
        vertex_depth(pedigree, 99)


def test_discrete_generation_layers():
    pedigree = build({0: (2, 3), 1: (3, 4), 2: (5, 6), 3: (5, 6), 4: (6, 7)}, [0, 1])
    discrete = as_discrete_generation(pedigree)
    assert discrete.depth == 2
    assert discrete.layers == (frozenset({0, 1}), frozenset({2, 3, 4}), frozenset({5, 6, 7}))


def test_founder_below_top_generation_is_not_layered():
    pedigree = build({0: (1, 2), 1: (3, 4)}, [0])
    with pytest.raises(NotLayered) as info:
        as_discrete_generation(pedigree)
    assert info.value.vertex in (0, 2)


def test_parent_two_generations_up_is_not_layered():
    pedigree = build({0: (1, 3), 1: (2, 3), 2: (4, 5)}, [0])
    with pytest.raises(NotLayered):
        as_discrete_generation(pedigree)


def test_triangle_mating_graph_has_no_gender_labelling():
    pedigree = triangle3()
    graph = mating_graph(pedigree)
    with pytest.raises(GenderLabellingImpossible) as info:
        find_gender_labelling(pedigree)
    witness = info.value.witness
    assert len(witness) % 2 == 1
    for u, v in zip(witness, witness[1:] + witness[:1]):
        assert graph.has_edge(u, v)


def test_star_has_a_gender_labelling():
    pedigree = star3()
    genders = find_gender_labelling(pedigree)
    assert is_valid_gender_labelling(pedigree, genders)


def test_parent_graph_of_cycle():
    graph = parent_graph(as_discrete_generation(cycle4())).as_multigraph()
    assert nx.is_isomorphic(graph, nx.cycle_graph(4))
    assert sorted(key for _, _, key in graph.edges(keys=True)) == ["x1", "x2", "x3", "x4"]


def test_relabel_moves_vertices_and_labels():
    pedigree = twins4()
    mapping = {v: v + 100 for v in pedigree.vertices}
    moved = relabel(pedigree, mapping)
    assert moved.vertex_of["x1"] == 100
    assert moved.parents_of_label("x3") == (106, 107)


def test_random_relabel_returns_its_mapping():
    pedigree = cycle4()
    moved, mapping = random_relabel(pedigree, random.Random(3))
    assert relabel(pedigree, mapping) == moved
    assert len(set(mapping.values())) == len(pedigree)


@given(st.integers(0, 10 ** 6), st.integers(2, 6), st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_random_discrete_generation_is_layered(seed, n, depth):
    pedigree = random_discrete_generation(n, depth, random.Random(seed))
    discrete = as_discrete_generation(pedigree)
    assert pedigree.order == n
    assert discrete.depth == depth
    assert all(len(pedigree.parents[v]) == 2 for v in discrete.layers[0])
