"""Pedigree data model.

A pedigree is a directed graph with arcs child -> parent in which every vertex has
either no parents (a founder) or exactly two distinct parents. A labelled subset of the
in-degree-0 vertices forms the extant set; its order is the order of the pedigree.
"""
from __future__ import annotations

import enum
import logging
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from errors import PedigreeValidationError, Violation, EmptySubset, UnknownLabel, UnknownVertex, NotLayered, \
    GenderLabellingImpossible, BAD_OUT_DEGREE, EXTANT_HAS_CHILD, ISOLATED_VERTEX, DUPLICATE_PARENT, \
    CYCLIC_ANCESTRY, UNKNOWN_VERTEX, DUPLICATE_EXTANT

logger = logging.getLogger(__name__)


def label_sort_key(label):
    # x2 sorts before x10
    return tuple(int(part) if part.isdigit() else part for part in re.split(r"(\d+)", label))


def extant_labels(n):
    return tuple(f"x{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class Pedigree:
    vertices: frozenset
    arcs: frozenset
    extant: tuple  # ((label, vertex), ...) in label order

    @cached_property
    def parents(self):
        result = {v: [] for v in self.vertices}
        for child, parent in self.arcs:
            result[child].append(parent)
        return {v: tuple(sorted(ps)) for v, ps in result.items()}

    @cached_property
    def children(self):
        result = {v: [] for v in self.vertices}
        for child, parent in self.arcs:
            result[parent].append(child)
        return {v: tuple(sorted(cs)) for v, cs in result.items()}

    @property
    def labels(self):
        return tuple(label for label, _ in self.extant)

    @property
    def order(self):
        return len(self.extant)

    @cached_property
    def vertex_of(self):
        return dict(self.extant)

    @cached_property
    def label_of(self):
        return {v: label for label, v in self.extant}

    @cached_property
    def founders(self):
        return frozenset(v for v in self.vertices if not self.parents[v])

    @cached_property
    def depths(self):
        return _compute_depths(self)

    def parents_of_label(self, label):
        if label not in self.vertex_of:
            raise UnknownLabel(f"unknown extant label {label!r}")
        return self.parents[self.vertex_of[label]]

    def __len__(self):
        return len(self.vertices)


def validate(vertices, arcs, extant):
    """Builds a Pedigree from raw input, reporting every violated invariant at once.

    ``arcs`` is any iterable of (child, parent) pairs, ``extant`` either a mapping
    label -> vertex or a sequence of (label, vertex) pairs.
    """
    vertex_set = frozenset(vertices)
    arc_list = [(c, p) for c, p in arcs]
    extant_pairs = list(extant.items()) if isinstance(extant, dict) else [(label, v) for label, v in extant]
    violations = []

    for v in sorted(vertex_set, key=repr):
        if not isinstance(v, int) or v < 0:
            violations.append(Violation(UNKNOWN_VERTEX, v))
    for c, p in arc_list:
        for endpoint in (c, p):
            if endpoint not in vertex_set:
                violations.append(Violation(UNKNOWN_VERTEX, endpoint))

    seen_labels = set()
    seen_extant = set()
    for label, v in extant_pairs:
        if v not in vertex_set:
            violations.append(Violation(UNKNOWN_VERTEX, v))
        if label in seen_labels or v in seen_extant:
            violations.append(Violation(DUPLICATE_EXTANT, v))
        seen_labels.add(label)
        seen_extant.add(v)

    arc_counts = Counter(arc_list)
    for (c, p), count in sorted(arc_counts.items()):
        if count > 1:
            violations.append(Violation(DUPLICATE_PARENT, c))
    out_degree = Counter(c for c, _ in arc_list)
    in_degree = Counter(p for _, p in arc_list)
    for v in sorted(vertex_set, key=repr):
        if out_degree[v] not in (0, 2):
            violations.append(Violation(BAD_OUT_DEGREE, v))
        if out_degree[v] + in_degree[v] == 0:
            violations.append(Violation(ISOLATED_VERTEX, v))
    for label, v in extant_pairs:
        if in_degree[v] > 0:
            violations.append(Violation(EXTANT_HAS_CHILD, v))

    graph = nx.DiGraph()
    graph.add_nodes_from(vertex_set)
    graph.add_edges_from(arc_list)
    for component in nx.strongly_connected_components(graph):
        if len(component) > 1:
            violations.extend(Violation(CYCLIC_ANCESTRY, v) for v in sorted(component, key=repr))
    for v in sorted(nx.nodes_with_selfloops(graph), key=repr):
        violations.append(Violation(CYCLIC_ANCESTRY, v))

    if violations:
        raise PedigreeValidationError(violations)
    return Pedigree(vertex_set, frozenset(arc_list), tuple(extant_pairs))


def ancestors(pedigree, vertices):
    """Every vertex that is an ancestor of one of ``vertices`` (each vertex is its own ancestor)."""
    seen = set(vertices)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for p in pedigree.parents[v]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def descendants(pedigree, vertex):
    seen = {vertex}
    stack = [vertex]
    while stack:
        v = stack.pop()
        for c in pedigree.children[v]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return seen


def sub_pedigree(pedigree, labels):
    """Deletes every vertex with no descendant among the extant vertices named by ``labels``."""
    labels = set(labels)
    if not labels:
        raise EmptySubset("sub-pedigree needs at least one extant label")
    unknown = labels - set(pedigree.labels)
    if unknown:
        raise UnknownLabel(f"unknown extant labels {sorted(unknown, key=label_sort_key)}")
    kept = ancestors(pedigree, [pedigree.vertex_of[label] for label in labels])
    arcs = frozenset((c, p) for c, p in pedigree.arcs if c in kept)
    extant = tuple((label, v) for label, v in pedigree.extant if label in labels)
    return Pedigree(frozenset(kept), arcs, extant)


def _compute_depths(pedigree):
    # longest path from an in-degree-0 vertex; for vertices with an extant descendant this
    # is the largest k such that the vertex is a k'th grandparent of an extant vertex
    graph = nx.DiGraph()
    graph.add_nodes_from(pedigree.vertices)
    graph.add_edges_from(pedigree.arcs)
    depths = {}
    for v in nx.topological_sort(graph):
        children = pedigree.children[v]
        depths[v] = max((depths[c] + 1 for c in children), default=0)
    return depths


def vertex_depth(pedigree, vertex):
    if vertex not in pedigree.vertices:
        raise UnknownVertex(f"unknown vertex {vertex!r}")
    return pedigree.depths[vertex]


def pedigree_depth(pedigree):
    return max(pedigree.depths.values(), default=0)


@dataclass(frozen=True)
class DiscreteGenerationPedigree:
    pedigree: Pedigree
    layers: tuple  # (X_0, X_1, ..., X_d) as frozensets

    @property
    def depth(self):
        return len(self.layers) - 1


def as_discrete_generation(pedigree):
    depths = pedigree.depths
    depth = pedigree_depth(pedigree)
    layers = [set() for _ in range(depth + 1)]
    for v, k in depths.items():
        layers[k].add(v)
    for label, v in pedigree.extant:
        if depths[v] != 0:
            raise NotLayered(v, "extant vertex above generation 0")
    for v in layers[0]:
        if v not in pedigree.label_of:
            raise NotLayered(v, "non-extant vertex without children")
    for k, layer in enumerate(layers):
        for v in sorted(layer):
            parents = pedigree.parents[v]
            if k < depth and not parents:
                raise NotLayered(v, f"founder in generation {k} below the top generation {depth}")
            for p in parents:
                if depths[p] != k + 1:
                    raise NotLayered(v, f"parent {p!r} in generation {depths[p]}, expected {k + 1}")
    return DiscreteGenerationPedigree(pedigree, tuple(frozenset(layer) for layer in layers))


class Gender(enum.Enum):
    MALE = "m"
    FEMALE = "f"

    def other(self):
        return Gender.FEMALE if self is Gender.MALE else Gender.MALE


def mating_graph(pedigree):
    graph = nx.Graph()
    graph.add_nodes_from(pedigree.vertices)
    for v in pedigree.vertices:
        parents = pedigree.parents[v]
        if parents:
            graph.add_edge(*parents)
    return graph


def find_gender_labelling(pedigree):
    """Two-colours the mating graph, one component at a time from its smallest vertex.

    Vertices without mating edges are male. Raises GenderLabellingImpossible with an odd
    cycle of the mating graph when no labelling exists.
    """
    graph = mating_graph(pedigree)
    genders = {}
    for component in sorted(nx.connected_components(graph), key=min):
        root = min(component)
        genders[root] = Gender.MALE
        predecessor = {root: None}
        for u, v in nx.bfs_edges(graph, root, sort_neighbors=sorted):
            genders[v] = genders[u].other()
            predecessor[v] = u
        for u, v in sorted(graph.subgraph(component).edges):
            if genders[u] is genders[v]:
                raise GenderLabellingImpossible(_odd_cycle(predecessor, u, v))
    return genders


def _odd_cycle(predecessor, u, v):
    def path_to_root(x):
        path = []
        while x is not None:
            path.append(x)
            x = predecessor[x]
        return path

    path_u = path_to_root(u)
    path_v = path_to_root(v)
    on_v = set(path_v)
    meet = next(x for x in path_u if x in on_v)
    head = path_u[:path_u.index(meet) + 1]
    tail = path_v[:path_v.index(meet)]
    return head + list(reversed(tail))


def is_valid_gender_labelling(pedigree, genders):
    for v in pedigree.vertices:
        parents = pedigree.parents[v]
        if parents and {genders[p] for p in parents} != {Gender.MALE, Gender.FEMALE}:
            return False
    return True


@dataclass(frozen=True)
class ParentGraph:
    vertices: frozenset
    edges: tuple  # ((label, frozenset({p, q})), ...) in extant order

    def as_multigraph(self):
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for label, (p, q) in ((label, tuple(sorted(e))) for label, e in self.edges):
            graph.add_edge(p, q, key=label)
        return graph


def parent_graph(discrete):
    if discrete.depth < 1:
        raise NotLayered(None, "parent graph needs depth at least 1")
    pedigree = discrete.pedigree
    edges = tuple((label, frozenset(pedigree.parents[v])) for label, v in pedigree.extant)
    return ParentGraph(discrete.layers[1], edges)


def relabel(pedigree, mapping):
    arcs = frozenset((mapping[c], mapping[p]) for c, p in pedigree.arcs)
    extant = tuple((label, mapping[v]) for label, v in pedigree.extant)
    return Pedigree(frozenset(mapping[v] for v in pedigree.vertices), arcs, extant)


def random_relabel(pedigree, rng):
    vertices = sorted(pedigree.vertices)
    targets = rng.sample(range(len(vertices) * 3 + 1), len(vertices))
    mapping = dict(zip(vertices, targets))
    return relabel(pedigree, mapping), mapping


def random_discrete_generation(n, depth, rng, layer_sizes=None):
    """Random discrete generation pedigree of order ``n``.

    Layer i (i < depth) vertices each pick two distinct parents in layer i+1; vertices
    without an extant descendant are dropped afterwards.
    """
    if layer_sizes is None:
        layer_sizes = [n] + [rng.randint(2, max(2, n)) for _ in range(depth)]
    layers = []
    next_id = 0
    for size in layer_sizes:
        layers.append(list(range(next_id, next_id + size)))
        next_id += size
    arcs = []
    for lower, upper in zip(layers, layers[1:]):
        for child in lower:
            arcs.extend((child, parent) for parent in rng.sample(upper, 2))
    extant = tuple((label, v) for label, v in zip(extant_labels(n), layers[0]))
    full = Pedigree(frozenset(range(next_id)), frozenset(arcs), extant)
    return sub_pedigree(full, full.labels)
