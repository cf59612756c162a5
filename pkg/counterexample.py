"""Non-isomorphic (n-1)-hypomorphic pedigree pairs built from hypercube parity hypergraphs.

G lives on the even-weight n-bit strings and H on the odd-weight ones, with edge i holding
the strings whose digit i is 1. Deleting edge i from both leaves them isomorphic through the
flip of digit i, while G and H themselves are not. Each edge becomes the founder set of a
balanced binary tree hanging off x_i, and the trees together form the pedigrees T and U.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import sympy

from errors import BadN, BadIndex, BadOrdering, UnevenSplit, VerificationFailed
from isomorphism import LabelledIsomorphism, find_isomorphism, verify_isomorphism, DEFAULT_NODE_LIMIT
from pedigree import validate, sub_pedigree, extant_labels

logger = logging.getLogger(__name__)

EXHAUSTIVE_UNIQUENESS_MAX_N = 4
GENERIC_SEARCH_MAX_N = 6


@dataclass(frozen=True, order=True)
class BitString:
    width: int
    value: int

    def digit(self, i):
        # digits count from the right, starting at 1
        return (self.value >> (i - 1)) & 1

    def with_digit(self, i, bit):
        mask = 1 << (i - 1)
        return BitString(self.width, self.value | mask if bit else self.value & ~mask)

    def flipped(self, i):
        return BitString(self.width, self.value ^ (1 << (i - 1)))

    def ones(self):
        return bin(self.value).count("1")

    def zeros(self):
        return self.width - self.ones()

    @property
    def is_even(self):
        return self.ones() % 2 == 0

    def __str__(self):
        return format(self.value, f"0{self.width}b")


def all_bitstrings(n):
    return [BitString(n, value) for value in range(2 ** n)]


@dataclass(frozen=True)
class IndexedHypergraph:
    vertices: frozenset
    edges: tuple  # edge order is part of the identity

    def region_counts(self):
        """Maps each membership pattern k to the number of vertices lying in exactly the edges where k has a 1."""
        counts = {}
        for v in self.vertices:
            pattern = sum(1 << i for i, edge in enumerate(self.edges) if v in edge)
            key = BitString(len(self.edges), pattern)
            counts[key] = counts.get(key, 0) + 1
        return counts

    def without_edge(self, i):
        return IndexedHypergraph(self.vertices, self.edges[:i - 1] + (frozenset(),) + self.edges[i:])


def region_counts(hypergraph):
    return hypergraph.region_counts()


def edge_order_isomorphic(g, h):
    return len(g.edges) == len(h.edges) and g.region_counts() == h.region_counts()


def _check_n(n):
    if n < 3:
        raise BadN(f"n must be at least 3, got {n}")


def parity_classes(n):
    _check_n(n)
    even = frozenset(k for k in all_bitstrings(n) if k.is_even)
    odd = frozenset(k for k in all_bitstrings(n) if not k.is_even)
    return even, odd


def build_hypergraphs(n, keep_isolated=True):
    """G on the even strings and H on the odd strings; G keeps the all-zeros vertex unless told otherwise."""
    even, odd = parity_classes(n)
    if not keep_isolated:
        even = even - {BitString(n, 0)}
    g = IndexedHypergraph(even, tuple(frozenset(k for k in even if k.digit(i)) for i in range(1, n + 1)))
    h = IndexedHypergraph(odd, tuple(frozenset(k for k in odd if k.digit(i)) for i in range(1, n + 1)))
    return g, h


def satisfies_cube_equation(a, b, n):
    """a(k(i<-0)) + a(k(i<-1)) == b(k(i<-0)) + b(k(i<-1)) for every k and every digit i."""
    for k in all_bitstrings(n):
        for i in range(1, n + 1):
            if k.digit(i):
                continue
            k1 = k.with_digit(i, 1)
            if a.get(k, 0) + a.get(k1, 0) != b.get(k, 0) + b.get(k1, 0):
                return False
    return True


def sample_cube_solution(n, rng, spread=3):
    """Random non-negative integer region counts (a, b) solving the cube equation.

    Draws an integer combination of the exact nullspace basis, clears denominators and
    shifts every count by the same constant, which keeps the equation satisfied.
    """
    size = 2 ** n
    rows = []
    for k in all_bitstrings(n):
        for i in range(1, n + 1):
            if k.digit(i):
                continue
            k1 = k.with_digit(i, 1)
            row = [0] * (2 * size)
            row[k.value] += 1
            row[k1.value] += 1
            row[size + k.value] -= 1
            row[size + k1.value] -= 1
            rows.append(row)
    basis = sympy.Matrix(rows).nullspace()
    vector = sympy.zeros(2 * size, 1)
    for column in basis:
        vector += rng.randint(-spread, spread) * column
    denominator = sympy.ilcm(1, *[sympy.fraction(x)[1] for x in vector])
    values = [int(x * denominator) for x in vector]
    shift = -min(values) if min(values) < 0 else 0
    values = [v + shift for v in values]
    a = {k: values[k.value] for k in all_bitstrings(n)}
    b = {k: values[size + k.value] for k in all_bitstrings(n)}
    return a, b


def parity_rigidity_holds(a, b, n):
    """a - b equals p on even-weight strings and -p on odd-weight ones, with p = a(0) - b(0)."""
    zero = BitString(n, 0)
    p = a.get(zero, 0) - b.get(zero, 0)
    for k in all_bitstrings(n):
        difference = a.get(k, 0) - b.get(k, 0)
        if difference != (p if k.is_even else -p):
            return False
    return True


def edge_deleted_isomorphism(n, i, verify=True):
    """The flip of digit i, an edge-order-preserving isomorphism from G - g_i to H - h_i."""
    _check_n(n)
    if not 1 <= i <= n:
        raise BadIndex(f"edge index must lie in [1, {n}], got {i}")
    g, h = build_hypergraphs(n)
    mapping = {k: k.flipped(i) for k in g.vertices}
    if verify:
        _verify_edge_deleted(g, h, i, mapping)
        if n <= EXHAUSTIVE_UNIQUENESS_MAX_N:
            found = _count_edge_deleted_isomorphisms(g, h, i)
            if found != 1:
                raise VerificationFailed(f"expected a unique isomorphism G - g_{i} -> H - h_{i}, found {found}")
    return mapping


def _verify_edge_deleted(g, h, i, mapping):
    if set(mapping.values()) != set(h.vertices):
        raise VerificationFailed(f"digit {i} flip is not a bijection onto H")
    for j, (g_edge, h_edge) in enumerate(zip(g.edges, h.edges), start=1):
        if j != i and {mapping[k] for k in g_edge} != h_edge:
            raise VerificationFailed(f"digit {i} flip does not send g_{j} onto h_{j}")


def _count_edge_deleted_isomorphisms(g, h, i):
    def signature(k, edges):
        return tuple(k in edge for j, edge in enumerate(edges, start=1) if j != i)

    sources = sorted(g.vertices)
    targets = sorted(h.vertices)
    source_signatures = [signature(k, g.edges) for k in sources]
    target_signatures = {k: signature(k, h.edges) for k in targets}
    count = 0
    for image in itertools.permutations(targets):
        if all(target_signatures[w] == s for w, s in zip(image, source_signatures)):
            count += 1
    return count


@dataclass(frozen=True)
class TreeSpec:
    label: str
    index: int
    ordering: tuple
    leaves: frozenset
    subtrees: dict = field(hash=False, repr=False)  # bits -> leaf set below t(bits)

    @property
    def width(self):
        return len(self.ordering) + 1

    @property
    def depth(self):
        return self.width - 2

    def leaf(self, bits):
        (k,) = self.subtrees[bits]
        return k

    def internal_tuples(self):
        """Tuples of the non-leaf vertices in (length, bits) order; () is the root x_i."""
        return sorted((bits for bits in self.subtrees if len(bits) < self.depth), key=lambda bits: (len(bits), bits))


def _index_of(ordering):
    n = len(ordering) + 1
    missing = set(range(1, n + 1)) - set(ordering)
    if len(set(ordering)) != len(ordering) or len(missing) != 1 or not set(ordering) <= set(range(1, n + 1)):
        raise BadOrdering(f"{tuple(ordering)} is not an ordering of all digits but one in 1..{n}")
    return missing.pop()


def build_tree(label, leaves, ordering):
    """Splits ``leaves`` level by level on the digits of ``ordering``: 0 goes left, 1 goes right."""
    ordering = tuple(ordering)
    index = _index_of(ordering)
    n = len(ordering) + 1
    leaves = frozenset(leaves)
    if len(leaves) != 2 ** (n - 2) or any(k.width != n for k in leaves):
        raise UnevenSplit(f"tree for {label} needs {2 ** (n - 2)} leaves of width {n}, got {len(leaves)}")
    subtrees = {(): leaves}
    for level in range(n - 2):
        digit = ordering[level]
        for bits in [bits for bits in subtrees if len(bits) == level]:
            left = frozenset(k for k in subtrees[bits] if not k.digit(digit))
            right = subtrees[bits] - left
            if len(left) != len(right):
                raise UnevenSplit(f"tree for {label}: leaves below {bits} split {len(left)}/{len(right)} on digit {digit}")
            subtrees[bits + (0,)] = left
            subtrees[bits + (1,)] = right
    return TreeSpec(label, index, ordering, leaves, subtrees)


@dataclass(frozen=True)
class AssembledPedigree:
    pedigree: object
    trees: tuple
    internal: dict = field(hash=False, repr=False)  # (i, bits) -> vertex for non-leaf tree vertices
    founders: dict = field(hash=False, repr=False)  # BitString -> vertex

    def vertex(self, i, bits):
        tree = self.trees[i - 1]
        if len(bits) == tree.depth:
            return self.founders[tree.leaf(bits)]
        return self.internal[(i, bits)]


def _assemble(n, trees):
    internal = {}
    next_id = n
    for tree in trees:
        for bits in tree.internal_tuples():
            if bits:
                internal[(tree.index, bits)] = next_id
                next_id += 1
            else:
                internal[(tree.index, bits)] = tree.index - 1
    founder_strings = sorted(set().union(*(tree.leaves for tree in trees)))
    founders = {k: next_id + position for position, k in enumerate(founder_strings)}
    assembled = AssembledPedigree(None, tuple(trees), internal, founders)

    arcs = []
    for tree in trees:
        for bits in tree.internal_tuples():
            child = internal[(tree.index, bits)]
            arcs.append((child, assembled.vertex(tree.index, bits + (0,))))
            arcs.append((child, assembled.vertex(tree.index, bits + (1,))))
    vertices = list(internal.values()) + list(founders.values())
    extant = [(label, position) for position, label in enumerate(extant_labels(n))]
    return AssembledPedigree(validate(vertices, arcs, extant), tuple(trees), internal, founders)


@dataclass(frozen=True)
class CounterexamplePair:
    n: int
    orderings: tuple  # orderings[i - 1] is the digit ordering shared by T_i and U_i
    t: AssembledPedigree
    u: AssembledPedigree

    @property
    def pedigrees(self):
        return self.t.pedigree, self.u.pedigree


def default_ordering(n, i):
    return tuple(d for d in range(1, n + 1) if d != i)


def build_counterexample(n, orderings=None):
    _check_n(n)
    orderings = dict(orderings or {})
    for i in orderings:
        if not 1 <= i <= n:
            raise BadIndex(f"ordering given for tree {i}, expected 1..{n}")
    resolved = tuple(tuple(orderings.get(i, default_ordering(n, i))) for i in range(1, n + 1))
    g, h = build_hypergraphs(n, keep_isolated=False)
    labels = extant_labels(n)
    t_trees, u_trees = [], []
    for i, ordering in enumerate(resolved, start=1):
        if len(ordering) != n - 1 or _index_of(ordering) != i:
            raise BadOrdering(f"ordering {ordering} for tree {i} must list every digit except {i}")
        t_trees.append(build_tree(labels[i - 1], g.edges[i - 1], ordering))
        u_trees.append(build_tree(labels[i - 1], h.edges[i - 1], ordering))
    pair = CounterexamplePair(n, resolved, _assemble(n, t_trees), _assemble(n, u_trees))
    logger.debug("counterexample n=%d: |T|=%d |U|=%d", n, len(pair.t.pedigree), len(pair.u.pedigree))
    return pair


def base_case_pair():
    """The order-3 pair with T on the star K_{1,3} and U on the triangle."""
    t, u = build_counterexample(3).pedigrees
    return u, t


def hypomorphism_witness(pair, j):
    """Isomorphism T(X - x_j) -> U(X - x_j) swapping left and right subtrees at the level of digit j."""
    n = pair.n
    if not 1 <= j <= n:
        raise BadIndex(f"extant index must lie in [1, {n}], got {j}")
    t, u = pair.pedigrees
    kept = [label for label in t.labels if label != extant_labels(n)[j - 1]]
    source = sub_pedigree(t, kept)
    mapping = {}
    for k, v in pair.t.founders.items():
        if v in source.vertices:
            mapping[v] = pair.u.founders[k.flipped(j)]
    for (i, bits), v in pair.t.internal.items():
        if i == j:
            continue
        level = pair.orderings[i - 1].index(j)
        if len(bits) > level:
            bits = bits[:level] + (1 - bits[level],) + bits[level + 1:]
        mapping[v] = pair.u.internal[(i, bits)]
    return LabelledIsomorphism(mapping)


def certify_non_isomorphic(pair):
    """Founder counts differ (2^(n-1) - 1 against 2^(n-1)), which rules out any isomorphism."""
    t, u = pair.pedigrees
    return len(t.founders) != len(u.founders)


@dataclass(frozen=True)
class CounterexampleReport:
    n: int
    non_isomorphic: bool
    method: str  # "search" or "founder-count"
    witnesses: dict = field(hash=False)  # j -> witness verified
    generic: dict = field(hash=False)  # j -> generic search found an isomorphism, when run

    @property
    def holds(self):
        return self.non_isomorphic and all(self.witnesses.values()) and all(self.generic.values())


def check_counterexample(pair, node_limit=DEFAULT_NODE_LIMIT, generic_max_n=GENERIC_SEARCH_MAX_N):
    n = pair.n
    t, u = pair.pedigrees
    searched = n <= generic_max_n
    if searched:
        non_isomorphic = find_isomorphism(t, u, node_limit) is None
    else:
        non_isomorphic = certify_non_isomorphic(pair)
    witnesses, generic = {}, {}
    for j in range(1, n + 1):
        kept = [label for label in t.labels if label != extant_labels(n)[j - 1]]
        source, target = sub_pedigree(t, kept), sub_pedigree(u, kept)
        witnesses[j] = verify_isomorphism(source, target, hypomorphism_witness(pair, j))
        if searched:
            generic[j] = find_isomorphism(source, target, node_limit) is not None
        logger.debug("n=%d j=%d witness verified=%s", n, j, witnesses[j])
    return CounterexampleReport(n, non_isomorphic, "search" if searched else "founder-count", witnesses, generic)


def grandparent_hypergraph(pedigree, d):
    """Hypergraph whose i'th edge is the set of generation-d ancestors of x_i."""
    edges = []
    for label, v in pedigree.extant:
        level = {v}
        for _ in range(d):
            level = {p for w in level for p in pedigree.parents[w]}
        edges.append(frozenset(level))
    return IndexedHypergraph(frozenset().union(*edges), tuple(edges))


@dataclass(frozen=True)
class GenderizedPedigree:
    pedigree: object
    original: object
    male: dict = field(hash=False, repr=False)
    female: dict = field(hash=False, repr=False)

    def copy_with_couple(self, v, parent):
        """The copy of non-founder ``v`` whose parents are the two copies of ``parent``."""
        first, _ = self.original.parents[v]
        return self.male[v] if parent == first else self.female[v]


def genderize(pedigree):
    """Duplicates every vertex into a male and a female copy so that a gender labelling exists.

    For a non-founder v with parents p < q, v^m is the child of p's couple and v^f of q's.
    Each label moves to a new vertex that is the child of the two copies of the old extant vertex.
    """
    offset = 2 * (max(pedigree.vertices) + 1)
    male = {v: 2 * v for v in pedigree.vertices}
    female = {v: 2 * v + 1 for v in pedigree.vertices}
    arcs = []
    for v in pedigree.vertices:
        parents = pedigree.parents[v]
        if not parents:
            continue
        for copy, parent in ((male[v], parents[0]), (female[v], parents[1])):
            arcs.append((copy, male[parent]))
            arcs.append((copy, female[parent]))
    extant = []
    for position, (label, v) in enumerate(pedigree.extant):
        child = offset + position
        arcs.append((child, male[v]))
        arcs.append((child, female[v]))
        extant.append((label, child))
    vertices = list(male.values()) + list(female.values()) + [v for _, v in extant]
    return GenderizedPedigree(validate(vertices, arcs, extant), pedigree, male, female)


def lift_isomorphism(source, target, phi):
    """Lifts an isomorphism between (sub-)pedigrees of ``source.original`` and ``target.original``."""
    mapping = phi.mapping if isinstance(phi, LabelledIsomorphism) else phi
    lifted = {}
    for v, w in mapping.items():
        parents = source.original.parents[v]
        if parents:
            for p in parents:
                lifted[source.copy_with_couple(v, p)] = target.copy_with_couple(w, mapping[p])
        else:
            lifted[source.male[v]] = target.male[w]
            lifted[source.female[v]] = target.female[w]
        label = source.original.label_of.get(v)
        if label is not None:
            lifted[source.pedigree.vertex_of[label]] = target.pedigree.vertex_of[label]
    return LabelledIsomorphism(lifted)
