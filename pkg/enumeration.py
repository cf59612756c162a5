"""Counting discrete generation and general pedigrees, and the segregating-site bounds that follow."""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher
from sympy.utilities.iterables import multiset_partitions
from tqdm import tqdm

from errors import BadArgs, BadGraph, BadCount, ResourceLimitExceeded
from isomorphism import canonical_code, DEFAULT_NODE_LIMIT
from pedigree import Pedigree, sub_pedigree, extant_labels

logger = logging.getLogger(__name__)

DEFAULT_SITE_PRECISION = 30
MAX_AUTOMORPHISM_VERTICES = 12
ATLAS_MAX_N = 5
DEFAULT_CENSUS_LIMIT = 2_000_000


@dataclass(frozen=True)
class CountBounds:
    lower: object  # int or Fraction, None when the construction does not apply
    upper: int
    exact: int = None

    @property
    def within(self):
        if self.exact is None:
            return None
        return (self.lower is None or self.lower <= self.exact) and self.exact <= self.upper


def stirling2(n, k):
    if n < 0 or not 0 <= k <= n:
        raise BadArgs(f"Stirling numbers need 0 <= k <= n, got n={n}, k={k}")
    row = [1] + [0] * k
    for m in range(1, n + 1):
        for j in range(min(m, k), 0, -1):
            row[j] = j * row[j] + row[j - 1]
        row[0] = 0
    return row[k]


def count_set_partitions(n, k):
    """Partitions of an n-set into k blocks, by enumeration."""
    if n < 0 or not 0 <= k <= n:
        raise BadArgs(f"set partitions need 0 <= k <= n, got n={n}, k={k}")
    if n == 0:
        return 1
    if k == 0:
        return 0
    return sum(1 for _ in multiset_partitions(list(range(n)), k))


def _check_small(graph):
    if graph.number_of_nodes() > MAX_AUTOMORPHISM_VERTICES:
        raise ResourceLimitExceeded(
            f"automorphism counting is limited to {MAX_AUTOMORPHISM_VERTICES} vertices, got {graph.number_of_nodes()}")


def _without_isolated(graph):
    isolated = list(nx.isolates(graph))
    core = graph.copy()
    core.remove_nodes_from(isolated)
    return core, len(isolated)


def automorphism_count(graph):
    _check_small(graph)
    core, isolated = _without_isolated(graph)
    count = sum(1 for _ in GraphMatcher(core, core).isomorphisms_iter())
    return count * math.factorial(isolated)


def edge_automorphism_count(graph):
    """Number of distinct edge permutations induced by automorphisms of ``graph``."""
    _check_small(graph)
    core, _ = _without_isolated(graph)
    edges = [frozenset(e) for e in core.edges]
    induced = set()
    for mapping in GraphMatcher(core, core).isomorphisms_iter():
        induced.add(tuple(frozenset(mapping[v] for v in e) for e in edges))
    return len(induced)


def line_graph_automorphism_count(graph):
    return automorphism_count(nx.line_graph(graph))


def depth1_count_from_graph(graph, n):
    """S(n, e) e! / |aut L(G)|: ways to hang n labelled children on the e edges of G."""
    e = graph.number_of_edges()
    if not 1 <= e <= n:
        raise BadGraph(f"graph needs between 1 and {n} edges, got {e}")
    return Fraction(stirling2(n, e) * math.factorial(e), edge_automorphism_count(graph))


def tree_class_sum(n):
    """Sum of n!/|aut T| over the distinct trees on n vertices; Cayley's formula makes it n^(n-2)."""
    if n < 2:
        raise BadArgs(f"tree classes need n >= 2, got {n}")
    return sum(Fraction(math.factorial(n), automorphism_count(tree)) for tree in nx.nonisomorphic_trees(n))


def tree_lower_bound_base(n):
    """Depth-one pedigrees whose parent graph is a spanning tree of the parent generation."""
    if n < 2:
        raise BadArgs(f"tree classes need n >= 2, got {n}")
    return sum(depth1_count_from_graph(tree, n) for tree in nx.nonisomorphic_trees(n))


def is_admissible_parent_graph(graph, n):
    """Bipartite, 1..n edges, at most one isolated vertex and no isolated edge."""
    if not 1 <= graph.number_of_edges() <= n or not nx.is_bipartite(graph):
        return False
    if sum(1 for _ in nx.isolates(graph)) > 1:
        return False
    return not any(len(component) == 2 for component in nx.connected_components(graph))


def admissible_depth1_sum(n):
    if not 2 <= n <= ATLAS_MAX_N:
        raise BadArgs(f"the admissible class is summed for 2 <= n <= {ATLAS_MAX_N}, got {n}")
    graphs = [g for g in nx.graph_atlas_g() if g.number_of_nodes() == n and is_admissible_parent_graph(g, n)]
    logger.debug("%d admissible parent graphs on %d vertices", len(graphs), n)
    return sum((depth1_count_from_graph(g, n) for g in graphs), Fraction(0))


def _tree_base(n):
    return Fraction((n - 1) * n ** (n - 2), 2)


def _check_nd(n, d):
    if n < 2 or d < 1:
        raise BadArgs(f"bounds need n >= 2 and d >= 1, got n={n}, d={d}")


def bounds_N(n, d):
    """Bounds on the number of discrete generation pedigrees with n vertices per generation and depth d."""
    _check_nd(n, d)
    return CountBounds(_tree_base(n) ** d, math.comb(n, 2) ** (n * d))


def bounds_M(n, d):
    """Bounds on the number of general pedigrees; the lower bound needs n even (n/2 per gender)."""
    _check_nd(n, d)
    upper = math.comb(n * d - 1, 2) ** (n * d)
    if n % 2:
        return CountBounds(None, upper)
    lower = _tree_base(n)
    for k in range(d - 1):
        lower *= (Fraction(n, 2) * (d - 1 - k)) ** n
    return CountBounds(lower, upper)


def bounded_gap_lower_M(n, d, t):
    """Lower bound for general pedigrees where no parent sits more than t generations above its child."""
    _check_nd(n, d)
    if n % 2 or not 1 <= t <= d - 1:
        raise BadArgs(f"bounded gap needs n even and 1 <= t <= d - 1, got n={n}, d={d}, t={t}")
    lower = _tree_base(n)
    for _ in range(d - t):
        lower *= Fraction(n * t, 2) ** n
    for k in range(d - t, d - 1):
        lower *= Fraction(n * (d - k - 1), 2) ** n
    return lower


def _layered_assignments(n, d, strict_population):
    pairs = list(itertools.combinations(range(n), 2))
    for choice in itertools.product(pairs, repeat=n * d):
        if strict_population:
            covered = all(
                set().union(*choice[layer * n:(layer + 1) * n]) == set(range(n))
                for layer in range(d)
            )
            if not covered:
                continue
        yield choice


def brute_count_N(n, d, strict_population=False, node_limit=DEFAULT_NODE_LIMIT, limit=DEFAULT_CENSUS_LIMIT,
                  progress=False):
    """Distinct discrete generation pedigrees with n vertices per generation, by exhaustive enumeration.

    Every vertex below the top generation picks a pair of parents in the generation above;
    vertices without an extant descendant are dropped. With ``strict_population`` every vertex
    above the bottom generation must have a child.
    """
    _check_nd(n, d)
    total = math.comb(n, 2) ** (n * d)
    if total > limit:
        raise ResourceLimitExceeded(f"census of {total:,} assignments exceeds the limit of {limit:,}")
    labels = extant_labels(n)
    extant = tuple((label, v) for v, label in enumerate(labels))
    codes = set()
    assignments = _layered_assignments(n, d, strict_population)
    for choice in tqdm(assignments, total=total, disable=not progress, unit=" assignments"):
        arcs = []
        for position, (p, q) in enumerate(choice):
            layer, child = divmod(position, n)
            arcs.append((layer * n + child, (layer + 1) * n + p))
            arcs.append((layer * n + child, (layer + 1) * n + q))
        full = Pedigree(frozenset(range(n * (d + 1))), frozenset(arcs), extant)
        codes.add(canonical_code(sub_pedigree(full, labels), node_limit))
    logger.debug("census n=%d d=%d strict=%s: %d classes", n, d, strict_population, len(codes))
    return len(codes)


def census(n, d, strict_population=False, node_limit=DEFAULT_NODE_LIMIT, limit=DEFAULT_CENSUS_LIMIT,
           progress=False):
    bounds = bounds_N(n, d)
    exact = brute_count_N(n, d, strict_population, node_limit, limit, progress)
    return CountBounds(bounds.lower, bounds.upper, exact)


@dataclass(frozen=True)
class SiteBound:
    n: int
    count: object
    sites: Decimal  # log_4(count) / n
    minimum_sites: int  # smallest integer s with 4^(n s) >= count
    d: int = None
    t: int = None


def _log(value, precision):
    with localcontext() as context:
        context.prec = precision
        if isinstance(value, Fraction):
            return Decimal(value.numerator).ln() - Decimal(value.denominator).ln()
        return Decimal(value).ln()


def site_bound(count, n, precision=DEFAULT_SITE_PRECISION, d=None, t=None):
    """Segregating sites needed so that 4^(n s) sequence combinations can tell ``count`` pedigrees apart."""
    if count < 1:
        raise BadCount(f"count must be at least 1, got {count}")
    if n < 1:
        raise BadArgs(f"n must be positive, got {n}")
    with localcontext() as context:
        context.prec = precision
        sites = _log(count, precision + 10) / (_log(4, precision + 10) * n)
    minimum = max(0, int(sites) - 1)
    while Fraction(4) ** (n * minimum) < count:
        minimum += 1
    return SiteBound(n, count, sites, minimum, d, t)


def _log2(value, precision):
    with localcontext() as context:
        context.prec = precision
        return _log(value, precision + 10) / _log(2, precision + 10)


def steel_hein_sites(n, d, precision=DEFAULT_SITE_PRECISION):
    """The earlier (d/3) log n estimate."""
    return Decimal(d) / 3 * _log2(n, precision)


def discrete_sites_estimate(n, d, precision=DEFAULT_SITE_PRECISION):
    return Decimal(d) / 2 * _log2(n, precision)


def general_sites_estimate(n, d, precision=DEFAULT_SITE_PRECISION):
    return Decimal(d) / 2 * _log2(n * d, precision)


def gap_sites_estimate(n, t, d, precision=DEFAULT_SITE_PRECISION):
    return Decimal(d) / 2 * _log2(n * t, precision)


def discrete_upper_sites_estimate(n, d, precision=DEFAULT_SITE_PRECISION):
    return Decimal(d) * _log2(n, precision)


def general_upper_sites_estimate(n, d, precision=DEFAULT_SITE_PRECISION):
    return Decimal(d) * _log2(n * d, precision)
