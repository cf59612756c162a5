"""Reconstruction of discrete generation pedigrees from their (n-1)-decks.

Two situations pin the pedigree down: some pair of extant vertices shares both parents, or
the parent graph G_1 contains a cycle. Both readings are made from the cards themselves and
every completion is checked against the input deck before it is returned.
"""
from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field

import networkx as nx
from tqdm import tqdm

from errors import BadN, MalformedDeck, NotLayered, ResourceLimitExceeded, PedigreeValidationError
from isomorphism import canonical_code, deck, subset_key, DEFAULT_NODE_LIMIT
from pedigree import Pedigree, sub_pedigree, random_relabel, as_discrete_generation, label_sort_key, validate

logger = logging.getLogger(__name__)

DEFAULT_PROBE_CANDIDATE_LIMIT = 1_000_000


class ReconstructionStatus(enum.Enum):
    RECONSTRUCTED = "reconstructed"
    NOT_APPLICABLE = "not applicable"
    AMBIGUOUS = "ambiguous"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ReconstructionResult:
    status: ReconstructionStatus
    pedigree: Pedigree = None
    branch: str = None
    candidates: tuple = ()  # distinct completions when AMBIGUOUS

    @property
    def succeeded(self):
        return self.status is ReconstructionStatus.RECONSTRUCTED


@dataclass(frozen=True)
class DeckOfPedigrees:
    labels: tuple
    cards: dict = field(hash=False)  # missing label -> card on the other labels

    @classmethod
    def from_pedigree(cls, pedigree, rng=None):
        """The (n-1)-deck of ``pedigree``; with ``rng`` every card gets fresh random vertex ids."""
        labels = subset_key(pedigree.labels)
        cards = {}
        for missing in labels:
            card = sub_pedigree(pedigree, [label for label in labels if label != missing])
            cards[missing] = random_relabel(card, rng)[0] if rng is not None else card
        return cls(labels, cards)

    @property
    def order(self):
        return len(self.labels)

    def check(self):
        if set(self.cards) != set(self.labels) or len(set(self.labels)) != len(self.labels):
            raise MalformedDeck(f"deck needs exactly one card per label {list(self.labels)}, got {sorted(self.cards)}")
        for missing, card in self.cards.items():
            expected = set(self.labels) - {missing}
            if set(card.labels) != expected:
                raise MalformedDeck(f"card without {missing} carries labels {list(card.labels)}")

    def card_with(self, labels):
        """Some card containing every label in ``labels``, the one missing the smallest other label."""
        for missing in self.labels:
            if missing not in labels:
                return self.cards[missing]
        raise MalformedDeck(f"no card contains all of {sorted(labels, key=label_sort_key)}")

    def codes(self, node_limit=DEFAULT_NODE_LIMIT):
        return {missing: canonical_code(card, node_limit) for missing, card in self.cards.items()}


def _check_layered(deck_of_pedigrees):
    for missing, card in deck_of_pedigrees.cards.items():
        try:
            as_discrete_generation(card)
        except NotLayered as e:
            raise MalformedDeck(f"card without {missing} is not a discrete generation pedigree: {e}") from e


def _shared_parents(deck_of_pedigrees, a, c):
    card = deck_of_pedigrees.card_with({a, c})
    return len(set(card.parents_of_label(a)) & set(card.parents_of_label(c)))


def _common_parent(deck_of_pedigrees, a, b, c):
    card = deck_of_pedigrees.card_with({a, b, c})
    return bool(set(card.parents_of_label(a)) & set(card.parents_of_label(b)) & set(card.parents_of_label(c)))


def find_twins(deck_of_pedigrees):
    """The first pair (i, j) of labels sharing both parents, read from a card holding both."""
    for a, c in itertools.combinations(deck_of_pedigrees.labels, 2):
        if _shared_parents(deck_of_pedigrees, a, c) == 2:
            return a, c
    return None


def _complete(card, label, parents):
    vertex = max(card.vertices) + 1
    arcs = set(card.arcs) | {(vertex, p) for p in parents}
    extant = sorted(card.extant + ((label, vertex),), key=lambda item: label_sort_key(item[0]))
    return validate(set(card.vertices) | {vertex}, arcs, extant)


def _select(deck_of_pedigrees, completions, branch, node_limit):
    """Keeps the completions whose (n-1)-deck is the input deck, one per isomorphism class."""
    expected = deck_of_pedigrees.codes(node_limit)
    n = deck_of_pedigrees.order
    matching = {}
    for completion in completions:
        cards = deck(completion, n - 1, node_limit).cards
        if all(cards[subset_key(set(deck_of_pedigrees.labels) - {missing})] == code
               for missing, code in expected.items()):
            matching.setdefault(canonical_code(completion, node_limit), completion)
    logger.debug("%s branch: %d completions, %d consistent classes", branch, len(completions), len(matching))
    if not matching:
        raise MalformedDeck(f"no completion from the {branch} branch reproduces the deck")
    if len(matching) > 1:
        candidates = tuple(matching[code] for code in sorted(matching))
        return ReconstructionResult(ReconstructionStatus.AMBIGUOUS, None, branch, candidates)
    (pedigree,) = matching.values()
    return ReconstructionResult(ReconstructionStatus.RECONSTRUCTED, pedigree, branch)


def reconstruct_from_twins(deck_of_pedigrees, node_limit=DEFAULT_NODE_LIMIT):
    deck_of_pedigrees.check()
    if deck_of_pedigrees.order < 3:
        raise BadN(f"twin reconstruction needs order at least 3, got {deck_of_pedigrees.order}")
    _check_layered(deck_of_pedigrees)
    twins = find_twins(deck_of_pedigrees)
    if twins is None:
        return ReconstructionResult(ReconstructionStatus.NOT_APPLICABLE, branch="twins")
    i, j = twins
    card = deck_of_pedigrees.cards[i]
    completion = _complete(card, i, card.parents_of_label(j))
    return _select(deck_of_pedigrees, [completion], "twins", node_limit)


@dataclass(frozen=True)
class InferredParentGraph:
    graph: nx.MultiGraph  # nodes are parent classes, edges keyed by extant label
    sides: dict = field(hash=False)  # label -> (labels sharing one parent, labels sharing the other)

    @property
    def parent_count(self):
        return self.graph.number_of_nodes()


def infer_parent_graph(deck_of_pedigrees):
    """Recovers G_1 up to isomorphism from pairwise shared-parent counts and triple common parents.

    Assumes no two extant vertices share both parents.
    """
    labels = deck_of_pedigrees.labels
    if len(labels) < 4:
        raise BadN(f"reading common parents of three extant vertices needs order at least 4, got {len(labels)}")
    sides = {}
    for a in labels:
        siblings = [c for c in labels if c != a and _shared_parents(deck_of_pedigrees, a, c) == 1]
        groups = []
        for c in siblings:
            for group in groups:
                if _common_parent(deck_of_pedigrees, a, group[0], c):
                    group.append(c)
                    break
            else:
                groups.append([c])
        if len(groups) > 2:
            raise MalformedDeck(f"{a} has half-siblings through more than two parents")
        groups += [[]] * (2 - len(groups))
        sides[a] = (frozenset(groups[0]), frozenset(groups[1]))

    root = {}

    def find(end):
        while root.get(end, end) != end:
            end = root[end]
        return end

    for a in labels:
        for s, group in enumerate(sides[a]):
            for c in group:
                other = 0 if a in sides[c][0] else 1
                if a not in sides[c][other]:
                    raise MalformedDeck(f"half-sibling relation between {a} and {c} is not symmetric")
                x, y = find((a, s)), find((c, other))
                if x != y:
                    root[x] = y

    classes = {}
    graph = nx.MultiGraph()
    for a in labels:
        for s in (0, 1):
            classes.setdefault(find((a, s)), len(classes))
        graph.add_node(classes[find((a, 0))])
        graph.add_node(classes[find((a, 1))])
        graph.add_edge(classes[find((a, 0))], classes[find((a, 1))], key=a)
    return InferredParentGraph(graph, sides)


def reconstruct_from_cycle(deck_of_pedigrees, node_limit=DEFAULT_NODE_LIMIT):
    deck_of_pedigrees.check()
    if deck_of_pedigrees.order <= 3:
        raise BadN(f"cycle reconstruction needs order greater than 3, got {deck_of_pedigrees.order}")
    _check_layered(deck_of_pedigrees)
    if find_twins(deck_of_pedigrees) is not None:
        # parallel edges are a 2-cycle
        result = reconstruct_from_twins(deck_of_pedigrees, node_limit)
        return ReconstructionResult(result.status, result.pedigree, "cycle", result.candidates)
    inferred = infer_parent_graph(deck_of_pedigrees)
    return _reconstruct_on_cycle(deck_of_pedigrees, inferred, node_limit)


def _reconstruct_on_cycle(deck_of_pedigrees, inferred, node_limit):
    try:
        cycle = nx.find_cycle(inferred.graph)
    except nx.NetworkXNoCycle:
        return ReconstructionResult(ReconstructionStatus.NOT_APPLICABLE, branch="cycle")
    i = min((key for _, _, key in cycle), key=label_sort_key)
    card = deck_of_pedigrees.cards[i]
    discrete = as_discrete_generation(card)
    candidates = []
    for group in inferred.sides[i]:
        candidates.append([
            u for u in sorted(discrete.layers[1])
            if {card.label_of[c] for c in card.children[u]} == group
        ])
    logger.debug("cycle through %s, parent candidates %s", i, candidates)
    completions = [_complete(card, i, (u, w)) for u, w in itertools.product(*candidates) if u != w]
    return _select(deck_of_pedigrees, completions, "cycle", node_limit)


def reconstruct(deck_of_pedigrees, node_limit=DEFAULT_NODE_LIMIT):
    """Tries twins first, then a cycle of G_1; UNDETERMINED when neither applies and |X_1| > n."""
    deck_of_pedigrees.check()
    n = deck_of_pedigrees.order
    if n <= 3:
        raise BadN(f"reconstruction needs order greater than 3, got {n}")
    result = reconstruct_from_twins(deck_of_pedigrees, node_limit)
    if result.status is not ReconstructionStatus.NOT_APPLICABLE:
        return result
    inferred = infer_parent_graph(deck_of_pedigrees)
    result = _reconstruct_on_cycle(deck_of_pedigrees, inferred, node_limit)
    if result.status is not ReconstructionStatus.NOT_APPLICABLE:
        return result
    if inferred.parent_count > n:
        logger.debug("G_1 is a forest on %d > %d parents", inferred.parent_count, n)
        return ReconstructionResult(ReconstructionStatus.UNDETERMINED, branch="none")
    raise MalformedDeck(f"{n} parent edges on {inferred.parent_count} parents without a cycle")


class ProbeStatus(enum.Enum):
    RECONSTRUCTIBLE = "reconstructible within universe"
    COUNTERPART_FOUND = "counterpart found"


@dataclass(frozen=True)
class ProbeResult:
    status: ProbeStatus
    counterpart: Pedigree = None
    candidates: int = 0
    matching_classes: int = 0


def candidate_pedigrees(labels, max_vertices):
    """Every pedigree on ``labels`` with at most ``max_vertices`` vertices, up to vertex ids.

    Extant vertices pick parent pairs among the non-extant ones; non-extant vertex j is a
    founder or picks its parents among the non-extant vertices after it. Every acyclic
    pedigree has such a numbering, so each isomorphism class shows up at least once.
    """
    n = len(labels)
    for m in range(2, max_vertices - n + 1):
        others = list(range(n, n + m))
        pairs = list(itertools.combinations(others, 2))
        options = [[None] + list(itertools.combinations(others[j + 1:], 2)) for j in range(m)]
        for extant_parents in itertools.product(pairs, repeat=n):
            for other_parents in itertools.product(*options):
                arcs = [(child, p) for child, pair in enumerate(extant_parents) for p in pair]
                arcs += [(v, p) for v, pair in zip(others, other_parents) if pair for p in pair]
                yield m, arcs


def brute_reconstructibility(pedigree, r, max_vertices=None, candidate_limit=DEFAULT_PROBE_CANDIDATE_LIMIT,
                             node_limit=DEFAULT_NODE_LIMIT, progress=False):
    """Searches every small pedigree on the same labels for a non-isomorphic one with the same r-deck."""
    max_vertices = len(pedigree) if max_vertices is None else max_vertices
    labels = subset_key(pedigree.labels)
    target_deck = deck(pedigree, r, node_limit).cards
    own_code = canonical_code(pedigree, node_limit)
    extant = [(label, v) for v, label in enumerate(labels)]
    seen = set()
    counterparts = {}
    examined = 0
    for m, arcs in tqdm(candidate_pedigrees(labels, max_vertices), disable=not progress, unit=" candidates"):
        examined += 1
        if examined > candidate_limit:
            raise ResourceLimitExceeded(f"probe universe exceeds {candidate_limit:,} candidates")
        vertices = range(len(labels) + m)
        try:
            candidate = validate(vertices, arcs, extant)
        except PedigreeValidationError:
            continue
        if len(sub_pedigree(candidate, labels)) != len(candidate):
            continue
        code = canonical_code(candidate, node_limit)
        if code in seen:
            continue
        seen.add(code)
        if code == own_code:
            continue
        if deck(candidate, r, node_limit).cards == target_deck:
            counterparts[(len(candidate), code)] = candidate
    logger.debug("probe examined %d candidates, %d classes, %d counterparts", examined, len(seen), len(counterparts))
    if counterparts:
        winner = counterparts[min(counterparts)]
        return ProbeResult(ProbeStatus.COUNTERPART_FOUND, winner, examined, len(seen))
    return ProbeResult(ProbeStatus.RECONSTRUCTIBLE, None, examined, len(seen))
