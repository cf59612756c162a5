"""Label-fixing isomorphism of pedigrees.

Canonical forms come from colour refinement followed by a complete
individualisation-refinement search. Refinement only prunes; the search visits every
leaf up to automorphisms it has already found, so equal codes mean isomorphic pedigrees.
"""
from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field

from errors import ResourceLimitExceeded, ExtantMismatch, BadR, VerificationFailed
from pedigree import sub_pedigree, label_sort_key

logger = logging.getLogger(__name__)

DEFAULT_NODE_LIMIT = 10_000_000
CODE_FORMAT = "pdgc/1"


@dataclass(frozen=True)
class CanonicalForm:
    code: bytes
    order: tuple  # vertices in canonical position order

    @property
    def position(self):
        return {v: i for i, v in enumerate(self.order)}


@dataclass(frozen=True)
class LabelledIsomorphism:
    mapping: dict = field(hash=False)

    def __getitem__(self, vertex):
        return self.mapping[vertex]

    def __len__(self):
        return len(self.mapping)


class _CanonicalSearch:
    def __init__(self, pedigree, node_limit):
        self.pedigree = pedigree
        self.vertices = sorted(pedigree.vertices)
        self.parents = pedigree.parents
        self.children = pedigree.children
        self.node_limit = node_limit
        self.nodes = 0
        self.best_certificate = None
        self.best_colours = None
        self.automorphisms = []

    def initial_colours(self):
        depths = self.pedigree.depths
        label_of = self.pedigree.label_of

        def key(v):
            label = label_of.get(v)
            tag = (0, label_sort_key(label)) if label is not None else (1, ())
            return tag, len(self.parents[v]), len(self.children[v]), depths[v]

        return _rank({v: key(v) for v in self.vertices})

    def refine(self, colours):
        cells = len(set(colours.values()))
        while True:
            signatures = {
                v: (
                    colours[v],
                    tuple(sorted(colours[p] for p in self.parents[v])),
                    tuple(sorted(colours[c] for c in self.children[v])),
                )
                for v in self.vertices
            }
            refined = _rank(signatures)
            refined_cells = len(set(refined.values()))
            if refined_cells == cells:
                return refined
            colours, cells = refined, refined_cells

    def run(self):
        self.search(self.refine(self.initial_colours()), ())
        logger.debug("canonical search on %d vertices visited %d nodes, %d automorphisms",
                     len(self.vertices), self.nodes, len(self.automorphisms))
        order = tuple(sorted(self.vertices, key=lambda v: self.best_colours[v]))
        code = json.dumps([CODE_FORMAT, self.best_certificate], separators=(",", ":")).encode()
        return CanonicalForm(code, order)

    def search(self, colours, prefix):
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise ResourceLimitExceeded(f"canonical labelling exceeded {self.node_limit:,} search nodes")
        cells = {}
        for v in self.vertices:
            cells.setdefault(colours[v], []).append(v)
        target = next((cells[c] for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            self.leaf(colours)
            return
        explored = []
        for v in target:
            if explored and self.in_explored_orbit(v, explored, prefix):
                continue
            explored.append(v)
            individualised = _rank({u: (colours[u], 0 if u == v else 1) for u in self.vertices})
            self.search(self.refine(individualised), prefix + (v,))

    def in_explored_orbit(self, vertex, explored, prefix):
        generators = [g for g in self.automorphisms if all(g[p] == p for p in prefix)]
        if not generators:
            return False
        root = {}

        def find(x):
            while root.get(x, x) != x:
                x = root[x]
            return x

        for g in generators:
            for v, w in g.items():
                a, b = find(v), find(w)
                if a != b:
                    root[a] = b
        orbit = find(vertex)
        return any(find(e) == orbit for e in explored)

    def leaf(self, colours):
        arcs = sorted((colours[c], colours[p]) for c, p in self.pedigree.arcs)
        labels = [[label, colours[v]] for label, v in self.pedigree.extant]
        labels.sort(key=lambda item: label_sort_key(item[0]))
        certificate = [len(self.vertices), [list(a) for a in arcs], labels]
        if self.best_certificate is None or certificate < self.best_certificate:
            self.best_certificate = certificate
            self.best_colours = colours
        elif certificate == self.best_certificate:
            by_position = {c: v for v, c in self.best_colours.items()}
            automorphism = {v: by_position[colours[v]] for v in self.vertices}
            if any(v != w for v, w in automorphism.items()):
                self.automorphisms.append(automorphism)


def _rank(keys):
    ranks = {key: i for i, key in enumerate(sorted(set(keys.values())))}
    return {v: ranks[key] for v, key in keys.items()}


def canonical_form(pedigree, node_limit=DEFAULT_NODE_LIMIT):
    return _CanonicalSearch(pedigree, node_limit).run()


def canonical_code(pedigree, node_limit=DEFAULT_NODE_LIMIT):
    return canonical_form(pedigree, node_limit).code


def _check_same_extant(p, q):
    if set(p.labels) != set(q.labels):
        raise ExtantMismatch(f"extant labels differ: {sorted(p.labels, key=label_sort_key)} "
                             f"vs {sorted(q.labels, key=label_sort_key)}")


def find_isomorphism(p, q, node_limit=DEFAULT_NODE_LIMIT):
    """Returns a LabelledIsomorphism from ``p`` to ``q`` or None when they are not isomorphic."""
    _check_same_extant(p, q)
    if len(p.vertices) != len(q.vertices) or len(p.arcs) != len(q.arcs):
        return None
    form_p = canonical_form(p, node_limit)
    form_q = canonical_form(q, node_limit)
    if form_p.code != form_q.code:
        return None
    witness = LabelledIsomorphism(dict(zip(form_p.order, form_q.order)))
    if not verify_isomorphism(p, q, witness):
        raise VerificationFailed("canonical orders of equal codes do not give an isomorphism")
    return witness


def verify_isomorphism(p, q, isomorphism):
    mapping = isomorphism.mapping if isinstance(isomorphism, LabelledIsomorphism) else isomorphism
    if set(mapping) != set(p.vertices):
        return False
    if set(mapping.values()) != set(q.vertices) or len(p.vertices) != len(q.vertices):
        return False
    if set(p.labels) != set(q.labels):
        return False
    if any(mapping[v] != q.vertex_of[label] for label, v in p.extant):
        return False
    mapped = {(mapping[c], mapping[a]) for c, a in p.arcs}
    return mapped == set(q.arcs)


def subset_key(labels):
    return tuple(sorted(labels, key=label_sort_key))


@dataclass(frozen=True)
class Deck:
    r: int
    cards: dict = field(hash=False)  # subset key -> canonical code

    def __len__(self):
        return len(self.cards)

    def agreeing(self, other):
        return [key for key in self.cards if self.cards[key] == other.cards.get(key)]


def _check_r(pedigree, r):
    if not 1 <= r <= pedigree.order:
        raise BadR(f"r must lie in [1, {pedigree.order}], got {r}")


def deck(pedigree, r, node_limit=DEFAULT_NODE_LIMIT):
    _check_r(pedigree, r)
    cards = {}
    for subset in itertools.combinations(subset_key(pedigree.labels), r):
        cards[subset] = canonical_code(sub_pedigree(pedigree, subset), node_limit)
    return Deck(r, cards)


def are_r_hypomorphic(p, q, r, node_limit=DEFAULT_NODE_LIMIT):
    _check_same_extant(p, q)
    _check_r(p, r)
    deck_p = deck(p, r, node_limit)
    deck_q = deck(q, r, node_limit)
    return all(deck_p.cards[key] == deck_q.cards[key] for key in deck_p.cards)


def hypomorphism_witnesses(p, q, r, node_limit=DEFAULT_NODE_LIMIT):
    _check_same_extant(p, q)
    _check_r(p, r)
    witnesses = {}
    for subset in itertools.combinations(subset_key(p.labels), r):
        witnesses[subset] = find_isomorphism(sub_pedigree(p, subset), sub_pedigree(q, subset), node_limit)
    return witnesses
