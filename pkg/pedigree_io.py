"""Byte-stable file formats: pedigree / deck JSON, DOT drawings, hypergraph listings and run manifests."""
import hashlib
import json
from pathlib import Path

from errors import BadArgs, NotLayered
from isomorphism import CODE_FORMAT, Deck, subset_key
from pedigree import Gender, validate, label_sort_key, as_discrete_generation
from reconstruction import DeckOfPedigrees

FORMAT_VERSION = 1
PEDIGREE_FORMAT = "pedigree/1"
CARD_DECK_FORMAT = "card-deck/1"
CODE_DECK_FORMAT = "code-deck/1"


def dumps(document):
    return json.dumps(document, indent=2) + "\n"


def pedigree_to_dict(pedigree):
    return {
        "format": PEDIGREE_FORMAT,
        "vertices": sorted(pedigree.vertices),
        "arcs": [list(arc) for arc in sorted(pedigree.arcs)],
        "extant": {label: v for label, v in pedigree.extant},
    }


def _expect_format(document, expected):
    if not isinstance(document, dict) or document.get("format") != expected:
        found = document.get("format") if isinstance(document, dict) else type(document).__name__
        raise BadArgs(f"expected a {expected} document, found {found!r}")


def pedigree_from_dict(document):
    _expect_format(document, PEDIGREE_FORMAT)
    try:
        vertices = list(document["vertices"])
        arcs = [(c, p) for c, p in document["arcs"]]
        extant = sorted(document["extant"].items(), key=lambda item: label_sort_key(item[0]))
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise BadArgs(f"malformed pedigree document: {e}") from e
    for v in vertices + [endpoint for arc in arcs for endpoint in arc] + [v for _, v in extant]:
        if not isinstance(v, int) or isinstance(v, bool):
            raise BadArgs(f"malformed pedigree document: vertex {v!r} is not an integer")
    return validate(vertices, arcs, extant)


def read_document(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise BadArgs(f"cannot read {path}: {e}") from e


def read_pedigree(path):
    return pedigree_from_dict(read_document(path))


def write_text(path, text):
    Path(path).write_text(text)
    return Path(path)


def write_pedigree(path, pedigree):
    return write_text(path, dumps(pedigree_to_dict(pedigree)))


def card_deck_to_dict(deck_of_pedigrees):
    return {
        "format": CARD_DECK_FORMAT,
        "labels": list(deck_of_pedigrees.labels),
        "cards": [
            {"missing": missing, "pedigree": pedigree_to_dict(deck_of_pedigrees.cards[missing])}
            for missing in deck_of_pedigrees.labels
        ],
    }


def card_deck_from_dict(document):
    _expect_format(document, CARD_DECK_FORMAT)
    try:
        labels = subset_key(document["labels"])
        cards = {card["missing"]: pedigree_from_dict(card["pedigree"]) for card in document["cards"]}
    except (KeyError, TypeError) as e:
        raise BadArgs(f"malformed card deck: {e}") from e
    return DeckOfPedigrees(labels, cards)


def read_card_deck(path):
    return card_deck_from_dict(read_document(path))


def code_deck_to_dict(deck):
    return {
        "format": CODE_DECK_FORMAT,
        "code_format": CODE_FORMAT,
        "r": deck.r,
        "cards": {",".join(key): deck.cards[key].hex() for key in sorted(deck.cards, key=_subset_sort_key)},
    }


def code_deck_from_dict(document):
    _expect_format(document, CODE_DECK_FORMAT)
    if document.get("code_format") != CODE_FORMAT:
        raise BadArgs(f"deck was written with code format {document.get('code_format')!r}, expected {CODE_FORMAT!r}")
    cards = {subset_key(key.split(",")): bytes.fromhex(code) for key, code in document["cards"].items()}
    return Deck(document["r"], cards)


def _subset_sort_key(key):
    return [label_sort_key(label) for label in key]


def to_dot(pedigree, name="pedigree", genders=None):
    """Graphviz drawing with founders on top; extant vertices are boxes named by their label."""
    try:
        layers = as_discrete_generation(pedigree).layers
    except NotLayered:
        layers = None
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for v in sorted(pedigree.vertices):
        label = pedigree.label_of.get(v)
        attributes = [f'label="{label if label is not None else ""}"']
        if label is not None:
            attributes.append("shape=box")
        if genders is not None and v in genders:
            attributes.append("style=filled")
            attributes.append(f'fillcolor="{"lightblue" if genders[v] is Gender.MALE else "pink"}"')
        lines.append(f"  {v} [{', '.join(attributes)}];")
    if layers is not None:
        for layer in layers:
            lines.append(f"  {{ rank=same; {' '.join(str(v) for v in sorted(layer))} }}")
    for child, parent in sorted(pedigree.arcs):
        lines.append(f"  {child} -> {parent};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hypergraph_text(g, h):
    """Edge lists in the g_i = {..., ...} form, vertices in increasing order."""
    lines = []
    for prefix, hypergraph in (("g", g), ("h", h)):
        for i, edge in enumerate(hypergraph.edges, start=1):
            lines.append(f"{prefix}_{i} = {{{', '.join(str(k) for k in sorted(edge))}}}")
    return "\n".join(lines) + "\n"


def witnesses_to_dict(witnesses):
    return {
        str(j): {str(v): w for v, w in sorted(witness.mapping.items())}
        for j, witness in sorted(witnesses.items())
    }


def sha256_of(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(path, command, parameters, outputs):
    document = {
        "command": command,
        "parameters": parameters,
        "format_version": FORMAT_VERSION,
        "outputs": {Path(output).name: sha256_of(output) for output in sorted(outputs, key=lambda p: Path(p).name)},
    }
    return write_text(path, dumps(document))
