#!/usr/bin/env python3

import argparse
import logging
import random
import sys
from pathlib import Path

from counterexample import build_counterexample, build_hypergraphs, check_counterexample, genderize, \
    lift_isomorphism, hypomorphism_witness, base_case_pair, certify_non_isomorphic, GENERIC_SEARCH_MAX_N
from enumeration import bounds_N, bounds_M, bounded_gap_lower_M, census, site_bound, steel_hein_sites, \
    discrete_sites_estimate, general_sites_estimate, gap_sites_estimate, DEFAULT_SITE_PRECISION, CountBounds
from errors import PedigreeError, VerificationFailed, BadArgs
from isomorphism import find_isomorphism, verify_isomorphism, hypomorphism_witnesses, deck, DEFAULT_NODE_LIMIT
from output import Output, format_error, format_label, format_count, format_verdict, format_warning, \
    format_boring_string, format_success, format_subset, format_code, format_mapping
from pedigree import sub_pedigree, find_gender_labelling, random_discrete_generation, extant_labels
from pedigree_io import write_pedigree, write_text, to_dot, hypergraph_text, witnesses_to_dict, dumps, \
    write_manifest, read_pedigree, read_card_deck, card_deck_to_dict, code_deck_to_dict, pedigree_to_dict
from reconstruction import DeckOfPedigrees, reconstruct, brute_reconstructibility, ReconstructionStatus, \
    ProbeStatus, DEFAULT_PROBE_CANDIDATE_LIMIT

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_BAD_ARGUMENTS = 2

logger = logging.getLogger("pedigrees")


class Pedigrees:
    def __init__(self, arguments):
        self.arguments = arguments
        self.output = Output(arguments.verbose)
        self.node_limit = arguments.node_limit

    def start(self):
        handlers = {
            "counterexample": self.counterexample,
            "verify": self.verify,
            "census": self.census,
            "bounds": self.bounds,
            "reconstruct": self.reconstruct,
            "deck": self.deck,
            "probe": self.probe,
            "figures": self.figures,
            "roundtrip": self.roundtrip,
        }
        return handlers[self.arguments.command]()

    @staticmethod
    def parse_orderings(values):
        orderings = {}
        for value in values or []:
            try:
                index, digits = value.split(":")
                orderings[int(index)] = tuple(int(d) for d in digits.split(","))
            except ValueError as e:
                raise BadArgs(f"cannot parse ordering {value!r}, expected e.g. 5:2,3,1,4") from e
        return orderings

    def counterexample(self):
        n = self.arguments.n
        outdir = Path(self.arguments.outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        orderings = self.parse_orderings(self.arguments.ordering)
        pair = build_counterexample(n, orderings)
        t, u = pair.pedigrees
        self.output.print_pedigree("T", t)
        self.output.print_pedigree("U", u)

        report = check_counterexample(pair, self.node_limit)
        self.output.print_line(
            f"T and U isomorphic: {format_verdict(not report.non_isomorphic, 'yes', 'no')} "
            f"({format_boring_string(report.method)})"
        )
        verified = sum(report.witnesses.values())
        self.output.print_line(f"hypomorphism witnesses verified: {format_count(verified)}/{format_count(n)}")
        if not report.holds:
            raise VerificationFailed(f"counterexample for n={n} failed verification")

        g, h = build_hypergraphs(n)
        witnesses = {j: hypomorphism_witness(pair, j) for j in range(1, n + 1)}
        outputs = [
            write_pedigree(outdir / "T.json", t),
            write_pedigree(outdir / "U.json", u),
            write_text(outdir / "hypergraphs.txt", hypergraph_text(g, h)),
            write_text(outdir / "witnesses.json", dumps(witnesses_to_dict(witnesses))),
            write_text(outdir / "T.dot", to_dot(t, "T")),
            write_text(outdir / "U.dot", to_dot(u, "U")),
        ]
        if self.arguments.genderize:
            outputs += self.write_genderized(pair, witnesses, outdir)
        parameters = {
            "n": n,
            "orderings": {str(i): list(o) for i, o in enumerate(pair.orderings, start=1)},
            "genderize": self.arguments.genderize,
        }
        write_manifest(outdir / "manifest.json", "counterexample", parameters, outputs)
        self.output.print_line(format_success(f"wrote {len(outputs) + 1} files to {outdir}"))
        return EXIT_OK

    def write_genderized(self, pair, witnesses, outdir):
        t, u = pair.pedigrees
        gendered_t, gendered_u = genderize(t), genderize(u)
        genders_t = find_gender_labelling(gendered_t.pedigree)
        genders_u = find_gender_labelling(gendered_u.pedigree)
        if pair.n <= GENERIC_SEARCH_MAX_N:
            distinct = find_isomorphism(gendered_t.pedigree, gendered_u.pedigree, self.node_limit) is None
        else:
            distinct = certify_non_isomorphic(pair)
        lifted = {}
        for j, witness in witnesses.items():
            lifted[j] = lift_isomorphism(gendered_t, gendered_u, witness)
            kept = [label for label in t.labels if label != extant_labels(pair.n)[j - 1]]
            if not verify_isomorphism(sub_pedigree(gendered_t.pedigree, kept),
                                      sub_pedigree(gendered_u.pedigree, kept), lifted[j]):
                raise VerificationFailed(f"lifted witness for x{j} is not an isomorphism")
        if not distinct:
            raise VerificationFailed("genderized pedigrees are isomorphic")
        self.output.print_line(f"genderized pair: gender labellings found, "
                               f"{format_count(len(lifted))} lifted witnesses verified")
        return [
            write_pedigree(outdir / "T-gendered.json", gendered_t.pedigree),
            write_pedigree(outdir / "U-gendered.json", gendered_u.pedigree),
            write_text(outdir / "witnesses-gendered.json", dumps(witnesses_to_dict(lifted))),
            write_text(outdir / "T-gendered.dot", to_dot(gendered_t.pedigree, "T", genders_t)),
            write_text(outdir / "U-gendered.dot", to_dot(gendered_u.pedigree, "U", genders_u)),
        ]

    def verify(self):
        first = read_pedigree(self.arguments.a)
        second = read_pedigree(self.arguments.b)
        r = self.arguments.r
        isomorphism = find_isomorphism(first, second, self.node_limit)
        witnesses = hypomorphism_witnesses(first, second, r, self.node_limit)
        hypomorphic = all(witness is not None for witness in witnesses.values())
        if self.arguments.json:
            document = {
                "isomorphic": isomorphism is not None,
                "hypomorphic": hypomorphic,
                "r": r,
                "subsets": {
                    ",".join(subset): None if witness is None else
                    {str(v): w for v, w in sorted(witness.mapping.items())}
                    for subset, witness in witnesses.items()
                },
            }
            self.output.print_without_linebreak(dumps(document))
            return EXIT_OK
        self.output.print_line(f"isomorphic:  {format_verdict(isomorphism is not None)}")
        self.output.print_line(f"{r}-hypomorphic: {format_verdict(hypomorphic)}")
        self.output.print_hypomorphism(witnesses)
        if isomorphism is not None:
            self.output.print_verbose(f"isomorphism: {format_mapping(isomorphism.mapping)}")
        return EXIT_OK

    def census(self):
        n, d = self.arguments.n, self.arguments.d
        strict = self.arguments.strict_population
        primary = census(n, d, strict, self.node_limit, progress=self.arguments.progress)
        other = census(n, d, not strict, self.node_limit, progress=self.arguments.progress)
        if self.arguments.json:
            document = {
                "n": n,
                "d": d,
                "lower": json_number(primary.lower),
                "upper": primary.upper,
                "exact": primary.exact,
                "strict_population": strict,
                "other_model_exact": other.exact,
                "within_bounds": primary.within,
            }
            self.output.print_without_linebreak(dumps(document))
        else:
            self.output.print_bounds(primary)
            model = "counting" if strict else "strict population"
            self.output.print_line(f"{model} model count: {format_count(other.exact)}")
        if not primary.within:
            raise VerificationFailed(f"N({n},{d}) = {primary.exact} lies outside [{primary.lower}, {primary.upper}]")
        return EXIT_OK

    def bounds(self):
        model, n, d, t = self.arguments.model, self.arguments.n, self.arguments.d, self.arguments.t
        precision = self.arguments.precision
        if model == "discrete":
            bounds = bounds_N(n, d)
            estimates = {"steel_hein": steel_hein_sites(n, d, precision),
                         "discrete": discrete_sites_estimate(n, d, precision)}
        elif model == "general":
            bounds = bounds_M(n, d)
            estimates = {"steel_hein": steel_hein_sites(n, d, precision),
                         "general": general_sites_estimate(n, d, precision)}
        else:
            bounds = CountBounds(bounded_gap_lower_M(n, d, t), bounds_M(n, d).upper)
            estimates = {"steel_hein": steel_hein_sites(n, d, precision),
                         "gap": gap_sites_estimate(n, t, d, precision)}
        sites = None
        if bounds.lower is not None and bounds.lower >= 1:
            sites = site_bound(bounds.lower, n, precision, d, t)
        document = {
            "model": model,
            "n": n,
            "d": d,
            "lower": json_number(bounds.lower),
            "upper": bounds.upper,
            "site_bound": None if sites is None else {"sites": str(sites.sites), "minimum_sites": sites.minimum_sites},
            "estimates": {name: str(value) for name, value in estimates.items()},
        }
        if t is not None:
            document["t"] = t
        if self.arguments.json:
            self.output.print_without_linebreak(dumps(document))
            return EXIT_OK
        self.output.print_bounds(bounds)
        if sites is None:
            self.output.print_line(format_warning("no site bound: the lower bound is absent or below 1"))
        else:
            self.output.print_line(f"segregating sites: {sites.sites} (at least {format_count(sites.minimum_sites)})")
        for name, value in estimates.items():
            self.output.print_line(f"  {format_label(name)} estimate: {value}")
        return EXIT_OK

    def reconstruct(self):
        deck_of_pedigrees = read_card_deck(self.arguments.deck)
        result = reconstruct(deck_of_pedigrees, self.node_limit)
        if result.status is not ReconstructionStatus.RECONSTRUCTED:
            self.output.print_line(format_warning(f"{result.status.value} (branch: {result.branch})"))
            return EXIT_NEGATIVE
        if self.arguments.out:
            write_pedigree(self.arguments.out, result.pedigree)
            self.output.print_line(format_success(f"reconstructed via {result.branch}, wrote {self.arguments.out}"))
        else:
            self.output.print_without_linebreak(dumps(pedigree_to_dict(result.pedigree)))
        return EXIT_OK

    def deck(self):
        pedigree = read_pedigree(self.arguments.pedigree)
        if self.arguments.cards:
            rng = random.Random(self.arguments.seed) if self.arguments.shuffle else None
            document = card_deck_to_dict(DeckOfPedigrees.from_pedigree(pedigree, rng))
        else:
            r = self.arguments.r if self.arguments.r is not None else pedigree.order - 1
            codes = deck(pedigree, r, self.node_limit)
            document = code_deck_to_dict(codes)
            for subset, code in sorted(codes.cards.items()):
                self.output.print_verbose(f"  {format_subset(subset)} {format_code(code)}")
        write_text(self.arguments.out, dumps(document))
        self.output.print_line(format_success(f"wrote {self.arguments.out}"))
        return EXIT_OK

    def probe(self):
        pedigree = read_pedigree(self.arguments.pedigree)
        result = brute_reconstructibility(
            pedigree,
            self.arguments.r,
            self.arguments.max_vertices,
            self.arguments.candidate_limit,
            self.node_limit,
            self.arguments.progress,
        )
        self.output.print_line(
            f"{format_count(result.candidates)} candidates, {format_count(result.matching_classes)} classes"
        )
        if result.status is ProbeStatus.COUNTERPART_FOUND:
            self.output.print_line(format_warning(f"{result.status.value}"))
            self.output.print_pedigree("counterpart", result.counterpart)
            if self.arguments.out:
                write_pedigree(self.arguments.out, result.counterpart)
        else:
            self.output.print_line(format_success(result.status.value))
        return EXIT_OK

    def figures(self):
        outdir = Path(self.arguments.outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        star, triangle = base_case_pair()
        outputs = [
            write_text(outdir / "star-T.dot", to_dot(star, "T")),
            write_text(outdir / "triangle-U.dot", to_dot(triangle, "U")),
        ]
        for first, second in (("x1", "x2"), ("x1", "x3"), ("x2", "x3")):
            name = f"{first}{second}"
            outputs.append(write_text(outdir / f"star-T-{name}.dot", to_dot(sub_pedigree(star, [first, second]), "T")))
            outputs.append(write_text(outdir / f"triangle-U-{name}.dot",
                                      to_dot(sub_pedigree(triangle, [first, second]), "U")))
        t, u = build_counterexample(5, {5: (2, 3, 1, 4)}).pedigrees
        outputs.append(write_text(outdir / "tree-T5.dot", to_dot(sub_pedigree(t, ["x5"]), "T5")))
        outputs.append(write_text(outdir / "tree-U5.dot", to_dot(sub_pedigree(u, ["x5"]), "U5")))
        for name, pedigree in (("T", star), ("U", triangle)):
            gendered = genderize(pedigree).pedigree
            genders = find_gender_labelling(gendered)
            outputs.append(write_text(outdir / f"gendered-{name}.dot", to_dot(gendered, name, genders)))
        write_manifest(outdir / "manifest.json", "figures", {}, outputs)
        self.output.print_line(format_success(f"wrote {len(outputs) + 1} files to {outdir}"))
        return EXIT_OK

    def roundtrip(self):
        n, depth, trials = self.arguments.n, self.arguments.depth, self.arguments.trials
        parents = self.arguments.parents or n
        rng = random.Random(self.arguments.seed)
        tally = {status: 0 for status in ReconstructionStatus}
        failures = 0
        for _ in range(trials):
            pedigree = random_discrete_generation(n, depth, rng, [n] + [parents] * depth)
            result = reconstruct(DeckOfPedigrees.from_pedigree(pedigree, rng), self.node_limit)
            tally[result.status] += 1
            logger.debug("%d vertices, %s via %s", len(pedigree), result.status.value, result.branch)
            if result.succeeded and find_isomorphism(result.pedigree, pedigree, self.node_limit) is None:
                failures += 1
        self.output.print_line(f"{format_count(trials)} pedigrees of order {n}, depth {depth}, seed {self.arguments.seed}")
        for status, count in tally.items():
            self.output.print_line(f"{status.value:>15}: {format_count(count)}")
        if failures:
            raise VerificationFailed(f"{failures} reconstructions differ from their source pedigree")
        if parents <= n and tally[ReconstructionStatus.RECONSTRUCTED] != trials:
            raise VerificationFailed("some pedigrees with at most n parents were not reconstructed")
        return EXIT_OK


def json_number(value):
    if value is None or getattr(value, "denominator", 1) == 1:
        return None if value is None else int(value)
    return str(value)


def main():
    argument_parser = get_argument_parser()
    arguments = argument_parser.parse_args()
    logging.basicConfig(
        level=logging.DEBUG if arguments.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if arguments.command is None:
        argument_parser.print_help()
        sys.exit(EXIT_BAD_ARGUMENTS)

    if arguments.command == "bounds" and arguments.model == "gap" and arguments.t is None:
        print("--t is required for --model gap")
        argument_parser.print_help()
        sys.exit(EXIT_BAD_ARGUMENTS)

    if arguments.command == "deck" and not arguments.cards and arguments.shuffle:
        print("--shuffle only works in conjunction with --cards")
        sys.exit(EXIT_BAD_ARGUMENTS)

    if arguments.command == "roundtrip" and arguments.n <= 3:
        print("--n must be at least 4 for reconstruction")
        sys.exit(EXIT_BAD_ARGUMENTS)

    try:
        sys.exit(Pedigrees(arguments).start())
    except PedigreeError as e:
        print(format_error(f"{type(e).__name__}: {e}"))
        sys.exit(e.exit_code)


def get_argument_parser():
    parser = argparse.ArgumentParser(
        description="Construct, compare, reconstruct and count pedigrees.",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        default=False,
        help="Log search and enumeration diagnostics.",
    )
    parser.add_argument(
        "--node-limit",
        type=int,
        default=DEFAULT_NODE_LIMIT,
        help=f"(default: {DEFAULT_NODE_LIMIT:,}) Give up canonical labelling after this many search nodes.",
    )
    subparsers = parser.add_subparsers(dest="command")

    counterexample_parser = subparsers.add_parser(
        "counterexample",
        help="Build the non-isomorphic (n-1)-hypomorphic pair of order n and verify it.",
    )
    counterexample_parser.add_argument("--n", type=int, required=True, help="Order of the pedigrees (at least 3).")
    counterexample_parser.add_argument(
        "--ordering",
        action="append",
        metavar="I:D1,D2,...",
        help="Digit ordering for tree I, e.g. 5:2,3,1,4. Can be used multiple times "
             "(default: ascending digits).",
    )
    counterexample_parser.add_argument(
        "--genderize",
        action="store_true",
        help="Also write the duplicated pedigrees that admit a gender labelling.",
    )
    counterexample_parser.add_argument("--outdir", default=".", help="(default: .) Output directory.")

    verify_parser = subparsers.add_parser("verify", help="Compare two pedigrees and their r-decks.")
    verify_parser.add_argument("--a", required=True, metavar="PEDIGREE", help="First pedigree JSON file.")
    verify_parser.add_argument("--b", required=True, metavar="PEDIGREE", help="Second pedigree JSON file.")
    verify_parser.add_argument("--r", type=int, required=True, help="Size of the extant subsets to compare.")
    verify_parser.add_argument("--json", action="store_true", help="Print a JSON report.")

    census_parser = subparsers.add_parser("census", help="Count discrete generation pedigrees exhaustively.")
    census_parser.add_argument("--n", type=int, required=True, help="Vertices per generation.")
    census_parser.add_argument("--d", type=int, required=True, help="Depth.")
    census_parser.add_argument(
        "--strict-population",
        action="store_true",
        help="Require every vertex above the bottom generation to have a child.",
    )
    census_parser.add_argument("--json", action="store_true", help="Print a JSON report.")
    census_parser.add_argument("--progress", action="store_true", help="Show a progress bar.")

    bounds_parser = subparsers.add_parser("bounds", help="Evaluate the counting bounds and site estimates.")
    bounds_parser.add_argument("--model", choices=["discrete", "general", "gap"], default="discrete",
                               help="(default: discrete) Pedigree model.")
    bounds_parser.add_argument("--n", type=int, required=True, help="Vertices per generation.")
    bounds_parser.add_argument("--d", type=int, required=True, help="Depth.")
    bounds_parser.add_argument("--t", type=int, help="Largest generation gap (only for --model gap).")
    bounds_parser.add_argument(
        "--precision",
        type=int,
        default=DEFAULT_SITE_PRECISION,
        help=f"(default: {DEFAULT_SITE_PRECISION}) Significant digits of the site logarithms.",
    )
    bounds_parser.add_argument("--json", action="store_true", help="Print a JSON report.")

    reconstruct_parser = subparsers.add_parser("reconstruct", help="Reconstruct a pedigree from its card deck.")
    reconstruct_parser.add_argument("--deck", required=True, help="Card deck JSON file.")
    reconstruct_parser.add_argument("--out", help="Write the pedigree here instead of printing it.")

    deck_parser = subparsers.add_parser("deck", help="Write the deck of a pedigree.")
    deck_parser.add_argument("--pedigree", required=True, help="Pedigree JSON file.")
    deck_parser.add_argument("--r", type=int, help="Subset size (default: order - 1).")
    deck_parser.add_argument("--cards", action="store_true",
                             help="Write the (n-1)-deck of full pedigrees instead of canonical codes.")
    deck_parser.add_argument("--shuffle", action="store_true", help="Give every card random vertex ids.")
    deck_parser.add_argument("--seed", type=int, default=0, help="(default: 0) Seed for --shuffle.")
    deck_parser.add_argument("--out", required=True, help="Output file.")

    probe_parser = subparsers.add_parser("probe", help="Search small pedigrees for one with the same r-deck.")
    probe_parser.add_argument("--pedigree", required=True, help="Pedigree JSON file.")
    probe_parser.add_argument("--r", type=int, required=True, help="Subset size.")
    probe_parser.add_argument("--max-vertices", type=int,
                              help="Largest candidate pedigree (default: size of the given pedigree).")
    probe_parser.add_argument(
        "--candidate-limit",
        type=int,
        default=DEFAULT_PROBE_CANDIDATE_LIMIT,
        help=f"(default: {DEFAULT_PROBE_CANDIDATE_LIMIT:,}) Give up after this many candidates.",
    )
    probe_parser.add_argument("--out", help="Write a counterpart here when one is found.")
    probe_parser.add_argument("--progress", action="store_true", help="Show a progress bar.")

    figures_parser = subparsers.add_parser("figures", help="Write DOT drawings of the small constructions.")
    figures_parser.add_argument("--outdir", default="docs", help="(default: docs) Output directory.")

    roundtrip_parser = subparsers.add_parser("roundtrip", help="Reconstruct random pedigrees from their decks.")
    roundtrip_parser.add_argument("--n", type=int, required=True, help="Order (at least 4).")
    roundtrip_parser.add_argument("--depth", type=int, default=1, help="(default: 1) Depth.")
    roundtrip_parser.add_argument("--parents", type=int,
                                  help="Size of every generation above the extant one (default: n).")
    roundtrip_parser.add_argument("--trials", type=int, default=100, help="(default: 100) Number of pedigrees.")
    roundtrip_parser.add_argument("--seed", type=int, default=0, help="(default: 0) Random seed.")
    return parser


if __name__ == "__main__":
    main()
