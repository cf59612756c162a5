import sys

from yachalk import chalk

from pedigree import label_sort_key, pedigree_depth


class Output:
    def __init__(self, verbose=False):
        self.verbose = verbose

    @staticmethod
    def print_line(message, end='\n'):
        sys.stdout.write(f"{message}{end}")

    @staticmethod
    def print_without_linebreak(message):
        sys.stdout.write(message)

    def print_verbose(self, message):
        if self.verbose:
            self.print_line(message)

    def print_pedigree(self, name, pedigree):
        founders = len(pedigree.founders)
        self.print_line(
            f"{format_label(name)}: {format_count(len(pedigree))} vertices, "
            f"{format_count(founders)} founders, order {format_count(pedigree.order)}, "
            f"depth {format_count(pedigree_depth(pedigree))}"
        )

    def print_hypomorphism(self, witnesses, width=40):
        agreeing = sum(1 for witness in witnesses.values() if witness is not None)
        bar_length = int(width * agreeing / len(witnesses)) if witnesses else 0
        self.print_line(f"cards agreeing {print_bar(width, bar_length)} {agreeing}/{len(witnesses)}")
        for subset in sorted(witnesses, key=lambda key: [label_sort_key(label) for label in key]):
            verdict = format_verdict(witnesses[subset] is not None, "isomorphic", "different")
            self.print_line(f"  {format_subset(subset)} {verdict}")
            if witnesses[subset] is not None:
                self.print_line(f"    {format_mapping(witnesses[subset].mapping)}")

    def print_bounds(self, bounds):
        lower = "n/a" if bounds.lower is None else format_number(bounds.lower)
        self.print_line(f"lower bound: {lower}")
        self.print_line(f"upper bound: {format_number(bounds.upper)}")
        if bounds.exact is not None:
            self.print_line(f"exact count: {format_count(bounds.exact)}")
            self.print_line(f"verdict:     {format_verdict(bounds.within, 'within bounds', 'outside bounds')}")


def format_label(label):
    if not sys.stdout.encoding.lower().startswith('utf'):
        label = label.encode('latin-1', 'ignore').decode()
    return chalk.bold(label)


def format_subset(subset):
    return "{" + ", ".join(format_label(label) for label in subset) + "}"


def format_count(count, min_width=None):
    if min_width:
        return chalk.yellow(f"{count:{min_width},}")
    return chalk.yellow(f"{count:,}")


def format_number(value):
    if getattr(value, "denominator", 1) != 1:
        return chalk.yellow(f"{value.numerator:,}/{value.denominator:,}")
    return format_count(int(value))


def format_mapping(mapping):
    return ", ".join(f"{v} -> {w}" for v, w in sorted(mapping.items()))


def format_code(code, length=16):
    return format_boring_string(code.hex()[:length])


def format_verdict(verdict, true_text="yes", false_text="no"):
    if verdict:
        return format_success(true_text)
    return format_error(false_text)


def format_boring_string(string):
    return chalk.bg_black(chalk.gray(string))


def format_success(string):
    return chalk.bg_cyan(chalk.white_bright(string))


def format_warning(warning):
    return chalk.yellow(warning)


def format_error(error):
    return chalk.red(error)


def print_bar(width, length):
    result = chalk.bold("[")
    if sys.stdout.encoding.lower().startswith('utf'):
        for _ in range(0, length):
            result += chalk.bold(u"█")
        for _ in range(length, width):
            result += u"░"
    else:
        for _ in range(0, length):
            result += chalk.bold("X")
        for _ in range(length, width):
            result += u"."
    result += chalk.bold("]")
    return result
