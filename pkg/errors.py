from dataclasses import dataclass


class PedigreeError(Exception):
    """Base class for every error raised by the pedigree tooling."""

    exit_code = 2


@dataclass(frozen=True)
class Violation:
    kind: str
    vertex: object

    def __str__(self):
        return f"{self.kind} at {self.vertex!r}"


BAD_OUT_DEGREE = "BadOutDegree"
EXTANT_HAS_CHILD = "ExtantHasChild"
ISOLATED_VERTEX = "IsolatedVertex"
DUPLICATE_PARENT = "DuplicateParent"
CYCLIC_ANCESTRY = "CyclicAncestry"
UNKNOWN_VERTEX = "UnknownVertex"
DUPLICATE_EXTANT = "DuplicateExtant"


class PedigreeValidationError(PedigreeError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))

    def kinds(self):
        return {v.kind for v in self.violations}


class EmptySubset(PedigreeError, ValueError):
    pass


class UnknownLabel(PedigreeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownVertex(PedigreeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NotLayered(PedigreeError, ValueError):
    def __init__(self, vertex, message):
        self.vertex = vertex
        super().__init__(f"vertex {vertex!r}: {message}")


class GenderLabellingImpossible(PedigreeError):
    """The mating graph has an odd cycle; ``witness`` lists its vertices in order."""

    def __init__(self, witness):
        self.witness = list(witness)
        super().__init__(f"odd cycle in mating graph: {self.witness}")


class ResourceLimitExceeded(PedigreeError, RuntimeError):
    exit_code = 4


class ExtantMismatch(PedigreeError, ValueError):
    pass


class BadR(PedigreeError, ValueError):
    pass


class BadN(PedigreeError, ValueError):
    pass


class BadIndex(PedigreeError, ValueError):
    pass


class BadOrdering(PedigreeError, ValueError):
    pass


class UnevenSplit(PedigreeError, ValueError):
    pass


class MalformedDeck(PedigreeError, ValueError):
    pass


class BadArgs(PedigreeError, ValueError):
    pass


class BadGraph(PedigreeError, ValueError):
    pass


class BadCount(PedigreeError, ValueError):
    pass


class VerificationFailed(PedigreeError):
    exit_code = 3
