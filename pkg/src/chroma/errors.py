"""Exception types shared by every module.

Each failure mode named in the interface gets its own class so callers and the
CLI can tell a usage problem from a verified negative outcome.
"""
from __future__ import annotations


class ChromaError(Exception):
    """Base class for all package errors."""


class ArgumentError(ChromaError, ValueError):
    """Malformed input or out-of-range argument."""


class ContractError(ChromaError):
    """A documented precondition does not hold."""


class FormatError(ArgumentError):
    """Malformed `.ecg` or JSON input."""


class CertificateError(ChromaError):
    """Base class for walk certificate failures."""


class NotAPath(CertificateError):
    def __init__(self, index: int):
        super().__init__(f"NotAPath({index}): no edge between positions {index} and {index + 1}")
        self.index = index


class NotProper(CertificateError):
    def __init__(self, index: int):
        super().__init__(f"NotProper({index}): equal colours on both sides of position {index}")
        self.index = index


class NotSimple(CertificateError):
    def __init__(self, vertex: int):
        super().__init__(f"NotSimple({vertex}): vertex repeated")
        self.vertex = vertex


class ClauseViolation(CertificateError):
    """A 1-path-cycle violates one of its parameter clauses (a)-(d)."""

    def __init__(self, clause: str, detail: str = ""):
        super().__init__(f"clause ({clause}) violated" + (f": {detail}" if detail else ""))
        self.clause = clause
        self.detail = detail


class DegreeTooLow(ContractError):
    def __init__(self, vertex: int):
        super().__init__(f"DegreeTooLow({vertex})")
        self.vertex = vertex


class NoCycleFound(ChromaError):
    pass


class RefuseSize(ChromaError):
    def __init__(self, n: int, limit: int):
        super().__init__(f"RefuseSize: n={n} exceeds desk limit {limit}")
        self.n = n
        self.limit = limit


class NotExtremalInput(ContractError):
    pass


class HallFailure(ChromaError):
    pass


class ContractionFailure(ChromaError):
    def __init__(self, index: int, detail: str = ""):
        super().__init__(f"ContractionFailure({index})" + (f": {detail}" if detail else ""))
        self.index = index


class ExtensionFailure(ChromaError):
    def __init__(self, step: int, detail: str = ""):
        super().__init__(f"ExtensionFailure({step})" + (f": {detail}" if detail else ""))
        self.step = step


class BestEffort(ChromaError):
    """Raised by drivers that could not finish; carries the best verified walk."""

    def __init__(self, achieved: int, walk=None, stage: str = ""):
        super().__init__(f"BestEffort({achieved})" + (f" at {stage}" if stage else ""))
        self.achieved = achieved
        self.walk = walk
        self.stage = stage


class AbsorbMismatch(ContractError):
    pass


class FamilySearchFailed(ChromaError):
    def __init__(self, audit):
        super().__init__(f"FamilySearchFailed: {audit}")
        self.audit = audit


class NoConnector(ChromaError):
    pass


class AssemblyFailed(ChromaError):
    def __init__(self, j: int):
        super().__init__(f"AssemblyFailed({j})")
        self.j = j


class AbsorberExhausted(ChromaError):
    def __init__(self, unit):
        super().__init__(f"AbsorberExhausted({list(unit)})")
        self.unit = tuple(unit)


class DriverExhausted(ChromaError):
    def __init__(self, best, detail: str = ""):
        super().__init__("DriverExhausted" + (f": {detail}" if detail else ""))
        self.best = best


class NoIndex(ChromaError):
    pass


class Infeasible(ChromaError):
    pass


class GenerationFailed(ChromaError):
    pass
