"""Exception hierarchy shared by every module.

Each error carries a machine-readable ``code`` (used by the CLI error JSON)
and an optional ``stage`` naming the pipeline step that raised it.
"""

from __future__ import annotations


class BitileError(Exception):
    code = "BitileError"

    def __init__(self, detail: str = "", *, stage: str | None = None):
        super().__init__(detail)
        self.detail = detail
        self.stage = stage

    def to_json(self) -> dict:
        return {"error": self.code, "detail": self.detail, "stage": self.stage}


class NotBipartite(BitileError):
    code = "NotBipartite"

    def __init__(self, cycle: list[int]):
        super().__init__(f"odd cycle {cycle}")
        self.cycle = cycle


class InvalidGraph(BitileError):
    code = "InvalidGraph"


class Unbalanced(BitileError):
    code = "Unbalanced"


class EdgeWithinSide(BitileError):
    code = "EdgeWithinSide"


class EmptySubset(BitileError):
    code = "EmptySubset"


class EdgelessPattern(BitileError):
    code = "EdgelessPattern"


class HcfNotOne(BitileError):
    code = "HcfNotOne"


class DivisibilityViolation(BitileError):
    code = "DivisibilityViolation"


class NoCaseApplies(BitileError):
    code = "NoCaseApplies"


class InstanceTooLarge(BitileError):
    code = "InstanceTooLarge"


class PreconditionViolated(BitileError):
    code = "PreconditionViolated"


class RatioViolation(BitileError):
    code = "RatioViolation"


class BudgetExceeded(BitileError):
    code = "BudgetExceeded"

    def __init__(self, detail: str = "", incumbent=None, nodes: int = 0):
        super().__init__(detail)
        self.incumbent = incumbent
        self.nodes = nodes


class NotExtremal(BitileError):
    code = "NotExtremal"


class HypothesesUnmet(BitileError):
    code = "HypothesesUnmet"


class SearchFailed(BitileError):
    code = "SearchFailed"


class EmbedFailed(BitileError):
    code = "EmbedFailed"


class PipelineStageFailed(BitileError):
    code = "PipelineStageFailed"


class TooLargeForExact(BitileError):
    code = "TooLargeForExact"
