"""Bound-check reports produced by the perturbation harness."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict

BOUND_TOL = 1e-10


class BoundStatus(str, Enum):
    """Outcome of one bound check."""

    SATISFIED = "satisfied"
    VIOLATED = "violated"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class BoundReport:
    """One instance of a perturbation estimate lhs ≤ rhs.

    Attributes:
        bound_name: Which estimate was checked
        lhs: Measured quantity (nan when skipped)
        rhs: Theoretical bound (nan when skipped)
        metadata: Replay information such as delta, n and seed
        status: SATISFIED, VIOLATED or SKIPPED
    """

    bound_name: str
    lhs: float
    rhs: float
    metadata: Dict[str, Any] = field(default_factory=dict)
    status: BoundStatus = BoundStatus.SATISFIED

    @classmethod
    def compare(cls, bound_name: str, lhs: float, rhs: float, **metadata: Any) -> "BoundReport":
        """Build a report whose status follows lhs ≤ rhs + 1e-10."""
        ok = lhs <= rhs + BOUND_TOL
        return cls(
            bound_name=bound_name,
            lhs=float(lhs),
            rhs=float(rhs),
            metadata=metadata,
            status=BoundStatus.SATISFIED if ok else BoundStatus.VIOLATED,
        )

    @classmethod
    def skipped(cls, bound_name: str, reason: str, **metadata: Any) -> "BoundReport":
        """Build a report for a check whose precondition did not hold."""
        return cls(
            bound_name=bound_name,
            lhs=math.nan,
            rhs=math.nan,
            metadata={**metadata, "reason": reason},
            status=BoundStatus.SKIPPED,
        )

    @property
    def satisfied(self) -> bool:
        """True unless the bound was violated; skipped checks count as satisfied."""
        return self.status is not BoundStatus.VIOLATED

    @property
    def checked(self) -> bool:
        """Whether the bound was actually evaluated."""
        return self.status is not BoundStatus.SKIPPED
