"""Exception hierarchy.

Every error carries a ``witness`` dict so the CLI can emit it as JSON.
"""

from __future__ import annotations

from typing import Any


class HypChainError(Exception):
    """Base class for all library errors."""

    code = "error"

    def __init__(self, message: str, **witness: Any):
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_json(self) -> dict[str, Any]:
        return {"error": self.code, "message": self.message, "witness": self.witness}


class PresentationInvalid(HypChainError):
    code = "presentation_invalid"


class BallTooLarge(HypChainError):
    code = "ball_too_large"


class OutOfBall(HypChainError):
    code = "out_of_ball"


class DimensionZero(HypChainError):
    code = "dimension_zero"


class WrongDimension(HypChainError):
    code = "wrong_dimension"


class EmptyTuple(HypChainError):
    code = "empty_tuple"


class RipsViolation(HypChainError):
    code = "rips_violation"


class VertexNotInHull(HypChainError):
    code = "vertex_not_in_hull"


class BasisNotClosed(HypChainError):
    code = "basis_not_closed"


class HomotopyIdentityFailed(HypChainError):
    code = "homotopy_identity_failed"


class RadiusScheduleExceeded(HypChainError):
    code = "radius_schedule_exceeded"
