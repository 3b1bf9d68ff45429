from typing import Any, Optional


class TorvanError(Exception):
    """Base error. `code` is machine readable, `field` names the offending input."""

    code = "error"

    def __init__(self, message: str, field: Optional[str] = None, **details: Any):
        super().__init__(message)
        self.message = message
        self.field = field
        self.details = details

    def to_dict(self) -> dict:
        payload = {"error": self.message, "code": self.code}
        if self.field is not None:
            payload["field"] = self.field
        if self.details:
            payload["details"] = {k: str(v) for k, v in sorted(self.details.items())}
        return payload


class InvalidInput(TorvanError):
    code = "invalid_input"


class InhomogeneousRelation(InvalidInput):
    code = "inhomogeneous_relation"


class RingMismatch(InvalidInput):
    code = "ring_mismatch"


class NotRegularSequence(TorvanError):
    code = "not_regular_sequence"


class CompositionNotZero(TorvanError):
    code = "composition_not_zero"


class MissingMinPrimes(TorvanError):
    code = "missing_min_primes"


class NotHypersurface(TorvanError):
    code = "not_hypersurface"


class TailNotFiniteLength(TorvanError):
    code = "tail_not_finite_length"


class NotStabilized(TorvanError):
    code = "not_stabilized"


class FitFailed(TorvanError):
    code = "fit_failed"


class Divergent(TorvanError):
    code = "divergent"


class NotTorsionFree(TorvanError):
    code = "not_torsion_free"


class ChainBlocked(TorvanError):
    code = "chain_blocked"

    def __init__(self, message: str, stage: int, **details: Any):
        super().__init__(message, field="stage", stage=stage, **details)
        self.stage = stage
