#!/usr/bin/env python3
"""
Exception hierarchy for the NER simulator.

Every failure the library can report carries a machine-readable code and the
exit status the CLI uses for it, so callers never need to string-match messages.
"""

from typing import Any, Dict, Optional


class NerSimError(Exception):
    """Base class for all simulator errors"""

    code = "INTERNAL"
    exit_status = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_envelope(self) -> Dict[str, Any]:
        """JSON error envelope written by the CLI"""
        return {
            "error": {
                "code": self.code,
                "message": self.message,
                "exit_status": self.exit_status,
                "details": self.details,
            }
        }


class ConfigError(NerSimError):
    """Unreadable, malformed or inconsistent experiment configuration"""

    code = "CONFIG_PARSE"
    exit_status = 2


class PhysicsDomainError(NerSimError, ValueError):
    """Request outside the physical model (e.g. NER drive on a spin-1/2 nucleus)"""

    code = "PHYSICS_DOMAIN"
    exit_status = 3


class OffResonanceError(PhysicsDomainError):
    """Closed-form propagator requested away from its resonance condition"""

    code = "OFF_RESONANCE"


class ShapeMismatchError(PhysicsDomainError):
    """Operator or state dimensions do not agree"""

    code = "SHAPE_MISMATCH"


class NumericalError(NerSimError):
    """Numerical procedure failed to meet its tolerance"""

    code = "NUMERICAL_FAILURE"
    exit_status = 4


class IntegratorStiffnessError(NumericalError):
    """Adaptive step fell below the minimum step size"""

    code = "INTEGRATOR_STIFFNESS"


class QuadratureError(NumericalError):
    """Radial quadrature did not converge"""

    code = "QUADRATURE_NONCONVERGENT"

    def __init__(self, message: str, achieved_error: float, details: Optional[Dict[str, Any]] = None):
        details = dict(details or {})
        details["achieved_error"] = achieved_error
        super().__init__(message, details)
        self.achieved_error = achieved_error
