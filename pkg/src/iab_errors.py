#!/usr/bin/env python3
"""
IAB Head-Stabilization Simulator - Error Types
Exceptions and warnings raised by the geometry, solver, mechanism and
scenario modules. The CLI maps them to exit codes.

Author: IAB Simulation Team
Purpose: shared error types
"""


class IabError(Exception):
    """Base class for every error raised by the IAB simulator."""


class DomainError(IabError, ValueError):
    """Input outside the admissible deformation domain (bad radii, collapse, envelope)."""


class QuadratureError(IabError):
    """
    Adaptive quadrature failed to converge, or the two integral forms disagree.

    Args:
        message (str): Human readable description
        diagnostics (dict): Values useful for debugging (estimates, error bounds, flags)
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class NoBracketError(IabError):
    """Forward-solve target pressure lies outside the achievable range."""

    def __init__(self, message, target, achievable):
        super().__init__(message)
        self.target = target
        self.achievable = achievable


class ConfigError(IabError):
    """Scenario configuration could not be parsed; the message names the field."""

    def __init__(self, message, field=None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class IabSolveError(IabError):
    """Solver failure for one bladder of a mechanism batch."""

    def __init__(self, iab_id, cause):
        super().__init__(f"IAB '{iab_id}' solve failed: {cause}")
        self.iab_id = iab_id
        self.cause = cause


class NonMonotonePressureWarning(UserWarning):
    """Pressure curve has a limit point; more than one inner radius reaches the target."""

    def __init__(self, message, candidate_roots):
        super().__init__(message)
        self.candidate_roots = tuple(candidate_roots)
