"""Driving schemes for a transversally driven two-level system.

Four transverse-field intensity profiles are supported,

    constant     w(t) = gamma
    oscillating  w(t) = gamma * cos(lam * t)
    power_law    w(t) = gamma / (1 + lam * t)**2
    exponential  w(t) = gamma * exp(-lam * t)

On resonance the success probability depends only on the integrated
phase f(t) = int_0^t w(t') / hbar dt', through p_w = sin^2(f).  The
statistical parameter theta is identified with the elapsed time t.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import DomainError

_DOMAIN_TOL = 1e-12


class SchemeKind(str, Enum):
    CONSTANT = "constant"
    OSCILLATING = "oscillating"
    POWER_LAW = "power_law"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class DrivingScheme:
    """A transverse-field profile with intensity scale ``gamma``.

    ``lam`` (inverse-time units) shapes the decay/oscillation and is
    required for every kind except CONSTANT.  When
    ``resonance_max_constraint`` is set, gamma is tied to lam through
    gamma = (pi/2) * hbar * lam, which is what lets the success
    probability reach one; omit ``gamma`` to have it derived.
    """

    kind: SchemeKind
    gamma: Optional[float] = None
    lam: Optional[float] = None
    hbar: float = 1.0
    resonance_max_constraint: bool = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        kind = SchemeKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if kind is not SchemeKind.CONSTANT:
            if self.lam is None or self.lam <= 0:
                raise ValueError(f"{kind.value} scheme requires lam > 0")
        constraint = self.resonance_max_constraint
        if constraint is None:
            # Default on for the lam-shaped profiles when gamma is not
            # pinned by the caller; the constant profile has no lam.
            constraint = kind is not SchemeKind.CONSTANT and self.gamma is None
        object.__setattr__(self, "resonance_max_constraint", constraint)
        if constraint:
            if kind is SchemeKind.CONSTANT:
                raise ValueError("resonance constraint needs a lam-shaped profile")
            gamma_res = 0.5 * math.pi * self.hbar * self.lam
            if self.gamma is None:
                object.__setattr__(self, "gamma", gamma_res)
            elif abs(self.gamma - gamma_res) > 1e-12 * self.gamma:
                raise ValueError(
                    "gamma violates the resonance-maximum constraint "
                    "gamma = (pi/2) * hbar * lam; pass "
                    "resonance_max_constraint=False to opt out"
                )
        if self.gamma is None or self.gamma <= 0:
            raise ValueError("gamma must be positive")

    @classmethod
    def resonant(cls, kind, lam: float, hbar: float = 1.0) -> "DrivingScheme":
        """Scheme with gamma pinned to (pi/2) * hbar * lam."""
        return cls(kind=kind, lam=lam, hbar=hbar, resonance_max_constraint=True)

    @property
    def theta_max(self) -> float:
        """Upper end of the admissible theta interval."""
        if self.kind is SchemeKind.OSCILLATING:
            return 0.5 * math.pi / self.lam
        return math.inf

    def _check_theta(self, theta: float) -> None:
        if theta < -_DOMAIN_TOL:
            raise DomainError(f"theta={theta} is negative")
        tmax = self.theta_max
        if theta > tmax * (1.0 + _DOMAIN_TOL):
            raise DomainError(
                f"theta={theta} beyond admissible range [0, {tmax}] "
                f"for {self.kind.value} scheme"
            )

    def shape(self, theta: float) -> float:
        """Dimensionless intensity shape w(theta)/gamma, domain-checked."""
        self._check_theta(theta)
        if self.kind is SchemeKind.CONSTANT:
            return 1.0
        if self.kind is SchemeKind.OSCILLATING:
            return math.cos(self.lam * theta)
        if self.kind is SchemeKind.POWER_LAW:
            return (1.0 + self.lam * theta) ** -2
        return math.exp(-self.lam * theta)


def field_intensity(scheme: DrivingScheme, t: float) -> float:
    """Transverse-field intensity w(t) of the scheme at time t >= 0."""
    return scheme.gamma * scheme.shape(t)


def integrated_phase(scheme: DrivingScheme, theta: float) -> float:
    """Accumulated phase f(theta) = int_0^theta w(t')/hbar dt' (closed form)."""
    scheme._check_theta(theta)
    g = scheme.gamma / scheme.hbar
    if scheme.kind is SchemeKind.CONSTANT:
        return g * theta
    u = scheme.lam * theta
    if scheme.kind is SchemeKind.OSCILLATING:
        return g / scheme.lam * math.sin(u)
    if scheme.kind is SchemeKind.POWER_LAW:
        return g / scheme.lam * (1.0 - 1.0 / (1.0 + u))
    return g / scheme.lam * -math.expm1(-u)


@dataclass(frozen=True)
class ProbabilityPath:
    """Binary probability path theta -> (p_w, p_wperp) induced by a scheme."""

    scheme: DrivingScheme

    def phase(self, theta: float) -> float:
        return integrated_phase(self.scheme, theta)

    @property
    def theta_max(self) -> float:
        return self.scheme.theta_max

    def p_w(self, theta: float) -> float:
        return math.sin(self.phase(theta)) ** 2

    def p_wperp(self, theta: float) -> float:
        return math.cos(self.phase(theta)) ** 2

    def probabilities(self, theta: float) -> tuple[float, float]:
        f = self.phase(theta)
        return math.sin(f) ** 2, math.cos(f) ** 2


def probability_path(scheme: DrivingScheme) -> ProbabilityPath:
    """Probability path with p_w = sin^2(f(theta)) for the given scheme."""
    return ProbabilityPath(scheme=scheme)


@dataclass(frozen=True)
class AmplitudePair:
    """Unitary propagator amplitudes (alpha, beta) for detuning parameter b."""

    alpha: complex
    beta: complex
    b: float
    phi_omega: float

    def unitarity_defect(self) -> float:
        return abs(abs(self.alpha) ** 2 + abs(self.beta) ** 2 - 1.0)


def amplitudes(b: float, phase_Phi: float, phi_omega: float) -> AmplitudePair:
    """Propagator amplitudes for detuning b, accumulated phase Phi, and
    transverse-field phase phi_omega.

    Phi is supplied by the caller (Phi = sqrt(1+b^2) * integrated phase),
    so the algebraic identities here stay decoupled from quadrature.
    """
    root = math.sqrt(1.0 + b * b)
    half = 0.5 * phi_omega
    alpha = complex(math.cos(phase_Phi), -(b / root) * math.sin(phase_Phi))
    alpha *= complex(math.cos(half), math.sin(half))
    beta_mod = math.sin(phase_Phi) / root
    beta_arg = half - 0.5 * math.pi
    beta = beta_mod * complex(math.cos(beta_arg), math.sin(beta_arg))
    return AmplitudePair(alpha=alpha, beta=beta, b=b, phi_omega=phi_omega)


def transition_probability(alpha_beta: AmplitudePair, x: float) -> float:
    """Probability of landing on the target state given source overlap x.

    x = <w|s> must lie in [-1, 1].
    """
    if abs(x) > 1.0 + _DOMAIN_TOL:
        raise DomainError(f"source overlap x={x} outside [-1, 1]")
    x = min(1.0, max(-1.0, x))
    a, bt = alpha_beta.alpha, alpha_beta.beta
    cross = (a * bt.conjugate() + a.conjugate() * bt).real
    return (
        abs(a) ** 2 * x * x
        + abs(bt) ** 2 * (1.0 - x * x)
        + cross * x * math.sqrt(1.0 - x * x)
    )
