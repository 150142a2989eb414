"""Fisher metric and geodesics on one-parameter probability paths.

For a binary path p_w = sin^2(f(theta)) the Fisher information reduces
to g(theta) = 4 f'(theta)^2 = (2*gamma/hbar)^2 * shape(theta)^2, and the
geodesic equation in the affine parameter xi reads

    theta'' + (1 / (2 g)) (dg/dtheta) theta'^2 = 0,

equivalently d/dxi (g * theta') - (1/2) (dg/dtheta) theta'^2 = 0.  Both
formulations are integrated numerically; closed forms exist for each
driving scheme and carry an explicit validity interval ending at the
closed form's singularity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    DegenerateDistribution,
    DomainError,
    MetricDegenerate,
    OutOfValidity,
    StepFailure,
)
from .schemes import DrivingScheme, ProbabilityPath, SchemeKind

_METRIC_FLOOR = 1e-12
_P_FLOOR = 1e-12
_VALIDITY_MARGIN = 0.999


class MetricSource(str, Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC_FROM_PATH = "numeric_from_path"


class GeodesicFormulation(str, Enum):
    CHRISTOFFEL = "christoffel"
    DIVERGENCE = "divergence"


@dataclass(frozen=True)
class MetricField:
    """Fisher information g(theta) with its theta-derivative."""

    g: Callable[[float], float]
    dg_dtheta: Callable[[float], float]
    source: MetricSource
    kind: Optional[SchemeKind] = None

    def __call__(self, theta: float) -> float:
        return self.g(theta)


def fisher_closed_form(scheme: DrivingScheme) -> MetricField:
    """Closed-form Fisher information g = (2*gamma/hbar)^2 * shape^2."""
    g0 = (2.0 * scheme.gamma / scheme.hbar) ** 2
    lam = scheme.lam
    kind = scheme.kind
    if kind is SchemeKind.CONSTANT:
        g = lambda th: g0
        dg = lambda th: 0.0
    elif kind is SchemeKind.OSCILLATING:
        g = lambda th: g0 * math.cos(lam * th) ** 2
        dg = lambda th: -g0 * lam * math.sin(2.0 * lam * th)
    elif kind is SchemeKind.POWER_LAW:
        g = lambda th: g0 * (1.0 + lam * th) ** -4
        dg = lambda th: -4.0 * g0 * lam * (1.0 + lam * th) ** -5
    else:
        g = lambda th: g0 * math.exp(-2.0 * lam * th)
        dg = lambda th: -2.0 * lam * g0 * math.exp(-2.0 * lam * th)
    return MetricField(g=g, dg_dtheta=dg, source=MetricSource.CLOSED_FORM, kind=kind)


def fisher_numeric(path: ProbabilityPath, theta: float, h: Optional[float] = None) -> float:
    """Fisher information from central differences of the log-probabilities.

    Step balances truncation against round-off at double precision.
    """
    if h is None:
        h = 1e-6 * max(1.0, abs(theta))
    pw, pp = path.probabilities(theta)
    if min(pw, pp) < _P_FLOOR:
        raise DegenerateDistribution(
            f"p = ({pw}, {pp}) at theta={theta}: score function undefined"
        )
    if theta - h < 0:
        raise DomainError(f"theta={theta} too close to 0 for step h={h}")
    pw_hi, pp_hi = path.probabilities(theta + h)
    pw_lo, pp_lo = path.probabilities(theta - h)
    dlog_w = (math.log(pw_hi) - math.log(pw_lo)) / (2.0 * h)
    dlog_p = (math.log(pp_hi) - math.log(pp_lo)) / (2.0 * h)
    return pw * dlog_w**2 + pp * dlog_p**2


def metric_from_path(path: ProbabilityPath, h: Optional[float] = None) -> MetricField:
    """Metric field backed by finite differences on the path (dual route)."""

    def g(theta: float) -> float:
        return fisher_numeric(path, theta, h=h)

    def dg(theta: float) -> float:
        step = 1e-5 * max(1.0, abs(theta))
        return (g(theta + step) - g(theta - step)) / (2.0 * step)

    return MetricField(g=g, dg_dtheta=dg, source=MetricSource.NUMERIC_FROM_PATH)


def _validity_end(kind: SchemeKind, lam, xi0, theta0, thetadot0) -> float:
    if kind is SchemeKind.CONSTANT:
        return math.inf
    if kind is SchemeKind.OSCILLATING:
        c = math.cos(lam * theta0)
        if c <= 0.0:
            raise DomainError(
                f"oscillating geodesic needs cos(lam*theta0) > 0, got {c}"
            )
        return xi0 + (1.0 - math.sin(lam * theta0)) / (lam * thetadot0 * c)
    if kind is SchemeKind.POWER_LAW:
        return xi0 + (1.0 + lam * theta0) / (lam * thetadot0)
    return xi0 + 1.0 / (lam * thetadot0)


@dataclass(frozen=True)
class Geodesic:
    """Closed-form geodesic theta(xi) for one driving scheme.

    Valid on the half-open interval [xi0, validity_end); evaluation
    outside raises OutOfValidity.
    """

    scheme: DrivingScheme
    xi0: float
    theta0: float
    thetadot0: float
    validity_end: float

    def _check(self, xi) -> None:
        xi = np.asarray(xi, dtype=float)
        if np.any(xi < self.xi0) or np.any(xi >= self.validity_end):
            raise OutOfValidity(
                f"xi outside [{self.xi0}, {self.validity_end}) for "
                f"{self.scheme.kind.value} geodesic"
            )

    def theta(self, xi):
        self._check(xi)
        xi = np.asarray(xi, dtype=float)
        s = xi - self.xi0
        kind, lam = self.scheme.kind, self.scheme.lam
        th0, thd0 = self.theta0, self.thetadot0
        if kind is SchemeKind.CONSTANT:
            out = th0 + thd0 * s
        elif kind is SchemeKind.OSCILLATING:
            arg = lam * math.cos(lam * th0) * thd0 * s + math.sin(lam * th0)
            out = np.arcsin(np.clip(arg, -1.0, 1.0)) / lam
        elif kind is SchemeKind.POWER_LAW:
            d = (1.0 + lam * th0) - lam * thd0 * s
            out = ((1.0 + lam * th0) ** 2 / d - 1.0) / lam
        else:
            out = th0 - np.log1p(-lam * thd0 * s) / lam
        return out if out.ndim else float(out)

    def thetadot(self, xi):
        self._check(xi)
        xi = np.asarray(xi, dtype=float)
        s = xi - self.xi0
        kind, lam = self.scheme.kind, self.scheme.lam
        th0, thd0 = self.theta0, self.thetadot0
        if kind is SchemeKind.CONSTANT:
            out = np.full_like(s, thd0)
        elif kind is SchemeKind.OSCILLATING:
            arg = lam * math.cos(lam * th0) * thd0 * s + math.sin(lam * th0)
            out = math.cos(lam * th0) * thd0 / np.sqrt(1.0 - arg**2)
        elif kind is SchemeKind.POWER_LAW:
            d = (1.0 + lam * th0) - lam * thd0 * s
            out = thd0 * (1.0 + lam * th0) ** 2 / d**2
        else:
            out = thd0 / (1.0 - lam * thd0 * s)
        return out if out.ndim else float(out)


def geodesic_closed_form(
    scheme: DrivingScheme, xi0: float, theta0: float, thetadot0: float
) -> Geodesic:
    """Closed-form geodesic launched from (theta0 > 0, thetadot0 > 0)."""
    if theta0 <= 0 or thetadot0 <= 0:
        raise DomainError("geodesics require theta0 > 0 and thetadot0 > 0")
    end = _validity_end(scheme.kind, scheme.lam, xi0, theta0, thetadot0)
    return Geodesic(
        scheme=scheme, xi0=xi0, theta0=theta0, thetadot0=thetadot0, validity_end=end
    )


@dataclass(frozen=True)
class SampledGeodesic:
    """Dense numeric geodesic solution over [xi0, xi_end]."""

    xi: np.ndarray
    theta: np.ndarray
    thetadot: np.ndarray
    formulation: GeodesicFormulation
    _sol: Callable[[float], np.ndarray]
    _to_state: Callable[[np.ndarray, np.ndarray], np.ndarray]

    def theta_at(self, xi):
        return float(self._sol(xi)[0])

    def thetadot_at(self, xi):
        return float(self._to_state(self._sol(xi))[1])


def geodesic_numeric(
    metric: MetricField,
    xi0: float,
    theta0: float,
    thetadot0: float,
    xi_end: float,
    formulation: GeodesicFormulation = GeodesicFormulation.CHRISTOFFEL,
    validity_end: float = math.inf,
    n_samples: int = 201,
    rtol: float = 1e-10,
    atol: float = 1e-10,
) -> SampledGeodesic:
    """Integrate the geodesic ODE in either formulation.

    Refuses to step past _VALIDITY_MARGIN * validity_end when a finite
    singularity location is supplied; the closed form knows it.
    """
    formulation = GeodesicFormulation(formulation)
    if theta0 <= 0 or thetadot0 <= 0:
        raise DomainError("geodesics require theta0 > 0 and thetadot0 > 0")
    if math.isfinite(validity_end):
        cap = xi0 + _VALIDITY_MARGIN * (validity_end - xi0)
        if xi_end > cap:
            raise OutOfValidity(
                f"xi_end={xi_end} too close to the singularity at {validity_end}"
            )

    def guard(theta: float) -> float:
        g = metric.g(theta)
        if g < _METRIC_FLOOR:
            raise MetricDegenerate(f"g({theta}) = {g} below positivity floor")
        return g

    if formulation is GeodesicFormulation.CHRISTOFFEL:
        def rhs(xi, y):
            th, thd = y
            g = guard(th)
            return [thd, -0.5 * metric.dg_dtheta(th) / g * thd * thd]

        y0 = [theta0, thetadot0]

        def to_state(y, _=None):
            return y[0], y[1]
    else:
        # State (theta, m) with m = g * thetadot.
        def rhs(xi, y):
            th, m = y
            g = guard(th)
            thd = m / g
            return [thd, 0.5 * metric.dg_dtheta(th) * thd * thd]

        y0 = [theta0, metric.g(theta0) * thetadot0]

        def to_state(y, _=None):
            return y[0], y[1] / metric.g(y[0])

    xi_grid = np.linspace(xi0, xi_end, n_samples)
    try:
        sol = solve_ivp(
            rhs, (xi0, xi_end), y0,
            method="RK45", rtol=rtol, atol=atol,
            dense_output=True, t_eval=xi_grid,
        )
    except MetricDegenerate:
        raise
    if not sol.success:
        raise StepFailure(f"geodesic integration failed: {sol.message}")
    theta = sol.y[0]
    if formulation is GeodesicFormulation.CHRISTOFFEL:
        thetadot = sol.y[1]
    else:
        thetadot = sol.y[1] / np.array([metric.g(t) for t in theta])
    return SampledGeodesic(
        xi=sol.t, theta=theta, thetadot=thetadot,
        formulation=formulation, _sol=sol.sol, _to_state=to_state,
    )


def geodesic_residual(metric: MetricField, geo: Geodesic, xi: float, h: Optional[float] = None) -> float:
    """Residual of theta'' + (1/2g) g' theta'^2 along a closed-form geodesic.

    theta'' is taken by central differences of the analytic thetadot.
    """
    if h is None:
        h = 1e-6 * max(1.0, abs(xi - geo.xi0))
    thdd = (geo.thetadot(xi + h) - geo.thetadot(xi - h)) / (2.0 * h)
    th = geo.theta(xi)
    thd = geo.thetadot(xi)
    return thdd + 0.5 * metric.dg_dtheta(th) / metric.g(th) * thd * thd
