"""Length, divergence, entropic speed/rate, and complexity along paths.

For a trajectory theta(xi) on a metric g(theta):

    speed      v(xi)   = sqrt(g) * |theta'|
    length     L(tau)  = int_0^tau v dxi
    divergence I(tau)  = int_0^tau g * theta'^2 dxi           (>= L^2/tau)
    rate       r(xi)   = g * theta'^2 = v^2
    complexity C(tau)  = (1/tau) int_0^tau L(tau') dtau'

Along geodesics v is constant, I = L^2/tau, and dC/dtau = v/2.  The rate
admits a second, metric-free route through the score function of the
underlying probability path; agreement of the two routes is a key check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from scipy.integrate import quad

from .errors import DegenerateDistribution, DomainError, QuadratureFailure
from .geometry import Geodesic, MetricField, fisher_closed_form, geodesic_closed_form
from .schemes import DrivingScheme, ProbabilityPath

_QUAD_EPSREL = 1e-10
_QUAD_EPSABS = 1e-12
_QUAD_LIMIT = 200


@dataclass(frozen=True)
class ParamTrajectory:
    """Parametrized curve theta(xi), not necessarily a geodesic."""

    theta_of_xi: Callable[[float], float]
    thetadot_of_xi: Callable[[float], float]
    xi_range: tuple[float, float]

    @classmethod
    def from_geodesic(
        cls, geo: Geodesic, xi_range: Optional[tuple[float, float]] = None
    ) -> "ParamTrajectory":
        if xi_range is None:
            end = geo.validity_end
            hi = geo.xi0 + 1.0 if not math.isfinite(end) else geo.xi0 + 0.5 * (end - geo.xi0)
            xi_range = (geo.xi0, hi)
        return cls(theta_of_xi=geo.theta, thetadot_of_xi=geo.thetadot, xi_range=xi_range)

    def _check(self, xi: float) -> None:
        lo, hi = self.xi_range
        if not (lo <= xi <= hi):
            raise DomainError(f"xi={xi} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class PathMetricsReport:
    """Scalar summary of one scheme's geodesic over a duration tau."""

    v_E: float
    r_E: float
    length: float
    divergence: float
    igc: float
    igc_rate: float
    tau: float


def _quad(f, a: float, b: float) -> float:
    if a == b:
        return 0.0
    val, err, info, *msg = quad(
        f, a, b, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL,
        limit=_QUAD_LIMIT, full_output=True,
    )
    if msg:
        raise QuadratureFailure(str(msg[0]))
    return val


def entropic_speed(metric: MetricField, traj: ParamTrajectory, xi: float) -> float:
    """Instantaneous metric speed sqrt(g(theta)) * |theta'| at xi."""
    traj._check(xi)
    th = traj.theta_of_xi(xi)
    return math.sqrt(metric.g(th)) * abs(traj.thetadot_of_xi(xi))


def thermodynamic_length(metric: MetricField, traj: ParamTrajectory) -> float:
    """L = int sqrt(g) |theta'| dxi over the trajectory range."""
    lo, hi = traj.xi_range
    return _quad(
        lambda xi: math.sqrt(metric.g(traj.theta_of_xi(xi))) * abs(traj.thetadot_of_xi(xi)),
        lo, hi,
    )


def thermodynamic_divergence(metric: MetricField, traj: ParamTrajectory) -> float:
    """I = int g * theta'^2 dxi; total entropy produced along the path."""
    lo, hi = traj.xi_range
    return _quad(
        lambda xi: metric.g(traj.theta_of_xi(xi)) * traj.thetadot_of_xi(xi) ** 2,
        lo, hi,
    )


def entropy_rate_metric(metric: MetricField, traj: ParamTrajectory, xi: float) -> float:
    """Entropy production rate g * theta'^2 (the divergence integrand)."""
    traj._check(xi)
    th = traj.theta_of_xi(xi)
    return metric.g(th) * traj.thetadot_of_xi(xi) ** 2


def entropy_rate_score(
    path: ProbabilityPath, traj: ParamTrajectory, xi: float, h: Optional[float] = None
) -> float:
    """Entropy production rate from the score function:

        sum_x p_x(theta) * (d log p_x / dxi)^2,

    with d/dxi = theta' * d/dtheta and d_theta log p_x by central differences.
    """
    traj._check(xi)
    th = traj.theta_of_xi(xi)
    thd = traj.thetadot_of_xi(xi)
    if thd == 0.0:
        return 0.0
    if h is None:
        h = 1e-6 * max(1.0, abs(th))
    pw, pp = path.probabilities(th)
    if min(pw, pp) < 1e-12:
        raise DegenerateDistribution(f"p = ({pw}, {pp}) at theta={th}")
    pw_hi, pp_hi = path.probabilities(th + h)
    pw_lo, pp_lo = path.probabilities(th - h)
    dlog_w = (math.log(pw_hi) - math.log(pw_lo)) / (2.0 * h)
    dlog_p = (math.log(pp_hi) - math.log(pp_lo)) / (2.0 * h)
    return (pw * dlog_w**2 + pp * dlog_p**2) * thd * thd


def igc(
    metric: MetricField, geodesic: Geodesic, tau: float, tau0: float = 0.0
) -> tuple[float, float]:
    """Information geometric complexity C(tau) and its rate dC/dtau.

    C(tau) = (1/tau) int_0^tau L(tau') dtau' with
    L(tau') = int_{tau0}^{tau0+tau'} sqrt(g(theta)) theta' dxi along the
    geodesic.  The rate follows from the Leibniz rule,
    dC/dtau = (L(tau) - C(tau)) / tau.
    """
    if tau <= 0:
        raise DomainError(f"tau={tau} must be positive")
    if tau0 + tau >= geodesic.validity_end:
        raise DomainError(
            f"window [{tau0}, {tau0 + tau}] exceeds geodesic validity "
            f"(ends at {geodesic.validity_end})"
        )

    def speed(xi: float) -> float:
        return math.sqrt(metric.g(geodesic.theta(xi))) * geodesic.thetadot(xi)

    def explored_length(tp: float) -> float:
        return _quad(speed, tau0, tau0 + tp)

    avg = _quad(explored_length, 0.0, tau) / tau
    rate = (explored_length(tau) - avg) / tau
    return avg, rate


def igc_rate_fd(
    metric: MetricField, geodesic: Geodesic, tau: float, tau0: float = 0.0
) -> float:
    """Finite-difference cross-check of the IGC rate."""
    dt = 1e-4 * tau
    hi, _ = igc(metric, geodesic, tau + dt, tau0)
    lo, _ = igc(metric, geodesic, tau - dt, tau0)
    return (hi - lo) / (2.0 * dt)


def igc_asymptotic_slope(
    scheme: DrivingScheme, theta0: float, thetadot0: float
) -> float:
    """Closed-form dC/dtau = (gamma/hbar) * thetadot0 * shape(theta0)."""
    return scheme.gamma / scheme.hbar * thetadot0 * scheme.shape(theta0)


def report(
    scheme: DrivingScheme,
    theta0: float,
    thetadot0: float,
    tau: float,
    xi0: float = 0.0,
    tau0: float = 0.0,
) -> PathMetricsReport:
    """Full metrics report for one scheme's geodesic over duration tau."""
    metric = fisher_closed_form(scheme)
    geo = geodesic_closed_form(scheme, xi0, theta0, thetadot0)
    traj = ParamTrajectory.from_geodesic(geo, (tau0, tau0 + tau))
    v = entropic_speed(metric, traj, tau0)
    r = entropy_rate_metric(metric, traj, tau0)
    length = thermodynamic_length(metric, traj)
    div = thermodynamic_divergence(metric, traj)
    c, c_rate = igc(metric, geo, tau, tau0)
    return PathMetricsReport(
        v_E=v, r_E=r, length=length, divergence=div,
        igc=c, igc_rate=c_rate, tau=tau,
    )
