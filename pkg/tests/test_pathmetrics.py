"""Length, divergence, speed/rate, and complexity along trajectories."""
import math

import pytest

from entrogeo import (
    DegenerateDistribution,
    DomainError,
    DrivingScheme,
    ParamTrajectory,
    SchemeKind,
    entropic_speed,
    entropy_rate_metric,
    entropy_rate_score,
    fisher_closed_form,
    geodesic_closed_form,
    igc,
    igc_asymptotic_slope,
    probability_path,
    report,
    thermodynamic_divergence,
    thermodynamic_length,
)
from entrogeo.pathmetrics import igc_rate_fd

ALL_KINDS = list(SchemeKind)


def scheme_of(kind, lam=0.5):
    if kind is SchemeKind.CONSTANT:
        return DrivingScheme(kind=kind, gamma=0.25 * math.pi)
    return DrivingScheme.resonant(kind, lam=lam)


# Frozen: v_E = 2 gamma thetadot0 shape(1) at gamma = pi/4, lam = 0.5,
# thetadot0 = 0.1.
V_E = {
    SchemeKind.CONSTANT: 0.15707963267948966,
    SchemeKind.OSCILLATING: 0.13785034646766525,
    SchemeKind.POWER_LAW: 0.069813170079773182,
    SchemeKind.EXPONENTIAL: 0.095273613236509,
}


class TestGeodesicMetrics:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_report_closed_form_consistency(self, kind):
        scheme = scheme_of(kind)
        tau = 1.0
        rep = report(scheme, 1.0, 0.1, tau)
        v = V_E[kind]
        assert rep.v_E == pytest.approx(v, rel=1e-12)
        assert rep.r_E == pytest.approx(v * v, rel=1e-12)
        assert rep.length == pytest.approx(v * tau, rel=1e-9)
        assert rep.divergence == pytest.approx(v * v * tau, rel=1e-9)
        assert rep.igc == pytest.approx(0.5 * v * tau, rel=1e-9)
        assert rep.igc_rate == pytest.approx(0.5 * v, rel=1e-8)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_igc_rate_finite_difference(self, kind):
        scheme = scheme_of(kind)
        metric = fisher_closed_form(scheme)
        geo = geodesic_closed_form(scheme, 0.0, 1.0, 0.1)
        _, rate = igc(metric, geo, 1.0)
        fd = igc_rate_fd(metric, geo, 1.0)
        assert rate == pytest.approx(fd, rel=1e-6)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_asymptotic_slope(self, kind):
        scheme = scheme_of(kind)
        slope = igc_asymptotic_slope(scheme, 1.0, 0.1)
        assert slope == pytest.approx(0.5 * V_E[kind], rel=1e-12)


class TestNonGeodesic:
    def test_cauchy_schwarz_strict_for_reparametrization(self):
        scheme = scheme_of(SchemeKind.EXPONENTIAL)
        metric = fisher_closed_form(scheme)
        geo = geodesic_closed_form(scheme, 0.0, 1.0, 0.1)
        tau = 1.0
        traj = ParamTrajectory(
            theta_of_xi=lambda xi: geo.theta(xi * xi / tau),
            thetadot_of_xi=lambda xi: 2 * xi / tau * geo.thetadot(xi * xi / tau),
            xi_range=(0.0, tau),
        )
        L = thermodynamic_length(metric, traj)
        I = thermodynamic_divergence(metric, traj)
        assert I * tau - L**2 > 1e-3 * I * tau

    def test_speed_not_constant_off_geodesic(self):
        scheme = scheme_of(SchemeKind.POWER_LAW)
        metric = fisher_closed_form(scheme)
        geo = geodesic_closed_form(scheme, 0.0, 1.0, 0.1)
        traj = ParamTrajectory(
            theta_of_xi=lambda xi: geo.theta(xi * xi),
            thetadot_of_xi=lambda xi: 2 * xi * geo.thetadot(xi * xi),
            xi_range=(0.0, 1.0),
        )
        v0 = entropic_speed(metric, traj, 0.25)
        v1 = entropic_speed(metric, traj, 0.75)
        assert abs(v1 - v0) / v1 > 0.1


class TestRates:
    def test_score_route_agrees_with_metric_route(self):
        scheme = scheme_of(SchemeKind.OSCILLATING)
        metric = fisher_closed_form(scheme)
        path = probability_path(scheme)
        geo = geodesic_closed_form(scheme, 0.0, 1.0, 0.1)
        traj = ParamTrajectory.from_geodesic(geo, (0.0, 1.0))
        for xi in (0.1, 0.5, 0.9):
            rm = entropy_rate_metric(metric, traj, xi)
            rs = entropy_rate_score(path, traj, xi)
            assert rs == pytest.approx(rm, rel=1e-8)

    def test_score_route_rejects_degenerate_point(self):
        scheme = DrivingScheme(kind=SchemeKind.CONSTANT, gamma=1.0)
        path = probability_path(scheme)
        traj = ParamTrajectory(
            theta_of_xi=lambda xi: xi,
            thetadot_of_xi=lambda xi: 1.0,
            xi_range=(0.0, math.pi),
        )
        with pytest.raises(DegenerateDistribution):
            entropy_rate_score(path, traj, 0.5 * math.pi)

    def test_zero_velocity_gives_zero_rate(self):
        scheme = DrivingScheme(kind=SchemeKind.CONSTANT, gamma=1.0)
        path = probability_path(scheme)
        traj = ParamTrajectory(
            theta_of_xi=lambda xi: 1.0,
            thetadot_of_xi=lambda xi: 0.0,
            xi_range=(0.0, 1.0),
        )
        assert entropy_rate_score(path, traj, 0.3) == 0.0


class TestDomainGuards:
    def test_xi_outside_range(self):
        scheme = scheme_of(SchemeKind.CONSTANT)
        metric = fisher_closed_form(scheme)
        geo = geodesic_closed_form(scheme, 0.0, 1.0, 0.1)
        traj = ParamTrajectory.from_geodesic(geo, (0.0, 1.0))
        with pytest.raises(DomainError):
            entropic_speed(metric, traj, 2.0)

    def test_igc_requires_positive_tau(self):
        scheme = scheme_of(SchemeKind.CONSTANT)
        metric = fisher_closed_form(scheme)
        geo = geodesic_closed_form(scheme, 0.0, 1.0, 0.1)
        with pytest.raises(DomainError):
            igc(metric, geo, 0.0)

    def test_igc_window_must_respect_validity(self):
        scheme = scheme_of(SchemeKind.EXPONENTIAL)
        metric = fisher_closed_form(scheme)
        geo = geodesic_closed_form(scheme, 0.0, 1.0, 0.1)  # valid to xi = 20
        with pytest.raises(DomainError):
            igc(metric, geo, 25.0)
