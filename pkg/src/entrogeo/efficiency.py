"""Entropic efficiency measures and scheme ranking.

Three measures in [0, 1] compare paths by their constant entropy
production rates r:

    eta1(r) = 1 - r / r_max          (hottest path least efficient)
    eta2(r) = r_min / r              (coolest path most efficient)
    eta_sym(r_l, r_m) = 1 - |r_l - r_m| / (r_l + r_m)

r_min and r_max are taken from the set of rates being ranked, not from
external ideals.  All three induce the same ordering.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from scipy.optimize import brentq

from .errors import DomainError, NoSignChange
from .geometry import fisher_closed_form
from .schemes import DrivingScheme, SchemeKind

_BRENT_XTOL = 1e-10


def eta1(r: float, r_max: float) -> float:
    """Asymmetric efficiency 1 - r/r_max."""
    if r_max <= 0:
        raise DomainError(f"r_max={r_max} must be positive")
    if not (0.0 <= r <= r_max):
        raise DomainError(f"need 0 <= r <= r_max, got r={r}, r_max={r_max}")
    return 1.0 - r / r_max


def eta2(r: float, r_min: float) -> float:
    """Asymmetric efficiency r_min/r; the coolest path scores 1."""
    if r_min <= 0:
        raise DomainError(f"r_min={r_min} must be positive")
    if r < r_min:
        raise DomainError(f"need r >= r_min, got r={r}, r_min={r_min}")
    return r_min / r


def eta_sym(r_l: float, r_m: float) -> float:
    """Symmetric efficiency 1 - |r_l - r_m| / (r_l + r_m)."""
    if r_l <= 0 or r_m <= 0:
        raise DomainError(f"rates must be positive, got ({r_l}, {r_m})")
    return 1.0 - abs(r_l - r_m) / (r_l + r_m)


@dataclass(frozen=True)
class RankedEntry:
    label: str
    r_E: float
    eta1: float
    eta2: float
    eta_sym: float


@dataclass(frozen=True)
class EfficiencyRanking:
    """Per-scheme rates and efficiencies, ordered by descending eta_sym.

    Ties are broken by input order and flagged.
    """

    entries: tuple[RankedEntry, ...]
    order: tuple[str, ...]
    lambda_used: Optional[float]
    theta0_used: float
    has_ties: bool


def entropy_rate_of_scheme(
    scheme: DrivingScheme, theta0: float, thetadot0: float
) -> float:
    """Constant rate along the scheme's geodesic launched at theta0.

    Evaluated pointwise as g(theta0) * thetadot0^2, which equals the
    geodesic's constant rate wherever the geodesic exists and extends
    it smoothly past metric turning points (relevant for the
    oscillating intensity at large lam * theta0).
    """
    if theta0 < 0:
        raise DomainError(f"theta0={theta0} must be nonnegative")
    metric = fisher_closed_form(scheme)
    return metric.g(theta0) * thetadot0 * thetadot0


def rank_schemes(
    schemes: Sequence[DrivingScheme], theta0: float, thetadot0: float
) -> EfficiencyRanking:
    """Rank schemes by entropic efficiency at shared (theta0, thetadot0)."""
    if len(schemes) < 2:
        raise DomainError("ranking needs at least two schemes")
    rates = [entropy_rate_of_scheme(s, theta0, thetadot0) for s in schemes]
    r_min, r_max = min(rates), max(rates)
    labels = []
    for i, s in enumerate(schemes):
        label = s.kind.value
        if label in labels:
            label = f"{label}#{i}"
        labels.append(label)
    entries = tuple(
        RankedEntry(
            label=lab, r_E=r,
            eta1=eta1(r, r_max), eta2=eta2(r, r_min), eta_sym=eta_sym(r, r_min),
        )
        for lab, r in zip(labels, rates)
    )
    # Descending eta_sym == ascending r_E; stable sort keeps input order on ties.
    ordered = sorted(entries, key=lambda e: -e.eta_sym)
    has_ties = len({e.eta_sym for e in entries}) < len(entries)
    lam = next((s.lam for s in schemes if s.lam is not None), None)
    return EfficiencyRanking(
        entries=entries,
        order=tuple(e.label for e in ordered),
        lambda_used=lam,
        theta0_used=theta0,
        has_ties=has_ties,
    )


def _rescaled_rate(kind: SchemeKind, lam: float, theta0: float) -> float:
    """Rate shape factor w(theta0)^2 with the (2 gamma / hbar)^2 thetadot0^2
    prefactor stripped; it is common to schemes sharing gamma."""
    if kind is SchemeKind.CONSTANT or lam == 0.0:
        return 1.0
    u = lam * theta0
    if kind is SchemeKind.OSCILLATING:
        return math.cos(u) ** 2
    if kind is SchemeKind.POWER_LAW:
        return (1.0 + u) ** -4
    return math.exp(-2.0 * u)


def rate_crossover(
    scheme_a: SchemeKind | DrivingScheme,
    scheme_b: SchemeKind | DrivingScheme,
    theta0: float,
    lambda_bracket: tuple[float, float],
) -> float:
    """Value of lam where the two schemes' entropy rates cross at theta0.

    Rates are compared at shared gamma, so only the shape factors matter.
    """
    kind_a = scheme_a.kind if isinstance(scheme_a, DrivingScheme) else SchemeKind(scheme_a)
    kind_b = scheme_b.kind if isinstance(scheme_b, DrivingScheme) else SchemeKind(scheme_b)

    def diff(lam: float) -> float:
        return _rescaled_rate(kind_a, lam, theta0) - _rescaled_rate(kind_b, lam, theta0)

    a, b = lambda_bracket
    fa, fb = diff(a), diff(b)
    if fa == 0.0 and fb == 0.0:
        raise NoSignChange("rates are identical on the bracket")
    if fa * fb > 0.0:
        raise NoSignChange(
            f"no sign change on [{a}, {b}]: diff({a})={fa}, diff({b})={fb}"
        )
    return float(brentq(diff, a, b, xtol=_BRENT_XTOL))


def region_boundary_scale() -> float:
    """Root u* of (1 + u)^2 = exp(u), u > 0: the exponential scheme is the
    cooler one exactly when lam * theta0 >= u*."""
    return float(brentq(lambda u: 2.0 * math.log1p(u) - u, 1.0, 5.0, xtol=1e-14))


def check_ranking_preservation(rates: Sequence[float]) -> bool:
    """True iff eta1, eta2, and eta_sym rank the rates identically.

    Each measure is a monotone non-increasing function of the rate, so
    identical ranking is equivalent to every measure's score being
    non-increasing along the rates sorted ascending.  Checking
    monotonicity directly keeps rounding-induced score ties (where two
    nearly equal rates collapse under one measure but not another) from
    registering as disagreement.
    """
    if len(rates) < 2:
        raise DomainError("need at least two rates")
    if any(r <= 0 for r in rates):
        raise DomainError("rates must be positive")
    r_min, r_max = min(rates), max(rates)
    ascending = sorted(rates)
    for score in (
        lambda r: eta1(r, r_max),
        lambda r: eta2(r, r_min),
        lambda r: eta_sym(r, r_min),
    ):
        vals = [score(r) for r in ascending]
        if any(b > a for a, b in zip(vals, vals[1:])):
            return False
    return True
