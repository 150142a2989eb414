"""Command-line surface: single-shot metric queries, figure/table data
emitters, crossover root finding, and the invariant verification suite.

Exit codes: 0 ok, 1 verification failure, 2 usage/domain error,
3 numerical failure.  CSV output is deterministic (17 significant
digits, atomic writes) and every run is stamped with a config hash.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Optional, Sequence

import numpy as np

from . import __version__, efficiency, pathmetrics
from .errors import (
    DegenerateDistribution,
    DomainError,
    MetricDegenerate,
    NoSignChange,
    OutOfValidity,
    QuadratureFailure,
    StepFailure,
)
from .geometry import (
    GeodesicFormulation,
    fisher_closed_form,
    geodesic_closed_form,
    geodesic_numeric,
)
from .schemes import DrivingScheme, SchemeKind
from .verify import run_checks

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3

_DOMAIN_ERRORS = (DomainError, OutOfValidity, NoSignChange, DegenerateDistribution, ValueError)
_NUMERICAL_ERRORS = (QuadratureFailure, StepFailure, MetricDegenerate)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _config_hash(cfg: dict) -> str:
    payload = json.dumps(cfg, sort_keys=True, default=str).encode()
    return hashlib.sha256(payload).hexdigest()[:12]


def _max_workers() -> int:
    raw = os.environ.get("ENTROGEO_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    if n < 1:
        raise DomainError(f"ENTROGEO_THREADS={raw!r} must be a positive integer")
    return n


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".entrogeo-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        _atomic_write(output, text)
    else:
        sys.stdout.write(text)


def _csv(
    command: str,
    cfg: dict,
    comments: Sequence[str],
    header: Sequence[str],
    rows: Iterable[Sequence[float]],
) -> str:
    lines = [f"# entrogeo v{__version__} {command} {_config_hash(cfg)}"]
    lines += [f"# {c}" for c in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def _json_text(command: str, cfg: dict, payload: dict) -> str:
    doc = {
        "tool": f"entrogeo v{__version__}",
        "command": command,
        "config_hash": _config_hash(cfg),
        **payload,
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _cfg(args) -> dict:
    """Run configuration for hashing: everything except the handler and
    the output destination, so identical configs hash identically no
    matter where the file lands."""
    cfg = vars(args).copy()
    cfg.pop("func", None)
    cfg.pop("output", None)
    return cfg


def _build_scheme(args) -> DrivingScheme:
    kind = SchemeKind(args.scheme)
    if kind is SchemeKind.CONSTANT:
        return DrivingScheme(kind=kind, gamma=args.gamma or 1.0, hbar=args.hbar)
    if args.gamma is not None:
        return DrivingScheme(
            kind=kind, gamma=args.gamma, lam=args.lam, hbar=args.hbar,
            resonance_max_constraint=False,
        )
    return DrivingScheme.resonant(kind, lam=args.lam, hbar=args.hbar)


# --- rescaled closed forms shared by the figure emitters -----------------

def _shape(kind: SchemeKind, lam: np.ndarray, theta0: float) -> np.ndarray:
    """Intensity shape w(theta0) as a function of lam (vectorized)."""
    u = np.asarray(lam, dtype=float) * theta0
    if kind is SchemeKind.CONSTANT:
        return np.ones_like(u)
    if kind is SchemeKind.OSCILLATING:
        return np.cos(u)
    if kind is SchemeKind.POWER_LAW:
        return (1.0 + u) ** -2
    return np.exp(-u)


def _eta_sym_raw(r: np.ndarray, r_min: np.ndarray) -> np.ndarray:
    total = r + r_min
    with np.errstate(invalid="ignore", divide="ignore"):
        eta = 1.0 - np.abs(r - r_min) / total
    return np.where(total == 0.0, 1.0, eta)


# --- subcommands ---------------------------------------------------------

def cmd_metrics(args) -> int:
    scheme = _build_scheme(args)
    if args.theta0 <= 0 or args.thetadot0 <= 0 or args.tau <= 0:
        raise DomainError("theta0, thetadot0, and tau must be positive")
    rep = pathmetrics.report(
        scheme, args.theta0, args.thetadot0, args.tau, xi0=args.xi0, tau0=args.tau0
    )
    g_scale = 2.0 * scheme.gamma / scheme.hbar
    w0 = scheme.shape(args.theta0)
    reference = {
        "v_E": g_scale * w0 * args.thetadot0,
        "r_E": (g_scale * w0 * args.thetadot0) ** 2,
        "igc_rate": pathmetrics.igc_asymptotic_slope(scheme, args.theta0, args.thetadot0),
    }
    cfg = _cfg(args)
    payload = {
        "scheme": scheme.kind.value,
        "gamma": scheme.gamma,
        "lambda": scheme.lam,
        "hbar": scheme.hbar,
        "computed": {
            "v_E": rep.v_E,
            "r_E": rep.r_E,
            "length": rep.length,
            "divergence": rep.divergence,
            "igc": rep.igc,
            "igc_rate": rep.igc_rate,
            "tau": rep.tau,
        },
        "closed_form": reference,
    }
    _emit(_json_text("metrics", cfg, payload), args.output)
    return EXIT_OK


def cmd_geodesic(args) -> int:
    scheme = _build_scheme(args)
    metric = fisher_closed_form(scheme)
    geo = geodesic_closed_form(scheme, args.xi0, args.theta0, args.thetadot0)
    num_c = geodesic_numeric(
        metric, args.xi0, args.theta0, args.thetadot0, args.xi_end,
        GeodesicFormulation.CHRISTOFFEL, geo.validity_end, n_samples=args.samples,
    )
    num_d = geodesic_numeric(
        metric, args.xi0, args.theta0, args.thetadot0, args.xi_end,
        GeodesicFormulation.DIVERGENCE, geo.validity_end, n_samples=args.samples,
    )
    theta_cf = np.asarray(geo.theta(num_c.xi))
    thetadot_cf = np.asarray(geo.thetadot(num_c.xi))
    cfg = _cfg(args)
    text = _csv(
        "geodesic", cfg,
        comments=[
            "theta_closed: closed-form geodesic theta(xi)",
            "theta_christoffel: second-order form theta'' + (g'/2g) theta'^2 = 0",
            "theta_divergence: first-order form d/dxi(g theta') = (g'/2) theta'^2",
        ],
        header=["xi", "theta_closed", "thetadot_closed",
                "theta_christoffel", "theta_divergence"],
        rows=zip(num_c.xi, theta_cf, thetadot_cf, num_c.theta, num_d.theta),
    )
    _emit(text, args.output)
    return EXIT_OK


def cmd_figure1(args) -> int:
    lam = np.linspace(args.lambda_start, args.lambda_stop, args.lambda_count)
    tau = np.linspace(args.tau_start, args.tau_stop, args.tau_count)
    if len(lam) != len(tau):
        raise DomainError("lambda and tau grids must have equal counts")
    theta0 = args.theta0
    kinds = [SchemeKind.CONSTANT, SchemeKind.OSCILLATING,
             SchemeKind.POWER_LAW, SchemeKind.EXPONENTIAL]
    rtilde = {k: _shape(k, lam, theta0) ** 2 for k in kinds}
    stack = np.vstack([rtilde[k] for k in kinds])
    r_min = stack.min(axis=0)
    eta = {k: _eta_sym_raw(rtilde[k], r_min) for k in kinds}
    # panel (c): rescaled complexity vs tau at fixed lambda
    ctilde = {k: float(_shape(k, args.lambda_c, theta0)) * tau for k in kinds}
    cfg = _cfg(args)
    text = _csv(
        "figure1", cfg,
        comments=[
            "rtilde_<scheme>: rescaled entropy production rate, "
            "r_E = (2 gamma/hbar)^2 thetadot0^2 * rtilde",
            "eta_<scheme>: symmetric entropic efficiency against the "
            "per-lambda minimum rate of the four schemes",
            f"ctilde_<scheme>: rescaled complexity C = (gamma/hbar) thetadot0 "
            f"* ctilde at lambda = {args.lambda_c}",
        ],
        header=(
            ["lambda"]
            + [f"rtilde_{k.value}" for k in kinds]
            + [f"eta_{k.value}" for k in kinds]
            + ["tau"]
            + [f"ctilde_{k.value}" for k in kinds]
        ),
        rows=(
            [lam[i]]
            + [rtilde[k][i] for k in kinds]
            + [eta[k][i] for k in kinds]
            + [tau[i]]
            + [ctilde[k][i] for k in kinds]
            for i in range(len(lam))
        ),
    )
    _emit(text, args.output)
    return EXIT_OK


def _region_rows(theta0_grid, lam_grid, u_star):
    rows = []
    for th0 in theta0_grid:
        for lam in lam_grid:
            rows.append((th0, lam, 1.0 if lam * th0 >= u_star else 0.0))
    return rows


def cmd_figure2(args) -> int:
    lam = np.linspace(args.lambda_start, args.lambda_stop, args.lambda_count)
    theta0 = args.theta0
    # rates at shared gamma tied to lambda through the resonance constraint
    prefactor = (math.pi * lam * args.thetadot0) ** 2
    re_exp = prefactor * _shape(SchemeKind.EXPONENTIAL, lam, theta0) ** 2
    re_pow = prefactor * _shape(SchemeKind.POWER_LAW, lam, theta0) ** 2
    exp_cooler = (re_exp <= re_pow).astype(float)
    ratio_igc = np.exp(-lam * theta0) * (1.0 + lam * theta0) ** 2
    ratio_rate = ratio_igc**2
    cfg = _cfg(args)
    text = _csv(
        "figure2", cfg,
        comments=[
            "re_*: entropy production rate (pi lambda thetadot0)^2 * shape^2 "
            "with gamma = (pi/2) hbar lambda",
            "exp_cooler: 1 when re_exponential <= re_powerlaw",
            "ratio_igc: C_exponential / C_powerlaw = exp(-u) (1+u)^2, u = lambda theta0",
            "ratio_rate: r_exponential / r_powerlaw = ratio_igc^2",
        ],
        header=["lambda", "re_exponential", "re_powerlaw", "exp_cooler",
                "ratio_igc", "ratio_rate"],
        rows=zip(lam, re_exp, re_pow, exp_cooler, ratio_igc, ratio_rate),
    )
    _emit(text, args.output)

    # panel (b): region grid over (theta0, lambda)
    u_star = efficiency.region_boundary_scale()
    n = args.grid_count
    theta0_grid = np.linspace(args.grid_theta0_max / n, args.grid_theta0_max, n)
    lam_grid = np.linspace(args.grid_lambda_max / n, args.grid_lambda_max, n)
    workers = _max_workers()
    chunks = np.array_split(theta0_grid, workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pieces = list(pool.map(lambda c: _region_rows(c, lam_grid, u_star), chunks))
    else:
        pieces = [_region_rows(c, lam_grid, u_star) for c in chunks]
    rows = [row for piece in pieces for row in piece]
    region_text = _csv(
        "figure2-region", cfg,
        comments=[
            "exp_cooler: 1 when lambda*theta0 >= u_star with (1+u_star)^2 = exp(u_star)",
            f"u_star = {_fmt(u_star)}",
        ],
        header=["theta0", "lambda", "exp_cooler"],
        rows=rows,
    )
    if args.output:
        stem, ext = os.path.splitext(args.output)
        _atomic_write(f"{stem}_region{ext or '.csv'}", region_text)
    else:
        sys.stdout.write(region_text)
    return EXIT_OK


_TABLE_ORDER = (SchemeKind.EXPONENTIAL, SchemeKind.POWER_LAW,
                SchemeKind.OSCILLATING, SchemeKind.CONSTANT)


def cmd_table1(args) -> int:
    gamma = 0.5 * math.pi * args.hbar * args.lam
    schemes = []
    for kind in (SchemeKind.CONSTANT, SchemeKind.OSCILLATING,
                 SchemeKind.POWER_LAW, SchemeKind.EXPONENTIAL):
        if kind is SchemeKind.CONSTANT:
            schemes.append(DrivingScheme(kind=kind, gamma=gamma, hbar=args.hbar))
        else:
            schemes.append(DrivingScheme.resonant(kind, lam=args.lam, hbar=args.hbar))
    ranking = efficiency.rank_schemes(schemes, args.theta0, args.thetadot0)
    expected = tuple(k.value for k in _TABLE_ORDER)
    conforms = ranking.order == expected
    # dC/dtau on a geodesic is v_E / 2; evaluate from the pointwise metric
    # so the oscillating entry extends past its turning point, as the
    # rates do.
    slopes = {
        s.kind.value: 0.5 * args.thetadot0
        * math.sqrt(fisher_closed_form(s).g(args.theta0))
        for s in schemes
    }
    cfg = _cfg(args)
    payload = {
        "lambda": args.lam,
        "theta0": args.theta0,
        "thetadot0": args.thetadot0,
        "entries": [
            {
                "scheme": e.label,
                "r_E": e.r_E,
                "eta1": e.eta1,
                "eta2": e.eta2,
                "eta_sym": e.eta_sym,
                "igc_slope": slopes[e.label],
            }
            for e in ranking.entries
        ],
        "order": list(ranking.order),
        "table_conformance": conforms,
        "expected_order": list(expected),
        "has_ties": ranking.has_ties,
    }
    _emit(_json_text("table1", cfg, payload), args.output)
    return EXIT_OK


def cmd_crossover(args) -> int:
    lam_star = efficiency.rate_crossover(
        SchemeKind(args.scheme_a), SchemeKind(args.scheme_b),
        args.theta0, (args.bracket[0], args.bracket[1]),
    )
    u_star = efficiency.region_boundary_scale()
    cfg = _cfg(args)
    payload = {
        "lambda_star": lam_star,
        "theta0": args.theta0,
        "u_star": u_star,
        "boundary_residual": (1.0 + u_star) ** 2 - math.exp(u_star),
    }
    _emit(_json_text("crossover", cfg, payload), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_checks(name_filter=args.filter, inject_failure=args.inject_failure)
    if not results:
        print(f"no invariant matches filter {args.filter!r}", file=sys.stderr)
        return EXIT_DOMAIN
    failed = 0
    for res in results:
        if res.passed:
            print(f"PASS {res.name}")
        else:
            failed += 1
            print(f"FAIL {res.name}: {res.message}")
    print(f"{len(results) - failed}/{len(results)} invariants passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAIL


# --- argument parsing ----------------------------------------------------

def _add_scheme_args(p, require_scheme=True):
    p.add_argument("--scheme", required=require_scheme,
                   choices=[k.value for k in SchemeKind])
    p.add_argument("--gamma", type=float, default=None,
                   help="field intensity scale; defaults to the resonance value")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--hbar", type=float, default=1.0)


def _add_ic_args(p):
    p.add_argument("--theta0", type=float, default=1.0)
    p.add_argument("--thetadot0", type=float, default=0.1)
    p.add_argument("--xi0", type=float, default=0.0)


def _add_range(p, name, start, stop, count):
    p.add_argument(f"--{name}-start", type=float, default=start)
    p.add_argument(f"--{name}-stop", type=float, default=stop)
    p.add_argument(f"--{name}-count", type=int, default=count)


def _check_range(args, name):
    start = getattr(args, f"{name}_start")
    stop = getattr(args, f"{name}_stop")
    count = getattr(args, f"{name}_count")
    if count < 2 or stop <= start:
        raise DomainError(f"{name} range needs count >= 2 and stop > start")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entrogeo",
        description="Fisher-metric geodesics, entropy production, and "
                    "efficiency ranking for driven two-level systems",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="single-point path metrics report")
    _add_scheme_args(p)
    _add_ic_args(p)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--tau0", type=float, default=0.0)
    p.add_argument("--output", default=None)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("geodesic", help="sampled geodesic, closed form vs numeric")
    _add_scheme_args(p)
    _add_ic_args(p)
    p.add_argument("--xi-end", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("figure1", help="rates, efficiencies, and complexity sweeps")
    p.add_argument("--theta0", type=float, default=1.0)
    _add_range(p, "lambda", 0.0, 3.0, 301)
    _add_range(p, "tau", 0.0, 10.0, 301)
    p.add_argument("--lambda-c", type=float, default=0.5,
                   help="lambda used for the complexity-vs-tau columns")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("figure2", help="exponential vs power-law comparison")
    p.add_argument("--theta0", type=float, default=1.0)
    p.add_argument("--thetadot0", type=float, default=1.0)
    _add_range(p, "lambda", 0.0, 6.0, 601)
    p.add_argument("--grid-count", type=int, default=201)
    p.add_argument("--grid-theta0-max", type=float, default=4.0)
    p.add_argument("--grid-lambda-max", type=float, default=6.0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("table1", help="efficiency ranking of the four schemes")
    p.add_argument("--lambda", dest="lam", type=float, default=18.0)
    p.add_argument("--theta0", type=float, default=1.0)
    p.add_argument("--thetadot0", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("crossover", help="lambda where two schemes' rates cross")
    p.add_argument("--scheme-a", default=SchemeKind.EXPONENTIAL.value,
                   choices=[k.value for k in SchemeKind])
    p.add_argument("--scheme-b", default=SchemeKind.POWER_LAW.value,
                   choices=[k.value for k in SchemeKind])
    p.add_argument("--theta0", type=float, default=1.0)
    p.add_argument("--bracket", type=float, nargs=2, default=[1.0, 5.0])
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--filter", default=None,
                   help="run only invariants whose name contains this substring")
    p.add_argument("--inject-failure", action="store_true",
                   help=argparse.SUPPRESS)  # harness self-test hook
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "figure1":
            _check_range(args, "lambda")
            _check_range(args, "tau")
        elif args.command == "figure2":
            _check_range(args, "lambda")
            if args.grid_count < 2:
                raise DomainError("grid-count must be >= 2")
        if getattr(args, "scheme", None) not in (None, SchemeKind.CONSTANT.value):
            if args.lam is None or args.lam <= 0:
                raise DomainError("--lambda > 0 required for this scheme")
        return args.func(args)
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
