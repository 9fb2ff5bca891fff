#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

import argparse
import csv
import itertools
import json
import logging
import math
import sys

from logging import getLogger
from pathlib import Path

import numpy as np

from aiologic import Lock

from ._balance import (
    blowup_balance_isotropic,
    printed_resonances,
    resonance_formula,
    resonances,
)
from ._core import HaffParams, ModelParams, haff_temperature, integrate_haff
from ._meerson import (
    MeersonParams,
    density_lagrangian,
    euler_lagrange_maps,
    eulerian_density,
    eulerian_mass,
    global_blowup_time,
    pressure,
    specific_volume,
    temperature_lagrangian,
    velocity_field,
)
from ._riemann import (
    DelayedConcentration,
    RiemannData,
    concentration_onset,
    front_speed_limit,
    solve,
)
from ._scan import blowup_scan
from ._uniform import (
    IsotropicState,
    UDState,
    anisotropy_diagnostic,
    density_exponent_fit,
    density_field,
    integrate,
    pack,
)
from ._verify import SCENARIOS, STEPS_DEFAULT, run_scenario
from .lowlevel import (
    ATOL_DEFAULT,
    LOG_LEVEL_DEFAULT,
    OUTPUT_DIR_DEFAULT,
    RTOL_DEFAULT,
    BlowUpDetected,
    InelasticaError,
    InsufficientSamplesError,
    IntegrationOptions,
    ParameterError,
    StepUnderflow,
)

LOGGER = getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

SCHEMA_VERSION = "1"

HAFF_TOLERANCE = 1e-8
RESONANCE_TOLERANCE = 1e-10
MASS_TOLERANCE = 1e-8
VELOCITY_TOLERANCE = 1e-10


def _format(value, /):
    if isinstance(value, str):
        return value
    if value is None:
        return ""

    return format(float(value), ".17g")


def _jsonable(value, /):
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)

        # strict JSON has no non-finite numbers
        return value if math.isfinite(value) else str(value)

    return value


class Output:
    """Writer of the CSV tables, JSON reports and SVG plots of one run.

    Writes are serialized, so workers may share one instance.
    """

    __slots__ = (
        "__csv",
        "__directory",
        "__json",
        "__lock",
        "__svg",
        "__written",
    )

    @staticmethod
    def __new__(cls, /, directory, *, csv=True, json=True, svg=False):
        self = super(Output, cls).__new__(cls)

        self.__directory = Path(directory)
        self.__csv = csv
        self.__json = json
        self.__svg = svg
        self.__lock = Lock()
        self.__written = []

        return self

    def __repr__(self, /):
        return f"<Output directory={str(self.__directory)!r}>"

    def __path(self, name, suffix, /):
        self.__directory.mkdir(parents=True, exist_ok=True)

        path = self.__directory / f"{name}{suffix}"
        self.__written.append(path)

        return path

    def table(self, /, name, header, rows):
        if not self.__csv:
            return

        with self.__lock:
            path = self.__path(name, ".csv")

            with path.open("w", newline="", encoding="utf-8") as file:
                writer = csv.writer(file, lineterminator="\n")
                writer.writerow(header)
                writer.writerows([_format(v) for v in row] for row in rows)

        LOGGER.debug("wrote %s", path)

    def report(self, /, name, document, failures=()):
        if not self.__json:
            return

        document = {
            "schema_version": SCHEMA_VERSION,
            **_jsonable(document),
            "failures": list(failures),
        }

        with self.__lock:
            path = self.__path(name, ".json")
            path.write_text(
                json.dumps(document, indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )

        LOGGER.debug("wrote %s", path)

    def plot(self, /, name, draw):
        if not self.__svg:
            return

        try:
            import matplotlib  # noqa: PLC0415
        except ImportError:
            msg = "--svg needs matplotlib (the 'plot' extra)"
            raise ParameterError(msg) from None

        matplotlib.use("Agg")

        import matplotlib.pyplot as plt  # noqa: PLC0415

        with self.__lock:
            fig, ax = plt.subplots(figsize=(6, 4))

            try:
                draw(ax)
                fig.tight_layout()

                path = self.__path(name, ".svg")
                fig.savefig(path, format="svg", metadata={"Date": None})
            finally:
                plt.close(fig)

        LOGGER.debug("wrote %s", path)

    @property
    def directory(self, /):
        return self.__directory

    @property
    def written(self, /):
        return tuple(self.__written)


def _options(args, /):
    return IntegrationOptions(rtol=args.rtol, atol=args.atol)


def _params_record(params, /):
    return {"gamma": params.gamma, "lam": params.lam, "dim": params.dim}


def _termination_record(termination, /):
    record = {"name": termination.name}

    if isinstance(termination, BlowUpDetected):
        record["t_last"] = termination.t_last
        record["remaining"] = termination.remaining
        record["t_estimate"] = termination.t_estimate
    else:
        record["t"] = termination.t

    return record


def _times(t_final, samples, /):
    if t_final < 0:
        msg = f"--t-final must be >= 0, got {t_final!r}"
        raise ParameterError(msg)
    if samples < 1:
        msg = f"--samples must be >= 1, got {samples!r}"
        raise ParameterError(msg)

    if t_final == 0 or samples == 1:
        return np.array([0.0])

    return np.linspace(0.0, t_final, samples)


def cmd_haff(args, output, /):
    # the cooling law does not involve gamma
    params = ModelParams(1.0, args.lam)
    haff = HaffParams(args.rho0, args.T0)
    times = _times(args.t_final, args.samples)

    closed = np.atleast_1d(haff_temperature(params, haff, times))
    integrated = integrate_haff(params, haff, times, _options(args))
    diff = np.abs(closed - integrated)
    max_rel_diff = float(np.max(diff / closed))

    output.table(
        "haff",
        ["t", "T_closed", "T_integrated", "abs_diff"],
        zip(times, closed, integrated, diff),
    )

    failures = []

    if not max_rel_diff <= HAFF_TOLERANCE:
        failures.append(
            f"max relative difference {max_rel_diff!r} exceeds"
            f" {HAFF_TOLERANCE!r}"
        )

    output.report(
        "haff",
        {
            "lam": args.lam,
            "rho0": args.rho0,
            "T0": args.T0,
            "t_final": float(times[-1]),
            "max_rel_diff": max_rel_diff,
            "tolerance": HAFF_TOLERANCE,
        },
        failures,
    )

    def draw(ax):
        ax.plot(times, closed, label="closed form")
        ax.plot(times, integrated, "--", label="integrated")
        ax.set_xlabel("t")
        ax.set_ylabel("T")
        ax.legend()

    output.plot("haff", draw)

    return EXIT_CHECK if failures else EXIT_OK


def _state_columns(dim, isotropic, /):
    if isotropic:
        return ["phi", "alpha1", "a", "C"]

    indices = range(1, dim + 1)

    return [
        *(f"alpha{i}{j}" for i in indices for j in indices),
        *(f"beta{i}" for i in indices),
        *(f"A{i}{j}" for i in indices for j in indices),
        *(f"B{i}" for i in indices),
        "C",
        "phi",
    ]


def _uniform_initial(args, /):
    n = args.dim
    full = args.full or any(
        value is not None for value in (args.alpha, args.beta, args.A, args.B)
    )

    if not full:
        return IsotropicState(0.0, args.alpha1, args.a, args.C, args.phi)

    def matrix(values, diagonal):
        if values is None:
            return diagonal * np.eye(n)
        if len(values) != n * n:
            msg = f"expected {n * n} matrix entries, got {len(values)}"
            raise ParameterError(msg)

        return np.reshape(values, (n, n))

    def vector(values):
        if values is None:
            return np.zeros(n)
        if len(values) != n:
            msg = f"expected {n} vector entries, got {len(values)}"
            raise ParameterError(msg)

        return np.asarray(values, dtype=float)

    return UDState(
        0.0,
        matrix(args.alpha, args.alpha1),
        vector(args.beta),
        matrix(args.A, args.a),
        vector(args.B),
        args.C,
        args.phi,
    )


def _grid(extent, points, dim, /):
    axis = np.linspace(-extent, extent, points)

    if dim == 1:
        return axis, axis

    xx, yy = np.meshgrid(axis, axis, indexing="xy")

    return axis, np.stack([xx, yy], axis=-1)


def _uniform_snapshots(args, trajectory, output, /):
    dim = trajectory.dim

    if dim > 2:
        LOGGER.warning("density snapshots are written for dim <= 2 only")

        return

    axis, points = _grid(args.grid_extent, args.grid_points, dim)
    t_first, t_last = trajectory.times[0], trajectory.times[-1]

    for k, t in enumerate(args.snapshots):
        if not t_first <= t <= t_last:
            LOGGER.warning("snapshot t=%r outside the trajectory, skipped", t)
            continue

        state = trajectory.state(t)

        if isinstance(state, IsotropicState):
            state = UDState.from_isotropic(state, dim)

        rho = density_field(state, points)

        if dim == 1:
            output.table(f"density_{k}", ["x", "rho"], zip(axis, rho))
        else:
            output.table(
                f"density_{k}",
                ["x", "y", "rho"],
                zip(
                    points[..., 0].ravel(),
                    points[..., 1].ravel(),
                    rho.ravel(),
                ),
            )

        def draw(ax, rho=rho, t=t):
            if dim == 1:
                ax.plot(axis, rho)
                ax.set_xlabel("x")
                ax.set_ylabel("rho")
            else:
                mesh = ax.pcolormesh(axis, axis, rho, shading="auto")
                ax.figure.colorbar(mesh, ax=ax, label="rho")
                ax.set_xlabel("x")
                ax.set_ylabel("y")
                ax.set_aspect("equal")

            ax.set_title(f"t = {t:g}")

        output.plot(f"density_{k}", draw)


def cmd_uniform(args, output, /):
    params = ModelParams(args.gamma, args.lam, args.dim)
    initial = _uniform_initial(args)
    trajectory = integrate(params, initial, args.t_final, _options(args))
    termination = trajectory.termination

    output.table(
        "trajectory",
        ["t", *_state_columns(trajectory.dim, trajectory.isotropic), "norm"],
        (
            [t, *vector, norm]
            for t, vector, norm in zip(
                trajectory.times,
                trajectory.vectors,
                trajectory.norms,
            )
        ),
    )

    _uniform_snapshots(args, trajectory, output)

    document = {
        "params": _params_record(params),
        "initial": pack(initial),
        "termination": _termination_record(termination),
        "density_exponent": None,
        "max_anisotropy": None,
    }

    if isinstance(termination, BlowUpDetected):
        try:
            document["density_exponent"] = density_exponent_fit(trajectory)
        except InsufficientSamplesError as exc:
            LOGGER.warning("density exponent not fitted: %s", exc)

    if not trajectory.isotropic and trajectory.dim == 2:
        times, ratios = anisotropy_diagnostic(trajectory)
        document["max_anisotropy"] = float(np.max(ratios))

        output.table("anisotropy", ["t", "ratio"], zip(times, ratios))

    failures = []

    if isinstance(termination, StepUnderflow):
        failures.append(f"step size underflow at t={termination.t!r}")

    output.report("uniform", document, failures)

    def draw(ax):
        ax.semilogy(trajectory.times, trajectory.norms)
        ax.set_xlabel("t")
        ax.set_ylabel("max |state|")

    output.plot("trajectory", draw)

    return EXIT_NUMERIC if failures else EXIT_OK


def _riemann_data(args, /):
    if args.data is None:
        msg = "--data VL TL VR TR is required"
        raise ParameterError(msg)

    vL, TL, vR, TR = args.data

    return RiemannData(vL, TL, vR, TR, args.lam, args.c)


def cmd_riemann(args, output, /):
    data = _riemann_data(args)
    solution = solve(data)
    regime = solution.regime
    times = _times(args.t_final, args.samples)

    front_rows = []
    mass_rows = []

    for t in times:
        masses = solution.point_masses(t)

        if masses:
            ((x_star, theta),) = masses
            front_rows.append([t, None, None, x_star])
            mass_rows.append([t, x_star, theta])
        else:
            x_minus, x_plus = solution.fronts(t)
            front_rows.append([t, x_minus, x_plus, None])

    output.table("fronts", ["t", "x_minus", "x_plus", "x_star"], front_rows)
    output.table("point_masses", ["t", "x_star", "theta"], mass_rows)

    xs = np.linspace(-args.x_extent, args.x_extent, args.x_points)

    for k, t in enumerate(args.snapshots):
        v, T, rho = solution.evaluate(t, xs)
        output.table(
            f"snapshot_{k}",
            ["x", "v", "T", "rho"],
            zip(xs, v, T, rho),
        )

    regime_record = {"name": regime.name}

    if isinstance(regime, DelayedConcentration):
        regime_record["t_doublestar"] = regime.t_doublestar
        regime_record["t_star"] = regime.t_star

    document = {
        "data": {
            "vL": data.vL,
            "TL": data.TL,
            "vR": data.vR,
            "TR": data.TR,
            "lam": data.lam,
            "c": data.c,
        },
        "regime": regime_record,
        "concentration_onset": concentration_onset(data),
        "front_speed_limit": None,
        "middle_at_0": None,
    }

    if solution.two_contact is not None:
        document["middle_at_0"] = solution.two_contact.middle(0.0)

    if solution.delta is not None:
        document["front_speed_limit"] = front_speed_limit(data)

    output.report("riemann", document)

    def draw(ax):
        rows = np.array(
            [[math.nan if v is None else v for v in row] for row in front_rows]
        )
        ax.plot(rows[:, 1], rows[:, 0], label="x_-")
        ax.plot(rows[:, 2], rows[:, 0], label="x_+")
        ax.plot(rows[:, 3], rows[:, 0], label="x_*", linewidth=2)
        ax.set_xlabel("x")
        ax.set_ylabel("t")
        ax.legend()

    output.plot("fronts", draw)

    return EXIT_OK


def cmd_meerson(args, output, /):
    mp = MeersonParams(
        args.amp,
        args.mu,
        args.rho0,
        gamma=args.gamma,
        lam=args.lam,
    )
    t_star, m_star = global_blowup_time(mp)

    for t in args.times:
        if not 0 <= t < t_star:
            msg = f"snapshot times must lie in [0, {t_star!r}), got {t!r}"
            raise ParameterError(msg)

    low, high = mp.mass_domain
    masses = np.linspace(low, high, args.mass_points + 2)[1:-1]
    mass_rows = []
    velocity_mismatch = 0.0

    for k, t in enumerate(args.times):
        rows = []

        for m in masses:
            v = velocity_field(mp, m, t)
            v_mass = velocity_field(mp, m, t, method="mass")
            velocity_mismatch = max(velocity_mismatch, abs(v - v_mass))

            rows.append([
                m,
                specific_volume(mp, m, t),
                density_lagrangian(mp, m, t),
                v,
                pressure(mp, m),
                temperature_lagrangian(mp, m, t),
            ])

        output.table(
            f"lagrangian_{k}",
            ["m", "tau", "rho", "v", "p", "T"],
            rows,
        )

        maps = euler_lagrange_maps(mp, t)
        x_low, x_high = maps.support
        xs = np.linspace(x_low, x_high, args.x_points + 2)[1:-1]

        output.table(
            f"eulerian_{k}",
            ["x", "rho"],
            zip(xs, eulerian_density(mp, t, xs, maps=maps)),
        )

        mass_rows.append([t, eulerian_mass(mp, t, maps=maps)])

    initial = mass_rows[0][1] if mass_rows else math.nan
    drift = max((abs(row[1] - initial) for row in mass_rows), default=0.0)

    output.table("eulerian_mass", ["t", "mass"], mass_rows)

    failures = []

    if not drift <= MASS_TOLERANCE:
        failures.append(f"Eulerian mass drifts by {drift!r}")
    if not velocity_mismatch <= VELOCITY_TOLERANCE:
        failures.append(
            f"velocity constructions differ by {velocity_mismatch!r}"
        )

    output.report(
        "meerson",
        {
            "params": {
                "amplitude": mp.amplitude,
                "mu": mp.mu,
                "gamma": mp.gamma,
                "lam": mp.lam,
                "consistent": mp.consistent,
            },
            "t_star": t_star,
            "m_star": m_star,
            "mass_drift": drift,
            "velocity_mismatch": velocity_mismatch,
        },
        failures,
    )

    def draw(ax):
        for t in args.times:
            ax.plot(masses, density_lagrangian(mp, masses, t), label=f"{t:g}")

        ax.set_xlabel("m")
        ax.set_ylabel("rho")
        ax.legend(title="t")

    output.plot("lagrangian_density", draw)

    return EXIT_CHECK if failures else EXIT_OK


def cmd_verify(args, output, /):
    result = run_scenario(args.scenario, args.steps)

    output.table(
        "verify",
        ["piece", "equation", "h", "max_norm", "order"],
        (
            [label, name, report.h, norm, report.order[name]]
            for label, report in result.reports.items()
            for name, norm in report.max_norms.items()
        ),
    )
    output.report("verify", result.as_dict(), result.failures)

    return EXIT_OK if result.passed else EXIT_CHECK


def cmd_resonance(args, output, /):
    params = ModelParams(args.gamma, args.lam, args.n)
    balance = blowup_balance_isotropic(params, 1.0)
    report = resonances(params, balance)
    formula = np.sort(resonance_formula(params))
    printed = np.sort(printed_resonances(params))
    eigenvalues = report.eigenvalues

    error = float(np.max(np.abs(eigenvalues - formula)))

    output.table(
        "resonance",
        ["index", "real", "imag", "formula", "printed"],
        (
            [k, value.real, value.imag, expected, quoted]
            for k, (value, expected, quoted) in enumerate(
                zip(eigenvalues, formula, printed)
            )
        ),
    )

    failures = []

    if not error <= RESONANCE_TOLERANCE:
        failures.append(f"eigenvalues differ from the formula by {error!r}")

    output.report(
        "resonance",
        {
            "params": _params_record(params),
            "matrix": report.matrix,
            "eigenvalues": eigenvalues.real,
            "eigenvalues_imag": eigenvalues.imag,
            "formula": formula,
            "printed": printed,
            "max_error": error,
        },
        failures,
    )

    return EXIT_CHECK if failures else EXIT_OK


def cmd_scan(args, output, /):
    params = ModelParams(args.gamma, args.lam, args.dim)
    grid = list(itertools.product(args.alpha1, args.a))
    states = {
        (alpha1, a): IsotropicState(0.0, alpha1, a, args.C, args.phi)
        for alpha1, a in grid
    }

    terminations = blowup_scan(
        params,
        states,
        args.t_final,
        _options(args),
        jobs=args.jobs,
    )

    rows = []

    for (alpha1, a), termination in terminations.items():
        record = _termination_record(termination)
        rows.append([
            alpha1,
            a,
            record["name"],
            record.get("t", record.get("t_last")),
            record.get("t_estimate"),
        ])

    output.table(
        "scan",
        ["alpha1", "a", "termination", "t", "t_estimate"],
        rows,
    )

    counts = {}

    for termination in terminations.values():
        counts[termination.name] = counts.get(termination.name, 0) + 1

    output.report(
        "scan",
        {
            "params": _params_record(params),
            "states": len(rows),
            "terminations": dict(sorted(counts.items())),
        },
    )

    return EXIT_OK


def _add(parser, dests, /, *flags, **kwargs):
    dests.add(parser.add_argument(*flags, **kwargs).dest)


def _common_parser(dests, /):
    parser = argparse.ArgumentParser(add_help=False)

    _add(parser, dests, "--config", metavar="PATH", help="flat JSON defaults")
    _add(
        parser,
        dests,
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="INFO with -v, DEBUG with -vv",
    )
    _add(parser, dests, "--output-dir", default=OUTPUT_DIR_DEFAULT)
    _add(
        parser,
        dests,
        "--csv",
        action=argparse.BooleanOptionalAction,
        default=True,
    )
    _add(
        parser,
        dests,
        "--json",
        action=argparse.BooleanOptionalAction,
        default=True,
    )
    _add(
        parser,
        dests,
        "--svg",
        action=argparse.BooleanOptionalAction,
        default=False,
    )
    _add(parser, dests, "--jobs", type=int, default=1)
    _add(parser, dests, "--rtol", type=float, default=RTOL_DEFAULT)
    _add(parser, dests, "--atol", type=float, default=ATOL_DEFAULT)

    return parser


def _gas_arguments(parser, dests, /, *, gamma=5 / 3, lam=1.0, dim=2):
    _add(parser, dests, "--gamma", type=float, default=gamma)
    _add(parser, dests, "--lambda", dest="lam", type=float, default=lam)
    _add(parser, dests, "--dim", type=int, default=dim)


def build_parser():
    """The argument parser and, per subcommand, the destinations a config
    file may set."""

    parser = argparse.ArgumentParser(
        prog="inelastica",
        description="Blow-up and concentration in granular gas dynamics.",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    common_dests = set()
    common = _common_parser(common_dests)
    known = {}

    def subparser(name, handler, summary):
        sub = subparsers.add_parser(
            name,
            parents=[common],
            help=summary,
            allow_abbrev=False,
        )
        sub.set_defaults(handler=handler)
        dests = set(common_dests)
        known[name] = (sub, dests)

        return sub, dests

    sub, dests = subparser("haff", cmd_haff, "homogeneous cooling check")
    _add(sub, dests, "--lambda", dest="lam", type=float, default=2.0)
    _add(sub, dests, "--rho0", type=float, default=1.0)
    _add(
        sub,
        dests,
        "--t0",
        dest="T0",
        type=float,
        default=1.0,
        help="initial temperature",
    )
    _add(sub, dests, "--t-final", type=float, default=10.0)
    _add(sub, dests, "--samples", type=int, default=101)

    sub, dests = subparser("uniform", cmd_uniform, "uniform deformation")
    _gas_arguments(sub, dests)
    _add(sub, dests, "--alpha1", type=float, default=-1.0)
    _add(sub, dests, "--a", type=float, default=1.0)
    _add(sub, dests, "--C", type=float, default=1.0)
    _add(sub, dests, "--phi", type=float, default=1.0)
    _add(sub, dests, "--alpha", type=float, nargs="+", metavar="X")
    _add(sub, dests, "--beta", type=float, nargs="+", metavar="X")
    _add(sub, dests, "--A", type=float, nargs="+", metavar="X")
    _add(sub, dests, "--B", type=float, nargs="+", metavar="X")
    _add(
        sub,
        dests,
        "--full",
        action="store_true",
        help="integrate the full matrix system even for isotropic data",
    )
    _add(sub, dests, "--t-final", type=float, default=10.0)
    _add(sub, dests, "--snapshots", type=float, nargs="*", default=[0.0])
    _add(sub, dests, "--grid-extent", type=float, default=1.0)
    _add(sub, dests, "--grid-points", type=int, default=41)

    sub, dests = subparser("riemann", cmd_riemann, "Riemann problem")
    _add(
        sub,
        dests,
        "--data",
        type=float,
        nargs=4,
        metavar=("VL", "TL", "VR", "TR"),
    )
    _add(sub, dests, "--lambda", dest="lam", type=float, default=2.0)
    _add(sub, dests, "--c", type=float, default=1.0)
    _add(sub, dests, "--t-final", type=float, default=5.0)
    _add(sub, dests, "--samples", type=int, default=51)
    _add(sub, dests, "--snapshots", type=float, nargs="*", default=[0.0])
    _add(sub, dests, "--x-extent", type=float, default=5.0)
    _add(sub, dests, "--x-points", type=int, default=101)

    sub, dests = subparser("meerson", cmd_meerson, "cosine pressure family")
    _add(sub, dests, "--mu", type=float, default=1.0)
    _add(sub, dests, "--amp", type=float, default=1.0)
    _add(sub, dests, "--rho0", type=float, default=1.0)
    _add(sub, dests, "--gamma", type=float, default=1.0)
    _add(sub, dests, "--lambda", dest="lam", type=float, default=None)
    _add(
        sub,
        dests,
        "--times",
        type=float,
        nargs="+",
        default=[0.0, 0.25, 0.5, 0.75],
    )
    _add(sub, dests, "--mass-points", type=int, default=41)
    _add(sub, dests, "--x-points", type=int, default=41)

    sub, dests = subparser("verify", cmd_verify, "residual convergence study")
    _add(
        sub,
        dests,
        "--scenario",
        choices=sorted(SCENARIOS),
        default="exact-family-1d",
    )
    _add(
        sub,
        dests,
        "--steps",
        type=float,
        nargs="+",
        default=list(STEPS_DEFAULT),
    )

    sub, dests = subparser("resonance", cmd_resonance, "balance resonances")
    _add(sub, dests, "--n", type=int, default=2)
    _add(sub, dests, "--gamma", type=float, default=1.0)
    _add(sub, dests, "--lambda", dest="lam", type=float, default=1.0)

    sub, dests = subparser("scan", cmd_scan, "blow-up scan of isotropic data")
    _gas_arguments(sub, dests)
    _add(
        sub,
        dests,
        "--alpha1",
        type=float,
        nargs="+",
        default=[-1.0, -0.5, 0.5],
    )
    _add(sub, dests, "--a", type=float, nargs="+", default=[0.1, 1.0])
    _add(sub, dests, "--C", type=float, default=1.0)
    _add(sub, dests, "--phi", type=float, default=1.0)
    _add(sub, dests, "--t-final", type=float, default=10.0)

    return parser, known


def _load_config(path, /):
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        msg = f"cannot read config {path!r}: {exc}"
        raise ParameterError(msg) from None

    if not isinstance(config, dict):
        msg = "config must be a flat JSON object"
        raise ParameterError(msg)

    return {key.replace("-", "_"): value for key, value in config.items()}


def parse_args(argv=None, /):
    """Parse ``argv`` with flags overriding config values overriding
    defaults."""

    parser, known = build_parser()

    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    pre.add_argument("subcommand", nargs="?")
    early, _ = pre.parse_known_args(argv)

    if early.config is not None and early.subcommand in known:
        try:
            config = _load_config(early.config)
        except ParameterError as exc:
            parser.error(str(exc))

        sub, dests = known[early.subcommand]
        unknown = sorted(set(config) - dests - {"config"})

        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")

        sub.set_defaults(**config)

    return parser.parse_args(argv)


def _configure_logging(verbose, /):
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = LOG_LEVEL_DEFAULT

    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv=None, /):
    args = parse_args(argv)

    _configure_logging(args.verbose)

    output = Output(
        args.output_dir,
        csv=args.csv,
        json=args.json,
        svg=args.svg,
    )

    try:
        code = args.handler(args, output)
    except ParameterError as exc:
        print(f"inelastica: error: {exc}", file=sys.stderr)

        return EXIT_USAGE
    except InelasticaError as exc:
        print(f"inelastica: numeric failure: {exc}", file=sys.stderr)

        return EXIT_NUMERIC

    LOGGER.info("%s finished with exit code %d", args.subcommand, code)

    return code
