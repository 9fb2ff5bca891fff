#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

import math

from logging import getLogger

import numpy as np

from ._uniform import reconstruct_fields
from .lowlevel import DomainError, ParameterError

LOGGER = getLogger(__name__)

# below this, differences of residual norms are rounding noise
ROUNDING_FLOOR = 1e-13

# points closer than this many steps to a front are not checked
FRONT_MARGIN = 3

EULER_GRANULAR = "EulerGranular"
CHAPLYGIN_CONSTRAINED = "ChaplyginConstrained"
CHAPLYGIN_CONSERVATIVE = "ChaplyginConservative"
LAGRANGIAN = "Lagrangian"


class FieldSet:
    """Evaluators ``rho(t, x)``, ``v(t, x)`` and ``T(t, x)``.

    ``x`` is a 1D array of ``dim`` coordinates. ``t_range`` and ``box``
    (one ``(low, high)`` pair per coordinate) declare the open domain; every
    stencil point must lie inside it.
    """

    __slots__ = (
        "__T",
        "__box",
        "__dim",
        "__rho",
        "__t_range",
        "__v",
    )

    @staticmethod
    def __new__(cls, /, rho, v, T, dim=1, *, t_range=None, box=None):
        self = super(FieldSet, cls).__new__(cls)

        if box is not None and len(box) != dim:
            msg = f"box must have {dim} (low, high) pairs"
            raise ParameterError(msg)

        self.__rho = rho
        self.__v = v
        self.__T = T
        self.__dim = int(dim)
        self.__t_range = None if t_range is None else tuple(t_range)
        self.__box = None if box is None else tuple(map(tuple, box))

        return self

    def __getnewargs_ex__(self, /):
        return (
            (self.__rho, self.__v, self.__T, self.__dim),
            {"t_range": self.__t_range, "box": self.__box},
        )

    def __repr__(self, /):
        return (
            f"<FieldSet dim={self.__dim} t_range={self.__t_range!r}"
            f" box={self.__box!r}>"
        )

    def check(self, /, t, x):
        if self.__t_range is not None:
            low, high = self.__t_range

            if not low < t < high:
                msg = f"t={t!r} leaves the domain {self.__t_range!r}"
                raise DomainError(msg)

        if self.__box is not None:
            for value, (low, high) in zip(x, self.__box):
                if not low < value < high:
                    msg = f"x={x!r} leaves the domain {self.__box!r}"
                    raise DomainError(msg)

    def rho(self, /, t, x):
        self.check(t, x)

        return float(self.__rho(t, x))

    def v(self, /, t, x):
        self.check(t, x)

        return np.atleast_1d(np.asarray(self.__v(t, x), dtype=float))

    def T(self, /, t, x):
        self.check(t, x)

        return float(self.__T(t, x))

    @property
    def dim(self, /):
        return self.__dim

    @property
    def t_range(self, /):
        return self.__t_range

    @property
    def box(self, /):
        return self.__box


class ResidualReport:
    __slots__ = (
        "__floored",
        "__h",
        "__l2_norms",
        "__max_norms",
        "__order",
        "__points",
        "__system",
    )

    @staticmethod
    def __new__(
        cls,
        /,
        system,
        h,
        max_norms,
        l2_norms,
        *,
        points=0,
        order=None,
        floored=False,
    ):
        self = super(ResidualReport, cls).__new__(cls)

        self.__system = system
        self.__h = float(h)
        self.__max_norms = dict(max_norms)
        self.__l2_norms = dict(l2_norms)
        self.__points = int(points)
        self.__order = None if order is None else dict(order)
        self.__floored = bool(floored)

        return self

    def __getnewargs_ex__(self, /):
        return (
            (self.__system, self.__h, self.__max_norms, self.__l2_norms),
            {
                "points": self.__points,
                "order": self.__order,
                "floored": self.__floored,
            },
        )

    def __repr__(self, /):
        return (
            f"<ResidualReport {self.__system} h={self.__h!r}"
            f" max={self.__max_norms!r} order={self.__order!r}>"
        )

    def as_dict(self, /):
        return {
            "system": self.__system,
            "h": self.__h,
            "points": self.__points,
            "max_norms": dict(self.__max_norms),
            "l2_norms": dict(self.__l2_norms),
            "order": None if self.__order is None else dict(self.__order),
            "floored": self.__floored,
        }

    @property
    def system(self, /):
        return self.__system

    @property
    def h(self, /):
        return self.__h

    @property
    def equations(self, /):
        return tuple(self.__max_norms)

    @property
    def max_norms(self, /):
        return dict(self.__max_norms)

    @property
    def l2_norms(self, /):
        return dict(self.__l2_norms)

    @property
    def points(self, /):
        return self.__points

    @property
    def order(self, /):
        return None if self.__order is None else dict(self.__order)

    @property
    def floored(self, /):
        return self.__floored


def _grid_points(grid, dim, /):
    times, points = grid
    times = np.atleast_1d(np.asarray(times, dtype=float))
    points = np.asarray(points, dtype=float)

    if dim == 1 and points.ndim < 2:
        points = points.reshape(-1, 1)

    if points.ndim != 2 or points.shape[1] != dim:
        msg = f"grid points must have {dim} coordinates"
        raise ParameterError(msg)

    return [(float(t), x) for t in times for x in points]


def _summarize(system, h, residuals, /):
    max_norms = {}
    l2_norms = {}

    for name, values in residuals.items():
        values = np.asarray(values, dtype=float)

        if values.size:
            max_norms[name] = float(np.max(np.abs(values)))
            l2_norms[name] = float(np.sqrt(np.mean(np.square(values))))
        else:
            max_norms[name] = math.nan
            l2_norms[name] = math.nan

    points = len(next(iter(residuals.values()), []))

    LOGGER.debug("%s residuals at h=%r: %r", system, h, max_norms)

    return ResidualReport(system, h, max_norms, l2_norms, points=points)


def _d_dt(f, t, h, /):
    return (f(t + h) - f(t - h)) / (2 * h)


def _d_dx(f, x, i, h, /):
    step = np.zeros_like(x)
    step[i] = h

    return (f(x + step) - f(x - step)) / (2 * h)


def _euler_point(fields, gamma, lam, t, x, h, /):
    n = fields.dim
    eye = np.eye(n)

    def rho_v(s, y):
        return fields.rho(s, y) * fields.v(s, y)

    def momentum_flux(y, j):
        # rho v v_j + rho T e_j
        rho = fields.rho(t, y)

        return rho * fields.v(t, y) * fields.v(t, y)[j] + (
            rho * fields.T(t, y) * eye[j]
        )

    rho = fields.rho(t, x)
    v = fields.v(t, x)
    T = fields.T(t, x)

    d_rho = _d_dt(lambda s: fields.rho(s, x), t, h)
    d_rho_v = _d_dt(lambda s: rho_v(s, x), t, h)
    d_T = _d_dt(lambda s: fields.T(s, x), t, h)

    div_mass = 0.0
    div_v = 0.0
    flux = np.zeros(n)
    grad_T = np.zeros(n)

    for j in range(n):
        div_mass += _d_dx(lambda y, j=j: rho_v(t, y)[j], x, j, h)
        div_v += _d_dx(lambda y, j=j: fields.v(t, y)[j], x, j, h)
        grad_T[j] = _d_dx(lambda y: fields.T(t, y), x, j, h)
        flux += _d_dx(lambda y, j=j: momentum_flux(y, j), x, j, h)

    return (
        d_rho + div_mass,
        float(np.max(np.abs(d_rho_v + flux))),
        d_T + v @ grad_T + (gamma - 1) * T * div_v + lam * rho * T**1.5,
    )


def residual_euler(fields, params, grid, h=1e-3, /):
    """Residuals of the granular gas equations by centered differences.

    Mass and momentum are checked in conservation form, temperature in the
    advective form with the inelastic loss ``lam rho T**(3/2)``.
    """

    residuals = {"mass": [], "momentum": [], "energy": []}

    for t, x in _grid_points(grid, fields.dim):
        values = _euler_point(fields, params.gamma, params.lam, t, x, h)

        for values_list, value in zip(residuals.values(), values):
            values_list.append(value)

    return _summarize(EULER_GRANULAR, h, residuals)


def _masked(points, fronts, h, /):
    if fronts is None:
        return points

    margin = FRONT_MARGIN * h
    kept = []

    for t, x in points:
        positions = [
            position
            for s in (t - h, t, t + h)
            for position in fronts(s)
        ]

        if all(abs(x[0] - position) > margin for position in positions):
            kept.append((t, x))

    LOGGER.debug("front mask kept %d of %d points", len(kept), len(points))

    return kept


def _chaplygin_point(fields, lam, phi, conservative, t, x, h, /):
    def w(s, y):
        return math.sqrt(fields.T(s, y))

    def v(s, y):
        return fields.v(s, y)[0]

    def rho(s, y):
        return phi(s) / w(s, y)

    if conservative:

        def momentum_flux(y):
            return rho(t, y) * v(t, y) ** 2 - phi(t) ** 2 / rho(t, y)

        return (
            _d_dt(lambda s: rho(s, x), t, h)
            + _d_dx(lambda y: rho(t, y) * v(t, y), x, 0, h),
            _d_dt(lambda s: rho(s, x) * v(s, x), t, h)
            + _d_dx(momentum_flux, x, 0, h),
        )

    v_x = _d_dx(lambda y: v(t, y), x, 0, h)
    w_x = _d_dx(lambda y: w(t, y), x, 0, h)

    return (
        _d_dt(lambda s: v(s, x), t, h) + v(t, x) * v_x - w(t, x) * w_x,
        _d_dt(lambda s: w(s, x), t, h)
        + v(t, x) * w_x
        - w(t, x) * v_x
        + lam / 2 * phi(t) * w(t, x),
    )


def residual_chaplygin(
    fields,
    params,
    grid,
    h,
    phi,
    /,
    *,
    conservative=False,
    fronts=None,
):
    """Residuals of the one-dimensional constrained system.

    The default checks the pair for ``v`` and ``w = T**(1/2)``; with
    ``conservative=True`` the density is taken as ``phi(t) / w`` and the
    mass and momentum laws with flux ``rho v**2 - phi**2 / rho`` are checked
    instead. ``fronts(t)`` lists discontinuities; grid points within
    ``3 h`` of one are skipped.
    """

    if fields.dim != 1:
        msg = "the constrained system is one-dimensional"
        raise ParameterError(msg)

    if conservative:
        system = CHAPLYGIN_CONSERVATIVE
        residuals = {"mass": [], "momentum": []}
    else:
        system = CHAPLYGIN_CONSTRAINED
        residuals = {"velocity": [], "temperature": []}

    for t, x in _masked(_grid_points(grid, 1), fronts, h):
        values = _chaplygin_point(
            fields,
            params.lam,
            phi,
            conservative,
            t,
            x,
            h,
        )

        for values_list, value in zip(residuals.values(), values):
            values_list.append(value)

    return _summarize(system, h, residuals)


def lagrangian_equations(tau, v, p, gamma, lam, m, t, h, /):
    """Residuals of the one-dimensional system in mass coordinates.

    ``tau``, ``v`` and ``p`` are evaluators of ``(m, t)``; ``rho = 1 /
    tau``.
    """

    v_m = (v(m + h, t) - v(m - h, t)) / (2 * h)
    p_m = (p(m + h, t) - p(m - h, t)) / (2 * h)
    tau_t = (tau(m, t + h) - tau(m, t - h)) / (2 * h)
    v_t = (v(m, t + h) - v(m, t - h)) / (2 * h)
    p_t = (p(m, t + h) - p(m, t - h)) / (2 * h)

    pressure = p(m, t)
    rho = 1 / tau(m, t)

    return (
        tau_t - v_m,
        v_t + p_m,
        p_t + gamma * pressure * rho * v_m + lam * pressure**1.5 * rho**0.5,
    )


def lagrangian_report(tau, v, p, gamma, lam, grid, h, /):
    masses, times = grid
    mass = []
    momentum = []
    energy = []

    for t in np.atleast_1d(times):
        for m in np.atleast_1d(masses):
            first, second, third = lagrangian_equations(
                tau,
                v,
                p,
                gamma,
                lam,
                float(m),
                float(t),
                h,
            )

            mass.append(first)
            momentum.append(second)
            energy.append(third)

    return _summarize(
        LAGRANGIAN,
        h,
        {"mass": mass, "momentum": momentum, "energy": energy},
    )


def convergence_order(reports, /):
    """Observed order of every equation from reports at decreasing steps.

    The order comes from the two finest reports (max norms). Equations whose
    finest residual is below the rounding floor get NaN, and the returned
    report is flagged.
    """

    reports = sorted(reports, key=lambda report: report.h, reverse=True)

    if len(reports) < 2:
        msg = "an order estimate needs at least two step sizes"
        raise ParameterError(msg)

    systems = {report.system for report in reports}

    if len(systems) != 1:
        msg = f"reports belong to different systems: {sorted(systems)!r}"
        raise ParameterError(msg)

    coarse, fine = reports[-2], reports[-1]
    order = {}
    floored = False

    for name in fine.equations:
        r1 = coarse.max_norms[name]
        r2 = fine.max_norms[name]

        if not r2 >= ROUNDING_FLOOR or not r1 >= ROUNDING_FLOOR:
            LOGGER.warning(
                "%s residual of %r at the rounding floor (%r);"
                " order estimate is meaningless",
                fine.system,
                name,
                r2,
            )
            order[name] = math.nan
            floored = True
        else:
            order[name] = math.log(r1 / r2) / math.log(coarse.h / fine.h)

    return ResidualReport(
        fine.system,
        fine.h,
        fine.max_norms,
        fine.l2_norms,
        points=fine.points,
        order=order,
        floored=floored,
    )


def fieldset_from_uniform(trajectory, /, margin=1e-9):
    """Fields reconstructed from an integrated uniform deformation."""

    times = trajectory.times
    dim = trajectory.dim

    def sample(t, x):
        return reconstruct_fields(trajectory.state(t), x)

    def rho(t, x):
        return sample(t, x).rho

    def v(t, x):
        return sample(t, x).v

    def T(t, x):
        return sample(t, x).T

    return FieldSet(
        rho,
        v,
        T,
        dim,
        t_range=(times[0] + margin, times[-1] - margin),
    )


def fieldset_from_two_contact(solution, /, piece=None):
    """Fields of a two-contact solution.

    With ``piece`` set to ``"left"``, ``"middle"`` or ``"right"`` that
    piece is extended to the whole line; otherwise the piecewise solution is
    returned and a front mask is needed.
    """

    data = solution.data

    if piece is None:

        def evaluate(t, x):
            v, T, rho = solution.evaluate(t, np.asarray(x)[:1])

            return float(rho[0]), float(v[0]), float(T[0])

        t_range = (0.0, solution.valid_until)
    elif piece in {"left", "right"}:

        def evaluate(t, x):
            TL, TR = solution.side_temperatures(t)

            if piece == "left":
                v, T = data.vL, TL
            else:
                v, T = data.vR, TR

            return float(data.phi(t)) / math.sqrt(T), v, float(T)

        t_range = (0.0, math.inf)
    elif piece == "middle":

        def evaluate(t, x):
            v, T = solution.middle(t)

            return float(data.phi(t)) / math.sqrt(T), float(v), float(T)

        t_range = (0.0, solution.valid_until)
    else:
        msg = f"unknown piece {piece!r}"
        raise ParameterError(msg)

    return FieldSet(
        lambda t, x: evaluate(t, x)[0],
        lambda t, x: evaluate(t, x)[1],
        lambda t, x: evaluate(t, x)[2],
        1,
        t_range=t_range,
    )
