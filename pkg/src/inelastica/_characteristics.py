#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

from logging import getLogger

import numpy as np

from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .lowlevel import (
    CharacteristicCrossingError,
    DomainError,
    ParameterError,
    QuadratureError,
)

LOGGER = getLogger(__name__)


def _spline(x, y, /):
    if len(x) < 2:
        return lambda points: np.full_like(points, y[0])

    return CubicSpline(x, y, extrapolate=True)


class CharacteristicsResult:
    """Markers of both families at the final time."""

    __slots__ = (
        "__r_positions",
        "__r_values",
        "__s_positions",
        "__s_values",
        "__t",
    )

    @staticmethod
    def __new__(cls, /, t, s_positions, s_values, r_positions, r_values):
        self = super(CharacteristicsResult, cls).__new__(cls)

        self.__t = float(t)
        self.__s_positions = np.asarray(s_positions, dtype=float)
        self.__s_values = np.asarray(s_values, dtype=float)
        self.__r_positions = np.asarray(r_positions, dtype=float)
        self.__r_values = np.asarray(r_values, dtype=float)

        return self

    def __getnewargs__(self, /):
        return (
            self.__t,
            self.__s_positions,
            self.__s_values,
            self.__r_positions,
            self.__r_values,
        )

    def __repr__(self, /):
        return (
            f"<CharacteristicsResult t={self.__t!r}"
            f" markers={len(self.__s_positions)}>"
        )

    def invariants(self, /, x):
        """``(s, r)`` interpolated at the points ``x``."""

        x = np.asarray(x, dtype=float)
        low = max(self.__s_positions[0], self.__r_positions[0])
        high = min(self.__s_positions[-1], self.__r_positions[-1])

        if np.any(x < low) or np.any(x > high):
            msg = f"x must lie inside the tracked interval [{low}, {high}]"
            raise DomainError(msg)

        s = _spline(self.__s_positions, self.__s_values)(x)
        r = _spline(self.__r_positions, self.__r_values)(x)

        return s, r

    def fields(self, /, x):
        """``(v, T)`` interpolated at the points ``x``."""

        s, r = self.invariants(x)

        return (r + s) / 2, ((r - s) / 2) ** 2

    @property
    def t(self, /):
        return self.__t

    @property
    def s_positions(self, /):
        return self.__s_positions

    @property
    def s_values(self, /):
        return self.__s_values

    @property
    def r_positions(self, /):
        return self.__r_positions

    @property
    def r_values(self, /):
        return self.__r_values


def _crossed(s_positions, r_positions, /):
    return bool(
        np.any(np.diff(s_positions) <= 0) or np.any(np.diff(r_positions) <= 0)
    )


def characteristics_oracle(
    data,
    x,
    s0,
    r0,
    t_final,
    /,
    *,
    rtol=1e-11,
    atol=1e-13,
    checkpoints=50,
):
    """Evolve smooth invariants by the method of characteristics.

    ``s`` is carried along ``dx/dt = r`` and ``r`` along ``dx/dt = s``, both
    relaxing at rate ``lam phi(t) / 4``. Each family is a set of markers
    started at the sample points ``x``; the other family is read off a
    cubic spline through its markers. Crossing markers abort the run.
    """

    x = np.asarray(x, dtype=float)
    s0 = np.asarray(s0, dtype=float)
    r0 = np.asarray(r0, dtype=float)

    if x.ndim != 1 or s0.shape != x.shape or r0.shape != x.shape:
        msg = "x, s0 and r0 must be 1D arrays of equal length"
        raise ParameterError(msg)
    if np.any(np.diff(x) <= 0):
        msg = "x must be strictly increasing"
        raise ParameterError(msg)
    if np.any(r0 < s0):
        msg = "r must be >= s (negative temperature)"
        raise DomainError(msg)
    if not t_final > 0:
        msg = f"t_final must be > 0, got {t_final!r}"
        raise ParameterError(msg)

    n = len(x)
    lam = data.lam

    def fun(t, y):
        xs, s, xr, r = y[:n], y[n : 2 * n], y[2 * n : 3 * n], y[3 * n :]
        rate = lam * float(data.phi(t)) / 4

        if _crossed(xs, xr):
            msg = f"characteristics crossed before t={t!r}"
            raise CharacteristicCrossingError(msg)

        r_at_s = _spline(xr, r)(xs)
        s_at_r = _spline(xs, s)(xr)

        return np.concatenate([
            r_at_s,
            rate * (r_at_s - s),
            s_at_r,
            -rate * (r - s_at_r),
        ])

    solution = solve_ivp(
        fun,
        (0.0, t_final),
        np.concatenate([x, s0, x, r0]),
        method="DOP853",
        t_eval=np.linspace(0.0, t_final, checkpoints + 1),
        rtol=rtol,
        atol=atol,
    )

    if not solution.success:
        msg = f"characteristic integration failed: {solution.message}"
        raise QuadratureError(msg)

    for t, y in zip(solution.t, solution.y.T):
        if _crossed(y[:n], y[2 * n : 3 * n]):
            msg = f"characteristics crossed before t={t!r}"
            raise CharacteristicCrossingError(msg)

    y = solution.y[:, -1]

    LOGGER.debug(
        "characteristics tracked to t=%r with %d evaluations",
        t_final,
        solution.nfev,
    )

    return CharacteristicsResult(
        solution.t[-1],
        y[:n],
        y[n : 2 * n],
        y[2 * n : 3 * n],
        y[3 * n :],
    )


def contact_paths(data, times, /, *, rtol=1e-12, atol=1e-14):
    """Integrate both outer states and the contacts riding on them.

    ``x_-`` moves with ``s`` of the left state and ``x_+`` with ``r`` of the
    right state. Returns ``(x_minus, x_plus)`` sampled at ``times``.
    """

    times = np.asarray(times, dtype=float)
    lam = data.lam

    def fun(t, y):
        s_left, r_left, s_right, r_right, _, _ = y
        rate = lam * float(data.phi(t)) / 4

        return [
            rate * (r_left - s_left),
            -rate * (r_left - s_left),
            rate * (r_right - s_right),
            -rate * (r_right - s_right),
            s_left,
            r_right,
        ]

    wL, wR = data.wL, data.wR
    y0 = [data.vL - wL, data.vL + wL, data.vR - wR, data.vR + wR, 0.0, 0.0]

    solution = solve_ivp(
        fun,
        (0.0, float(times[-1])),
        y0,
        method="DOP853",
        t_eval=times,
        rtol=rtol,
        atol=atol,
    )

    if not solution.success:
        msg = f"contact path integration failed: {solution.message}"
        raise QuadratureError(msg)

    return solution.y[4], solution.y[5]
