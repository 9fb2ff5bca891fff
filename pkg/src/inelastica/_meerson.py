#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

import math

from logging import getLogger

import numpy as np

from scipy.integrate import quad, solve_ivp
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq, minimize_scalar

from ._residual import FieldSet, lagrangian_report
from .lowlevel import (
    BlowUpReachedError,
    DomainError,
    ParameterError,
    QuadratureError,
)

LOGGER = getLogger(__name__)

# absolute tolerance of every mass integral
QUAD_EPSABS = 1e-12

# mass samples used to tabulate x(m) before root refinement
MAP_SAMPLES = 401


class MeersonParams:
    """Parameters of the family with the time-independent pressure
    ``p(m) = 2 A cos(mu m)`` in the mass coordinate ``m``.

    ``rho0`` is ``None`` (unit density), a positive constant, or a table
    ``(masses, densities)`` interpolated by a monotone cubic. ``gamma`` and
    ``lam`` only enter the energy equation; ``lam`` defaults to the value
    for which the family is an exact solution, ``mu * gamma * sqrt(2)``.
    """

    __slots__ = (
        "__amplitude",
        "__gamma",
        "__interpolator",
        "__lam",
        "__mu",
        "__rho0",
    )

    @staticmethod
    def __new__(cls, /, amplitude, mu, rho0=None, *, gamma=1.0, lam=None):
        self = super(MeersonParams, cls).__new__(cls)

        if not amplitude > 0:
            msg = f"amplitude must be > 0, got {amplitude!r}"
            raise ParameterError(msg)
        if not mu > 0:
            msg = f"mu must be > 0, got {mu!r}"
            raise ParameterError(msg)

        if lam is None:
            lam = mu * gamma * math.sqrt(2)

        if not lam > 0:
            msg = f"lam must be > 0, got {lam!r}"
            raise ParameterError(msg)

        half_width = math.pi / (2 * mu)

        if rho0 is None:
            rho0 = 1.0

        if np.ndim(rho0) == 0:
            if not rho0 > 0:
                msg = f"rho0 must be > 0, got {rho0!r}"
                raise ParameterError(msg)

            rho0 = float(rho0)
            interpolator = None
        else:
            masses, densities = (np.asarray(a, dtype=float) for a in rho0)

            if np.any(densities <= 0):
                msg = "rho0 table must be positive"
                raise ParameterError(msg)
            if masses[0] > -half_width or masses[-1] < half_width:
                msg = "rho0 table must cover the whole mass interval"
                raise ParameterError(msg)

            rho0 = (tuple(masses.tolist()), tuple(densities.tolist()))
            interpolator = PchipInterpolator(masses, densities)

        self.__amplitude = float(amplitude)
        self.__mu = float(mu)
        self.__rho0 = rho0
        self.__interpolator = interpolator
        self.__gamma = float(gamma)
        self.__lam = float(lam)

        return self

    @classmethod
    def from_model(cls, /, params, amplitude, rho0=None):
        """The exact member for the gas parameters of ``params``."""

        mu = params.lam / (params.gamma * math.sqrt(2))

        return cls(amplitude, mu, rho0, gamma=params.gamma, lam=params.lam)

    def __getnewargs_ex__(self, /):
        return (
            (self.__amplitude, self.__mu, self.__rho0),
            {"gamma": self.__gamma, "lam": self.__lam},
        )

    def __repr__(self, /):
        return (
            f"MeersonParams({self.__amplitude!r}, {self.__mu!r},"
            f" {self.__rho0!r}, gamma={self.__gamma!r}, lam={self.__lam!r})"
        )

    def rho0(self, /, m):
        m = np.asarray(m, dtype=float)

        if self.__interpolator is None:
            value = np.full_like(m, self.__rho0)
        else:
            value = self.__interpolator(m)

        return float(value) if value.ndim == 0 else value

    def check_mass(self, /, m):
        if np.any(np.abs(np.asarray(m)) >= self.half_width):
            msg = (
                f"mass coordinate outside (-{self.half_width!r},"
                f" {self.half_width!r})"
            )
            raise DomainError(msg)

    @property
    def amplitude(self, /):
        return self.__amplitude

    @property
    def mu(self, /):
        return self.__mu

    @property
    def gamma(self, /):
        return self.__gamma

    @property
    def lam(self, /):
        return self.__lam

    @property
    def half_width(self, /):
        return math.pi / (2 * self.__mu)

    @property
    def mass_domain(self, /):
        return (-self.half_width, self.half_width)

    @property
    def consistent(self, /):
        """Whether ``mu = lam / (gamma sqrt(2))``."""

        expected = self.__lam / (self.__gamma * math.sqrt(2))

        return math.isclose(self.__mu, expected, rel_tol=1e-12)


def _rate(mp, m, /):
    # mu * sqrt(A rho0(m) cos(mu m))
    cos = np.maximum(np.cos(mp.mu * np.asarray(m, dtype=float)), 0)

    return mp.mu * np.sqrt(mp.amplitude * mp.rho0(m) * cos)


def _tau(mp, m, t, /):
    # scalar specific volume without domain checks, for quadratures
    cos = max(math.cos(mp.mu * m), 0.0)
    q = mp.mu * math.sqrt(mp.amplitude * mp.rho0(m) * cos)

    return (1 - q * t) ** 2 / mp.rho0(m)


def pressure(mp, m, /):
    return 2 * mp.amplitude * np.cos(mp.mu * np.asarray(m, dtype=float))


def blowup_time(mp, m, /):
    """``t_*(m) = 1 / (mu sqrt(A rho0(m) cos(mu m)))``."""

    mp.check_mass(m)

    value = 1 / _rate(mp, m)

    return float(value) if np.ndim(value) == 0 else value


def global_blowup_time(mp, /, samples=2001):
    """``(t_*, m_*)``: the earliest blow-up and where it happens."""

    low, high = mp.mass_domain
    masses = np.linspace(low, high, samples + 2)[1:-1]
    rates = _rate(mp, masses)
    best = int(np.argmax(rates))

    a = masses[max(best - 1, 0)]
    b = masses[min(best + 1, len(masses) - 1)]

    if a < b:
        result = minimize_scalar(
            lambda m: -float(_rate(mp, m)),
            bounds=(a, b),
            method="bounded",
            options={"xatol": 1e-12},
        )
        m_star = float(result.x)

        if _rate(mp, m_star) < rates[best]:
            m_star = float(masses[best])
    else:
        m_star = float(masses[best])

    t_star = 1 / float(_rate(mp, m_star))

    LOGGER.debug("global blow-up at m=%r, t=%r", m_star, t_star)

    return t_star, m_star


def _check_before_blowup(mp, m, t, /):
    if np.any(_rate(mp, m) * t >= 1):
        msg = f"t={t!r} is at or beyond the local blow-up time"
        raise BlowUpReachedError(msg)


def specific_volume(mp, m, t, /):
    """``tau = 1 / rho = (1 - q t)**2 / rho0`` with ``q = mu sqrt(A rho0
    cos(mu m))``."""

    mp.check_mass(m)
    _check_before_blowup(mp, m, t)

    value = (1 - _rate(mp, m) * t) ** 2 / mp.rho0(m)

    return float(value) if np.ndim(value) == 0 else value


def _specific_volume_rate(mp, m, t, /):
    q = _rate(mp, m)

    return -2 * q * (1 - q * t) / mp.rho0(m)


def density_lagrangian(mp, m, t, /):
    value = 1 / np.asarray(specific_volume(mp, m, t))

    return float(value) if value.ndim == 0 else value


def _quad(func, a, b, /):
    result = quad(func, a, b, epsabs=QUAD_EPSABS, limit=200, full_output=1)

    if len(result) > 3:
        msg = f"quadrature on [{a!r}, {b!r}] failed: {result[3]}"
        raise QuadratureError(msg)

    return result[0]


def velocity_field(mp, m, t, /, method="momentum"):
    """Velocity with the gauge ``v(0, t) = 0``.

    ``"momentum"`` integrates the momentum equation in time from the initial
    profile, ``"mass"`` integrates the mass equation over ``[0, m]`` at time
    ``t``; both agree.
    """

    mp.check_mass(m)
    _check_before_blowup(mp, m, t)

    if method == "momentum":
        initial = _quad(lambda s: _specific_volume_rate(mp, s, 0.0), 0.0, m)

        return initial + 2 * mp.amplitude * mp.mu * math.sin(mp.mu * m) * t

    if method == "mass":
        return _quad(lambda s: _specific_volume_rate(mp, s, t), 0.0, m)

    msg = f"unknown method {method!r}"
    raise ParameterError(msg)


def temperature_lagrangian(mp, m, t, /):
    """``T = p tau``; finite pressure over infinite density gives 0."""

    return pressure(mp, m) * specific_volume(mp, m, t)


class LagrangianField:
    """Evaluators of the family in the mass coordinate."""

    __slots__ = ("__mp",)

    @staticmethod
    def __new__(cls, /, mp):
        self = super(LagrangianField, cls).__new__(cls)

        self.__mp = mp

        return self

    def __getnewargs__(self, /):
        return (self.__mp,)

    def __repr__(self, /):
        return f"LagrangianField({self.__mp!r})"

    def tau(self, /, m, t):
        return specific_volume(self.__mp, m, t)

    def rho(self, /, m, t):
        return density_lagrangian(self.__mp, m, t)

    def v(self, /, m, t):
        return velocity_field(self.__mp, m, t)

    def p(self, /, m, t=0.0):
        return pressure(self.__mp, m)

    def T(self, /, m, t):
        return temperature_lagrangian(self.__mp, m, t)

    @property
    def params(self, /):
        return self.__mp


class EulerLagrangeMap:
    """``x(m) = int_0^m tau dm'`` at a fixed time and its inverse."""

    __slots__ = (
        "__guess",
        "__masses",
        "__mp",
        "__positions",
        "__t",
    )

    @staticmethod
    def __new__(cls, /, mp, t):
        self = super(EulerLagrangeMap, cls).__new__(cls)

        t_star, _ = global_blowup_time(mp)

        if not t < t_star:
            msg = f"t={t!r} is not before the global blow-up {t_star!r}"
            raise BlowUpReachedError(msg)

        low, high = mp.mass_domain
        masses = np.linspace(low, high, MAP_SAMPLES)
        centre = MAP_SAMPLES // 2
        masses[centre] = 0.0

        steps = [
            _quad(lambda m: _tau(mp, m, t), a, b)
            for a, b in zip(masses, masses[1:])
        ]
        positions = np.concatenate([[0.0], np.cumsum(steps)])
        positions -= positions[centre]

        if np.any(np.diff(positions) <= 0):
            msg = "x(m) is not strictly increasing: cannot invert"
            raise DomainError(msg)

        self.__mp = mp
        self.__t = float(t)
        self.__masses = masses
        self.__positions = positions
        self.__guess = PchipInterpolator(positions, masses)

        return self

    def __getnewargs__(self, /):
        return (self.__mp, self.__t)

    def __repr__(self, /):
        return f"<EulerLagrangeMap t={self.__t!r} for {self.__mp!r}>"

    def __tau(self, m, /):
        return _tau(self.__mp, m, self.__t)

    def x_of_m(self, /, m):
        scalar = np.ndim(m) == 0
        masses = np.atleast_1d(np.asarray(m, dtype=float))
        low, high = self.__mp.mass_domain

        if np.any(masses < low) or np.any(masses > high):
            msg = "mass coordinate outside the mass interval"
            raise DomainError(msg)

        values = []

        for value in masses:
            i = int(np.clip(
                np.searchsorted(self.__masses, value) - 1,
                0,
                len(self.__masses) - 2,
            ))
            start = self.__masses[i]
            values.append(
                self.__positions[i] + _quad(self.__tau, start, value)
            )

        return values[0] if scalar else np.array(values)

    def m_of_x(self, /, x):
        scalar = np.ndim(x) == 0
        points = np.atleast_1d(np.asarray(x, dtype=float))
        low, high = self.support

        if np.any(points < low) or np.any(points > high):
            msg = f"x outside the support [{low!r}, {high!r}]"
            raise DomainError(msg)

        m_low, m_high = self.__mp.mass_domain
        spacing = self.__masses[1] - self.__masses[0]
        values = []

        for point in points:
            guess = float(self.__guess(point))
            a = max(m_low, guess - spacing)
            b = min(m_high, guess + spacing)

            while self.x_of_m(a) > point and a > m_low:
                a = max(m_low, a - spacing)

            while self.x_of_m(b) < point and b < m_high:
                b = min(m_high, b + spacing)

            fa = self.x_of_m(a) - point
            fb = self.x_of_m(b) - point

            if fa == 0:
                values.append(a)
            elif fb == 0:
                values.append(b)
            else:
                values.append(brentq(
                    lambda m, point=point: self.x_of_m(m) - point,
                    a,
                    b,
                    xtol=1e-14,
                ))

        return values[0] if scalar else np.array(values)

    @property
    def support(self, /):
        return float(self.__positions[0]), float(self.__positions[-1])

    @property
    def t(self, /):
        return self.__t

    @property
    def params(self, /):
        return self.__mp


def euler_lagrange_maps(mp, t, /):
    return EulerLagrangeMap(mp, t)


def eulerian_density(mp, t, x, /, maps=None):
    if maps is None:
        maps = euler_lagrange_maps(mp, t)

    masses = maps.m_of_x(x)
    value = 1 / np.asarray(
        (1 - _rate(mp, masses) * t) ** 2 / mp.rho0(masses)
    )

    return float(value) if value.ndim == 0 else value


def eulerian_mass(mp, t, /, maps=None):
    """``int rho dx`` over the support, by integrating ``dm/dx = rho``."""

    if maps is None:
        maps = euler_lagrange_maps(mp, t)

    low, high = mp.mass_domain
    x_low, x_high = maps.support

    def fun(x, m):
        mass = float(np.clip(m[0], low, high))
        tau = (1 - float(_rate(mp, mass)) * t) ** 2 / mp.rho0(mass)

        return [1 / tau]

    solution = solve_ivp(
        fun,
        (x_low, x_high),
        [low],
        method="DOP853",
        rtol=1e-12,
        atol=1e-13,
    )

    if not solution.success:
        msg = f"mass integration failed: {solution.message}"
        raise QuadratureError(msg)

    return float(solution.y[0, -1] - low)


def lagrangian_residual(mp, grid, h=1e-3, /):
    """Residuals of the three equations in the mass coordinate.

    ``grid`` is ``(masses, times)``; the energy equation vanishes
    identically only when :attr:`MeersonParams.consistent` holds.
    """

    def tau(m, t):
        return specific_volume(mp, m, t)

    def v(m, t):
        return velocity_field(mp, m, t)

    def p(m, t):
        return float(pressure(mp, m))

    return lagrangian_report(tau, v, p, mp.gamma, mp.lam, grid, h)


def fieldset_from_meerson(mp, times, /):
    """Eulerian fields of the family, for the shared residual oracle.

    Maps are built once per distinct time, so ``times`` lists every time the
    stencils will touch.
    """

    maps = {float(t): euler_lagrange_maps(mp, t) for t in times}

    def masses(t, x):
        try:
            table = maps[float(t)]
        except KeyError:
            table = maps[float(t)] = euler_lagrange_maps(mp, t)

        return float(table.m_of_x(float(x[0])))

    def rho(t, x):
        return density_lagrangian(mp, masses(t, x), t)

    def v(t, x):
        return velocity_field(mp, masses(t, x), t)

    def T(t, x):
        return temperature_lagrangian(mp, masses(t, x), t)

    return FieldSet(rho, v, T, 1)
