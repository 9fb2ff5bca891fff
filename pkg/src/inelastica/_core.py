#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

import math

import numpy as np

from .lowlevel import DomainError, ParameterError, ReachedFinalTime, dopri5

# the gas constant, fixed
R = 1.0


class ModelParams:
    __slots__ = (
        "__dim",
        "__gamma",
        "__lam",
    )

    @staticmethod
    def __new__(cls, /, gamma, lam, dim=1):
        self = super(ModelParams, cls).__new__(cls)

        if not lam > 0:
            msg = f"lam (dissipation constant) must be > 0, got {lam!r}"
            raise ParameterError(msg)
        if int(dim) != dim or dim < 1:
            msg = f"dim must be an integer >= 1, got {dim!r}"
            raise ParameterError(msg)
        if not math.isfinite(gamma):
            msg = f"gamma must be finite, got {gamma!r}"
            raise ParameterError(msg)

        self.__gamma = float(gamma)
        self.__lam = float(lam)
        self.__dim = int(dim)

        return self

    def __getnewargs__(self, /):
        return (self.__gamma, self.__lam, self.__dim)

    def __repr__(self, /):
        return f"ModelParams({self.__gamma!r}, {self.__lam!r}, {self.__dim!r})"

    def __eq__(self, other, /):
        if not isinstance(other, ModelParams):
            return NotImplemented

        return self.__getnewargs__() == other.__getnewargs__()

    def __hash__(self, /):
        return hash(self.__getnewargs__())

    def replace(self, /, *, gamma=None, lam=None, dim=None):
        return ModelParams(
            self.__gamma if gamma is None else gamma,
            self.__lam if lam is None else lam,
            self.__dim if dim is None else dim,
        )

    @property
    def gamma(self, /):
        return self.__gamma

    @property
    def lam(self, /):
        return self.__lam

    @property
    def dim(self, /):
        return self.__dim


class GasSample:
    __slots__ = (
        "__T",
        "__rho",
        "__v",
    )

    @staticmethod
    def __new__(cls, /, rho, v, T):
        self = super(GasSample, cls).__new__(cls)

        if not rho > 0:
            msg = f"rho must be > 0, got {rho!r}"
            raise DomainError(msg)
        if not T >= 0:
            msg = f"T must be >= 0, got {T!r}"
            raise DomainError(msg)

        v = np.array(v, dtype=float).reshape(-1)
        v.flags.writeable = False

        self.__rho = float(rho)
        self.__v = v
        self.__T = float(T)

        return self

    def __getnewargs__(self, /):
        return (self.__rho, self.__v, self.__T)

    def __repr__(self, /):
        return (
            f"GasSample({self.__rho!r}, {self.__v.tolist()!r}, {self.__T!r})"
        )

    @property
    def rho(self, /):
        return self.__rho

    @property
    def v(self, /):
        return self.__v

    @property
    def T(self, /):
        return self.__T

    @property
    def p(self, /):
        return R * self.__rho * self.__T

    def z(self, /, phi):
        return constraint_z(phi, self)


class HaffParams:
    __slots__ = (
        "__T0",
        "__rho0",
    )

    @staticmethod
    def __new__(cls, /, rho0, T0):
        self = super(HaffParams, cls).__new__(cls)

        if not rho0 > 0:
            msg = f"rho0 must be > 0, got {rho0!r}"
            raise ParameterError(msg)
        if not T0 > 0:
            msg = f"T0 must be > 0, got {T0!r}"
            raise ParameterError(msg)

        self.__rho0 = float(rho0)
        self.__T0 = float(T0)

        return self

    def __getnewargs__(self, /):
        return (self.__rho0, self.__T0)

    def __repr__(self, /):
        return f"HaffParams({self.__rho0!r}, {self.__T0!r})"

    @property
    def rho0(self, /):
        return self.__rho0

    @property
    def T0(self, /):
        return self.__T0


def haff_temperature(params, haff, t, /):
    """Temperature of the homogeneous cooling state (Haff's law)."""

    t = np.asarray(t, dtype=float)

    if np.any(t < 0):
        msg = "t must be >= 0"
        raise DomainError(msg)

    value = (params.lam * haff.rho0 * t / 2 + haff.T0**-0.5) ** -2

    return float(value) if value.ndim == 0 else value


def phi_closed_form(params, phi0, t, /):
    """Solution of ``phi' = -(lam/2) phi**2`` with ``phi(0) = phi0``."""

    if not phi0 > 0:
        msg = f"phi0 must be > 0, got {phi0!r}"
        raise ParameterError(msg)

    t = np.asarray(t, dtype=float)

    if np.any(t < 0):
        msg = "t must be >= 0"
        raise DomainError(msg)

    value = 1 / (params.lam * t / 2 + 1 / phi0)

    return float(value) if value.ndim == 0 else value


def phi_from_data(rho0, T0, /):
    """The constant ``phi(0) = rho0 * T0**(1/2)`` that puts data on z = 0."""

    if not rho0 > 0 or not T0 > 0:
        msg = "rho0 and T0 must be > 0"
        raise ParameterError(msg)

    return rho0 * math.sqrt(T0)


def constraint_z(phi, sample, /):
    if not sample.T > 0:
        msg = "constraint z needs T > 0 (T**-1/2 is undefined at T = 0)"
        raise DomainError(msg)

    return sample.rho - phi / math.sqrt(sample.T)


def integrate_haff(params, haff, times, /, options=None):
    """``T' = -lam rho0 T**(3/2)`` integrated numerically, sampled at
    ``times``.

    This is the cooling law without its closed form; comparing both checks
    the integrator and the formula against each other.
    """

    times = np.asarray(times, dtype=float)

    if times.ndim != 1 or np.any(times < 0) or np.any(np.diff(times) < 0):
        msg = "times must be a nondecreasing 1D array of values >= 0"
        raise ParameterError(msg)

    if not len(times):
        return np.empty(0)

    rate = params.lam * haff.rho0

    def fun(t, y):
        return -rate * np.abs(y) ** 1.5

    values = []
    y = [haff.T0]
    t_start = 0.0

    # every sample is the endpoint of its own run, not an interpolant
    for t_end in times:
        if t_end > t_start:
            dense, termination = dopri5(fun, t_start, y, t_end, options)

            if not isinstance(termination, ReachedFinalTime):
                msg = f"cooling integration stopped early: {termination!r}"
                raise DomainError(msg)

            y = dense.states[-1]
            t_start = float(t_end)

        values.append(float(y[0]))

    return np.array(values)
