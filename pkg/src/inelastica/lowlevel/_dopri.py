#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

import math

from logging import getLogger

import numpy as np

from ._config import ATOL_DEFAULT, RTOL_DEFAULT
from ._fitting import estimate_blowup_time

LOGGER = getLogger(__name__)

# Dormand-Prince 5(4), FSAL
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = np.array([
    35 / 384,
    0.0,
    500 / 1113,
    125 / 192,
    -2187 / 6784,
    11 / 84,
    0.0,
])
_E = np.array([
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
])

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


class IntegrationOptions:
    __slots__ = (
        "__atol",
        "__blowup_threshold",
        "__first_step",
        "__fit_steps",
        "__max_step",
        "__max_steps",
        "__min_step",
        "__rtol",
    )

    @staticmethod
    def __new__(
        cls,
        /,
        rtol=None,
        atol=None,
        *,
        min_step=1e-15,
        max_step=math.inf,
        first_step=None,
        blowup_threshold=1e12,
        max_steps=1_000_000,
        fit_steps=10,
    ):
        self = super(IntegrationOptions, cls).__new__(cls)

        if rtol is None:
            rtol = RTOL_DEFAULT
        if atol is None:
            atol = ATOL_DEFAULT

        if not rtol > 0 or not atol > 0:
            msg = "rtol and atol must be > 0"
            raise ValueError(msg)
        if not 0 < min_step < max_step:
            msg = "min_step must be > 0 and < max_step"
            raise ValueError(msg)
        if first_step is not None and not first_step > 0:
            msg = "first_step must be > 0"
            raise ValueError(msg)
        if not blowup_threshold > 0:
            msg = "blowup_threshold must be > 0"
            raise ValueError(msg)
        if max_steps < 1 or fit_steps < 2:
            msg = "max_steps must be >= 1 and fit_steps must be >= 2"
            raise ValueError(msg)

        self.__rtol = float(rtol)
        self.__atol = float(atol)
        self.__min_step = float(min_step)
        self.__max_step = float(max_step)
        self.__first_step = first_step
        self.__blowup_threshold = float(blowup_threshold)
        self.__max_steps = int(max_steps)
        self.__fit_steps = int(fit_steps)

        return self

    def __getnewargs_ex__(self, /):
        return ((self.__rtol, self.__atol), self.__kwargs())

    def __kwargs(self, /):
        return {
            "min_step": self.__min_step,
            "max_step": self.__max_step,
            "first_step": self.__first_step,
            "blowup_threshold": self.__blowup_threshold,
            "max_steps": self.__max_steps,
            "fit_steps": self.__fit_steps,
        }

    def __repr__(self, /):
        kwargs_repr = ", ".join(
            f"{key}={value!r}" for key, value in self.__kwargs().items()
        )

        return (
            f"IntegrationOptions({self.__rtol!r}, {self.__atol!r},"
            f" {kwargs_repr})"
        )

    def replace(self, /, **changes):
        kwargs = {
            "rtol": self.__rtol,
            "atol": self.__atol,
            **self.__kwargs(),
        }
        kwargs.update(changes)

        return IntegrationOptions(**kwargs)

    @property
    def rtol(self, /):
        return self.__rtol

    @property
    def atol(self, /):
        return self.__atol

    @property
    def min_step(self, /):
        return self.__min_step

    @property
    def max_step(self, /):
        return self.__max_step

    @property
    def first_step(self, /):
        return self.__first_step

    @property
    def blowup_threshold(self, /):
        return self.__blowup_threshold

    @property
    def max_steps(self, /):
        return self.__max_steps

    @property
    def fit_steps(self, /):
        return self.__fit_steps


class _Termination:
    __slots__ = ()

    def __eq__(self, other, /):
        if type(self) is not type(other):
            return NotImplemented

        return self.__getnewargs__() == other.__getnewargs__()

    def __hash__(self, /):
        return hash((type(self), self.__getnewargs__()))

    def __repr__(self, /):
        args_repr = ", ".join(map(repr, self.__getnewargs__()))

        return f"{type(self).__name__}({args_repr})"

    def __getnewargs__(self, /):
        raise NotImplementedError

    @property
    def name(self, /):
        return type(self).__name__


class ReachedFinalTime(_Termination):
    __slots__ = ("__t",)

    @staticmethod
    def __new__(cls, /, t):
        self = super(ReachedFinalTime, cls).__new__(cls)

        self.__t = float(t)

        return self

    def __getnewargs__(self, /):
        return (self.__t,)

    @property
    def t(self, /):
        return self.__t


class BlowUpDetected(_Termination):
    __slots__ = (
        "__remaining",
        "__t_last",
    )

    @staticmethod
    def __new__(cls, /, t_last, remaining=0.0):
        self = super(BlowUpDetected, cls).__new__(cls)

        if remaining < 0:
            msg = "remaining must be >= 0"
            raise ValueError(msg)

        self.__t_last = float(t_last)
        self.__remaining = float(remaining)

        return self

    def __getnewargs__(self, /):
        return (self.__t_last, self.__remaining)

    @property
    def t_last(self, /):
        return self.__t_last

    @property
    def remaining(self, /):
        # estimated t_estimate - t_last, kept apart to avoid cancellation
        return self.__remaining

    @property
    def t_estimate(self, /):
        return self.__t_last + self.__remaining


class PhiNonPositive(_Termination):
    __slots__ = ("__t",)

    @staticmethod
    def __new__(cls, /, t):
        self = super(PhiNonPositive, cls).__new__(cls)

        self.__t = float(t)

        return self

    def __getnewargs__(self, /):
        return (self.__t,)

    @property
    def t(self, /):
        return self.__t


class StepUnderflow(_Termination):
    __slots__ = ("__t",)

    @staticmethod
    def __new__(cls, /, t):
        self = super(StepUnderflow, cls).__new__(cls)

        self.__t = float(t)

        return self

    def __getnewargs__(self, /):
        return (self.__t,)

    @property
    def t(self, /):
        return self.__t


class DenseOutput:
    """Piecewise cubic Hermite interpolant through accepted steps."""

    __slots__ = (
        "__derivatives",
        "__states",
        "__times",
    )

    @staticmethod
    def __new__(cls, /, times, states, derivatives):
        self = super(DenseOutput, cls).__new__(cls)

        times = np.array(times, dtype=float)
        states = np.array(states, dtype=float)
        derivatives = np.array(derivatives, dtype=float)

        if times.ndim != 1 or len(times) < 1:
            msg = "times must be a non-empty 1D array"
            raise ValueError(msg)
        if np.any(np.diff(times) <= 0):
            msg = "times must be strictly increasing"
            raise ValueError(msg)
        if states.shape != derivatives.shape or len(states) != len(times):
            msg = "states and derivatives must match times"
            raise ValueError(msg)

        for array in (times, states, derivatives):
            array.flags.writeable = False

        self.__times = times
        self.__states = states
        self.__derivatives = derivatives

        return self

    def __getnewargs__(self, /):
        return (self.__times, self.__states, self.__derivatives)

    def __repr__(self, /):
        return (
            f"DenseOutput(<{len(self.__times)} samples on"
            f" [{self.__times[0]!r}, {self.__times[-1]!r}]>)"
        )

    def __len__(self, /):
        return len(self.__times)

    def __call__(self, /, t):
        times = self.__times
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))

        if np.any(t < times[0]) or np.any(t > times[-1]):
            msg = (
                f"requested time outside [{times[0]!r}, {times[-1]!r}]"
            )
            raise ValueError(msg)

        if len(times) == 1:
            values = np.repeat(self.__states[:1], len(t), axis=0)
        else:
            i = np.clip(np.searchsorted(times, t, side="right") - 1,
                        0, len(times) - 2)
            h = (times[i + 1] - times[i])[:, None]
            u = ((t - times[i])[:, None]) / h

            y0, y1 = self.__states[i], self.__states[i + 1]
            f0, f1 = self.__derivatives[i], self.__derivatives[i + 1]

            h00 = (1 + 2 * u) * (1 - u) ** 2
            h10 = u * (1 - u) ** 2
            h01 = u**2 * (3 - 2 * u)
            h11 = u**2 * (u - 1)

            values = h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1

        return values[0] if scalar else values

    @property
    def times(self, /):
        return self.__times

    @property
    def states(self, /):
        return self.__states

    @property
    def derivatives(self, /):
        return self.__derivatives


def _rms(x, /):
    return math.sqrt(float(np.mean(np.square(x))))


def _initial_step(fun, t0, y0, f0, order, rtol, atol, /):
    scale = atol + rtol * np.abs(y0)
    d0 = _rms(y0 / scale)
    d1 = _rms(f0 / scale)

    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1

    f1 = fun(t0 + h0, y0 + h0 * f0)
    d2 = _rms((f1 - f0) / scale) / h0

    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / (order + 1))

    return min(100 * h0, h1)


def _stages(fun, t, y, f, h, /):
    k = [f]

    for i in range(1, 7):
        dy = sum(a * kj for a, kj in zip(_A[i], k) if a)
        k.append(fun(t + _C[i] * h, y + h * dy))

    return k


def dopri5(
    fun,
    t0,
    y0,
    t_final,
    /,
    options=None,
    *,
    guard=None,
    project=None,
):
    """Integrate ``y' = fun(t, y)`` from ``t0`` to ``t_final``.

    Returns ``(dense, termination)``. Integration stops early instead of
    raising: ``guard(t, y)`` may return a termination record, the step size
    collapsing while ``max|y|`` exceeds ``options.blowup_threshold`` yields
    :class:`BlowUpDetected`, and a collapse below ``options.min_step`` with
    bounded ``y`` yields :class:`StepUnderflow`. ``project(y)`` is applied to
    every accepted state (e.g. to restore a symmetry lost to rounding).
    """

    if options is None:
        options = IntegrationOptions()

    t = float(t0)
    t_final = float(t_final)
    y = np.array(y0, dtype=float)

    if not t_final >= t:
        msg = "t_final must be >= t0"
        raise ValueError(msg)

    if project is not None:
        y = project(y)

    f = fun(t, y)

    times = [t]
    states = [y]
    derivatives = [f]
    norms = [float(np.max(np.abs(y)))]

    termination = guard(t, y) if guard is not None else None

    if termination is None and t_final == t:
        termination = ReachedFinalTime(t)

    if termination is not None:
        return DenseOutput(times, states, derivatives), termination

    rtol = options.rtol
    atol = options.atol
    min_step = options.min_step
    threshold = options.blowup_threshold

    if options.first_step is not None:
        h = options.first_step
    else:
        h = _initial_step(fun, t, y, f, 4, rtol, atol)

    def collapsed():
        if norms[-1] > threshold:
            remaining = estimate_blowup_time(
                np.asarray(times),
                np.asarray(norms),
                fit_steps=options.fit_steps,
                threshold=threshold,
            )

            LOGGER.info("blow-up detected near t=%r", t + remaining)

            return BlowUpDetected(t, remaining)

        LOGGER.info("step size underflow at t=%r (h=%r)", t, h)

        return StepUnderflow(t)

    rejected = 0

    while True:
        if len(times) > options.max_steps:
            LOGGER.warning("max_steps exceeded at t=%r", t)
            termination = StepUnderflow(t)
            break

        h = min(h, options.max_step)

        if t + h <= t:
            termination = collapsed()
            break

        if t + h >= t_final or t_final - (t + h) < min_step:
            h = t_final - t

        k = _stages(fun, t, y, f, h)
        y_new = y + h * sum(b * ki for b, ki in zip(_B, k) if b)
        f_new = fun(t + h, y_new)
        k.append(f_new)

        error = h * sum(e * ki for e, ki in zip(_E, k) if e)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))

        if np.all(np.isfinite(y_new)) and np.all(np.isfinite(f_new)):
            error_norm = _rms(error / scale)
        else:
            error_norm = math.inf

        if error_norm > 1:
            rejected += 1

            if math.isfinite(error_norm):
                h *= max(_MIN_FACTOR, _SAFETY * error_norm ** -0.2)
            else:
                h *= _MIN_FACTOR

            if h < min_step:
                termination = collapsed()
                break

            continue

        t = t_final if t + h >= t_final else t + h

        if project is not None:
            y = project(y_new)
            f = fun(t, y)
        else:
            y = y_new
            f = f_new

        times.append(t)
        states.append(y)
        derivatives.append(f)
        norms.append(float(np.max(np.abs(y))))

        if guard is not None and (termination := guard(t, y)) is not None:
            break

        if t >= t_final:
            termination = ReachedFinalTime(t)
            break

        if norms[-1] > threshold and h < 10 * min_step:
            termination = collapsed()
            break

        if error_norm == 0:
            factor = _MAX_FACTOR
        else:
            factor = min(
                _MAX_FACTOR,
                max(_MIN_FACTOR, _SAFETY * error_norm ** -0.2),
            )

        h *= factor

        if h < min_step:
            termination = collapsed()
            break

    LOGGER.debug(
        "dopri5: %d accepted, %d rejected steps, %s",
        len(times) - 1,
        rejected,
        termination,
    )

    return DenseOutput(times, states, derivatives), termination
