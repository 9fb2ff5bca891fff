#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

import math

from logging import getLogger

import numpy as np

from scipy.integrate import quad
from scipy.optimize import brentq

from .lowlevel import DomainError, ParameterError, QuadratureError

LOGGER = getLogger(__name__)

# "-" is the left side of a front and "+" the right one: [f] = f_R - f_L


class RiemannData:
    """Piecewise constant data ``(vL, TL)`` for ``x < 0`` and ``(vR, TR)``
    for ``x > 0``; ``c = 1 / phi(0)``."""

    __slots__ = (
        "__TL",
        "__TR",
        "__c",
        "__lam",
        "__vL",
        "__vR",
    )

    @staticmethod
    def __new__(cls, /, vL, TL, vR, TR, lam=2.0, c=1.0):
        self = super(RiemannData, cls).__new__(cls)

        if not TL > 0 or not TR > 0:
            msg = f"side temperatures must be > 0, got {TL!r} and {TR!r}"
            raise ParameterError(msg)
        if not lam > 0:
            msg = f"lam must be > 0, got {lam!r}"
            raise ParameterError(msg)
        if not c > 0:
            msg = f"c must be > 0, got {c!r}"
            raise ParameterError(msg)

        self.__vL = float(vL)
        self.__TL = float(TL)
        self.__vR = float(vR)
        self.__TR = float(TR)
        self.__lam = float(lam)
        self.__c = float(c)

        return self

    def __getnewargs__(self, /):
        return (
            self.__vL,
            self.__TL,
            self.__vR,
            self.__TR,
            self.__lam,
            self.__c,
        )

    def __repr__(self, /):
        args_repr = ", ".join(map(repr, self.__getnewargs__()))

        return f"RiemannData({args_repr})"

    def __eq__(self, other, /):
        if not isinstance(other, RiemannData):
            return NotImplemented

        return self.__getnewargs__() == other.__getnewargs__()

    def __hash__(self, /):
        return hash(self.__getnewargs__())

    def phi(self, /, t):
        """``phi(t) = 1 / (lam t / 2 + c)``."""

        return 1 / (self.__lam * np.asarray(t, dtype=float) / 2 + self.__c)

    def cooling(self, /, t):
        """Factor ``sqrt(T(t) / T(0))`` of a spatially constant state."""

        return self.__c * self.phi(t)

    def cooling_integral(self, /, t):
        """Integral of :meth:`cooling` over ``[0, t]``."""

        scale = 2 * self.__c / self.__lam

        return scale * np.log1p(np.asarray(t, dtype=float) / scale)

    @property
    def vL(self, /):
        return self.__vL

    @property
    def TL(self, /):
        return self.__TL

    @property
    def vR(self, /):
        return self.__vR

    @property
    def TR(self, /):
        return self.__TR

    @property
    def lam(self, /):
        return self.__lam

    @property
    def c(self, /):
        return self.__c

    @property
    def wL(self, /):
        return math.sqrt(self.__TL)

    @property
    def wR(self, /):
        return math.sqrt(self.__TR)


class _Regime:
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
        return ()

    @property
    def name(self, /):
        return type(self).__name__


class TwoContactsForever(_Regime):
    __slots__ = ()


class ImmediateConcentration(_Regime):
    __slots__ = ()


class DelayedConcentration(_Regime):
    __slots__ = (
        "__t_doublestar",
        "__t_star",
    )

    @staticmethod
    def __new__(cls, /, t_doublestar, t_star):
        self = super(DelayedConcentration, cls).__new__(cls)

        if not 0 < t_doublestar < t_star:
            msg = (
                "expected 0 < t_doublestar < t_star,"
                f" got {t_doublestar!r} and {t_star!r}"
            )
            raise ParameterError(msg)

        self.__t_doublestar = float(t_doublestar)
        self.__t_star = float(t_star)

        return self

    def __getnewargs__(self, /):
        return (self.__t_doublestar, self.__t_star)

    @property
    def t_doublestar(self, /):
        """The time the middle temperature vanishes."""

        return self.__t_doublestar

    @property
    def t_star(self, /):
        """The time the two contacts would meet."""

        return self.__t_star


def riemann_invariants(v, T, /):
    T = np.asarray(T, dtype=float)

    if np.any(T < 0):
        msg = "T must be >= 0"
        raise DomainError(msg)

    w = np.sqrt(T)
    s = v - w
    r = v + w

    if np.ndim(s) == 0:
        return float(s), float(r)

    return s, r


def from_riemann_invariants(s, r, /):
    """Inverse of :func:`riemann_invariants`; needs ``r >= s``."""

    s = np.asarray(s, dtype=float)
    r = np.asarray(r, dtype=float)

    if np.any(r < s):
        msg = "r must be >= s"
        raise DomainError(msg)

    v = (r + s) / 2
    T = ((r - s) / 2) ** 2

    if np.ndim(v) == 0:
        return float(v), float(T)

    return v, T


def doublestar_time(data, /):
    """Closed-form root of the middle temperature, ``inf`` if none."""

    gap = data.vL - data.vR

    if gap <= 0:
        return math.inf

    scale = 2 * data.c / data.lam

    return max(0.0, scale * ((data.wL + data.wR) / gap - 1))


def _contact_gap(data, t, /):
    return (data.vR - data.vL) * t + (data.wL + data.wR) * (
        data.cooling_integral(t)
    )


def contact_meeting_time(data, /):
    """Root of ``x_+(t) - x_-(t)`` for ``t > 0``, ``inf`` if none."""

    if data.vL <= data.vR:
        return math.inf

    t_doublestar = doublestar_time(data)

    if t_doublestar == 0:
        return 0.0

    # the gap is concave with its maximum at t_doublestar
    low = t_doublestar
    high = 2 * max(t_doublestar, 2 * data.c / data.lam)

    while _contact_gap(data, high) > 0:
        high *= 2

    LOGGER.debug("contact meeting time bracketed in [%r, %r]", low, high)

    return brentq(
        lambda t: _contact_gap(data, t),
        low,
        high,
        xtol=1e-12,
        rtol=4 * np.finfo(float).eps,
    )


def classify(data, /):
    if data.vL <= data.vR:
        regime = TwoContactsForever()
    elif data.vL >= data.vR + data.wL + data.wR:
        regime = ImmediateConcentration()
    else:
        regime = DelayedConcentration(
            doublestar_time(data),
            contact_meeting_time(data),
        )

    LOGGER.info("%r classified as %r", data, regime)

    return regime


class TwoContactSolution:
    """Two contact discontinuities ``x_-(t) < x_+(t)`` enclosing a plateau.

    The outer states keep their velocities and cool down; the plateau
    carries ``s`` of the left state and ``r`` of the right state. The
    plateau does not solve the invariant equations unless both sides are
    equal: :meth:`plateau_defect` reports by how much.
    """

    __slots__ = ("__data",)

    @staticmethod
    def __new__(cls, /, data):
        self = super(TwoContactSolution, cls).__new__(cls)

        self.__data = data

        return self

    def __getnewargs__(self, /):
        return (self.__data,)

    def __repr__(self, /):
        return f"TwoContactSolution({self.__data!r})"

    def side_temperatures(self, /, t):
        """``(T_L(t), T_R(t))`` of the cooled outer states."""

        data = self.__data
        factor = data.cooling(t) ** 2

        return data.TL * factor, data.TR * factor

    def x_minus(self, /, t):
        data = self.__data

        return data.vL * t - data.wL * data.cooling_integral(t)

    def x_plus(self, /, t):
        data = self.__data

        return data.vR * t + data.wR * data.cooling_integral(t)

    def middle(self, /, t):
        """``(v_M(t), T_M(t))``."""

        v, w = self.__middle_vw(t)

        return v, w * w

    def __middle_vw(self, t, /):
        data = self.__data
        e = data.cooling(t)

        s = data.vL - data.wL * e
        r = data.vR + data.wR * e

        return (s + r) / 2, (r - s) / 2

    def plateau_defect(self, /, t):
        """Residuals ``(s' - lam phi w / 2, r' + lam phi w / 2)`` of the
        plateau; both vanish when the two sides are identical."""

        data = self.__data
        _, w_middle = self.__middle_vw(t)
        rate = data.lam * data.phi(t) / 2
        e = data.cooling(t)

        return (
            rate * (data.wL * e - w_middle),
            rate * (w_middle - data.wR * e),
        )

    def plateau_mass_rate(self, /, t):
        """Rate at which the plateau creates mass, ``(x_+ - x_-) rho_M'``.

        Both contacts carry the mass flux exactly, so the control-volume
        defect of :func:`mass_balance` is the time integral of this rate.
        It is zero when ``vL == vR``, negative when the sides separate and
        unbounded as ``T_M -> 0`` when they approach each other.
        """

        data = self.__data
        _, w_middle = self.__middle_vw(t)

        if not w_middle > 0:
            msg = f"the middle temperature vanished at t={t!r}"
            raise DomainError(msg)

        # rho_M = phi / w_M with phi' = -lam phi**2 / 2
        rho_rate = (
            -data.lam
            * data.phi(t) ** 2
            * (data.vR - data.vL)
            / (4 * w_middle**2)
        )

        return float((self.x_plus(t) - self.x_minus(t)) * rho_rate)

    def evaluate(self, /, t, x):
        """Regular fields ``(v, T, rho)`` at the points ``x``."""

        data = self.__data

        if t > self.valid_until:
            msg = f"two-contact solution is valid up to {self.valid_until!r}"
            raise DomainError(msg)

        x = np.asarray(x, dtype=float)
        TL, TR = self.side_temperatures(t)
        v_middle, T_middle = self.middle(t)

        left = x < self.x_minus(t)
        right = x > self.x_plus(t)

        v = np.where(left, data.vL, np.where(right, data.vR, v_middle))
        T = np.where(left, TL, np.where(right, TR, T_middle))

        return v, T, _density(data.phi(t), T)

    @property
    def valid_until(self, /):
        return doublestar_time(self.__data)

    @property
    def data(self, /):
        return self.__data


def _density(phi, T, /):
    T = np.asarray(T, dtype=float)
    positive = T > 0
    rho = np.where(positive, phi / np.sqrt(np.where(positive, T, 1)), np.inf)

    return float(rho) if rho.ndim == 0 else rho


def two_contact_solution(data, /):
    return TwoContactSolution(data)


def side_states(data, t0, /):
    """Outer states ``((vL, TL(t0)), (vR, TR(t0)))`` at time ``t0``."""

    factor = data.cooling(t0) ** 2

    return (
        (data.vL, float(data.TL * factor)),
        (data.vR, float(data.TR * factor)),
    )


def side_densities(data, t, /):
    """Outer densities at ``t``; they stay at ``1 / (c sqrt(T(0)))``."""

    ((_, TL), (_, TR)) = side_states(data, t)
    phi = float(data.phi(t))

    return phi / math.sqrt(TL), phi / math.sqrt(TR)


class Jumps:
    """Brackets ``[f] = f_R - f_L`` at a front born at ``t0``.

    Side temperatures decay like those of constant states, so the side
    densities and hence every bracket are constant in time.
    """

    __slots__ = (
        "__left",
        "__phi0",
        "__rho",
        "__rho_v",
        "__rho_v2",
        "__rho_product",
        "__right",
        "__tau",
        "__v",
        "__w",
    )

    @staticmethod
    def __new__(cls, /, left, right, phi0):
        self = super(Jumps, cls).__new__(cls)

        (vL, TL), (vR, TR) = left, right
        left = (float(vL), float(TL))
        right = (float(vR), float(TR))

        if not TL > 0 or not TR > 0:
            msg = "side temperature vanished: side density is infinite"
            raise DomainError(msg)

        wL, wR = math.sqrt(TL), math.sqrt(TR)
        rhoL, rhoR = phi0 / wL, phi0 / wR

        self.__left = left
        self.__right = right
        self.__phi0 = float(phi0)
        self.__rho = rhoR - rhoL
        self.__rho_v = rhoR * vR - rhoL * vL
        self.__rho_v2 = rhoR * vR * vR - rhoL * vL * vL
        self.__tau = 1 / rhoR - 1 / rhoL
        self.__v = vR - vL
        self.__w = wR - wL
        self.__rho_product = rhoL * rhoR

        return self

    def __getnewargs__(self, /):
        return (self.__left, self.__right, self.__phi0)

    def __repr__(self, /):
        return (
            f"<Jumps rho={self.__rho!r} rho_v={self.__rho_v!r}"
            f" rho_v2={self.__rho_v2!r} tau={self.__tau!r}>"
        )

    @property
    def phi0(self, /):
        return self.__phi0

    @property
    def rho(self, /):
        return self.__rho

    @property
    def rho_v(self, /):
        return self.__rho_v

    @property
    def rho_v2(self, /):
        return self.__rho_v2

    @property
    def tau(self, /):
        """Jump of the specific volume ``1 / rho``."""

        return self.__tau

    @property
    def v(self, /):
        return self.__v

    @property
    def w(self, /):
        return self.__w

    @property
    def rho_product(self, /):
        return self.__rho_product

    @property
    def onset_coefficient(self, /):
        """Coefficient of ``t1**2`` in ``theta**2`` for small ``t1``."""

        return self.__rho_product * (self.__v**2 - self.__w**2)


def jumps(data, t0, /, states=None):
    if states is None:
        states = side_states(data, t0)

    return Jumps(states[0], states[1], float(data.phi(t0)))


def _log_term(lam, phi0, t1, /):
    # G(t1) = phi0 t1 - (2 / lam) ln(lam phi0 t1 / 2 + 1)
    k = lam * phi0 / 2

    return phi0 * t1 - (2 / lam) * np.log1p(k * t1)


def _log_term_derivative(lam, phi0, t1, /):
    k = lam * phi0 / 2

    return phi0 * k * t1 / (1 + k * t1)


class DeltaFront:
    """A point mass ``theta(t)`` on the front ``x_*(t)`` born at ``(t0,
    x0)`` from the given side states; the momentum it carries is
    ``psi = theta * dx_*/dt``."""

    __slots__ = (
        "__data",
        "__jumps",
        "__states",
        "__t0",
        "__x0",
    )

    @staticmethod
    def __new__(cls, /, data, t0=0.0, x0=0.0, states=None):
        self = super(DeltaFront, cls).__new__(cls)

        if states is None:
            states = side_states(data, t0)

        bracket = jumps(data, t0, states)

        if bracket.onset_coefficient < 0:
            msg = (
                "concentration condition [v]**2 >= [T**(1/2)]**2 fails"
                f" at t0={t0!r}: theta**2 would be negative"
            )
            raise DomainError(msg)

        self.__data = data
        self.__t0 = float(t0)
        self.__x0 = float(x0)
        self.__states = states
        self.__jumps = bracket

        return self

    def __reduce__(self, /):
        return (
            DeltaFront,
            (self.__data, self.__t0, self.__x0, self.__states),
        )

    def __repr__(self, /):
        return (
            f"DeltaFront({self.__data!r}, {self.__t0!r}, {self.__x0!r},"
            f" {self.__states!r})"
        )

    def __elapsed(self, t, /):
        t1 = np.asarray(t, dtype=float) - self.__t0

        if np.any(t1 < 0):
            msg = f"the front is born at t0={self.__t0!r}"
            raise DomainError(msg)

        return t1

    def theta_squared(self, /, t):
        t1 = self.__elapsed(t)
        j = self.__jumps
        lam = self.__data.lam

        return (
            j.rho_product * j.v**2 * t1**2
            + (4 / lam) * j.rho * j.tau * _log_term(lam, j.phi0, t1)
        )

    def theta(self, /, t):
        """Mass of the point concentration, zero at birth."""

        squared = np.asarray(self.theta_squared(t))
        j = self.__jumps
        t1 = self.__elapsed(t)

        # rounding may leave a tiny negative value near the boundary
        floor = -64 * np.finfo(float).eps * (
            j.rho_product * (j.v**2 + j.w**2) * t1**2
        )

        if np.any(squared < floor):
            msg = "negative discriminant under theta"
            raise DomainError(msg)

        theta = np.sqrt(np.maximum(squared, 0))

        return float(theta) if theta.ndim == 0 else theta

    def position(self, /, t):
        """Front position ``x_*(t)``.

        Uses ``x_* - x0 = ([rho v] t1 + theta) / [rho]`` rationalized by
        ``theta - [rho v] t1`` so that equal side densities are regular.
        """

        t1 = np.asarray(self.__elapsed(t))
        j = self.__jumps
        lam = self.__data.lam

        theta = np.asarray(self.theta(t))
        numerator = -j.rho_v2 * t1**2 + (4 / lam) * j.tau * _log_term(
            lam,
            j.phi0,
            t1,
        )
        denominator = theta - j.rho_v * t1

        born = t1 > 0

        if np.any(born & (denominator == 0)):
            msg = "no compression at the front: position is undefined"
            raise DomainError(msg)

        offset = np.where(
            born,
            numerator / np.where(born, denominator, 1),
            0.0,
        )
        position = self.__x0 + offset

        return float(position) if position.ndim == 0 else position

    def speed(self, /, t):
        """Analytic front speed ``dx_*/dt``."""

        t1 = float(self.__elapsed(t))
        j = self.__jumps
        lam = self.__data.lam

        if t1 == 0:
            kappa = math.sqrt(j.onset_coefficient)
            denominator = kappa - j.rho_v

            if denominator == 0:
                msg = "no compression at the front: speed is undefined"
                raise DomainError(msg)

            return (-j.rho_v2 + j.tau * j.phi0**2) / denominator

        theta = self.theta(t)
        d_log = _log_term_derivative(lam, j.phi0, t1)
        d_squared = 2 * j.rho_product * j.v**2 * t1 + (4 / lam) * (
            j.rho * j.tau * d_log
        )
        d_theta = d_squared / (2 * theta)

        numerator = -j.rho_v2 * t1**2 + (4 / lam) * j.tau * _log_term(
            lam,
            j.phi0,
            t1,
        )
        d_numerator = -2 * j.rho_v2 * t1 + (4 / lam) * j.tau * d_log
        denominator = theta - j.rho_v * t1
        d_denominator = d_theta - j.rho_v

        return float(
            (d_numerator * denominator - numerator * d_denominator)
            / denominator**2
        )

    def psi(self, /, t):
        """Momentum of the point concentration."""

        return self.theta(t) * self.speed(t)

    def side_fields(self, /, t):
        """``((vL, TL(t)), (vR, TR(t)))`` beside the front."""

        data = self.__data
        factor = float((data.cooling(t) / data.cooling(self.__t0)) ** 2)
        (vL, TL), (vR, TR) = self.__states

        return (vL, TL * factor), (vR, TR * factor)

    def evaluate(self, /, t, x):
        x = np.asarray(x, dtype=float)
        (vL, TL), (vR, TR) = self.side_fields(t)
        left = x < self.position(t)

        v = np.where(left, vL, vR)
        T = np.where(left, TL, TR)

        return v, T, _density(self.__data.phi(t), T)

    @property
    def data(self, /):
        return self.__data

    @property
    def jumps(self, /):
        return self.__jumps

    @property
    def t0(self, /):
        return self.__t0

    @property
    def x0(self, /):
        return self.__x0

    @property
    def states(self, /):
        return self.__states


def delta_theta(data, t0, t, /, states=None):
    return DeltaFront(data, t0, 0.0, states).theta(t)


def delta_position(data, t0, t, /, x0=0.0, states=None):
    return DeltaFront(data, t0, x0, states).position(t)


def concentration_onset(data, /):
    """Smallest ``t0 >= 0`` with ``[v]**2 >= [T**(1/2)(t0)]**2``.

    Returns ``inf`` when the sides do not approach each other.
    """

    gap = data.vL - data.vR
    spread = abs(data.wR - data.wL)

    if gap <= 0:
        return math.inf
    if gap >= spread:
        return 0.0

    return 2 * data.c / data.lam * (spread / gap - 1)


def front_speed_limit(data, /):
    """Long-time speed of the front between the two outer states."""

    rhoL, rhoR = side_densities(data, 0.0)
    a, b = math.sqrt(rhoR), math.sqrt(rhoL)

    return (a * data.vR + b * data.vL) / (a + b)


class PiecewiseSolution:
    """The assembled solution of a Riemann problem."""

    __slots__ = (
        "__data",
        "__delta",
        "__regime",
        "__two_contact",
    )

    @staticmethod
    def __new__(cls, /, data, regime, two_contact=None, delta=None):
        self = super(PiecewiseSolution, cls).__new__(cls)

        needs_two_contact = not isinstance(regime, ImmediateConcentration)
        needs_delta = not isinstance(regime, TwoContactsForever)

        if (two_contact is not None) != needs_two_contact:
            msg = f"{regime.name} does not match the two-contact piece"
            raise ParameterError(msg)
        if (delta is not None) != needs_delta:
            msg = f"{regime.name} does not match the delta piece"
            raise ParameterError(msg)

        self.__data = data
        self.__regime = regime
        self.__two_contact = two_contact
        self.__delta = delta

        return self

    def __getnewargs__(self, /):
        return (self.__data, self.__regime, self.__two_contact, self.__delta)

    def __repr__(self, /):
        return f"<PiecewiseSolution {self.__regime!r} for {self.__data!r}>"

    def __active(self, t, /):
        if t < 0:
            msg = "t must be >= 0"
            raise DomainError(msg)

        if self.__delta is not None and t >= self.__delta.t0:
            return self.__delta

        return self.__two_contact

    def evaluate(self, /, t, x):
        """Regular fields ``(v, T, rho)``; point masses are reported by
        :meth:`point_masses`."""

        return self.__active(t).evaluate(t, x)

    def point_masses(self, /, t):
        """``[(x_*, theta)]`` at time ``t``."""

        if self.__active(t) is self.__delta:
            delta = self.__delta

            return [(delta.position(t), delta.theta(t))]

        return []

    def fronts(self, /, t):
        """Positions of every discontinuity at time ``t``."""

        piece = self.__active(t)

        if piece is self.__delta:
            return [piece.position(t)]

        return [float(piece.x_minus(t)), float(piece.x_plus(t))]

    def transitional(self, /, t):
        """Whether ``t`` lies between the vanishing of the middle
        temperature and the meeting of the contacts.

        There the front has already been born at the midpoint of a segment of
        positive width; the continuation is a modeling choice, not a unique
        solution.
        """

        regime = self.__regime

        if not isinstance(regime, DelayedConcentration):
            return False

        return regime.t_doublestar <= t < regime.t_star

    @property
    def data(self, /):
        return self.__data

    @property
    def regime(self, /):
        return self.__regime

    @property
    def two_contact(self, /):
        return self.__two_contact

    @property
    def delta(self, /):
        return self.__delta


def solve(data, /):
    regime = classify(data)

    if isinstance(regime, TwoContactsForever):
        return PiecewiseSolution(data, regime, two_contact_solution(data))

    if isinstance(regime, ImmediateConcentration):
        return PiecewiseSolution(data, regime, delta=DeltaFront(data))

    two_contact = two_contact_solution(data)
    t0 = regime.t_doublestar
    x0 = (two_contact.x_minus(t0) + two_contact.x_plus(t0)) / 2

    LOGGER.info(
        "front born at t=%r, x=%r; transitional until t=%r",
        t0,
        x0,
        regime.t_star,
    )

    return PiecewiseSolution(
        data,
        regime,
        two_contact,
        DeltaFront(data, t0, float(x0)),
    )


def _regular_mass(solution, t, X, /):
    fronts = sorted(solution.fronts(t))

    if fronts[0] <= -X or fronts[-1] >= X:
        msg = f"a front left the control volume [-{X!r}, {X!r}] at t={t!r}"
        raise DomainError(msg)

    edges = [-X, *fronts, X]
    midpoints = [(a + b) / 2 for a, b in zip(edges, edges[1:])]
    _, _, rho = solution.evaluate(t, np.array(midpoints))

    return float(np.sum(np.asarray(rho) * np.diff(edges)))


def mass_balance(solution, X, t_final, /, samples=101):
    """Control-volume mass defect over ``[-X, X]``.

    Returns ``(times, defects)`` where each defect is the mass in the
    volume (regular part plus point masses) minus its initial value and the
    net boundary inflow.
    """

    if not X > 0 or not t_final > 0:
        msg = "X and t_final must be > 0"
        raise ParameterError(msg)

    def mass(t):
        point = sum(m for _, m in solution.point_masses(t))

        return _regular_mass(solution, t, X) + point

    def inflow(t):
        v, _, rho = solution.evaluate(t, np.array([-X, X]))

        return float(rho[0] * v[0] - rho[1] * v[1])

    times = np.linspace(0, t_final, samples)
    initial = mass(0.0)
    defects = []

    for t in times:
        result = quad(inflow, 0, t, full_output=1)

        if len(result) > 3:
            msg = f"boundary flux quadrature failed: {result[3]}"
            raise QuadratureError(msg)

        defects.append(mass(t) - initial - result[0])

    return times, np.array(defects)
