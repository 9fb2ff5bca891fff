#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

import math

from logging import getLogger

import numpy as np

from ._core import GasSample
from .lowlevel import (
    BlowUpDetected,
    BlowUpReachedError,
    DomainError,
    InsufficientSamplesError,
    IntegrationOptions,
    ParameterError,
    PhiNonPositive,
    dopri5,
    power_law_fit,
)

LOGGER = getLogger(__name__)

# tolerance for accepting a nearly symmetric A from the caller
_SYMMETRY_TOL = 1e-12


def _readonly(array, /):
    array.flags.writeable = False

    return array


class UDState:
    """A uniform deformation state.

    The hydrodynamic fields are ``v = alpha @ x + beta``, ``T = x @ A @ x +
    B @ x + C`` and ``rho = phi / sqrt(T)``.
    """

    __slots__ = (
        "__A",
        "__B",
        "__C",
        "__alpha",
        "__beta",
        "__phi",
        "__t",
    )

    @staticmethod
    def __new__(cls, /, t, alpha, beta, A, B, C, phi):
        self = super(UDState, cls).__new__(cls)

        alpha = np.array(alpha, dtype=float)

        if alpha.ndim == 0:
            alpha = alpha.reshape(1, 1)

        n = alpha.shape[0]

        beta = np.array(beta, dtype=float).reshape(-1)
        A = np.array(A, dtype=float).reshape(alpha.shape)
        B = np.array(B, dtype=float).reshape(-1)

        if alpha.shape != (n, n) or beta.shape != (n,) or B.shape != (n,):
            msg = "alpha, beta, A and B must have matching dimension"
            raise ParameterError(msg)

        scale = max(1.0, float(np.max(np.abs(A))))

        if np.max(np.abs(A - A.T)) > _SYMMETRY_TOL * scale:
            msg = "A must be symmetric"
            raise ParameterError(msg)

        self.__t = float(t)
        self.__alpha = _readonly(alpha)
        self.__beta = _readonly(beta)
        self.__A = _readonly((A + A.T) / 2)
        self.__B = _readonly(B)
        self.__C = float(C)
        self.__phi = float(phi)

        return self

    def __getnewargs__(self, /):
        return (
            self.__t,
            self.__alpha,
            self.__beta,
            self.__A,
            self.__B,
            self.__C,
            self.__phi,
        )

    def __repr__(self, /):
        return (
            f"UDState({self.__t!r}, {self.__alpha.tolist()!r},"
            f" {self.__beta.tolist()!r}, {self.__A.tolist()!r},"
            f" {self.__B.tolist()!r}, {self.__C!r}, {self.__phi!r})"
        )

    @classmethod
    def isotropic(cls, /, t, alpha1, a, C, phi, dim):
        eye = np.eye(dim)
        zero = np.zeros(dim)

        return cls(t, alpha1 * eye, zero, a * eye, zero, C, phi)

    @classmethod
    def from_isotropic(cls, /, state, dim):
        return cls.isotropic(
            state.t,
            state.alpha1,
            state.a,
            state.C,
            state.phi,
            dim,
        )

    @property
    def dim(self, /):
        return self.__alpha.shape[0]

    @property
    def t(self, /):
        return self.__t

    @property
    def alpha(self, /):
        return self.__alpha

    @property
    def beta(self, /):
        return self.__beta

    @property
    def A(self, /):
        return self.__A

    @property
    def B(self, /):
        return self.__B

    @property
    def C(self, /):
        return self.__C

    @property
    def phi(self, /):
        return self.__phi


class IsotropicState:
    """``alpha = alpha1 * I``, ``A = a * I`` and ``beta = B = 0``."""

    __slots__ = (
        "__C",
        "__a",
        "__alpha1",
        "__phi",
        "__t",
    )

    @staticmethod
    def __new__(cls, /, t, alpha1, a, C, phi):
        self = super(IsotropicState, cls).__new__(cls)

        self.__t = float(t)
        self.__alpha1 = float(alpha1)
        self.__a = float(a)
        self.__C = float(C)
        self.__phi = float(phi)

        return self

    def __getnewargs__(self, /):
        return (self.__t, self.__alpha1, self.__a, self.__C, self.__phi)

    def __repr__(self, /):
        args_repr = ", ".join(map(repr, self.__getnewargs__()))

        return f"IsotropicState({args_repr})"

    @property
    def t(self, /):
        return self.__t

    @property
    def alpha1(self, /):
        return self.__alpha1

    @property
    def a(self, /):
        return self.__a

    @property
    def C(self, /):
        return self.__C

    @property
    def phi(self, /):
        return self.__phi


def ode_count(dim, /):
    """Number of independent scalar equations of the full system."""

    return (3 * dim * dim + 5 * dim + 4) // 2


def _full_size(dim, /):
    return 2 * dim * dim + 2 * dim + 2


def pack(state, /):
    """Flatten a state into the vector layout used by the integrator.

    An :class:`IsotropicState` becomes ``[phi, alpha1, a, C]``; a
    :class:`UDState` becomes ``[alpha, beta, A, B, C, phi]`` with both
    matrices stored row-major in full.
    """

    if isinstance(state, IsotropicState):
        return np.array([state.phi, state.alpha1, state.a, state.C])

    return np.concatenate([
        state.alpha.ravel(),
        state.beta,
        state.A.ravel(),
        state.B,
        [state.C, state.phi],
    ])


def _infer_dim(size, /):
    # solve 2n^2 + 2n + 2 = size
    n = int(round((-1 + math.sqrt(1 + 2 * (size - 2))) / 2))

    if n < 1 or _full_size(n) != size:
        msg = f"no state layout has {size} components"
        raise ParameterError(msg)

    return n


def unpack(y, t, /, dim=None):
    """Inverse of :func:`pack`.

    Without ``dim`` a 4-vector is read as an :class:`IsotropicState`.
    """

    y = np.asarray(y, dtype=float)

    if dim is None:
        if len(y) == 4:
            return IsotropicState(t, y[1], y[2], y[3], y[0])

        dim = _infer_dim(len(y))
    elif len(y) != _full_size(dim):
        msg = f"expected {_full_size(dim)} components, got {len(y)}"
        raise ParameterError(msg)

    n = dim
    n2 = n * n

    return UDState(
        t,
        y[:n2].reshape(n, n),
        y[n2 : n2 + n],
        y[n2 + n : 2 * n2 + n].reshape(n, n),
        y[2 * n2 + n : 2 * n2 + 2 * n],
        y[-2],
        y[-1],
    )


def _full_derivatives(gamma, lam, alpha, beta, A, B, C, phi, /):
    tr = np.trace(alpha)
    damping = (gamma - 1) * tr + lam * phi

    d_alpha = -alpha @ alpha - A
    d_beta = -alpha @ beta - B / 2
    d_A = -(A @ alpha + alpha.T @ A) - damping * A
    d_B = -2 * A @ beta - alpha.T @ B - damping * B
    d_C = -beta @ B - damping * C
    d_phi = -(gamma + 1) / 2 * phi * tr - lam / 2 * phi * phi

    return d_alpha, d_beta, d_A, d_B, float(d_C), float(d_phi)


def _isotropic_derivatives(gamma, lam, n, y, /):
    phi, alpha1, a, C = y

    return np.array([
        -n / 2 * (gamma + 1) * phi * alpha1 - lam / 2 * phi * phi,
        -alpha1 * alpha1 - a,
        -((2 + n * (gamma - 1)) * alpha1 + lam * phi) * a,
        -(n * (gamma - 1) * alpha1 + lam * phi) * C,
    ])


def _check_phi(state, /):
    if not state.phi > 0:
        msg = f"phi must be > 0, got {state.phi!r}"
        raise DomainError(msg)


def rhs_full(params, state, /):
    """Time derivatives ``(alpha', beta', A', B', C', phi')``."""

    _check_phi(state)

    return _full_derivatives(
        params.gamma,
        params.lam,
        state.alpha,
        state.beta,
        state.A,
        state.B,
        state.C,
        state.phi,
    )


def rhs_isotropic(params, state, /):
    """Time derivatives ``(phi', alpha1', a', C')``."""

    _check_phi(state)

    return tuple(
        _isotropic_derivatives(
            params.gamma,
            params.lam,
            params.dim,
            pack(state),
        ).tolist()
    )


def _full_vector_field(params, n, /):
    n2 = n * n
    gamma = params.gamma
    lam = params.lam

    def fun(t, y):
        d_alpha, d_beta, d_A, d_B, d_C, d_phi = _full_derivatives(
            gamma,
            lam,
            y[:n2].reshape(n, n),
            y[n2 : n2 + n],
            y[n2 + n : 2 * n2 + n].reshape(n, n),
            y[2 * n2 + n : 2 * n2 + 2 * n],
            y[-2],
            y[-1],
        )

        return np.concatenate([
            d_alpha.ravel(),
            d_beta,
            d_A.ravel(),
            d_B,
            [d_C, d_phi],
        ])

    def project(y):
        y = y.copy()
        A = y[n2 + n : 2 * n2 + n].reshape(n, n)
        y[n2 + n : 2 * n2 + n] = ((A + A.T) / 2).ravel()

        return y

    return fun, project


class Trajectory:
    """Samples of an integrated state together with how integration ended."""

    __slots__ = (
        "__dense",
        "__dim",
        "__isotropic",
        "__params",
        "__termination",
    )

    @staticmethod
    def __new__(cls, /, params, dense, termination, *, dim, isotropic):
        self = super(Trajectory, cls).__new__(cls)

        self.__params = params
        self.__dense = dense
        self.__termination = termination
        self.__dim = dim
        self.__isotropic = bool(isotropic)

        return self

    def __getnewargs_ex__(self, /):
        return (
            (self.__params, self.__dense, self.__termination),
            {"dim": self.__dim, "isotropic": self.__isotropic},
        )

    def __repr__(self, /):
        kind = "isotropic" if self.__isotropic else "full"

        return (
            f"<{type(self).__name__} {kind} n={self.__dim}"
            f" samples={len(self.__dense)} termination={self.__termination!r}>"
        )

    def __len__(self, /):
        return len(self.__dense)

    def __iter__(self, /):
        for t, y in zip(self.__dense.times, self.__dense.states):
            yield t, self.__unpack(y, t)

    def __unpack(self, y, t, /):
        if self.__isotropic:
            return unpack(y, t)

        return unpack(y, t, self.__dim)

    def state(self, /, t):
        """Dense-output state at time ``t`` inside the sampled range."""

        return self.__unpack(self.__dense(t), t)

    @property
    def samples(self, /):
        return list(self)

    @property
    def final(self, /):
        return self.__unpack(self.__dense.states[-1], self.__dense.times[-1])

    @property
    def times(self, /):
        return self.__dense.times

    @property
    def vectors(self, /):
        return self.__dense.states

    @property
    def norms(self, /):
        return np.max(np.abs(self.__dense.states), axis=1)

    @property
    def dense(self, /):
        return self.__dense

    @property
    def termination(self, /):
        return self.__termination

    @property
    def params(self, /):
        return self.__params

    @property
    def dim(self, /):
        return self.__dim

    @property
    def isotropic(self, /):
        return self.__isotropic


def integrate(params, initial, t_final, /, options=None):
    """Integrate a uniform deformation from ``initial.t`` to ``t_final``.

    Blow-up, ``phi <= 0`` and step underflow end the integration early and
    are reported through :attr:`Trajectory.termination`.
    """

    if options is None:
        options = IntegrationOptions()

    if not t_final > initial.t:
        msg = f"t_final must be > {initial.t!r}, got {t_final!r}"
        raise ParameterError(msg)

    _check_phi(initial)

    isotropic = isinstance(initial, IsotropicState)

    if isotropic:
        dim = params.dim
        gamma = params.gamma
        lam = params.lam

        def fun(t, y):
            return _isotropic_derivatives(gamma, lam, dim, y)

        project = None
        phi_index = 0
    else:
        dim = initial.dim

        if dim != params.dim:
            msg = (
                f"state dimension {dim} does not match"
                f" params.dim {params.dim}"
            )
            raise ParameterError(msg)

        fun, project = _full_vector_field(params, dim)
        phi_index = -1

    def guard(t, y):
        if y[phi_index] <= 0:
            return PhiNonPositive(t)

        return None

    LOGGER.debug(
        "integrating %s system (n=%d) on [%r, %r]",
        "isotropic" if isotropic else "full",
        dim,
        initial.t,
        t_final,
    )

    dense, termination = dopri5(
        fun,
        initial.t,
        pack(initial),
        t_final,
        options,
        guard=guard,
        project=project,
    )

    LOGGER.info(
        "integration ended with %r after %d samples",
        termination,
        len(dense),
    )

    return Trajectory(
        params,
        dense,
        termination,
        dim=dim,
        isotropic=isotropic,
    )


def _as_full(state, dim, /):
    if isinstance(state, IsotropicState):
        return UDState.from_isotropic(state, dim)

    return state


def _temperature(state, x, /):
    return float(x @ state.A @ x + state.B @ x + state.C)


def reconstruct_fields(state, x, /):
    """The gas sample ``(rho, v, T)`` at the point ``x``."""

    x = np.array(x, dtype=float).reshape(-1)
    state = _as_full(state, len(x))

    if len(x) != state.dim:
        msg = f"x must have {state.dim} components"
        raise ParameterError(msg)

    T = _temperature(state, x)

    if not T > 0:
        msg = f"T(x) = {T!r} <= 0: outside the physical support"
        raise DomainError(msg)

    return GasSample(state.phi / math.sqrt(T), state.alpha @ x + state.beta, T)


def density_field(state, points, /):
    """Density at each point; NaN where ``T <= 0``.

    ``points`` has shape ``(..., n)``; for ``n = 1`` a plain array of
    coordinates is accepted too.
    """

    points = np.asarray(points, dtype=float)

    if isinstance(state, IsotropicState):
        dim = 1 if points.ndim < 2 else points.shape[-1]
        state = UDState.from_isotropic(state, dim)

    if state.dim == 1 and (points.ndim == 0 or points.shape[-1] != 1):
        points = points[..., None]

    T = (
        np.einsum("...i,ij,...j->...", points, state.A, points)
        + points @ state.B
        + state.C
    )

    inside = T > 0
    rho = state.phi / np.sqrt(np.where(inside, T, 1))

    return np.where(inside, rho, np.nan)


def peak_density(state, /, dim=None):
    """Density at the minimizer of ``T``; returns ``(x_peak, rho)``.

    The minimizer is ``-A^{-1} B / 2`` when ``A`` is positive definite and
    the origin otherwise.
    """

    if isinstance(state, IsotropicState):
        state = UDState.from_isotropic(state, 1 if dim is None else dim)

    x = np.zeros(state.dim)

    if np.all(np.linalg.eigvalsh(state.A) > 0):
        x = -np.linalg.solve(state.A, state.B) / 2

    return x, reconstruct_fields(state, x).rho


class ExactFamily:
    """Exact self-similar blow-up of the one-dimensional isotropic system."""

    __slots__ = (
        "__C0",
        "__alpha0",
        "__params",
        "__t_star",
    )

    @staticmethod
    def __new__(cls, /, params, alpha0, C0, t_star):
        self = super(ExactFamily, cls).__new__(cls)

        gamma = params.gamma

        if params.dim != 1:
            msg = f"the exact family needs dim = 1, got {params.dim!r}"
            raise ParameterError(msg)
        if not gamma > 1:
            msg = f"the exact family needs gamma > 1, got {gamma!r}"
            raise ParameterError(msg)
        if not -1 < alpha0 < -2 / (gamma + 1):
            msg = (
                f"alpha0 must lie in (-1, {-2 / (gamma + 1)!r}),"
                f" got {alpha0!r}"
            )
            raise ParameterError(msg)
        if not C0 > 0:
            msg = f"C0 must be > 0, got {C0!r}"
            raise ParameterError(msg)

        self.__params = params
        self.__alpha0 = float(alpha0)
        self.__C0 = float(C0)
        self.__t_star = float(t_star)

        return self

    def __getnewargs__(self, /):
        return (self.__params, self.__alpha0, self.__C0, self.__t_star)

    def __repr__(self, /):
        args_repr = ", ".join(map(repr, self.__getnewargs__()))

        return f"ExactFamily({args_repr})"

    def __call__(self, /, t):
        tau = self.__t_star - t

        if not tau > 0:
            msg = f"t must be < t_star = {self.__t_star!r}"
            raise BlowUpReachedError(msg)

        return IsotropicState(
            t,
            self.__alpha0 / tau,
            self.a_coefficient / tau**2,
            self.__C0 * tau ** (-2 * (self.__alpha0 + 1)),
            self.phi_coefficient / tau,
        )

    def derivative(self, /, t):
        """Analytic time derivative ``(phi', alpha1', a', C')``."""

        tau = self.__t_star - t
        alpha0 = self.__alpha0
        c_exponent = -2 * (alpha0 + 1)

        return (
            self.phi_coefficient / tau**2,
            alpha0 / tau**2,
            2 * self.a_coefficient / tau**3,
            -c_exponent * self.__C0 * tau ** (c_exponent - 1),
        )

    @property
    def exponents(self, /):
        """Powers of ``t_star - t`` for ``(phi, alpha1, a, C)``."""

        return (-1.0, -1.0, -2.0, -2 * (self.__alpha0 + 1))

    @property
    def phi_coefficient(self, /):
        params = self.__params

        return -(2 + (params.gamma + 1) * self.__alpha0) / params.lam

    @property
    def a_coefficient(self, /):
        return -self.__alpha0 * (self.__alpha0 + 1)

    @property
    def density_exponent(self, /):
        return self.__alpha0

    @property
    def params(self, /):
        return self.__params

    @property
    def alpha0(self, /):
        return self.__alpha0

    @property
    def C0(self, /):
        return self.__C0

    @property
    def t_star(self, /):
        return self.__t_star


def exact_family_1d(params, alpha0, C0, t_star, /):
    return ExactFamily(params, alpha0, C0, t_star)


def _peak_densities(trajectory, /):
    if trajectory.isotropic:
        phi = trajectory.vectors[:, 0]
        C = trajectory.vectors[:, 3]

        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(C > 0, phi / np.sqrt(np.abs(C)), np.nan)

    densities = []

    for _, state in trajectory:
        try:
            densities.append(peak_density(state)[1])
        except DomainError:
            densities.append(math.nan)

    return np.array(densities)


def density_exponent_fit(trajectory, /, window=0.25, *, tau_floor=None):
    """Exponent ``p`` of ``rho_peak ~ (t_est - t)**p`` near blow-up.

    Samples closer to the estimated blow-up time than ``tau_floor`` are
    dropped (they carry the error of the estimate itself), then the trailing
    ``window`` fraction of the remaining samples is fitted.
    """

    termination = trajectory.termination

    if not isinstance(termination, BlowUpDetected):
        msg = f"trajectory did not blow up ({termination!r})"
        raise InsufficientSamplesError(msg)
    if not 0 < window <= 1:
        msg = f"window must lie in (0, 1], got {window!r}"
        raise ParameterError(msg)

    remaining = termination.remaining
    t_estimate = termination.t_estimate

    if tau_floor is None:
        tau_floor = max(100 * remaining, 1e-10 * max(1.0, abs(t_estimate)))

    tau = (termination.t_last - trajectory.times) + remaining
    rho = _peak_densities(trajectory)

    keep = (tau >= tau_floor) & np.isfinite(rho) & (rho > 0)
    tau = tau[keep]
    rho = rho[keep]

    count = int(math.ceil(window * len(tau)))
    tau = tau[len(tau) - count :]
    rho = rho[len(rho) - count :]

    LOGGER.debug(
        "fitting density exponent over %d samples, tau in [%r, %r]",
        len(tau),
        tau[-1] if len(tau) else math.nan,
        tau[0] if len(tau) else math.nan,
    )

    return power_law_fit(tau, rho)[0]


def anisotropy_diagnostic(trajectory, /):
    """Ratio ``max eig A / min eig A`` for every sample of a planar run.

    A ratio that stays near 1 means concentration in a point; a ratio that
    grows without bound means concentration along a line.
    """

    if trajectory.isotropic or trajectory.dim != 2:
        msg = "anisotropy needs a full-matrix trajectory with dim = 2"
        raise ParameterError(msg)

    ratios = []

    for t, state in trajectory:
        low, high = np.linalg.eigvalsh(state.A)

        if low < 0:
            msg = f"A lost positive semidefiniteness at t={t!r}"
            raise DomainError(msg)

        ratios.append(math.inf if low == 0 else high / low)

    return trajectory.times.copy(), np.array(ratios)


def bounded_initial_data(params, t_star, phi0, /, A0=0.01, C0=1.0):
    """Initial data taken from the blow-up balance with ``t_star < 0``.

    The velocity field is expanding and the forward trajectory stays bounded.
    """

    if not t_star < 0:
        msg = f"t_star must be < 0, got {t_star!r}"
        raise ParameterError(msg)
    if not phi0 > 0:
        msg = f"phi0 must be > 0, got {phi0!r}"
        raise ParameterError(msg)

    n = params.dim
    tau = abs(t_star)

    return IsotropicState(
        0.0,
        -1 / t_star,
        A0 * tau ** (2 * (n - 2)),
        C0 * tau ** (2 * (n - 1)),
        phi0,
    )
