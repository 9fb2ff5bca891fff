#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

import numpy as np

from .lowlevel import BlowUpReachedError, ParameterError

# component order of every vector below: (phi, alpha1, a, C)


class Balance:
    """Leading-order ansatz ``x_i(t) = coefficients[i] * tau**exponents[i]``
    with ``tau = t_star - t``."""

    __slots__ = (
        "__coefficients",
        "__exponents",
        "__t_star",
    )

    @staticmethod
    def __new__(cls, /, exponents, coefficients, t_star):
        self = super(Balance, cls).__new__(cls)

        exponents = np.array(exponents, dtype=float)
        coefficients = np.array(coefficients, dtype=float)

        if exponents.shape != (4,) or coefficients.shape != (4,):
            msg = "a balance has exactly four exponents and coefficients"
            raise ParameterError(msg)

        exponents.flags.writeable = False
        coefficients.flags.writeable = False

        self.__exponents = exponents
        self.__coefficients = coefficients
        self.__t_star = float(t_star)

        return self

    def __getnewargs__(self, /):
        return (self.__exponents, self.__coefficients, self.__t_star)

    def __repr__(self, /):
        return (
            f"Balance({self.__exponents.tolist()!r},"
            f" {self.__coefficients.tolist()!r}, {self.__t_star!r})"
        )

    def __call__(self, /, t):
        tau = self.__t_star - t

        if not tau > 0:
            msg = f"t must be < t_star = {self.__t_star!r}"
            raise BlowUpReachedError(msg)

        return self.__coefficients * tau**self.__exponents

    @property
    def exponents(self, /):
        return self.__exponents

    @property
    def coefficients(self, /):
        return self.__coefficients

    @property
    def t_star(self, /):
        return self.__t_star


class ResonanceReport:
    __slots__ = (
        "__eigenvalues",
        "__matrix",
    )

    @staticmethod
    def __new__(cls, /, eigenvalues, matrix):
        self = super(ResonanceReport, cls).__new__(cls)

        eigenvalues = np.array(eigenvalues, dtype=complex)
        matrix = np.array(matrix, dtype=float)

        eigenvalues.flags.writeable = False
        matrix.flags.writeable = False

        self.__eigenvalues = eigenvalues
        self.__matrix = matrix

        return self

    def __getnewargs__(self, /):
        return (self.__eigenvalues, self.__matrix)

    def __repr__(self, /):
        return f"ResonanceReport({self.__eigenvalues.tolist()!r}, ...)"

    @property
    def eigenvalues(self, /):
        return self.__eigenvalues

    @property
    def matrix(self, /):
        return self.__matrix


def _phi_coefficient(params, /):
    degree = params.dim * (params.gamma + 1) - 2

    if degree == 0:
        msg = "degenerate balance: n * (gamma + 1) = 2"
        raise ParameterError(msg)

    return degree / params.lam


def _exponents(params, /):
    n = params.dim

    return (-1.0, -1.0, 2.0 * (n - 2), 2.0 * (n - 1))


def blowup_balance_isotropic(params, t_star, /, A0=1.0, C0=1.0):
    """The dominant balance of the isotropic system near blow-up."""

    return Balance(
        _exponents(params),
        (_phi_coefficient(params), -1.0, A0, C0),
        t_star,
    )


def printed_balance_isotropic(params, t_star, /, A0=1.0, C0=1.0):
    """Same as :func:`blowup_balance_isotropic` with the opposite sign of
    the ``phi`` coefficient, which does not solve the truncated system."""

    return Balance(
        _exponents(params),
        (-_phi_coefficient(params), -1.0, A0, C0),
        t_star,
    )


def _truncated_field(params, y, /):
    phi, alpha1, a, C = y
    n = params.dim
    gamma = params.gamma
    lam = params.lam

    # the full isotropic system without "-a" in the alpha1 equation
    return np.array([
        -n / 2 * (gamma + 1) * phi * alpha1 - lam / 2 * phi * phi,
        -alpha1 * alpha1,
        -((2 + n * (gamma - 1)) * alpha1 + lam * phi) * a,
        -(n * (gamma - 1) * alpha1 + lam * phi) * C,
    ])


def _truncated_jacobian(params, y, /):
    phi, alpha1, a, C = y
    n = params.dim
    gamma = params.gamma
    lam = params.lam

    g = n * (gamma + 1) / 2
    ka = 2 + n * (gamma - 1)
    kc = n * (gamma - 1)

    return np.array([
        [-g * alpha1 - lam * phi, -g * phi, 0.0, 0.0],
        [0.0, -2 * alpha1, 0.0, 0.0],
        [-lam * a, -ka * a, -(ka * alpha1 + lam * phi), 0.0],
        [-lam * C, -kc * C, 0.0, -(kc * alpha1 + lam * phi)],
    ])


def truncation_residual(params, balance, t, /):
    """Residual of the truncated system evaluated on the ansatz at ``t``."""

    tau = balance.t_star - t

    if not tau > 0:
        msg = f"t must be < t_star = {balance.t_star!r}"
        raise BlowUpReachedError(msg)

    s = balance.exponents
    values = balance(t)

    # d/dt tau**s = -s * tau**(s - 1)
    derivatives = -s * balance.coefficients * tau ** (s - 1)

    return derivatives - _truncated_field(params, values)


def resonances(params, balance, /):
    """Kovalevskaya exponents of the balance.

    ``R = -J - diag(s)`` where ``J`` is the Jacobian of the truncated field at
    the coefficients; the sign accounts for ``tau`` running backwards in
    ``t``. Eigenvalues are sorted by real part.
    """

    jacobian = _truncated_jacobian(params, balance.coefficients)
    matrix = -jacobian - np.diag(balance.exponents)

    eigenvalues = np.linalg.eigvals(matrix)
    eigenvalues = eigenvalues[np.argsort(eigenvalues.real, kind="stable")]

    return ResonanceReport(eigenvalues, matrix)


def resonance_formula(params, /):
    """Closed-form spectrum ``((n(gamma+1) - 2)/2, -1, 0, 0)``."""

    _phi_coefficient(params)

    return np.array([
        (params.dim * (params.gamma + 1) - 2) / 2,
        -1.0,
        0.0,
        0.0,
    ])


def printed_resonances(params, /):
    """The spectrum ``(n(gamma+1) - 2, -1, 0, 0)`` as usually quoted."""

    return np.array([params.dim * (params.gamma + 1) - 2, -1.0, 0.0, 0.0])
