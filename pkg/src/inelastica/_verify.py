#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

import math

from logging import getLogger

import numpy as np

from ._core import ModelParams
from ._meerson import MeersonParams, lagrangian_residual
from ._residual import (
    FieldSet,
    convergence_order,
    fieldset_from_two_contact,
    fieldset_from_uniform,
    residual_chaplygin,
    residual_euler,
)
from ._riemann import RiemannData, two_contact_solution
from ._uniform import IsotropicState, exact_family_1d, integrate
from .lowlevel import IntegrationOptions, ParameterError

LOGGER = getLogger(__name__)

STEPS_DEFAULT = (1e-2, 5e-3, 2.5e-3)

# observed orders of a second-order stencil on a smooth solution
ORDER_WINDOW = (1.7, 2.3)

# observed orders of a stencil applied to fields that are not a solution
CONTROL_CEILING = 0.5

# a residual this small counts as an exact zero
EXACT_RESIDUAL = 1e-10


class VerificationResult:
    """Reports of one scenario with its judged failures."""

    __slots__ = (
        "__failures",
        "__name",
        "__reports",
    )

    @staticmethod
    def __new__(cls, /, name, reports, failures):
        self = super(VerificationResult, cls).__new__(cls)

        self.__name = name
        self.__reports = dict(reports)
        self.__failures = tuple(failures)

        return self

    def __getnewargs__(self, /):
        return (self.__name, self.__reports, self.__failures)

    def __repr__(self, /):
        return (
            f"<VerificationResult {self.__name}"
            f" failures={len(self.__failures)}>"
        )

    def as_dict(self, /):
        return {
            "scenario": self.__name,
            "passed": self.passed,
            "reports": {
                label: report.as_dict()
                for label, report in self.__reports.items()
            },
            "failures": list(self.__failures),
        }

    @property
    def name(self, /):
        return self.__name

    @property
    def reports(self, /):
        return dict(self.__reports)

    @property
    def failures(self, /):
        return self.__failures

    @property
    def passed(self, /):
        return not self.__failures


def _order_failures(label, report, /):
    failures = []
    low, high = ORDER_WINDOW

    for name, order in report.order.items():
        if math.isnan(order):
            if report.max_norms[name] > EXACT_RESIDUAL:
                failures.append(f"{label}.{name}: no order, residual too big")
        elif not low <= order <= high:
            failures.append(
                f"{label}.{name}: order {order:.3f} outside [{low}, {high}]"
            )

    return failures


def _control_failures(label, report, /):
    failures = []

    for name, order in report.order.items():
        if not order < CONTROL_CEILING:
            failures.append(
                f"{label}.{name}: control order {order:.3f} is not below"
                f" {CONTROL_CEILING}"
            )

    return failures


def _study(check, steps, /):
    return convergence_order([check(h) for h in steps])


def _exact_family_fields(perturbed, /):
    params = ModelParams(2.0, 1.0, 1)
    family = exact_family_1d(params, -0.8, 1.0, 1.0)

    def sample(t, x):
        state = family(t)

        return state.C + state.a * x[0] ** 2, state.alpha1 * x[0], state.phi

    def rho(t, x):
        T, _, phi = sample(t, x)
        value = phi / math.sqrt(T)

        return value * (1 + 0.01 * t) if perturbed else value

    def v(t, x):
        return [sample(t, x)[1]]

    def T(t, x):
        return sample(t, x)[0]

    return params, FieldSet(rho, v, T, 1, t_range=(0.0, family.t_star))


def _exact_family(steps, /, perturbed=False):
    params, fields = _exact_family_fields(perturbed)
    grid = (np.linspace(0.1, 0.8, 8), np.linspace(-1.0, 1.0, 9))
    report = _study(
        lambda h: residual_euler(fields, params, grid, h),
        steps,
    )

    if perturbed:
        return {"euler": report}, _control_failures("euler", report)

    return {"euler": report}, _order_failures("euler", report)


def _uniform_isotropic(steps, /):
    params = ModelParams(5 / 3, 1.0, 2)
    initial = IsotropicState(0.0, -0.5, 0.1, 1.0, 1.0)
    options = IntegrationOptions(rtol=1e-12, atol=1e-14)
    trajectory = integrate(params, initial, 1.0, options)
    fields = fieldset_from_uniform(trajectory)

    xs = np.linspace(-0.5, 0.5, 3)
    points = np.array([(a, b) for a in xs for b in xs])
    grid = (np.linspace(0.2, 0.8, 4), points)
    report = _study(
        lambda h: residual_euler(fields, params, grid, h),
        steps,
    )

    return {"euler": report}, _order_failures("euler", report)


def _two_contact(steps, /):
    data = RiemannData(0.0, 1.0, 1.0, 1.0)
    solution = two_contact_solution(data)
    params = ModelParams(1.0, data.lam, 1)
    grid = (np.linspace(0.5, 5.0, 10), np.linspace(-1.0, 1.0, 5))

    reports = {}
    failures = []

    for piece in ("left", "right"):
        fields = fieldset_from_two_contact(solution, piece)
        report = _study(
            lambda h, fields=fields: residual_chaplygin(
                fields,
                params,
                grid,
                h,
                data.phi,
            ),
            steps,
        )
        reports[piece] = report
        failures.extend(_order_failures(piece, report))

    return reports, failures


def _meerson(steps, /):
    mp = MeersonParams(1.0, 1.0)
    grid = (np.linspace(-1.0, 1.0, 9), np.linspace(0.1, 0.5, 5))
    report = _study(lambda h: lagrangian_residual(mp, grid, h), steps)

    return {"lagrangian": report}, _order_failures("lagrangian", report)


SCENARIOS = {
    "exact-family-1d": _exact_family,
    "exact-family-1d-perturbed": (
        lambda steps: _exact_family(steps, perturbed=True)
    ),
    "uniform-isotropic-2d": _uniform_isotropic,
    "two-contact": _two_contact,
    "meerson": _meerson,
}


def run_scenario(name, /, steps=STEPS_DEFAULT):
    """Run a built-in residual study and judge its convergence orders."""

    try:
        scenario = SCENARIOS[name]
    except KeyError:
        msg = f"unknown scenario {name!r}, expected one of {sorted(SCENARIOS)}"
        raise ParameterError(msg) from None

    if len(steps) < 2:
        msg = "a residual study needs at least two step sizes"
        raise ParameterError(msg)

    reports, failures = scenario(tuple(steps))

    LOGGER.info("scenario %s: %d failures", name, len(failures))

    return VerificationResult(name, reports, failures)
