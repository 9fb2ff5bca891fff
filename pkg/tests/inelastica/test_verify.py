#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: 0BSD

import math
import pickle

import pytest

from inelastica import SCENARIOS, VerificationResult, run_scenario
from inelastica.lowlevel import ParameterError


class TestScenarios:
    @pytest.mark.parametrize(
        "name",
        [
            "exact-family-1d",
            "exact-family-1d-perturbed",
            "two-contact",
        ],
    )
    def test_passes(self, /, name):
        result = run_scenario(name)

        assert result.name == name
        assert result.passed, result.failures

    @pytest.mark.parametrize("name", ["uniform-isotropic-2d", "meerson"])
    def test_passes_slow(self, /, name):
        result = run_scenario(name)

        assert result.passed, result.failures

    def test_exact_family_orders(self, /):
        report = run_scenario("exact-family-1d").reports["euler"]

        for order in report.order.values():
            assert 1.7 <= order <= 2.3

    def test_control_orders(self, /):
        report = run_scenario("exact-family-1d-perturbed").reports["euler"]

        for name, order in report.order.items():
            assert order < 0.5
            assert report.max_norms[name] > 1e-6

    def test_two_contact_pieces(self, /):
        result = run_scenario("two-contact")
        report = result.reports["left"]

        assert set(result.reports) == {"left", "right"}
        assert report.max_norms["velocity"] == 0.0
        assert math.isnan(report.order["velocity"])

    def test_names(self, /):
        assert set(SCENARIOS) == {
            "exact-family-1d",
            "exact-family-1d-perturbed",
            "uniform-isotropic-2d",
            "two-contact",
            "meerson",
        }

    def test_unknown(self, /):
        with pytest.raises(ParameterError):
            run_scenario("sod")

    def test_steps(self, /):
        with pytest.raises(ParameterError):
            run_scenario("exact-family-1d", steps=[1e-2])

    def test_custom_steps(self, /):
        result = run_scenario("two-contact", steps=[2e-2, 1e-2])

        assert result.reports["right"].h == 1e-2


class TestVerificationResult:
    def test_failures(self, /):
        result = VerificationResult("demo", {}, ["euler.mass: too big"])

        assert not result.passed
        assert result.as_dict() == {
            "scenario": "demo",
            "passed": False,
            "reports": {},
            "failures": ["euler.mass: too big"],
        }

    def test_as_dict(self, /):
        result = run_scenario("two-contact")
        record = result.as_dict()

        assert record["passed"] is True
        assert record["reports"]["left"]["system"] == "ChaplyginConstrained"
        assert record["reports"]["left"]["h"] == 2.5e-3

    def test_pickling(self, /):
        result = run_scenario("two-contact", steps=[2e-2, 1e-2])
        copy = pickle.loads(pickle.dumps(result))

        # NaN orders compare unequal, so compare the records textually
        assert repr(copy) == repr(result)
        assert repr(copy.as_dict()) == repr(result.as_dict())
