#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: 0BSD

import math
import pickle

import numpy as np
import pytest

from scipy.integrate import quad

from inelastica import (
    DelayedConcentration,
    DeltaFront,
    ImmediateConcentration,
    PiecewiseSolution,
    RiemannData,
    TwoContactsForever,
    classify,
    concentration_onset,
    contact_meeting_time,
    delta_position,
    delta_theta,
    doublestar_time,
    from_riemann_invariants,
    front_speed_limit,
    jumps,
    mass_balance,
    riemann_invariants,
    side_densities,
    solve,
    two_contact_solution,
)
from inelastica.lowlevel import DomainError, ParameterError


class TestRiemannData:
    def test_defaults(self, /):
        data = RiemannData(0.0, 1.0, 1.0, 4.0)

        assert data.lam == 2.0
        assert data.c == 1.0
        assert data.wR == 2.0
        assert data.phi(0.0) == 1.0
        assert data.phi(1.0) == 0.5

    @pytest.mark.parametrize(
        "args",
        [
            (0.0, 0.0, 0.0, 1.0),
            (0.0, 1.0, 0.0, -1.0),
            (0.0, 1.0, 0.0, 1.0, 0.0),
            (0.0, 1.0, 0.0, 1.0, 2.0, -1.0),
        ],
    )
    def test_validation(self, /, args):
        with pytest.raises(ParameterError):
            RiemannData(*args)

    def test_value_semantics(self, /):
        data = RiemannData(1.0, 2.0, 3.0, 4.0, 0.5, 2.0)

        assert pickle.loads(pickle.dumps(data)) == data
        assert hash(data) == hash(RiemannData(1.0, 2.0, 3.0, 4.0, 0.5, 2.0))
        assert data != RiemannData(1.0, 2.0, 3.0, 4.0)

    def test_cooling_integral(self, /):
        data = RiemannData(0.0, 1.0, 0.0, 1.0, 1.5, 0.7)
        t = np.linspace(0.0, 5.0, 11)
        # trapezoids on a fine grid
        fine = np.linspace(0.0, 5.0, 200_001)
        values = data.cooling(fine)
        cumulative = np.concatenate([
            [0.0],
            np.cumsum((values[1:] + values[:-1]) / 2 * np.diff(fine)),
        ])

        assert data.cooling_integral(t) == pytest.approx(
            cumulative[::20_000],
            abs=1e-9,
        )


class TestInvariants:
    def test_values(self, /):
        assert riemann_invariants(1.0, 4.0) == (-1.0, 3.0)
        assert from_riemann_invariants(-1.0, 3.0) == (1.0, 4.0)

    def test_arrays(self, /):
        s, r = riemann_invariants(np.array([0.0, 1.0]), np.array([1.0, 9.0]))

        assert s.tolist() == [-1.0, -2.0]
        assert r.tolist() == [1.0, 4.0]

    def test_domain(self, /):
        with pytest.raises(DomainError):
            riemann_invariants(0.0, -1.0)
        with pytest.raises(DomainError):
            from_riemann_invariants(1.0, 0.0)


class TestClassify:
    def test_diverging(self, /):
        data = RiemannData(0.0, 1.0, 1.0, 1.0)

        assert classify(data) == TwoContactsForever()
        assert doublestar_time(data) == math.inf
        assert contact_meeting_time(data) == math.inf

    def test_immediate(self, /):
        assert classify(RiemannData(3.0, 1.0, 0.0, 1.0)).name == (
            "ImmediateConcentration"
        )

        # the boundary case concentrates at once
        boundary = RiemannData(2.0, 1.0, 0.0, 1.0)

        assert classify(boundary) == ImmediateConcentration()
        assert doublestar_time(boundary) == 0.0

    def test_delayed(self, /):
        data = RiemannData(1.0, 1.0, 0.0, 1.0)
        regime = classify(data)

        assert isinstance(regime, DelayedConcentration)
        assert regime.t_doublestar == pytest.approx(1.0)
        assert regime.t_star > regime.t_doublestar

        solution = two_contact_solution(data)

        assert solution.x_minus(regime.t_star) == pytest.approx(
            solution.x_plus(regime.t_star),
            abs=1e-10,
        )

    def test_delayed_scaling(self, /):
        # t** = (2 c / lam) ((wL + wR) / (vL - vR) - 1)
        data = RiemannData(1.0, 4.0, 0.0, 1.0, 0.5, 2.0)

        assert doublestar_time(data) == pytest.approx(16.0)

    def test_regime_validation(self, /):
        with pytest.raises(ParameterError):
            DelayedConcentration(2.0, 1.0)

    def test_regime_pickling(self, /):
        regime = DelayedConcentration(1.0, 2.5)

        assert pickle.loads(pickle.dumps(regime)) == regime
        assert repr(regime) == "DelayedConcentration(1.0, 2.5)"


class TestTwoContacts:
    def test_middle_state(self, /):
        solution = two_contact_solution(RiemannData(0.0, 1.0, 1.0, 1.0))

        assert solution.middle(0.0) == pytest.approx((0.5, 2.25))

    def test_contacts(self, /):
        solution = two_contact_solution(RiemannData(0.0, 1.0, 1.0, 1.0))

        assert solution.x_minus(1.0) == pytest.approx(-math.log(2.0))
        assert solution.x_plus(1.0) == pytest.approx(1.0 + math.log(2.0))

    def test_evaluate(self, /):
        solution = two_contact_solution(RiemannData(0.0, 1.0, 1.0, 1.0))
        v, T, rho = solution.evaluate(0.5, [-5.0, 0.2, 5.0])

        assert v.tolist() == [0.0, 0.5, 1.0]
        assert T == pytest.approx([4 / 9, (7 / 6) ** 2, 4 / 9])
        assert rho[0] == pytest.approx(1.0)
        assert rho[2] == pytest.approx(1.0)

    def test_plateau_defect(self, /):
        equal = two_contact_solution(RiemannData(0.0, 1.0, 0.0, 1.0))
        unequal = two_contact_solution(RiemannData(0.0, 1.0, 1.0, 1.0))

        assert equal.plateau_defect(0.5) == pytest.approx((0.0, 0.0))
        assert abs(unequal.plateau_defect(0.5)[0]) > 0.1

    def test_plateau_mass_rate(self, /):
        def separating(t):
            return -2 * (t + 2 * math.log1p(t)) / (t + 3) ** 2

        def approaching(t):
            return 2 * (2 * math.log1p(t) - t) / (1 - t) ** 2

        equal = two_contact_solution(RiemannData(0.0, 1.0, 0.0, 1.0))
        apart = two_contact_solution(RiemannData(0.0, 1.0, 1.0, 1.0))
        closing = two_contact_solution(RiemannData(1.0, 1.0, 0.0, 1.0))

        for t in (0.0, 0.5, 0.9):
            assert equal.plateau_mass_rate(t) == 0.0
            assert apart.plateau_mass_rate(t) == pytest.approx(separating(t))
            assert closing.plateau_mass_rate(t) == pytest.approx(
                approaching(t),
            )

        with pytest.raises(DomainError):
            closing.plateau_mass_rate(1.0)

    def test_pickling(self, /):
        solution = two_contact_solution(RiemannData(0.0, 1.0, 1.0, 4.0))
        copy = pickle.loads(pickle.dumps(solution))

        assert repr(copy) == repr(solution)
        assert copy.middle(0.5) == solution.middle(0.5)

    def test_validity(self, /):
        solution = two_contact_solution(RiemannData(1.0, 1.0, 0.0, 1.0))

        assert solution.valid_until == pytest.approx(1.0)
        assert solution.middle(1.0)[1] == pytest.approx(0.0, abs=1e-15)

        with pytest.raises(DomainError):
            solution.evaluate(1.5, [0.0])

    def test_side_densities(self, /):
        data = RiemannData(0.0, 1.0, 1.0, 4.0)

        for t in (0.0, 1.0, 10.0):
            assert side_densities(data, t) == pytest.approx((1.0, 0.5))


class TestDeltaFront:
    def test_equal_densities(self, /):
        data = RiemannData(3.0, 1.0, 0.0, 1.0)
        front = DeltaFront(data)
        t = np.linspace(0.0, 2.0, 9)

        assert front.theta(0.0) == 0.0
        assert front.theta(t) == pytest.approx(3.0 * t)
        assert front.position(t) == pytest.approx(1.5 * t)
        assert front.speed(0.0) == pytest.approx(1.5)
        assert front.speed(1.0) == pytest.approx(1.5)
        assert front.psi(2.0) == pytest.approx(9.0)
        assert front_speed_limit(data) == pytest.approx(1.5)

    def test_jumps(self, /):
        bracket = jumps(RiemannData(3.0, 1.0, 0.0, 4.0), 0.0)

        assert bracket.rho == pytest.approx(-0.5)
        assert bracket.rho_v == pytest.approx(-3.0)
        assert bracket.rho_v2 == pytest.approx(-9.0)
        assert bracket.tau == pytest.approx(1.0)
        assert bracket.v == -3.0
        assert bracket.w == 1.0

    def test_speed_matches_position(self, /):
        front = DeltaFront(RiemannData(2.0, 1.0, 0.0, 4.0))
        h = 1e-5

        for t in (0.1, 0.7, 3.0):
            difference = (front.position(t + h) - front.position(t - h)) / (
                2 * h
            )

            assert front.speed(t) == pytest.approx(difference, rel=1e-6)

    def test_onset_speed(self, /):
        front = DeltaFront(RiemannData(2.0, 1.0, 0.0, 4.0))

        assert front.speed(0.0) == pytest.approx(
            5.0 / (math.sqrt(1.5) + 2.0),
        )
        assert front.speed(0.0) == pytest.approx(front.speed(1e-7), rel=1e-5)

    def test_speed_limit(self, /):
        data = RiemannData(2.0, 1.0, 0.0, 4.0)
        front = DeltaFront(data)
        limit = front_speed_limit(data)

        assert limit == pytest.approx(2.0 / (1.0 + math.sqrt(0.5)))
        assert front.speed(1e6) == pytest.approx(limit, rel=1e-4)

    def test_concentration_condition(self, /):
        with pytest.raises(DomainError):
            DeltaFront(RiemannData(1.0, 9.0, 0.5, 1.0))

    def test_before_birth(self, /):
        front = DeltaFront(RiemannData(3.0, 1.0, 0.0, 1.0), 1.0, 0.5)

        with pytest.raises(DomainError):
            front.theta(0.5)

    def test_helpers(self, /):
        data = RiemannData(3.0, 1.0, 0.0, 1.0)

        assert delta_theta(data, 0.0, 1.0) == pytest.approx(3.0)
        assert delta_position(data, 0.0, 1.0, 2.0) == pytest.approx(3.5)

    def test_onset_time(self, /):
        assert concentration_onset(RiemannData(3.0, 1.0, 0.0, 1.0)) == 0.0
        assert concentration_onset(RiemannData(1.0, 4.0, 0.0, 1.0)) == 0.0
        assert concentration_onset(
            RiemannData(1.0, 9.0, 0.5, 1.0),
        ) == pytest.approx(3.0)
        assert concentration_onset(RiemannData(0.0, 1.0, 1.0, 1.0)) == (
            math.inf
        )

    def test_pickling(self, /):
        front = DeltaFront(RiemannData(3.0, 1.0, 0.0, 1.0))
        copy = pickle.loads(pickle.dumps(front))

        assert copy.theta(1.0) == front.theta(1.0)

    def test_jumps_pickling(self, /):
        bracket = jumps(RiemannData(3.0, 1.0, 0.0, 4.0), 0.5)
        copy = pickle.loads(pickle.dumps(bracket))

        assert repr(copy) == repr(bracket)
        assert copy.onset_coefficient == bracket.onset_coefficient


class TestSolve:
    def test_two_contacts(self, /):
        solution = solve(RiemannData(0.0, 1.0, 1.0, 1.0))

        assert solution.regime == TwoContactsForever()
        assert solution.delta is None
        assert solution.point_masses(1.0) == []
        assert len(solution.fronts(1.0)) == 2
        assert not solution.transitional(1.0)

    def test_immediate(self, /):
        solution = solve(RiemannData(3.0, 1.0, 0.0, 1.0))

        assert solution.two_contact is None
        assert solution.point_masses(1.0) == [
            (pytest.approx(1.5), pytest.approx(3.0)),
        ]

    def test_delayed(self, /):
        solution = solve(RiemannData(1.0, 1.0, 0.0, 1.0))
        t_star = solution.regime.t_star

        assert len(solution.fronts(0.5)) == 2
        assert solution.point_masses(0.5) == []

        # the front is born at the middle of the collapsed plateau
        assert solution.delta.t0 == pytest.approx(1.0)
        assert solution.delta.x0 == pytest.approx(0.5)
        assert solution.fronts(1.5) == [pytest.approx(0.75)]
        assert solution.point_masses(1.5)[0][1] == pytest.approx(0.5)

        assert solution.transitional(1.5)
        assert not solution.transitional(t_star + 0.1)

    @pytest.mark.parametrize(
        "data",
        [
            RiemannData(0.0, 1.0, 1.0, 1.0),
            RiemannData(3.0, 1.0, 0.0, 1.0),
            RiemannData(1.0, 1.0, 0.0, 1.0),
        ],
    )
    def test_pickling(self, /, data):
        solution = solve(data)
        copy = pickle.loads(pickle.dumps(solution))

        assert repr(copy) == repr(solution)
        assert copy.regime == solution.regime
        assert copy.fronts(1.5) == solution.fronts(1.5)
        assert copy.point_masses(1.5) == solution.point_masses(1.5)

    def test_negative_time(self, /):
        solution = solve(RiemannData(0.0, 1.0, 1.0, 1.0))

        with pytest.raises(DomainError):
            solution.evaluate(-1.0, [0.0])

    def test_mismatch(self, /):
        data = RiemannData(0.0, 1.0, 1.0, 1.0)

        with pytest.raises(ParameterError):
            PiecewiseSolution(data, TwoContactsForever())
        with pytest.raises(ParameterError):
            PiecewiseSolution(
                data,
                ImmediateConcentration(),
                two_contact_solution(data),
            )


class TestMassBalance:
    @pytest.mark.parametrize(
        "data",
        [
            RiemannData(3.0, 1.0, 0.0, 1.0),
            RiemannData(4.0, 1.0, 0.0, 4.0),
        ],
    )
    def test_concentration_conserves_mass(self, /, data):
        solution = solve(data)
        times, defects = mass_balance(solution, 20.0, 2.0, samples=21)

        assert len(times) == 21
        assert np.max(np.abs(defects)) <= 1e-10

    @staticmethod
    def plateau_drift(solution, times, /):
        plateau = solution.two_contact

        return np.array(
            [quad(plateau.plateau_mass_rate, 0.0, t)[0] for t in times],
        )

    def test_two_contacts_drift(self, /):
        # the plateau thins out while the contacts separate
        solution = solve(RiemannData(0.0, 1.0, 1.0, 1.0))
        times, defects = mass_balance(solution, 20.0, 5.0, samples=11)

        assert defects == pytest.approx(
            self.plateau_drift(solution, times),
            rel=1e-8,
            abs=1e-10,
        )
        assert np.all(defects[1:] < 0)
        assert np.all(np.diff(defects) < 0)
        assert defects[-1] == pytest.approx(-1.44, abs=0.02)

    def test_delayed_drift(self, /):
        # before the birth of the front the plateau mass diverges as its
        # temperature vanishes at t = 1
        solution = solve(RiemannData(1.0, 1.0, 0.0, 1.0))
        times, defects = mass_balance(solution, 20.0, 0.9, samples=10)

        assert defects == pytest.approx(
            self.plateau_drift(solution, times),
            rel=1e-8,
            abs=1e-10,
        )
        assert np.all(np.diff(defects) > 0)
        assert defects[-1] > 5

    def test_delayed_after_birth(self, /):
        # the massless front drops the plateau: the defect jumps to
        # (rhoL + rhoR) (x_+ - x_-) / 2 - 2 int_0^1 phi = -1 and stays there
        solution = solve(RiemannData(1.0, 1.0, 0.0, 1.0))
        times, defects = mass_balance(solution, 20.0, 3.0, samples=25)
        born = times >= 1.0

        assert defects[born] == pytest.approx(np.full(born.sum(), -1.0))

    def test_front_escapes(self, /):
        solution = solve(RiemannData(3.0, 1.0, 0.0, 1.0))

        with pytest.raises(DomainError):
            mass_balance(solution, 1.0, 2.0)

    def test_validation(self, /):
        solution = solve(RiemannData(3.0, 1.0, 0.0, 1.0))

        with pytest.raises(ParameterError):
            mass_balance(solution, 0.0, 1.0)
