#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: 0BSD

import math
import pickle

import numpy as np
import pytest

from inelastica import (
    IsotropicState,
    ModelParams,
    UDState,
    anisotropy_diagnostic,
    bounded_initial_data,
    density_exponent_fit,
    density_field,
    exact_family_1d,
    integrate,
    ode_count,
    pack,
    peak_density,
    reconstruct_fields,
    rhs_full,
    rhs_isotropic,
    unpack,
)
from inelastica.lowlevel import (
    BlowUpDetected,
    BlowUpReachedError,
    DomainError,
    InsufficientSamplesError,
    IntegrationOptions,
    ParameterError,
    ReachedFinalTime,
)

TIGHT = IntegrationOptions(1e-12, 1e-14)


@pytest.fixture
def family():
    return exact_family_1d(ModelParams(2.0, 1.0, 1), -0.8, 1.0, 1.0)


def planar_state(alpha, A, /, C=1.0, phi=1.0):
    return UDState(0.0, alpha, np.zeros(2), A, np.zeros(2), C, phi)


class TestStates:
    @pytest.mark.parametrize(("dim", "count"), [(1, 6), (2, 13), (3, 23)])
    def test_ode_count(self, /, dim, count):
        assert ode_count(dim) == count

    def test_pack_layout(self, /):
        state = UDState(
            0.5,
            [[1.0, 2.0], [3.0, 4.0]],
            [5.0, 6.0],
            [[7.0, 8.0], [8.0, 9.0]],
            [10.0, 11.0],
            12.0,
            13.0,
        )
        vector = pack(state)

        assert vector.tolist() == [
            *(1.0, 2.0, 3.0, 4.0),
            *(5.0, 6.0),
            *(7.0, 8.0, 8.0, 9.0),
            *(10.0, 11.0),
            *(12.0, 13.0),
        ]

        copy = unpack(vector, 0.5)

        assert repr(copy) == repr(state)

    def test_isotropic_layout(self, /):
        state = IsotropicState(1.0, -1.0, 2.0, 3.0, 4.0)

        assert pack(state).tolist() == [4.0, -1.0, 2.0, 3.0]
        assert isinstance(unpack(pack(state), 1.0), IsotropicState)

    def test_unpack_size(self, /):
        with pytest.raises(ParameterError):
            unpack(np.zeros(7), 0.0)
        with pytest.raises(ParameterError):
            unpack(np.zeros(6), 0.0, dim=2)

    def test_symmetry(self, /):
        with pytest.raises(ParameterError):
            planar_state(np.zeros((2, 2)), [[1.0, 0.5], [0.0, 1.0]])

        state = planar_state(np.zeros((2, 2)), [[1.0, 1e-15], [0.0, 1.0]])

        assert np.array_equal(state.A, state.A.T)

    def test_dimension_mismatch(self, /):
        with pytest.raises(ParameterError):
            UDState(0.0, np.eye(2), [0.0], np.eye(2), [0.0, 0.0], 1.0, 1.0)

    def test_readonly(self, /):
        state = planar_state(np.eye(2), np.eye(2))

        with pytest.raises(ValueError):
            state.alpha[0, 0] = 2.0
        with pytest.raises(AttributeError):
            state.C = 2.0

    def test_pickling(self, /):
        state = planar_state(-np.eye(2), np.eye(2))

        assert repr(pickle.loads(pickle.dumps(state))) == repr(state)

    def test_from_isotropic(self, /):
        state = UDState.from_isotropic(
            IsotropicState(0.0, -1.0, 2.0, 3.0, 4.0),
            3,
        )

        assert np.array_equal(state.alpha, -np.eye(3))
        assert np.array_equal(state.A, 2 * np.eye(3))
        assert state.C == 3.0
        assert state.phi == 4.0


class TestRightHandSide:
    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_isotropic_reduction(self, /, dim):
        params = ModelParams(5 / 3, 0.7, dim)
        state = IsotropicState(0.0, -0.3, 0.4, 1.2, 0.9)
        d_phi, d_alpha1, d_a, d_C = rhs_isotropic(params, state)
        d_alpha, d_beta, d_A, d_B, d_full_C, d_full_phi = rhs_full(
            params,
            UDState.from_isotropic(state, dim),
        )

        eye = np.eye(dim)

        assert d_alpha == pytest.approx(d_alpha1 * eye, abs=1e-15)
        assert d_A == pytest.approx(d_a * eye, abs=1e-15)
        assert np.all(d_beta == 0)
        assert np.all(d_B == 0)
        assert d_full_C == pytest.approx(d_C, rel=1e-14)
        assert d_full_phi == pytest.approx(d_phi, rel=1e-14)

    def test_haff_state(self, /):
        # no deformation: only the cooling of C and phi remains
        params = ModelParams(1.4, 2.0, 1)
        state = IsotropicState(0.0, 0.0, 0.0, 3.0, 0.5)

        assert rhs_isotropic(params, state) == pytest.approx(
            (-0.25, 0.0, 0.0, -3.0),
        )

    def test_nonpositive_phi(self, /):
        params = ModelParams(1.4, 2.0, 2)

        with pytest.raises(DomainError):
            rhs_isotropic(params, IsotropicState(0.0, 0.0, 0.0, 1.0, 0.0))
        with pytest.raises(DomainError):
            rhs_full(params, planar_state(np.eye(2), np.eye(2), phi=-1.0))


class TestFields:
    def test_reconstruct(self, /):
        state = UDState(
            0.0,
            [[1.0, 0.0], [0.0, -1.0]],
            [0.5, 0.0],
            np.eye(2),
            [0.0, 1.0],
            4.0,
            2.0,
        )
        sample = reconstruct_fields(state, [1.0, 2.0])

        assert sample.T == 1.0 + 4.0 + 2.0 + 4.0
        assert sample.rho == pytest.approx(2.0 / math.sqrt(11.0))
        assert sample.v.tolist() == [1.5, -2.0]

    def test_reconstruct_outside(self, /):
        state = planar_state(np.zeros((2, 2)), np.eye(2), C=-1.0)

        with pytest.raises(DomainError):
            reconstruct_fields(state, [0.0, 0.0])
        with pytest.raises(ParameterError):
            reconstruct_fields(state, [0.0, 0.0, 0.0])

    def test_density_field(self, /):
        state = UDState(0.0, [[0.0]], [0.0], [[1.0]], [0.0], -1.0, 3.0)
        rho = density_field(state, [0.0, 2.0, -3.0])

        assert math.isnan(rho[0])
        assert rho[1] == pytest.approx(3.0 / math.sqrt(3.0))
        assert rho[2] == pytest.approx(3.0 / math.sqrt(8.0))

    def test_density_field_planar(self, /):
        state = planar_state(np.zeros((2, 2)), np.eye(2), phi=2.0)
        axis = np.linspace(-1.0, 1.0, 5)
        points = np.stack(np.meshgrid(axis, axis), axis=-1)
        rho = density_field(state, points)

        assert rho.shape == (5, 5)
        assert rho[2, 2] == 2.0
        assert rho[0, 0] == pytest.approx(2.0 / math.sqrt(3.0))

    def test_peak_density(self, /):
        state = UDState(0.0, [[0.0]], [0.0], [[1.0]], [-4.0], 5.0, 2.0)
        x, rho = peak_density(state)

        assert x.tolist() == [2.0]
        assert rho == 2.0

    def test_peak_density_isotropic(self, /):
        x, rho = peak_density(IsotropicState(0.0, 0.0, 1.0, 4.0, 2.0), dim=2)

        assert x.tolist() == [0.0, 0.0]
        assert rho == 1.0


class TestExactFamily:
    def test_coefficients(self, /, family):
        assert family.phi_coefficient == pytest.approx(0.4)
        assert family.a_coefficient == pytest.approx(0.16)
        assert family.density_exponent == -0.8
        assert family.exponents == pytest.approx((-1.0, -1.0, -2.0, -0.4))

    def test_substitution(self, /, family):
        for t in np.linspace(0.0, 0.99, 100):
            expected = family.derivative(t)
            actual = rhs_isotropic(family.params, family(t))

            for value, reference in zip(actual, expected):
                assert abs(value - reference) <= 1e-12 * max(1, abs(reference))

    def test_density_profile(self, /, family):
        # rho(0, t) ~ (t_star - t)**alpha0
        state = family(0.9)

        assert peak_density(state)[1] == pytest.approx(
            0.4 * 0.1**-0.8,
            rel=1e-12,
        )

    def test_integration(self, /, family):
        options = IntegrationOptions(1e-13, 1e-15)
        trajectory = integrate(family.params, family(0.0), 0.999, options)
        expected = pack(family(0.999))

        assert trajectory.termination == ReachedFinalTime(0.999)
        assert pack(trajectory.final) == pytest.approx(expected, rel=1e-8)

    def test_density_exponent(self, /, family):
        trajectory = integrate(family.params, family(0.0), 2.0, TIGHT)

        assert isinstance(trajectory.termination, BlowUpDetected)
        t_estimate = trajectory.termination.t_estimate

        assert t_estimate == pytest.approx(1.0, abs=1e-6)
        assert density_exponent_fit(trajectory) == pytest.approx(
            -0.8,
            rel=0.02,
        )

    def test_beyond_blowup(self, /, family):
        with pytest.raises(BlowUpReachedError):
            family(1.0)

    @pytest.mark.parametrize(
        "args",
        [
            (ModelParams(2.0, 1.0, 2), -0.8, 1.0, 1.0),
            (ModelParams(1.0, 1.0, 1), -0.8, 1.0, 1.0),
            (ModelParams(2.0, 1.0, 1), -0.5, 1.0, 1.0),
            (ModelParams(2.0, 1.0, 1), -1.0, 1.0, 1.0),
            (ModelParams(2.0, 1.0, 1), -0.8, 0.0, 1.0),
        ],
    )
    def test_window(self, /, args):
        with pytest.raises(ParameterError):
            exact_family_1d(*args)


class TestIntegrate:
    def test_no_deformation(self, /):
        params = ModelParams(5 / 3, 2.0, 2)
        trajectory = integrate(
            params,
            IsotropicState(0.0, 0.0, 0.0, 1.0, 1.0),
            3.0,
            TIGHT,
        )
        final = trajectory.final

        # phi = 1 / (t + 1) and C = phi**2 for this data
        assert final.alpha1 == 0.0
        assert final.a == 0.0
        assert final.phi == pytest.approx(0.25, rel=1e-10)
        assert final.C == pytest.approx(0.0625, rel=1e-10)

    def test_isotropic_blowup(self, /):
        params = ModelParams(5 / 3, 1.0, 2)
        trajectory = integrate(
            params,
            IsotropicState(0.0, -1.0, 1.0, 1.0, 1.0),
            10.0,
        )

        assert isinstance(trajectory.termination, BlowUpDetected)
        assert density_exponent_fit(trajectory) == pytest.approx(
            -2.0,
            rel=0.1,
        )

    def test_trajectory_access(self, /):
        params = ModelParams(5 / 3, 1.0, 2)
        trajectory = integrate(
            params,
            UDState.isotropic(0.0, 0.1, 0.0, 1.0, 1.0, 2),
            1.0,
        )
        times = [t for t, _ in trajectory]

        assert len(trajectory) == len(times)
        assert times == trajectory.times.tolist()
        assert trajectory.state(0.5).t == 0.5
        assert isinstance(trajectory.final, UDState)
        assert trajectory.norms.shape == (len(trajectory),)

    def test_validation(self, /):
        params = ModelParams(5 / 3, 1.0, 2)
        state = IsotropicState(0.0, 0.0, 0.0, 1.0, 1.0)

        with pytest.raises(ParameterError):
            integrate(params, state, 0.0)
        with pytest.raises(ParameterError):
            integrate(
                ModelParams(5 / 3, 1.0, 3),
                planar_state(np.eye(2), np.eye(2)),
                1.0,
            )
        with pytest.raises(DomainError):
            integrate(params, IsotropicState(0.0, 0.0, 0.0, 1.0, 0.0), 1.0)

    def test_no_fit_without_blowup(self, /):
        params = ModelParams(5 / 3, 1.0, 2)
        trajectory = integrate(
            params,
            IsotropicState(0.0, 0.0, 0.0, 1.0, 1.0),
            1.0,
        )

        with pytest.raises(InsufficientSamplesError):
            density_exponent_fit(trajectory)

    @pytest.mark.parametrize("t_star", [-0.5, -1.0, -2.0])
    def test_bounded(self, /, t_star):
        params = ModelParams(5 / 3, 1.0, 2)
        initial = bounded_initial_data(params, t_star, 1.0)
        trajectory = integrate(params, initial, 100.0)

        assert initial.alpha1 == pytest.approx(-1 / t_star)
        assert trajectory.termination == ReachedFinalTime(100.0)
        assert np.max(trajectory.norms) <= 10 * trajectory.norms[0]

    def test_bounded_validation(self, /):
        params = ModelParams(5 / 3, 1.0, 2)

        with pytest.raises(ParameterError):
            bounded_initial_data(params, 1.0, 1.0)
        with pytest.raises(ParameterError):
            bounded_initial_data(params, -1.0, 0.0)


class TestAnisotropy:
    def test_point_concentration(self, /):
        params = ModelParams(5 / 3, 1.0, 2)
        trajectory = integrate(
            params,
            planar_state(-np.eye(2), np.eye(2)),
            10.0,
        )
        _, ratios = anisotropy_diagnostic(trajectory)

        assert isinstance(trajectory.termination, BlowUpDetected)
        assert np.all(ratios >= 1)
        assert np.all(ratios <= 1.05)

    def test_line_concentration(self, /):
        params = ModelParams(5 / 3, 1.0, 2)
        trajectory = integrate(
            params,
            planar_state(np.diag([-1.0, 0.0]), np.eye(2)),
            10.0,
        )
        times, ratios = anisotropy_diagnostic(trajectory)

        assert isinstance(trajectory.termination, BlowUpDetected)
        assert len(times) == len(ratios)
        assert ratios[0] == 1.0
        assert ratios[-1] > 10

    def test_requires_planar_full(self, /):
        params = ModelParams(5 / 3, 1.0, 2)
        trajectory = integrate(
            params,
            IsotropicState(0.0, 0.0, 0.0, 1.0, 1.0),
            1.0,
        )

        with pytest.raises(ParameterError):
            anisotropy_diagnostic(trajectory)
