#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

from . import (  # noqa: F401
    lowlevel,
)
from ._balance import (
    Balance as Balance,
    ResonanceReport as ResonanceReport,
    blowup_balance_isotropic as blowup_balance_isotropic,
    printed_balance_isotropic as printed_balance_isotropic,
    printed_resonances as printed_resonances,
    resonance_formula as resonance_formula,
    resonances as resonances,
    truncation_residual as truncation_residual,
)
from ._characteristics import (
    CharacteristicsResult as CharacteristicsResult,
    characteristics_oracle as characteristics_oracle,
    contact_paths as contact_paths,
)
from ._core import (
    GasSample as GasSample,
    HaffParams as HaffParams,
    ModelParams as ModelParams,
    R as R,
    constraint_z as constraint_z,
    haff_temperature as haff_temperature,
    integrate_haff as integrate_haff,
    phi_closed_form as phi_closed_form,
    phi_from_data as phi_from_data,
)
from ._meerson import (
    EulerLagrangeMap as EulerLagrangeMap,
    LagrangianField as LagrangianField,
    MeersonParams as MeersonParams,
    blowup_time as blowup_time,
    density_lagrangian as density_lagrangian,
    euler_lagrange_maps as euler_lagrange_maps,
    eulerian_density as eulerian_density,
    eulerian_mass as eulerian_mass,
    fieldset_from_meerson as fieldset_from_meerson,
    global_blowup_time as global_blowup_time,
    lagrangian_residual as lagrangian_residual,
    pressure as pressure,
    specific_volume as specific_volume,
    temperature_lagrangian as temperature_lagrangian,
    velocity_field as velocity_field,
)
from ._residual import (
    CHAPLYGIN_CONSERVATIVE as CHAPLYGIN_CONSERVATIVE,
    CHAPLYGIN_CONSTRAINED as CHAPLYGIN_CONSTRAINED,
    EULER_GRANULAR as EULER_GRANULAR,
    FieldSet as FieldSet,
    LAGRANGIAN as LAGRANGIAN,
    ResidualReport as ResidualReport,
    convergence_order as convergence_order,
    fieldset_from_two_contact as fieldset_from_two_contact,
    fieldset_from_uniform as fieldset_from_uniform,
    lagrangian_equations as lagrangian_equations,
    lagrangian_report as lagrangian_report,
    residual_chaplygin as residual_chaplygin,
    residual_euler as residual_euler,
)
from ._riemann import (
    DelayedConcentration as DelayedConcentration,
    DeltaFront as DeltaFront,
    ImmediateConcentration as ImmediateConcentration,
    Jumps as Jumps,
    PiecewiseSolution as PiecewiseSolution,
    RiemannData as RiemannData,
    TwoContactSolution as TwoContactSolution,
    TwoContactsForever as TwoContactsForever,
    classify as classify,
    concentration_onset as concentration_onset,
    contact_meeting_time as contact_meeting_time,
    delta_position as delta_position,
    delta_theta as delta_theta,
    doublestar_time as doublestar_time,
    from_riemann_invariants as from_riemann_invariants,
    front_speed_limit as front_speed_limit,
    jumps as jumps,
    mass_balance as mass_balance,
    riemann_invariants as riemann_invariants,
    side_densities as side_densities,
    side_states as side_states,
    solve as solve,
    two_contact_solution as two_contact_solution,
)
from ._scan import (
    blowup_scan as blowup_scan,
)
from ._uniform import (
    ExactFamily as ExactFamily,
    IsotropicState as IsotropicState,
    Trajectory as Trajectory,
    UDState as UDState,
    anisotropy_diagnostic as anisotropy_diagnostic,
    bounded_initial_data as bounded_initial_data,
    density_exponent_fit as density_exponent_fit,
    density_field as density_field,
    exact_family_1d as exact_family_1d,
    integrate as integrate,
    ode_count as ode_count,
    pack as pack,
    peak_density as peak_density,
    reconstruct_fields as reconstruct_fields,
    rhs_full as rhs_full,
    rhs_isotropic as rhs_isotropic,
    unpack as unpack,
)
from ._verify import (
    SCENARIOS as SCENARIOS,
    VerificationResult as VerificationResult,
    run_scenario as run_scenario,
)

# modify __module__ for shorter repr() and better pickle support
for __value in list(globals().values()):
    if getattr(__value, "__module__", "").startswith(f"{__name__}."):
        try:
            __value.__module__ = __name__
        except AttributeError:
            pass

    del __value
