#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

from ._config import (
    ATOL_DEFAULT as ATOL_DEFAULT,
    LOG_LEVEL_DEFAULT as LOG_LEVEL_DEFAULT,
    OUTPUT_DIR_DEFAULT as OUTPUT_DIR_DEFAULT,
    RTOL_DEFAULT as RTOL_DEFAULT,
)
from ._dopri import (
    BlowUpDetected as BlowUpDetected,
    DenseOutput as DenseOutput,
    IntegrationOptions as IntegrationOptions,
    PhiNonPositive as PhiNonPositive,
    ReachedFinalTime as ReachedFinalTime,
    StepUnderflow as StepUnderflow,
    dopri5 as dopri5,
)
from ._errors import (
    BlowUpReachedError as BlowUpReachedError,
    CharacteristicCrossingError as CharacteristicCrossingError,
    DomainError as DomainError,
    InelasticaError as InelasticaError,
    InsufficientSamplesError as InsufficientSamplesError,
    ParameterError as ParameterError,
    QuadratureError as QuadratureError,
)
from ._fitting import (
    MIN_FIT_SAMPLES as MIN_FIT_SAMPLES,
    estimate_blowup_time as estimate_blowup_time,
    power_law_fit as power_law_fit,
)

# modify __module__ for shorter repr() and better pickle support
for __value in list(globals().values()):
    if getattr(__value, "__module__", "").startswith(f"{__name__}."):
        try:
            __value.__module__ = __name__
        except AttributeError:
            pass

    del __value
