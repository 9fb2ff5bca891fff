#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

import os


def _float_env(name, default, /):
    value = os.getenv(name, "")

    if not value:
        return default

    try:
        return float(value)
    except ValueError:
        msg = f"{name} must be a real number, got {value!r}"
        raise ValueError(msg) from None


OUTPUT_DIR_DEFAULT = os.getenv("INELASTICA_OUTPUT_DIR") or "inelastica-output"
LOG_LEVEL_DEFAULT = os.getenv("INELASTICA_LOG_LEVEL") or "WARNING"

RTOL_DEFAULT = _float_env("INELASTICA_RTOL", 1e-10)
ATOL_DEFAULT = _float_env("INELASTICA_ATOL", 1e-12)
