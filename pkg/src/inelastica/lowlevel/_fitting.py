#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

import math
import warnings

from logging import getLogger

import numpy as np

from scipy.optimize import OptimizeWarning, curve_fit

from ._errors import InsufficientSamplesError

LOGGER = getLogger(__name__)

MIN_FIT_SAMPLES = 10


def power_law_fit(x, y, /):
    """Least-squares fit of ``y = k * x**p``; returns ``(p, k)``."""

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    if x.shape != y.shape or x.ndim != 1:
        msg = "x and y must be 1D arrays of equal length"
        raise ValueError(msg)
    if len(x) < MIN_FIT_SAMPLES:
        msg = (
            f"need at least {MIN_FIT_SAMPLES} samples for a power-law fit,"
            f" got {len(x)}"
        )
        raise InsufficientSamplesError(msg)
    if np.any(x <= 0) or np.any(y <= 0):
        msg = "power-law fit needs positive samples"
        raise ValueError(msg)

    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)

    return float(slope), float(math.exp(intercept))


def _linear_root(times, norms, /):
    # 1/|y| ~ (t_* - t) / k for a simple pole
    slope, intercept = np.polyfit(times - times[-1], 1 / norms, 1)

    if slope >= 0:
        return 0.0

    return max(0.0, -intercept / slope)


def estimate_blowup_time(times, norms, /, *, fit_steps=10, threshold=1e12):
    """Estimate ``t_* - times[-1]`` for a trajectory that is blowing up.

    A linear model of ``1/norm`` over the last ``fit_steps`` samples gives
    the first guess; it is refined by fitting ``log norm = c - q log(t_* -
    t)`` over every sample with ``norm >= sqrt(threshold)``. Times are
    measured from the last sample so that the fit never subtracts two
    nearly equal absolute times.
    """

    times = np.asarray(times, dtype=float)
    norms = np.asarray(norms, dtype=float)

    if len(times) < 2:
        return 0.0

    tail = slice(-min(fit_steps, len(times)), None)
    guess = _linear_root(times[tail], norms[tail])

    mask = norms >= math.sqrt(threshold)

    if np.count_nonzero(mask) < MIN_FIT_SAMPLES:
        return guess

    elapsed = times[-1] - times[mask]
    log_norms = np.log(norms[mask])

    if guess <= 0:
        guess = max(elapsed[-2] if len(elapsed) > 1 else 0.0, 1e-300)

    def model(s, c, q, log_remaining):
        return c - q * np.log(s + np.exp(log_remaining))

    q0 = 1.0
    c0 = log_norms[-1] + q0 * math.log(guess)

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, _ = curve_fit(
                model,
                elapsed,
                log_norms,
                p0=(c0, q0, math.log(guess)),
                maxfev=20000,
            )
    except (RuntimeError, ValueError):
        LOGGER.debug("power-law refinement failed; keeping linear estimate")
        return guess

    remaining = math.exp(popt[2])

    if not math.isfinite(remaining) or popt[1] <= 0:
        return guess

    return remaining
