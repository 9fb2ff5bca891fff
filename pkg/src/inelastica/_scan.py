#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC

from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from logging import getLogger

from aiologic import Lock

from ._uniform import integrate
from .lowlevel import ParameterError

LOGGER = getLogger(__name__)


def blowup_scan(
    params,
    initial_states,
    t_final,
    /,
    options=None,
    *,
    jobs=1,
    callback=None,
):
    """Integrate every initial state and collect the termination records.

    ``initial_states`` is either a mapping from keys to states or an iterable
    of states (keyed by position). Work is spread over ``jobs`` threads; the
    result dictionary is shared, so merging goes through a lock, and so does
    ``callback(key, trajectory)`` (e.g. a CSV writer).
    """

    if jobs < 1:
        msg = f"jobs must be >= 1, got {jobs!r}"
        raise ParameterError(msg)

    if isinstance(initial_states, Mapping):
        items = list(initial_states.items())
    else:
        items = list(enumerate(initial_states))

    results = {}
    lock = Lock()

    def work(key, state):
        trajectory = integrate(params, state, t_final, options)

        with lock:
            results[key] = trajectory.termination

            if callback is not None:
                callback(key, trajectory)

    LOGGER.info("scanning %d initial states with %d jobs", len(items), jobs)

    if jobs == 1:
        for key, state in items:
            work(key, state)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(work, *item) for item in items]

            for future in futures:
                future.result()

    return {key: results[key] for key, _ in items}
