#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: 0BSD

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--slow",
        action="store_true",
        default=False,
        help="run slow tests",
    )


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "slow: mark test as slow (long integrations and convergence studies)",
    )


def pytest_collection_modifyitems(config, items):
    for item in items:
        if getattr(item, "originalname", item.name).endswith("_slow"):
            item.add_marker(pytest.mark.slow)

        if "slow" in item.keywords:
            if not config.getoption("--slow"):
                item.add_marker(
                    pytest.mark.skip(
                        reason="need --slow option to run",
                    )
                )
