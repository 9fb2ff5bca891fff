#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 Ilya Egorov <0x42005e1f@gmail.com>
# SPDX-License-Identifier: ISC


class InelasticaError(Exception):
    pass


class ParameterError(InelasticaError, ValueError):
    pass


class DomainError(InelasticaError, ValueError):
    pass


class BlowUpReachedError(DomainError):
    pass


class InsufficientSamplesError(InelasticaError, ValueError):
    pass


class CharacteristicCrossingError(InelasticaError, RuntimeError):
    pass


class QuadratureError(InelasticaError, RuntimeError):
    pass
