# Copyright (c) 2026 The fracfield developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Lesser General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
"""
:mod:`pyfracfield._errors` -- exception hierarchy
=================================================

Every exception raised on purpose by pyfracfield derives from
:class:`FracFieldError`. Each class also derives from the builtin exception
family that describes the problem so that ``except ValueError`` keeps
working for input errors.
"""

__all__ = [
    'DegenerateFieldError',
    'DilationRangeError',
    'ExtractionError',
    'FieldFileError',
    'FracFieldError',
    'IntegrationError',
    'ManifestError',
    'NonZeroMeanError',
    'ParameterError',
    'SolverError',
]


class FracFieldError(Exception):
    """
    Base class of all pyfracfield errors
    """


class ParameterError(FracFieldError, ValueError):
    """
    Invalid grid, order, solver setting or nonlinearity description
    """


class NonZeroMeanError(FracFieldError, ValueError):
    """
    Operation defined on the zero-mean subspace got a field with a mean
    """


class DegenerateFieldError(FracFieldError, ValueError):
    """
    Field has a vanishing seminorm where a positive one is required
    """


class DilationRangeError(FracFieldError, ValueError):
    """
    Group action cannot be represented on the grid
    """


class FieldFileError(FracFieldError, ValueError):
    """
    Field file is truncated, corrupt or of an unsupported version
    """


class ManifestError(FracFieldError, ValueError):
    """
    Sequence manifest is malformed or lists inconsistent fields
    """


class SolverError(FracFieldError, RuntimeError):
    """
    Variational solver could not start or recover
    """


class ExtractionError(FracFieldError, RuntimeError):
    """
    Profile extraction stopped making progress
    """


class IntegrationError(FracFieldError, ArithmeticError):
    """
    Quadrature or ODE integration did not converge
    """
