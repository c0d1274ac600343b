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
:mod:`pyfracfield._grid` -- periodic grids, fields and spectral transforms
==========================================================================

The whole space is truncated to the periodic box ``[-L/2, L/2)^N`` sampled
by ``M`` points per axis. The origin sits at index ``M // 2`` of every axis.

Spectral coefficients use the unitary discrete transform scaled by
``h^(N/2)`` so that Parseval holds against grid quadrature::

    sum(|c|**2) == h**N * sum(u**2)

and ``c_m`` approximates ``(2*pi/L)**(N/2)`` times the continuum Fourier
transform at ``xi_m = 2*pi*m/L``.
"""
import functools
import logging
import math
import os

import numpy as np
from scipy import fft

from fracfield import MAX_DIM
from fracfield import MIN_POINTS
from fracfield import THREADS_ENV
from fracfield import is_power_of_two
from pyfracfield._errors import ParameterError

__all__ = [
    'Field',
    'GridSpec',
    'SpectralField',
    'bump',
    'integrate',
    'lp_norm',
    'to_field',
    'to_spectral',
    'zero_mean',
]

_logger = logging.getLogger(__name__)


def fft_workers():
    """
    Number of FFT worker threads allowed by ``FRACFIELD_THREADS``

    :returns:
        A positive integer, 1 when the variable is unset or invalid
    """
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        _logger.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
        return 1
    return max(1, workers)


class GridSpec(object):
    """
    Uniform periodic grid on the box ``[-L/2, L/2)^dim``
    """

    __slots__ = ('_dim', '_points', '_length')

    def __init__(self, dim, points_per_axis, box_length):
        """
        Initialize a new grid.

        :param dim:
            Spatial dimension, 1, 2 or 3
        :param points_per_axis:
            Number of points per axis, a power of two, at least 8
        :param box_length:
            Side length of the periodic box
        :raises ParameterError:
            If any of the arguments is out of range
        """
        if int(dim) != dim or not 1 <= dim <= MAX_DIM:
            raise ParameterError(
                "dim must be 1, 2 or 3, got {!r}".format(dim))
        if (int(points_per_axis) != points_per_axis
                or points_per_axis < MIN_POINTS
                or not is_power_of_two(int(points_per_axis))):
            raise ParameterError(
                "points_per_axis must be a power of two >= {}, got {!r}".format(
                    MIN_POINTS, points_per_axis))
        if not box_length > 0 or not math.isfinite(box_length):
            raise ParameterError(
                "box_length must be positive, got {!r}".format(box_length))
        self._dim = int(dim)
        self._points = int(points_per_axis)
        self._length = float(box_length)

    def __repr__(self):
        return "<GridSpec dim:{} points_per_axis:{} box_length:{}>".format(
            self._dim, self._points, self._length)

    def __eq__(self, other):
        if not isinstance(other, GridSpec):
            return NotImplemented
        return self._key() == other._key()

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (self._dim, self._points, self._length)

    @property
    def dim(self):
        return self._dim

    @property
    def points_per_axis(self):
        return self._points

    @property
    def box_length(self):
        return self._length

    @property
    def spacing(self):
        """
        grid spacing h = L/M
        """
        return self._length / self._points

    @property
    def shape(self):
        return (self._points, ) * self._dim

    @property
    def size(self):
        return self._points ** self._dim

    @property
    def cell_volume(self):
        return self.spacing ** self._dim

    @property
    def nyquist(self):
        """
        largest representable wavenumber pi/h
        """
        return math.pi / self.spacing

    def axis(self):
        """
        Coordinates of the grid points along one axis

        :returns:
            Array ``-L/2 + h*i`` for ``i = 0..M-1``
        """
        return -0.5 * self._length + self.spacing * np.arange(self._points)

    def mesh(self):
        """
        Coordinate arrays of all grid points (``indexing='ij'``)
        """
        axis = self.axis()
        return np.meshgrid(*([axis] * self._dim), indexing='ij')

    def radius(self, center=None):
        """
        Distance of every grid point from ``center`` (default: the origin)
        """
        mesh = self.mesh()
        if center is None:
            center = (0.0, ) * self._dim
        return np.sqrt(sum((x - c) ** 2 for x, c in zip(mesh, center)))

    def wavenumbers(self):
        """
        Angular wavenumbers ``2*pi*m/L`` along one axis, in FFT order
        """
        return 2.0 * math.pi * fft.fftfreq(self._points, d=self.spacing)

    def abs_wavenumber(self):
        """
        Read-only array of ``|xi|`` over the frequency lattice, FFT order
        """
        return _abs_wavenumber(self)


@functools.lru_cache(maxsize=32)
def _abs_wavenumber(grid):
    k = grid.wavenumbers()
    mesh = np.meshgrid(*([k] * grid.dim), indexing='ij')
    absxi = np.sqrt(sum(km ** 2 for km in mesh))
    absxi.flags.writeable = False
    return absxi


def _err_grid_mismatch():
    raise ParameterError("fields live on different grids")


class Field(object):
    """
    Real field sampled on a :class:`GridSpec`

    Fields are immutable: the value array is read-only. Arithmetic with
    other fields on the same grid and with real scalars returns new fields.
    """

    __slots__ = ('_grid', '_values')

    def __init__(self, grid, values):
        """
        Initialize a new field.

        :param grid:
            The :class:`GridSpec` the values are sampled on
        :param values:
            Real array with ``grid.size`` entries (row-major), or already of
            shape ``grid.shape``
        :raises ParameterError:
            If the size does not match or a value is not finite
        """
        values = np.array(values, dtype=np.float64)
        if values.size != grid.size:
            raise ParameterError(
                "expected {} values, got {}".format(grid.size, values.size))
        values = values.reshape(grid.shape)
        if not np.all(np.isfinite(values)):
            raise ParameterError("field values must be finite")
        values.flags.writeable = False
        self._grid = grid
        self._values = values

    @classmethod
    def _wrap(cls, grid, values):
        # Internal constructor for freshly computed arrays, no copy
        self = cls.__new__(cls)
        values = np.ascontiguousarray(values, dtype=np.float64)
        values = values.reshape(grid.shape)
        values.flags.writeable = False
        self._grid = grid
        self._values = values
        return self

    @classmethod
    def zeros(cls, grid):
        return cls._wrap(grid, np.zeros(grid.shape))

    @classmethod
    def from_function(cls, grid, func):
        """
        Sample ``func(*mesh)`` on the grid

        :param func:
            Callable taking ``grid.dim`` coordinate arrays
        """
        return cls(grid, func(*grid.mesh()))

    def __repr__(self):
        return "<Field dim:{} points_per_axis:{} box_length:{}>".format(
            self._grid.dim, self._grid.points_per_axis,
            self._grid.box_length)

    @property
    def grid(self):
        return self._grid

    @property
    def values(self):
        """
        read-only array of shape ``grid.shape``
        """
        return self._values

    def mean(self):
        return float(np.mean(self._values))

    def _other_values(self, other):
        if isinstance(other, Field):
            if other._grid != self._grid:
                _err_grid_mismatch()
            return other._values
        return other

    def __add__(self, other):
        return Field._wrap(self._grid, self._values + self._other_values(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Field._wrap(self._grid, self._values - self._other_values(other))

    def __rsub__(self, other):
        return Field._wrap(self._grid, self._other_values(other) - self._values)

    def __mul__(self, scalar):
        if isinstance(scalar, Field):
            return NotImplemented
        return Field._wrap(self._grid, self._values * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Field._wrap(self._grid, self._values / float(scalar))

    def __neg__(self):
        return Field._wrap(self._grid, -self._values)


class SpectralField(object):
    """
    Spectral coefficients of a real :class:`Field` (FFT ordering)
    """

    __slots__ = ('_grid', '_coeffs')

    def __init__(self, grid, coeffs):
        coeffs = np.array(coeffs, dtype=np.complex128).reshape(grid.shape)
        coeffs.flags.writeable = False
        self._grid = grid
        self._coeffs = coeffs

    def __repr__(self):
        return "<SpectralField dim:{} points_per_axis:{}>".format(
            self._grid.dim, self._grid.points_per_axis)

    @property
    def grid(self):
        return self._grid

    @property
    def coeffs(self):
        return self._coeffs

    def norm(self):
        """
        l2 norm of the coefficients (equals the grid L2 norm of the field)
        """
        return float(np.sqrt(np.sum(np.abs(self._coeffs) ** 2)))

    def hermitian_defect(self):
        """
        Largest deviation from ``c[-m] == conj(c[m])``, relative to the
        largest coefficient
        """
        flipped = self._coeffs
        for axis in range(self._grid.dim):
            flipped = np.roll(np.flip(flipped, axis=axis), 1, axis=axis)
        scale = max(np.max(np.abs(self._coeffs)), np.finfo(float).tiny)
        return float(np.max(np.abs(self._coeffs - np.conj(flipped))) / scale)

    def to_field(self):
        return to_field(self)


def to_spectral(u):
    """
    Forward spectral transform

    :param u:
        A :class:`Field`
    :returns:
        :class:`SpectralField` with Parseval-normalized coefficients
    """
    grid = u.grid
    coeffs = fft.fftn(u.values, norm='ortho', workers=fft_workers())
    coeffs *= grid.spacing ** (0.5 * grid.dim)
    return SpectralField(grid, coeffs)


def to_field(sf):
    """
    Inverse of :func:`to_spectral`

    The imaginary part (rounding noise for Hermitian coefficients) is
    discarded.
    """
    grid = sf.grid
    values = fft.ifftn(sf.coeffs / grid.spacing ** (0.5 * grid.dim),
                       norm='ortho', workers=fft_workers())
    return Field._wrap(grid, values.real)


def integrate(u):
    """
    Rectangle-rule integral ``h^N * sum(u)`` over the torus

    The sum is exactly rounded, so the result does not depend on the order
    of the values (in particular on cyclic shifts).
    """
    return u.grid.cell_volume * math.fsum(u.values.ravel())


def lp_norm(u, p):
    """
    ``(integrate(|u|^p))^(1/p)``

    :raises ParameterError:
        If p < 1
    """
    if not p >= 1:
        raise ParameterError("lp_norm() requires p >= 1, got {!r}".format(p))
    total = integrate(Field._wrap(u.grid, np.abs(u.values) ** p))
    return total ** (1.0 / p)


def zero_mean(u):
    """
    Projection of ``u`` on the zero-mean subspace
    """
    return Field._wrap(u.grid, u.values - np.mean(u.values))


def bump(grid, width=1.0, center=None, amplitude=1.0, order=0):
    """
    Gaussian bump ``exp(-|x - center|^2 / width^2)``

    :param order:
        When positive, ``(-Laplacian)^order`` is applied spectrally. The
        result has vanishing moments up to order ``2*order - 1`` and a
        spectrum vanishing like ``|xi|^(2*order)`` at the origin.
    :param amplitude:
        Peak absolute value of the result
    """
    if not width > 0:
        raise ParameterError("bump width must be positive")
    values = np.exp(-grid.radius(center) ** 2 / width ** 2)
    if order:
        coeffs = fft.fftn(values, workers=fft_workers())
        coeffs *= grid.abs_wavenumber() ** (2 * order)
        values = fft.ifftn(coeffs, workers=fft_workers()).real
    values *= amplitude / np.max(np.abs(values))
    return Field._wrap(grid, values)
