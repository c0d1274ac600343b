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
:mod:`pyfracfield._fractional` -- fractional Laplacian and Sobolev constants
============================================================================

Powers of the Laplacian act diagonally on spectral coefficients as the
multiplier ``|xi|^(2*alpha)``. The seminorm of the homogeneous space is::

    dnorm_sq(u) == sum(|xi|**(2*s) * |c|**2)

The zero mode is annihilated by every multiplier, so all of these
operations live on the zero-mean subspace.
"""
import collections
import math

import numpy as np

from fracfield import gamma_fn
from pyfracfield._errors import DegenerateFieldError
from pyfracfield._errors import NonZeroMeanError
from pyfracfield._errors import ParameterError
from pyfracfield._grid import Field
from pyfracfield._grid import SpectralField
from pyfracfield._grid import integrate
from pyfracfield._grid import to_field
from pyfracfield._grid import to_spectral

__all__ = [
    'FracParams',
    'd_inner',
    'dnorm_sq',
    'frac_laplacian',
    'inverse_frac_laplacian',
    'sharp_sobolev_constant',
    'sobolev_constant',
    'sobolev_quotient',
]

# Relative size of the zero mode tolerated by inverse_frac_laplacian()
_MEAN_TOLERANCE = 1e-12


class FracParams(collections.namedtuple('FracParams', 'dim s')):
    """
    Spatial dimension and fractional order

    :ivar dim:
        Spatial dimension N
    :ivar s:
        Fractional order, ``0 < s < min(1, N/2)``
    """

    __slots__ = ()

    def __new__(cls, dim, s):
        if int(dim) != dim or dim < 1:
            raise ParameterError(
                "dim must be a positive integer, got {!r}".format(dim))
        dim = int(dim)
        s = float(s)
        if not 0 < s < min(1.0, dim / 2.0):
            raise ParameterError(
                "order s={} violates 0 < s < min{{1, N/2}} for N={}".format(
                    s, dim))
        return super(FracParams, cls).__new__(cls, dim, s)

    @property
    def crit(self):
        """
        critical exponent 2N/(N-2s)
        """
        return 2.0 * self.dim / (self.dim - 2.0 * self.s)

    @property
    def dilation_exponent(self):
        """
        amplitude exponent (N-2s)/2 of the dilation group
        """
        return 0.5 * (self.dim - 2.0 * self.s)

    @property
    def quotient_exponent(self):
        """
        exponent (N-2s)/N applied to the functional in the quotient
        """
        return (self.dim - 2.0 * self.s) / self.dim


def _multiplier(grid, alpha):
    absxi = grid.abs_wavenumber()
    with np.errstate(divide='ignore'):
        return absxi ** (2.0 * alpha)


def _check_power(alpha):
    if not alpha > 0:
        raise ParameterError(
            "power must be positive, got {!r}".format(alpha))


def frac_laplacian(u, p, power=None):
    """
    Apply ``(-Laplacian)^power`` to a field

    :param u:
        A :class:`Field`
    :param p:
        :class:`FracParams`, supplies the default power ``s``
    :param power:
        Any positive real, ``p.s`` by default
    :returns:
        A new :class:`Field`; the zero mode of the result is 0
    """
    alpha = p.s if power is None else power
    _check_power(alpha)
    coeffs = to_spectral(u).coeffs * _multiplier(u.grid, alpha)
    return to_field(SpectralField(u.grid, coeffs))


def inverse_frac_laplacian(u, p, power=None):
    """
    Invert :func:`frac_laplacian` on the zero-mean subspace

    :raises NonZeroMeanError:
        If the zero mode of ``u`` is not negligible
    """
    alpha = p.s if power is None else power
    _check_power(alpha)
    coeffs = to_spectral(u).coeffs
    scale = np.sqrt(np.sum(np.abs(coeffs) ** 2))
    zero = (0, ) * u.grid.dim
    if abs(coeffs[zero]) > _MEAN_TOLERANCE * scale:
        raise NonZeroMeanError(
            "inverse_frac_laplacian() needs a zero-mean field, "
            "project it first (mean={:.3e})".format(u.mean()))
    mult = _multiplier(u.grid, alpha)
    mult[zero] = 1.0
    coeffs = coeffs / mult
    coeffs[zero] = 0.0
    return to_field(SpectralField(u.grid, coeffs))


def d_inner(u, v, p):
    """
    Inner product ``sum(|xi|^(2s) * c_u * conj(c_v))`` of the seminorm
    """
    if u.grid != v.grid:
        raise ParameterError("fields live on different grids")
    cu = to_spectral(u).coeffs
    cv = to_spectral(v).coeffs
    terms = _multiplier(u.grid, p.s) * (cu * np.conj(cv)).real
    return math.fsum(terms.ravel())


def dnorm_sq(u, p):
    """
    Squared seminorm ``sum(|xi|^(2s) * |c|^2)``
    """
    coeffs = to_spectral(u).coeffs
    terms = _multiplier(u.grid, p.s) * np.abs(coeffs) ** 2
    return math.fsum(terms.ravel())


def _sobolev_bracket(p):
    n, s = p.dim, p.s
    return (2.0 ** (-2.0 * s)
            * gamma_fn(0.5 * (n - 2.0 * s)) / gamma_fn(0.5 * (n + 2.0 * s))
            * (gamma_fn(float(n)) / gamma_fn(0.5 * n)) ** (2.0 * s / n))


def sobolev_constant(p):
    """
    Bracketed gamma expression of the fractional Sobolev inequality

    :returns:
        ``[2^(-2s) G((N-2s)/2) / G((N+2s)/2) (G(N)/G(N/2))^(2s/N)]^(crit/2)``

    This is a valid upper bound of :func:`sobolev_quotient`. For the best
    constant under the unitary transform use :func:`sharp_sobolev_constant`.
    """
    return _sobolev_bracket(p) ** (0.5 * p.crit)


def sharp_sobolev_constant(p):
    """
    Best constant of ``int |u|^crit <= K * dnorm_sq(u)^(crit/2)``

    The bracket of :func:`sobolev_constant` gains a factor ``pi^(-s)``
    under the unitary Fourier transform. For ``N=2, s=1/2`` the result is
    ``1/pi``, attained by ``(1 + |x|^2)^(-1/2)``.
    """
    return (_sobolev_bracket(p) * math.pi ** (-p.s)) ** (0.5 * p.crit)


def sobolev_quotient(u, p):
    """
    ``integrate(|u|^crit) / dnorm_sq(u)^(crit/2)``

    :raises DegenerateFieldError:
        If the seminorm of ``u`` vanishes
    """
    norm_sq = dnorm_sq(u, p)
    if not norm_sq > 0:
        raise DegenerateFieldError(
            "sobolev_quotient() needs a field with positive seminorm")
    power = integrate(Field._wrap(u.grid, np.abs(u.values) ** p.crit))
    return power / norm_sq ** (0.5 * p.crit)
