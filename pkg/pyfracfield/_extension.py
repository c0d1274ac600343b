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
:mod:`pyfracfield._extension` -- weighted harmonic extension to a half-space
============================================================================

The extension ``w(x, y)`` of a field ``u`` solves
``div(y^(1-2s) grad w) = 0`` for ``y > 0`` with ``w(x, 0) = u(x)``. Each
Fourier mode is damped independently::

    w_hat(xi, y) == u_hat(xi) * profile(|xi| * y)

where ``profile`` solves ``phi'' + (1-2s)/z phi' - phi = 0`` with
``phi(0) = 1`` and ``phi(inf) = 0``. Its closed form is
``2^(1-s)/Gamma(s) * z^s * K_s(z)``; the numerically integrated profile
is available as a cross-check.

The weighted Dirichlet energy of ``w`` equals ``kappa(p) * dnorm_sq(u)`` and
the weighted normal derivative at ``y = 0`` recovers
``kappa(p) * frac_laplacian(u, p)``.
"""
import collections
import functools
import logging
import math

import numpy as np
from scipy import integrate as sp_integrate

from fracfield import bessel_k
from fracfield import gamma_fn
from pyfracfield._errors import IntegrationError
from pyfracfield._errors import ParameterError
from pyfracfield._fractional import dnorm_sq
from pyfracfield._fractional import frac_laplacian
from pyfracfield._grid import Field
from pyfracfield._grid import SpectralField
from pyfracfield._grid import to_field
from pyfracfield._grid import to_spectral

__all__ = [
    'ExtensionGrid',
    'energy_identity_residual',
    'extend',
    'extend_by_kernel',
    'extension_profile',
    'extension_profile_slope',
    'kappa',
    'neumann_trace_residual',
    'poisson_beta',
    'poisson_kernel',
]

_logger = logging.getLogger(__name__)

_PROFILE_METHODS = ('bessel', 'ode')

# Range of the integrated profile ODE, in z
_ODE_Z_MIN = 1e-7
_ODE_Z_MAX = 40.0

_MIN_NODES = 32


class ExtensionGrid(collections.namedtuple(
        'ExtensionGrid', 'base y_nodes grading method')):
    """
    Base grid and the heights sampled above it

    :ivar base:
        :class:`GridSpec` of the boundary torus
    :ivar y_nodes:
        Strictly increasing positive heights, at least 32 of them
    :ivar grading:
        Clustering exponent the nodes were built with (informational)
    :ivar method:
        Profile evaluation method, ``'bessel'`` or ``'ode'``
    """

    __slots__ = ()

    def __new__(cls, base, y_nodes, grading=2.0, method='bessel'):
        y = tuple(float(v) for v in y_nodes)
        if len(y) < _MIN_NODES:
            raise ParameterError(
                "an extension grid needs at least {} nodes, got {}".format(
                    _MIN_NODES, len(y)))
        if not y[0] > 0:
            raise ParameterError("the first height must be positive")
        if any(b <= a for a, b in zip(y, y[1:])):
            raise ParameterError("heights must be strictly increasing")
        if method not in _PROFILE_METHODS:
            raise ParameterError(
                "unknown profile method {!r}".format(method))
        return super(ExtensionGrid, cls).__new__(
            cls, base, y, float(grading), method)

    @classmethod
    def graded(cls, base, y_max=20.0, n=128, grading=2.0, method='bessel'):
        """
        Heights ``y_i = y_max * (i/n)^grading`` for ``i = 1..n``
        """
        if not y_max > 0 or not grading >= 1:
            raise ParameterError("need y_max > 0 and grading >= 1")
        i = np.arange(1, int(n) + 1)
        return cls(base, y_max * (i / float(n)) ** grading, grading, method)

    @property
    def y(self):
        return np.asarray(self.y_nodes)


def kappa(p):
    """
    Extension constant ``2^(1-2s) * Gamma(1-s) / Gamma(s)``
    """
    s = p.s
    return 2.0 ** (1.0 - 2.0 * s) * gamma_fn(1.0 - s) / gamma_fn(s)


def _bessel_profile(z, s):
    z = np.asarray(z, dtype=np.float64)
    out = np.ones(z.shape)
    positive = z > 0
    if np.any(positive):
        zp = z[positive]
        # K_s underflows to 0 far out; the binding only rejects infinities
        with np.errstate(under='ignore'):
            out[positive] = (2.0 ** (1.0 - s) / gamma_fn(s)
                             * zp ** s * bessel_k(s, zp))
    return out


def _bessel_slope(z, s):
    # d/dz (z^s K_s(z)) == -z^s K_(1-s)(z)
    z = np.asarray(z, dtype=np.float64)
    if s > 0.5:
        limit = 0.0
    elif s == 0.5:
        limit = -1.0
    else:
        limit = -math.inf
    out = np.full(z.shape, limit)
    positive = z > 0
    if np.any(positive):
        zp = z[positive]
        with np.errstate(under='ignore'):
            out[positive] = (-2.0 ** (1.0 - s) / gamma_fn(s)
                             * zp ** s * bessel_k(1.0 - s, zp))
    return out


@functools.lru_cache(maxsize=16)
def _ode_solution(s):
    # phi_tt - 2s phi_t - e^(2t) phi = 0 in t = ln z, integrated inwards
    # from the decaying asymptote at z = _ODE_Z_MAX
    def rhs(t, state):
        value, slope = state
        return [slope, 2.0 * s * slope + math.exp(2.0 * t) * value]

    z0 = _ODE_Z_MAX
    start = z0 ** (s - 0.5) * math.exp(-z0)
    t_span = (math.log(z0), math.log(_ODE_Z_MIN))
    sol = sp_integrate.solve_ivp(
        rhs, t_span, [start, start * (s - 0.5 - z0)], method='DOP853',
        rtol=1e-12, atol=1e-300, dense_output=True)
    if not sol.success:
        raise IntegrationError(
            "profile ODE for s={} failed: {}".format(s, sol.message))
    # phi ~ A + B z^(2s) near the origin
    z_fit = np.array([_ODE_Z_MIN, 2.0 * _ODE_Z_MIN])
    values = sol.sol(np.log(z_fit))[0]
    basis = np.stack([np.ones(2), z_fit ** (2.0 * s)], axis=1)
    a, b = np.linalg.solve(basis, values)
    if not a > 0:
        raise IntegrationError(
            "profile ODE for s={} did not reach the bounded branch".format(s))
    _logger.debug("profile ODE s=%g: %d evaluations", s, sol.nfev)
    return sol, a, b, start


def _ode_profile(z, s):
    sol, a, b, start = _ode_solution(s)
    z = np.asarray(z, dtype=np.float64)
    out = np.empty(z.shape)
    small = z < _ODE_Z_MIN
    large = z > _ODE_Z_MAX
    middle = ~(small | large)
    out[small] = 1.0 + (b / a) * z[small] ** (2.0 * s)
    if np.any(middle):
        out[middle] = sol.sol(np.log(z[middle]))[0] / a
    zl = z[large]
    out[large] = (start / a * (zl / _ODE_Z_MAX) ** (s - 0.5)
                  * np.exp(-(zl - _ODE_Z_MAX)))
    return out


def _ode_slope(z, s):
    sol, a, b, start = _ode_solution(s)
    z = np.asarray(z, dtype=np.float64)
    out = np.empty(z.shape)
    small = z < _ODE_Z_MIN
    large = z > _ODE_Z_MAX
    middle = ~(small | large)
    with np.errstate(divide='ignore'):
        out[small] = 2.0 * s * (b / a) * z[small] ** (2.0 * s - 1.0)
    if np.any(middle):
        zm = z[middle]
        # the second state component is d(phi)/d(ln z)
        out[middle] = sol.sol(np.log(zm))[1] / (a * zm)
    zl = z[large]
    out[large] = _ode_profile(zl, s) * ((s - 0.5) / zl - 1.0)
    return out


def _check_profile_args(s, method):
    if not 0 < s < 1:
        raise ParameterError("profile needs 0 < s < 1")
    if method not in _PROFILE_METHODS:
        raise ParameterError("unknown profile method {!r}".format(method))


def extension_profile(z, s, method='bessel'):
    """
    Radial profile of the extension of a single mode

    :param z:
        Non-negative scalar or array, ``|xi| * y``
    :param method:
        ``'bessel'`` for the closed form, ``'ode'`` for the integrated
        profile equation (cached per ``s``)
    :raises IntegrationError:
        If the profile equation cannot be integrated
    """
    _check_profile_args(s, method)
    if method == 'bessel':
        out = _bessel_profile(z, s)
    else:
        out = _ode_profile(z, s)
    if np.ndim(z) == 0:
        return float(out)
    return out


def extension_profile_slope(z, s, method='bessel'):
    """
    Derivative of :func:`extension_profile` in ``z``

    At ``z == 0`` the one-sided limit is returned: 0 for ``s > 1/2``, -1
    for ``s == 1/2`` and ``-inf`` below.
    """
    _check_profile_args(s, method)
    if method == 'bessel':
        out = _bessel_slope(z, s)
    else:
        out = _ode_slope(z, s)
    if np.ndim(z) == 0:
        return float(out)
    return out


def _mode_table(u, eg):
    coeffs = to_spectral(u).coeffs
    absxi = eg.base.abs_wavenumber()
    unique, inverse = np.unique(absxi, return_inverse=True)
    return coeffs, unique, inverse.reshape(absxi.shape)


def extend(u, p, eg):
    """
    Extension of ``u`` sampled at every height of ``eg``

    :returns:
        Array of shape ``(len(eg.y_nodes),) + grid.shape``; the zero mode
        is carried unchanged to every height
    """
    if u.grid != eg.base:
        raise ParameterError("field and extension grid disagree")
    coeffs, unique, inverse = _mode_table(u, eg)
    out = np.empty((len(eg.y_nodes), ) + u.grid.shape)
    for i, y in enumerate(eg.y_nodes):
        damping = extension_profile(unique * y, p.s, eg.method)[inverse]
        out[i] = to_field(SpectralField(u.grid, coeffs * damping)).values
    return out


def _slices(u, p, eg):
    # heights with the boundary prepended, and the coefficients of the
    # extension at each of them
    grid = u.grid
    y = np.concatenate(([0.0], eg.y))
    layers = [to_spectral(u).coeffs]
    for values in extend(u, p, eg):
        layers.append(to_spectral(Field._wrap(grid, values)).coeffs)
    return y, np.stack(layers)


def energy_identity_residual(u, p, eg):
    """
    Relative deviation of the weighted Dirichlet energy of
    :func:`extend` from ``kappa * dnorm_sq(u)``

    The flux ``y^(1-2s) dw/dy`` is ``2s dw/dv`` with ``v = y^(2s)``; it
    is taken by second-order differences in ``v`` over the sampled heights
    (one-sided at both ends, the boundary values included). The gradient
    term is integrated by Simpson's rule in ``v`` and the value term in
    ``y^(2-2s)``, which keeps both integrands bounded at ``y = 0``. Above
    the last height every mode is continued by its exponential decay.
    """
    expected = kappa(p) * dnorm_sq(u, p)
    if expected == 0:
        return 0.0
    s = p.s
    y, layers = _slices(u, p, eg)
    absxi = eg.base.abs_wavenumber()
    space = tuple(range(1, layers.ndim))
    v = y ** (2.0 * s)
    flux = 2.0 * s * np.gradient(layers, v, axis=0, edge_order=2)
    flux_sq = np.sum(np.abs(flux) ** 2, axis=space)
    bulk = np.sum(absxi ** 2 * np.abs(layers) ** 2, axis=space)
    gradient_part = sp_integrate.simpson(flux_sq, x=v) / (2.0 * s)
    value_part = sp_integrate.simpson(
        bulk, x=y ** (2.0 - 2.0 * s)) / (2.0 - 2.0 * s)
    top = y[-1]
    slope = flux[-1] * top ** (2.0 * s - 1.0)
    density = top ** (1.0 - 2.0 * s) * (
        absxi ** 2 * np.abs(layers[-1]) ** 2 + np.abs(slope) ** 2)
    tail = np.sum(np.divide(density, 2.0 * absxi,
                            out=np.zeros_like(density), where=absxi > 0))
    total = gradient_part + value_part + tail
    return abs(total - expected) / expected


def neumann_trace_residual(u, p, eg):
    """
    Relative L2 deviation of the weighted normal derivative at ``y = 0``
    from ``kappa * frac_laplacian(u)``

    Near the boundary the extension behaves like
    ``u + b * y^(2s) + c * y^2``. The two lowest heights of :func:`extend`
    fix ``b`` and ``c`` pointwise, and the limit of ``-y^(1-2s) dw/dy`` is
    ``-2s * b``. For ``s = 1/2`` this is the one-sided second-order
    difference at the boundary.
    """
    target = kappa(p) * frac_laplacian(u, p).values
    scale = np.sqrt(np.sum(target ** 2))
    if scale == 0:
        return 0.0
    s = p.s
    w = extend(u, p, eg)
    y1, y2 = eg.y_nodes[:2]
    d1 = w[0] - u.values
    d2 = w[1] - u.values
    det = y1 ** (2.0 * s) * y2 ** 2 - y2 ** (2.0 * s) * y1 ** 2
    b = (d1 * y2 ** 2 - d2 * y1 ** 2) / det
    trace = -2.0 * s * b
    return float(np.sqrt(np.sum((trace - target) ** 2)) / scale)


def poisson_kernel(r, y, p, beta=None):
    """
    ``beta * y^(2s) / (r^2 + y^2)^((N+2s)/2)``

    :param r:
        Distance ``|x|``, scalar or array
    :param beta:
        Normalization, :func:`poisson_beta` by default
    """
    if beta is None:
        beta = poisson_beta(p)
    r = np.asarray(r, dtype=np.float64)
    out = beta * y ** (2.0 * p.s) / (r ** 2 + y ** 2) ** (0.5 * (p.dim
                                                                 + 2.0 * p.s))
    if np.ndim(out) == 0:
        return float(out)
    return out


def _radial_mass(p, radius):
    n, s = p.dim, p.s
    power = 0.5 * (n + 2.0 * s)
    inner, inner_err = sp_integrate.quad(
        lambda r: r ** (n - 1) * (1.0 + r * r) ** -power, 0.0, radius,
        epsabs=0.0, epsrel=1e-13, limit=200)
    # r = radius / t maps the tail onto (0, 1] with weight t^(2s-1)
    outer, outer_err = sp_integrate.quad(
        lambda t: (t * t + radius * radius) ** -power, 0.0, 1.0,
        weight='alg', wvar=(2.0 * s - 1.0, 0.0),
        epsabs=0.0, epsrel=1e-13, limit=200)
    sphere = 2.0 * math.pi ** (0.5 * n) / gamma_fn(0.5 * n)
    total = sphere * (inner + radius ** n * outer)
    error = sphere * (inner_err + radius ** n * outer_err)
    return total, error


def poisson_beta(p, full_output=False):
    """
    Normalization making ``poisson_kernel(., 1)`` integrate to one

    The radial integral is split at a cutoff radius, the tail mapped onto
    a finite interval. The cutoff is doubled until the value changes by
    less than ``1e-12`` relative.

    :param full_output:
        Also return a dictionary with the final ``radius``, the relative
        ``change`` of the last doubling and the quadrature ``abserr``
    :raises IntegrationError:
        If the value does not settle
    """
    radius = 1.0
    previous, _ = _radial_mass(p, radius)
    for _ in range(40):
        radius *= 2.0
        total, error = _radial_mass(p, radius)
        change = abs(total - previous) / total
        if change < 1e-12:
            beta = 1.0 / total
            if full_output:
                return beta, {'radius': radius, 'change': change,
                              'abserr': error}
            return beta
        previous = total
    raise IntegrationError(
        "kernel normalization did not settle (last change {:.3e})".format(
            change))


def extend_by_kernel(u, p, y, beta=None, images=8):
    """
    Extension at height ``y`` by direct quadrature of the kernel

    The kernel is periodized over ``2*images + 1`` copies of the box per
    axis. Cost grows like ``M^(2N)``; this is an oracle for coarse grids.

    :returns:
        :class:`Field`
    """
    if not y > 0:
        raise ParameterError("height must be positive")
    if beta is None:
        beta = poisson_beta(p)
    grid = u.grid
    points = np.stack([c.ravel() for c in grid.mesh()], axis=1)
    source = u.values.ravel()
    out = np.zeros(len(points))
    offsets = np.arange(-images, images + 1) * grid.box_length
    shifts = np.stack([c.ravel() for c in np.meshgrid(
        *([offsets] * grid.dim), indexing='ij')], axis=1)
    for shift in shifts:
        diff = points[:, None, :] - points[None, :, :] + shift
        r = np.sqrt(np.sum(diff ** 2, axis=2))
        out += poisson_kernel(r, y, p, beta) @ source
    return Field._wrap(grid, out * grid.cell_volume)
