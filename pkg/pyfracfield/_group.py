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
:mod:`pyfracfield._group` -- dilation and translation group
===========================================================

A :class:`GroupElement` ``(gamma, shift, level)`` acts on fields as::

    apply(g, u)(x) == gamma**(a*level) * u(gamma**level * (x - shift))

with ``a = (N - 2s)/2``, which keeps both the seminorm and the critical
Lebesgue norm unchanged. Translations are cyclic on the torus.

When ``gamma`` is an integer, ``level >= 0`` and the shift is a multiple of
the grid spacing, the action is an exact resampling of grid values. Every
other action goes through trigonometric interpolation.
"""
import collections
import fractions
import logging
import math
import numbers

import numpy as np
from scipy import fft

from fracfield import DEFAULT_GAMMA
from pyfracfield._errors import DilationRangeError
from pyfracfield._errors import ParameterError
from pyfracfield._fractional import dnorm_sq
from pyfracfield._grid import Field
from pyfracfield._grid import fft_workers
from pyfracfield._grid import lp_norm

__all__ = [
    'GroupElement',
    'UnitarityDefect',
    'apply',
    'compose',
    'identity',
    'inverse',
    'max_level',
    'pull_back',
    'separation',
    'unitarity_defect',
]

_logger = logging.getLogger(__name__)

# Relative energy allowed to alias or fall off the box under strict apply()
_LEAK_TOLERANCE = 1e-10

_messages = {
    'range': "level {level} exceeds the representable range |j| <= {limit}"
             " of a grid with {points} points per axis",
    'alias': "dilation by gamma^{level} would alias: relative energy {leak:.2e}"
             " above the reduced Nyquist wavenumber",
    'spill': "dilation by gamma^{level} would push relative mass {leak:.2e}"
             " out of the box",
}


def _power(gamma, k):
    # Keep rational arithmetic exact when gamma is rational
    if isinstance(gamma, numbers.Rational):
        return fractions.Fraction(gamma) ** k
    return gamma ** k


class GroupElement(collections.namedtuple(
        'GroupElement', 'gamma shift level')):
    """
    Dilation and translation ``d_{shift,level}`` with factor ``gamma``

    :ivar gamma:
        Dilation factor, greater than one. Integers and fractions keep
        :func:`compose` and :func:`inverse` exact.
    :ivar shift:
        Tuple of N translation components
    :ivar level:
        Integer dilation level
    """

    __slots__ = ()

    def __new__(cls, gamma, shift, level):
        if not gamma > 1:
            raise ParameterError(
                "gamma must be greater than 1, got {!r}".format(gamma))
        if int(level) != level:
            raise ParameterError(
                "level must be an integer, got {!r}".format(level))
        if isinstance(shift, numbers.Number):
            shift = (shift, )
        return super(GroupElement, cls).__new__(
            cls, gamma, tuple(shift), int(level))

    @property
    def dim(self):
        return len(self.shift)


def identity(dim, gamma=DEFAULT_GAMMA):
    """
    Neutral element in ``dim`` dimensions
    """
    return GroupElement(gamma, (0, ) * dim, 0)


def _check_same_gamma(g1, g2):
    if g1.gamma != g2.gamma:
        raise ParameterError(
            "group elements have different gamma: {!r} and {!r}".format(
                g1.gamma, g2.gamma))
    if g1.dim != g2.dim:
        raise ParameterError("group elements have different dimensions")


def compose(g1, g2):
    """
    Product ``g1 * g2``, acting as ``apply(g1, apply(g2, u))``

    :returns:
        ``(shift1 + gamma^-level1 * shift2, level1 + level2)``
    :raises ParameterError:
        If the elements use different factors
    """
    _check_same_gamma(g1, g2)
    factor = _power(g1.gamma, -g1.level)
    shift = tuple(a + factor * b for a, b in zip(g1.shift, g2.shift))
    return GroupElement(g1.gamma, shift, g1.level + g2.level)


def inverse(g):
    """
    Inverse element ``(-gamma^level * shift, -level)``
    """
    factor = _power(g.gamma, g.level)
    return GroupElement(g.gamma, tuple(-factor * a for a in g.shift),
                        -g.level)


def separation(g1, g2):
    """
    Divergence functional ``|j1 - j2| + gamma^j1 * |y1 - y2|``

    The distance of the shifts is Euclidean.
    """
    _check_same_gamma(g1, g2)
    dist = math.sqrt(sum(float(a - b) ** 2
                         for a, b in zip(g1.shift, g2.shift)))
    return abs(g1.level - g2.level) + float(_power(g1.gamma, g1.level)) * dist


def max_level(grid, gamma=DEFAULT_GAMMA):
    """
    Largest ``|level|`` representable on ``grid``

    For ``gamma == 2`` this is ``log2(M) - 3``.
    """
    limit = grid.points_per_axis / 8.0
    return int(math.floor(math.log(limit) / math.log(gamma) + 1e-12))


def _lattice_cells(shift, h):
    cells = []
    for y in shift:
        c = float(y) / h
        r = round(c)
        if abs(c - r) > 1e-9 * max(1.0, abs(c)):
            return None
        cells.append(int(r))
    return cells


def _check_leakage(g, u, gamma):
    grid = u.grid
    level = g.level
    if level > 0:
        coeffs = fft.fftn(u.values, workers=fft_workers())
        total = np.sum(np.abs(coeffs) ** 2)
        if total == 0:
            return
        k = np.abs(grid.wavenumbers())
        cut = grid.nyquist / float(gamma) ** level
        outside = np.zeros(grid.shape, dtype=bool)
        for axis in range(grid.dim):
            shape = [1] * grid.dim
            shape[axis] = -1
            outside |= (k > cut).reshape(shape)
        leak = np.sum(np.abs(coeffs[outside]) ** 2) / total
        if leak > _LEAK_TOLERANCE:
            raise DilationRangeError(
                _messages['alias'].format(level=level, leak=leak))
    elif level < 0:
        weights = u.values ** 2
        total = np.sum(weights)
        if total == 0:
            return
        x = np.abs(grid.axis())
        half = 0.5 * grid.box_length / float(gamma) ** (-level)
        outside = np.zeros(grid.shape, dtype=bool)
        for axis in range(grid.dim):
            shape = [1] * grid.dim
            shape[axis] = -1
            outside |= (x >= half).reshape(shape)
        leak = np.sum(weights[outside]) / total
        if leak > _LEAK_TOLERANCE:
            raise DilationRangeError(
                _messages['spill'].format(level=level, leak=leak))


def _resample(u, gamma, level, cells):
    grid = u.grid
    m = grid.points_per_axis
    center = m // 2
    index = center + gamma ** level * (np.arange(m) - center)
    valid = np.nonzero((index >= 0) & (index < m))[0]
    out = np.zeros(grid.shape)
    out[np.ix_(*[valid] * grid.dim)] = u.values[
        np.ix_(*[index[valid]] * grid.dim)]
    return np.roll(out, cells, axis=tuple(range(grid.dim)))


def _interpolate(u, gamma, level, shift):
    grid = u.grid
    m = grid.points_per_axis
    length = grid.box_length
    xi = grid.wavenumbers()
    nyq = m // 2
    x = grid.axis()
    values = u.values.astype(np.complex128)
    for axis in range(grid.dim):
        y = float(shift[axis])
        t = np.mod(x - y + 0.5 * length, length) - 0.5 * length
        t = float(gamma) ** level * t
        phase = np.outer(t + 0.5 * length, xi)
        basis = np.exp(1j * phase)
        # the Nyquist mode of a real field is a cosine
        basis[:, nyq] = np.cos(phase[:, nyq])
        basis[(t < -0.5 * length) | (t >= 0.5 * length), :] = 0.0
        coeffs = fft.fft(values, axis=axis, workers=fft_workers())
        values = np.moveaxis(
            np.tensordot(basis / m, coeffs, axes=([1], [axis])), 0, axis)
    return values.real


def apply(g, u, p, strict=True):
    """
    Act with a group element on a field

    :param g:
        A :class:`GroupElement` of the same dimension as the field
    :param u:
        A :class:`Field`
    :param p:
        :class:`FracParams`, supplies the amplitude exponent
    :param strict:
        When true, refuse actions that alias part of the spectrum above the
        grid resolution or push mass out of the box
    :returns:
        The transformed :class:`Field`
    :raises DilationRangeError:
        If ``|level|`` is out of range, or on leakage in strict mode
    """
    grid = u.grid
    if g.dim != grid.dim:
        raise ParameterError(
            "group element of dimension {} applied to a field of dimension"
            " {}".format(g.dim, grid.dim))
    limit = max_level(grid, g.gamma)
    if abs(g.level) > limit:
        raise DilationRangeError(_messages['range'].format(
            level=g.level, limit=limit, points=grid.points_per_axis))
    if strict:
        _check_leakage(g, u, g.gamma)
    amplitude = float(g.gamma) ** (p.dilation_exponent * g.level)
    cells = _lattice_cells(g.shift, grid.spacing)
    integral_gamma = float(g.gamma) == int(g.gamma)
    if cells is not None and integral_gamma and g.level >= 0:
        values = _resample(u, int(g.gamma), g.level, cells)
    else:
        _logger.debug("interpolating action %r", g)
        values = _interpolate(u, g.gamma, g.level, g.shift)
    if g.level:
        values = values * amplitude
    return Field._wrap(grid, values)


UnitarityDefect = collections.namedtuple(
    'UnitarityDefect', 'seminorm crit_norm')
UnitarityDefect.__doc__ = """
Relative change of the seminorm and of the critical norm under an action
"""


def unitarity_defect(g, u, p):
    """
    Measure how far an action is from being isometric on ``u``

    :returns:
        :class:`UnitarityDefect` of relative changes; the action is applied
        in non-strict mode so that leaking actions can be measured
    """
    v = apply(g, u, p, strict=False)
    before = dnorm_sq(u, p)
    after = dnorm_sq(v, p)
    crit_before = lp_norm(u, p.crit)
    crit_after = lp_norm(v, p.crit)
    return UnitarityDefect(
        abs(after - before) / max(before, 1e-300),
        abs(crit_after - crit_before) / max(crit_before, 1e-300))


def pull_back(g, u, p, strict=False):
    """
    Act with the inverse of ``g``, translating first and dilating second

    On the torus this keeps structure located at ``g.shift`` inside the box
    even when ``gamma^level * shift`` would leave it, which
    ``apply(inverse(g), u)`` cannot guarantee.
    """
    back = GroupElement(g.gamma, tuple(-y for y in g.shift), 0)
    centered = apply(back, u, p, strict=False)
    if not g.level:
        return centered
    undilate = GroupElement(g.gamma, (0, ) * g.dim, -g.level)
    return apply(undilate, centered, p, strict=strict)
