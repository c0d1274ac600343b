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
:mod:`pyfracfield._profiles` -- planted and extracted profile decompositions
============================================================================

A sequence ``u_k`` is synthesized as a sum of profiles moved by group
elements ``g_k^(n)`` plus vanishing noise, and decomposed back by repeated
localization of the largest unit-cube mass at every dilation level.
Limits of the sequence are rendered as trends over ``k`` and thresholds at
the final index.
"""
import collections
import logging
import math

import numpy as np
from scipy import fft
from scipy import ndimage

from pyfracfield._errors import ExtractionError
from pyfracfield._errors import ParameterError
from pyfracfield._fractional import dnorm_sq
from pyfracfield._grid import Field
from pyfracfield._grid import fft_workers
from pyfracfield._grid import lp_norm
from pyfracfield._grid import zero_mean
from pyfracfield._group import GroupElement
from pyfracfield._group import apply
from pyfracfield._group import max_level
from pyfracfield._group import pull_back
from pyfracfield._group import separation
from pyfracfield._nonlinearity import phi

__all__ = [
    'DecompositionReport',
    'ExtractConfig',
    'ExtractedProfile',
    'LocatedMass',
    'NormBudget',
    'PhiBudget',
    'PlantedProfile',
    'classify_levels',
    'cocompactness_indicator',
    'extract',
    'locate_mass',
    'synthesize',
]

_logger = logging.getLogger(__name__)

PROFILE_KINDS = ('N0', 'Nplus', 'Nminus')


def classify_levels(levels):
    """
    Kind of a dilation level sequence

    :returns:
        ``'N0'`` for a constant sequence, ``'Nplus'`` or ``'Nminus'`` for
        strictly monotone ones, otherwise the kind of the overall trend
    """
    levels = list(levels)
    steps = [b - a for a, b in zip(levels, levels[1:])]
    if all(d == 0 for d in steps):
        return 'N0'
    if all(d > 0 for d in steps):
        return 'Nplus'
    if all(d < 0 for d in steps):
        return 'Nminus'
    trend = levels[-1] - levels[0]
    if trend > 0:
        return 'Nplus'
    if trend < 0:
        return 'Nminus'
    return 'N0'


class _Profile(collections.namedtuple('_Profile', 'w elements kind')):

    __slots__ = ()

    @property
    def gamma(self):
        return self.elements[0].gamma

    @property
    def levels(self):
        return [g.level for g in self.elements]


class ExtractedProfile(_Profile):
    """
    Profile recovered by :func:`extract`

    :ivar kind:
        Kind of the overall level trend, see :func:`classify_levels`. The
        levels of a recovered profile need not be monotone.
    """

    __slots__ = ()


class PlantedProfile(_Profile):
    """
    Profile ``w`` moved along ``elements`` (one group element per index)

    :ivar kind:
        ``'N0'`` (level identically 0), ``'Nplus'`` (strictly increasing
        levels) or ``'Nminus'`` (strictly decreasing levels). Derived from
        the elements when omitted.
    """

    __slots__ = ()

    def __new__(cls, w, elements, kind=None):
        elements = tuple(elements)
        if not elements:
            raise ParameterError("a profile needs at least one element")
        if len(set(g.gamma for g in elements)) != 1:
            raise ParameterError("profile elements must share gamma")
        levels = [g.level for g in elements]
        if kind is None:
            kind = classify_levels(levels)
        if kind not in PROFILE_KINDS:
            raise ParameterError("unknown profile kind {!r}".format(kind))
        steps = [b - a for a, b in zip(levels, levels[1:])]
        consistent = {
            'N0': all(j == 0 for j in levels),
            'Nplus': all(d > 0 for d in steps),
            'Nminus': all(d < 0 for d in steps),
        }[kind]
        if not consistent:
            raise ParameterError(
                "levels {} are inconsistent with kind {}".format(levels, kind))
        return super(PlantedProfile, cls).__new__(cls, w, elements, kind)


def _noise(grid, amplitude, rng, p):
    raw = ndimage.gaussian_filter(
        rng.standard_normal(grid.shape), sigma=2.0, mode='wrap')
    noise = zero_mean(Field._wrap(grid, raw))
    return noise * (amplitude / lp_norm(noise, p.crit))


def synthesize(profiles, noise_amp, K, p, seed=0, grid=None):
    """
    Build ``u_k = sum_n apply(g_k^(n), w^(n)) + noise_k`` for ``k < K``

    :param profiles:
        Sequence of :class:`PlantedProfile`, each with at least ``K``
        elements
    :param noise_amp:
        Non-increasing sequence of ``K`` critical norms of the noise, or a
        single number used for every index
    :param seed:
        Seed of the noise generator
    :param grid:
        Grid of the sequence; only needed when ``profiles`` is empty
    :returns:
        List of ``K`` fields
    :raises DilationRangeError:
        If a planted action is not representable on the grid
    """
    if K < 1:
        raise ParameterError("K must be positive")
    if np.ndim(noise_amp) == 0:
        noise_amp = [float(noise_amp)] * K
    noise_amp = [float(a) for a in noise_amp]
    if len(noise_amp) < K:
        raise ParameterError("need {} noise amplitudes".format(K))
    if any(a < 0 for a in noise_amp):
        raise ParameterError("noise amplitudes must be non-negative")
    if any(b > a for a, b in zip(noise_amp, noise_amp[1:K])):
        raise ParameterError("noise amplitudes must not increase")
    grids = set(prof.w.grid for prof in profiles)
    if grid is not None:
        grids.add(grid)
    if len(grids) > 1:
        raise ParameterError("profiles live on different grids")
    for prof in profiles:
        if len(prof.elements) < K:
            raise ParameterError(
                "profile has {} elements, need {}".format(
                    len(prof.elements), K))
    if not grids:
        raise ParameterError("synthesize() needs a profile or a grid")
    grid = next(iter(grids))
    rng = np.random.default_rng(seed)
    seq = []
    for k in range(K):
        u = Field.zeros(grid)
        for prof in profiles:
            u = u + apply(prof.elements[k], prof.w, p)
        if noise_amp[k] > 0:
            u = u + _noise(grid, noise_amp[k], rng, p)
        seq.append(u)
    return seq


LocatedMass = collections.namedtuple('LocatedMass', 'level shift mass')
LocatedMass.__doc__ = """
Dilation level, translation and unit-cube mass of the strongest bump
"""


def _box_masses(values, grid, side):
    # Periodic convolution with the indicator of a cube of the given side
    coeffs = fft.fftn(values ** 2, workers=fft_workers())
    xi = grid.wavenumbers()
    kernel = side * np.sinc(xi * side / (2.0 * math.pi))
    for axis in range(grid.dim):
        shape = [1] * grid.dim
        shape[axis] = -1
        coeffs = coeffs * kernel.reshape(shape)
    return fft.ifftn(coeffs, workers=fft_workers()).real


def _lowest_level(grid, gamma):
    # cubes wider than half the box overlap their own periodic images
    widest = math.log(0.5 * grid.box_length) / math.log(gamma)
    return max(-max_level(grid, gamma),
               min(0, -int(math.floor(widest + 1e-9))))


def _level_range(grid, gamma, j_range):
    limit = max_level(grid, gamma)
    lowest = _lowest_level(grid, gamma)
    if j_range is None:
        return range(lowest, limit + 1)
    lo, hi = j_range[0], j_range[-1]
    clamped = range(max(lo, lowest), max(min(hi, limit), lowest) + 1)
    if len(clamped) < hi - lo + 1:
        _logger.warning("level range %r clamped to %r", (lo, hi),
                        (clamped.start, clamped.stop - 1))
    return clamped


def locate_mass(u, gamma, j_range, p):
    """
    Find the level and position of the largest rescaled unit-cube mass

    For a level ``j`` the mass of ``apply((0, -j), u)`` in the unit cube
    around ``z`` equals ``gamma^(2*s*j)`` times the mass of ``u`` in the
    cube of side ``gamma^-j`` around ``gamma^-j * z``, which is computed
    directly (cube averages are taken spectrally, so sides need not be a
    whole number of cells).

    :param j_range:
        Candidate levels ``(lo, ..., hi)``; None for every representable
        level. Levels beyond the grid range, and low levels whose cube
        is wider than half the box, are clamped with a warning.
    :returns:
        :class:`LocatedMass` whose ``shift`` is the cube center in the
        coordinates of ``u``
    """
    grid = u.grid
    best = None
    for j in _level_range(grid, gamma, j_range):
        side = float(gamma) ** (-j)
        masses = _box_masses(u.values, grid, side) * float(gamma) ** (
            2.0 * p.s * j)
        index = int(np.argmax(masses))
        mass = float(masses.flat[index])
        if best is None or mass > best.mass:
            point = np.unravel_index(index, grid.shape)
            axis = grid.axis()
            best = LocatedMass(j, tuple(float(axis[i]) for i in point), mass)
    return best


def cocompactness_indicator(seq, gamma, p, j_range=None):
    """
    Supremal localized mass and critical norm of every field

    :returns:
        Pair of lists ``(sup_local_mass, crit_norm)``
    """
    masses = [locate_mass(u, gamma, j_range, p).mass for u in seq]
    norms = [lp_norm(u, p.crit) for u in seq]
    return masses, norms


class ExtractConfig(collections.namedtuple(
        'ExtractConfig', 'tol max_profiles tail j_range window')):
    """
    Settings of :func:`extract`

    :ivar tol:
        Final-index critical norm of the residual that ends the search
    :ivar max_profiles:
        Largest number of profiles extracted
    :ivar tail:
        Number of final indices averaged into the weak limit
    :ivar j_range:
        Candidate dilation levels, None for all representable ones
    :ivar window:
        Half-width of the centered averaging window as a fraction of the
        box length
    """

    __slots__ = ()

    def __new__(cls, tol=1e-2, max_profiles=4, tail=2, j_range=None,
                window=0.125):
        if not tol > 0:
            raise ParameterError("tol must be positive")
        if int(max_profiles) != max_profiles or max_profiles < 0:
            raise ParameterError("max_profiles must be a non-negative integer")
        if int(tail) != tail or tail < 1:
            raise ParameterError("tail must be a positive integer")
        if not 0 < window <= 0.5:
            raise ParameterError("window must lie in (0, 1/2]")
        if j_range is not None:
            j_range = (int(j_range[0]), int(j_range[-1]))
        return super(ExtractConfig, cls).__new__(
            cls, float(tol), int(max_profiles), int(tail), j_range,
            float(window))


NormBudget = collections.namedtuple('NormBudget', 'total limsup maximum')
NormBudget.__doc__ = """
Sum of squared profile seminorms against the tail supremum and the overall
maximum of the squared seminorms of the sequence
"""

PhiBudget = collections.namedtuple('PhiBudget', 'sequence profiles')
PhiBudget.__doc__ = """
Functional of the final field against the sum over profiles
"""


class DecompositionReport(collections.namedtuple(
        'DecompositionReport',
        'profiles profile_norms norm_budget separations'
        ' remainder_crit_norms residual_history phi_budget')):
    """
    Outcome of :func:`extract`

    :ivar profiles:
        List of :class:`ExtractedProfile` in extraction order
    :ivar profile_norms:
        Squared seminorm of every profile
    :ivar separations:
        Mapping ``(n, m) -> [separation at every index]``
    :ivar remainder_crit_norms:
        Critical norm of the final residual at every index
    :ivar residual_history:
        Final-index residual critical norm before extraction and after
        every profile
    :ivar phi_budget:
        :class:`PhiBudget` when a nonlinearity was given, else None
    """

    __slots__ = ()

    def as_dict(self):
        return collections.OrderedDict([
            ('profiles', [{
                'kind': prof.kind,
                'levels': prof.levels,
                'shifts': [list(map(float, g.shift))
                           for g in prof.elements],
                'norm_sq': prof_norm,
            } for prof, prof_norm in zip(self.profiles, self.profile_norms)]),
            ('norm_budget', self.norm_budget._asdict()),
            ('separations', collections.OrderedDict(
                ('{},{}'.format(*key), value)
                for key, value in sorted(self.separations.items()))),
            ('remainder_crit_norms', list(self.remainder_crit_norms)),
            ('residual_history', list(self.residual_history)),
            ('phi_budget', (None if self.phi_budget is None
                            else self.phi_budget._asdict())),
        ])


def _window_mask(grid, fraction):
    half = fraction * grid.box_length
    inside = np.abs(grid.axis()) < half
    mask = np.ones(grid.shape, dtype=bool)
    for axis in range(grid.dim):
        shape = [1] * grid.dim
        shape[axis] = -1
        mask &= inside.reshape(shape)
    return mask


def extract(seq, gamma, p, cfg=None, nl=None):
    """
    Extract profiles from a sequence of fields

    Every pass locates the strongest bump of each residual, pulls the
    residuals back by the located group elements, averages the last
    ``cfg.tail`` of them inside a centered window into a profile, and
    subtracts the pushed-forward profile from every residual. Profiles with
    a constant level are renormalized to level 0.

    :param nl:
        Optional nonlinearity; adds the :class:`PhiBudget` to the report
    :returns:
        :class:`DecompositionReport`
    :raises ExtractionError:
        If a pass reduces the final residual norm by less than 1%
    """
    cfg = ExtractConfig() if cfg is None else cfg
    seq = list(seq)
    if len(seq) < 2 * cfg.tail:
        raise ParameterError(
            "extract() needs at least {} fields, got {}".format(
                2 * cfg.tail, len(seq)))
    grid = seq[0].grid
    if any(u.grid != grid for u in seq):
        raise ParameterError("sequence fields live on different grids")
    mask = _window_mask(grid, cfg.window)
    residuals = list(seq)
    profiles = []
    history = [lp_norm(residuals[-1], p.crit)]
    while len(profiles) < cfg.max_profiles and history[-1] >= cfg.tol:
        found = [locate_mass(r, gamma, cfg.j_range, p) for r in residuals]
        elements = [GroupElement(gamma, loc.shift, loc.level)
                    for loc in found]
        tail = [pull_back(g, r, p).values
                for g, r in zip(elements[-cfg.tail:], residuals[-cfg.tail:])]
        w = Field._wrap(grid, np.where(mask, np.mean(tail, axis=0), 0.0))
        levels = [g.level for g in elements]
        kind = classify_levels(levels)
        if len(set(levels)) == 1 and levels[0] != 0:
            w = apply(GroupElement(gamma, (0, ) * grid.dim, levels[0]), w, p,
                      strict=False)
            elements = [GroupElement(gamma, g.shift, 0) for g in elements]
        residuals = [r - apply(g, w, p, strict=False)
                     for g, r in zip(elements, residuals)]
        after = lp_norm(residuals[-1], p.crit)
        if after > 0.99 * history[-1]:
            raise ExtractionError(
                "profile {} reduced the final residual from {:.6g} to {:.6g};"
                " profiles are probably not separated".format(
                    len(profiles) + 1, history[-1], after))
        history.append(after)
        profiles.append(ExtractedProfile(w, elements, kind))
        _logger.info("profile %d: kind=%s levels=%s residual=%.3e",
                     len(profiles), kind, levels, after)
    norms = [dnorm_sq(u, p) for u in seq]
    profile_norms = [dnorm_sq(prof.w, p) for prof in profiles]
    budget = NormBudget(
        math.fsum(profile_norms),
        max(norms[-cfg.tail:]), max(norms))
    separations = collections.OrderedDict()
    for n in range(len(profiles)):
        for m in range(n + 1, len(profiles)):
            separations[(n, m)] = [
                separation(a, b) for a, b in zip(profiles[n].elements,
                                                 profiles[m].elements)]
    phi_budget = None
    if nl is not None:
        phi_budget = PhiBudget(
            phi(seq[-1], nl), math.fsum(phi(prof.w, nl) for prof in profiles))
    return DecompositionReport(
        profiles, profile_norms, budget, separations,
        [lp_norm(r, p.crit) for r in residuals], history, phi_budget)
