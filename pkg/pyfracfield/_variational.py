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
:mod:`pyfracfield._variational` -- energy, levels and constrained solvers
=========================================================================

The energy of a field is ``I(u) = dnorm_sq(u)/2 - phi(u)``.

Spatial rescaling ``u(x/t)`` is never performed on the grid. It multiplies
the seminorm by ``t^(N-2s)`` and the functional by ``t^N`` exactly, so every
quantity along the path ``t -> u(./t)`` is evaluated in closed form from
``(dnorm_sq(u), phi(u))``.

Solvers work on the zero-mean subspace with gradients taken in the seminorm
metric (see :func:`~pyfracfield.phi_gradient`). They are deterministic for a
given :class:`SolverConfig`.
"""
import collections
import logging
import math

import numpy as np
from scipy import ndimage
from scipy import optimize

from pyfracfield._errors import DegenerateFieldError
from pyfracfield._errors import ParameterError
from pyfracfield._errors import SolverError
from pyfracfield._fractional import d_inner
from pyfracfield._fractional import dnorm_sq
from pyfracfield._fractional import frac_laplacian
from pyfracfield._grid import Field
from pyfracfield._grid import bump
from pyfracfield._grid import integrate
from pyfracfield._grid import zero_mean
from pyfracfield._nonlinearity import phi
from pyfracfield._nonlinearity import phi_gradient
from pyfracfield._nonlinearity import positivity_witness

__all__ = [
    'GroundState',
    'LevelsReport',
    'PathMax',
    'Residual',
    'SolverConfig',
    'SolverResult',
    'energy',
    'energy_gradient',
    'ground_state',
    'level_threshold',
    'levels',
    'maximize_S',
    'minimize_quotient',
    'mountain_pass_level',
    'nehari_residual',
    'path_energy',
    'path_max',
    'path_scan',
    'path_value',
    'pohozaev_residual',
    'quotient',
    'stated_level_threshold',
]

_logger = logging.getLogger(__name__)

# Line search gives up below this step
_MIN_STEP = 1e-12

_SOLVER_INITS = ('bump', 'random')


class SolverConfig(collections.namedtuple(
        'SolverConfig',
        'step max_iters tol seed backtracking init restarts')):
    """
    Settings shared by the constrained solvers

    :ivar step:
        Initial step, relative to the radius of the current iterate
    :ivar max_iters:
        Iteration cap
    :ivar tol:
        Relative tangential gradient norm accepted as stationary
    :ivar seed:
        Seed of the ``'random'`` initialization and of restarts
    :ivar backtracking:
        Step reduction factor of the line search, in ``(0, 1)``
    :ivar init:
        ``'bump'`` (radial bump of width ``L/10``) or ``'random'``
    :ivar restarts:
        Re-initializations allowed when the functional is not positive
    """

    __slots__ = ()

    def __new__(cls, step=0.5, max_iters=2000, tol=1e-6, seed=0,
                backtracking=0.5, init='bump', restarts=3):
        if not step > 0:
            raise ParameterError("step must be positive")
        if int(max_iters) != max_iters or max_iters < 1:
            raise ParameterError("max_iters must be an integer >= 1")
        if not tol > 0:
            raise ParameterError("tol must be positive")
        if not 0 < backtracking < 1:
            raise ParameterError("backtracking must lie in (0, 1)")
        if init not in _SOLVER_INITS:
            raise ParameterError(
                "init must be one of {}, got {!r}".format(
                    ', '.join(_SOLVER_INITS), init))
        if int(restarts) != restarts or restarts < 0:
            raise ParameterError("restarts must be a non-negative integer")
        return super(SolverConfig, cls).__new__(
            cls, float(step), int(max_iters), float(tol), int(seed),
            float(backtracking), init, int(restarts))


SolverResult = collections.namedtuple(
    'SolverResult',
    'field value stationarity iterations converged status scale')
SolverResult.__doc__ = """
Outcome of a constrained solve

``status`` is one of ``'converged'``, ``'max-iters'``, ``'stagnated'`` or
``'negative-phi'``. ``scale`` is only set by :func:`minimize_quotient`: the
field ``u(./scale)`` has ``phi == 1``.
"""

Residual = collections.namedtuple('Residual', 'value relative')

PathMax = collections.namedtuple('PathMax', 'tstar maxval')


class LevelsReport(collections.namedtuple(
        'LevelsReport',
        'S1 Sl l0 l0_stated cI infimum_I beta pohozaev_residual'
        ' nehari_residual stationarity converged energy_at_maximizer')):
    """
    Levels of the energy and the diagnostics of the maximizer at ``l0``

    ``l0_stated`` is :func:`stated_level_threshold` of ``S1``, kept next to
    ``l0`` for comparison.
    """

    __slots__ = ()

    def as_dict(self):
        info = self._asdict()
        info['Sl'] = collections.OrderedDict(
            (repr(float(l)), value) for l, value in sorted(self.Sl.items()))
        return info


GroundState = collections.namedtuple(
    'GroundState',
    'field multiplier beta residual energy norm_sq identity_residual'
    ' status report')
GroundState.__doc__ = """
Constrained critical point certified as a ground state after rescaling

``field`` is the computed profile ``w``; the ground state is
``u(x) = w(x/beta)``. ``energy`` and ``norm_sq`` belong to ``u``;
``identity_residual`` is the relative error of ``I(u) == (s/N) * |u|^2``.
``report`` carries a :class:`LevelsReport` when requested.
"""


def energy(u, nl, p):
    """
    ``dnorm_sq(u)/2 - phi(u)``
    """
    return 0.5 * dnorm_sq(u, p) - phi(u, nl)


def energy_gradient(u, nl, p):
    """
    Riesz representative of the derivative of :func:`energy` on zero-mean
    fields
    """
    return zero_mean(u) - phi_gradient(u, nl, p)


def _relative(value, scale):
    return value / max(scale, np.finfo(float).tiny)


def pohozaev_residual(u, nl, p):
    """
    ``dnorm_sq(u) - crit * phi(u)`` and its size relative to ``dnorm_sq(u)``

    :returns:
        :class:`Residual`
    """
    norm_sq = dnorm_sq(u, p)
    value = norm_sq - p.crit * phi(u, nl)
    return Residual(value, _relative(value, norm_sq))


def nehari_residual(u, nl, p):
    """
    ``dnorm_sq(u) - integrate(f(u) * u)`` and its relative size

    :returns:
        :class:`Residual`
    """
    norm_sq = dnorm_sq(u, p)
    work = integrate(Field._wrap(u.grid, nl.f(u.values) * u.values))
    value = norm_sq - work
    return Residual(value, _relative(value, norm_sq))


def _check_t(t):
    if not t > 0:
        raise ParameterError("path parameter must be positive, got {!r}"
                             .format(t))


def path_value(norm_sq, phi_u, p, t):
    """
    Energy of ``u(./t)`` from the seminorm and functional of ``u``

    :returns:
        ``t^(N-2s) * norm_sq / 2 - t^N * phi_u``
    """
    _check_t(t)
    return (0.5 * t ** (p.dim - 2.0 * p.s) * norm_sq
            - t ** p.dim * phi_u)


def path_energy(u, nl, p, t):
    """
    Energy of ``u(./t)``

    :raises ParameterError:
        If ``t <= 0``
    """
    _check_t(t)
    return path_value(dnorm_sq(u, p), phi(u, nl), p, t)


def _check_path(norm_sq, phi_u):
    if not norm_sq > 0:
        raise ParameterError("path needs a positive seminorm")
    if not phi_u > 0:
        raise ParameterError(
            "path is not admissible: phi must be positive, got {!r}".format(
                phi_u))


def path_max(norm_sq, phi_u, p):
    """
    Maximum of the energy along ``t -> u(./t)``

    :returns:
        :class:`PathMax` with ``tstar = (norm_sq/(crit*phi_u))^(1/(2s))``
    :raises ParameterError:
        If ``phi_u <= 0`` (no path leaves the origin into negative energy)
    """
    _check_path(norm_sq, phi_u)
    tstar = (norm_sq / (p.crit * phi_u)) ** (1.0 / (2.0 * p.s))
    return PathMax(tstar, path_value(norm_sq, phi_u, p, tstar))


def path_scan(norm_sq, phi_u, p, num=10000):
    """
    Numerical maximum of the path energy

    Scans ``num`` logarithmically spaced ``t`` over twelve decades around
    ``(norm_sq/phi_u)^(1/(2s))`` and refines the best bracket with a bounded
    scalar search in ``log t``.

    :returns:
        :class:`PathMax`
    """
    _check_path(norm_sq, phi_u)
    center = math.log10((norm_sq / phi_u) ** (1.0 / (2.0 * p.s)))
    logs = np.linspace(center - 6.0, center + 6.0, num)
    t = 10.0 ** logs
    values = (0.5 * t ** (p.dim - 2.0 * p.s) * norm_sq
              - t ** p.dim * phi_u)
    best = int(np.argmax(values))
    lo = logs[max(best - 1, 0)]
    hi = logs[min(best + 1, num - 1)]
    result = optimize.minimize_scalar(
        lambda x: -path_value(norm_sq, phi_u, p, 10.0 ** x),
        bounds=(lo, hi), method='bounded', options={'xatol': 1e-12})
    if -result.fun >= values[best]:
        return PathMax(10.0 ** result.x, -result.fun)
    return PathMax(t[best], values[best])


def quotient(u, nl, p):
    """
    Dilation-invariant quotient ``dnorm_sq(u) / phi(u)^((N-2s)/N)``

    :raises DegenerateFieldError:
        If ``phi(u) <= 0``
    """
    phi_u = phi(u, nl)
    if not phi_u > 0:
        raise DegenerateFieldError(
            "quotient() needs phi(u) > 0, got {!r}".format(phi_u))
    return dnorm_sq(u, p) / phi_u ** p.quotient_exponent


def level_threshold(S1, p):
    """
    Sphere level ``l0 = (crit * S1)^(-(N-2s)/(2s))``

    The maximizer of ``phi`` on ``{dnorm_sq == l0}`` attains its path
    maximum at ``t == 1`` and is a critical point of the energy.
    """
    if not S1 > 0:
        raise ParameterError("S1 must be positive")
    return (p.crit * S1) ** (-(p.dim - 2.0 * p.s) / (2.0 * p.s))


def stated_level_threshold(S1, p):
    """
    Sphere level in its usual written form ``((crit/2) * S1)^(-(N-2s)/(2s))``

    It exceeds :func:`level_threshold` by ``2^((N-2s)/(2s))``, the factor
    of the Lagrange multiplier bookkeeping. Reported for comparison only;
    the solvers use :func:`level_threshold`.
    """
    if not S1 > 0:
        raise ParameterError("S1 must be positive")
    return (0.5 * p.crit * S1) ** (-(p.dim - 2.0 * p.s) / (2.0 * p.s))


def mountain_pass_level(S1, p):
    """
    ``c(I) = (crit*S1)^(-(N-2s)/(2s))/2 - S1 * (crit*S1)^(-N/(2s))``
    """
    if not S1 > 0:
        raise ParameterError("S1 must be positive")
    base = p.crit * S1
    return (0.5 * base ** (-(p.dim - 2.0 * p.s) / (2.0 * p.s))
            - S1 * base ** (-p.dim / (2.0 * p.s)))


def _require_positivity(nl):
    if positivity_witness(nl) is None:
        raise SolverError(
            "{!r} is never positive, no admissible path exists".format(nl))


def _initial_field(grid, cfg, attempt=0, amplitude=1.0):
    width = grid.box_length / 10.0 * 0.7 ** attempt
    u = bump(grid, width=width, amplitude=amplitude)
    if cfg.init == 'random':
        rng = np.random.default_rng(cfg.seed + attempt)
        noise = ndimage.gaussian_filter(
            rng.standard_normal(grid.shape),
            sigma=max(1.0, 0.25 * width / grid.spacing), mode='wrap')
        noise /= max(np.max(np.abs(noise)), np.finfo(float).tiny)
        u = Field._wrap(grid, u.values * (1.0 + 0.5 * noise))
    return zero_mean(u)


def _to_sphere(u, l, p):
    u = zero_mean(u)
    norm_sq = dnorm_sq(u, p)
    if not norm_sq > 0:
        raise DegenerateFieldError("cannot normalize a constant field")
    return u * math.sqrt(l / norm_sq)


def _normalize_sign(u, nl):
    values = u.values
    peak = values.flat[int(np.argmax(np.abs(values)))]
    if peak < 0 and nl.F(peak) == nl.F(-peak):
        return -u
    return u


def maximize_S(l, nl, p, grid, cfg=None, init=None):
    """
    Maximize ``phi`` on the sphere ``{dnorm_sq == l}``

    Projected gradient ascent: each step moves along the tangential part of
    :func:`phi_gradient`, is projected back to the sphere and is accepted
    only if ``phi`` increases (otherwise it is shortened by
    ``cfg.backtracking``).

    :param init:
        Optional initial :class:`Field`; by default the configured bump
    :returns:
        :class:`SolverResult` whose ``value`` is the estimate of ``S_l``
    :raises SolverError:
        If ``nl`` is never positive
    """
    if not l > 0:
        raise ParameterError("level must be positive, got {!r}".format(l))
    cfg = SolverConfig() if cfg is None else cfg
    _require_positivity(nl)
    _logger.info("maximize_S l=%g dim=%d s=%g M=%d L=%g", l, p.dim, p.s,
                 grid.points_per_axis, grid.box_length)
    start = _initial_field(grid, cfg) if init is None else init
    u = _to_sphere(start, l, p)
    value = phi(u, nl)
    step = cfg.step
    status = 'max-iters'
    stationarity = math.inf
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        g = phi_gradient(u, nl, p)
        g_norm_sq = dnorm_sq(g, p)
        if g_norm_sq == 0:
            stationarity = 0.0
            status = 'converged'
            break
        tangent = g - (d_inner(g, u, p) / l) * u
        stationarity = math.sqrt(dnorm_sq(tangent, p) / g_norm_sq)
        if stationarity < cfg.tol:
            status = 'converged'
            break
        direction = tangent * math.sqrt(l / g_norm_sq)
        while step >= _MIN_STEP:
            candidate = _to_sphere(u + step * direction, l, p)
            candidate_value = phi(candidate, nl)
            if candidate_value > value:
                u, value = candidate, candidate_value
                step = min(step * 1.25, 8.0 * cfg.step)
                break
            step *= cfg.backtracking
        else:
            status = 'negative-phi' if value <= 0 else 'stagnated'
            break
        if iterations % 100 == 0:
            _logger.debug("maximize_S iter=%d phi=%.12g stationarity=%.3e",
                          iterations, value, stationarity)
    if status != 'converged':
        _logger.warning("maximize_S stopped (%s) after %d iterations,"
                        " stationarity %.3e", status, iterations,
                        stationarity)
    return SolverResult(_normalize_sign(u, nl), value, stationarity,
                        iterations, status == 'converged', status, None)


def _quotient_parts(u, nl, p):
    return dnorm_sq(u, p), phi(u, nl)


def minimize_quotient(nl, p, grid, cfg=None, init=None):
    """
    Minimize :func:`quotient` over fields with ``phi > 0``

    The infimum equals the minimum of the seminorm on ``{phi == 1}``: the
    constraint is restored by the exact rescaling ``u(./scale)`` with
    ``scale = phi(u)^(-1/N)``, reported in the result.

    :returns:
        :class:`SolverResult` whose ``value`` is the estimate of the infimum
    :raises SolverError:
        If no initialization with ``phi > 0`` is found within
        ``cfg.restarts`` restarts
    """
    cfg = SolverConfig() if cfg is None else cfg
    _require_positivity(nl)
    theta = p.quotient_exponent
    amplitude = abs(positivity_witness(nl))
    _logger.info("minimize_quotient dim=%d s=%g M=%d L=%g", p.dim, p.s,
                 grid.points_per_axis, grid.box_length)
    attempt = 0
    u = None if init is None else zero_mean(init)
    while True:
        if u is None:
            u = _initial_field(grid, cfg, attempt, amplitude)
        norm_sq, phi_u = _quotient_parts(u, nl, p)
        if phi_u > 0 and norm_sq > 0:
            result = _descend_quotient(u, nl, p, cfg, theta)
            if result.status != 'negative-phi':
                break
        if attempt >= cfg.restarts:
            raise SolverError(
                "minimize_quotient() found no field with phi > 0 after {}"
                " restarts".format(cfg.restarts))
        attempt += 1
        _logger.warning("minimize_quotient restart %d", attempt)
        u = None
    w = _normalize_sign(result.field, nl)
    scale = phi(w, nl) ** (-1.0 / p.dim)
    return result._replace(field=w, scale=scale)


def _descend_quotient(u, nl, p, cfg, theta):
    norm_sq, phi_u = _quotient_parts(u, nl, p)
    value = norm_sq / phi_u ** theta
    step = cfg.step
    status = 'max-iters'
    stationarity = math.inf
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        g = phi_gradient(u, nl, p)
        # half the gradient of the quotient, up to the factor phi^-theta
        half = u - (0.5 * theta * norm_sq / phi_u) * g
        stationarity = math.sqrt(dnorm_sq(half, p) / norm_sq)
        if stationarity < cfg.tol:
            status = 'converged'
            break
        rejected_phi = False
        while step >= _MIN_STEP:
            candidate = u - step * half
            c_norm_sq, c_phi = _quotient_parts(candidate, nl, p)
            if not c_phi > 0:
                rejected_phi = True
            elif c_norm_sq / c_phi ** theta < value:
                u, norm_sq, phi_u = candidate, c_norm_sq, c_phi
                value = norm_sq / phi_u ** theta
                step = min(step * 1.25, 8.0 * cfg.step)
                break
            step *= cfg.backtracking
        else:
            status = 'negative-phi' if rejected_phi else 'stagnated'
            break
        if iterations % 100 == 0:
            _logger.debug("minimize_quotient iter=%d R=%.12g"
                          " stationarity=%.3e", iterations, value,
                          stationarity)
    if status != 'converged':
        _logger.warning("minimize_quotient stopped (%s) after %d iterations,"
                        " stationarity %.3e", status, iterations,
                        stationarity)
    return SolverResult(u, value, stationarity, iterations,
                        status == 'converged', status, None)


def _fit_multiplier(w, nl, p):
    a = frac_laplacian(w, p).values
    b = nl.f(w.values)
    b = b - np.mean(b)
    ab = math.fsum((a * b).ravel())
    bb = math.fsum((b * b).ravel())
    if ab == 0 or bb == 0:
        return 0.0, math.inf
    mu = bb / ab
    misfit = np.sqrt(np.sum((a - b / mu) ** 2))
    return mu, float(misfit / max(np.sqrt(np.sum(a * a)),
                                  np.finfo(float).tiny))


def ground_state(nl, p, grid, cfg=None, field=None, route='quotient',
                 with_levels=False):
    """
    Assemble a ground state from a constrained critical point

    The profile ``w`` (given, or computed along ``route``) satisfies
    ``(-Laplacian)^s w == f(w) / mu`` in the least-squares sense. The field
    ``u(x) = w(x/beta)`` with ``beta = mu^(-1/(2s))`` then solves the
    equation with multiplier one. The grid is never rescaled: ``beta`` and
    the energy of ``u`` are obtained from the scaling laws.

    :param route:
        ``'quotient'`` uses :func:`minimize_quotient`, ``'sphere'`` the
        maximizer of ``phi`` on the sphere of radius ``l0``
    :param with_levels:
        Also compute the full :class:`LevelsReport`
    :returns:
        :class:`GroundState`; a non-positive multiplier is reported through
        ``status == 'nonpositive-multiplier'`` and ``beta is None``
    """
    cfg = SolverConfig() if cfg is None else cfg
    if route not in ('quotient', 'sphere'):
        raise ParameterError("route must be 'quotient' or 'sphere'")
    report = None
    status = 'ok'
    if with_levels:
        report = levels(nl, p, grid, cfg)
    if field is None:
        if route == 'quotient':
            solved = minimize_quotient(nl, p, grid, cfg)
        else:
            s1 = maximize_S(1.0, nl, p, grid, cfg)
            l0 = level_threshold(s1.value, p)
            solved = maximize_S(l0, nl, p, grid, cfg,
                                init=s1.field * math.sqrt(l0))
        field = solved.field
        if not solved.converged:
            status = solved.status
    mu, residual = _fit_multiplier(field, nl, p)
    norm_sq, phi_w = dnorm_sq(field, p), phi(field, nl)
    if not mu > 0:
        _logger.warning("ground_state multiplier %g is not positive", mu)
        return GroundState(field, mu, None, residual, None, None, None,
                           'nonpositive-multiplier', report)
    beta = mu ** (-1.0 / (2.0 * p.s))
    u_norm_sq = beta ** (p.dim - 2.0 * p.s) * norm_sq
    u_energy = 0.5 * u_norm_sq - beta ** p.dim * phi_w
    expected = p.s / p.dim * u_norm_sq
    identity = abs(u_energy - expected) / max(expected, np.finfo(float).tiny)
    return GroundState(field, mu, beta, residual, u_energy, u_norm_sq,
                       identity, status, report)


def levels(nl, p, grid, cfg=None, extra_levels=(0.5, 2.0, 4.0)):
    """
    Compute the energy levels of a nonlinearity

    ``S1`` and ``S_l`` come from :func:`maximize_S`, ``l0`` and ``cI`` from
    the closed forms in ``S1`` and the infimum from
    :func:`minimize_quotient`. The residuals and ``beta`` are measured at
    the maximizer on the sphere of radius ``l0``.

    :returns:
        :class:`LevelsReport`
    """
    cfg = SolverConfig() if cfg is None else cfg
    first = maximize_S(1.0, nl, p, grid, cfg)
    S1 = first.value
    if not S1 > 0:
        raise SolverError("S1 = {!r} is not positive".format(S1))
    Sl = {1.0: S1}
    for l in extra_levels:
        l = float(l)
        if l == 1.0:
            continue
        Sl[l] = maximize_S(l, nl, p, grid, cfg,
                           init=first.field * math.sqrt(l)).value
    l0 = level_threshold(S1, p)
    cI = mountain_pass_level(S1, p)
    # started from the configured initial field, not from the maximizer
    infimum = minimize_quotient(nl, p, grid, cfg).value
    at_l0 = maximize_S(l0, nl, p, grid, cfg,
                       init=first.field * math.sqrt(l0))
    w = at_l0.field
    state = ground_state(nl, p, grid, cfg, field=w)
    return LevelsReport(
        S1=S1, Sl=Sl, l0=l0, l0_stated=stated_level_threshold(S1, p),
        cI=cI, infimum_I=infimum, beta=state.beta,
        pohozaev_residual=pohozaev_residual(w, nl, p).relative,
        nehari_residual=nehari_residual(w, nl, p).relative,
        stationarity=max(first.stationarity, at_l0.stationarity),
        converged=first.converged and at_l0.converged,
        energy_at_maximizer=energy(w, nl, p))
