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
:mod:`pyfracfield._nonlinearity` -- scalar nonlinearities and the functional
============================================================================

A nonlinearity is a scalar primitive ``F`` together with its derivatives
``f = F'`` and ``df = F''``. All three accept scalars or numpy arrays.

``F`` is *self-similar* with factor ``gamma`` when::

    F(t) == gamma**(-N*j) * F(gamma**(a*j) * t)    for every integer j

with ``a = (N - 2s)/2``. The pure critical power is self-similar for every
factor, the log-cosine power only for ``gamma = exp(4*pi/(N - 2s))`` and its
integer powers.
"""
import abc
import collections
import logging
import math

import numpy as np

from pyfracfield._errors import ParameterError
from pyfracfield._fractional import inverse_frac_laplacian
from pyfracfield._grid import Field
from pyfracfield._grid import integrate
from pyfracfield._grid import zero_mean
from pyfracfield._group import apply

__all__ = [
    'AdditivityDefect',
    'CriticalPower',
    'LogCosPower',
    'Nonlinearity',
    'PowerLaw',
    'additivity_defect',
    'derivative_selfsim_residual',
    'growth_constant',
    'make_nonlinearity',
    'nonlinearity_kinds',
    'phi',
    'phi_dilation_invariance',
    'phi_gradient',
    'positivity_witness',
    'selfsim_residual',
]

_logger = logging.getLogger(__name__)

# |t| below this evaluates to exactly 0
_TINY = 1e-300


def _sample_points(lo=-8.0, hi=8.0, num=4001):
    t = np.logspace(lo, hi, num)
    return np.concatenate([-t[::-1], t])


def _like(t, result):
    if np.ndim(t) == 0:
        return float(result)
    return result


class Nonlinearity(abc.ABC):
    """
    Abstract scalar nonlinearity tied to a :class:`FracParams`

    Concrete classes implement :meth:`_F`, :meth:`_f` and :meth:`_df` on
    float arrays and may report a self-similarity factor.
    """

    kind = None

    def __init__(self, p, coefficient=1.0):
        coefficient = float(coefficient)
        if not math.isfinite(coefficient) or coefficient == 0:
            raise ParameterError(
                "coefficient must be finite and non-zero, got {!r}".format(
                    coefficient))
        self._p = p
        self._coefficient = coefficient

    def __repr__(self):
        return "<{} kind:{} coefficient:{} dim:{} s:{}>".format(
            self.__class__.__name__, self.kind, self._coefficient,
            self._p.dim, self._p.s)

    @property
    def params(self):
        return self._p

    @property
    def coefficient(self):
        return self._coefficient

    @property
    def gamma(self):
        """
        smallest self-similarity factor, or None

        For :class:`CriticalPower` every factor works and this is None too;
        use :meth:`selfsimilar_with` to test a given factor.
        """
        return None

    def describe(self):
        """
        Parameters as a plain dictionary (used by reports)
        """
        return {'kind': self.kind, 'coefficient': self._coefficient}

    @abc.abstractmethod
    def selfsimilar_with(self, gamma):
        """
        Check if the primitive is self-similar with factor ``gamma``
        """

    @abc.abstractmethod
    def _F(self, t):
        pass

    @abc.abstractmethod
    def _f(self, t):
        pass

    @abc.abstractmethod
    def _df(self, t):
        pass

    def F(self, t):
        """
        Primitive F(t)
        """
        t = np.asarray(t, dtype=np.float64)
        return _like(t, self._coefficient * self._F(t))

    def f(self, t):
        """
        Derivative f(t) = F'(t)
        """
        t = np.asarray(t, dtype=np.float64)
        return _like(t, self._coefficient * self._f(t))

    def df(self, t):
        """
        Second derivative F''(t)
        """
        t = np.asarray(t, dtype=np.float64)
        return _like(t, self._coefficient * self._df(t))


class PowerLaw(Nonlinearity):
    """
    ``F(t) = c * |t|^q`` for an exponent ``q > 1``
    """

    kind = 'power'

    def __init__(self, p, exponent, coefficient=1.0):
        super(PowerLaw, self).__init__(p, coefficient)
        exponent = float(exponent)
        if not exponent > 1:
            raise ParameterError(
                "power exponent must exceed 1, got {!r}".format(exponent))
        self._q = exponent

    @property
    def exponent(self):
        return self._q

    def describe(self):
        info = super(PowerLaw, self).describe()
        info['exponent'] = self._q
        return info

    def selfsimilar_with(self, gamma):
        return gamma > 1 and abs(self._q - self._p.crit) <= 1e-12 * self._q

    def _F(self, t):
        return np.abs(t) ** self._q

    def _f(self, t):
        return self._q * np.sign(t) * np.abs(t) ** (self._q - 1.0)

    def _df(self, t):
        with np.errstate(divide='ignore'):
            return self._q * (self._q - 1.0) * np.abs(t) ** (self._q - 2.0)


class CriticalPower(PowerLaw):
    """
    ``F(t) = c * |t|^crit``, self-similar for every factor
    """

    kind = 'critical'

    def __init__(self, p, coefficient=1.0):
        super(CriticalPower, self).__init__(p, p.crit, coefficient)

    def describe(self):
        return Nonlinearity.describe(self)

    def selfsimilar_with(self, gamma):
        return gamma > 1


class LogCosPower(Nonlinearity):
    """
    ``F(t) = c * cos(ln|t|) * |t|^crit`` with ``F(0) = 0``

    The derivative is ``(crit*cos(ln|t|) - sin(ln|t|)) * |t|^(crit-2) * t``.
    """

    kind = 'logcos'

    @property
    def gamma(self):
        return math.exp(4.0 * math.pi / (self._p.dim - 2.0 * self._p.s))

    def selfsimilar_with(self, gamma):
        if not gamma > 1:
            return False
        turns = math.log(gamma) * self._p.dilation_exponent / (2.0 * math.pi)
        return abs(turns - round(turns)) <= 1e-12 * max(1.0, turns) \
            and round(turns) >= 1

    def _parts(self, t):
        a = np.abs(t)
        small = a < _TINY
        safe = np.where(small, 1.0, a)
        log_a = np.log(safe)
        return small, safe, np.cos(log_a), np.sin(log_a)

    def _F(self, t):
        q = self._p.crit
        small, safe, c, _ = self._parts(t)
        return np.where(small, 0.0, c * safe ** q)

    def _f(self, t):
        q = self._p.crit
        small, safe, c, s = self._parts(t)
        return np.where(small, 0.0, (q * c - s) * safe ** (q - 1.0)
                        * np.sign(t))

    def _df(self, t):
        q = self._p.crit
        small, safe, c, s = self._parts(t)
        return np.where(small, 0.0, ((q * q - q - 1.0) * c
                                     - (2.0 * q - 1.0) * s)
                        * safe ** (q - 2.0))


_nonlinearity_info = collections.namedtuple(
    '_nonlinearity_info', 'kind cls param_names doc')

# Registered nonlinearity kinds, selectable by name from configuration
_nonlinearity_kinds = (
    ('critical', CriticalPower, ('coefficient', ),
     "pure critical power c|t|^crit"),
    ('logcos', LogCosPower, ('coefficient', ),
     "log-cosine critical power c cos(ln|t|)|t|^crit"),
    ('power', PowerLaw, ('exponent', 'coefficient'),
     "general power c|t|^q, self-similar only for q = crit"),
)

_nonlinearity_kinds = collections.OrderedDict(
    (info.kind, info) for info in (
        _nonlinearity_info(*row) for row in _nonlinearity_kinds))


def nonlinearity_kinds():
    """
    Names of all registered nonlinearity kinds
    """
    return list(_nonlinearity_kinds)


def make_nonlinearity(kind, p, **params):
    """
    Build a registered nonlinearity by name

    :param kind:
        One of :func:`nonlinearity_kinds`
    :param p:
        :class:`FracParams`
    :param params:
        Keyword parameters of the kind, for example ``exponent=3`` for
        ``'power'``
    :raises ParameterError:
        For unknown kinds and parameters
    """
    try:
        info = _nonlinearity_kinds[kind]
    except KeyError:
        raise ParameterError(
            "unknown nonlinearity kind {!r}, expected one of {}".format(
                kind, ', '.join(_nonlinearity_kinds)))
    unknown = set(params) - set(info.param_names)
    if unknown:
        raise ParameterError(
            "nonlinearity {!r} does not take {}".format(
                kind, ', '.join(sorted(unknown))))
    try:
        return info.cls(p, **params)
    except TypeError as exc:
        raise ParameterError(
            "bad parameters for nonlinearity {!r}: {}".format(kind, exc))


def selfsim_residual(nl, gamma, p, t, j):
    """
    ``|F(t) - gamma^(-N*j) * F(gamma^(a*j) * t)|``
    """
    if not gamma > 1:
        raise ParameterError("gamma must be greater than 1")
    scaled = nl.F(gamma ** (p.dilation_exponent * j) * t)
    return abs(nl.F(t) - gamma ** (-p.dim * j) * scaled)


def derivative_selfsim_residual(nl, gamma, p, t, j):
    """
    ``|f(t) - gamma^(-(N+2s)*j/2) * f(gamma^(a*j) * t)|``
    """
    if not gamma > 1:
        raise ParameterError("gamma must be greater than 1")
    scaled = nl.f(gamma ** (p.dilation_exponent * j) * t)
    return abs(nl.f(t)
               - gamma ** (-0.5 * (p.dim + 2.0 * p.s) * j) * scaled)


def growth_constant(nl, p, order=0):
    """
    Sampled growth constant of the nonlinearity

    With ``order=0`` this is the supremum of ``|F(t)| / |t|^crit``; with
    ``order=2`` it bounds ``|F(t)| + |f(t)*t| + |F''(t)*t^2|`` instead.
    The sample is ``+-logspace(-8, 8)``.

    :raises OverflowError:
        If the sample overflows
    :raises ParameterError:
        For unsupported orders
    """
    if order not in (0, 2):
        raise ParameterError("order must be 0 or 2, got {!r}".format(order))
    t = _sample_points()
    with np.errstate(over='ignore', invalid='ignore'):
        total = np.abs(nl.F(t))
        if order == 2:
            total = total + np.abs(nl.f(t) * t) + np.abs(nl.df(t) * t * t)
        ratio = total / np.abs(t) ** p.crit
    if not np.all(np.isfinite(ratio)):
        raise OverflowError(
            "growth_constant() overflowed while sampling {!r}".format(nl))
    return float(np.max(ratio))


AdditivityDefect = collections.namedtuple(
    'AdditivityDefect', 'defect bound_ratio')


def additivity_defect(nl, p, a, b):
    """
    Defect of additivity of F against its critical bound

    :returns:
        :class:`AdditivityDefect` with ``|F(a+b) - F(a) - F(b)|`` and its
        ratio to ``|a||b|^(crit-1) + |a|^(crit-1)|b|``
    :raises ParameterError:
        If ``a == b == 0``
    """
    if a == 0 and b == 0:
        raise ParameterError("additivity_defect() needs (a, b) != (0, 0)")
    defect = abs(nl.F(a + b) - nl.F(a) - nl.F(b))
    q = p.crit
    bound = abs(a) * abs(b) ** (q - 1.0) + abs(a) ** (q - 1.0) * abs(b)
    if bound == 0:
        ratio = 0.0 if defect == 0 else math.inf
    else:
        ratio = defect / bound
    return AdditivityDefect(defect, ratio)


def positivity_witness(nl):
    """
    Sampled ``t`` with ``F(t) > 0``, or None

    A witness makes the mountain-pass path family non-empty.
    """
    t = _sample_points(-4.0, 4.0, 801)
    with np.errstate(over='ignore', invalid='ignore'):
        values = nl.F(t)
    hits = np.nonzero(np.isfinite(values) & (values > 0))[0]
    if hits.size == 0:
        return None
    # closest to 1 in log scale
    best = hits[np.argmin(np.abs(np.log(np.abs(t[hits]))))]
    return float(t[best])


def phi(u, nl):
    """
    Functional ``integrate(F(u))``
    """
    return integrate(Field._wrap(u.grid, nl.F(u.values)))


def phi_gradient(u, nl, p):
    """
    Riesz representative of the derivative of :func:`phi`

    :returns:
        Zero-mean field ``g`` with ``d_inner(g, v) == integrate(f(u) * v)``
        for every zero-mean ``v``
    """
    force = zero_mean(Field._wrap(u.grid, nl.f(u.values)))
    return inverse_frac_laplacian(force, p)


def phi_dilation_invariance(u, nl, g, p):
    """
    Relative change of :func:`phi` under a group action

    :raises ParameterError:
        If ``nl`` is not self-similar with ``g.gamma``
    """
    if not nl.selfsimilar_with(g.gamma):
        raise ParameterError(
            "{!r} is not self-similar with gamma={!r}".format(nl, g.gamma))
    before = phi(u, nl)
    after = phi(apply(g, u, p), nl)
    return abs(after - before) / max(abs(before), 1e-30)
