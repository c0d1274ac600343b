# encoding: UTF-8
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
fracfield -- low-level constants, layouts and special functions
===============================================================

This module holds the declarative, low-level part of fracfield: numeric
constants shared by the whole toolkit, the binary layout of the field file
header (as a ``ctypes`` structure) and checked bindings to the special
functions of :mod:`scipy.special` that every closed-form constant reduces
to.

Everything is declared in tables and materialized on first access, so
``import fracfield`` stays cheap and does not import scipy until a special
function is actually used. The high-level API lives in :mod:`pyfracfield`.

.. note::
    If a special function you need is missing, add a row to
    ``_fracfield_functions`` (look at the existing rows for an example).
"""
from ctypes import c_double
from ctypes import c_uint32
from ctypes import c_uint8
import collections
import ctypes
import importlib
import inspect
import math
import sys
import types

import numpy


# the table rows below register themselves with the lazy module
__all__ = []
__version__ = '0.3'


class LazyModule(types.ModuleType):
    """
    Module object that materializes table entries on first access

    ``dir()`` and ``__all__`` list every registered name, loaded or not, so
    pydoc and ``from fracfield import *`` see the whole table.

    :ivar _pending:
        Mapping of a name to the ``(factory, args)`` pair that builds it
    :ivar _names:
        Every name registered with :meth:`lazily` or :meth:`immediate`
    :ivar _old:
        The plain module this object replaced; it keeps the declarative
        tables reachable for tests
    """

    def __init__(self, name, doc, old):
        super(LazyModule, self).__init__(name, doc)
        self._pending = {}
        self._names = set()
        self._old = old

    def __dir__(self):
        return sorted(self._names.union(super(LazyModule, self).__dir__()))

    def __getattr__(self, name):
        # only reached for attributes that are not set yet
        if name not in self._pending:
            raise AttributeError(name)
        factory, args = self._pending.pop(name)
        value = factory(*args)
        setattr(self, name, value)
        return value

    @classmethod
    def replace(cls, name):
        """
        Install a lazy copy of the module ``name`` in :data:`sys.modules`

        :returns:
            The new :class:`LazyModule`
        """
        old = sys.modules[name]
        new = cls(old.__name__, old.__doc__, old)
        for attr, value in vars(old).items():
            if attr not in ('__all__', '__dict__'):
                setattr(new, attr, value)
        new._names.update(getattr(old, '__all__', ()))
        sys.modules[name] = new
        return new

    def lazily(self, name, factory, args):
        """
        Register ``name``, built by ``factory(*args)`` when first used
        """
        self._pending[name] = factory, args
        self._names.add(name)

    def immediate(self, name, value):
        """
        Register ``name`` with a ready value
        """
        setattr(self, name, value)
        self._names.add(name)

    @property
    def __all__(self):
        return sorted(self._names)


_mod = LazyModule.replace(__name__)


_fracfield_constantinfo = collections.namedtuple(
    '_fracfield_constantinfo', 'name py_value doc')

# Constants are cheap, register them right away
_fracfield_constants = (
    ('FIELD_MAGIC', b'FRCF', "magic bytes opening every field file"),
    ('FIELD_VERSION', 1, "version of the field file layout"),
    ('REPORT_SCHEMA', 1, "schema version of JSON run reports"),
    ('DEFAULT_GAMMA', 2, "default dilation factor of the group action"),
    ('MIN_POINTS', 8, "smallest supported number of points per axis"),
    ('MAX_DIM', 3, "largest supported spatial dimension"),
    ('THREADS_ENV', 'FRACFIELD_THREADS',
     "environment variable capping FFT worker threads"),
)


_fracfield_constants = [_fracfield_constantinfo(*i)
                        for i in _fracfield_constants]


for info in _fracfield_constants:
    _mod.immediate(info.name, info.py_value)
del info


_fracfield_typeinfo = collections.namedtuple(
    '_fracfield_typeinfo',
    'doc py_kind py_name c_packed py_fields struct_format')


# Lazily define all binary layouts
_fracfield_types = [
    ("""
     struct fieldfile_header {
         char     magic[4];         /* "FRCF" */
         uint32_t version;          /* layout version, 1 */
         uint8_t  dim;              /* spatial dimension N */
         uint32_t points_per_axis;  /* M, a power of two */
         double   box_length;       /* L */
         double   s;                /* fractional order */
     } __attribute__((packed));     /* little-endian */

     The header is followed by M^dim little-endian doubles, row-major.
     """,
     'struct', 'fieldfile_header', 1, (
         ('magic', 'ctypes.c_char * 4'),
         ('version', c_uint32),
         ('dim', c_uint8),
         ('points_per_axis', c_uint32),
         ('box_length', c_double),
         ('s', c_double),
     ), '<4sIBIdd'),
]

_fracfield_types = [_fracfield_typeinfo(*i) for i in _fracfield_types]


def _fracfield_struct_repr(self):
    return 'struct {} at {:#x}\n'.format(
        self.__class__.__name__, id(self)
    ) + '\n'.join(
        '  {}: {!r}'.format(f_name, getattr(self, f_name))
        for f_name, f_type in self._fields_
    )


def _fracfield_type(doc, py_kind, py_name, c_packed, py_fields,
                    struct_format):
    _globals = {'ctypes': ctypes, 'fracfield': _mod}
    py_fields = tuple([
        (py_field_name, (eval(py_field_type, _globals)
                         if isinstance(py_field_type, str)
                         else py_field_type))
        for py_field_name, py_field_type in py_fields
    ])
    if py_kind != 'struct':
        raise ValueError("bad value of py_kind")
    return type(py_name, (ctypes.LittleEndianStructure, ), {
        '__doc__': doc,
        '_layout_': 'ms',
        '_pack_': c_packed,
        '_fields_': py_fields,
        '__repr__': _fracfield_struct_repr,
    })


for info in _fracfield_types:
    _mod.lazily(info.py_name, _fracfield_type, info)
del info


# Domain predicates referenced by name from _fracfield_functions
_fracfield_domains = {
    'positive': lambda x: bool(numpy.all(numpy.asarray(x) > 0)),
}


# Lazily define all special-function bindings
_fracfield_functions = (
    ('gamma_fn', 'scipy.special', 'gamma',
     """
     gamma_fn(x) -> Γ(x)

     Euler's gamma function for x > 0, accurate to a few ulp.
     Accepts scalars and arrays.
     """,
     'positive', {
         'domain': "gamma_fn() requires x > 0",
         'overflow': "gamma_fn() overflows for this argument",
     }),
    ('bessel_k', 'scipy.special', 'kv',
     """
     bessel_k(nu, z) -> K_nu(z)

     Modified Bessel function of the second kind for z > 0.
     Accepts scalars and arrays.
     """,
     'positive', {
         'domain': "bessel_k() requires z > 0",
         'overflow': "bessel_k() overflows for this argument",
     }),
)


def _fracfield_func(name, module_name, func_name, doc, domain, error_map):
    raw = getattr(importlib.import_module(module_name), func_name)
    check = _fracfield_domains[domain]

    def func(*args):
        # The domain is a property of the last argument
        if not check(args[-1]):
            raise ValueError(error_map['domain'])
        result = raw(*args)
        if not numpy.all(numpy.isfinite(result)):
            raise OverflowError(error_map['overflow'])
        if numpy.ndim(result) == 0:
            return float(result)
        return result
    func.__name__ = name
    func.__qualname__ = name
    func.__doc__ = inspect.cleandoc(doc)
    return func


for info in _fracfield_functions:
    _mod.lazily(info[0], _fracfield_func, info)
del info


def is_power_of_two(n):
    """
    Check if n is a positive power of two

    :param n:
        An integer
    :returns:
        True if n == 2**k for some k >= 0
    """
    return n > 0 and (n & (n - 1)) == 0


def log2_exact(n):
    """
    Exact base-two logarithm of a power of two

    :raises ValueError:
        If n is not a power of two
    """
    if not is_power_of_two(n):
        raise ValueError("{} is not a power of two".format(n))
    return int(round(math.log2(n)))


_mod.immediate('is_power_of_two', is_power_of_two)
_mod.immediate('log2_exact', log2_exact)
