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
:mod:`pyfracfield._fieldfile` -- field files, manifests and run reports
=======================================================================

A field file is a packed little-endian header (see
:class:`fracfield.fieldfile_header`) followed by the field values as
little-endian doubles in row-major order. A sequence of fields is stored as
one field file per element plus a manifest, a text file listing one path
per line, relative to the manifest. Blank lines and lines starting with
``#`` are ignored.

Run reports are JSON documents with sorted keys. Every number in the
``results`` section is stored together with the tolerance it was judged
against.
"""
import collections
import csv
import ctypes
import hashlib
import json
import logging
import math
import numbers
import os

import numpy as np

from fracfield import FIELD_MAGIC
from fracfield import FIELD_VERSION
from fracfield import REPORT_SCHEMA
from fracfield import fieldfile_header
from pyfracfield._errors import FieldFileError
from pyfracfield._errors import ManifestError
from pyfracfield._errors import ParameterError
from pyfracfield._fractional import FracParams
from pyfracfield._grid import Field
from pyfracfield._grid import GridSpec

__all__ = [
    'MANIFEST_NAME',
    'StoredField',
    'StoredSequence',
    'git_blob_hash',
    'load_field',
    'load_sequence',
    'make_report',
    'report_scalars',
    'save_field',
    'save_sequence',
    'write_csv',
    'write_report',
]

_logger = logging.getLogger(__name__)

MANIFEST_NAME = 'index.txt'

_PAYLOAD_DTYPE = np.dtype('<f8')

_messages = {
    'short': "{path}: truncated header ({size} of {need} bytes)",
    'magic': "{path}: bad magic {magic!r}",
    'version': "{path}: unsupported version {version}",
    'header': "{path}: invalid header: {error}",
    'length': "{path}: payload has {size} bytes, expected {need}",
    'empty': "{path}: manifest lists no fields",
    'missing': "{path}: listed field {entry!r} cannot be read: {error}",
    'mixed': "{path}: {entry!r} does not match the first field"
             " ({what} differs)",
}

StoredField = collections.namedtuple('StoredField', 'field params')
StoredField.__doc__ = """
Field read back from disk with the order it was saved with
"""

StoredSequence = collections.namedtuple(
    'StoredSequence', 'fields params paths')
StoredSequence.__doc__ = """
Fields listed by a manifest, in manifest order
"""


def _encode(u, p):
    grid = u.grid
    header = fieldfile_header()
    header.magic = FIELD_MAGIC
    header.version = FIELD_VERSION
    header.dim = grid.dim
    header.points_per_axis = grid.points_per_axis
    header.box_length = grid.box_length
    header.s = p.s
    payload = np.ascontiguousarray(u.values, dtype=_PAYLOAD_DTYPE)
    return bytes(header) + payload.tobytes()


def save_field(path, u, p):
    """
    Write a field file

    :param u:
        :class:`Field` to store
    :param p:
        :class:`FracParams`; its ``dim`` must match the grid
    :returns:
        The bytes written
    """
    if p.dim != u.grid.dim:
        raise ParameterError(
            "field of dimension {} saved with N={}".format(
                u.grid.dim, p.dim))
    data = _encode(u, p)
    with open(path, 'wb') as stream:
        stream.write(data)
    _logger.debug("wrote %s (%d bytes)", path, len(data))
    return data


def _decode(path, data):
    need = ctypes.sizeof(fieldfile_header)
    if len(data) < need:
        raise FieldFileError(_messages['short'].format(
            path=path, size=len(data), need=need))
    header = fieldfile_header.from_buffer_copy(data[:need])
    if header.magic != FIELD_MAGIC:
        raise FieldFileError(_messages['magic'].format(
            path=path, magic=header.magic))
    if header.version != FIELD_VERSION:
        raise FieldFileError(_messages['version'].format(
            path=path, version=header.version))
    try:
        grid = GridSpec(header.dim, header.points_per_axis,
                        header.box_length)
        params = FracParams(header.dim, header.s)
    except ParameterError as exc:
        raise FieldFileError(_messages['header'].format(
            path=path, error=exc))
    payload = data[need:]
    expected = grid.size * _PAYLOAD_DTYPE.itemsize
    if len(payload) != expected:
        raise FieldFileError(_messages['length'].format(
            path=path, size=len(payload), need=expected))
    values = np.frombuffer(payload, dtype=_PAYLOAD_DTYPE).reshape(grid.shape)
    try:
        field = Field(grid, values.astype(np.float64))
    except ParameterError as exc:
        raise FieldFileError(_messages['header'].format(
            path=path, error=exc))
    return StoredField(field, params)


def load_field(path):
    """
    Read a field file

    :returns:
        :class:`StoredField`
    :raises FieldFileError:
        If the file is truncated, has a bad magic, an unsupported version,
        an invalid header or a payload of the wrong length
    """
    with open(path, 'rb') as stream:
        data = stream.read()
    return _decode(path, data)


def _manifest_entries(path):
    with open(path, 'rt') as stream:
        for line in stream:
            line = line.strip()
            if line and not line.startswith('#'):
                yield line


def save_sequence(directory, seq, p, prefix='u'):
    """
    Write a sequence as numbered field files plus a manifest

    :returns:
        Path of the manifest
    """
    if not seq:
        raise ParameterError("cannot save an empty sequence")
    os.makedirs(directory, exist_ok=True)
    names = []
    for k, u in enumerate(seq):
        name = '{}_{:03d}.fld'.format(prefix, k)
        save_field(os.path.join(directory, name), u, p)
        names.append(name)
    manifest = os.path.join(directory, MANIFEST_NAME)
    with open(manifest, 'wt') as stream:
        stream.write('# {} fields, N={} s={!r}\n'.format(
            len(names), p.dim, p.s))
        for name in names:
            stream.write(name + '\n')
    return manifest


def load_sequence(path):
    """
    Read every field a manifest lists

    A path to a single field file is accepted too and yields a sequence of
    length one.

    :returns:
        :class:`StoredSequence`
    :raises ManifestError:
        If the manifest is empty, lists unreadable files or fields whose
        grid or order differ
    """
    with open(path, 'rb') as stream:
        head = stream.read(len(FIELD_MAGIC))
    if head == FIELD_MAGIC:
        stored = load_field(path)
        return StoredSequence([stored.field], stored.params, [path])
    base = os.path.dirname(path)
    fields, paths, params = [], [], None
    for entry in _manifest_entries(path):
        full = os.path.join(base, entry)
        try:
            stored = load_field(full)
        except (OSError, FieldFileError) as exc:
            raise ManifestError(_messages['missing'].format(
                path=path, entry=entry, error=exc))
        if fields:
            if stored.field.grid != fields[0].grid:
                raise ManifestError(_messages['mixed'].format(
                    path=path, entry=entry, what='grid'))
            if stored.params != params:
                raise ManifestError(_messages['mixed'].format(
                    path=path, entry=entry, what='order'))
        else:
            params = stored.params
        fields.append(stored.field)
        paths.append(full)
    if not fields:
        raise ManifestError(_messages['empty'].format(path=path))
    return StoredSequence(fields, params, paths)


def git_blob_hash(data):
    """
    Content hash of ``data`` as ``git hash-object`` computes it
    """
    digest = hashlib.sha1()
    digest.update('blob {}\0'.format(len(data)).encode('ascii'))
    digest.update(data)
    return digest.hexdigest()


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value


def _with_tolerance(value, tolerance):
    value = _plain(value)
    if isinstance(value, dict):
        return collections.OrderedDict(
            (str(k), _with_tolerance(v, tolerance)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_with_tolerance(v, tolerance) for v in value]
    if isinstance(value, numbers.Real) and not isinstance(value, bool):
        return {'value': value, 'tolerance': tolerance}
    return value


def make_report(command, params, results, tolerances=None, config=None,
                inputs=None, timings=None):
    """
    Assemble a run report

    :param command:
        Name of the command that produced the results
    :param params:
        Mapping of the run parameters (``N``, ``s``, ``gamma``, ``L``,
        ``M``)
    :param results:
        Mapping of result names to numbers, nested mappings or lists
    :param tolerances:
        Mapping of result names to the tolerance each was judged against;
        missing names are reported with ``null``
    :param inputs:
        Mapping of input names to bytes; stored as content hashes
    :param timings:
        Mapping of phase names to seconds. The only part of a report that
        changes between identical runs.
    :returns:
        An ordered dictionary ready for :func:`write_report`
    """
    tolerances = tolerances or {}
    report = collections.OrderedDict()
    report['schema'] = REPORT_SCHEMA
    report['command'] = command
    report['parameters'] = collections.OrderedDict(
        (k, _plain(v)) for k, v in params.items())
    report['config'] = collections.OrderedDict(
        (k, _plain(v)) for k, v in (config or {}).items())
    report['results'] = collections.OrderedDict(
        (name, _with_tolerance(value, tolerances.get(name)))
        for name, value in results.items())
    report['inputs'] = collections.OrderedDict(
        (name, git_blob_hash(data))
        for name, data in sorted((inputs or {}).items()))
    report['timings'] = collections.OrderedDict(
        (k, float(v)) for k, v in (timings or {}).items())
    return report


def report_scalars(report):
    """
    Copy of a report without the timing section
    """
    return collections.OrderedDict(
        (k, v) for k, v in report.items() if k != 'timings')


def _strict(value, where='report'):
    value = _plain(value)
    if isinstance(value, dict):
        return collections.OrderedDict(
            (k, _strict(v, '{}.{}'.format(where, k)))
            for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_strict(v, '{}[{}]'.format(where, i))
                for i, v in enumerate(value)]
    if isinstance(value, float) and not math.isfinite(value):
        _logger.warning("%s is %r, written as null", where, value)
        return None
    return value


def write_report(path, report):
    """
    Write a report as JSON with sorted keys; ``'-'`` writes to stdout

    Non-finite numbers (from a diverged run) are written as ``null``, so
    the output is always valid JSON.
    """
    text = json.dumps(_strict(report), indent=2, sort_keys=True,
                      allow_nan=False, default=_plain)
    if path == '-':
        print(text)
    else:
        with open(path, 'wt') as stream:
            stream.write(text + '\n')


def write_csv(path, header, rows):
    """
    Write a table of numbers as CSV
    """
    with open(path, 'wt', newline='') as stream:
        writer = csv.writer(stream)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_plain(v) for v in row])
