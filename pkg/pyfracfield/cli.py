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
:mod:`pyfracfield.cli` -- command line interface
================================================

Usage::

    fracfield [-v] [--config FILE] COMMAND [options]

Commands:

``solve``
    maximize the functional on a sphere, store the maximizer and a report
``check``
    verify an identity on a stored field
``decompose``
    extract profiles from a sequence of stored fields
``extend``
    measure the harmonic extension identities of a stored field
``levels``
    compute the energy levels, optionally across resolutions as CSV
``synthesize``
    write a sequence of planted profiles plus noise

Options can also come from an INI file given with ``--config``. The
``[fracfield]`` section applies to every command and a section named after
the command overrides it; keys are long option names. Options given on the
command line win over the file.

Exit status is 0 on success, 1 on invalid input and 2 when a numerical
target was missed (a solver that did not converge, a failed check).
"""
import argparse
import configparser
import json
import logging
import sys
import time

from fracfield import DEFAULT_GAMMA
from pyfracfield._errors import ExtractionError
from pyfracfield._errors import FracFieldError
from pyfracfield._errors import IntegrationError
from pyfracfield._errors import ParameterError
from pyfracfield._errors import SolverError
from pyfracfield._extension import ExtensionGrid
from pyfracfield._extension import energy_identity_residual
from pyfracfield._extension import kappa
from pyfracfield._extension import neumann_trace_residual
from pyfracfield._fieldfile import load_field
from pyfracfield._fieldfile import load_sequence
from pyfracfield._fieldfile import make_report
from pyfracfield._fieldfile import save_field
from pyfracfield._fieldfile import save_sequence
from pyfracfield._fieldfile import write_csv
from pyfracfield._fieldfile import write_report
from pyfracfield._fractional import FracParams
from pyfracfield._fractional import sharp_sobolev_constant
from pyfracfield._fractional import sobolev_quotient
from pyfracfield._grid import GridSpec
from pyfracfield._grid import bump
from pyfracfield._group import GroupElement
from pyfracfield._nonlinearity import make_nonlinearity
from pyfracfield._nonlinearity import nonlinearity_kinds
from pyfracfield._nonlinearity import phi_dilation_invariance
from pyfracfield._nonlinearity import selfsim_residual
from pyfracfield._profiles import ExtractConfig
from pyfracfield._profiles import PlantedProfile
from pyfracfield._profiles import extract
from pyfracfield._profiles import synthesize
from pyfracfield._variational import SolverConfig
from pyfracfield._variational import ground_state
from pyfracfield._variational import levels
from pyfracfield._variational import maximize_S
from pyfracfield._variational import nehari_residual
from pyfracfield._variational import pohozaev_residual

__all__ = ['main']

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MISSED = 2

CHECKS = ('pohozaev', 'nehari', 'sobolev', 'selfsim')


class _ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, '{}: error: {}\n'.format(self.prog, message))


def _factor(text):
    value = float(text)
    if value.is_integer():
        return int(value)
    return value


def _add_params_args(parser):
    group = parser.add_argument_group("problem")
    group.add_argument('--dim', type=int, default=2,
                       help="spatial dimension N (default: %(default)s)")
    group.add_argument('--s', type=float, default=0.5,
                       help="fractional order s (default: %(default)s)")
    group.add_argument('--box', type=float, default=80.0,
                       help="box length L (default: %(default)s)")
    group.add_argument('--grid', type=int, default=256,
                       help="points per axis M (default: %(default)s)")


def _add_nonlinearity_args(parser, default='critical'):
    group = parser.add_argument_group("nonlinearity")
    group.add_argument('--nonlinearity', choices=nonlinearity_kinds(),
                       default=default,
                       help="nonlinearity kind (default: %(default)s)")
    group.add_argument('--coefficient', type=float, default=1.0,
                       help="coefficient of F (default: %(default)s)")
    group.add_argument('--exponent', type=float, default=None,
                       help="exponent of the 'power' kind")


def _add_solver_args(parser):
    group = parser.add_argument_group("solver")
    group.add_argument('--step', type=float, default=0.5)
    group.add_argument('--max-iters', type=int, default=2000)
    group.add_argument('--tol', type=float, default=1e-6,
                       help="stationarity tolerance (default: %(default)s)")
    group.add_argument('--seed', type=int, default=0)
    group.add_argument('--init', choices=('bump', 'random'), default='bump')
    group.add_argument('--restarts', type=int, default=3)


def _add_report_arg(parser):
    parser.add_argument('--report', metavar='PATH', default='-',
                        help="JSON report destination, '-' for stdout"
                        " (default: %(default)s)")


def _build_parser():
    parser = _ArgumentParser(
        prog='fracfield',
        description="Spectral toolkit for fractional critical equations")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="log progress (-v) or details (-vv)")
    parser.add_argument('--config', metavar='FILE',
                        help="INI file with option defaults")
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    solve = sub.add_parser('solve', help="maximize phi on a sphere")
    _add_params_args(solve)
    _add_nonlinearity_args(solve)
    _add_solver_args(solve)
    solve.add_argument('--level', type=float, default=1.0,
                       help="squared seminorm of the sphere"
                       " (default: %(default)s)")
    solve.add_argument('--out', metavar='PATH',
                       help="field file for the maximizer")
    _add_report_arg(solve)
    solve.set_defaults(func=_cmd_solve)

    check = sub.add_parser('check', help="verify an identity on a field")
    check.add_argument('field', metavar='FIELD')
    check.add_argument('--check', choices=CHECKS, default='pohozaev')
    check.add_argument('--tolerance', type=float, default=1e-2,
                       help="relative tolerance (default: %(default)s)")
    check.add_argument('--gamma', type=_factor, default=None,
                       help="dilation factor of the selfsim check")
    _add_nonlinearity_args(check)
    check.add_argument('--report', metavar='PATH', default=None)
    check.set_defaults(func=_cmd_check)

    decompose = sub.add_parser('decompose', help="extract profiles")
    decompose.add_argument('manifest', metavar='MANIFEST')
    decompose.add_argument('--gamma', type=_factor, default=DEFAULT_GAMMA)
    decompose.add_argument('--tol', type=float, default=1e-2)
    decompose.add_argument('--max-profiles', type=int, default=4)
    decompose.add_argument('--tail', type=int, default=2)
    decompose.add_argument('--window', type=float, default=0.125)
    decompose.add_argument('--j-min', type=int, default=None)
    decompose.add_argument('--j-max', type=int, default=None)
    decompose.add_argument('--nonlinearity', choices=nonlinearity_kinds(),
                           default=None,
                           help="also report the phi budget")
    decompose.add_argument('--coefficient', type=float, default=1.0)
    decompose.add_argument('--exponent', type=float, default=None)
    _add_report_arg(decompose)
    decompose.set_defaults(func=_cmd_decompose)

    extend = sub.add_parser('extend', help="harmonic extension identities")
    extend.add_argument('field', metavar='FIELD')
    extend.add_argument('--ymax', type=float, default=20.0)
    extend.add_argument('--ynodes', type=int, default=128)
    extend.add_argument('--grading', type=float, default=2.0)
    extend.add_argument('--method', choices=('bessel', 'ode'),
                        default='bessel')
    extend.add_argument('--energy-tolerance', type=float, default=3e-2)
    extend.add_argument('--trace-tolerance', type=float, default=5e-2)
    _add_report_arg(extend)
    extend.set_defaults(func=_cmd_extend)

    levels_ = sub.add_parser('levels', help="energy levels")
    _add_params_args(levels_)
    _add_nonlinearity_args(levels_)
    _add_solver_args(levels_)
    levels_.add_argument('--levels', type=float, nargs='+',
                         default=[0.5, 2.0, 4.0],
                         help="extra sphere levels (default: %(default)s)")
    levels_.add_argument('--resolutions', type=int, nargs='+', default=None,
                         help="points per axis of the CSV table")
    levels_.add_argument('--csv', metavar='PATH',
                         help="write levels against resolution as CSV")
    levels_.add_argument('--pohozaev-tolerance', type=float, default=1e-2)
    _add_report_arg(levels_)
    levels_.set_defaults(func=_cmd_levels)

    synth = sub.add_parser('synthesize', help="write a planted sequence")
    _add_params_args(synth)
    synth.add_argument('--out', metavar='DIR', required=True)
    synth.add_argument('--count', type=int, default=4,
                       help="number of fields K (default: %(default)s)")
    synth.add_argument('--gamma', type=_factor, default=DEFAULT_GAMMA)
    synth.add_argument('--profile', metavar='KIND:AMP:SHIFT',
                       action='append', default=None,
                       help="planted profile, for example N0:1:2 or"
                       " Nplus:1.5:-6; repeatable")
    synth.add_argument('--width', type=float, default=0.7,
                       help="width of the planted bumps")
    synth.add_argument('--drift', type=float, default=2.0,
                       help="shift increment per index of N0 profiles")
    synth.add_argument('--noise', type=float, default=0.0,
                       help="critical norm of the noise at index 0")
    synth.add_argument('--noise-decay', type=float, default=0.25,
                       help="noise factor per index")
    synth.add_argument('--seed', type=int, default=0)
    synth.set_defaults(func=_cmd_synthesize)
    return parser


def _subparser(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]


def _convert(action, key, raw):
    try:
        if isinstance(action, (argparse._StoreTrueAction,
                               argparse._StoreFalseAction)):
            return configparser.RawConfigParser.BOOLEAN_STATES[raw.lower()]
        kind = action.type or str
        if action.nargs in ('+', '*'):
            value = [kind(item) for item in raw.split()]
            bad = [v for v in value
                   if action.choices and v not in action.choices]
        else:
            value = kind(raw)
            bad = [value] if action.choices and value not in action.choices \
                else []
    except (KeyError, ValueError):
        raise ParameterError(
            "config key {!r}: cannot parse {!r}".format(key, raw))
    if bad:
        raise ParameterError(
            "config key {!r}: {!r} is not one of {}".format(
                key, bad[0], ', '.join(map(str, action.choices))))
    return value


def _config_defaults(path, command, subparser):
    config = configparser.ConfigParser()
    if not config.read(path):
        raise ParameterError("cannot read config file {!r}".format(path))
    actions = {a.dest: a for a in subparser._actions
               if a.option_strings and a.dest != 'help'}
    defaults = {}
    for section in ('fracfield', command):
        if not config.has_section(section):
            continue
        for key, raw in config.items(section):
            dest = key.replace('-', '_')
            if dest not in actions:
                if section == command:
                    raise ParameterError(
                        "unknown key {!r} in section [{}]".format(
                            key, section))
                continue
            defaults[dest] = _convert(actions[dest], key, raw)
    return defaults


def _configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity,
                                                       logging.DEBUG)
    logging.getLogger('pyfracfield').setLevel(level)


def _params(args):
    return FracParams(args.dim, args.s)


def _grid(args, points=None):
    return GridSpec(args.dim, points or args.grid, args.box)


def _nonlinearity(args, p):
    params = {'coefficient': args.coefficient}
    if args.nonlinearity == 'power':
        if args.exponent is None:
            raise ParameterError("the 'power' nonlinearity needs --exponent")
        params['exponent'] = args.exponent
    return make_nonlinearity(args.nonlinearity, p, **params)


def _solver_config(args):
    return SolverConfig(step=args.step, max_iters=args.max_iters,
                        tol=args.tol, seed=args.seed, init=args.init,
                        restarts=args.restarts)


def _run_params(p, grid=None, gamma=None):
    info = {'N': p.dim, 's': p.s}
    if gamma is not None:
        info['gamma'] = gamma
    if grid is not None:
        info['L'] = grid.box_length
        info['M'] = grid.points_per_axis
    return info


def _read_bytes(path):
    with open(path, 'rb') as stream:
        return stream.read()


def _cmd_solve(args):
    p = _params(args)
    grid = _grid(args)
    nl = _nonlinearity(args, p)
    cfg = _solver_config(args)
    started = time.perf_counter()
    result = maximize_S(args.level, nl, p, grid, cfg)
    state = ground_state(nl, p, grid, cfg, field=result.field)
    elapsed = time.perf_counter() - started
    if args.out:
        save_field(args.out, result.field, p)
    config = dict(cfg._asdict(), level=args.level, **nl.describe())
    results = {
        'S_l': result.value,
        'sharp_sobolev_constant': sharp_sobolev_constant(p),
        'status': result.status,
        'converged': result.converged,
        'iterations': result.iterations,
        'stationarity': result.stationarity,
        'pohozaev_residual': pohozaev_residual(result.field, nl, p).relative,
        'nehari_residual': nehari_residual(result.field, nl, p).relative,
        'multiplier': state.multiplier,
        'beta': state.beta,
    }
    report = make_report(
        'solve', _run_params(p, grid), results,
        tolerances={'stationarity': cfg.tol},
        config=config,
        inputs={'config': json.dumps(config, sort_keys=True).encode()},
        timings={'solve': elapsed})
    write_report(args.report, report)
    if not result.converged:
        _logger.warning("solver stopped with status %s", result.status)
        return EXIT_MISSED
    return EXIT_OK


def _selfsim_check(u, nl, p, gamma):
    gamma = gamma or nl.gamma or DEFAULT_GAMMA
    if not nl.selfsimilar_with(gamma):
        raise ParameterError(
            "{!r} is not self-similar with gamma={!r}".format(nl, gamma))
    g = GroupElement(gamma, (0.0, ) * p.dim, 1)
    try:
        return phi_dilation_invariance(u, nl, g, p)
    except FracFieldError as exc:
        # the dilation does not fit the grid; test F on the sampled values
        _logger.info("falling back to pointwise check: %s", exc)
        t = u.values.ravel()
        scale = max(float(abs(nl.F(t)).max()), 1e-300)
        return float(selfsim_residual(nl, gamma, p, t, 1).max()) / scale


def _cmd_check(args):
    stored = load_field(args.field)
    u, p = stored.field, stored.params
    nl = _nonlinearity(args, p)
    if args.check == 'pohozaev':
        residual = abs(pohozaev_residual(u, nl, p).relative)
    elif args.check == 'nehari':
        residual = abs(nehari_residual(u, nl, p).relative)
    elif args.check == 'sobolev':
        ratio = sobolev_quotient(u, p) / sharp_sobolev_constant(p)
        residual = max(0.0, ratio - 1.0)
    else:
        residual = _selfsim_check(u, nl, p, args.gamma)
    passed = residual <= args.tolerance
    print("{}: residual {:.6e} tolerance {:g} {}".format(
        args.check, residual, args.tolerance, 'PASS' if passed else 'FAIL'))
    if args.report:
        report = make_report(
            'check', _run_params(p, u.grid),
            {'residual': residual, 'passed': passed},
            tolerances={'residual': args.tolerance},
            config=dict(check=args.check, **nl.describe()),
            inputs={'field': _read_bytes(args.field)})
        write_report(args.report, report)
    return EXIT_OK if passed else EXIT_MISSED


def _cmd_decompose(args):
    stored = load_sequence(args.manifest)
    p = stored.params
    j_range = None
    if args.j_min is not None or args.j_max is not None:
        if args.j_min is None or args.j_max is None:
            raise ParameterError("give both --j-min and --j-max")
        j_range = (args.j_min, args.j_max)
    cfg = ExtractConfig(tol=args.tol, max_profiles=args.max_profiles,
                        tail=args.tail, j_range=j_range, window=args.window)
    nl = None
    if args.nonlinearity is not None:
        nl = _nonlinearity(args, p)
    started = time.perf_counter()
    decomposition = extract(stored.fields, args.gamma, p, cfg, nl)
    elapsed = time.perf_counter() - started
    results = decomposition.as_dict()
    results['count'] = len(decomposition.profiles)
    config = dict(cfg._asdict())
    if nl is not None:
        config.update(nl.describe())
    report = make_report(
        'decompose', _run_params(p, stored.fields[0].grid, args.gamma),
        results, tolerances={'remainder_crit_norms': cfg.tol},
        config=config,
        inputs=dict(('field{:03d}'.format(k), _read_bytes(path))
                    for k, path in enumerate(stored.paths)),
        timings={'extract': elapsed})
    write_report(args.report, report)
    return EXIT_OK


def _cmd_extend(args):
    stored = load_field(args.field)
    u, p = stored.field, stored.params
    eg = ExtensionGrid.graded(u.grid, y_max=args.ymax, n=args.ynodes,
                              grading=args.grading, method=args.method)
    started = time.perf_counter()
    energy_res = energy_identity_residual(u, p, eg)
    trace_res = neumann_trace_residual(u, p, eg)
    elapsed = time.perf_counter() - started
    report = make_report(
        'extend', _run_params(p, u.grid),
        {'kappa': kappa(p),
         'energy_identity_residual': energy_res,
         'neumann_trace_residual': trace_res},
        tolerances={'energy_identity_residual': args.energy_tolerance,
                    'neumann_trace_residual': args.trace_tolerance},
        config={'ymax': args.ymax, 'ynodes': args.ynodes,
                'grading': args.grading, 'method': args.method},
        inputs={'field': _read_bytes(args.field)},
        timings={'extend': elapsed})
    write_report(args.report, report)
    if (energy_res > args.energy_tolerance
            or trace_res > args.trace_tolerance):
        return EXIT_MISSED
    return EXIT_OK


_LEVEL_COLUMNS = ('M', 'S1', 'l0', 'l0_stated', 'cI', 'infimum_I', 'beta',
                  'pohozaev_residual', 'converged')


def _cmd_levels(args):
    p = _params(args)
    grid = _grid(args)
    nl = _nonlinearity(args, p)
    cfg = _solver_config(args)
    timings = {}
    started = time.perf_counter()
    report_ = levels(nl, p, grid, cfg, extra_levels=args.levels)
    timings['levels'] = time.perf_counter() - started
    results = report_.as_dict()
    results['sharp_sobolev_constant'] = sharp_sobolev_constant(p)
    if args.csv:
        rows = []
        for points in (args.resolutions or [args.grid]):
            if points == args.grid:
                row = report_
            else:
                started = time.perf_counter()
                row = levels(nl, p, _grid(args, points), cfg,
                             extra_levels=())
                timings['levels_M{}'.format(points)] = (
                    time.perf_counter() - started)
            rows.append([points] + [getattr(row, name)
                                    for name in _LEVEL_COLUMNS[1:]])
        write_csv(args.csv, _LEVEL_COLUMNS, rows)
    config = dict(cfg._asdict(), levels=list(args.levels), **nl.describe())
    report = make_report(
        'levels', _run_params(p, grid), results,
        tolerances={'pohozaev_residual': args.pohozaev_tolerance,
                    'stationarity': cfg.tol},
        config=config,
        inputs={'config': json.dumps(config, sort_keys=True).encode()},
        timings=timings)
    write_report(args.report, report)
    if not report_.converged:
        return EXIT_MISSED
    return EXIT_OK


def _planted(spec, grid, args):
    try:
        kind, amplitude, shift = spec.split(':')
        amplitude, shift = float(amplitude), float(shift)
    except ValueError:
        raise ParameterError(
            "profile {!r} is not KIND:AMP:SHIFT".format(spec))
    w = bump(grid, width=args.width, amplitude=amplitude)
    rest = (0.0, ) * (grid.dim - 1)
    if kind == 'N0':
        elements = [GroupElement(args.gamma, (shift + k * args.drift, )
                                 + rest, 0) for k in range(args.count)]
    elif kind in ('Nplus', 'Nminus'):
        sign = 1 if kind == 'Nplus' else -1
        elements = [GroupElement(args.gamma, (shift, ) + rest, sign * k)
                    for k in range(args.count)]
    else:
        raise ParameterError("unknown profile kind {!r}".format(kind))
    return PlantedProfile(w, elements, kind)


def _cmd_synthesize(args):
    p = _params(args)
    grid = _grid(args)
    profiles = [_planted(spec, grid, args) for spec in args.profile or ()]
    noise = [args.noise * args.noise_decay ** k for k in range(args.count)]
    seq = synthesize(profiles, noise, args.count, p, seed=args.seed,
                     grid=grid)
    manifest = save_sequence(args.out, seq, p)
    print(manifest)
    return EXIT_OK


def main(argv=None):
    """
    Entry point of the ``fracfield`` command

    :returns:
        Exit status
    """
    parser = _build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        if args.config:
            defaults = _config_defaults(
                args.config, args.command,
                _subparser(parser, args.command))
            _subparser(parser, args.command).set_defaults(**defaults)
            args = parser.parse_args(argv)
        if hasattr(args, 'dim'):
            # fail on the order constraint before anything is computed
            _params(args)
        return args.func(args)
    except (SolverError, ExtractionError, IntegrationError) as exc:
        print("fracfield: {}".format(exc), file=sys.stderr)
        return EXIT_MISSED
    except (FracFieldError, ValueError, OSError) as exc:
        print("fracfield: error: {}".format(exc), file=sys.stderr)
        return EXIT_INPUT


if __name__ == '__main__':
    raise SystemExit(main())
