#!/usr/bin/env python
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
Tests for planted sequences and their profile decomposition
"""
import unittest

import numpy as np

from pyfracfield import CriticalPower
from pyfracfield import ExtractConfig
from pyfracfield import ExtractionError
from pyfracfield import Field
from pyfracfield import FracParams
from pyfracfield import GridSpec
from pyfracfield import GroupElement
from pyfracfield import ParameterError
from pyfracfield import PlantedProfile
from pyfracfield import apply
from pyfracfield import bump
from pyfracfield import classify_levels
from pyfracfield import cocompactness_indicator
from pyfracfield import dnorm_sq
from pyfracfield import extract
from pyfracfield import locate_mass
from pyfracfield import lp_norm
from pyfracfield import phi
from pyfracfield import synthesize

P1 = FracParams(1, 0.25)
K = 4


def _planted(grid):
    w = bump(grid, width=0.7)
    steady = PlantedProfile(
        w, [GroupElement(2, (2.0 * k + 2.0, ), 0) for k in range(K)])
    rising = PlantedProfile(
        w * 1.5, [GroupElement(2, (-6.0, ), k) for k in range(K)])
    return steady, rising


def _window_error(found, planted, fraction=0.125):
    inside = np.abs(planted.grid.axis()) < fraction * planted.grid.box_length
    diff = found.values[inside] - planted.values[inside]
    return np.linalg.norm(diff) / np.linalg.norm(planted.values[inside])


class ClassifyTests(unittest.TestCase):

    def test_kinds(self):
        for levels, kind in (([0, 0, 0], 'N0'), ([1, 2, 3], 'Nplus'),
                             ([3, 1, 0], 'Nminus'), ([0, 2, 1], 'Nplus'),
                             ([2, 0, 1], 'Nminus'), ([1, 0, 1], 'N0'),
                             ([5], 'N0')):
            with self.subTest(levels=levels):
                self.assertEqual(classify_levels(levels), kind)


class PlantedProfileTests(unittest.TestCase):

    def setUp(self):
        self.w = bump(GridSpec(1, 256, 32.0), width=1.0)

    def test_derived_kind(self):
        prof = PlantedProfile(self.w, [GroupElement(2, (0, ), k)
                                       for k in (0, 1, 2)])
        self.assertEqual(prof.kind, 'Nplus')
        self.assertEqual(prof.levels, [0, 1, 2])
        self.assertEqual(prof.gamma, 2)

    def test_inconsistent_kind(self):
        elements = [GroupElement(2, (0, ), k) for k in (0, 1)]
        for kind in ('N0', 'Nminus', 'Nsideways'):
            with self.subTest(kind=kind):
                with self.assertRaises(ParameterError):
                    PlantedProfile(self.w, elements, kind)
        with self.assertRaises(ParameterError):
            PlantedProfile(self.w, [GroupElement(2, (0, ), 1)] * 2, 'N0')

    def test_bad_elements(self):
        with self.assertRaises(ParameterError):
            PlantedProfile(self.w, [])
        with self.assertRaises(ParameterError):
            PlantedProfile(self.w, [GroupElement(2, (0, ), 0),
                                    GroupElement(3, (0, ), 0)])


class SynthesizeTests(unittest.TestCase):

    def setUp(self):
        self.grid = GridSpec(1, 256, 32.0)
        self.prof = PlantedProfile(
            bump(self.grid, width=1.0),
            [GroupElement(2, (float(k), ), 0) for k in range(3)])

    def test_clean_sequence(self):
        seq = synthesize([self.prof], 0.0, 3, P1)
        self.assertEqual(len(seq), 3)
        h = self.grid.spacing
        for k, u in enumerate(seq):
            with self.subTest(k=k):
                expected = np.roll(self.prof.w.values, int(round(k / h)))
                np.testing.assert_allclose(u.values, expected, atol=1e-12)

    def test_noise_amplitudes(self):
        seq = synthesize([], [0.3, 0.2, 0.1], 3, P1, grid=self.grid)
        for u, amp in zip(seq, (0.3, 0.2, 0.1)):
            with self.subTest(amp=amp):
                self.assertAlmostEqual(lp_norm(u, P1.crit), amp, places=12)
                self.assertAlmostEqual(u.mean(), 0.0, places=12)

    def test_noise_is_seeded(self):
        a = synthesize([self.prof], 0.1, 3, P1, seed=7)
        b = synthesize([self.prof], 0.1, 3, P1, seed=7)
        c = synthesize([self.prof], 0.1, 3, P1, seed=8)
        np.testing.assert_array_equal(a[2].values, b[2].values)
        self.assertFalse(np.array_equal(a[2].values, c[2].values))

    def test_validation(self):
        cases = (
            (([self.prof], 0.0, 0, P1), {}),
            (([self.prof], [0.1, 0.2, 0.3], 3, P1), {}),
            (([self.prof], [0.1, -0.1, -0.2], 3, P1), {}),
            (([self.prof], [0.1, 0.1], 3, P1), {}),
            (([self.prof], 0.0, 4, P1), {}),
            (([], 0.0, 3, P1), {}),
            (([self.prof], 0.0, 3, P1), {'grid': GridSpec(1, 128, 32.0)}),
        )
        for args, kwargs in cases:
            with self.subTest(args=args[1:3], kwargs=kwargs):
                with self.assertRaises(ParameterError):
                    synthesize(*args, **kwargs)


class LocateMassTests(unittest.TestCase):

    def setUp(self):
        self.grid = GridSpec(1, 1024, 32.0)
        self.w = bump(self.grid, width=0.7)

    def test_finds_level_and_position(self):
        for level, shift in ((0, 3.0), (1, -5.0), (2, 4.5), (3, -0.25)):
            g = GroupElement(2, (shift, ), level)
            with self.subTest(level=level, shift=shift):
                found = locate_mass(apply(g, self.w, P1), 2, None, P1)
                self.assertEqual(found.level, level)
                self.assertAlmostEqual(found.shift[0], shift,
                                       delta=self.grid.spacing)

    def test_mass_is_level_independent(self):
        masses = [locate_mass(apply(GroupElement(2, (0.0, ), j), self.w, P1),
                              2, None, P1).mass for j in range(4)]
        for mass in masses[1:]:
            self.assertAlmostEqual(mass / masses[0], 1.0, delta=1e-3)

    def test_finds_spreading_levels(self):
        for level, shift in ((-1, 3.0), (-2, -4.0), (-3, 3.0)):
            g = GroupElement(2, (shift, ), level)
            with self.subTest(level=level, shift=shift):
                found = locate_mass(apply(g, self.w, P1), 2, None, P1)
                self.assertEqual(found.level, level)
                self.assertAlmostEqual(found.shift[0], shift,
                                       delta=self.grid.spacing)

    def test_wide_cubes_are_clamped(self):
        u = apply(GroupElement(2, (0.0, ), -3), self.w, P1)
        with self.assertLogs('pyfracfield', 'WARNING'):
            found = locate_mass(u, 2, (-7, 0), P1)
        self.assertEqual(found.level, -3)

    def test_clamped_range(self):
        with self.assertLogs('pyfracfield', 'WARNING'):
            found = locate_mass(self.w, 2, (-20, 20), P1)
        self.assertEqual(found.level, 0)
        found = locate_mass(self.w, 2, (2, 3), P1)
        self.assertIn(found.level, (2, 3))

    def test_vanishing_sequence(self):
        seq = synthesize([], [0.4, 0.2, 0.1, 0.05], 4, P1, grid=self.grid)
        masses, norms = cocompactness_indicator(seq, 2, P1)
        self.assertEqual(len(masses), 4)
        for a, b in zip(norms, norms[1:]):
            self.assertLess(b, a)
        self.assertLess(masses[-1], masses[0])


class CocompactnessTests(unittest.TestCase):

    def setUp(self):
        self.grid = GridSpec(1, 1024, 32.0)
        self.w = bump(self.grid, width=0.7)

    def test_fixed_bump(self):
        masses, norms = cocompactness_indicator([self.w] * K, 2, P1)
        self.assertEqual(len(set(masses)), 1)
        self.assertEqual(len(set(norms)), 1)
        self.assertGreater(masses[0], 0.5)
        self.assertGreater(norms[0], 0.5)

    def test_concentrating_bump(self):
        seq = [apply(GroupElement(2, (0.0, ), k), self.w, P1)
               for k in range(K)]
        masses, norms = cocompactness_indicator(seq, 2, P1)
        for k in range(1, K):
            with self.subTest(k=k):
                self.assertAlmostEqual(norms[k] / norms[0], 1.0, delta=1e-3)
                self.assertAlmostEqual(masses[k] / masses[0], 1.0,
                                       delta=1e-3)


class ExtractConfigTests(unittest.TestCase):

    def test_defaults(self):
        cfg = ExtractConfig()
        self.assertEqual(cfg.tail, 2)
        self.assertIsNone(cfg.j_range)
        self.assertEqual(ExtractConfig(j_range=[-2, 0, 3]).j_range, (-2, 3))

    def test_validation(self):
        for kwargs in ({'tol': 0}, {'max_profiles': -1}, {'tail': 0},
                       {'window': 0.0}, {'window': 0.75}):
            with self.subTest(kwargs=kwargs):
                with self.assertRaises(ParameterError):
                    ExtractConfig(**kwargs)


class ExtractTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.grid = GridSpec(1, 1024, 32.0)
        cls.steady, cls.rising = _planted(cls.grid)
        cls.seq = synthesize([cls.steady, cls.rising], 0.0, K, P1)
        cls.report = extract(cls.seq, 2, P1, nl=CriticalPower(P1))

    def test_recovers_planted_profiles(self):
        profiles = self.report.profiles
        self.assertEqual([prof.kind for prof in profiles], ['Nplus', 'N0'])
        self.assertEqual(profiles[0].levels, list(range(K)))
        self.assertEqual(profiles[1].levels, [0] * K)
        for k in range(K):
            with self.subTest(k=k):
                self.assertAlmostEqual(profiles[0].elements[k].shift[0], -6.0,
                                       delta=self.grid.spacing)
                self.assertAlmostEqual(profiles[1].elements[k].shift[0],
                                       2.0 * k + 2.0, delta=self.grid.spacing)

    def test_profile_norms(self):
        for prof, planted in zip(self.report.profiles,
                                 (self.rising, self.steady)):
            expected = dnorm_sq(planted.w, P1)
            with self.subTest(kind=prof.kind):
                self.assertAlmostEqual(dnorm_sq(prof.w, P1) / expected, 1.0,
                                       delta=1e-4)

    def test_windowed_profile_error(self):
        for prof, planted in zip(self.report.profiles,
                                 (self.rising, self.steady)):
            with self.subTest(kind=prof.kind):
                self.assertLess(_window_error(prof.w, planted.w), 0.05)

    def test_residual_vanishes(self):
        history = self.report.residual_history
        self.assertEqual(len(history), 3)
        self.assertLess(history[-1], 1e-2)
        for a, b in zip(history, history[1:]):
            self.assertLess(b, a)
        self.assertLess(max(self.report.remainder_crit_norms), 1e-2)

    def test_norm_budget(self):
        budget = self.report.norm_budget
        self.assertLess(budget.total, 1.05 * budget.limsup)
        self.assertLessEqual(budget.limsup, budget.maximum)

    def test_separations_diverge(self):
        gaps = self.report.separations[(0, 1)]
        self.assertEqual(len(gaps), K)
        for a, b in zip(gaps, gaps[1:]):
            self.assertGreater(b, a)

    def test_phi_budget(self):
        budget = self.report.phi_budget
        self.assertAlmostEqual(budget.profiles / budget.sequence, 1.0,
                               delta=1e-3)
        self.assertAlmostEqual(
            budget.sequence, phi(self.seq[-1], CriticalPower(P1)))

    def test_report_dictionary(self):
        info = self.report.as_dict()
        self.assertEqual([p['kind'] for p in info['profiles']],
                         ['Nplus', 'N0'])
        self.assertIn('0,1', info['separations'])
        self.assertEqual(set(info['norm_budget']),
                         {'total', 'limsup', 'maximum'})

    def test_profile_cap(self):
        report = extract(self.seq, 2, P1, ExtractConfig(max_profiles=1))
        self.assertEqual(len(report.profiles), 1)
        self.assertIsNone(report.phi_budget)
        self.assertGreater(report.residual_history[-1], 1e-2)


class ExtractSpreadingTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.grid = GridSpec(1, 2048, 64.0)
        w = bump(cls.grid, width=0.7)
        cls.steady = PlantedProfile(
            1.5 * w, [GroupElement(2, (2.0 * k, ), 0) for k in range(K)])
        cls.falling = PlantedProfile(
            w, [GroupElement(2, (-20.0, ), -k) for k in range(K)])
        seq = synthesize([cls.steady, cls.falling], 0.0, K, P1)
        cls.report = extract(seq, 2, P1)

    def test_recovers_planted_profiles(self):
        profiles = self.report.profiles
        self.assertEqual([prof.kind for prof in profiles], ['N0', 'Nminus'])
        self.assertEqual(profiles[0].levels, [0] * K)
        self.assertEqual(profiles[1].levels, [-k for k in range(K)])
        for k in range(K):
            with self.subTest(k=k):
                self.assertAlmostEqual(profiles[1].elements[k].shift[0],
                                       -20.0, delta=self.grid.spacing)

    def test_windowed_profile_error(self):
        for prof, planted in zip(self.report.profiles,
                                 (self.steady, self.falling)):
            with self.subTest(kind=prof.kind):
                self.assertLess(_window_error(prof.w, planted.w), 0.05)

    def test_residual_and_budget(self):
        self.assertEqual(len(self.report.residual_history), 3)
        self.assertLess(self.report.residual_history[-1], 1e-2)
        budget = self.report.norm_budget
        self.assertLess(budget.total, 1.05 * budget.limsup)
        gaps = self.report.separations[(0, 1)]
        for a, b in zip(gaps, gaps[1:]):
            self.assertGreater(b, a)


class ExtractNoisyTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.grid = GridSpec(1, 1024, 32.0)
        cls.steady, cls.rising = _planted(cls.grid)
        noise = [4e-3, 2e-3, 1e-3, 5e-4]
        seq = synthesize([cls.steady, cls.rising], noise, K, P1, seed=3)
        cls.report = extract(seq, 2, P1)

    def test_recovers_planted_profiles(self):
        profiles = self.report.profiles
        self.assertEqual([prof.kind for prof in profiles], ['Nplus', 'N0'])
        self.assertEqual(profiles[0].levels, list(range(K)))
        self.assertEqual(profiles[1].levels, [0] * K)
        for prof, planted in zip(profiles, (self.rising, self.steady)):
            with self.subTest(kind=prof.kind):
                self.assertLess(_window_error(prof.w, planted.w), 0.05)

    def test_remainder_is_noise(self):
        self.assertLess(self.report.residual_history[-1], 1e-2)
        budget = self.report.norm_budget
        self.assertLess(budget.total, 1.05 * budget.limsup)


class ExtractEdgeTests(unittest.TestCase):

    def setUp(self):
        self.grid = GridSpec(1, 256, 32.0)

    def test_vanishing_noise_has_no_profiles(self):
        seq = synthesize([], [0.2, 0.1, 0.05, 0.005], 4, P1, grid=self.grid)
        report = extract(seq, 2, P1)
        self.assertEqual(report.profiles, [])
        self.assertEqual(report.norm_budget.total, 0.0)
        self.assertEqual(len(report.residual_history), 1)

    def test_too_short(self):
        seq = [bump(self.grid)] * 3
        with self.assertRaises(ParameterError):
            extract(seq, 2, P1)

    def test_mixed_grids(self):
        seq = [bump(self.grid)] * 3 + [bump(GridSpec(1, 128, 32.0))]
        with self.assertRaises(ParameterError):
            extract(seq, 2, P1)

    def test_cancelling_tail(self):
        u = bump(self.grid, width=1.0)
        seq = [u, -u, u, -u]
        with self.assertRaises(ExtractionError):
            extract(seq, 2, P1)

    def test_constant_level_is_renormalized(self):
        w = bump(self.grid, width=1.0)
        seq = [apply(GroupElement(2, (0.0, ), 1), w, P1)] * K
        report = extract(seq, 2, P1)
        self.assertEqual(report.profiles[0].kind, 'N0')
        self.assertEqual(report.profiles[0].levels, [0] * K)
        self.assertLess(report.residual_history[-1], 1e-2)
        self.assertIsInstance(report.profiles[0].w, Field)


if __name__ == '__main__':
    raise SystemExit(unittest.main())
