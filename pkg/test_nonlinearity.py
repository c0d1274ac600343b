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
Tests for nonlinearities and the functional phi
"""
import math
import unittest

import numpy as np
from scipy import ndimage

from pyfracfield import CriticalPower
from pyfracfield import Field
from pyfracfield import FracParams
from pyfracfield import GridSpec
from pyfracfield import GroupElement
from pyfracfield import LogCosPower
from pyfracfield import ParameterError
from pyfracfield import PowerLaw
from pyfracfield import additivity_defect
from pyfracfield import bump
from pyfracfield import d_inner
from pyfracfield import derivative_selfsim_residual
from pyfracfield import growth_constant
from pyfracfield import make_nonlinearity
from pyfracfield import nonlinearity_kinds
from pyfracfield import phi
from pyfracfield import phi_dilation_invariance
from pyfracfield import phi_gradient
from pyfracfield import positivity_witness
from pyfracfield import selfsim_residual
from pyfracfield import zero_mean

P2 = FracParams(2, 0.5)
P1 = FracParams(1, 0.25)


def _all_kinds(p):
    return [CriticalPower(p), LogCosPower(p), PowerLaw(p, 3.0),
            CriticalPower(p, coefficient=2.5)]


def _smooth_noise(grid, seed):
    rng = np.random.default_rng(seed)
    raw = ndimage.gaussian_filter(rng.standard_normal(grid.shape),
                                  sigma=4.0, mode='wrap')
    return zero_mean(Field(grid, raw / np.max(np.abs(raw))))


class ScalarTests(unittest.TestCase):

    def test_vanishing_at_zero(self):
        for nl in _all_kinds(P2):
            with self.subTest(nl=nl):
                self.assertEqual(nl.F(0.0), 0.0)
                self.assertEqual(nl.f(0.0), 0.0)

    def test_scalar_in_scalar_out(self):
        nl = CriticalPower(P2)
        self.assertIsInstance(nl.F(1.5), float)
        self.assertEqual(nl.F(np.ones(3)).shape, (3, ))

    def test_f_is_derivative_of_F(self):
        t = np.concatenate([-np.logspace(-2, 1.5, 40),
                            np.logspace(-2, 1.5, 40)])
        for nl in _all_kinds(P2):
            for value in t:
                eps = 1e-6 * max(1.0, abs(value))
                with self.subTest(nl=nl, t=value):
                    numeric = (nl.F(value + eps) - nl.F(value - eps)) / (
                        2 * eps)
                    self.assertLess(abs(numeric - nl.f(value)),
                                    1e-6 * max(1.0, abs(nl.f(value))))
                    numeric = (nl.f(value + eps) - nl.f(value - eps)) / (
                        2 * eps)
                    self.assertLess(abs(numeric - nl.df(value)),
                                    1e-6 * max(1.0, abs(nl.df(value))))

    def test_logcos_derivative_closed_form(self):
        nl = LogCosPower(P2)
        q = P2.crit
        for t in (-7.0, -0.3, 0.02, 1.0, 2.5, 40.0):
            with self.subTest(t=t):
                expected = ((q * math.cos(math.log(abs(t)))
                             - math.sin(math.log(abs(t))))
                            * abs(t) ** (q - 2) * t)
                self.assertAlmostEqual(nl.f(t), expected, places=9)
                expected = math.cos(math.log(abs(t))) * abs(t) ** q
                self.assertAlmostEqual(nl.F(t), expected,
                                       delta=1e-13 * max(1.0, abs(expected)))

    def test_logcos_below_cutoff(self):
        nl = LogCosPower(P2)
        self.assertEqual(nl.F(1e-301), 0.0)
        self.assertEqual(nl.f(-1e-310), 0.0)

    def test_critical_power_selfsimilar_for_every_gamma(self):
        nl = CriticalPower(P2)
        rng = np.random.default_rng(3)
        for gamma in (1.5, 2.0, 3.7, 10.0):
            for t in 10.0 ** rng.uniform(-3, 3, 20) * rng.choice([-1, 1],
                                                                  20):
                for j in range(-3, 4):
                    with self.subTest(gamma=gamma, t=t, j=j):
                        residual = selfsim_residual(nl, gamma, P2, t, j)
                        self.assertLess(residual,
                                        1e-12 * max(1.0, abs(nl.F(t))))
            self.assertTrue(nl.selfsimilar_with(gamma))

    def test_logcos_selfsimilar_with_its_factor(self):
        for p in (P2, P1, FracParams(3, 0.75)):
            nl = LogCosPower(p)
            gamma = math.exp(4 * math.pi / (p.dim - 2 * p.s))
            self.assertAlmostEqual(nl.gamma, gamma)
            self.assertTrue(nl.selfsimilar_with(gamma))
            self.assertTrue(nl.selfsimilar_with(gamma ** 2))
            self.assertFalse(nl.selfsimilar_with(2.0))
            rng = np.random.default_rng(5)
            ts = 10.0 ** rng.uniform(-3, 3, 1000) * rng.choice([-1, 1], 1000)
            js = rng.integers(-2, 3, 1000)
            worst = max(selfsim_residual(nl, gamma, p, t, int(j))
                        / max(1.0, abs(nl.F(t))) for t, j in zip(ts, js))
            with self.subTest(p=p):
                self.assertLess(worst, 1e-10)

    def test_logcos_not_selfsimilar_with_two(self):
        nl = LogCosPower(P2)
        worst = max(selfsim_residual(nl, 2.0, P2, t, 1)
                    for t in np.linspace(0.5, 3.0, 11))
        self.assertGreater(worst, 1e-2)

    def test_power_law_residual(self):
        nl = PowerLaw(P2, 3.0)
        self.assertAlmostEqual(selfsim_residual(nl, 2.0, P2, 1.0, 1),
                               1 - 2 ** -0.5, places=12)
        self.assertFalse(nl.selfsimilar_with(2.0))
        self.assertTrue(PowerLaw(P2, 4.0).selfsimilar_with(2.0))

    def test_selfsimilarity_closure(self):
        nl = CriticalPower(P2)
        self.assertLess(selfsim_residual(nl, 2.0, P2, 0.7, 1), 1e-12)
        for j in range(-8, 9):
            with self.subTest(j=j):
                self.assertLess(selfsim_residual(nl, 2.0, P2, 0.7, j),
                                1e-12)

    def test_derivative_selfsimilarity(self):
        for nl, gamma in ((CriticalPower(P2), 2.0),
                          (LogCosPower(P2), LogCosPower(P2).gamma)):
            for t in (-2.0, 0.1, 0.9, 5.0):
                with self.subTest(nl=nl, t=t):
                    self.assertLess(
                        derivative_selfsim_residual(nl, gamma, P2, t, 1),
                        1e-10 * max(1.0, abs(nl.f(t))))

    def test_residual_needs_gamma_above_one(self):
        with self.assertRaises(ParameterError):
            selfsim_residual(CriticalPower(P2), 1.0, P2, 1.0, 1)

    def test_growth_constant(self):
        self.assertAlmostEqual(growth_constant(CriticalPower(P2), P2), 1.0,
                               places=12)
        self.assertAlmostEqual(growth_constant(LogCosPower(P2), P2), 1.0,
                               places=12)
        self.assertAlmostEqual(
            growth_constant(CriticalPower(P2, coefficient=2.0), P2), 2.0,
            places=12)
        # |F| + |f t| + |F'' t^2| = (1 + q + q(q-1)) |t|^q
        self.assertAlmostEqual(
            growth_constant(CriticalPower(P2), P2, order=2), 17.0, places=9)
        with self.assertRaises(ParameterError):
            growth_constant(CriticalPower(P2), P2, order=1)

    def test_growth_constant_overflow(self):
        with self.assertRaises(OverflowError):
            growth_constant(PowerLaw(P2, 40.0), P2)

    def test_additivity_defect(self):
        nl = CriticalPower(P2)
        self.assertEqual(additivity_defect(nl, P2, 1.0, 0.0).defect, 0.0)
        result = additivity_defect(nl, P2, 1.0, 1.0)
        self.assertAlmostEqual(result.defect, 14.0)
        self.assertAlmostEqual(result.bound_ratio, 7.0)
        for a in (0.3, 2.0):
            with self.subTest(a=a):
                self.assertAlmostEqual(
                    additivity_defect(nl, P2, a, -a).defect,
                    abs(0 - nl.F(a) - nl.F(-a)))
        with self.assertRaises(ParameterError):
            additivity_defect(nl, P2, 0.0, 0.0)

    def test_additivity_ratio_is_bounded(self):
        samples = np.concatenate([-np.logspace(-3, 3, 25),
                                  np.logspace(-3, 3, 25)])
        for nl in (CriticalPower(P2), LogCosPower(P2)):
            worst = max(additivity_defect(nl, P2, a, b).bound_ratio
                        for a in samples for b in samples)
            with self.subTest(nl=nl):
                self.assertLess(worst, 50.0)

    def test_positivity_witness(self):
        for nl in (CriticalPower(P2), LogCosPower(P2), PowerLaw(P2, 3.0)):
            with self.subTest(nl=nl):
                witness = positivity_witness(nl)
                self.assertEqual(abs(witness), 1.0)
                self.assertGreater(nl.F(witness), 0)
        self.assertIsNone(positivity_witness(
            CriticalPower(P2, coefficient=-1.0)))


class RegistryTests(unittest.TestCase):

    def test_kinds(self):
        self.assertEqual(nonlinearity_kinds(),
                         ['critical', 'logcos', 'power'])

    def test_make_nonlinearity(self):
        self.assertIsInstance(make_nonlinearity('critical', P2),
                              CriticalPower)
        nl = make_nonlinearity('power', P2, exponent=3, coefficient=2.0)
        self.assertEqual(nl.exponent, 3.0)
        self.assertEqual(nl.describe(),
                         {'kind': 'power', 'coefficient': 2.0,
                          'exponent': 3.0})
        self.assertEqual(make_nonlinearity('logcos', P2).describe(),
                         {'kind': 'logcos', 'coefficient': 1.0})

    def test_bad_descriptions(self):
        for kind, params in (('cubic', {}), ('critical', {'exponent': 3}),
                             ('power', {}), ('power', {'exponent': 0.5})):
            with self.subTest(kind=kind, params=params):
                with self.assertRaises(ParameterError):
                    make_nonlinearity(kind, P2, **params)


class FunctionalTests(unittest.TestCase):

    def test_phi_of_zero_and_plateau(self):
        grid = GridSpec(1, 64, 12.0)
        nl = CriticalPower(P1)
        self.assertEqual(phi(Field.zeros(grid), nl), 0.0)
        values = np.zeros(64)
        values[10:26] = 1.0
        self.assertAlmostEqual(phi(Field(grid, values), nl), 3.0, places=12)

    def test_phi_grid_refinement(self):
        nl = LogCosPower(P2)
        coarse = bump(GridSpec(2, 64, 16.0), width=1.5, amplitude=1.3)
        fine = bump(GridSpec(2, 128, 16.0), width=1.5, amplitude=1.3)
        self.assertAlmostEqual(phi(coarse, nl), phi(fine, nl), delta=1e-6)

    def test_gradient_of_zero(self):
        grid = GridSpec(1, 64, 12.0)
        g = phi_gradient(Field.zeros(grid), CriticalPower(P1), P1)
        self.assertEqual(np.max(np.abs(g.values)), 0.0)

    def test_gradient_matches_finite_differences(self):
        grid = GridSpec(2, 64, 16.0)
        u = bump(grid, width=2.0, amplitude=0.8)
        eps = 1e-5
        for nl in (CriticalPower(P2), LogCosPower(P2)):
            g = phi_gradient(u, nl, P2)
            for seed in range(3):
                v = _smooth_noise(grid, seed)
                with self.subTest(nl=nl, seed=seed):
                    numeric = (phi(u + eps * v, nl)
                               - phi(u - eps * v, nl)) / (2 * eps)
                    pairing = d_inner(g, v, P2)
                    self.assertLess(abs(numeric - pairing),
                                    1e-6 * abs(pairing))

    def test_gradient_pairing_single_mode(self):
        grid = GridSpec(1, 128, 10.0)
        u = Field.from_function(
            grid, lambda x: np.cos(2 * np.pi * x / 10.0))
        nl = CriticalPower(P1)
        g = phi_gradient(u, nl, P1)
        for seed in range(3):
            v = _smooth_noise(grid, seed)
            with self.subTest(seed=seed):
                direct = grid.cell_volume * math.fsum(
                    (nl.f(u.values) * v.values).ravel())
                self.assertAlmostEqual(d_inner(g, v, P1), direct,
                                       delta=1e-8 * max(1.0, abs(direct)))

    def test_dilation_invariance(self):
        grid = GridSpec(2, 256, 32.0)
        u = bump(grid, width=1.5)
        nl = CriticalPower(P2)
        h = grid.spacing
        shift = GroupElement(2, (5 * h, -2 * h), 0)
        self.assertLess(phi_dilation_invariance(u, nl, shift, P2), 1e-12)
        for level in (1, -1):
            with self.subTest(level=level):
                g = GroupElement(2, (0.0, 0.0), level)
                self.assertLess(phi_dilation_invariance(u, nl, g, P2), 1e-3)

    def test_dilation_invariance_needs_selfsimilarity(self):
        grid = GridSpec(2, 64, 16.0)
        with self.assertRaises(ParameterError):
            phi_dilation_invariance(bump(grid), LogCosPower(P2),
                                    GroupElement(2, (0, 0), 1), P2)

    def test_disjoint_supports_are_additive(self):
        grid = GridSpec(1, 256, 32.0)
        x = grid.axis()
        left = np.where(np.abs(x + 8) < 3, np.cos(np.pi * (x + 8) / 6), 0.0)
        right = np.where(np.abs(x - 8) < 3,
                         1.7 * np.cos(np.pi * (x - 8) / 6) ** 2, 0.0)
        u, v = Field(grid, left), Field(grid, right)
        for nl in (CriticalPower(P1), LogCosPower(P1)):
            with self.subTest(nl=nl):
                self.assertLess(
                    abs(phi(u + v, nl) - phi(u, nl) - phi(v, nl)), 1e-12)

    def test_overlapping_tails_obey_additivity_bound(self):
        grid = GridSpec(1, 256, 32.0)
        nl = CriticalPower(P1)
        q = P1.crit
        samples = np.logspace(-3, 3, 61)
        constant = max(additivity_defect(nl, P1, a, b).bound_ratio
                       for a in samples for b in samples)
        u = bump(grid, width=2.0, center=(-2.0, ))
        v = bump(grid, width=2.0, center=(2.5, ), amplitude=0.6)
        defect = abs(phi(u + v, nl) - phi(u, nl) - phi(v, nl))
        a, b = np.abs(u.values), np.abs(v.values)
        bound = grid.cell_volume * math.fsum(
            (a * b ** (q - 1) + a ** (q - 1) * b).ravel())
        self.assertLessEqual(defect, constant * bound)
        self.assertGreater(defect, 0.0)


if __name__ == '__main__':
    raise SystemExit(unittest.main())
