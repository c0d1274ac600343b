#!/usr/bin/env python
"""
Compute the energy levels of the critical power for N=2, s=1/2 and compare
the computed Sobolev supremum with the sharp whole-space constant
"""
from pyfracfield import CriticalPower
from pyfracfield import FracParams
from pyfracfield import GridSpec
from pyfracfield import SolverConfig
from pyfracfield import levels
from pyfracfield import sharp_sobolev_constant


def main():
    p = FracParams(2, 0.5)
    nl = CriticalPower(p)
    cfg = SolverConfig(max_iters=3000, tol=1e-5)
    sharp = sharp_sobolev_constant(p)
    for points in (64, 128):
        grid = GridSpec(2, points, 40.0)
        report = levels(nl, p, grid, cfg)
        print("M={:4d} S1={:.6f} (sharp {:.6f}) l0={:.6f} cI={:.6f}"
              " infimum={:.6f} pohozaev={:.2e} {}".format(
                  points, report.S1, sharp, report.l0, report.cI,
                  report.infimum_I, report.pohozaev_residual,
                  'converged' if report.converged else 'not converged'))
        for level, value in sorted(report.Sl.items()):
            print("    S({:g}) = {:.6f}".format(level, value))


if __name__ == '__main__':
    main()
