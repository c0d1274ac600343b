#!/usr/bin/env python
"""
Extend a bump to the half-space and measure how well the energy identity
and the Neumann trace hold as the vertical grid is refined
"""
from pyfracfield import ExtensionGrid
from pyfracfield import FracParams
from pyfracfield import GridSpec
from pyfracfield import bump
from pyfracfield import energy_identity_residual
from pyfracfield import kappa
from pyfracfield import neumann_trace_residual


def main():
    grid = GridSpec(2, 64, 16.0)
    u = bump(grid, width=1.0)
    for s in (0.25, 0.5, 0.75):
        p = FracParams(2, s)
        print("s={:g} kappa={:.6f}".format(s, kappa(p)))
        for n in (32, 64, 128, 256):
            eg = ExtensionGrid.graded(grid, y_max=20.0, n=n)
            print("    {:4d} heights: energy {:.3e} trace {:.3e}".format(
                n, energy_identity_residual(u, p, eg),
                neumann_trace_residual(u, p, eg)))


if __name__ == '__main__':
    main()
