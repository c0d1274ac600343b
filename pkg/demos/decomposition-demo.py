#!/usr/bin/env python
"""
Plant a translating profile and a concentrating profile in a sequence of
fields, add decaying noise and extract the profiles back
"""
from pyfracfield import CriticalPower
from pyfracfield import FracParams
from pyfracfield import GridSpec
from pyfracfield import GroupElement
from pyfracfield import PlantedProfile
from pyfracfield import bump
from pyfracfield import extract
from pyfracfield import synthesize


def main():
    p = FracParams(1, 0.25)
    grid = GridSpec(1, 1024, 32.0)
    count = 6
    w = bump(grid, width=0.7)
    planted = [
        PlantedProfile(w, [GroupElement(2, (2.0 * k, ), 0)
                           for k in range(count)]),
        PlantedProfile(1.5 * w, [GroupElement(2, (-6.0, ), k)
                                 for k in range(count)]),
    ]
    noise = [0.05 * 0.25 ** k for k in range(count)]
    seq = synthesize(planted, noise, count, p, seed=1)
    report = extract(seq, 2, p, nl=CriticalPower(p))
    for n, prof in enumerate(report.profiles):
        print("profile {}: {} levels {} norm^2 {:.6f}".format(
            n, prof.kind, prof.levels, report.profile_norms[n]))
    print("remainder critical norms:", ', '.join(
        '{:.3e}'.format(v) for v in report.remainder_crit_norms))
    print("norm budget:", dict(report.norm_budget._asdict()))
    print("phi budget:", dict(report.phi_budget._asdict()))


if __name__ == '__main__':
    main()
