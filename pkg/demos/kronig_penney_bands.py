"""Band structure of a Kronig-Penney comb from monodromy traces.

Energies z with |tr T(1, 0)| <= 2 carry bounded solutions; the script
prints the band edges found on a grid and a few three-point checks.

    python demos/kronig_penney_bands.py [strength]
"""

import sys

import numpy as np

from sturmgordon import LocalMeasure, monodromy_trace, schroedinger, three_point_check


def band_edges(c, zs):
    inside = np.array([abs(monodromy_trace(c, z)) <= 2.0 for z in zs])
    flips = np.flatnonzero(np.diff(inside.astype(int)))
    return [(zs[i] + zs[i + 1]) / 2 for i in flips]


def main(strength=3.0):
    c = schroedinger(LocalMeasure.lattice(1.0, strength))
    zs = np.linspace(-5.0, 60.0, 6501)
    edges = band_edges(c, zs)
    print(f"delta comb of strength {strength}: band edges on [-5, 60]")
    for lo, hi in zip(edges[::2], edges[1::2]):
        print(f"  band [{lo:8.3f}, {hi:8.3f}]")
    if len(edges) % 2:
        print(f"  band [{edges[-1]:8.3f}, beyond {zs[-1]:g})")
    rng = np.random.default_rng(0)
    for z in rng.uniform(-5.0, 60.0, 5):
        lhs, rhs, ok = three_point_check(c, z, rng.normal(size=2))
        print(f"  z = {z:7.3f}: max |v(t)| over t in {{-1, 1, 2}} = {lhs:.3g} >= {rhs:.3g}: {ok}")


if __name__ == "__main__":
    main(*(float(a) for a in sys.argv[1:2]))
