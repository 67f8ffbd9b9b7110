"""Hyperbolic step at k = 2^40 for random maps with a boundary Denjoy-Wolff point.

Parabolic non-automorphisms should have step tending to zero; every other
boundary type keeps a positive step.

    python scripts/step_dichotomy.py [n] [seed]
"""

import sys

import numpy as np

from lftdisk.classify import MapTag
from lftdisk.dynamics import StepClass, dyadic_steps, step_class
from lftdisk.sampling import random_map

TAGS = [MapTag.HYPERBOLIC_AUT, MapTag.HYPERBOLIC_NON_AUT, MapTag.PARABOLIC_AUT, MapTag.PARABOLIC_NON_AUT]


def main(n=500, seed=0):
    rng = np.random.default_rng(seed)
    bad = 0
    for tag in TAGS:
        want = StepClass.ZERO if tag is MapTag.PARABOLIC_NON_AUT else StepClass.POSITIVE
        last = []
        for _ in range(n):
            m = random_map(rng, tag)
            z0 = 0.5 * np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(-np.pi, np.pi))
            got = step_class(m, z0)
            bad += got is not want
            last.append(dyadic_steps(m, z0).steps[-1])
        print(f"{tag.value:18s} expected {want.value:12s} step range [{min(last):.3g}, {max(last):.3g}]")
    print(f"disagreements {bad}")
    return 1 if bad else 0


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:3]]
    sys.exit(main(*args))
