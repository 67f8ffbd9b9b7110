"""Compare the branch search for dyadic embeddings with the closed-form test.

Random elliptic non-automorphisms are drawn from the normal form
A z / (C z + 1); for each the search verdict is set against the sector
condition on log A.

    python scripts/embedding_survey.py [n] [seed]
"""

import sys
import time
from collections import Counter

import numpy as np

from lftdisk.classify import MapTag
from lftdisk.roots import EmbedStatus, embeddable, stolz_embeddable_closed_form
from lftdisk.sampling import random_map


def main(n=2000, seed=0):
    rng = np.random.default_rng(seed)
    counts = Counter()
    disagree = 0
    nodes = 0
    t0 = time.perf_counter()
    for _ in range(n):
        phi = random_map(rng, MapTag.ELLIPTIC_NON_AUT)
        v = embeddable(phi)
        counts[v.status.value] += 1
        nodes += v.nodes
        if v.status is not EmbedStatus.INCONCLUSIVE and bool(v) != stolz_embeddable_closed_form(phi):
            disagree += 1
    dt = time.perf_counter() - t0
    for k, c in sorted(counts.items()):
        print(f"{k:16s} {c}")
    print(f"disagreements    {disagree}")
    print(f"mean nodes       {nodes / n:.1f}")
    print(f"time             {dt:.2f}s")
    return 1 if disagree else 0


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:3]]
    sys.exit(main(*args))
