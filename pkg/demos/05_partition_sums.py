"""
Partition sums over f-functions
===============================

The algebra rests on a few rational identities summed over set partitions.
Evaluate them exactly on random rational data.
"""

import numpy as np

from gl2aba import binomial_partition_sum, enumerate_partitions, partition_identity_residual
from gl2aba.kernel import random_rationals

rng = np.random.default_rng(0)

# labeled partitions of a 3-element set into I, II, III with #I = #II = 1
for p in enumerate_partitions(3, ("I", "II", "III"), {"I": 1, "II": 1}):
    print(p.serialize())

z, *U = random_rationals(rng, 5, 1)
for name in ("PDF", "IdA1", "PDF1", "subsum2"):
    lhs, rhs = partition_identity_residual(name, z, U, 1)
    print(f"{name:<8} lhs = {lhs}  matches: {lhs == rhs}")

# sums of f(x_I, x_II) over splits with #x_II = s count the splits
X = random_rationals(rng, 5, 1)
print([int(binomial_partition_sum(X, s, 1)) for s in range(6)])
