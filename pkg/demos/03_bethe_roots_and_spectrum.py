"""
Bethe roots and the transfer-matrix spectrum
============================================

Solve the Bethe equations numerically and compare the resulting eigenvalues
with a dense diagonalization of the transfer matrix.
"""

import numpy as np

from gl2aba import Q, SpinChainModel, lambda0, solve_bethe
from gl2aba.bethe import default_test_points

# the homogeneous two-site chain has a single one-magnon root at u = -1/2
hom = SpinChainModel.homogeneous(2, 1)
print("spectrum of T(1):", np.round(np.sort(np.linalg.eigvals(hom.as_float().transfer(1 + 0j)).real), 12))
print("Lambda0(1) at u = -1/2:", lambda0(hom, 1, [Q(-1, 2)]))

model = SpinChainModel((Q(0), Q(1, 7), Q(-1, 5), Q(2, 9)), c=1)
fm = model.as_float()
z = default_test_points(fm)[0]
spec = np.linalg.eigvals(fm.transfer(z))

for n in (1, 2):
    result = solve_bethe(model, n, seeds=40)
    print(f"\n{n} magnon(s): {len(result)} root sets, {len(result.failures)} rejected restarts")
    for br in result:
        lam = lambda0(fm, z, br.roots)
        gap = np.min(np.abs(spec - lam))
        roots = ", ".join(f"{x.real:+.6f}{x.imag:+.6f}j" for x in br.roots)
        print(f"  roots [{roots}]  residual {br.residual_max:.1e}  eigenvalue gap {gap:.1e}")
