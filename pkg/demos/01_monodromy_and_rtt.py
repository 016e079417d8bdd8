"""
Monodromy matrix of an inhomogeneous XXX chain
==============================================

Build a short chain with rational inhomogeneities and look at the four
operator entries of its monodromy matrix in exact arithmetic.
"""

from gl2aba import Q, SpinChainModel, rtt_residual, vacuum_profile

# three sites, c = 1, inhomogeneities chosen so no two differ by c
model = SpinChainModel((Q(0), Q(1, 7), Q(-2, 5)), c=1)
print("sites:", model.L, "  Hilbert space dimension:", model.dim)

u = Q(5, 3)
A, B, C, D = (model.entry(w, u) for w in "ABCD")
print("A(5/3) is diagonal on the vacuum with eigenvalue", model.a(u))

# the vacuum profile is cross-checked against the operators themselves
a, d = vacuum_profile(model, u)
vac = model.vacuum()
print("C(u)|0> vanishes:", not any(C @ vac))
print("D(u)|0> = d(u)|0> with d(u) =", d(u))

# the RTT relation holds exactly, not just to rounding
v = Q(-7, 4)
print("RTT residual at (5/3, -7/4):", rtt_residual(model, u, v))

# the same check in floating point
fmodel = model.as_float()
print("float RTT residual:", rtt_residual(fmodel, 0.4 + 1.1j, -1.3 + 0.2j))

# the transfer matrix is the trace over the auxiliary space
T = model.transfer(u)
print("transfer matrix diagonal:", [str(x) for x in T.diagonal()])
