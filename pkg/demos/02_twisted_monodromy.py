"""
Twisting by a unimodular matrix
===============================

Conjugating the monodromy by a constant 2x2 matrix with unit determinant
mixes its entries but keeps the trace. Here we look at both facts.
"""

from gl2aba import Q, SpinChainModel, TwistMatrix
from gl2aba.twist import (check_trace_preservation, check_twisted_vacuum_action,
                          entry_formula_residual, general_twist_trace_defect, twisted_entry)

model = SpinChainModel((Q(0), Q(1, 7), Q(-2, 5), Q(3, 11)), c=1)
kappa = TwistMatrix.from_rows([[1, 1], [1, 2]])
u = Q(9, 4)

# the explicit entry formulas agree with blockwise conjugation
print("entry formulas vs conjugation:", entry_formula_residual(model, kappa, u))

# the twisted B mixes all four entries, so it is much less sparse than B
Bt = twisted_entry(model, kappa, "B", u)
print("nonzero entries of the twisted B:", int((Bt != 0).sum()))

# trace is preserved
print("trace defect:", check_trace_preservation(model, kappa, u))

# the twisted diagonal entries no longer keep the vacuum as an eigenvector,
# but their action closes on the vacuum and the twisted B state
print("vacuum action residuals:", *check_twisted_vacuum_action(model, kappa, u))

# a general two-sided twist breaks the trace
k1 = [[2, 1], [1, 1]]
k2 = [[1, 3], [0, 1]]
print("two-sided twist trace defect (nonzero):", general_twist_trace_defect(model, k1, k2, u) != 0)
