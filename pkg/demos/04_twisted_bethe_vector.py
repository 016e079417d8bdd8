"""
Twisted Bethe vectors as sums of ordinary ones
==============================================

An off-shell twisted Bethe vector expands over partitions of its parameters
into ordinary Bethe vectors. On shell every lower term cancels and only a
constant multiple of the ordinary vector survives.
"""

from gl2aba import Q, SpinChainModel, TwistMatrix, solve_bethe
from gl2aba.expansion import check_lambda_sum, check_onshell_collapse, twisted_b_expansion
from gl2aba.scalars import max_abs
from gl2aba.twist import twisted_bethe_state

model = SpinChainModel((Q(0), Q(1, 7), Q(-2, 5), Q(3, 11)), c=1)
kappa = TwistMatrix.from_rows([[1, 1], [1, 2]])

# off shell, two parameters: nine partitions
U = [Q(3, 2), Q(-5, 3)]
cmap = twisted_b_expansion(model, kappa, U)
for row in cmap.table():
    print(f"{row['partition']:<8} {str(row['key']):<8} {row['prefactor']:<12} {row['coefficient']}")
diff = cmap.evaluate(model) - twisted_bethe_state(model, kappa, U)
print("expansion minus direct product:", max_abs(diff, model.mode))

# the same vector assembled from the four contributions of the induction step
print("induction-step residual:", check_lambda_sum(model, kappa, U))

# on shell the subleading coefficients vanish
roots = solve_bethe(model, 2, seeds=40)[0]
rep = check_onshell_collapse(model.as_float(), kappa, roots)
print(f"\non shell: residual {rep.residual:.1e}, constant {rep.constant.real:.12f} "
      f"(expected {kappa.k11 ** 4}), largest subleading coefficient {rep.subleading_max:.1e}")
