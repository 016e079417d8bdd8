"""Twisted monodromy matrices and Bethe vectors for the gl(2)-invariant R-matrix.

Exact (rational) and floating-point verification of the algebraic Bethe
ansatz on an inhomogeneous XXX spin-1/2 chain.
"""
from .bethe import (BetheRoots, bethe_residuals, check_transfer_action,
                    check_twisted_transfer_action, lambda0, lambda_k, solve_bethe)
from .chain import (SpinChainModel, build_r_matrix, rtt_residual, vacuum_profile,
                    yang_baxter_residual)
from .expansion import (CoefficientMap, act_C_on_bethe, act_diag_on_bethe,
                        check_lambda_sum, check_onshell_collapse,
                        check_twisted_offshell_action, lambda_contribution,
                        twisted_b_expansion)
from .kernel import (Partition, binomial_partition_sum, enumerate_partitions, eval_scalar_fn,
                     f, g, h, partition_identity_residual, prod_over)
from .scalars import Mode, ModeError, PoleError, InvariantError, Q
from .twist import (TwistMatrix, check_trace_preservation, check_twisted_vacuum_action,
                    general_twist_entry, twisted_bethe_state, twisted_entry)

__all__ = [
    "BetheRoots", "bethe_residuals", "check_transfer_action", "check_twisted_transfer_action",
    "lambda0", "lambda_k", "solve_bethe",
    "SpinChainModel", "build_r_matrix", "rtt_residual", "vacuum_profile", "yang_baxter_residual",
    "CoefficientMap", "act_C_on_bethe", "act_diag_on_bethe", "check_lambda_sum",
    "check_onshell_collapse", "check_twisted_offshell_action", "lambda_contribution",
    "twisted_b_expansion",
    "Partition", "binomial_partition_sum", "enumerate_partitions", "eval_scalar_fn",
    "f", "g", "h", "partition_identity_residual", "prod_over",
    "Mode", "ModeError", "PoleError", "InvariantError", "Q",
    "TwistMatrix", "check_trace_preservation", "check_twisted_vacuum_action",
    "general_twist_entry", "twisted_bethe_state", "twisted_entry",
]

__version__ = "0.1.0"
