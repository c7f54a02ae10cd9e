"""q-deformed commutator functional f(A,B;q), its sharp constant c(q) and numerical evidence tools."""

from qcomm.errors import DegenerateInputError, DimensionError, EigenSolverError
from qcomm.functionals import QParams, WitnessPair, bound_c, f_func, f_trace, make_witness, r_func, ratio
from qcomm.kernels import BACKEND
from qcomm.matcore import (
    HermitianForm,
    commutator,
    fro_norm_sq,
    hs_inner,
    q_commutator,
    random_ginibre,
    random_normal_matrix,
    random_unitary,
    top_eigpair,
    unvec,
    vec,
)
from qcomm.optimizer import OptimizeConfig, OptimizeResult, lift_form_in_A, lift_form_in_B, optimize_cell

__version__ = "0.1.0"
