"""Semi-analytic solver for u_tt - Lap u + mu/(1+t) u_t + nu2/(1+t)^2 u = f in dims 1, 2, 3."""

from .errors import (
    CFLViolation,
    ConfigError,
    DomainError,
    DomainTooSmall,
    NegativeCoefficient,
    NegativeDelta,
    NoConvergence,
    ScaleWaveError,
    StepTooLarge,
)
from .fd_oracle import Grid1D, SolutionSlice, fd_solve_1d, fd_solve_radial_3d
from .hypergeom import HypParams, hyp2f1, hyp2f1_deriv
from .kernels import (
    KernelPoint,
    kernel_dE_db,
    kernel_E,
    kernel_K0,
    kernel_K1,
    z_arg,
)
from .model import CauchyData, ModelParams, ScalarField, SpacetimeField, make_params
from .quadrature import QuadratureConfig, ball_weighted_mean, integrate_interval, sphere_mean
from .representation import (
    EvalRequest,
    SupportReport,
    check_huygens,
    check_support,
    free_wave_even,
    free_wave_odd,
    iterated_t_operator,
    solve,
    solve_1d,
    solve_at,
    solve_nd,
)

__version__ = "0.1.0"
