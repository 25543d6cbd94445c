"""Kernel (stochastically perturbed characteristics) solutions of pressureless gas dynamics.

Submodules
----------
model            initial data, profiles and field samples
exact_fields     density, mean velocity and velocity variance by quadrature
closed_form      Gauss-CDF expressions for piecewise-linear Riemann data
riemann_free     free-particle wave fan (rarefaction, overlap, contact)
riemann_sticky   sticky-particle delta shock
hugoniot         jump-condition residuals
characteristics  classical Burgers solution before breakdown
montecarlo       particle simulation and kernel estimators
scenario, cli    scenario runner, comparison and acceptance report
"""

__version__ = "0.1.0"

from .model import (FieldSample, Provenance, RiemannData, SampledProfile,  # noqa: E402
                    SmoothedRiemannData, eval_riemann_initial, eval_smoothed_initial,
                    gauss_cdf, gauss_pdf, tanh_smoothing)
from .exact_fields import (QuadratureSpec, VacuumError, density_rho, fields,  # noqa: E402
                           moment_residuals, second_moment_R, velocity, velocity_uhat)
from .quadrature import AccuracyError  # noqa: E402
from .closed_form import R_eps, ramp_correction, rho_eps, uhat_eps  # noqa: E402
from .riemann_free import (FanCase, WaveFan, eval_wavefan, overlap_plateau,  # noqa: E402
                           solve_free, spurious_pressure)
from .riemann_sticky import (DeltaShockSolution, check_lax, eval_sticky,  # noqa: E402
                             shock_mass, solve_sticky, verify_jump_ode)
from .hugoniot import check_fan, rh_residuals  # noqa: E402
from .characteristics import (BreakdownError, breakdown_time,  # noqa: E402
                              classical_solution, solve_implicit_s0)
from .montecarlo import (bootstrap_se, estimate_rho, estimate_uhat,  # noqa: E402
                         simulate)
