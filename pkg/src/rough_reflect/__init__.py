"""Reflected delay equations driven by rough Holder paths.

Numerical library and CLI for multidimensional delay differential
equations with normal reflection at the origin, driven by beta-Holder
paths with beta in (1/3, 1/2): Skorokhod reflection, a fractional-calculus
rough integral, windowed Picard construction, a sup-norm a-priori bound
and an exact fractional-Brownian-motion driver, each with a verification
suite for its defining identities and inequalities.
"""

from .grid import (Grid, GridPath, TwoParamField, HolderReport, holder_norm,
                   holder_norm_2param, weighted_sup_norm, shift_path)
from .skorokhod import (SkorokhodDecomposition, solve_skorokhod,
                        verify_decomposition, lipschitz_probe,
                        regulator_holder_bound_probe)
from .fraccalc import (FracParams, SampledFunction, default_alpha, rl_integral,
                       weyl_left, weyl_right, compensated_weyl,
                       extended_tensor_derivative, rough_integral,
                       rough_integral_cumulative, estimate_phi, estimate_phi3)
from .tensor import (MultiplicativeFunctional, smooth_tensor,
                     check_multiplicative, shift_tensor, extend_delayed_tensor,
                     two_beta_constant)
from .fbm import (FbmSpec, FbmSample, covariance, sample_fbm,
                  stratonovich_tensor, tensor_moment_diagnostic)
from .solver import (Coefficients, SolveConfig, Solution, BoundReport,
                     SigmaSpec, Drift, sigma_zero, sigma_constant, sigma_linear,
                     sigma_inv_sqrt, drift_zero, drift_linear, drift_linear_delay,
                     drift_tanh, drift_running_sup, drift_eval,
                     window_rough_term, picard_window, solve, a_priori_bound)

__version__ = "0.1.0"
