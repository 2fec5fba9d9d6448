"""Equilibrium thermodynamics of the strong-coupling BCS-Hubbard model."""

from ._backend import name as kernel_backend
from .errors import (BracketFailure, DimensionTooLarge, NoTransition, NonFinite,
                     NonPositiveBeta, NonPositiveGamma, OutsideWindow,
                     PreconditionViolated, ValidationError)
from .free_energy import GapSolution, df_dr, f, g, gap_residual, r_max, solve_gap, stationary_points
from .observables import (DiscontinuityReport, ObservableSet, coulomb_correlation,
                          electron_density, magnetization, mean_energy, observable_set,
                          pressure, specific_heat)
from .params import DensityVector, ModelParams, hole_dual, validate
from .phase import (CoexistenceSplit, CoexistenceWindow, Order, TransitionRecord,
                    chemical_potential_at_density, classify_order, coexistence_densities,
                    coexistence_windows, critical_temperature, fixed_density_zero_t,
                    second_order_beta_c)
from .zero_temperature import (Regime, ZeroTObservables, critical_field, gamma_threshold,
                               gamma_threshold_density, mott_window, zero_t_observables)

__version__ = "0.1.0"
