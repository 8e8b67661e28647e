"""Sturm-Liouville operators with measure coefficients: exact transfer
matrices, Wasserstein-type seminorms, Gordon scans and eigenvalue bounds."""

from .bounds import (GordonReport, derivative_constant, eigenvalue_bound,
                     eigenvalue_bound_refined, gordon_distance, gordon_exponent_estimate,
                     gordon_scan, growth_envelopes, quasiperiodic_scan)
from .coefficients import (Coefficients, StepFunction, classical, jacobi, schroedinger,
                           validate)
from .errors import InvalidCombination, InvalidParameter, PrecisionError
from .gronwall import GronwallInstance, gronwall_bound, gronwall_oracle
from .liouville import LiouvilleNumber, liouville_alpha
from .measure import (LocalMeasure, periodize, phi, shift, subtract, tv_on_interval,
                      unif_norm, unif_norm_r)
from .propagator import (PhaseVector, TransferMatrix, atom_matrix, dirichlet,
                         evaluate_solution, monodromy_trace, neumann, piece_matrix,
                         three_point_check, transfer)
from .quasiperiodic import QuasiperiodicCoefficients, example_triple, quasiperiodic
from .seminorm import (DistributionFunction, c_constant, seminorm_lower_oracle,
                       seminorm_surrogate, window_flat_distance)

__version__ = "0.1.0"
