"""Numerical toolkit for general varifolds: weight measures, first
variation, maximal-type functions, medians, and empirical verification of
the isoperimetric, Sobolev, and Poincare inequalities they satisfy."""

from .blowup import BlowupSeries, blowup_series, median_contrast
from .families import (AnalyticFamily, DeltaAtoms, FlatDisc, PlaneBundle,
                       ProductSlab, ResolutionError, SphereShell,
                       UnsupportedFamilyError)
from .fields import (ScalarTestFunction, TestVectorField, bump_field,
                     coordinate_profile, default_dictionary, linear_functional,
                     radial_bump, radial_cap, radial_plateau_field)
from .geometry import (Constants, DegenerateBasisError, SpatialIndex, Subspace,
                       ball_query, coordinate_subspace, gamma_upper,
                       subspace_from_basis, unit_ball_volume)
from .lemmas import (HypothesisError, calculus_find_t, check_iteration,
                     check_weak_lp_atomic, iteration_bound, lebesgue_seminorm,
                     superlevel_integral, weak_lp_bound, weak_lp_kappa_atomic)
from .maximal import (MaximalParams, MedianParams, density, lower_density_region,
                      maximal_function, median_g, superlevel_indices,
                      superlevel_mass)
from .varifold import Atom, DiscreteVarifold, EmptyFiberError, load_csv, save_csv
from .variation import (distributional_boundary_eval, family_delta_eval,
                        first_variation, integral_against_delta,
                        integral_weak_gradient, total_variation_lower_bound,
                        weak_derivative_c1, weak_gradient_norms)
from .verify import (DeltaSourceError, SupportError, VerificationReport,
                     decomposition_check, gamma_lower_bound, verify_ball_iso,
                     verify_isoperimetric, verify_poincare, verify_size_iso,
                     verify_sobolev_avg, verify_sobolev_rect)

__version__ = "0.1.0"
