"""Center-outward depth for temporal point processes via the ILR transform."""
from .depth import (CardinalityDistribution, DepthReport, InvalidIntensity, cardinality_depth,
                    depth_from_cumulative, depth_reports, ilr_depth_from_ilr, ilr_depth_hpp,
                    overall_depth, rank, simplified_ilr_depth, time_rescaled_depth)
from .density import (grad_log_density, hessian_log_density, log_density, log_kernel,
                      log_norm_const, normal_approx_log_density)
from .geometry import (BoundaryError, ContrastMatrix, InterEventTimes, PointProcess, TimeDomain,
                       build_contrast_matrix, from_iet, ilr, ilr_inverse, permutation_orthogonal,
                       to_iet)
from .intensity import (CumulativeIntensity, ImiIntensity, PiecewiseConstantIntensity,
                        convergence_experiment, cumulative, empirical_cardinality,
                        histogram_estimate, imi_cumulative, imi_estimate)
from .simulation import (BoundViolation, make_rng, simulate_hpp, simulate_hpp_conditional,
                         simulate_imi, simulate_ipp, simulate_ipp_conditional, spawn_rngs)

__version__ = "0.1.0"
