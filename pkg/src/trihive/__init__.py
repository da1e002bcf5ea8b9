"""Toolkit for the polytope of bounded-Hessian functions on a triangular
torus: constraint systems, hit-and-run sampling, volume and facet-weight
estimation, character spectra, honeycomb diagrams, and integer-hive counting
of Littlewood-Richardson coefficients.
"""

from .errors import (DegenerateDirectionError, InvalidBoundaryError,
                     NoModeError, PreconditionError, SizeGuardError,
                     SizeMismatchError, TrihiveError)
from .grid import (EDGE_OFFSETS, RhombusEdge, SquareBlock, SquarePartition,
                   TorusGrid, build_grid, enumerate_edges, square_partition)
from .hive import HiveBoundary, boundary_values, count_hives, lr_tableau_oracle
from .honeycomb import (HoneycombDiagram, build_honeycomb, displacement_stats,
                        emit_svg, hive_values, reference_honeycomb,
                        triangle_gradients)
from .ops import (DIFFERENCE_DIRECTIONS, PRODUCT_SHIFTS, WeightTriple,
                  delta_w_apply, delta_w_spectrum, first_difference,
                  hessian_field, log_pseudo_det, product_second_difference)
from .polytope import (ANCHORED, MEAN_ZERO, ConstraintSystem, HessianBound,
                       QuadraticReference, build_constraints, cone_predicate,
                       diameter_witness, export_lp_text, hessian_slack,
                       membership, quadratic_reference, violation_field)
from .sampling import (SampleBatch, SamplerConfig, batch_from_csv,
                       batch_to_csv, chord, sample_uniform)
from .spectral import (CoarseHessianField, Spectrum, character, coarse_hessian,
                       dft, dominant_mode, idft, mode_smooth, norm,
                       spectrum_to_csv)
from .volume import (DetBoundReport, FacetWeights, MCVolumeConfig,
                     VolumeEstimate, det_bound_report, euler_residual,
                     exact_volume_3d, facet_weights, mc_volume,
                     mc_volume_halfspaces, outer_radius, volume_report)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
