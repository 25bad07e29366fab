"""Generalized pentagram maps on twisted polygons in RP^n.

Exact (``Fraction``) and float pipelines for lifts, Maurer-Cartan
invariants, the map in geometric and invariant form, its scaling
symmetry and the resulting conserved quantities.
"""

from .core import (InvariantField, LiftedPolygon, ProjectivePoint, TwistedPolygon,
                   balanced_frame, extract_invariants, lift_and_normalize, mc_matrix,
                   monodromy_product, normalize_up_to_scale, projective_invariants,
                   reconstruct, twisted_polygon)
from .errors import (Degenerate, GenerationFailed, InputError, NoIntersection,
                     NormalizationBroken, NoRealSolution, NotCoprime, NotTransverse,
                     PentagramError, SignUnsolvable, ZeroDenominator, ZeroParameter)
from .geometric import (geometric_map_invariants, hyperplane_intersection_oracle,
                        intersect_two_subspaces, pentagram_map_geometric, reduced_subspaces)
from .integrability import (apply_scaling, check_scaling_commutes, conservation_report,
                            lax_frames, scaled_mc_matrix, scaling_degrees,
                            spectral_invariants)
from .invariant import (cramer_denominator, cramer_numerator, f_decomposition, f_vector,
                        lambda_ratio, lambda_solve_float, pentagram_map_invariants,
                        r_vector)

__version__ = "0.1.0"
