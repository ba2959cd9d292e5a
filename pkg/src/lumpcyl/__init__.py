"""Adiabatic dynamics of CP^1 lumps on an infinite cylinder.

Lumps are finite-energy harmonic maps from the cylinder to the Riemann
sphere, represented by rational maps in w = e^z.  The package computes
the L2 metric on their fixed-endpoint moduli spaces numerically, carries
the closed-form elliptic-integral metric of the symmetric two-lump
surfaces, integrates geodesics (lump scattering and collapse), and
verifies every closed form against brute-force quadrature oracles.
"""

from .elliptic import (ellip_e, ellip_e_complement, ellip_e_derivative,
                       ellip_k, ellip_k_complement, ellip_k_derivative,
                       f_closed, f_quadrature, landen_descend)
from .errors import (ConvergenceError, DivergenceError, DomainError,
                     InvalidLumpError, LumpcylError)
from .fibers import (FiberCoordinates, HermitianMetric, ModuliPath,
                     collapse_path, constant_path, free_indices,
                     kahler_check, lump_from_coords, mass,
                     metric_components, path_length)
from .flow import (FieldGrid, GeodesicState, GridSpec, Trajectory,
                   clairaut_constant, gamma_lines, geodesy_check_line,
                   line_arc_length, metric_normal_derivative,
                   scattering_snapshots, xi0_energy, xi0_geodesic,
                   xi_inf_metric_factor)
from .lumps import (ConjugateTarget, CylinderPoint, InvertCylinder,
                    RationalLump, ReflectX, ReflectY, RotateTarget,
                    TargetValue, Translate, antipodal_two_lump,
                    apply_isometry, format_lump, parse_lump,
                    potential_energy, symmetric_two_lump)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .xi0 import (EmbeddingProfile, conformal_derivatives, conformal_factor,
                  conformal_factor_from_f, conformal_factor_quadrature,
                  effective_potential, embedding_profile, scalar_curvature,
                  total_curvature)

__version__ = "0.1.0"
