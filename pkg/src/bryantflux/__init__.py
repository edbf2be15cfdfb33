"""Flux of Killing fields through ends of Bryant (CMC-1) surfaces in
hyperbolic 3-space: frame construction from holomorphic data, residue
and closed-form flux laws, quadrature verification, and balancing."""

from .errors import (ConsistencyError, DomainError, LogTermRequiredError,
                     UnbalanceableError)
from .geometry import (INF, ExtendedComplex, Geodesic, HPoint, IsometrySL2,
                       TangentVector, apply_isometry, boundary_eq,
                       cross_ratio, distance, is_inf, metric_inner,
                       mobius_boundary, standardizing_isometry)
from .series import (DEFAULT_ORDER, GeneralizedSeries, QuadratureGrid,
                     differentiate, eval_at, eval_branch, radius_estimate,
                     residue)
from .killing import (KillingField, ROTATION, TRANSLATION, killing_potential,
                      killing_vector, verify_potential)
from .bryant import (BryantFrame, HolomorphicForms, WeierstrassData,
                     derived_forms, frame_checks, frame_from_json,
                     frame_to_json, immersion, immersion_samples, one_forms,
                     transform_frame)
from .ends import (Catenoidal, EndDescriptor, FrobeniusProblem, Horosphere,
                   Horospherical, build_end, canonical_catenoidal_frame,
                   canonical_horospherical_frame, catenoid_cousin_frame,
                   classify_end, extract_axis, frobenius_solve,
                   horosphere_frame, ode_residual)
from .flux import (FluxMatrix, FluxPolynomial, FluxTriple,
                   catenoidal_closed_form, catenoidal_polynomial,
                   circle_samples, flux_for_geodesic, flux_matrix,
                   flux_numeric, flux_triple, horospherical_closed_form,
                   horospherical_polynomial)
from .balance import (BalanceProblem, ConcurrencyResult, EuclideanEndData,
                      concurrency_check, euclidean_three_end_check,
                      polynomial_sum, three_end_axes, two_end_solve)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
