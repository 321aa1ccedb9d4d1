"""Lie-derivative transport of tensor fields by fluid motions, with numerical
checks of the associated invariance and conservation laws."""

from .errors import ArgumentError, ConfigError, DegenerateMapError, EvaluationFailure
from .kinematics import (
    DeformationState,
    FlowMap,
    MassField,
    catalog_flow,
    deformation_gradient,
    evolve_deformation,
    mass_density,
    trajectory_flow,
    velocity_gradient,
)
from .lie import (
    LieResult,
    commutation_defect,
    helmholtz_residual,
    lagrangian_lie_derivative,
    lie_derivative,
    material_derivative,
    specific_vorticity_residual,
    vorticity,
)
from .tensors import (
    EulerianField,
    TensorFieldValue,
    Variance,
    eulerian_field,
    pull_back,
    push_forward,
    transported_field,
)

__version__ = "0.1.0"
