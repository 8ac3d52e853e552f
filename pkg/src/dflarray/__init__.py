"""Multi-antenna body model for device-free localization.

Predicts the field a uniform linear array receives when an absorbing sheet
perturbs a short radio link, and estimates the direction of maximum received
power and the excess attenuation by beam scanning.
"""

from .array_processing import (
    Hypothesis,
    SteeringVector,
    array_factor,
    beamform_power,
    correlation_matrix,
    steering_nonplanar,
    steering_planar,
)
from .doa import DoaEstimate, GammaGrid, PowerRatioCurve, estimate_doa, power_ratio_curve, reference_power_p0
from .em_model import (
    FieldVector,
    NoiseModel,
    Occupancy,
    excess_attenuation_db,
    perturbed_ratio,
    reference_ratio,
    signal_vector,
    snapshot,
)
from .geometry import LinkLayout, TargetSheet, fresnel_radius
from .quadrature import QuadratureSpec, integrate_2d, integrate_2d_oracle
from .scenario import Scenario, load_scenario

__version__ = "0.1.0"

__all__ = [
    "DoaEstimate",
    "FieldVector",
    "GammaGrid",
    "Hypothesis",
    "LinkLayout",
    "NoiseModel",
    "Occupancy",
    "PowerRatioCurve",
    "QuadratureSpec",
    "Scenario",
    "SteeringVector",
    "TargetSheet",
    "array_factor",
    "beamform_power",
    "correlation_matrix",
    "estimate_doa",
    "excess_attenuation_db",
    "fresnel_radius",
    "integrate_2d",
    "integrate_2d_oracle",
    "load_scenario",
    "perturbed_ratio",
    "power_ratio_curve",
    "reference_power_p0",
    "reference_ratio",
    "signal_vector",
    "snapshot",
    "steering_nonplanar",
    "steering_planar",
]
