from .kernel import (EvaluationAtOrigin, KelvinKernel, check_divdiv_identity,
                     check_divergence_identity, disk_divergence_integral, kelvin_matrix,
                     traction_kernel)
from .layers import QuadratureUnderResolved, single_layer, traction_of_single_layer
from .solver import (BemSolution, GeometryOverlap, PointOnBoundary, SingularSystem,
                     TransmissionAssembler, TransmissionScenario, evaluate_field,
                     neutrality_gap, solve_transmission)

__all__ = [
    "BemSolution", "EvaluationAtOrigin", "GeometryOverlap", "KelvinKernel", "PointOnBoundary",
    "QuadratureUnderResolved", "SingularSystem", "TransmissionAssembler",
    "TransmissionScenario", "check_divdiv_identity", "check_divergence_identity",
    "disk_divergence_integral", "evaluate_field", "kelvin_matrix", "neutrality_gap",
    "single_layer", "solve_transmission", "traction_kernel", "traction_of_single_layer",
]
