from .cauchy import (ExtensionReport, PlemeljReport, TooCloseToCurve, analytic_extension_test,
                     cauchy_transform, one_sided_limits, plemelj_jump_check)
from .rigidity import FloorResult, RigidityReport, ShapeFamily, rigidity_experiment
from .roots import (DegenerateObjective, NeutralCertificate, NeutralRoot, NoSignChange,
                    NonPhysicalRoot, RootFindTask, certify, find_neutral_bulk,
                    thin_shell_sequence, with_parameter)
from .shear import (Axis, RootCurve, ShearSweepReport, SweepGrid, c1_projection,
                    c1_zero_curve, shear_infeasibility_sweep, shear_multipoles)

__all__ = [
    "Axis", "DegenerateObjective", "ExtensionReport", "FloorResult", "NeutralCertificate",
    "NeutralRoot", "NoSignChange", "NonPhysicalRoot", "PlemeljReport", "RigidityReport",
    "RootCurve", "RootFindTask", "ShapeFamily", "ShearSweepReport", "SweepGrid",
    "TooCloseToCurve", "analytic_extension_test", "c1_projection", "c1_zero_curve",
    "cauchy_transform", "certify", "find_neutral_bulk", "one_sided_limits",
    "plemelj_jump_check", "rigidity_experiment", "shear_infeasibility_sweep",
    "shear_multipoles", "thin_shell_sequence", "with_parameter",
]
