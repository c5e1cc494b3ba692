"""Coned-off graphs, coset penetration and the C(x,y) construction."""

from .bcp import BCPReport, BCPRow, bcp_probe, is_quasi_geodesic
from .calibrate import (Calibration, QuasiConvexity, delta_calibrate, quasiconvexity_probe,
                        resolve_subgroup)
from .coned import ConedOffBall, DegenerateFamilyError, build_coned_off, hat_geodesics
from .csets import (CSet, CSetCache, c_h, c_set, c_set_paths, coset_ball, delta_paths,
                    triple_intersection_check, v_delta)
from .paths import (PenetrationRecord, RelativePathDecomposition, decompose_path,
                    penetration_points)

__all__ = [
    "BCPReport", "BCPRow", "CSet", "CSetCache", "Calibration", "ConedOffBall",
    "DegenerateFamilyError", "PenetrationRecord", "QuasiConvexity",
    "RelativePathDecomposition", "bcp_probe", "build_coned_off", "c_h", "c_set",
    "c_set_paths", "coset_ball", "decompose_path", "delta_calibrate", "delta_paths",
    "hat_geodesics", "is_quasi_geodesic", "penetration_points", "quasiconvexity_probe",
    "resolve_subgroup", "triple_intersection_check", "v_delta",
]
