"""Group-algebra convolution, norms and operator-norm lower bounds."""

from .functions import (SparseGroupFunction, convolve, decomposition_check,
                        positive_parts, restrict_to_sphere, sobolev_norm,
                        sobolev_norm_squared, triple_eval)
from .mozes import MozesReport, mozes_obstruction, unipotent_subgroup
from .opnorm import (OpnormEstimate, RDProfile, ZeroWitnessError, opnorm_estimate,
                     opnorm_profile, opnorm_witness, opnorm_witness_squared,
                     rd_profile, rd_samples)
from .report import NormReport, norm_report

__all__ = [
    "MozesReport", "NormReport", "OpnormEstimate", "RDProfile", "SparseGroupFunction",
    "ZeroWitnessError", "convolve", "decomposition_check", "mozes_obstruction",
    "norm_report", "opnorm_estimate", "opnorm_profile", "opnorm_witness",
    "opnorm_witness_squared", "positive_parts", "rd_profile", "rd_samples",
    "restrict_to_sphere", "sobolev_norm", "sobolev_norm_squared", "triple_eval",
    "unipotent_subgroup",
]
