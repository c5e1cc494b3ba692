"""Norm summaries for a single function."""

from dataclasses import dataclass, field

from .functions import sobolev_norm
from .opnorm import opnorm_profile, opnorm_witness


@dataclass
class NormReport:
    l1: float
    l2: float
    sobolev: dict = field(default_factory=dict)
    opnorm_lower: float = 0.0
    provenance: str = ""


def norm_report(f, s_values=(0, 1, 2), witness=None, factors=(1, 2, 4)):
    """l1, l2, Sobolev norms and the best certified operator-norm lower bound."""
    rep = NormReport(float(f.l1()), f.l2(), {s: sobolev_norm(f, s) for s in s_values})
    g = witness if witness is not None else f
    rep.opnorm_lower = opnorm_witness(f, g)
    rep.provenance = "witness"
    for est in opnorm_profile(f, factors):
        if est.value > rep.opnorm_lower:
            rep.opnorm_lower = est.value
            rep.provenance = est.provenance
    return rep
