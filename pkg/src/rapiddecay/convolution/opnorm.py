"""Certified lower bounds for the left-convolution operator norm.

Only lower bounds are computable from finite data: the witness ratio
||f*g|| / ||g|| for a chosen g, and the top singular value of g -> f*g
restricted to functions supported in a ball B(e, R).
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from ..budget import BudgetExceeded
from ..fitting import loglog_slope, upper_half_window
from ..groups.metric import metric_for
from .functions import SparseGroupFunction, convolve

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 5000
DEFAULT_NNZ_CAP = 3_000_000


class ZeroWitnessError(ValueError):
    pass


def opnorm_witness_squared(f, g):
    """(||f*g||_2 / ||g||_2)^2, exact when f and g are."""
    g2 = g.l2_squared()
    if g2 == 0:
        raise ZeroWitnessError("witness function is zero")
    num = convolve(f, g).l2_squared()
    if isinstance(num, (int, Fraction)) and isinstance(g2, (int, Fraction)):
        return Fraction(num) / Fraction(g2)
    return num / g2


def opnorm_witness(f, g):
    """||f*g||_2 / ||g||_2, a lower bound for the operator norm of f."""
    return math.sqrt(opnorm_witness_squared(f, g))


# -- truncated operator -------------------------------------------------------

class _TruncatedOperators:
    """Left-multiplication maps on B(e, R), shared across functions."""

    def __init__(self, model, R):
        self.model = model
        self.R = R
        self.domain = metric_for(model).ball(R)
        self.target_index = {g: i for i, g in enumerate(self.domain)}
        self.maps = {}

    def left_map(self, m):
        arr = self.maps.get(m)
        if arr is None:
            mul = self.model.multiply
            idx = self.target_index
            out = np.empty(len(self.domain), dtype=np.int64)
            for j, x in enumerate(self.domain):
                y = mul(m, x)
                i = idx.get(y)
                if i is None:
                    i = idx[y] = len(idx)
                out[j] = i
            arr = self.maps[m] = out
        return arr

    def matrix(self, f):
        rows, cols, vals = [], [], []
        n = len(self.domain)
        col = np.arange(n)
        complex_vals = any(isinstance(v, complex) for _, v in f.items())
        for m, v in f.items():
            rows.append(self.left_map(m))
            cols.append(col)
            vals.append(np.full(n, complex(v) if complex_vals else float(v)))
        shape = (len(self.target_index), n)
        return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                             shape=shape)


def _operators(model, R):
    cache = model.__dict__.setdefault("_opnorm_cache", {})
    ops = cache.get(R)
    if ops is None:
        ops = cache[R] = _TruncatedOperators(model, R)
    return ops


def _check_nnz(metric, R, n_terms, cap):
    # grow sphere by sphere so an oversized truncation is refused early
    for k in range(R + 1):
        size = metric.ball_size(k)
        if n_terms * size > cap:
            raise BudgetExceeded(f"operator at R={R}", cap, n_terms * size)


@dataclass
class OpnormEstimate:
    value: float
    R: int
    iterations: int
    converged: bool
    trace: list = field(default_factory=list, repr=False)

    @property
    def provenance(self):
        return f"power-iteration at truncation R={self.R}"


def opnorm_estimate(f, R, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, nnz_cap=None):
    """Top singular value of g -> f*g on functions supported in B(e, R).

    Power iteration on T^H T from the indicator of B(e, min(R, 2)); stops
    when the Rayleigh quotient changes by less than ``tol`` relatively.
    The trace lists the successive singular-value estimates.
    """
    if R < f.support_radius:
        raise ValueError(f"truncation R={R} is below the support radius {f.support_radius}")
    if len(f) == 0:
        return OpnormEstimate(0.0, R, 0, True, [0.0])
    metric = metric_for(f.model)
    if nnz_cap is not None:
        _check_nnz(metric, R, len(f), nnz_cap)
    ops = _operators(f.model, R)
    T = ops.matrix(f)
    TH = T.conj().T.tocsr()
    start_r = min(R, 2)
    v = np.zeros(T.shape[1], dtype=T.dtype)
    v[:metric.ball_size(start_r)] = 1.0  # domain is ordered by sphere
    v /= np.linalg.norm(v)
    trace = []
    rho_prev = None
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        w = T @ v
        rho = float(np.vdot(w, w).real)
        trace.append(math.sqrt(rho))
        if rho_prev is not None and abs(rho - rho_prev) <= tol * max(rho, 1e-300):
            converged = True
            break
        rho_prev = rho
        u = TH @ w
        nu = np.linalg.norm(u)
        if nu == 0:
            converged = True
            break
        v = u / nu
    return OpnormEstimate(max(trace), R, it, converged, trace)


def truncation_schedule(r, factors=(1, 2, 4, 8)):
    return sorted({max(1, r) * k for k in factors})


def opnorm_profile(f, factors=(1, 2, 4, 8), nnz_cap=DEFAULT_NNZ_CAP, tol=DEFAULT_TOL):
    """Estimates over the truncation schedule, stopping at the budget."""
    out = []
    for R in truncation_schedule(f.support_radius, factors):
        try:
            out.append(opnorm_estimate(f, R, tol=tol, nnz_cap=nnz_cap))
        except BudgetExceeded:
            break
    if not out:
        # smallest admissible truncation even if over the cap
        out.append(opnorm_estimate(f, max(f.support_radius, 0), tol=tol))
    return out


# -- RD profile ----------------------------------------------------------------

@dataclass
class RDRow:
    r: int
    sample_id: str
    l1: float
    l2: float
    ratio_lower: float
    truncation_R: int
    iterations: int
    converged: bool


@dataclass
class RDProfile:
    key: str
    rows: list
    max_ratio: dict        # r -> max ratio over samples
    exponent: float
    residual: float


def rd_samples(model, r, n_random=20, seed=0):
    """chi_B(r), chi_S(r) and seeded random 0/1 functions on B(e, r)."""
    metric = metric_for(model)
    elems = metric.ball(r)
    out = [("ball", SparseGroupFunction.indicator(model, elems)),
           ("sphere", SparseGroupFunction.indicator(model, metric.sphere(r)))]
    rng = np.random.default_rng([seed, r])
    for i in range(n_random):
        mask = rng.random(len(elems)) < 0.5
        if not mask.any():
            mask[rng.integers(len(elems))] = True
        out.append((f"rand{i}", SparseGroupFunction.indicator(
            model, [g for g, keep in zip(elems, mask) if keep])))
    return out


def rd_profile(model, r_max, n_random=20, seed=0, factors=(1, 2, 4, 8),
               nnz_cap=DEFAULT_NNZ_CAP, tol=DEFAULT_TOL):
    """Largest certified ||f||_* / ||f||_2 over the sampler, per radius."""
    rows = []
    best = {}
    for r in range(r_max + 1):
        for sid, f in rd_samples(model, r, n_random, seed):
            l2 = f.l2()
            if l2 == 0:
                continue
            witness = opnorm_witness(f, f)
            ests = opnorm_profile(f, factors, nnz_cap, tol)
            top = max(ests, key=lambda e: e.value)
            lower = max(witness, top.value)
            rows.append(RDRow(r, sid, float(f.l1()), l2, lower / l2, top.R,
                              top.iterations, top.converged))
            best[r] = max(best.get(r, 0.0), lower / l2)
    exponent, residual = float("nan"), float("nan")
    if r_max >= 2:
        lo, hi = upper_half_window(r_max)
        rs = [r for r in range(lo, hi + 1)]
        if len(rs) >= 2 and all(best.get(r, 0) > 0 for r in rs):
            fit = loglog_slope(rs, [best[r] for r in rs], warn=False)
            exponent, residual = fit.slope, fit.residual
    return RDProfile(model.key, rows, best, exponent, residual)
