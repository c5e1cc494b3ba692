"""Log-log slope fits used for growth and decay exponents."""

import math
import warnings
from dataclasses import dataclass

import numpy as np


class FitUnstableWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    residual: float
    window: tuple
    unstable: bool = False


def upper_half_window(r_max):
    """Radii ceil(r_max/2) .. r_max, never including 0."""
    lo = max(1, math.ceil(r_max / 2))
    return lo, r_max


def loglog_slope(xs, ys, residual_threshold=0.05, warn=True):
    """Least-squares slope of log(y) against log(x).

    Points with non-positive x or y are dropped. The residual is the RMS
    deviation in log space; above ``residual_threshold`` the fit is flagged.
    """
    pts = [(float(x), float(y)) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(pts) < 2:
        raise ValueError("need at least two positive points to fit a slope")
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    unstable = resid > residual_threshold
    if unstable and warn:
        warnings.warn(f"log-log fit residual {resid:.3g} exceeds {residual_threshold}",
                      FitUnstableWarning, stacklevel=2)
    return SlopeFit(float(slope), float(intercept), resid,
                    (pts[0][0], pts[-1][0]), unstable)
