"""CAT(0) cube complexes: hyperplanes, intervals, medians and blow-ups."""

from .complex import (COMPLEX_KEYS, EXAMPLE_COMPLEXES, CubeComplexGraph, NotCAT0Error,
                      cube, get_complex, grid, parse_complex, tree, treeprod)
from .hyperplanes import (DimensionEstimate, Hyperplane, HyperplaneSystem,
                          compute_hyperplanes, dimension_estimate, sageev_distance_check,
                          sageev_exhaustive)
from .intervals import (IntervalSet, delta_midpoints, interval, interval_counts,
                        interval_exponent, interval_growth, is_minimal, lex_geodesic,
                        median, median_sweep, minimal_partition, sample_pairs)
from .propmax import (BlowupSpace, PropMaxReport, blowup, lifted_check, prop_max_check,
                      stabilizers_from_action)

__all__ = [
    "BlowupSpace", "COMPLEX_KEYS", "CubeComplexGraph", "DimensionEstimate",
    "EXAMPLE_COMPLEXES", "Hyperplane", "HyperplaneSystem", "IntervalSet", "NotCAT0Error",
    "PropMaxReport", "blowup", "compute_hyperplanes", "cube", "delta_midpoints",
    "dimension_estimate", "get_complex", "grid", "interval", "interval_counts",
    "interval_exponent", "interval_growth", "is_minimal", "lex_geodesic", "lifted_check",
    "median", "median_sweep", "minimal_partition", "parse_complex", "prop_max_check",
    "sageev_distance_check", "sageev_exhaustive", "sample_pairs", "stabilizers_from_action",
    "tree", "treeprod",
]
