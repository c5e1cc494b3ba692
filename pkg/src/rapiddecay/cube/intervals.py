"""Intervals, medians, interval growth and minimal hyperplane partitions.

Interval membership always uses d(x,t) + d(t,y) = d(x,y); geodesics are
never enumerated.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..fitting import loglog_slope, upper_half_window
from .complex import NotCAT0Error
from .hyperplanes import compute_hyperplanes, dimension_estimate


@dataclass(frozen=True)
class IntervalSet:
    x: int
    y: int
    members: frozenset

    def __contains__(self, t):
        return t in self.members

    def __len__(self):
        return len(self.members)


def interval_mask(X, x, y, slack=0):
    dx, dy = X.distances_from(x), X.distances_from(y)
    return dx + dy <= dx[y] + slack


def interval(X, x, y):
    return IntervalSet(x, y, frozenset(np.nonzero(interval_mask(X, x, y))[0].tolist()))


def median(X, x, y, z, delta=0):
    """Vertices lying in all three (delta-thickened) intervals.

    At delta = 0 this is the set of medians; an empty answer means the
    complex is not CAT(0).
    """
    mask = interval_mask(X, x, y, delta) & interval_mask(X, y, z, delta) \
        & interval_mask(X, z, x, delta)
    out = frozenset(np.nonzero(mask)[0].tolist())
    if not out and delta == 0:
        raise NotCAT0Error("empty median", (x, y, z))
    return out


def delta_midpoints(X, x, y, z, delta):
    """The delta-midpoints of a triple (no error when empty)."""
    mask = interval_mask(X, x, y, delta) & interval_mask(X, y, z, delta) \
        & interval_mask(X, z, x, delta)
    return frozenset(np.nonzero(mask)[0].tolist())


def _packed_intervals(X):
    """P[x, y] = packed bit row of interval(x, y), for all pairs."""
    D = X.distance_matrix()
    n = X.n
    nbytes = (n + 7) // 8
    P = np.empty((n, n, nbytes), dtype=np.uint8)
    for x in range(n):
        mask = D[x][None, :] + D <= D[x][:, None]     # row y: D[x,t] + D[y,t] <= D[x,y]
        P[x] = np.packbits(mask, axis=1, bitorder="little")
    return P


@dataclass
class MedianSweep:
    triples: int
    empty: list = field(default_factory=list)      # witnesses

    @property
    def ok(self):
        return not self.empty


def median_sweep(X, triples=None, max_witnesses=20):
    """Count triples with empty median.

    With ``triples=None`` all unordered triples (repeats allowed) are
    checked; the median set is symmetric so this covers every ordered one.
    """
    P = _packed_intervals(X)
    n = X.n
    sweep = MedianSweep(0)
    if triples is None:
        for x in range(n):
            for y in range(x, n):
                zs = slice(y, n)
                both = P[x, y][None, :] & P[y, zs] & P[zs, x]
                hit = both.any(axis=1)
                sweep.triples += hit.size
                if not hit.all() and len(sweep.empty) < max_witnesses:
                    for z in np.nonzero(~hit)[0][:max_witnesses]:
                        sweep.empty.append((x, y, y + int(z)))
        return sweep
    for x, y, z in triples:
        sweep.triples += 1
        if not (P[x, y] & P[y, z] & P[z, x]).any() and len(sweep.empty) < max_witnesses:
            sweep.empty.append((x, y, z))
    return sweep


# -- interval growth ---------------------------------------------------------

@dataclass
class IntervalGrowth:
    count: int
    bound: float
    dimension: int

    @property
    def ok(self):
        return self.count <= self.bound


def interval_counts(X, x, y, r_max=None):
    """|interval(x,y) ∩ B(x,r)| for r = 0..r_max (default d(x,y))."""
    dx = X.distances_from(x)
    inside = dx[interval_mask(X, x, y)]
    r_max = int(dx[y]) if r_max is None else r_max
    hist = np.bincount(inside, minlength=r_max + 1)[:r_max + 1]
    return np.cumsum(hist).tolist()


def interval_growth(X, x, y, r, c=1.0, dimension=None):
    """Count with the check count <= c (r+1)^n, n the dimension estimate."""
    if dimension is None:
        dimension = dimension_estimate(X).value
    count = interval_counts(X, x, y, r)[r]
    return IntervalGrowth(count, c * (r + 1) ** dimension, dimension)


def interval_exponent(X, x, y, r_max=None):
    """Log-log slope of the interval count against r+1 on the upper half window."""
    counts = interval_counts(X, x, y, r_max)
    r_max = len(counts) - 1
    lo, hi = upper_half_window(r_max)
    rs = list(range(lo, hi + 1))
    return loglog_slope([r + 1 for r in rs], [counts[r] for r in rs], warn=False)


# -- minimal partition -------------------------------------------------------

def lex_geodesic(X, x, y):
    """Geodesic that steps to the smallest-index admissible neighbour."""
    dy = X.distances_from(y)
    path = [x]
    cur = x
    while cur != y:
        cur = next(v for v in X.adj[cur] if dy[v] == dy[cur] - 1)
        path.append(cur)
    return path


@dataclass
class Partition:
    classes: list                   # lists of hyperplane ids, in crossing order
    witness: tuple                  # pairwise crossing, one per class (None if not found)
    geodesic: list

    def __len__(self):
        return len(self.classes)


def _greedy_classes(order, crosses):
    classes = []
    remaining = list(order)
    while remaining:
        cls = []
        rest = []
        for h in remaining:
            if not any(crosses[h, k] for k in cls):
                cls.append(h)
            else:
                rest.append(h)
        classes.append(cls)
        remaining = rest
    return classes


def _crossing_transversal(classes, crosses):
    """One hyperplane per class, pairwise crossing (backtracking search)."""
    chosen = []

    def extend(i):
        if i == len(classes):
            return True
        for h in classes[i]:
            if all(crosses[h, k] for k in chosen):
                chosen.append(h)
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    return tuple(chosen) if extend(0) else None


def minimal_partition(X, x, y):
    """Greedy partition of the separating hyperplanes along the lex geodesic.

    Each class is built by scanning the not-yet-assigned hyperplanes in the
    order the geodesic crosses them and keeping those that cross nothing
    already kept.
    """
    if x == y:
        raise ValueError("minimal_partition needs x != y")
    H = compute_hyperplanes(X)
    path = lex_geodesic(X, x, y)
    order = [H.hyperplane_of_edge(u, v) for u, v in zip(path, path[1:])]
    crosses = H.crossing_matrix()
    classes = _greedy_classes(order, crosses)
    return Partition(classes, _crossing_transversal(classes, crosses), path)


def is_minimal(classes, crosses):
    """Every hyperplane crosses some member of another class."""
    if len(classes) == 1:
        return True
    for i, cls in enumerate(classes):
        others = [k for j, c in enumerate(classes) if j != i for k in c]
        for h in cls:
            if not any(crosses[h, k] for k in others):
                return False
    return True


def sample_pairs(X, n_pairs, seed=0):
    """Deterministic vertex pairs; all pairs when there are at most n_pairs."""
    all_pairs = X.n * (X.n - 1) // 2
    if all_pairs <= n_pairs:
        return list(itertools.combinations(range(X.n), 2))
    rng = np.random.default_rng(seed)
    out = set()
    while len(out) < n_pairs:
        a, b = (int(v) for v in rng.integers(X.n, size=2))
        if a != b:
            out.add((min(a, b), max(a, b)))
    return sorted(out)

