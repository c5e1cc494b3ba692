"""Conditions (i)-(iii) for interval families, and the stabilizer blow-up.

For a vertex pair the family member is the interval C(x,y).  The checks are:
(i) every triple has a common point of its three intervals, (ii) the
interval count inside B(x,r) is at most c (r+1)^n, and (iii) the interval's
diameter equals d(x,y).
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .hyperplanes import dimension_estimate
from .intervals import (interval_counts, interval_exponent, interval_mask,
                        median_sweep, sample_pairs)

EXHAUSTIVE_TRIPLES_MAX_VERTICES = 500


@dataclass
class PropMaxReport:
    key: str
    dimension: int
    triples_checked: int
    empty_medians: list = field(default_factory=list)
    pairs_checked: int = 0
    growth_failures: list = field(default_factory=list)      # (x, y, r, count, bound)
    diameter_failures: list = field(default_factory=list)    # (x, y, diam, d)
    exponent: float = float("nan")
    exponent_pair: tuple = None

    @property
    def ok(self):
        return not (self.empty_medians or self.growth_failures or self.diameter_failures)


def diametral_pair(X):
    """A far pair: farthest from vertex 0, then farthest from that."""
    y = int(np.argmax(X.distances_from(0)))
    x = int(np.argmax(X.distances_from(y)))
    return min(x, y), max(x, y)


def prop_max_check(X, n_triples=10_000, n_pairs=2_000, c=1.0, seed=0):
    D = X.distance_matrix()
    dim = dimension_estimate(X).value
    if X.n <= EXHAUSTIVE_TRIPLES_MAX_VERTICES:
        sweep = median_sweep(X)
    else:
        rng = np.random.default_rng(seed)
        sweep = median_sweep(X, [tuple(int(v) for v in t)
                                 for t in rng.integers(X.n, size=(n_triples, 3))])
    rep = PropMaxReport(X.key, dim, sweep.triples, list(sweep.empty))
    for x, y in sample_pairs(X, n_pairs, seed):
        rep.pairs_checked += 1
        counts = interval_counts(X, x, y)
        for r, cnt in enumerate(counts):
            bound = c * (r + 1) ** dim
            if cnt > bound:
                rep.growth_failures.append((x, y, r, cnt, bound))
                break
        members = np.nonzero(interval_mask(X, x, y))[0]
        diam = int(D[np.ix_(members, members)].max())
        if diam != D[x, y]:
            rep.diameter_failures.append((x, y, diam, int(D[x, y])))
    x, y = diametral_pair(X)
    if D[x, y] >= 2:
        rep.exponent = interval_exponent(X, x, y, int(D[x, y]) // 2 or 1).slope
        rep.exponent_pair = (x, y)
    return rep


# -- blow-up -----------------------------------------------------------------

def stabilizers_from_action(perms):
    """perms: list of vertex permutations (one per group element).

    Returns, per vertex, the indices of the elements fixing it.
    """
    n = len(perms[0])
    return {v: [g for g, p in enumerate(perms) if p[v] == v] for v in range(n)}


class BlowupSpace:
    """Disjoint union of stabilizer copies G_x over the base vertices.

    Distinct points over one vertex are at distance 1; points over distinct
    vertices a, b are at distance d(a, b).
    """

    def __init__(self, X, sizes, c):
        self.X = X
        self.c = c
        self.sizes = list(sizes)
        self.points = [(v, i) for v in range(X.n) for i in range(self.sizes[v])]
        self.proj = np.array([v for v, _ in self.points], dtype=np.int64)

    def __len__(self):
        return len(self.points)

    def distance_matrix(self):
        D = self.X.distance_matrix()[np.ix_(self.proj, self.proj)].copy()
        same = self.proj[:, None] == self.proj[None, :]
        D[same] = 1
        np.fill_diagonal(D, 0)
        return D

    def fibre_mask(self, base_mask):
        return base_mask[self.proj]

    def c_set(self, p, q):
        """pi^-1 of the base interval between the projections."""
        return self.fibre_mask(interval_mask(self.X, int(self.proj[p]), int(self.proj[q])))


def blowup(X, stabilizers, c):
    """stabilizers: per-vertex size, or per-vertex collection of elements."""
    if isinstance(stabilizers, dict):
        raw = [stabilizers.get(v, 1) for v in range(X.n)]
    else:
        raw = list(stabilizers)
    if len(raw) != X.n:
        raise ValueError("need one stabilizer per vertex")
    sizes = [s if isinstance(s, int) else len(s) for s in raw]
    if min(sizes) < 1:
        raise ValueError("stabilizers contain at least the identity")
    if max(sizes) > c:
        v = sizes.index(max(sizes))
        raise ValueError(f"stabilizer of vertex {v} has size {sizes[v]} > bound {c}; "
                         "unbounded stabilizers are rejected")
    return BlowupSpace(X, sizes, c)


@dataclass
class BlowupReport:
    points: int
    c: int
    poly_scale: int
    dimension: int
    triples: int = 0
    empty_triples: list = field(default_factory=list)
    growth_failures: list = field(default_factory=list)     # (p, q, r, count, bound)
    fibre_ratio_failures: list = field(default_factory=list)
    diameter_failures: list = field(default_factory=list)   # (p, q, diam_Y, diam_X)
    distance_failures: list = field(default_factory=list)
    max_count_ratio: float = 0.0          # max count_Y / base polynomial

    @property
    def ok(self):
        return not (self.empty_triples or self.growth_failures or self.fibre_ratio_failures
                    or self.diameter_failures or self.distance_failures)


def lifted_check(Y, base_c=1.0):
    """(i)-(iii) for C_Y = pi^-1(C) with the (ii) polynomial scaled by Y.c."""
    X = Y.X
    DX = X.distance_matrix()
    DY = Y.distance_matrix()
    dim = dimension_estimate(X).value
    n = len(Y)
    rep = BlowupReport(n, Y.c, Y.c, dim)
    base_diff = np.abs(DY - DX[np.ix_(Y.proj, Y.proj)])
    for p, q in np.argwhere(base_diff > 1):
        rep.distance_failures.append((int(p), int(q)))
    cs = {}
    for p, q in itertools.product(range(n), repeat=2):
        cs[p, q] = Y.c_set(p, q)
    for p, q, s in itertools.combinations_with_replacement(range(n), 3):
        rep.triples += 1
        if not (cs[p, q] & cs[q, s] & cs[s, p]).any():
            rep.empty_triples.append((p, q, s))
    for (p, q), mask in cs.items():
        members = np.nonzero(mask)[0]
        dp = DY[p]
        a, b = int(Y.proj[p]), int(Y.proj[q])
        base_counts = interval_counts(X, a, b, int(DY.max()))
        for r in range(int(DY.max()) + 1):
            count = int((dp[members] <= r).sum())
            poly = base_c * (r + 1) ** dim
            rep.max_count_ratio = max(rep.max_count_ratio, count / poly)
            if count > Y.c * poly:
                rep.growth_failures.append((p, q, r, count, Y.c * poly))
            if r >= 1 and count > Y.c * base_counts[r]:
                rep.fibre_ratio_failures.append((p, q, r, count, base_counts[r]))
        diam_y = int(DY[np.ix_(members, members)].max())
        base_members = np.nonzero(interval_mask(X, a, b))[0]
        diam_x = int(DX[np.ix_(base_members, base_members)].max())
        if abs(diam_y - diam_x) > 1:
            rep.diameter_failures.append((p, q, diam_y, diam_x))
    return rep
