"""The sets V_delta(x,y), C_H and C(x,y), and the triple-intersection test.

A delta-path from x to y is a Cayley-graph walk of length at most
d(x,y) + delta.  Every such walk stays in V_delta(x,y), and every subwalk is
at most delta longer than the distance between its ends.

C(x,y) collects, over all delta-paths, the sets C_H(p, q) for pairs of
points p, q of the path's point list (x, the entry and exit points of its
coset subwords, y).  Pairs whose points sit in a common coset but come from
different coset subwords are left out; see ``c_set_paths`` for the literal
enumeration that can include them.
"""

import math
from dataclasses import dataclass, field

from ..groups.metric import metric_for
from .coned import coset_id

DEFAULT_PATH_CAP = 10_000


def v_delta(model, x, y, delta):
    """V_delta(x,y) as a dict t -> d(x, t), by pruned breadth-first search."""
    metric = metric_for(model)
    mul = model.multiply
    gens = [g for _, g in model.generators]
    d = metric.distance(x, y)
    L = d + math.floor(delta)
    dist = {x: 0}
    frontier = [x]
    n = 0
    while frontier:
        n += 1
        nxt = []
        for t in frontier:
            for s in gens:
                u = mul(t, s)
                if u in dist:
                    continue
                if n + metric.distance(u, y) <= L:
                    dist[u] = n
                    nxt.append(u)
        frontier = nxt
    return dist


# -- coset balls ---------------------------------------------------------------

def _subgroup_ball(model, k, r):
    """Elements h of H_k with ambient length <= r (cached per model)."""
    cache = model.__dict__.setdefault("_coset_ball_cache", {})
    key = (k, r)
    if key in cache:
        return cache[key]
    H = model.parabolics[k]
    metric = metric_for(model)
    if H.isometric and H.letters:
        lm = model.letter_map
        gens = [lm[a] for a in sorted(H.letters)]
        seen = {model.identity}
        frontier = [model.identity]
        for _ in range(r):
            nxt = []
            for t in frontier:
                for s in gens:
                    u = model.multiply(t, s)
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        out = [h for h in seen if metric.length(h) <= r]
    else:
        ident = H.coset_key(model.identity)
        out = [h for h in metric.ball(r) if H.coset_key(h) == ident]
    out.sort(key=metric.length)
    cache[key] = out
    return out


def coset_ball(model, k, a, r):
    """B_H(a, r) = B(a, r) ∩ aH for the k-th parabolic."""
    mul = model.multiply
    return {mul(a, h) for h in _subgroup_ball(model, k, r)}


def c_h(model, p, q, K):
    """Union over the parabolics of C_H(p, q)."""
    metric = metric_for(model)
    out = {p, q}
    for k in range(len(model.parabolics)):
        if coset_id(model, k, p) == coset_id(model, k, q):
            r = metric.distance(p, q) + K
            out |= coset_ball(model, k, p, r)
            out |= coset_ball(model, k, q, r)
    return out


# -- C(x, y) -------------------------------------------------------------------

@dataclass
class Run:
    k: int
    entry: object
    exit: object


@dataclass
class CSet:
    x: object
    y: object
    delta: float
    K: int
    members: set
    points: set                      # x, y and all coset-subword endpoints
    runs: list = field(default_factory=list)
    v_size: int = 0
    capped: bool = False

    def __contains__(self, g):
        return g in self.members

    def __len__(self):
        return len(self.members)


def _min_h_length(model, k, a, b):
    """Shortest nonempty S_H-word from a to b (None if b is not in aH)."""
    H = model.parabolics[k]
    if not H.letters or coset_id(model, k, a) != coset_id(model, k, b):
        return None
    if a == b:
        return 2
    metric = metric_for(model)
    if H.isometric:
        return metric.distance(a, b)
    # breadth-first search inside the subgroup
    target = model.multiply(model.invert(a), b)
    gens = [model.letter_map[c] for c in sorted(H.letters)]
    seen = {model.identity}
    frontier = [model.identity]
    n = 0
    while frontier:
        n += 1
        nxt = []
        for t in frontier:
            for s in gens:
                u = model.multiply(t, s)
                if u == target:
                    return n
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
        if n > 64:
            return None
    return None


def c_set(model, x, y, delta, K=0):
    """C(x, y) by dynamic programming over admissible coset subwords.

    A coset subword from a to b (maximal S_H run) occurs on some delta-path
    exactly when f(a) + m(a, b) + h(b) <= d(x, y) + delta, where f(a) is the
    shortest walk from x to a not ending in an S_H letter (0 if a = x), h(b)
    the same from b to y, and m the shortest nonempty S_H-word from a to b.
    """
    metric = metric_for(model)
    V = v_delta(model, x, y, delta)
    L = metric.distance(x, y) + math.floor(delta)
    dy = {t: metric.distance(t, y) for t in V}
    mul = model.multiply
    runs = []
    for k, H in enumerate(model.parabolics):
        plain = [(n, g) for n, g in model.generators if n not in H.letters]
        f, h = {}, {}
        for t in V:
            best = 0 if t == x else math.inf
            best_h = 0 if t == y else math.inf
            for name, s in plain:
                u = mul(t, model.invert(s))
                if u in V:
                    best = min(best, V[u] + 1)
                w = mul(t, s)
                if w in V:
                    best_h = min(best_h, dy[w] + 1)
            f[t], h[t] = best, best_h
        groups = {}
        for t in V:
            groups.setdefault(coset_id(model, k, t), []).append(t)
        for members in groups.values():
            starts = [a for a in members if f[a] < L]
            ends = [b for b in members if h[b] < L]
            for a in starts:
                for b in ends:
                    if f[a] + h[b] + 1 > L:
                        continue
                    m = _min_h_length(model, k, a, b)
                    if m is not None and f[a] + m + h[b] <= L:
                        runs.append(Run(k, a, b))
    points = {x, y}
    for run in runs:
        points.add(run.entry)
        points.add(run.exit)
    members = set(points)
    for p in points:
        members |= c_h(model, p, p, K)
    members |= c_h(model, x, y, K)
    for run in runs:
        r = metric.distance(run.entry, run.exit) + K
        members |= coset_ball(model, run.k, run.entry, r)
        members |= coset_ball(model, run.k, run.exit, r)
    return CSet(x, y, delta, K, members, points, runs, len(V))


def _point_list(model, x, word):
    """(point, run id) list: x, subword entry/exit points, endpoint."""
    from .paths import decompose_path

    pts = [(x, None)]
    cur = x
    for i, piece in enumerate(decompose_path(model, word).pieces):
        nxt = model.evaluate(piece.text, cur)
        if piece.parabolic is not None:
            pts.append((cur, i))
            pts.append((nxt, i))
        cur = nxt
    pts.append((cur, None))
    return pts


def delta_paths(model, x, y, delta, cap=DEFAULT_PATH_CAP):
    """Words of all walks x -> y of length <= d(x,y) + delta (capped)."""
    metric = metric_for(model)
    L = metric.distance(x, y) + math.floor(delta)
    gens = list(model.generators)
    out = []
    capped = False
    stack = [(x, "")]
    while stack:
        t, w = stack.pop()
        if t == y and len(w) <= L:
            out.append(w)
            if len(out) >= cap:
                capped = bool(stack)
                break
        if len(w) == L:
            continue
        for name, s in reversed(gens):
            u = model.multiply(t, s)
            if len(w) + 1 + metric.distance(u, y) <= L:
                stack.append((u, w + name))
    return out, capped


def c_set_paths(model, x, y, delta, K=0, cap=DEFAULT_PATH_CAP, cross_pairs=False):
    """C(x, y) by explicit enumeration of delta-paths (capped at ``cap``).

    With ``cross_pairs=True`` every pair of points of a path is used, also
    same-coset pairs that come from different coset subwords.
    """
    words, capped = delta_paths(model, x, y, delta, cap)
    metric = metric_for(model)
    members, points = set(), set()
    seen_pairs = set()
    for w in words:
        pts = _point_list(model, x, w)
        points |= {p for p, _ in pts}
        for i, (p, ri) in enumerate(pts):
            for q, rj in pts[i:]:
                same = any(coset_id(model, k, p) == coset_id(model, k, q)
                           for k in range(len(model.parabolics)))
                if same and p != q and not cross_pairs:
                    ends = {p, q} == {x, y}
                    if not (ends or (ri is not None and ri == rj)):
                        continue
                if (p, q) in seen_pairs:
                    continue
                seen_pairs.add((p, q))
                members |= c_h(model, p, q, K)
    res = CSet(x, y, delta, K, members, points, [], 0, capped)
    res.n_paths = len(words)
    res.max_distance = max((metric.distance(x, t) for t in members), default=0)
    return res


# -- triples -------------------------------------------------------------------

class CSetCache:
    """C(e, g) cached by g; C(x, y) is obtained as x·C(e, x^-1 y)."""

    def __init__(self, model, delta, K):
        self.model, self.delta, self.K = model, delta, K
        self._base = {}

    def base(self, g):
        c = self._base.get(g)
        if c is None:
            c = self._base[g] = frozenset(c_set(self.model, self.model.identity, g,
                                                self.delta, self.K).members)
        return c

    def __call__(self, x, y):
        m = self.model
        return {m.multiply(x, t) for t in self.base(m.multiply(m.invert(x), y))}


@dataclass
class TripleResult:
    ok: bool
    witness: object = None
    sets: tuple = None


def triple_intersection_check(model, x, y, z, delta, K=0, cache=None):
    """Does C(x,y) ∩ C(y,z) ∩ C(z,x) contain a point?"""
    cs = cache if cache is not None else (lambda p, q: c_set(model, p, q, delta, K).members)
    a, b, c = cs(x, y), cs(y, z), cs(z, x)
    common = a & b & c
    if common:
        metric = metric_for(model)
        w = min(common, key=lambda g: (metric.distance(x, g), repr(g)))
        return TripleResult(True, w)
    return TripleResult(False, None, (a, b, c))
