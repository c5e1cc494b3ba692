"""Empirical bounded-coset-penetration constants.

Relative paths start at the identity.  Paths are grouped by a coset that
contains their endpoint (the terminal coset); inside a group every pair of
paths starts at the same point and ends in the same coset.  For each other
coset Q penetrated by some path of the group:

* case 2: entry points into Q of different paths, and likewise exit points,
  are compared by Cayley-graph distance;
* case 1: when some path of the group avoids Q, the distance travelled inside
  Q by the paths that do penetrate it is recorded.

The terminal coset itself is left out of the comparison, since two paths
may leave it at far apart endpoints.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csgraph

from ..groups.metric import metric_for
from .coned import DegenerateFamilyError, build_coned_off, check_family, coset_id, hat_geodesics
from .paths import PenetrationRecord, has_backtracking

DIAMETER_POINT_CAP = 200


@dataclass
class BCPRow:
    pair_id: str
    d: int
    d_hat: float
    cosets_penetrated: int
    K_case1: int
    K_case2: int
    backtracked: bool


@dataclass
class BCPReport:
    key: str
    P: float
    radii: list
    K_by_radius: dict
    rows: list = field(default_factory=list)       # rows at the largest radius
    paths_by_radius: dict = field(default_factory=dict)
    truncated: bool = False

    @property
    def K(self):
        return self.K_by_radius[self.radii[-1]]

    @property
    def stable(self):
        """Observed K does not increase with the radius."""
        ks = [self.K_by_radius[r] for r in self.radii]
        return all(b <= a for a, b in zip(ks, ks[1:]))


@dataclass
class _PathInfo:
    end: object
    records: list
    backtracking: bool
    d_hat2: float


def path_records(cob, nodes):
    """Penetration records of a coned-off node path."""
    metric = metric_for(cob.model)
    out = []
    for i, v in enumerate(nodes):
        if cob.is_cone(v) and 0 < i < len(nodes) - 1:
            c = cob.cones[v - cob.n]
            a, b = cob.elements[nodes[i - 1]], cob.elements[nodes[i + 1]]
            out.append(PenetrationRecord((c.k, c.key), a, b, metric.distance(a, b)))
    return out


def _diameter(points, metric):
    pts = sorted(points, key=repr)[:DIAMETER_POINT_CAP]
    return max((metric.distance(a, b) for a, b in itertools.combinations(pts, 2)), default=0)


def _aggregate(model, infos, label):
    """Rows and the overall K for a list of paths from the identity."""
    metric = metric_for(model)
    groups = {}
    for pid, info in enumerate(infos):
        for k in range(len(model.parabolics)):
            groups.setdefault(coset_id(model, k, info.end), []).append(pid)
    rows = []
    K = 0
    for gid, (term, members) in enumerate(sorted(groups.items(), key=lambda kv: repr(kv[0]))):
        if len(members) < 2:
            continue
        entries, exits, travel, hits = {}, {}, {}, {}
        for pid in members:
            for rec in infos[pid].records:
                if rec.coset == term:
                    continue
                entries.setdefault(rec.coset, set()).add(rec.entry)
                exits.setdefault(rec.coset, set()).add(rec.exit)
                travel[rec.coset] = max(travel.get(rec.coset, 0), rec.travel)
                hits.setdefault(rec.coset, set()).add(pid)
        k1 = max((travel[q] for q in hits if len(hits[q]) < len(members)), default=0)
        k2 = max((max(_diameter(entries[q], metric), _diameter(exits[q], metric))
                  for q in hits), default=0)
        K = max(K, k1, k2)
        rows.append(BCPRow(
            f"{label}:{gid}",
            max(metric.length(infos[p].end) for p in members),
            max(infos[p].d_hat2 for p in members) / 2,
            len(hits), k1, k2,
            any(infos[p].backtracking for p in members)))
    return K, rows


def _geodesic_paths(model, cob, path_cap):
    src = cob.index[model.identity]
    d2 = csgraph.dijkstra(cob.graph, directed=False, indices=[src])[0]
    infos, truncated = [], False
    for v in range(cob.n):
        paths, cut = hat_geodesics(cob, src, v, d2, path_cap)
        truncated |= cut
        for nodes in paths:
            recs = path_records(cob, nodes)
            infos.append(_PathInfo(cob.elements[v], recs, has_backtracking(recs), d2[v]))
    return infos, truncated


def is_quasi_geodesic(cob, nodes, P):
    """Check (1/P)|t - t'| - P <= d-hat <= P|t - t'| + P along the path."""
    G = cob.hat_graph
    pos = [0.0]
    for u, v in zip(nodes, nodes[1:]):
        pos.append(pos[-1] + G[u, v] / 2)
    span = pos[-1]
    uniq = sorted(set(nodes))
    D = csgraph.dijkstra(cob.graph, directed=False, indices=uniq, limit=2 * span + 1) / 2
    row = {v: i for i, v in enumerate(uniq)}
    for i, j in itertools.combinations(range(len(nodes)), 2):
        t = pos[j] - pos[i]
        dh = D[row[nodes[i]], nodes[j]]
        if not (t / P - P <= dh <= P * t + P):
            return False
    return True


def _sampled_paths(model, cob, P, n_samples, seed, max_steps):
    rng = np.random.default_rng(seed)
    src = cob.index[model.identity]
    G = cob.hat_graph
    infos = []
    for _ in range(n_samples):
        steps = int(rng.integers(1, max_steps + 1))
        nodes = [src]
        cones = set()
        for _ in range(steps):
            v = nodes[-1]
            nbrs = G.indices[G.indptr[v]:G.indptr[v + 1]]
            if cob.is_cone(v):
                nbrs = nbrs[nbrs != nodes[-2]]
            else:
                nbrs = nbrs[[not (cob.is_cone(w) and w in cones) for w in nbrs]]
            if len(nbrs) == 0:
                break
            w = int(rng.choice(nbrs))
            if cob.is_cone(w):
                cones.add(w)
            nodes.append(w)
        if cob.is_cone(nodes[-1]):
            nodes.pop()
        if len(nodes) < 2 or not is_quasi_geodesic(cob, nodes, P):
            continue
        recs = path_records(cob, nodes)
        d2 = csgraph.dijkstra(cob.graph, directed=False, indices=[src])[0][nodes[-1]]
        infos.append(_PathInfo(cob.elements[nodes[-1]], recs, has_backtracking(recs), d2))
    return [i for i in infos if not i.backtracking]


def bcp_probe(model, P=1, r=4, path_cap=2000, n_samples=300, seed=0):
    """Observed K(P) at radii r-2, r-1, r (geodesics exhaustively when P = 1)."""
    if P < 1:
        raise ValueError("P must be at least 1")
    check_family(model)
    if any(h.whole_group for h in model.parabolics):
        raise DegenerateFamilyError("a parabolic equal to the whole group leaves nothing to probe")
    radii = [rr for rr in (r - 2, r - 1, r) if rr >= 1]
    report = BCPReport(model.key, P, radii, {})
    for rr in radii:
        cob = build_coned_off(model, rr)
        if P == 1:
            infos, cut = _geodesic_paths(model, cob, path_cap)
            report.truncated |= cut
        else:
            infos = _sampled_paths(model, cob, P, n_samples, seed, 2 * rr)
        K, rows = _aggregate(model, infos, f"r{rr}")
        report.K_by_radius[rr] = K
        report.paths_by_radius[rr] = len(infos)
        if rr == radii[-1]:
            report.rows = rows
    return report
