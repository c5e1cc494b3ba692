"""Truncated coned-off Cayley graphs.

Distances live on a doubled integer scale: a Cayley-graph edge has weight 2
and each half-edge between a vertex and a cone point has weight 1.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from ..groups.metric import metric_for


class DegenerateFamilyError(ValueError):
    """A parabolic family that cannot be probed (e.g. the whole group)."""


def coset_id(model, k, x):
    return (k, model.parabolics[k].coset_key(x))


def check_family(model):
    if not model.parabolics:
        raise ValueError(f"{model.key} declares no parabolic subgroups")
    seen = set()
    for h in model.parabolics:
        if h.letters & seen:
            raise ValueError("parabolic generator sets overlap")
        seen |= h.letters


@dataclass
class Cone:
    k: int
    key: object


class ConedOffBall:
    """B(e, r) of the Cayley graph plus one cone point per meeting coset."""

    def __init__(self, model, r):
        if model.parabolics:
            check_family(model)
        self.model = model
        self.r = r
        metric = metric_for(model)
        self.elements = list(metric.ball(r))
        self.index = {g: i for i, g in enumerate(self.elements)}
        n = len(self.elements)
        mul = model.multiply
        rows, cols, wts = [], [], []
        in_h = set().union(*(h.letters for h in model.parabolics))
        plain = []       # Cayley edges not labelled by a parabolic letter
        for i, x in enumerate(self.elements):
            for name, s in model.generators:
                j = self.index.get(mul(x, s))
                if j is not None and i < j:
                    rows.append(i)
                    cols.append(j)
                    wts.append(2)
                    plain.append(name not in in_h)
        self.n_gamma_edges = len(rows)
        self.cone_index = {}
        self.cones = []
        for i, x in enumerate(self.elements):
            for k in range(len(model.parabolics)):
                cid = coset_id(model, k, x)
                c = self.cone_index.get(cid)
                if c is None:
                    c = self.cone_index[cid] = n + len(self.cones)
                    self.cones.append(Cone(*cid))
                rows.append(i)
                cols.append(c)
                wts.append(1)
        self.n = n
        size = n + len(self.cones)
        A = sp.coo_matrix((wts, (rows, cols)), shape=(size, size)).tocsr()
        self.graph = (A + A.T).tocsr()
        # for path enumeration an S_H-labelled edge is always read as its
        # two half-edges through the cone point, so it is left out here
        keep = np.r_[np.array(plain, dtype=bool), np.ones(len(rows) - len(plain), dtype=bool)]
        rows, cols, wts = np.array(rows), np.array(cols), np.array(wts)
        B = sp.coo_matrix((wts[keep], (rows[keep], cols[keep])), shape=(size, size)).tocsr()
        self.hat_graph = (B + B.T).tocsr()
        self._spot_check_intersections()

    def _spot_check_intersections(self):
        m = self.model
        if len(m.parabolics) < 2:
            return
        ident = [h.coset_key(m.identity) for h in m.parabolics]
        for x in self.elements:
            if x == m.identity:
                continue
            inside = [k for k, h in enumerate(m.parabolics) if h.coset_key(x) == ident[k]]
            if len(inside) > 1:
                raise ValueError(f"parabolics {inside} share {m.format(x)}")

    def is_cone(self, v):
        return v >= self.n

    def node_label(self, v):
        if v < self.n:
            return self.model.format(self.elements[v])
        c = self.cones[v - self.n]
        return f"cone{c.k}:{c.key}"

    def hat_distances2(self, sources):
        """Doubled coned-off distances from each source index (rows)."""
        d = csgraph.dijkstra(self.graph, directed=False, indices=list(sources))
        return d

    def hat_distance(self, x, y):
        """d-hat(x, y) inside the truncation, as a float."""
        d2 = self.hat_distances2([self.index[x]])[0, self.index[y]]
        return d2 / 2

    def neighbours(self, v):
        G = self.hat_graph
        lo, hi = G.indptr[v], G.indptr[v + 1]
        return list(zip(G.indices[lo:hi].tolist(), G.data[lo:hi].astype(int).tolist()))


def build_coned_off(model, r):
    return ConedOffBall(model, r)


def hat_geodesics(cob, source, target, d2, cap):
    """All coned-off geodesics source -> target (node lists), up to ``cap``.

    ``d2`` is the doubled distance row from ``source``.  Returns the list
    and whether the cap was hit.
    """
    G = cob.hat_graph
    indptr, indices, data = G.indptr, G.indices, G.data
    out = []
    truncated = False
    stack = [(target, [target])]
    while stack:
        v, suffix = stack.pop()
        if v == source:
            out.append(suffix[::-1])
            if len(out) >= cap:
                truncated = bool(stack)
                break
            continue
        for p, w in zip(indices[indptr[v]:indptr[v + 1]], data[indptr[v]:indptr[v + 1]]):
            if d2[p] + w == d2[v]:
                stack.append((int(p), suffix + [int(p)]))
    return out, truncated


def geodesic_counts(cob, source, d2):
    """Number of geodesics from ``source`` to every node (float, may be huge)."""
    order = np.argsort(d2, kind="stable")
    G = cob.hat_graph
    count = np.zeros(G.shape[0])
    count[source] = 1.0
    indptr, indices, data = G.indptr, G.indices, G.data
    for v in order:
        if not np.isfinite(d2[v]) or v == source:
            continue
        lo, hi = indptr[v], indptr[v + 1]
        ps = indices[lo:hi]
        ok = d2[ps] + data[lo:hi] == d2[v]
        count[v] = count[ps[ok]].sum()
    return count
