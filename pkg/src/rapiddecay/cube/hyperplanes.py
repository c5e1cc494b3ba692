"""Hyperplanes as classes of square-opposite edges, and what they measure."""

from dataclasses import dataclass

import networkx as nx
import numpy as np
import scipy.sparse as sp
from scipy.cluster.hierarchy import DisjointSet
from scipy.sparse import csgraph

from .complex import NotCAT0Error


@dataclass(frozen=True)
class Hyperplane:
    id: int
    edge_class: frozenset          # edge indices
    halfspaces: tuple              # (frozenset, frozenset) of vertices

    def separates(self, p, q):
        return (p in self.halfspaces[0]) != (q in self.halfspaces[0])


class HyperplaneSystem:
    """All hyperplanes of a complex plus a dense side matrix.

    ``side[h, v]`` is 1 when v lies in ``hyperplanes[h].halfspaces[1]``.
    """

    def __init__(self, X, hyperplanes, side):
        self.X = X
        self.hyperplanes = hyperplanes
        self.side = side
        self.edge_to_h = np.empty(len(X.edges), dtype=np.int64)
        for h in hyperplanes:
            for e in h.edge_class:
                self.edge_to_h[e] = h.id
        self._crossing = None

    def __len__(self):
        return len(self.hyperplanes)

    def __iter__(self):
        return iter(self.hyperplanes)

    def hyperplane_of_edge(self, u, v):
        return int(self.edge_to_h[self.X.edge_id(u, v)])

    def separating(self, p, q):
        """Ids of hyperplanes with p and q in different halfspaces."""
        return [int(h) for h in np.nonzero(self.side[:, p] != self.side[:, q])[0]]

    def separation_counts(self):
        """Matrix of separating-hyperplane counts for all vertex pairs."""
        S = self.side.astype(np.int64)
        c = S.sum(axis=0)
        return c[:, None] + c[None, :] - 2 * (S.T @ S)

    def crossing_matrix(self):
        """h and k cross when all four halfspace intersections are nonempty."""
        if self._crossing is None:
            S = self.side.astype(np.int64)
            T = 1 - S
            cross = (S @ S.T > 0) & (S @ T.T > 0) & (T @ S.T > 0) & (T @ T.T > 0)
            np.fill_diagonal(cross, False)
            self._crossing = cross
        return self._crossing

    def crosses(self, h, k):
        return bool(self.crossing_matrix()[h, k])

    def crossing_graph(self):
        G = nx.Graph()
        G.add_nodes_from(range(len(self)))
        hs, ks = np.nonzero(np.triu(self.crossing_matrix()))
        G.add_edges_from(zip(hs.tolist(), ks.tolist()))
        return G


def compute_hyperplanes(X):
    """Partition edges by square-opposition and check each class separates X."""
    if getattr(X, "_hyperplanes", None) is not None:
        return X._hyperplanes
    ds = DisjointSet(range(len(X.edges)))
    for a, b, c, d in X.squares:
        ds.merge(X.edge_id(a, b), X.edge_id(c, d))
        ds.merge(X.edge_id(b, c), X.edge_id(d, a))
    classes = sorted((sorted(s) for s in ds.subsets()), key=lambda s: s[0])
    edges = np.array(X.edges, dtype=np.int64).reshape(-1, 2)
    hyperplanes = []
    side = np.zeros((len(classes), X.n), dtype=np.uint8)
    for hid, cls in enumerate(classes):
        keep = np.ones(len(edges), dtype=bool)
        keep[cls] = False
        u, v = edges[keep].T if keep.any() else (np.array([], int), np.array([], int))
        A = sp.csr_matrix((np.ones(2 * len(u)), (np.r_[u, v], np.r_[v, u])), shape=(X.n, X.n))
        ncomp, lab = csgraph.connected_components(A, directed=False)
        cu, cv = lab[edges[cls, 0]], lab[edges[cls, 1]]
        if ncomp != 2 or np.any(cu == cv):
            raise NotCAT0Error(f"edge class {hid} does not split the complex in two",
                               [X.edges[e] for e in cls[:4]])
        # orient so that vertex 0 is in halfspace 0
        ones = lab != lab[0]
        side[hid] = ones
        hyperplanes.append(Hyperplane(hid, frozenset(cls),
                                      (frozenset(np.nonzero(~ones)[0].tolist()),
                                       frozenset(np.nonzero(ones)[0].tolist()))))
    system = HyperplaneSystem(X, hyperplanes, side)
    X._hyperplanes = system
    return system


@dataclass
class SageevCheck:
    distance: int
    separating: int

    @property
    def equal(self):
        return self.distance == self.separating

    def __iter__(self):
        return iter((self.distance, self.separating, self.equal))


def sageev_distance_check(X, p, q):
    """(graph distance, separating hyperplane count, equal?)."""
    H = compute_hyperplanes(X)
    return SageevCheck(X.distance(p, q), len(H.separating(p, q)))


def sageev_exhaustive(X):
    """All vertex pairs at once; returns the list of mismatching pairs."""
    H = compute_hyperplanes(X)
    D = X.distance_matrix()
    M = H.separation_counts()
    bad = np.argwhere(np.triu(D != M))
    return [(int(p), int(q), int(D[p, q]), int(M[p, q])) for p, q in bad]


@dataclass
class DimensionEstimate:
    value: int
    exact: bool
    clique: tuple
    declared: int = None

    @property
    def matches_declared(self):
        return self.declared is None or self.declared == self.value

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value


def dimension_estimate(X, clique_cap=200_000):
    """Largest family of pairwise-crossing hyperplanes.

    Maximal cliques of the crossing graph are enumerated; past ``clique_cap``
    cliques the best one so far is returned with ``exact=False``.
    """
    H = compute_hyperplanes(X)
    G = H.crossing_graph()
    best, exact = (), True
    for i, c in enumerate(nx.find_cliques(G)):
        if i >= clique_cap:
            exact = False
            break
        if len(c) > len(best):
            best = tuple(sorted(c))
    return DimensionEstimate(len(best), exact, best, X.declared_dimension)
