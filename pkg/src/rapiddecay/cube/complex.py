"""One-skeleta of CAT(0) cube complexes with designated squares.

Higher cubes are implicit: only vertices, edges and squares are stored.
Vertices are indexed 0..n-1; ``labels`` keeps a readable name per vertex
(a coordinate tuple for grids, a path for trees).
"""

import itertools
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

COMPLEX_KEYS = ("cube:<n>", "file:<path>", "grid:<d>:<side>", "tree:<arity>:<depth>",
                "treeprod:<arity>:<depth>:<arity>:<depth>")

EXAMPLE_COMPLEXES = ("cube:2", "cube:3", "cube:4", "grid:1:15", "grid:2:10", "grid:3:15",
                     "tree:2:5", "tree:3:5", "treeprod:2:3:2:3")

DENSE_DISTANCE_CAP = 6000


class NotCAT0Error(ValueError):
    """The input fails one of the operational CAT(0) checks."""

    def __init__(self, reason, witness=None):
        self.reason = reason
        self.witness = witness
        msg = f"input not CAT(0)-consistent: {reason}"
        if witness is not None:
            msg += f" (witness {witness})"
        super().__init__(msg)


class CubeComplexGraph:
    """Vertices, edges and squares of a cube complex.

    Construction validates that every square bounds a 4-cycle of edges and
    that the graph is connected and bipartite.
    """

    def __init__(self, n, edges, squares=(), declared_dimension=None, labels=None, key=None):
        self.n = int(n)
        self.key = key or "anonymous"
        self.labels = list(labels) if labels is not None else list(range(self.n))
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"bad edge {u} {v}")
            es.add((min(u, v), max(u, v)))
        self.edges = sorted(es)
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.squares = [tuple(int(a) for a in sq) for sq in squares]
        self.declared_dimension = declared_dimension
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = [sorted(a) for a in adj]
        self._rows = {}
        self._dense = None
        self._validate()

    # -- validation ------------------------------------------------------
    def edge_id(self, u, v):
        return self.edge_index[(min(u, v), max(u, v))]

    def square_edges(self, sq):
        a, b, c, d = sq
        return [(a, b), (b, c), (c, d), (d, a)]

    def _validate(self):
        for sq in self.squares:
            if len(set(sq)) != 4:
                raise NotCAT0Error("square with repeated vertex", sq)
            for u, v in self.square_edges(sq):
                if (min(u, v), max(u, v)) not in self.edge_index:
                    raise NotCAT0Error("square boundary is not a 4-cycle of edges", sq)
        if self.n == 0:
            raise ValueError("empty complex")
        ncomp, _ = csgraph.connected_components(self.adjacency_matrix(), directed=False)
        if ncomp != 1:
            raise NotCAT0Error("graph is not connected")
        odd = self.odd_cycle_edge()
        if odd is not None:
            raise NotCAT0Error("graph is not bipartite", odd)

    def odd_cycle_edge(self):
        """An edge joining two vertices of equal BFS parity, or None."""
        d0 = self.distances_from(0)
        for u, v in self.edges:
            if d0[u] % 2 == d0[v] % 2:
                return (u, v)
        return None

    # -- distances ---------------------------------------------------------
    def adjacency_matrix(self):
        if not self.edges:
            return sp.csr_matrix((self.n, self.n))
        u, v = np.array(self.edges).T
        data = np.ones(2 * len(u))
        return sp.csr_matrix((data, (np.r_[u, v], np.r_[v, u])), shape=(self.n, self.n))

    def distances_from(self, v):
        row = self._rows.get(v)
        if row is None:
            if self._dense is not None:
                return self._dense[v]
            d = csgraph.shortest_path(self.adjacency_matrix(), unweighted=True,
                                      directed=False, indices=[v])[0]
            row = self._rows[v] = d.astype(np.int32)
        return row

    def distance_matrix(self):
        if self._dense is None:
            if self.n > DENSE_DISTANCE_CAP:
                raise MemoryError(f"dense distances capped at {DENSE_DISTANCE_CAP} vertices")
            d = csgraph.shortest_path(self.adjacency_matrix(), unweighted=True, directed=False)
            self._dense = d.astype(np.int32)
        return self._dense

    def distance(self, u, v):
        if self._dense is not None:
            return int(self._dense[u, v])
        return int(self.distances_from(u)[v])

    def index_of(self, label):
        if not hasattr(self, "_label_index"):
            self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        return self._label_index[label]

    def __repr__(self):
        return (f"CubeComplexGraph({self.key}: {self.n} vertices, {len(self.edges)} edges, "
                f"{len(self.squares)} squares)")


# -- builders --------------------------------------------------------------

def _product(a, b, key):
    """Cartesian product of two square complexes (squares from edge pairs)."""
    n = a.n * b.n
    idx = lambda i, j: i * b.n + j
    edges, squares = [], []
    for i in range(a.n):
        for u, v in b.edges:
            edges.append((idx(i, u), idx(i, v)))
    for u, v in a.edges:
        for j in range(b.n):
            edges.append((idx(u, j), idx(v, j)))
    for (u, v), (s, t) in itertools.product(a.edges, b.edges):
        squares.append((idx(u, s), idx(v, s), idx(v, t), idx(u, t)))
    for sq in a.squares:
        for j in range(b.n):
            squares.append(tuple(idx(x, j) for x in sq))
    for sq in b.squares:
        for i in range(a.n):
            squares.append(tuple(idx(i, x) for x in sq))
    labels = [(la, lb) for la in a.labels for lb in b.labels]
    dims = [x.declared_dimension for x in (a, b)]
    dim = sum(dims) if None not in dims else None
    return CubeComplexGraph(n, edges, squares, dim, labels, key)


def grid(d, side):
    """[0, side]^d with unit squares; vertex index has coordinate 0 fastest."""
    if d < 1 or side < 1:
        raise ValueError("grid needs d >= 1 and side >= 1")
    m = side + 1
    strides = [m ** i for i in range(d)]
    labels = [tuple(c[::-1]) for c in itertools.product(range(m), repeat=d)]
    edges, squares = [], []
    for v, c in enumerate(labels):
        free = [i for i in range(d) if c[i] < side]
        for i in free:
            edges.append((v, v + strides[i]))
        for i, j in itertools.combinations(free, 2):
            si, sj = strides[i], strides[j]
            squares.append((v, v + si, v + si + sj, v + sj))
    return CubeComplexGraph(m ** d, edges, squares, d, labels, f"grid:{d}:{side}")


def cube(n):
    g = grid(n, 1)
    g.key = f"cube:{n}"
    return g


def tree(arity, depth):
    """Rooted tree in which every internal node has ``arity`` children."""
    if arity < 1 or depth < 0:
        raise ValueError("tree needs arity >= 1 and depth >= 0")
    labels = [()]
    edges = []
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for p in frontier:
            for c in range(arity):
                labels.append(labels[p] + (c,))
                edges.append((p, len(labels) - 1))
                nxt.append(len(labels) - 1)
        frontier = nxt
    return CubeComplexGraph(len(labels), edges, (), 1 if depth else 0, labels,
                            f"tree:{arity}:{depth}")


def treeprod(a1, d1, a2, d2):
    return _product(tree(a1, d1), tree(a2, d2), f"treeprod:{a1}:{d1}:{a2}:{d2}")


def parse_complex(text, key="file"):
    """Read the line format: vertices n / edge u v / square a b c d / dimension n."""
    n, edges, squares, dim = None, [], [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            nums = [int(x) for x in rest]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer field in {raw!r}") from None
        if head == "vertices" and len(nums) == 1:
            n = nums[0]
        elif head == "edge" and len(nums) == 2:
            edges.append(tuple(nums))
        elif head == "square" and len(nums) == 4:
            squares.append(tuple(nums))
        elif head == "dimension" and len(nums) == 1:
            dim = nums[0]
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    if n is None:
        raise ValueError("missing 'vertices n' line")
    return CubeComplexGraph(n, edges, squares, dim, None, key)


@lru_cache(maxsize=None)
def get_complex(key):
    """Complex for a registry key such as grid:2:10 or tree:3:5 (cached)."""
    kind, _, rest = key.partition(":")
    if kind == "file":
        with open(rest) as fh:
            return parse_complex(fh.read(), key)
    try:
        args = [int(x) for x in rest.split(":")] if rest else []
    except ValueError:
        raise ValueError(f"unknown complex key {key!r}") from None
    builders = {"grid": (grid, 2), "tree": (tree, 2), "treeprod": (treeprod, 4), "cube": (cube, 1)}
    if kind not in builders or len(args) != builders[kind][1]:
        raise ValueError(f"unknown complex key {key!r}")
    X = builders[kind][0](*args)
    X.key = key
    return X
