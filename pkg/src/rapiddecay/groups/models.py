"""Finitely generated groups with explicit normal forms.

Elements are plain hashable values (the canonical form itself); the model
owns multiplication, inversion and printing.  Equality of elements is
equality of canonical forms.

Generators are named by single letters.  A chosen generator gets a lowercase
letter and its inverse the matching uppercase letter; involutions only get
the lowercase one.  The stored generating set is always closed under
inversion.
"""

import string
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable

from . import laurent as lp


@dataclass(frozen=True)
class Subgroup:
    """A subgroup H given by generator letters, with a coset labelling.

    ``coset_key(x)`` returns the same value exactly when two elements lie in
    the same left coset xH.  ``isometric`` records that the word metric of
    H in ``letters`` agrees with the ambient word metric on H.
    """
    label: str
    letters: frozenset
    coset_key: Callable = field(compare=False, repr=False)
    isometric: bool = False
    whole_group: bool = False

    def contains(self, x, identity_key):
        return self.coset_key(x) == identity_key


def _name_generators(chosen, invert, identity):
    """chosen: list of elements -> list of (name, element), inverse-closed."""
    out, seen = [], set()
    letters = iter(string.ascii_lowercase)
    for g in chosen:
        if g == identity or g in seen:
            continue
        name = next(letters)
        out.append((name, g))
        seen.add(g)
        gi = invert(g)
        if gi not in seen:
            out.append((name.upper(), gi))
            seen.add(gi)
    return tuple(out)


class GroupModel:
    """Base class: subclasses set ``key``, ``identity``, ``generators``."""

    key = "?"
    identity: Hashable = None
    generators: tuple = ()
    parabolics: tuple = ()

    # -- arithmetic ---------------------------------------------------
    def multiply(self, x, y):
        raise NotImplementedError

    def invert(self, x):
        raise NotImplementedError

    def exact_length(self, x):
        """Closed-form word length, or None when only search can tell."""
        return None

    def format(self, x):
        return repr(x)

    # -- generators and words ------------------------------------------
    @property
    def letters(self):
        return tuple(name for name, _ in self.generators)

    @property
    def letter_map(self):
        try:
            return self._letter_map
        except AttributeError:
            self._letter_map = dict(self.generators)
            return self._letter_map

    def inverse_letter(self, name):
        g = self.invert(self.letter_map[name])
        for other, h in self.generators:
            if h == g:
                return other
        raise KeyError(name)

    def evaluate(self, word, start=None):
        x = self.identity if start is None else start
        for ch in word:
            try:
                x = self.multiply(x, self.letter_map[ch])
            except KeyError:
                raise ValueError(f"unknown generator {ch!r} for {self.key}") from None
        return x

    def path(self, word, start=None):
        """Vertices visited by ``word`` read left to right from ``start``."""
        x = self.identity if start is None else start
        out = [x]
        for ch in word:
            x = self.multiply(x, self.letter_map[ch])
            out.append(x)
        return out

    # -- subgroups -------------------------------------------------------
    def subgroup(self, spec):
        """Subgroup from a token: 'all', or model-specific indices."""
        if spec == "all":
            return Subgroup("all", frozenset(self.letters), lambda x: 0,
                            isometric=True, whole_group=True)
        return self._subgroup(spec)

    def _subgroup(self, spec):
        raise ValueError(f"{self.key} has no subgroup {spec!r}")

    def with_parabolics(self, specs):
        subs = tuple(self.subgroup(s) for s in specs)
        seen = set()
        for h in subs:
            if h.letters & seen:
                raise ValueError("parabolic generator sets must be pairwise disjoint")
            seen |= h.letters
        self.parabolics = subs
        return self

    def __repr__(self):
        return f"<{type(self).__name__} {self.key}>"


def _letter_subset(model, indices):
    """Letters (and inverse letters) of chosen generators with given indices."""
    chosen = [n for n, _ in model.generators if n.islower()]
    out = set()
    for i in indices:
        name = chosen[i]
        out.add(name)
        out.add(model.inverse_letter(name))
    return frozenset(out)


def _parse_indices(spec):
    return [int(tok) for tok in str(spec).split("+")]


# ---------------------------------------------------------------------------

class FreeGroup(GroupModel):
    """Free group F_k; elements are freely reduced tuples of +-(1..k)."""

    def __init__(self, k):
        self.k = k
        self.key = f"free:{k}"
        self.identity = ()
        self.generators = _name_generators([(i,) for i in range(1, k + 1)],
                                           self.invert, ())

    def multiply(self, x, y):
        i = 0
        n = min(len(x), len(y))
        while i < n and x[-1 - i] == -y[i]:
            i += 1
        return x[:len(x) - i] + y[i:]

    def invert(self, x):
        return tuple(-a for a in reversed(x))

    def exact_length(self, x):
        return len(x)

    def format(self, x):
        if not x:
            return "e"
        return "".join(string.ascii_lowercase[a - 1] if a > 0
                       else string.ascii_uppercase[-a - 1] for a in x)

    def _subgroup(self, spec):
        idx = _parse_indices(spec)
        basis = {i + 1 for i in idx}

        def key(x):
            j = len(x)
            while j and abs(x[j - 1]) in basis:
                j -= 1
            return x[:j]

        return Subgroup(f"<{spec}>", _letter_subset(self, idx), key, isometric=True)


class FreeAbelian(GroupModel):
    """Z^d with standard generators; elements are integer tuples."""

    def __init__(self, d):
        self.d = d
        self.key = f"zd:{d}"
        self.identity = (0,) * d
        basis = [tuple(int(i == j) for j in range(d)) for i in range(d)]
        self.generators = _name_generators(basis, self.invert, self.identity)

    def multiply(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def invert(self, x):
        return tuple(-a for a in x)

    def exact_length(self, x):
        return sum(abs(a) for a in x)

    def format(self, x):
        return "(" + ",".join(map(str, x)) + ")"

    def _subgroup(self, spec):
        idx = _parse_indices(spec)
        keep = set(idx)

        def key(x):
            return tuple(0 if i in keep else a for i, a in enumerate(x))

        return Subgroup(f"<{spec}>", _letter_subset(self, idx), key, isometric=True)

    def lattice_subgroup(self, vectors, label="lattice"):
        """Subgroup generated by arbitrary integer vectors (no letters)."""
        from sympy import Matrix
        from sympy.matrices.normalforms import hermite_normal_form

        cols = []
        vecs = [v for v in vectors if any(v)]
        if vecs:
            hnf = hermite_normal_form(Matrix(vecs).T)
            for j in range(hnf.shape[1]):
                col = [int(hnf[i, j]) for i in range(self.d)]
                piv = max(i for i, a in enumerate(col) if a)
                if col[piv] < 0:
                    col = [-a for a in col]
                cols.append((piv, col))
        cols.sort(reverse=True)

        def key(x):
            v = list(x)
            for piv, col in cols:
                q = v[piv] // col[piv]
                if q:
                    v = [a - q * c for a, c in zip(v, col)]
            return tuple(v)

        return Subgroup(label, frozenset(), key)


class Heisenberg(GroupModel):
    """Integer Heisenberg group; (x, y, z) is [[1,x,z],[0,1,y],[0,0,1]]."""

    def __init__(self):
        self.key = "heisenberg"
        self.identity = (0, 0, 0)
        self.generators = _name_generators([(1, 0, 0), (0, 1, 0)], self.invert,
                                           self.identity)

    def multiply(self, g, h):
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])

    def invert(self, g):
        x, y, z = g
        return (-x, -y, x * y - z)


class BaumslagSolitar12(GroupModel):
    """BS(1,2) = <a, t | t a t^-1 = a^2> as affine maps u -> 2^k u + q.

    Elements are ``(k, q)`` with ``q`` a dyadic Fraction; a is u -> u + 1 and
    t is u -> 2u.  Products compose maps: (g h)(u) = g(h(u)).
    """

    def __init__(self):
        self.key = "bs:1:2"
        self.identity = (0, Fraction(0))
        self.generators = _name_generators([(0, Fraction(1)), (1, Fraction(0))],
                                           self.invert, self.identity)
        # letters: a/A for a, b/B for t; rename the second pair to t/T
        self.generators = tuple(
            (("t" if n == "b" else "T" if n == "B" else n), g) for n, g in self.generators)

    def multiply(self, g, h):
        k1, q1 = g
        k2, q2 = h
        return (k1 + k2, q1 + (q2 * 2 ** k1 if k1 >= 0 else q2 / 2 ** (-k1)))

    def invert(self, g):
        k, q = g
        return (-k, -(q * 2 ** (-k) if k <= 0 else q / 2 ** k))

    def normal_form(self, g):
        """Exponents (i, m, j) with g = t^-i a^m t^j, i, j >= 0, i minimal."""
        k, q = g
        den = q.denominator
        i = den.bit_length() - 1
        i = max(i, -k)
        m = q * 2 ** i
        assert m.denominator == 1
        return i, int(m), k + i

    def format(self, g):
        i, m, j = self.normal_form(g)
        parts = []
        if i:
            parts.append(f"t^-{i}")
        if m:
            parts.append(f"a^{m}")
        if j:
            parts.append(f"t^{j}")
        return " ".join(parts) or "e"

    def _subgroup(self, spec):
        if str(spec) != "0":
            raise ValueError("BS(1,2) only exposes the subgroup <a> (index 0)")

        def key(g):
            # g<a> = {u -> 2^k u + q + 2^k n}: label by k and q mod 2^k
            k, q = g
            step = Fraction(2) ** k
            return (k, q - step * (q / step).__floor__())

        return Subgroup("<a>", frozenset({"a", "A"}), key)


class PGL2Laurent(GroupModel):
    """Subgroup of PGL_2(F_p[t, 1/t]) generated by diag(t,1), [[1,1],[0,1]], [[1,0],[1,1]].

    Matrices are normalized modulo unit scalars c*t^k so that the first
    nonzero entry has lowest term 1*t^0.
    """

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"p={p} is not prime")
        self.p = p
        self.key = f"pgl2:{p}"
        one, zero = lp.monomial(1, 0, p), lp.ZERO
        self.identity = lp.mat_normalize((one, zero, zero, one), p)
        gens = [
            lp.mat_normalize((lp.monomial(1, 1, p), zero, zero, one), p),
            lp.mat_normalize((one, one, zero, one), p),
            lp.mat_normalize((one, zero, one, one), p),
        ]
        named = _name_generators(gens, self.invert, self.identity)
        rename = {"a": "t", "A": "T", "b": "u", "B": "U", "c": "l", "C": "L"}
        self.generators = tuple((rename[n], g) for n, g in named)

    def multiply(self, g, h):
        return lp.mat_mul(g, h, self.p)

    def invert(self, g):
        return lp.mat_inv(g, self.p)

    def matrix(self, a, b, c, d):
        """Element from four ``{exponent: coeff}`` dicts."""
        p = self.p
        return lp.mat_normalize(tuple(lp.lp(x, p) for x in (a, b, c, d)), p)

    def upper_unipotent(self, poly):
        """[[1, P(t)], [0, 1]] for P given as ``{exponent: coeff}``."""
        return self.matrix({0: 1}, poly, {}, {0: 1})

    def diag_t(self, n):
        return self.matrix({n: 1}, {}, {}, {0: 1})

    def format(self, g):
        return lp.mat_to_str(g)


class FiniteGroup(GroupModel):
    """Finite group from a Cayley table (0-based internally)."""

    def __init__(self, table, generator_indices, key="finite"):
        n = len(table)
        if any(len(row) != n for row in table):
            raise ValueError("Cayley table must be square")
        self.table = [list(row) for row in table]
        self.n = n
        self.key = key
        ident = [e for e in range(n) if self.table[e] == list(range(n))]
        if len(ident) != 1:
            raise ValueError("Cayley table has no unique identity")
        self.identity = ident[0]
        self.inverse = [None] * n
        for x in range(n):
            for y in range(n):
                if self.table[x][y] == self.identity:
                    self.inverse[x] = y
                    break
            if self.inverse[x] is None:
                raise ValueError("Cayley table is not a group (missing inverse)")
        self.generators = _name_generators(list(generator_indices), self.invert,
                                           self.identity)

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            lines = [ln.split() for ln in fh if ln.strip()]
        n = int(lines[0][0])
        table = [[int(v) - 1 for v in row] for row in lines[1:n + 1]]
        gens = [int(v) - 1 for v in lines[n + 1]] if len(lines) > n + 1 else list(range(n))
        return cls(table, gens, key=f"finite:{path}")

    @classmethod
    def cyclic(cls, n):
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return cls(table, [1 % n], key=f"cyclic:{n}")

    def multiply(self, x, y):
        return self.table[x][y]

    def invert(self, x):
        return self.inverse[x]

    def format(self, x):
        return str(x + 1)


class _Composite(GroupModel):
    def _relabel(self, factors):
        """Fresh letters for the factors' generators; returns per-factor maps."""
        fresh = iter(string.ascii_lowercase)
        maps = []
        for f in factors:
            m = {}
            for name, _ in f.generators:
                if name.islower():
                    m[name] = next(fresh)
            for name, _ in f.generators:
                if name.isupper():
                    m[name] = m[f.inverse_letter(name)].upper()
            maps.append(m)
        return maps


class DirectProduct(_Composite):
    """A x B with the union of the factors' generators."""

    def __init__(self, a, b):
        self.factors = (a, b)
        self.key = f"product:{a.key},{b.key}"
        self.identity = (a.identity, b.identity)
        maps = self._relabel(self.factors)
        gens = [(maps[0][n], (g, b.identity)) for n, g in a.generators]
        gens += [(maps[1][n], (a.identity, g)) for n, g in b.generators]
        self.generators = tuple(gens)
        self.factor_maps = maps

    def multiply(self, x, y):
        a, b = self.factors
        return (a.multiply(x[0], y[0]), b.multiply(x[1], y[1]))

    def invert(self, x):
        a, b = self.factors
        return (a.invert(x[0]), b.invert(x[1]))

    def exact_length(self, x):
        la = self.factors[0].exact_length(x[0])
        lb = self.factors[1].exact_length(x[1])
        if la is None or lb is None:
            return None
        return la + lb

    def format(self, x):
        return f"({self.factors[0].format(x[0])}, {self.factors[1].format(x[1])})"


class FreeProduct(_Composite):
    """A * B; elements are tuples of syllables (factor index, nontrivial element)."""

    def __init__(self, a, b):
        self.factors = (a, b)
        self.key = f"freeprod:{a.key},{b.key}"
        self.identity = ()
        maps = self._relabel(self.factors)
        gens = []
        for i, f in enumerate(self.factors):
            gens += [(maps[i][n], ((i, g),)) for n, g in f.generators]
        self.generators = tuple(gens)
        self.factor_maps = maps

    def _push(self, out, syl):
        i, g = syl
        if out and out[-1][0] == i:
            f = self.factors[i]
            h = f.multiply(out[-1][1], g)
            out.pop()
            if h != f.identity:
                out.append((i, h))
        else:
            out.append(syl)

    def multiply(self, x, y):
        if not y:
            return x
        if not x:
            return y
        if x[-1][0] != y[0][0]:
            return x + y
        out = list(x)
        for syl in y:
            self._push(out, syl)
        return tuple(out)

    def invert(self, x):
        return tuple((i, self.factors[i].invert(g)) for i, g in reversed(x))

    def exact_length(self, x):
        total = 0
        for i, g in x:
            n = self.factors[i].exact_length(g)
            if n is None:
                return None
            total += n
        return total

    def format(self, x):
        if not x:
            return "e"
        return "*".join(f"{self.factors[i].format(g)}_{i}" for i, g in x)

    def _subgroup(self, spec):
        i = int(spec)
        letters = frozenset(self.factor_maps[i].values())

        def key(x):
            if x and x[-1][0] == i:
                return x[:-1]
            return x

        return Subgroup(f"factor{i}", letters, key, isometric=True)
