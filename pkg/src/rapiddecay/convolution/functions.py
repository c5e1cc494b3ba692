"""Finitely supported functions on a group and their convolution algebra."""

import math
from fractions import Fraction

from ..groups.metric import metric_for


def _abs2(v):
    if isinstance(v, complex):
        return v.real * v.real + v.imag * v.imag
    return v * v


class SparseGroupFunction:
    """Finitely supported scalar function on the elements of ``model``.

    Zero values are never stored.  Values may be ints, Fractions, floats or
    complex numbers; arithmetic stays exact as long as the inputs are.
    Instances are treated as immutable.
    """

    __slots__ = ("model", "_entries", "_radius")

    def __init__(self, model, entries=()):
        self.model = model
        self._entries = {g: v for g, v in dict(entries).items() if v != 0}
        self._radius = None

    # -- constructors ----------------------------------------------------
    @classmethod
    def delta(cls, model, g, value=1):
        return cls(model, {g: value})

    @classmethod
    def indicator(cls, model, elements, value=1):
        return cls(model, {g: value for g in elements})

    @classmethod
    def from_literal(cls, model, triples):
        """From (generator word, numerator, denominator) triples.

        Repeated words accumulate.
        """
        entries = {}
        for word, num, den in triples:
            g = model.evaluate(word)
            entries[g] = entries.get(g, 0) + Fraction(int(num), int(den))
        return cls(model, entries)

    # -- mapping protocol --------------------------------------------------
    def __getitem__(self, g):
        return self._entries.get(g, 0)

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def items(self):
        return self._entries.items()

    @property
    def support(self):
        return frozenset(self._entries)

    @property
    def support_radius(self):
        if self._radius is None:
            metric = metric_for(self.model)
            self._radius = max((metric.length(g) for g in self._entries), default=0)
        return self._radius

    def __eq__(self, other):
        if not isinstance(other, SparseGroupFunction):
            return NotImplemented
        return self.model is other.model and self._entries == other._entries

    def __repr__(self):
        fmt = self.model.format
        body = ", ".join(f"{fmt(g)}: {v}" for g, v in list(self._entries.items())[:6])
        more = ", ..." if len(self._entries) > 6 else ""
        return f"SparseGroupFunction({self.model.key}; {{{body}{more}}})"

    # -- linear structure --------------------------------------------------
    def _same(self, other):
        if self.model is not other.model:
            raise ValueError(f"model mismatch: {self.model.key} vs {other.model.key}")

    def __add__(self, other):
        self._same(other)
        out = dict(self._entries)
        for g, v in other.items():
            out[g] = out.get(g, 0) + v
        return SparseGroupFunction(self.model, out)

    def __neg__(self):
        return SparseGroupFunction(self.model, {g: -v for g, v in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return SparseGroupFunction(self.model, {g: c * v for g, v in self.items()})

    def __mul__(self, other):
        if isinstance(other, SparseGroupFunction):
            return convolve(self, other)
        return self.scale(other)

    __rmul__ = scale

    def restrict(self, elements):
        keep = set(elements)
        return SparseGroupFunction(self.model, {g: v for g, v in self.items() if g in keep})

    def reflect(self):
        """The function g -> f(g^-1)."""
        inv = self.model.invert
        return SparseGroupFunction(self.model, {inv(g): v for g, v in self.items()})

    def conjugate(self):
        return SparseGroupFunction(
            self.model, {g: (v.conjugate() if isinstance(v, complex) else v)
                         for g, v in self.items()})

    def real_part(self):
        return SparseGroupFunction(
            self.model, {g: (v.real if isinstance(v, complex) else v) for g, v in self.items()})

    def imag_part(self):
        return SparseGroupFunction(
            self.model, {g: v.imag for g, v in self.items() if isinstance(v, complex)})

    def is_nonnegative(self):
        return all(not isinstance(v, complex) and v >= 0 for v in self._entries.values())

    # -- norms -----------------------------------------------------------------
    def l1(self):
        return sum((abs(v) for v in self._entries.values()), 0)

    def l2_squared(self):
        return sum((_abs2(v) for v in self._entries.values()), 0)

    def l2(self):
        return math.sqrt(self.l2_squared())


def convolve(f, g):
    """(f*g)(x) = sum_m f(m) g(m^-1 x), computed exactly on supports."""
    f._same(g)
    mul = f.model.multiply
    out = {}
    for m, a in f.items():
        for n, b in g.items():
            x = mul(m, n)
            out[x] = out.get(x, 0) + a * b
    return SparseGroupFunction(f.model, out)


def triple_eval(f, g, h):
    """(f*g*h)(e), via the pairing of f*g with the reflection of h."""
    f._same(g)
    f._same(h)
    fg = convolve(f, g)
    inv = f.model.invert
    return sum((v * h[inv(x)] for x, v in fg.items()), 0)


def sobolev_norm(f, s):
    """sqrt(sum |f(g)|^2 (1 + |g|)^(2s)) for the word length |g|."""
    if s < 0:
        raise ValueError("Sobolev exponent must be nonnegative")
    metric = metric_for(f.model)
    total = 0.0
    for g, v in f.items():
        total += float(_abs2(v)) * (1 + metric.length(g)) ** (2 * s)
    return math.sqrt(total)


def sobolev_norm_squared(f, s):
    """Exact squared Sobolev norm for integer ``s``."""
    if int(s) != s or s < 0:
        raise ValueError("exact Sobolev norm needs a nonnegative integer exponent")
    metric = metric_for(f.model)
    return sum((_abs2(v) * (1 + metric.length(g)) ** (2 * int(s)) for g, v in f.items()), 0)


def restrict_to_sphere(f, n):
    """f restricted to elements of word length exactly n."""
    metric = metric_for(f.model)
    return SparseGroupFunction(f.model, {g: v for g, v in f.items() if metric.length(g) == n})


def positive_parts(f):
    """Four nonnegative parts with f = f1 - f2 + i (f3 - f4).

    f1, f2 have disjoint supports, as do f3, f4.
    """
    model = f.model
    parts = [{}, {}, {}, {}]
    for g, v in f.items():
        re = v.real if isinstance(v, complex) else v
        im = v.imag if isinstance(v, complex) else 0
        if re > 0:
            parts[0][g] = re
        elif re < 0:
            parts[1][g] = -re
        if im > 0:
            parts[2][g] = im
        elif im < 0:
            parts[3][g] = -im
    return tuple(SparseGroupFunction(model, p) for p in parts)


def decomposition_check(f):
    """Check the four-part split: reassembly, disjointness and the norm identity."""
    f1, f2, f3, f4 = positive_parts(f)
    if f1.support & f2.support or f3.support & f4.support:
        return False
    if not all(p.is_nonnegative() for p in (f1, f2, f3, f4)):
        return False
    back = {}
    for part, coef in ((f1, 1), (f2, -1), (f3, 1j), (f4, -1j)):
        for g, v in part.items():
            back[g] = back.get(g, 0) + coef * v
    back = {g: v for g, v in back.items() if v != 0}
    ok_values = set(back) == set(f.support) and all(back[g] == f[g] for g in back)
    norms = sum(p.l2_squared() for p in (f1, f2, f3, f4))
    return ok_values and norms == f.l2_squared()
