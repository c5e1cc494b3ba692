"""Unbounded finite stabilizers in PGL_2(F_p[t, 1/t]) defeat Rapid Decay.

L_n is the group of upper unipotent matrices [[1, P], [0, 1]] with P a
polynomial of degree at most n.  Its indicator chi_n satisfies
chi_n * chi_n = |L_n| chi_n, so the witness ratio is |L_n|, exponential in n,
while L_n sits in a ball of radius linear in n.
"""

import itertools
import math
from dataclasses import dataclass, field

from ..groups.metric import metric_for
from ..groups.registry import get_group
from .functions import SparseGroupFunction, convolve
from .opnorm import opnorm_witness_squared

SUPPORTED_PRIMES = (2, 3, 5)


def unipotent_subgroup(model, n):
    """Elements of L_n in the model's canonical form."""
    p = model.p
    out = []
    for coeffs in itertools.product(range(p), repeat=n + 1):
        out.append(model.upper_unipotent({i: c for i, c in enumerate(coeffs)}))
    return out


def conjugation_word(n):
    """Three-factor word t^n u t^-n for [[1, t^n], [0, 1]]."""
    return "t" * n + "u" + "T" * n


def unipotent_word(model, coeffs):
    """A word for [[1, sum c_i t^i], [0, 1]] by nested conjugation.

    Uses u^{c_0} t u^{c_1} t ... u^{c_n} T^n with u^c written as c letters
    (or p - c inverse letters when shorter).
    """
    p = model.p
    u, U = "u", model.inverse_letter("u")
    parts = []
    for i, c in enumerate(coeffs):
        c %= p
        parts.append(u * c if c <= p - c else U * (p - c))
        if i < len(coeffs) - 1:
            parts.append("t")
    parts.append("T" * (len(coeffs) - 1))
    return "".join(parts)


@dataclass
class MozesLevel:
    n: int
    order: int
    expected_order: int
    chi_squared_is_scaled: bool
    witness_ratio_squared: object          # exact
    predicted_ratio_squared: object        # p^(n+1) * ||chi_n||^2, exact
    word: str
    word_matches: bool
    word_length_bound: int
    support_radius_bound: int
    bfs_length: int = None

    @property
    def ok(self):
        return (self.order == self.expected_order and self.chi_squared_is_scaled
                and self.witness_ratio_squared == self.predicted_ratio_squared
                and self.word_matches and self.word_length_bound <= 2 * self.n + 1
                and (self.bfs_length is None or self.bfs_length <= self.word_length_bound))

    @property
    def witness_ratio(self):
        return math.sqrt(self.witness_ratio_squared)


@dataclass
class MozesReport:
    p: int
    levels: list = field(default_factory=list)

    @property
    def all_exact(self):
        return all(lv.ok for lv in self.levels)

    @property
    def superpolynomial(self):
        """Squared ratio grows by p^2 per level while radius bounds grow linearly."""
        lv = self.levels
        if len(lv) < 2:
            return False
        growth = all(b.witness_ratio_squared == a.witness_ratio_squared * self.p ** 2
                     for a, b in zip(lv, lv[1:]))
        linear = all(b.support_radius_bound - a.support_radius_bound
                     <= lv[1].support_radius_bound - lv[0].support_radius_bound
                     for a, b in zip(lv, lv[1:]))
        return growth and linear


def mozes_obstruction(p, n_max, bfs_check_up_to=-1):
    """Exact verification of the L_n computation for n = 0..n_max.

    With ``bfs_check_up_to = k`` the word length of [[1, t^n], [0, 1]] is
    also confirmed by breadth-first search for n <= k.
    """
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"p must be one of {SUPPORTED_PRIMES}")
    if not 0 <= n_max <= 4:
        raise ValueError("n_max must lie in 0..4")
    model = get_group(f"pgl2:{p}")
    report = MozesReport(p)
    for n in range(n_max + 1):
        elems = unipotent_subgroup(model, n)
        chi = SparseGroupFunction.indicator(model, elems)
        order = len(chi)
        chi2 = convolve(chi, chi)
        scaled = chi2 == chi.scale(order)
        ratio_sq = opnorm_witness_squared(chi, chi)
        predicted = p ** (n + 1) * chi.l2_squared()
        word = conjugation_word(n)
        target = model.upper_unipotent({n: 1})
        matches = model.evaluate(word) == target
        # every element of L_n has an explicit word; the longest bounds the radius
        radius = max(len(unipotent_word(model, c))
                     for c in itertools.product(range(p), repeat=n + 1))
        bfs = None
        if n <= bfs_check_up_to:
            bfs = metric_for(model).search_length(target)
        report.levels.append(MozesLevel(n, order, p ** (n + 1), scaled, ratio_sq, predicted,
                                        word, matches, len(word), radius, bfs))
    return report
