"""Word metric, balls, spheres, growth and distortion."""

from dataclasses import dataclass, field

from ..budget import BudgetExceeded, default_budget
from ..fitting import loglog_slope, upper_half_window

SUPERPOLY_RATIO = 1.5


class WordMetric:
    """Breadth-first sphere decomposition of a model's Cayley graph.

    Spheres are grown lazily and cached.  The cache is only ever extended,
    so results for smaller radii never change.
    """

    def __init__(self, model, budget=None):
        self.model = model
        self.budget = budget if budget is not None else default_budget()
        self.lengths = {model.identity: 0}
        self.spheres = [[model.identity]]
        self._gens = [g for _, g in model.generators]

    @property
    def radius(self):
        return len(self.spheres) - 1

    def _grow(self):
        mul = self.model.multiply
        lengths = self.lengths
        n = len(self.spheres)
        new = []
        for x in self.spheres[-1]:
            for s in self._gens:
                y = mul(x, s)
                if y not in lengths:
                    lengths[y] = n
                    new.append(y)
            if len(lengths) > self.budget:
                raise BudgetExceeded(f"ball of {self.model.key} at radius {n}",
                                     self.budget, len(lengths))
        self.spheres.append(new)

    def grow_to(self, r):
        while self.radius < r:
            if not self.spheres[-1]:
                # finite group exhausted
                self.spheres.append([])
                continue
            self._grow()

    def sphere(self, n):
        self.grow_to(n)
        return self.spheres[n]

    def ball(self, r):
        self.grow_to(r)
        out = []
        for s in self.spheres[:r + 1]:
            out.extend(s)
        return out

    def ball_size(self, r):
        self.grow_to(r)
        return sum(len(s) for s in self.spheres[:r + 1])

    def length(self, g):
        n = self.lengths.get(g)
        if n is not None:
            return n
        n = self.model.exact_length(g)
        if n is not None:
            return n
        while True:
            if self.radius > 0 and not self.spheres[-1]:
                raise ValueError(f"{self.model.format(g)} is not in the group")
            self._grow()
            n = self.lengths.get(g)
            if n is not None:
                return n

    def search_length(self, g):
        """Length by breadth-first search only (ignores closed forms)."""
        while g not in self.lengths:
            if self.radius > 0 and not self.spheres[-1]:
                raise ValueError(f"{self.model.format(g)} is not in the group")
            self._grow()
        return self.lengths[g]

    def distance(self, x, y):
        m = self.model
        return self.length(m.multiply(m.invert(x), y))


def metric_for(model):
    """Shared WordMetric per model instance."""
    try:
        return model._metric
    except AttributeError:
        model._metric = WordMetric(model)
        return model._metric


def ball(model, r):
    """Set of elements of word length at most r."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return set(metric_for(model).ball(r))


def sphere(model, n):
    return list(metric_for(model).sphere(n))


def word_length(model, g):
    return metric_for(model).length(g)


def distance(model, x, y):
    return metric_for(model).distance(x, y)


# -- growth --------------------------------------------------------------

@dataclass
class GrowthProfile:
    key: str
    sizes: list
    slope: float
    residual: float
    window: tuple
    superpolynomial: bool
    min_ratio: float
    fit_unstable: bool = False


def growth_profile(model, r_max, superpoly_ratio=SUPERPOLY_RATIO):
    """Ball sizes |B(r)|, r = 0..r_max, with a log-log slope on the upper half."""
    if r_max < 4:
        raise ValueError("growth_profile needs r_max >= 4")
    metric = metric_for(model)
    sizes = [metric.ball_size(r) for r in range(r_max + 1)]
    lo, hi = upper_half_window(r_max)
    rs = list(range(lo, hi + 1))
    fit = loglog_slope(rs, [sizes[r] for r in rs])
    ratios = [sizes[r + 1] / sizes[r] for r in range(lo, hi)]
    min_ratio = min(ratios) if ratios else 1.0
    return GrowthProfile(model.key, sizes, fit.slope, fit.residual, (lo, hi),
                         min_ratio > superpoly_ratio, min_ratio, fit.unstable)


# -- distortion ----------------------------------------------------------

@dataclass
class DistortionTable:
    rows: list = field(default_factory=list)   # (element, intrinsic, induced)
    max_ratio_by_radius: dict = field(default_factory=dict)
    distorted: bool = False

    def pairs(self):
        return [(a, b) for _, a, b in self.rows]


def subgroup_distortion(model, subgroup_generators, r_max, growth_factor=1.25):
    """Intrinsic vs induced length for subgroup elements up to intrinsic r_max.

    ``subgroup_generators`` are elements of the model.  The subgroup is
    classified distorted when the worst intrinsic/induced ratio at r_max is
    at least ``growth_factor`` times the worst ratio at r_max // 2.
    """
    mul = model.multiply
    gens = []
    for g in subgroup_generators:
        for h in (g, model.invert(g)):
            if h not in gens and h != model.identity:
                gens.append(h)
    metric = metric_for(model)
    seen = {model.identity: 0}
    frontier = [model.identity]
    table = DistortionTable()
    table.rows.append((model.identity, 0, 0))
    for n in range(1, r_max + 1):
        nxt = []
        for x in frontier:
            for s in gens:
                y = mul(x, s)
                if y not in seen:
                    seen[y] = n
                    nxt.append(y)
                    if len(seen) > metric.budget:
                        raise BudgetExceeded("subgroup ball", metric.budget, len(seen))
        frontier = nxt
        worst = 0.0
        for y in frontier:
            induced = metric.length(y)
            table.rows.append((y, n, induced))
            worst = max(worst, n / induced)
        table.max_ratio_by_radius[n] = worst
    half = table.max_ratio_by_radius.get(max(1, r_max // 2), 1.0)
    final = table.max_ratio_by_radius.get(r_max, 1.0)
    table.distorted = final >= growth_factor * half
    return table

