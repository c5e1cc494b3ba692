"""Choosing (delta, K) empirically, and quasi-convexity offsets."""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ..groups.metric import metric_for
from .bcp import bcp_probe
from .coned import DegenerateFamilyError
from .csets import CSetCache, triple_intersection_check, v_delta


@dataclass
class Calibration:
    key: str
    r: int
    ok: bool
    delta: float = None
    K: int = None
    sample_size: int = 0
    pass_fraction: dict = field(default_factory=dict)    # delta -> fraction
    K_by_radius: dict = field(default_factory=dict)
    reason: str = ""
    witness: tuple = None


def calibration_triples(model, r, n_triples, seed=0):
    """Seeded triples from B(e, r), plus triples inside single parabolic cosets."""
    metric = metric_for(model)
    elems = sorted(metric.ball(r), key=lambda g: (metric.length(g), repr(g)))
    rng = np.random.default_rng(seed)
    out = [tuple(elems[i] for i in rng.integers(len(elems), size=3)) for _ in range(n_triples)]
    for H in model.parabolics:
        ident = H.coset_key(model.identity)
        inside = [g for g in elems if H.coset_key(g) == ident]
        if len(inside) >= 3:
            for _ in range(max(1, n_triples // 10)):
                out.append(tuple(inside[i] for i in rng.integers(len(inside), size=3)))
    return out


def delta_grid(delta_max):
    """0, 1/2, 1, ... on the doubled-integer scale."""
    return [j / 2 for j in range(int(2 * delta_max) + 1)]


def delta_calibrate(model, r, target=1.0, delta_max=6, n_triples=200, seed=0, K=None):
    """Smallest delta whose triple check passes on the sample, with K from the BCP probe.

    Fails when the family is degenerate, when the observed K grows with the
    radius, or when no delta up to ``delta_max`` reaches ``target``.
    """
    cal = Calibration(model.key, r, False)
    try:
        probe = bcp_probe(model, 1, r)
    except DegenerateFamilyError as exc:
        cal.reason = f"BCP probe rejected the family: {exc}"
        return cal
    cal.K_by_radius = dict(probe.K_by_radius)
    cal.K = probe.K if K is None else K
    if K is None and not probe.stable:
        cal.reason = f"observed BCP constant grows with the radius: {probe.K_by_radius}"
        return cal
    triples = calibration_triples(model, r, n_triples, seed)
    cal.sample_size = len(triples)
    last_floor, last = None, None
    for delta in delta_grid(delta_max):
        if math.floor(delta) == last_floor:
            cal.pass_fraction[delta] = last[0]
            continue
        cache = CSetCache(model, delta, cal.K)
        passed, witness = 0, None
        for x, y, z in triples:
            if triple_intersection_check(model, x, y, z, delta, cal.K, cache).ok:
                passed += 1
            elif witness is None:
                witness = (x, y, z)
        frac = passed / len(triples)
        cal.pass_fraction[delta] = frac
        last_floor, last = math.floor(delta), (frac, witness)
        if frac >= target:
            cal.ok, cal.delta = True, delta
            return cal
        cal.witness = witness
    cal.reason = f"no delta <= {delta_max} reached pass fraction {target}"
    return cal


# -- quasi-convexity -------------------------------------------------------------

@dataclass
class QuasiConvexity:
    label: str
    offsets: dict             # r -> max offset over pairs in H ∩ B(e, r)
    witness: dict             # r -> (h, t) attaining it

    @property
    def max_offset(self):
        return max(self.offsets.values(), default=0)

    @property
    def bounded(self):
        """The offset has stopped growing over the last three radii."""
        rs = sorted(self.offsets)[-3:]
        return len({self.offsets[r] for r in rs}) == 1


def distance_to_subgroup(model, H, t, cap=None):
    metric = metric_for(model)
    ident = H.coset_key(model.identity)
    limit = metric.length(t) if cap is None else cap
    for k in range(limit + 1):
        for g in metric.sphere(k):
            if H.coset_key(model.multiply(t, g)) == ident:
                return k
    return limit


def quasiconvexity_probe(model, H, r):
    """Max distance from geodesic vertices [h1, h2] to H, for h1, h2 in H ∩ B(e, r).

    The offset is invariant under left multiplication by H, so only pairs
    (e, h1^-1 h2) are measured.
    """
    metric = metric_for(model)
    ident = H.coset_key(model.identity)
    inside = [g for g in metric.ball(r) if H.coset_key(g) == ident]
    offsets, witness = {}, {}
    diffs = {}
    for h1, h2 in itertools.product(inside, repeat=2):
        g = model.multiply(model.invert(h1), h2)
        rr = max(metric.length(h1), metric.length(h2))
        if rr < diffs.get(g, math.inf):
            diffs[g] = rr
    memo = {}
    for g, rr in sorted(diffs.items(), key=lambda kv: (kv[1], repr(kv[0]))):
        if g not in memo:
            best, arg = 0, model.identity
            for t in v_delta(model, model.identity, g, 0):
                o = distance_to_subgroup(model, H, t)
                if o > best:
                    best, arg = o, t
            memo[g] = (best, arg)
        best, arg = memo[g]
        for s in range(rr, r + 1):
            if best > offsets.get(s, -1):
                offsets[s] = best
                witness[s] = (g, arg)
    for s in range(r + 1):
        offsets.setdefault(s, 0)
    return QuasiConvexity(H.label, dict(sorted(offsets.items())), witness)


def resolve_subgroup(model, spec):
    """Subgroup from a string; 'lattice:1,1;...' gives a Z^d lattice subgroup."""
    if not isinstance(spec, str):
        return spec
    if spec.startswith("lattice:"):
        vecs = [tuple(int(a) for a in v.split(",")) for v in spec[8:].split(";")]
        return model.lattice_subgroup(vecs, label=spec)
    return model.subgroup(spec)
