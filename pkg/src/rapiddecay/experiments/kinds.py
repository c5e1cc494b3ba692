"""One function per experiment kind: compute, record rows, record checks."""

import itertools
import math
import zlib
from fractions import Fraction

import numpy as np

from ..convolution import (SparseGroupFunction, convolve, decomposition_check,
                           mozes_obstruction, opnorm_estimate, opnorm_witness_squared,
                           rd_profile, sobolev_norm_squared, triple_eval)
from ..convolution.opnorm import DEFAULT_NNZ_CAP
from ..cube import (blowup, compute_hyperplanes, dimension_estimate, interval_counts,
                    interval_exponent, is_minimal, lifted_check, median_sweep, minimal_partition,
                    prop_max_check, sageev_exhaustive, sample_pairs, stabilizers_from_action)
from ..groups import growth_profile, metric_for, subgroup_distortion
from ..relhyp import (CSetCache, DegenerateFamilyError, bcp_probe, delta_calibrate,
                      penetration_points, quasiconvexity_probe, resolve_subgroup,
                      triple_intersection_check)
from ..relhyp.calibrate import calibration_triples
from .config import ConfigError

WITNESS_ELEMENTS = 12


def _fmt(model, g):
    return model.format(g)


def _labels(X, vs):
    return [str(X.labels[int(v)]) for v in vs]


# -- groups ----------------------------------------------------------------------

def kind_growth(ctx, case):
    p = case.params
    model = ctx.group(case.key)
    prof = growth_profile(model, p.int("r_max", 10))
    for r, size in enumerate(prof.sizes):
        ctx.row(case, r=r, ball=size, sphere=size - (prof.sizes[r - 1] if r else 0))
    lo, hi = prof.window
    ctx.fit(case, "ball-growth", prof.slope, prof.residual, prof.window,
            min_ratio=prof.min_ratio, superpolynomial=prof.superpolynomial,
            fit_unstable=prof.fit_unstable)
    window = {"radii": [lo, hi], "sizes": prof.sizes[lo:hi + 1]}
    expected = p.float("expected_slope")
    if expected is not None:
        tol = p.float("slope_tol", 0.2)
        ctx.check(case, "slope", abs(prof.slope - expected) <= tol, window,
                  slope=prof.slope, expected=expected, tol=tol)
    sp = p.bool("expect_superpolynomial")
    if sp is not None:
        ratios = [prof.sizes[r + 1] / prof.sizes[r] for r in range(lo, hi)]
        worst = lo + int(np.argmin(ratios))
        ctx.check(case, "superpolynomial", prof.superpolynomial == sp,
                  {"r": worst, "ratio": ratios[worst - lo]},
                  flagged=prof.superpolynomial, expected=sp, min_ratio=prof.min_ratio)


def kind_distortion(ctx, case):
    p = case.params
    model = ctx.group(case.key)
    words = p.list("generators", required=True)
    r_max = p.int("r_max", 8)
    tab = subgroup_distortion(model, [model.evaluate(w) for w in words], r_max,
                              p.float("growth_factor", 1.25))
    for g, intrinsic, induced in tab.rows:
        ctx.row(case, element=_fmt(model, g), intrinsic=intrinsic, induced=induced)
    expect = p.bool("expect_distorted", required=True)
    top = [(n / ind, _fmt(model, g)) for g, n, ind in tab.rows if n == r_max and ind > 0]
    ratio, elem = max(top) if top else (0.0, _fmt(model, model.identity))
    ctx.check(case, "distortion", tab.distorted == expect,
              {"element": elem, "intrinsic": r_max, "ratio": ratio},
              distorted=tab.distorted, expected=expect,
              max_ratio_by_radius=tab.max_ratio_by_radius)


def kind_quasiconvexity(ctx, case):
    p = case.params
    model = ctx.group(case.key)
    H = resolve_subgroup(model, p.str("subgroup", required=True))
    r = p.int("r", 8)
    q = quasiconvexity_probe(model, H, r)
    for rr, off in q.offsets.items():
        ctx.row(case, r=rr, offset=off)
    expect = p.bool("expect_bounded", required=True)
    w = q.witness.get(r)
    witness = {"r": r, "offset": q.offsets[r]}
    if w is not None:
        witness.update(difference=_fmt(model, w[0]), vertex=_fmt(model, w[1]))
    ctx.check(case, "bounded-offset", q.bounded == expect, witness,
              bounded=q.bounded, expected=expect, max_offset=q.max_offset)


# -- convolution -----------------------------------------------------------------

def _function(model, spec):
    kind, _, arg = spec.partition(":")
    metric = metric_for(model)
    if kind == "ball":
        return SparseGroupFunction.indicator(model, metric.ball(int(arg)))
    if kind == "sphere":
        return SparseGroupFunction.indicator(model, metric.sphere(int(arg)))
    raise ConfigError(f"unknown function {spec!r} (use ball:<r> or sphere:<r>)")


def kind_mozes(ctx, case):
    p = case.params
    n_max = p.int("n_max", 3)
    for prime in p.ints("p", [2, 3]):
        rep = mozes_obstruction(prime, n_max, p.int("bfs_check_up_to", -1))
        model = ctx.group(f"pgl2:{prime}")
        for lv in rep.levels:
            ctx.row(case, p=prime, n=lv.n, order=lv.order, expected_order=lv.expected_order,
                    chi_squared_is_scaled=lv.chi_squared_is_scaled,
                    witness_ratio_squared=Fraction(lv.witness_ratio_squared),
                    predicted_ratio_squared=Fraction(lv.predicted_ratio_squared),
                    word=lv.word, word_length=lv.word_length_bound,
                    support_radius_bound=lv.support_radius_bound, bfs_length=lv.bfs_length)
            elem = _fmt(model, model.upper_unipotent({lv.n: 1}))
            ctx.check(case, f"p{prime}/n{lv.n}/exact", lv.ok,
                      {"element": elem, "word": lv.word, "order": lv.order,
                       "ratio_squared": Fraction(lv.witness_ratio_squared)})
        ctx.check(case, f"p{prime}/superpolynomial", rep.superpolynomial,
                  {"ratios_squared": [Fraction(lv.witness_ratio_squared) for lv in rep.levels],
                   "radius_bounds": [lv.support_radius_bound for lv in rep.levels]})


def kind_kesten(ctx, case):
    p = case.params
    model = ctx.group(case.key)
    f = _function(model, p.str("function", "ball:2"))
    radii = p.ints("g_radii", [5, 10, 20, 40])
    threshold = p.float("fraction", 0.9) * float(f.l1())
    prev, best = None, (0.0, None)
    for R in radii:
        g = _function(model, f"ball:{R}")
        sq = Fraction(opnorm_witness_squared(f, g))
        ctx.row(case, g_radius=R, ratio_squared=sq, ratio=math.sqrt(sq), l1=Fraction(f.l1()))
        if prev is not None:
            ctx.check(case, f"monotone/{prev[0]}-{R}", sq >= prev[1],
                      {"g_radii": [prev[0], R], "ratios_squared": [prev[1], sq]})
        prev = (R, sq)
        best = max(best, (math.sqrt(sq), R))
    ctx.check(case, "reaches-threshold", best[0] >= threshold,
              {"g_radius": best[1], "ratio": best[0]}, threshold=threshold, best=best[0])


def kind_opnorm(ctx, case):
    p = case.params
    model = ctx.group(case.key)
    f = _function(model, p.str("function", required=True))
    nnz_cap = p.int("nnz_cap", DEFAULT_NNZ_CAP)
    best = None
    for R in p.ints("R", required=True):
        est = opnorm_estimate(f, R, nnz_cap=nnz_cap)
        ctx.row(case, R=R, estimate=est.value, iterations=est.iterations,
                converged=est.converged, l2=f.l2())
        if best is None or est.value > best.value:
            best = est
    target = p.float("target")
    if target is not None:
        tol = p.float("rel_tol", 0.02)
        rel = abs(best.value - target) / target
        ctx.check(case, "near-target", rel <= tol,
                  {"R": best.R, "estimate": best.value, "target": target},
                  relative_error=rel, rel_tol=tol)
        if p.bool("target_is_upper_bound", True):
            ctx.check(case, "below-target", best.value <= target * (1 + 1e-9),
                      {"R": best.R, "estimate": best.value, "target": target})


def kind_rd_profile(ctx, case):
    p = case.params
    model = ctx.group(case.key)
    r_max = p.int("r_max", 5)
    prof = rd_profile(model, r_max, p.int("n_random", 20), ctx.seed,
                      tuple(p.ints("factors", [1, 2, 4, 8])), p.int("nnz_cap", DEFAULT_NNZ_CAP))
    for row in prof.rows:
        ctx.row(case, r=row.r, sample=row.sample_id, l1=row.l1, l2=row.l2,
                ratio=row.ratio_lower, truncation_R=row.truncation_R,
                iterations=row.iterations, converged=row.converged)
    if r_max >= 2:
        ctx.fit(case, "rd-exponent", prof.exponent, prof.residual,
                ((r_max + 1) // 2, r_max), max_ratio=prof.max_ratio)
    e = p.float("poly_exponent")
    if e is not None:
        bad = [row for row in prof.rows if row.ratio_lower > (row.r + 1) ** e]
        w = bad[0] if bad else None
        ctx.check(case, "polynomial-bound", not bad,
                  w and {"r": w.r, "sample": w.sample_id, "ratio": w.ratio_lower,
                         "bound": (w.r + 1) ** e},
                  exponent=e, samples=len(prof.rows), violations=len(bad))


def _random_function(model, elems, rng, mode):
    keep = [g for g in elems if rng.random() < 0.6] or [elems[int(rng.integers(len(elems)))]]
    out = {}
    for g in keep:
        if mode == "nonnegative":
            v = Fraction(int(rng.integers(0, 10)), int(rng.integers(1, 6)))
        elif mode == "complex":
            v = complex(int(rng.integers(-9, 10)), int(rng.integers(-9, 10)))
        else:
            v = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        out[g] = v
    return SparseGroupFunction(model, out)


def kind_rd_steps(ctx, case):
    """Exact checks of the decomposition, Cauchy-Schwarz and Sobolev steps."""
    p = case.params
    model = ctx.group(case.key)
    r = p.int("r", 3)
    n = p.int("n_functions", 100)
    s_values = p.ints("s_values", [1, 2])
    metric = metric_for(model)
    elems = sorted(metric.ball(r), key=lambda g: (metric.length(g), repr(g)))
    rng = np.random.default_rng([ctx.seed, zlib.crc32(case.key.encode())])
    fails = {"decomposition": None, "cauchy-schwarz": None, "sobolev": None}
    counts = dict.fromkeys(fails, 0)
    for i in range(n):
        mode = "complex" if i % 2 else "rational"
        f = _random_function(model, elems, rng, mode)
        dec_ok = decomposition_check(f)
        a, b, c = (_random_function(model, elems, rng, "nonnegative") for _ in range(3))
        lhs = triple_eval(a, b, c)
        rhs_sq = convolve(a, b).l2_squared() * c.l2_squared()
        cs_ok = lhs >= 0 and lhs * lhs <= rhs_sq
        rad = f.support_radius
        sob_ok = all(sobolev_norm_squared(f, s) <= (1 + rad) ** (2 * s) * f.l2_squared()
                     for s in s_values)
        ctx.row(case, function=i, values=mode, support=len(f), radius=rad,
                decomposition=dec_ok, triple=Fraction(lhs), cs_bound_squared=Fraction(rhs_sq),
                cauchy_schwarz=cs_ok, sobolev=sob_ok)
        for name, ok, fn in (("decomposition", dec_ok, f), ("cauchy-schwarz", cs_ok, a),
                             ("sobolev", sob_ok, f)):
            if not ok:
                counts[name] += 1
                if fails[name] is None:
                    fails[name] = {"function": i,
                                   "support": [_fmt(model, g) for g in
                                               sorted(fn.support, key=repr)[:WITNESS_ELEMENTS]]}
    for name, w in fails.items():
        ctx.check(case, name, w is None, w, functions=n, violations=counts[name])


# -- cube complexes ---------------------------------------------------------------

def kind_median_suite(ctx, case):
    p = case.params
    X = ctx.complex(case.key)
    n_triples = p.int("n_triples")
    triples = None
    if n_triples is not None:
        rng = np.random.default_rng(ctx.seed)
        triples = [tuple(int(v) for v in t) for t in rng.integers(X.n, size=(n_triples, 3))]
    sweep = median_sweep(X, triples)
    ctx.row(case, complex=X.key, vertices=X.n, triples=sweep.triples, empty=len(sweep.empty),
            exhaustive=triples is None)
    ctx.check(case, "medians", sweep.ok, sweep.empty and _labels(X, sweep.empty[0]),
              triples=sweep.triples, empty=len(sweep.empty))


def kind_sageev(ctx, case):
    X = ctx.complex(case.key)
    bad = sageev_exhaustive(X)
    ctx.row(case, complex=X.key, vertices=X.n, pairs=X.n * (X.n - 1) // 2, mismatches=len(bad))
    w = None
    if bad:
        pv, qv, d, m = bad[0]
        w = {"pair": _labels(X, (pv, qv)), "distance": d, "separating": m}
    ctx.check(case, "distance-equals-separation", not bad, w, mismatches=len(bad))


def kind_partition(ctx, case):
    p = case.params
    X = ctx.complex(case.key)
    dim = dimension_estimate(X)
    crosses = compute_hyperplanes(X).crossing_matrix()
    worst = {"too_many": None, "no_transversal": None, "not_minimal": None}
    pairs = sample_pairs(X, p.int("n_pairs", 1000), ctx.seed)
    for x, y in pairs:
        part = minimal_partition(X, x, y)
        minimal = is_minimal(part.classes, crosses)
        ctx.row(case, complex=X.key, x=X.labels[x], y=X.labels[y], d=X.distance(x, y),
                classes=len(part), dimension=dim.value, transversal=part.witness is not None,
                minimal=minimal)
        for name, bad in (("too_many", len(part) > dim.value),
                          ("no_transversal", part.witness is None),
                          ("not_minimal", not minimal)):
            if bad and worst[name] is None:
                worst[name] = {"pair": _labels(X, (x, y)), "classes": len(part)}
    ctx.check(case, "classes-at-most-dimension", worst["too_many"] is None, worst["too_many"],
              pairs=len(pairs), dimension=dim.value, dimension_exact=dim.exact)
    ctx.check(case, "crossing-transversal", worst["no_transversal"] is None,
              worst["no_transversal"])
    ctx.check(case, "partition-minimal", worst["not_minimal"] is None, worst["not_minimal"])
    if p.bool("corners", False):
        x, y = 0, X.n - 1
        part = minimal_partition(X, x, y)
        ctx.check(case, "corners-attain-dimension", len(part) == dim.value,
                  {"pair": _labels(X, (x, y)), "classes": len(part)}, dimension=dim.value)


def kind_interval_growth(ctx, case):
    p = case.params
    X = ctx.complex(case.key)
    x, y = p.ints("pair", [0, X.n - 1])
    r_max = p.int("r_max", 15)
    counts = interval_counts(X, x, y, r_max)
    for r, cnt in enumerate(counts):
        ctx.row(case, complex=X.key, r=r, count=cnt)
    fit = interval_exponent(X, x, y, r_max)
    ctx.fit(case, "interval-exponent", fit.slope, fit.residual, fit.window)
    expected = p.float("expected_exponent")
    if expected is None:
        expected = float(dimension_estimate(X).value)
    tol = p.float("tol", 0.3)
    ctx.check(case, "exponent", abs(fit.slope - expected) <= tol,
              {"pair": _labels(X, (x, y)), "counts": counts}, exponent=fit.slope,
              expected=expected, tol=tol)


def kind_prop_max(ctx, case):
    p = case.params
    X = ctx.complex(case.key)
    rep = prop_max_check(X, p.int("n_triples", 10_000), p.int("n_pairs", 2_000),
                         p.float("c", 1.0), ctx.seed)
    ctx.row(case, complex=X.key, dimension=rep.dimension, triples=rep.triples_checked,
            pairs=rep.pairs_checked, empty_medians=len(rep.empty_medians),
            growth_failures=len(rep.growth_failures),
            diameter_failures=len(rep.diameter_failures), exponent=rep.exponent)
    if rep.exponent_pair is not None:
        ctx.fit(case, "interval-exponent", rep.exponent, float("nan"), (0, 0),
                pair=_labels(X, rep.exponent_pair))
    ctx.check(case, "triples", not rep.empty_medians,
              rep.empty_medians and _labels(X, rep.empty_medians[0]))
    g = rep.growth_failures[0] if rep.growth_failures else None
    ctx.check(case, "polynomial-growth", g is None,
              g and {"pair": _labels(X, g[:2]), "r": g[2], "count": g[3], "bound": g[4]})
    dfail = rep.diameter_failures[0] if rep.diameter_failures else None
    ctx.check(case, "diameter", dfail is None,
              dfail and {"pair": _labels(X, dfail[:2]), "diameter": dfail[2], "d": dfail[3]})


def cycle_order(X):
    """Vertices of a cycle graph in cyclic order."""
    if any(len(a) != 2 for a in X.adj):
        raise ConfigError(f"{X.key} is not a cycle")
    order = [0, X.adj[0][0]]
    while len(order) < X.n:
        nxt = [v for v in X.adj[order[-1]] if v != order[-2]][0]
        order.append(nxt)
    return order


def rotation_action(X, kernel):
    """Z/n rotating the cycle, times Z/kernel acting trivially: permutations."""
    order = cycle_order(X)
    pos = {v: i for i, v in enumerate(order)}
    perms = []
    for shift, _ in itertools.product(range(X.n), range(kernel)):
        perms.append([order[(pos[v] + shift) % X.n] for v in range(X.n)])
    return perms


def kind_blowup(ctx, case):
    p = case.params
    X = ctx.complex(case.key)
    c = p.int("c", required=True)
    if "sizes" in p:
        sizes = p.ints("sizes")
    else:
        stabs = stabilizers_from_action(rotation_action(X, p.int("kernel", c)))
        sizes = [len(stabs[v]) for v in range(X.n)]
    Y = blowup(X, sizes, c)
    rep = lifted_check(Y)
    ctx.row(case, complex=X.key, sizes=sizes, points=rep.points, c=rep.c,
            poly_scale=rep.poly_scale, dimension=rep.dimension, triples=rep.triples,
            max_count_ratio=rep.max_count_ratio)

    def first(lst):
        return [int(a) if isinstance(a, (int, np.integer)) else a for a in lst[0]] if lst else None

    ctx.check(case, "triples", not rep.empty_triples, first(rep.empty_triples))
    ctx.check(case, "polynomial-growth", not rep.growth_failures, first(rep.growth_failures))
    ctx.check(case, "fibre-count", not rep.fibre_ratio_failures, first(rep.fibre_ratio_failures))
    ctx.check(case, "diameter", not rep.diameter_failures, first(rep.diameter_failures))
    ctx.check(case, "distance-within-1", not rep.distance_failures,
              first(rep.distance_failures))
    ctx.check(case, "polynomial-scaled-by-c", rep.poly_scale == c,
              {"poly_scale": rep.poly_scale, "c": c})
    reject = p.int("reject_size")
    if reject is not None:
        try:
            blowup(X, [reject] + [1] * (X.n - 1), c)
            rejected = False
        except ValueError:
            rejected = True
        ctx.check(case, "oversized-stabilizer-rejected", rejected,
                  {"vertex": _labels(X, [0])[0], "size": reject, "c": c})


# -- relative hyperbolicity --------------------------------------------------------

def kind_bcp(ctx, case):
    p = case.params
    model = ctx.group(case.key)
    expect_degenerate = p.bool("expect_degenerate", False)
    try:
        rep = bcp_probe(model, p.float("P", 1.0), p.int("r", 6), p.int("path_cap", 2000),
                        p.int("n_samples", 300), ctx.seed)
    except DegenerateFamilyError as exc:
        ctx.row(case, pair_id="", radius="", K_case1="", K_case2="", degenerate=True)
        ctx.check(case, "degenerate-family", expect_degenerate,
                  {"family": [h.label for h in model.parabolics]}, reason=str(exc))
        return
    if expect_degenerate:
        ctx.check(case, "degenerate-family", False,
                  {"family": [h.label for h in model.parabolics], "K": rep.K_by_radius})
        return
    for row in rep.rows:
        ctx.row(case, pair_id=row.pair_id, radius=rep.radii[-1], d=row.d, d_hat=row.d_hat,
                cosets_penetrated=row.cosets_penetrated, K_case1=row.K_case1,
                K_case2=row.K_case2, backtracked=row.backtracked)
    expect = p.bool("expect_stable", True)
    top = max(rep.rows, key=lambda rw: (max(rw.K_case1, rw.K_case2), rw.pair_id), default=None)
    ctx.check(case, "K-non-increasing", rep.stable == expect,
              {"K_by_radius": rep.K_by_radius, "pair_id": top.pair_id if top else None},
              K=rep.K, stable=rep.stable, expected=expect, truncated=rep.truncated,
              paths_by_radius=rep.paths_by_radius)
    for word in p.list("backtrack_words", []):
        pen = penetration_points(model, word)
        ctx.check(case, f"detects-backtracking/{word}", pen.backtracking,
                  {"word": word, "cosets": [str(r.coset) for r in pen.records]})
    for word in p.list("clean_words", []):
        pen = penetration_points(model, word)
        ctx.check(case, f"no-false-backtracking/{word}", not pen.backtracking,
                  {"word": word, "cosets": [str(r.coset) for r in pen.records]})


def kind_c_set_triples(ctx, case):
    p = case.params
    model = ctx.group(case.key)
    r = p.int("r", 6)
    cal = delta_calibrate(model, r, p.float("target", 1.0), p.float("delta_max", 6.0),
                          p.int("n_triples", 200), ctx.seed)
    for delta, frac in cal.pass_fraction.items():
        ctx.row(case, stage="calibration", delta=delta, K=cal.K, pass_fraction=frac,
                sample=cal.sample_size)
    expect = p.bool("expect_calibration", True)
    cal_witness = {"delta": cal.delta, "K": cal.K, "K_by_radius": cal.K_by_radius,
                   "reason": cal.reason}
    if cal.witness is not None:
        cal_witness["triple"] = [_fmt(model, g) for g in cal.witness]
    if not expect:
        ctx.check(case, "calibration-fails", not cal.ok, cal_witness, reason=cal.reason)
        return
    if not ctx.check(case, "calibration", cal.ok, cal_witness, delta=cal.delta, K=cal.K,
                     sample=cal.sample_size):
        return
    cache = CSetCache(model, cal.delta, cal.K)
    mode = p.str("mode", "sampled")
    if mode == "sampled":
        triples = calibration_triples(model, r, p.int("check_triples", 1000), ctx.seed + 1)
        total = len(triples)
    elif mode == "exhaustive":
        metric = metric_for(model)
        elems = sorted(metric.ball(r), key=lambda g: (metric.length(g), repr(g)))
        total = math.comb(len(elems) + 2, 3)
        triples = itertools.combinations_with_replacement(elems, 3)
    else:
        raise ConfigError(f"mode must be sampled or exhaustive, not {mode!r}")
    cap = p.int("max_triples", total)
    checked, failed, first_bad = 0, 0, None
    for t in itertools.islice(triples, cap):
        checked += 1
        if not triple_intersection_check(model, *t, cal.delta, cal.K, cache).ok:
            failed += 1
            if first_bad is None:
                first_bad = [_fmt(model, g) for g in t]
    ctx.row(case, stage=mode, delta=cal.delta, K=cal.K, checked=checked, total=total,
            failed=failed)
    ctx.check(case, "triples-nonempty", failed == 0, first_bad and {"triple": first_bad},
              checked=checked, failed=failed)
    if checked < total:
        nxt = next(iter(triples), None) if mode == "exhaustive" else triples[checked]
        ctx.check(case, "coverage", False,
                  {"first_unchecked": [_fmt(model, g) for g in nxt] if nxt else None,
                   "checked": checked, "total": total},
                  coverage=checked / total)


KIND_FUNCTIONS = {
    "blowup": kind_blowup,
    "bcp": kind_bcp,
    "c-set-triples": kind_c_set_triples,
    "distortion": kind_distortion,
    "growth": kind_growth,
    "interval-growth": kind_interval_growth,
    "kesten": kind_kesten,
    "median-suite": kind_median_suite,
    "mozes": kind_mozes,
    "opnorm": kind_opnorm,
    "partition": kind_partition,
    "prop-max": kind_prop_max,
    "quasiconvexity": kind_quasiconvexity,
    "rd-profile": kind_rd_profile,
    "rd-steps": kind_rd_steps,
    "sageev": kind_sageev,
}
