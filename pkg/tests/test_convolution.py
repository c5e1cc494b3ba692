import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rapiddecay.convolution import (SparseGroupFunction, ZeroWitnessError, convolve,
                                    decomposition_check, mozes_obstruction, norm_report,
                                    opnorm_estimate, opnorm_witness, opnorm_witness_squared,
                                    positive_parts, rd_profile, sobolev_norm,
                                    sobolev_norm_squared, triple_eval, unipotent_subgroup)
from rapiddecay.groups import get_group, metric_for

SGF = SparseGroupFunction


def z_function(values):
    """Function on Z from {integer: value}."""
    m = get_group("zd:1")
    return SGF(m, {(k,): v for k, v in values.items()})


def functions(key, radius=2, rational=True):
    m = get_group(key)
    elems = sorted(metric_for(m).ball(radius), key=repr)
    vals = (st.fractions(min_value=-5, max_value=5, max_denominator=6) if rational
            else st.integers(-4, 4))
    return st.dictionaries(st.sampled_from(elems), vals, max_size=8).map(lambda d: SGF(m, d))


def test_point_masses_convolve_to_products():
    m = get_group("free:2")
    a, b = m.evaluate("a"), m.evaluate("bA")
    assert convolve(SGF.delta(m, a), SGF.delta(m, b)) == SGF.delta(m, m.multiply(a, b))


def test_finite_subgroup_indicator_squares_to_multiple():
    m = get_group("pgl2:2")
    chi = SGF.indicator(m, unipotent_subgroup(m, 2))
    assert convolve(chi, chi) == chi.scale(len(chi))


def test_z_interval_convolution():
    f = z_function({0: 1, 1: 1})
    assert dict(convolve(f, f).items()) == {(0,): 1, (1,): 2, (2,): 1}


def zero_sum_count(support):
    return sum(1 for t in itertools.product(support, repeat=3) if sum(t) == 0)


def test_triple_eval_examples():
    m = get_group("zd:1")
    e = SGF.delta(m, m.identity)
    assert triple_eval(e, e, e) == 1
    for k in (1, 2, 3):
        f = z_function(dict.fromkeys(range(-k, k + 1), 1))
        assert triple_eval(f, f, f) == zero_sum_count(range(-k, k + 1))
    assert zero_sum_count(range(-1, 2)) == 7
    assert zero_sum_count(range(-2, 3)) == 19


@given(functions("free:2"), functions("free:2"), functions("free:2"))
def test_convolution_is_associative_and_bilinear(f, g, h):
    assert convolve(convolve(f, g), h) == convolve(f, convolve(g, h))
    assert convolve(f, g + h) == convolve(f, g) + convolve(f, h)


@given(functions("heisenberg"), functions("heisenberg"))
def test_triple_eval_matches_definition(f, g):
    m = f.model
    h = SGF.indicator(m, metric_for(m).ball(1))
    direct = sum((a * b * h[m.invert(m.multiply(x, y))] for x, a in f.items()
                  for y, b in g.items()), 0)
    assert triple_eval(f, g, h) == direct


@given(functions("free:2", rational=False), functions("free:2", rational=False),
       functions("free:2", rational=False))
def test_cauchy_schwarz_for_nonnegative(f, g, h):
    f, g, h = (SGF(x.model, {k: abs(v) for k, v in x.items()}) for x in (f, g, h))
    t = triple_eval(f, g, h)
    assert t >= 0
    assert t * t <= convolve(f, g).l2_squared() * h.l2_squared()


def test_sobolev_examples():
    m = get_group("free:2")
    f = SGF(m, {m.evaluate("ab"): 3, m.evaluate("B"): -4})
    assert sobolev_norm(f, 0) == pytest.approx(5.0)
    g = m.evaluate("abAB")
    assert sobolev_norm(SGF.delta(m, g), 1) == pytest.approx(5.0)
    assert sobolev_norm_squared(SGF.delta(m, g), 1) == 25


@given(functions("zd:2", radius=3), st.integers(0, 3))
def test_sobolev_bound_on_ball(f, s):
    r = f.support_radius
    assert sobolev_norm_squared(f, s) <= (1 + r) ** (2 * s) * f.l2_squared()


def test_decomposition_examples():
    m = get_group("free:2")
    f = SGF(m, {m.evaluate("a"): Fraction(1, 2), m.evaluate("b"): 3})
    f1, f2, f3, f4 = positive_parts(f)
    assert f1 == f and not (f2.support or f3.support or f4.support)
    a, b = m.evaluate("a"), m.evaluate("b")
    g = SGF.delta(m, a) - SGF.delta(m, b)
    parts = positive_parts(g)
    assert parts[0] == SGF.delta(m, a) and parts[1] == SGF.delta(m, b)
    assert g.l2_squared() == 2 == sum(p.l2_squared() for p in parts)
    assert decomposition_check(g)


def test_random_complex_function_reassembles():
    m = get_group("free:2")
    rng = np.random.default_rng(7)
    elems = metric_for(m).ball(3)
    for _ in range(20):
        f = SGF(m, {g: complex(int(rng.integers(-5, 6)), int(rng.integers(-5, 6)))
                    for g in elems if rng.random() < 0.5})
        assert decomposition_check(f)


def test_witness_ratio_examples():
    m = get_group("free:2")
    g = SGF.indicator(m, metric_for(m).ball(2))
    assert opnorm_witness(SGF.delta(m, m.evaluate("a")), g) == 1
    z2 = get_group("zd:2")
    f = SGF.indicator(z2, metric_for(z2).ball(1))
    assert opnorm_witness(f, SGF.indicator(z2, metric_for(z2).ball(40))) >= 0.9 * 5
    with pytest.raises(ZeroWitnessError):
        opnorm_witness(f, SGF(z2, {}))


def test_witness_ratio_is_exact():
    m = get_group("zd:1")
    f = z_function({0: 1, 1: 1})
    sq = opnorm_witness_squared(f, f)
    # f*f = (1,2,1): ||f*f||^2 = 6, ||f||^2 = 2
    assert sq == Fraction(6, 2) and isinstance(sq, (Fraction, int))


def dense_truncation(f, R):
    """Matrix of g -> f*g from B(e,R) to B(e,R+r), built from scratch."""
    m = f.model
    metric = metric_for(m)
    dom = metric.ball(R)
    cod = metric.ball(R + f.support_radius)
    ci = {x: i for i, x in enumerate(cod)}
    A = np.zeros((len(cod), len(dom)))
    for j, y in enumerate(dom):
        for x, v in f.items():
            A[ci[m.multiply(x, y)], j] += float(v)
    return A


@pytest.mark.parametrize("key,fspec,R", [("zd:1", 2, 10), ("free:2", 1, 4), ("zd:2", 1, 5),
                                         ("heisenberg", 1, 3)])
def test_power_iteration_matches_dense_svd(key, fspec, R):
    m = get_group(key)
    f = SGF.indicator(m, metric_for(m).ball(fspec))
    est = opnorm_estimate(f, R)
    top = np.linalg.svd(dense_truncation(f, R), compute_uv=False)[0]
    assert est.converged
    assert est.value == pytest.approx(top, rel=1e-6)


def test_identity_operator_has_norm_one():
    m = get_group("free:2")
    for R in (0, 2, 4):
        assert opnorm_estimate(SGF.delta(m, m.identity), R).value == pytest.approx(1.0)


def test_z_ball_estimate_approaches_l1():
    m = get_group("zd:1")
    f = SGF.indicator(m, metric_for(m).ball(2))
    vals = [opnorm_estimate(f, R).value for R in (4, 16, 64, 256)]
    assert all(a <= b + 1e-9 for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= 5 + 1e-9 and vals[-1] > 4.9


def test_free_sphere_estimate_increases_towards_kesten_value():
    m = get_group("free:2")
    f = SGF.indicator(m, metric_for(m).sphere(1))
    vals = [opnorm_estimate(f, R).value for R in (2, 4, 8)]
    assert all(a <= b + 1e-9 for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= 2 * math.sqrt(3)


def test_trivial_group_ratio_is_one():
    prof = rd_profile(get_group("trivial"), 3, n_random=3)
    assert all(row.ratio_lower == pytest.approx(1.0) for row in prof.rows)


def test_rd_profile_zd_ball_ratios_stay_below_sqrt_ball():
    m = get_group("zd:2")
    prof = rd_profile(m, 3, n_random=4, factors=(1, 2, 4))
    metric = metric_for(m)
    for row in prof.rows:
        # amenable and nonnegative: the true ratio is ||f||_1 / ||f||_2
        assert row.ratio_lower <= row.l1 / row.l2 + 1e-9
        if row.sample_id == "ball":
            assert row.l1 / row.l2 == pytest.approx(math.sqrt(metric.ball_size(row.r)))


@given(functions("free:2", rational=False))
def test_norm_report_inequalities(f):
    f = SGF(f.model, {k: abs(v) for k, v in f.items()})
    if not len(f):
        return
    rep = norm_report(f, factors=(1, 2))
    assert rep.l2 <= rep.l1 + 1e-12
    assert rep.opnorm_lower <= rep.l1 * (1 + 1e-9)
    assert rep.sobolev[0] == pytest.approx(rep.l2)
    assert rep.provenance


@pytest.mark.parametrize("p,n,order", [(2, 0, 2), (2, 1, 4), (3, 2, 27)])
def test_mozes_levels(p, n, order):
    rep = mozes_obstruction(p, n)
    lv = rep.levels[n]
    assert lv.order == order
    assert lv.witness_ratio_squared == order * lv.order   # p^(n+1) * ||chi_n||^2
    assert lv.ok


def test_mozes_is_superpolynomial_and_word_lengths_verified():
    rep = mozes_obstruction(2, 3, bfs_check_up_to=2)
    assert rep.all_exact and rep.superpolynomial
    assert all(lv.word_length_bound <= 2 * lv.n + 1 for lv in rep.levels)
    assert rep.levels[2].bfs_length <= 5
