import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rapiddecay.groups import get_group, metric_for
from rapiddecay.relhyp import (CSetCache, DegenerateFamilyError, bcp_probe, build_coned_off,
                               c_set, c_set_paths, coset_ball, decompose_path, delta_calibrate,
                               delta_paths, penetration_points, quasiconvexity_probe,
                               resolve_subgroup, triple_intersection_check, v_delta)
from rapiddecay.relhyp.coned import coset_id

Z2Z = "freeprod:zd:2,zd:1#parabolic=0"
F2A = "free:2#parabolic=0"
F2AB = "free:2#parabolic=0,1"


def elements(key, r):
    m = get_group(key)
    metric = metric_for(m)
    return sorted(metric.ball(r), key=lambda g: (metric.length(g), repr(g)))


# -- coned-off graph -----------------------------------------------------------

def test_coned_off_collapses_parabolic_patch():
    m = get_group(Z2Z)
    cob = build_coned_off(m, 4)
    patch = [g for g in cob.elements if coset_id(m, 0, g) == coset_id(m, 0, m.identity)]
    assert len(patch) == 41          # |B(0, 4)| in Z^2 with the l1 metric
    for g in patch:
        assert cob.hat_distance(m.identity, g) <= 1


def test_coned_off_without_parabolics_is_cayley_graph():
    m = get_group("zd:2")
    cob = build_coned_off(m, 3)
    metric = metric_for(m)
    assert not cob.cones
    for g in cob.elements:
        assert cob.hat_distance(m.identity, g) == metric.length(g)


def test_coned_off_cyclic_factor():
    m = get_group(F2A)
    cob = build_coned_off(m, 7)
    assert cob.hat_distance(m.identity, m.evaluate("aaa")) == 1
    assert cob.hat_distance(m.identity, m.evaluate("bbb")) == 3
    assert cob.hat_distance(m.identity, m.evaluate("aaabaaa")) == 3


# -- relative paths ------------------------------------------------------------

def test_decompose_example():
    m = get_group(Z2Z)
    dec = decompose_path(m, "cabac")
    assert [p.text for p in dec.subwords] == ["aba"]
    assert [p.text for p in dec.pieces] == ["c", "aba", "c"]
    dec = decompose_path(m, "abCCBa")
    assert [p.text for p in dec.subwords] == ["ab", "Ba"]


@given(st.text(alphabet="aAbBcC", max_size=12))
def test_decompose_reassembles(word):
    m = get_group(Z2Z)
    dec = decompose_path(m, word)
    assert dec.reassemble() == word
    # subwords are maximal: neighbouring pieces never share a parabolic
    for p, q in zip(dec.pieces, dec.pieces[1:]):
        assert not (p.parabolic is not None and p.parabolic == q.parabolic)


def test_decompose_rejects_unknown_letter():
    with pytest.raises(ValueError):
        decompose_path(get_group(Z2Z), "abx")


def test_penetration_records():
    m = get_group(Z2Z)
    pen = penetration_points(m, "aacCb")
    assert pen.backtracking
    assert [r.travel for r in pen.records] == [2, 1]
    assert pen.records[0].coset == pen.records[1].coset
    pen = penetration_points(m, "abcab")
    assert not pen.backtracking
    assert len(pen.records) == 2
    assert pen.end == m.evaluate("abcab")


# -- bounded coset penetration -------------------------------------------------

def test_bcp_free_group_tree_like():
    rep = bcp_probe(get_group(F2A), 1, 5)
    assert rep.K == 0
    assert rep.stable


def test_bcp_free_product_stable():
    rep = bcp_probe(get_group(Z2Z), 1, 5)
    assert rep.stable
    assert rep.K == 0


def test_bcp_axis_in_z2_grows():
    rep = bcp_probe(get_group("zd:2#parabolic=0"), 1, 6)
    assert not rep.stable
    ks = [rep.K_by_radius[r] for r in rep.radii]
    assert ks == sorted(ks) and ks[-1] > ks[0]


def test_bcp_rejects_whole_group():
    with pytest.raises(DegenerateFamilyError):
        bcp_probe(get_group("zd:2#parabolic=all"), 1, 3)


def test_bcp_requires_parabolics():
    with pytest.raises(ValueError):
        bcp_probe(get_group("zd:2"), 1, 3)


# -- V_delta and C(x, y) ----------------------------------------------------------

def test_v_delta_z2():
    m = get_group("zd:2")
    y = m.evaluate("aab")
    assert len(v_delta(m, m.identity, y, 0)) == 6      # 3 x 2 rectangle
    # delta = 1 adds nothing on a bipartite graph
    assert set(v_delta(m, m.identity, y, 1)) == set(v_delta(m, m.identity, y, 0))
    assert len(v_delta(m, m.identity, y, 2)) > 6


def test_delta_paths_count():
    m = get_group("zd:2")
    words, capped = delta_paths(m, m.identity, m.evaluate("aabb"), 0)
    assert not capped
    assert len(words) == 6               # binomial(4, 2)


def test_c_set_of_point():
    for key in (Z2Z, F2A):
        m = get_group(key)
        for x in elements(key, 2):
            assert c_set(m, x, x, 0).members == {x}


def test_c_set_same_coset_contains_coset_balls():
    m = get_group(Z2Z)
    metric = metric_for(m)
    x, y = m.identity, m.evaluate("aab")
    for K in (0, 1):
        members = c_set(m, x, y, 0, K).members
        d = metric.distance(x, y)
        assert coset_ball(m, 0, x, d + K) <= members
        assert coset_ball(m, 0, y, d + K) <= members


_SMALL = elements(Z2Z, 3)
_SMALL_F2 = elements(F2A, 3)


@given(st.sampled_from(_SMALL), st.sampled_from(_SMALL), st.sampled_from([0, 1, 2]),
       st.sampled_from([0, 1]))
def test_c_set_matches_path_enumeration_z2z(x, y, delta, K):
    m = get_group(Z2Z)
    oracle = c_set_paths(m, x, y, delta, K, cap=200_000)
    assert not oracle.capped
    assert c_set(m, x, y, delta, K).members == oracle.members


@given(st.sampled_from(_SMALL_F2), st.sampled_from(_SMALL_F2), st.sampled_from([0, 1, 2]))
def test_c_set_matches_path_enumeration_f2(x, y, delta):
    m = get_group(F2A)
    oracle = c_set_paths(m, x, y, delta, 0, cap=200_000)
    assert not oracle.capped
    assert c_set(m, x, y, delta, 0).members == oracle.members


@given(st.sampled_from(_SMALL), st.sampled_from(_SMALL), st.sampled_from([0, 2]))
def test_c_set_symmetric(x, y, delta):
    m = get_group(Z2Z)
    assert c_set(m, x, y, delta).members == c_set(m, y, x, delta).members


@given(st.sampled_from(_SMALL), st.sampled_from(_SMALL), st.sampled_from(_SMALL))
def test_c_set_equivariant(g, x, y):
    m = get_group(Z2Z)
    lhs = {m.multiply(g, t) for t in c_set(m, x, y, 1).members}
    assert lhs == c_set(m, m.multiply(g, x), m.multiply(g, y), 1).members


def test_c_set_cache_agrees():
    m = get_group(Z2Z)
    cache = CSetCache(m, 2, 0)
    for x, y in itertools.product(elements(Z2Z, 1), repeat=2):
        assert cache(x, y) == c_set(m, x, y, 2, 0).members


# -- triples -------------------------------------------------------------------

def test_triples_in_free_group_with_delta_zero():
    m = get_group(F2AB)
    els = elements(F2AB, 2)
    cache = CSetCache(m, 0, 0)
    for x, y, z in itertools.combinations(els, 3):
        assert triple_intersection_check(m, x, y, z, 0, 0, cache).ok


def test_triple_witness_is_common_point():
    m = get_group(Z2Z)
    x, y, z = m.identity, m.evaluate("aac"), m.evaluate("bcb")
    res = triple_intersection_check(m, x, y, z, 2, 0)
    assert res.ok
    for p, q in ((x, y), (y, z), (z, x)):
        assert res.witness in c_set(m, p, q, 2, 0)


# -- calibration and quasi-convexity ---------------------------------------------

def test_calibrate_free_group_both_factors():
    cal = delta_calibrate(get_group(F2AB), 4, n_triples=60)
    assert cal.ok and cal.delta == 0 and cal.K == 0


def test_calibrate_axis_family_fails():
    cal = delta_calibrate(get_group("zd:2#parabolic=0"), 5, n_triples=40)
    assert not cal.ok
    assert "grows" in cal.reason


def test_calibrate_whole_group_fails():
    cal = delta_calibrate(get_group("zd:2#parabolic=all"), 3, n_triples=20)
    assert not cal.ok
    assert "rejected" in cal.reason


def test_quasiconvexity_offsets():
    m = get_group("zd:2")
    diag = quasiconvexity_probe(m, resolve_subgroup(m, "lattice:1,1"), 8)
    assert not diag.bounded
    assert diag.max_offset >= 4
    axis = quasiconvexity_probe(m, resolve_subgroup(m, "0"), 8)
    assert axis.bounded and axis.max_offset == 0
    f2 = get_group("free:2")
    cyc = quasiconvexity_probe(f2, resolve_subgroup(f2, "0"), 6)
    assert cyc.bounded and cyc.max_offset == 0
