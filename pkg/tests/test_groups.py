import itertools
from collections import deque

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rapiddecay.budget import BudgetExceeded
from rapiddecay.fitting import FitUnstableWarning
from rapiddecay.groups import (WordMetric, ball, distance, get_group, growth_profile,
                               metric_for, sphere, subgroup_distortion, word_length)

MODEL_KEYS = ["zd:1", "zd:2", "free:2", "heisenberg", "bs:1:2", "pgl2:2",
              "freeprod:zd:2,zd:1", "product:free:2,zd:1", "cyclic:5"]


def bfs_ball(model, r):
    """Independent breadth-first search, no shared caches."""
    seen = {model.identity: 0}
    queue = deque([model.identity])
    while queue:
        x = queue.popleft()
        if seen[x] == r:
            continue
        for _, s in model.generators:
            y = model.multiply(x, s)
            if y not in seen:
                seen[y] = seen[x] + 1
                queue.append(y)
    return seen


def words(model, max_len=8):
    return st.text(alphabet=[n for n, _ in model.generators], max_size=max_len)


@pytest.mark.parametrize("key", MODEL_KEYS)
def test_group_axioms_on_ball(key):
    m = get_group(key)
    for x in list(metric_for(m).ball(3))[:200]:
        assert m.multiply(x, m.identity) == x
        assert m.multiply(m.identity, x) == x
        assert m.multiply(x, m.invert(x)) == m.identity


@pytest.mark.parametrize("key", MODEL_KEYS)
def test_ball_matches_independent_bfs(key):
    m = get_group(key)
    oracle = bfs_ball(m, 4)
    assert ball(m, 4) == set(oracle)
    for g, n in oracle.items():
        assert word_length(m, g) == n


def test_ball_examples():
    assert len(ball(get_group("zd:2"), 1)) == 5
    assert len(ball(get_group("free:2"), 2)) == 17
    for key in MODEL_KEYS:
        m = get_group(key)
        assert ball(m, 0) == {m.identity}


@pytest.mark.parametrize("r", range(0, 9))
def test_closed_form_ball_sizes(r):
    assert len(ball(get_group("zd:1"), r)) == 2 * r + 1
    assert len(ball(get_group("zd:2"), r)) == 2 * r * r + 2 * r + 1
    if r:
        assert len(sphere(get_group("free:2"), r)) == 4 * 3 ** (r - 1)


def test_word_length_examples():
    f2 = get_group("free:2")
    assert word_length(f2, f2.identity) == 0
    assert word_length(f2, f2.evaluate("abA")) == 3
    pgl = get_group("pgl2:2")
    assert metric_for(pgl).search_length(pgl.upper_unipotent({2: 1})) <= 5


@pytest.mark.parametrize("key", ["free:2", "zd:2", "heisenberg", "freeprod:zd:2,zd:1", "bs:1:2"])
@given(data=st.data())
def test_length_function_axioms(key, data):
    m = get_group(key)
    g = m.evaluate(data.draw(words(m)))
    h = m.evaluate(data.draw(words(m)))
    a = m.evaluate(data.draw(words(m, 4)))
    lg, lh = word_length(m, g), word_length(m, h)
    assert word_length(m, m.invert(g)) == lg
    assert word_length(m, m.multiply(g, h)) <= lg + lh
    assert distance(m, m.multiply(a, g), m.multiply(a, h)) == distance(m, g, h)


@given(st.text(alphabet="aAbB", max_size=12))
def test_free_group_length_is_reduced_word_length(w):
    f2 = get_group("free:2")
    stack = []
    for ch in w:
        if stack and stack[-1] == ch.swapcase():
            stack.pop()
        else:
            stack.append(ch)
    assert word_length(f2, f2.evaluate(w)) == len(stack)


def test_growth_profiles():
    z = growth_profile(get_group("zd:1"), 12)
    assert z.sizes == [2 * r + 1 for r in range(13)]
    assert abs(z.slope - 1) < 0.2 and not z.superpolynomial
    z2 = growth_profile(get_group("zd:2"), 12)
    assert abs(z2.slope - 2) < 0.2
    with pytest.warns(FitUnstableWarning):
        f2 = growth_profile(get_group("free:2"), 10)
    assert f2.superpolynomial


def test_heisenberg_growth_degree():
    prof = growth_profile(get_group("heisenberg"), 10)
    assert abs(prof.slope - 4) <= 0.5


def test_axis_is_undistorted_in_z2():
    m = get_group("zd:2")
    tab = subgroup_distortion(m, [m.evaluate("a")], 10)
    assert all(intr == ind for _, intr, ind in tab.rows)
    assert not tab.distorted


def test_heisenberg_centre_is_distorted():
    m = get_group("heisenberg")
    centre = m.multiply(m.multiply(m.evaluate("a"), m.evaluate("b")),
                        m.multiply(m.evaluate("A"), m.evaluate("B")))
    assert subgroup_distortion(m, [centre], 16).distorted


def test_bs12_distortion_uses_conjugation_words():
    m = get_group("bs:1:2")
    for k in range(1, 6):
        target = m.evaluate("a" * 2 ** k)
        assert m.evaluate("t" * k + "a" + "T" * k) == target
        assert word_length(m, target) <= 2 * k + 1
    tab = subgroup_distortion(m, [m.evaluate("a")], 16)
    assert tab.distorted


def test_unipotent_subgroups_sit_in_linear_balls():
    from rapiddecay.convolution import unipotent_subgroup
    m = get_group("pgl2:2")
    metric = metric_for(m)
    for n in range(3):
        assert all(metric.length(g) <= 3 * n + 1 for g in unipotent_subgroup(m, n))


def test_parabolic_generators_are_disjoint():
    m = get_group("freeprod:zd:2,zd:2#parabolic=0,1")
    a, b = m.parabolics
    assert a.letters and b.letters and not (a.letters & b.letters)


def test_budget_exceeded_is_raised():
    m = get_group("free:3")
    metric = WordMetric(m, budget=500)
    with pytest.raises(BudgetExceeded):
        metric.ball(6)


def test_unknown_key():
    with pytest.raises(ValueError):
        get_group("nonsense:3")


def test_finite_group_from_file(tmp_path):
    # S_3 as permutations of 3 points, by multiplication table
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    rows = [" ".join(str(idx[tuple(p[q[k]] for k in range(3))] + 1) for q in perms)
            for p in perms]
    gens = f"{idx[(1, 0, 2)] + 1} {idx[(1, 2, 0)] + 1}"
    path = tmp_path / "s3.txt"
    path.write_text("6\n" + "\n".join(rows) + "\n" + gens + "\n")
    m = get_group(f"finite:{path}")
    assert len(ball(m, 10)) == 6
    assert max(word_length(m, g) for g in ball(m, 10)) == 2


ALL_MODELS = ["zd:1", "zd:2", "zd:3", "free:2", "heisenberg", "bs:1:2", "pgl2:2", "pgl2:3",
              "freeprod:zd:2,zd:1", "product:free:2,zd:1", "cyclic:5", "trivial"]


@pytest.mark.parametrize("key", ALL_MODELS)
def test_length_axioms_exhaustive_in_ball4(key):
    m = get_group(key)
    metric = metric_for(m)
    elems = metric.ball(4)
    L = metric.length
    assert L(m.identity) == 0
    for g in elems:
        assert L(m.invert(g)) == L(g)
    lens = {g: L(g) for g in elems}
    for g in elems:
        for h in elems:
            assert L(m.multiply(g, h)) <= lens[g] + lens[h]


@pytest.mark.parametrize("key", ALL_MODELS)
def test_spheres_partition_the_ball(key):
    metric = metric_for(get_group(key))
    seen = set()
    for n in range(5):
        s = set(metric.sphere(n))
        assert not (s & seen)
        seen |= s
    assert seen == set(metric.ball(4))


def test_free_product_associative_on_short_syllables():
    m = get_group("freeprod:zd:1,zd:1")
    words = ["", "a", "A", "aa", "b", "B", "bb", "ab", "ba", "Ab", "aB", "bA", "BA"]
    elems = [m.evaluate(w) for w in words]
    for x, y, z in itertools.product(elems, repeat=3):
        assert m.multiply(m.multiply(x, y), z) == m.multiply(x, m.multiply(y, z))
