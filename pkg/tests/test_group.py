import json
from collections import Counter, defaultdict
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from hypchain.errors import BallTooLarge, OutOfBall, PresentationInvalid
from hypchain.group import (
    GroupPresentation,
    build_context,
    estimate_delta,
    free_group,
    free_reduce,
    invert_word,
    surface_group,
)

from conftest import GOLDEN


def reduced_words(letters, n):
    out, frontier = [""], [""]
    for _ in range(n):
        frontier = [w + c for w in frontier for c in letters if not (w and w[-1] == c.swapcase())]
        out += frontier
    return out


def brute_ball(ctx, radius):
    """Normal forms by equality testing all reduced words, bucketed by abelianization."""

    def ab(w):
        v = Counter()
        for ch in w:
            v[ch.lower()] += 1 if ch.islower() else -1
        return tuple(sorted((k, c) for k, c in v.items() if c))

    buckets = defaultdict(list)
    for w in reduced_words(ctx.presentation.alphabet, radius):
        buckets[ab(w)].append(w)
    reps = []
    for words in buckets.values():
        classes = []
        for w in words:
            for cls in classes:
                if ctx.is_trivial(invert_word(cls[0]) + w):
                    cls.append(w)
                    break
            else:
                classes.append([w])
        reps += [min(c, key=ctx.shortlex_key) for c in classes]
    return sorted(reps, key=ctx.shortlex_key)


def test_free_ball_sizes():
    assert free_group(2, 2).size == 17
    z = build_context(GroupPresentation(("a",), (), "free", 3))
    assert sorted(z.elements(), key=z.shortlex_key) == ["", "a", "A", "aa", "AA", "aaa", "AAA"]


def test_genus2_radius2():
    s = surface_group(2, 2)
    assert s.sphere_sizes() == [1, 8, 56]
    assert s.size == 65


def test_genus2_ball_matches_brute_force():
    s = surface_group(2, 4)
    assert list(s.elements()) == brute_ball(s, 4)


def test_genus2_sphere_sizes(genus2):
    assert genus2.sphere_sizes() == [1, 8, 56, 392, 2736, 19096, 133288]


def test_free_ids_are_shortlex_ranks(f2_small):
    words = sorted(reduced_words("aAbB", 6), key=f2_small.shortlex_key)
    assert [f2_small.element_id(w) for w in words] == list(range(len(words)))
    assert list(f2_small.elements()) == words


def test_multiply_examples():
    f = free_group(2, 3)
    assert f.multiply("a", "A") == ""
    assert f.multiply("ab", "b") == "abb"
    with pytest.raises(OutOfBall):
        f.multiply("aaa", "a")


def test_distance_and_diameter(f2):
    assert f2.distance("", "") == 0
    assert f2.distance("a", "ab") == 1
    assert f2.distance("bA", "ab") == 4
    assert f2.diameter(("", "", "")) == 0
    assert f2.diameter(("", "a", "ab")) == 2
    assert f2.diameter(("", "aaaaa")) == 5


def test_geodesics(f2):
    assert f2.based_geodesic("") == [""]
    assert f2.based_geodesic("aaa") == ["", "a", "aa", "aaa"]
    assert f2.based_geodesic("ab") == ["", "a", "ab"]
    assert f2.geodesic("a", "a") == ["a"]
    assert f2.geodesic("a", "ab") == ["a", "ab"]
    assert f2.geodesic("b", "a") == ["b", "", "a"]


def test_hulls(f2):
    assert f2.geodesic_hull(("",)) == {""}
    assert f2.geodesic_hull(("", "a", "b")) == {"", "a", "b"}
    assert f2.geodesic_hull(("", "aa", "b")) == {"", "a", "aa", "b"}


def greedy_geodesic(ctx, x):
    """Walk from e choosing the ShortLex-least neighbor strictly closer to x."""
    path = [""]
    while path[-1] != x:
        cur = path[-1]
        nbrs = sorted({ctx.multiply(cur, c) for c in ctx.presentation.alphabet}, key=ctx.shortlex_key)
        d = ctx.distance(cur, x)
        path.append(next(y for y in nbrs if ctx.distance(y, x) < d))
    return path


def test_based_geodesic_is_greedy_shortlex(genus2_small):
    s = genus2_small
    for x in list(s.elements())[::37]:
        if len(x) < s.radius:
            assert s.based_geodesic(x) == greedy_geodesic(s, x)


def test_free_geodesic_unique_by_bfs():
    # every geodesic in a tree is unique: count shortest paths by BFS
    for x in ["abAB", "aab", "BBa", "bAbA"]:
        count = {"": 1}
        layer = [""]
        for _ in range(len(x)):
            nxt = Counter()
            for w in layer:
                for c in "aAbB":
                    y = free_reduce(w + c)
                    if len(y) == len(w) + 1:
                        nxt[y] += count[w]
            count.update(nxt)
            layer = list(nxt)
        assert count[x] == 1


words2 = st.text(alphabet="aAbB", max_size=4).map(free_reduce)


@settings(max_examples=150, deadline=None)
@given(words2, words2, words2)
def test_metric_axioms(x, y, z):
    f = free_group(2, 8)
    assert f.distance(x, y) == f.distance(y, x)
    assert (f.distance(x, y) == 0) == (x == y)
    assert f.distance(x, z) <= f.distance(x, y) + f.distance(y, z)


@settings(max_examples=100, deadline=None)
@given(words2, words2, words2)
def test_equivariance_free(g, x, y):
    f = free_group(2, 12)
    lhs = f.geodesic(f.multiply(g, x), f.multiply(g, y))
    assert lhs == [f.multiply(g, p) for p in f.geodesic(x, y)]


def test_equivariance_surface(genus2_small):
    s = genus2_small
    els = [x for x in s.elements() if len(x) <= 1]
    for g, x, y in product(els, repeat=3):
        assert s.geodesic(s.multiply(g, x), s.multiply(g, y)) == [s.multiply(g, p) for p in s.geodesic(x, y)]


def test_surface_metric_triangle(genus2_small):
    s = genus2_small
    els = [x for x in s.elements() if len(x) <= 2][::5]
    for x, y, z in product(els, repeat=3):
        assert s.distance(x, z) <= s.distance(x, y) + s.distance(y, z)
        assert s.distance(x, y) == s.distance(y, x)


def test_geodesic_shape(genus2_small):
    s = genus2_small
    for x in list(s.elements())[::11]:
        path = s.based_geodesic(x)
        assert len(path) == s.distance("", x) + 1
        assert all(s.distance(a, b) == 1 for a, b in zip(path, path[1:]))


def test_hull_contains_entries_and_ignores_order(f2):
    ys = ("", "abb", "Ba", "aB")
    hull = f2.geodesic_hull(ys)
    assert set(ys) <= hull
    assert f2.geodesic_hull(("aB", "", "Ba", "abb")) == hull


def test_adjacency_symmetric(genus2_small):
    s = genus2_small
    for x in list(s.elements())[::13]:
        for c in s.presentation.alphabet:
            try:
                y = s.neighbor(x, c)
            except OutOfBall:
                continue
            assert s.neighbor(y, c.swapcase()) == x


def test_ball_closed_under_inverse(genus2_small):
    s = genus2_small
    assert s.element_id("") == 0
    for x in s.elements():
        assert s.contains(s.inverse(x))


def test_delta_estimates():
    assert estimate_delta(free_group(2, 6), 3) == 0
    z = build_context(GroupPresentation(("a",), (), "free", 8))
    assert estimate_delta(z, 4) == 0


def test_genus2_delta_golden(genus2):
    golden = json.loads((GOLDEN / "genus2_delta.json").read_text())
    assert estimate_delta(genus2, golden["sample_radius"]) == Fraction(golden["delta"])


def test_presentation_validation():
    with pytest.raises(PresentationInvalid):
        GroupPresentation(("a", "a"))
    with pytest.raises(PresentationInvalid):
        GroupPresentation(("a", "b"), ("ab",), "free")
    with pytest.raises(PresentationInvalid):
        GroupPresentation(("a", "b"), ("aA",), "dehn")
    with pytest.raises(PresentationInvalid):
        GroupPresentation(("a", "b"), ("abAB",), "dehn")  # Z^2 fails C'(1/6)
    with pytest.raises(PresentationInvalid):
        GroupPresentation(("a",), ("aa",), "dehn")
    with pytest.raises(PresentationInvalid):
        GroupPresentation(("a",), (), "free", -1)


def test_ball_too_large():
    with pytest.raises(BallTooLarge):
        surface_group(2, 6, max_elements=1000)


def test_free_ball_is_implicit():
    # the cap bounds materialized elements; free balls are never materialized
    f = free_group(2, 20, max_elements=1000)
    assert f.size == 1 + sum(4 * 3 ** (k - 1) for k in range(1, 21))
    assert f.element_id("B" * 20) == f.size - 1
