import json
import random
from fractions import Fraction

import pytest

from hypchain.approx import build_correspondence
from hypchain.chains import Chain, act, boundary, l1_norm, support
from hypchain.group import free_group
from hypchain.subdivision import (
    SubdivisionMap,
    cascade_bound,
    certify,
    certify_corpus,
    prism_homotopy,
    radius_schedule,
    subdivide_f0,
    subdivide_f1,
)

from conftest import GOLDEN

F12 = free_group(2, 12)


def S(*v):
    return Chain.simplex(v)


def rand_word(rng, n):
    return F12.normal_form("".join(rng.choice("aAbB") for _ in range(rng.randint(0, n))))


def test_radius_schedule():
    assert radius_schedule(1, 0) == 13
    assert radius_schedule(5, 3) == 23
    for r, c in [(1, 0), (13, Fraction(1, 2)), (40, 7)]:
        assert radius_schedule(r, c) >= r + 12
    with pytest.raises(ValueError):
        radius_schedule(1, -1)


def test_schedule_starts_at_one():
    p = SubdivisionMap(F12).params
    assert p.r(0) == 1 and p.r(1) == 1
    assert p.schedule() == [1, 1, 13, 25]


def test_cascade():
    assert cascade_bound(1) == 1
    assert cascade_bound(2) == 27
    assert cascade_bound(3) == 4752


def test_f0_f1():
    assert subdivide_f0(("ab",)) == S("ab")
    assert subdivide_f1(F12, ("", "")) == S("", "")
    assert subdivide_f1(F12, ("", "aaa")) == S("", "a") + S("a", "aa") + S("aa", "aaa")
    rng = random.Random(2)
    for _ in range(50):
        x, y = rand_word(rng, 6), rand_word(rng, 6)
        if x != y:
            assert l1_norm(subdivide_f1(F12, (x, y))) == F12.distance(x, y)


def test_prism_identity_round_trip():
    c = S("", "a", "ab") - 2 * S("a", "b", "b")
    h = prism_homotopy(lambda x: x, c)
    assert boundary(h) + prism_homotopy(lambda x: x, boundary(c)) == Chain.zero(2)


def test_prism_degree_zero():
    rt = {"a": "ab"}.get
    h = prism_homotopy(rt, S("a"))
    assert h == S("a", "ab")
    assert boundary(h) == S("ab") - S("a")


def test_prism_homotopy_identity_random(genus2_small):
    s = genus2_small
    rng = random.Random(4)
    els = [x for x in s.elements() if len(x) <= 2]
    for _ in range(30):
        ys = ("",) + tuple(rng.choice(els) for _ in range(2))
        corr = build_correspondence(s, ys, s.delta)
        hull = corr.hull
        rt = corr.round_trip
        for n in (1, 2):
            sig = Chain.simplex(tuple(rng.choice(hull) for _ in range(n + 1)))
            lhs = boundary(prism_homotopy(rt, sig)) + prism_homotopy(rt, boundary(sig))
            image = Chain({tuple(rt(v) for v in t): k for t, k in sig.terms.items()}, n)
            assert lhs == image - sig


def test_dimension_one_agrees_with_f1():
    smap = SubdivisionMap(F12)
    assert smap.f(("ab", "B")) == subdivide_f1(F12, ("ab", "B"))


def test_fully_degenerate():
    smap = SubdivisionMap(F12)
    for n in (1, 2, 3):
        s = ("",) * (n + 1)
        out = smap.f(s)
        assert support(out) <= {""}
        if n > 1:
            assert boundary(out) == smap.f_boundary(s)


def test_random_2_simplices_exact():
    smap = SubdivisionMap(F12)
    rng = random.Random(8)
    done = 0
    while done < 60:
        s = ("", rand_word(rng, 5), rand_word(rng, 5))
        if F12.diameter(s) > 10:
            continue
        done += 1
        out = smap.f(s)
        assert l1_norm(boundary(out) - smap.f_boundary(s)) == 0
        assert support(out) <= F12.geodesic_hull(s)


def test_equivariance(genus2_small):
    for ctx in (F12, genus2_small):
        smap = SubdivisionMap(ctx)
        rng = random.Random(3)
        els = [x for x in ctx.elements() if len(x) <= 1]
        for _ in range(25):
            sig = tuple(rng.choice(els) for _ in range(3))
            g = rng.choice(els)
            moved = tuple(ctx.multiply(g, x) for x in sig)
            assert smap.f(moved) == act(ctx, g, smap.f(sig))


def test_certify_examples():
    smap = SubdivisionMap(F12)
    c = certify(smap, ("", "a"))
    assert c.passed and c.output_l1 == 1 and c.input_sobolev == 2
    for k in range(1, 13):
        c = certify(smap, ("", "a" * k))
        assert c.passed and Fraction(c.output_l1, c.input_sobolev) <= 1


def test_batch_100_golden():
    g = json.loads((GOLDEN / "f2_batch100.json").read_text())
    rng = random.Random(g["seed"])
    sims = set()
    while len(sims) < g["count"]:
        x, y = rand_word(rng, 5), rand_word(rng, 5)
        if F12.diameter(("", x, y)) <= 10:
            sims.add(("", x, y))
    sims = sorted(sims)
    run = certify_corpus(F12, sims, 2)
    assert run.passed and len(run.certificates) == g["count"]
    assert run.max_ratios()[2] <= Fraction(g["max_ratio_dim2"])


def test_certificate_json_roundtrip():
    smap = SubdivisionMap(F12)
    c = certify(smap, ("", "ab", "bA"))
    data = c.to_json()
    assert data["passed"] is True and data["chain_map_residual_norm"] == 0
    assert data["radius"] == "13/1"
