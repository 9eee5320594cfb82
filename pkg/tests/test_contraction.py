import random
from fractions import Fraction

import pytest

from hypchain.chains import Chain, boundary
from hypchain.contraction import ContractionOperator, e_constant, verify_contraction
from hypchain.errors import RipsViolation
from hypchain.tree import MetricTree, select_net

from test_tree import random_tree


def segment(length):
    net = select_net(MetricTree(2, [(0, 1, length)]))
    return net


def test_e_constants():
    assert e_constant(2, 1) == 3
    assert e_constant(2, 2) == 10
    assert e_constant(1, 2) == 7
    assert e_constant(1, 3) == 29
    assert e_constant(Fraction(5, 2), 1) == 4
    with pytest.raises(ValueError):
        e_constant(2, 0)


def test_h0_on_segment():
    net = segment(3)
    op = ContractionOperator(net.tree, net.vertices, 0, 1)
    assert not op.h0(0)
    far = op.path_indices(0, 1)
    assert len(far) == 4
    expected = sum((Chain.simplex((a, b)) for a, b in zip(far, far[1:])), Chain.zero(1))
    assert op.h0(1) == expected
    for v in range(len(net)):
        assert boundary(op.h0(v)) == Chain.simplex((v,)) - Chain.simplex((0,))


def test_segment_exhaustive():
    net = segment(4)
    rep = verify_contraction(ContractionOperator(net.tree, net.vertices, 0, Fraction(3, 2)), 2)
    assert rep.ok and rep.checked[0] == 5


def test_rips_violation_is_reported():
    net = segment(4)
    op = ContractionOperator(net.tree, net.vertices, 0, 1)
    rep = verify_contraction(op, 1, [(0, 1)])
    assert rep.rips_violations and not rep.ok
    with pytest.raises(RipsViolation):
        op.h((0, 1))


def test_close_net_rejected():
    t = MetricTree(2, [(0, 1, Fraction(1, 2))])
    with pytest.raises(ValueError):
        ContractionOperator(t, [0, 1], 0, 2)


def test_degenerate_simplices_pass():
    net = segment(3)
    op = ContractionOperator(net.tree, net.vertices, 0, 2)
    rep = verify_contraction(op, 3, [(1, 1), (2, 2, 2), (1, 2, 1), (3, 3, 2, 3)])
    assert not rep.identity_failures and not rep.support_failures


@pytest.mark.parametrize("seed", range(8))
def test_random_trees_fractional_radius(seed):
    rng = random.Random(seed)
    net = select_net(random_tree(rng, rng.randint(2, 9)))
    r = Fraction(rng.choice([5, 7]), 2)
    op = ContractionOperator(net.tree, net.vertices, rng.randrange(len(net)), r)
    rep = verify_contraction(op, 2)
    assert rep.ok, (rep.identity_failures[:1], rep.bound_failures[:1], rep.support_failures[:1])


@pytest.mark.parametrize("r", [1, 2, 3])
def test_integer_radius_meets_bound_with_equality(r):
    # with r an integer a path of exactly r unit steps gives ||h_1|| = r + 1 = e(r, 1)
    net = segment(6)
    rep = verify_contraction(ContractionOperator(net.tree, net.vertices, 0, r), 2)
    assert rep.ok_weak
    assert rep.bound_failures
    assert all(f["norm"] == f["e"] for f in rep.bound_failures)
    assert rep.max_norm[1] == e_constant(r, 1)
