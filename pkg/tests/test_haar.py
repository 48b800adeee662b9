import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from haargpd import edgepath as ep
from haargpd.cover import isotropy_ball, pi1_generators, section, transversal
from haargpd.edgepath import Arrow, OrientedEdge
from haargpd.gpdcore import FreeGroup, GroupAction, TArrow, integer, pair_groupoid, rotation_action, \
    transformation_groupoid
from haargpd.haar import (NotInvariant, compare_systems, cycle_to_transformation, direct_weight_oracle,
                          haar_from_base_measure, haar_from_transversal, mutate_system, pair_haar,
                          transformation_haar, transversal_from_haar, verify_group_case, verify_haar,
                          verify_section_independence)
from haargpd.measures import (DiscreteMeasure, FinSupp, NotFullySupported, RangeFiber, compose_family,
                              counting_family, vertex_measure)
from haargpd.suite import mutation_target

from conftest import C3, D2, R1, R2, random_graphs


def build(g, weights):
    t = transversal(g, 0)
    return haar_from_base_measure(vertex_measure(weights), t, section(t))


def test_base_measure_examples():
    h = build(R1, [1])
    assert all(h.weight(y) == 1 for y in h.groupoid.ball(5))
    h = build(D2, [Fraction(1, 2), Fraction(1, 2)])
    assert h.weight(Arrow(0, 1, (OrientedEdge(1, True),))) == Fraction(1, 2)
    assert h[1].integrate(FinSupp.indicator([Arrow(0, 1, (OrientedEdge(1, True),))])) == Fraction(1, 2)
    h = build(D2, [Fraction(1, 3), Fraction(2, 3)])
    assert h[0].integrate(FinSupp.indicator([ep.unit(0)])) == Fraction(1, 3)


def test_base_measure_rejects_zero():
    with pytest.raises(NotFullySupported):
        build(D2, [0, 1])


def test_oracle_examples():
    h = direct_weight_oracle(vertex_measure([Fraction(5, 7)]), R1)
    assert all(h.weight(y) == Fraction(5, 7) for y in h.groupoid.ball(4))
    h = direct_weight_oracle(vertex_measure([Fraction(1, 3)] * 3), C3)
    assert all(h.weight(y) == Fraction(1, 3) for y in h.groupoid.ball(4))


@pytest.mark.parametrize("g", [R1, R2, D2, C3] + random_graphs(3, seed=11))
def test_routes_agree_with_oracle(g):
    rng = random.Random(g.vertices + len(g.edges))
    nu = vertex_measure([Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(g.vertices)])
    t = transversal(g, 0)
    sec = section(t)
    oracle = direct_weight_oracle(nu, g)
    h = haar_from_base_measure(nu, t, sec)
    lam = compose_family(nu, counting_family(t))
    assert compare_systems(h, oracle, 3, "base").ok
    assert compare_systems(haar_from_transversal(lam, sec, 3), oracle, 3, "transversal").ok


def test_transversal_examples():
    t = transversal(R1, 0)
    ones = DiscreteMeasure(lambda y: Fraction(1), RangeFiber(0))
    h = haar_from_transversal(ones, section(t))
    assert all(h.weight(y) == 1 for y in h.groupoid.ball(4))
    assert all(transversal_from_haar(h, 0).weight(y) == 1 for y in t.ball(4))


def test_transversal_rejects_non_invariant():
    t = transversal(R2, 0)
    by_length = DiscreteMeasure(lambda y: Fraction(1 + len(y)), RangeFiber(0))
    with pytest.raises(NotInvariant):
        haar_from_transversal(by_length, section(t))
    zero = DiscreteMeasure(lambda y: Fraction(0), RangeFiber(0))
    with pytest.raises(NotFullySupported):
        haar_from_transversal(zero, section(t))


@pytest.mark.parametrize("g,weights", [(D2, [Fraction(1, 2)] * 2),
                                       (C3, [Fraction(1, 6), Fraction(1, 3), Fraction(1, 2)])])
def test_transversal_round_trip(g, weights):
    h = build(g, weights)
    back = haar_from_transversal(transversal_from_haar(h, 0), section(transversal(g, 0)), 4)
    assert compare_systems(back, h, 4, "round-trip").ok


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["R2", "D2", "C3"]), st.data())
def test_scaling_covariance(name, data):
    g = {"R2": R2, "D2": D2, "C3": C3}[name]
    pos = st.fractions(min_value=Fraction(1, 20), max_value=20)
    weights = data.draw(st.lists(pos, min_size=g.vertices, max_size=g.vertices))
    c = data.draw(pos)
    h, hc = build(g, weights), build(g, [c * w for w in weights])
    for y in h.groupoid.ball(3):
        assert hc.weight(y) == c * h.weight(y)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["R2", "D2", "C3"]), st.data())
def test_oracle_equality_property(name, data):
    g = {"R2": R2, "D2": D2, "C3": C3}[name]
    pos = st.fractions(min_value=Fraction(1, 20), max_value=20)
    weights = data.draw(st.lists(pos, min_size=g.vertices, max_size=g.vertices))
    h = build(g, weights)
    for y in h.groupoid.ball(3):
        assert h.weight(y) == weights[y.source]


def test_verify_haar_on_r2():
    assert verify_haar(build(R2, [1]), 4, 200, random.Random(0)).violations == 0


@pytest.mark.parametrize("g", [R1, R2, D2, C3])
def test_mutations_are_detected(g):
    h = build(g, [Fraction(1, 2)] * g.vertices)
    target = mutation_target(transversal(g, 0), 4)
    zeroed = verify_haar(mutate_system(h, target, Fraction(0)), 4, 50, random.Random(0))
    assert zeroed["haar-support"].violations > 0
    doubled = verify_haar(mutate_system(h, target, Fraction(2)), 4, 50, random.Random(0))
    assert doubled["haar-support"].violations == 0
    assert doubled["haar-invariance-pointwise"].violations > 0


def test_transformation_haar():
    tg = transformation_groupoid(rotation_action(3))
    alpha = transformation_haar(tg)
    assert alpha.weight(TArrow(0, integer(5))) == 1
    assert verify_haar(alpha, 4, 100, random.Random(1), prefix="t").violations == 0
    action = GroupAction(FreeGroup(2), 3, ((1, 2, 0), (1, 0, 2)))
    assert verify_haar(transformation_haar(transformation_groupoid(action)), 3, 50).violations == 0


def test_pair_haar():
    pg = pair_groupoid(3)
    lam = vertex_measure([Fraction(1, 2), 3, Fraction(2, 7)])
    h = pair_haar(pg, lam)
    assert h.weight((0, 1)) == 3
    assert verify_haar(h, 0, 100, random.Random(2), prefix="pair").violations == 0


def test_section_independence_d2():
    t = transversal(D2, 0)
    sec = section(t)
    (gen,) = pi1_generators(t, sec=sec)
    nu = vertex_measure([Fraction(1, 3), Fraction(2, 3)])
    twisted = sec.twisted({1: gen})
    assert twisted[1] != sec[1]
    assert verify_section_independence(nu, t, [sec, sec, twisted], 4).ok


def test_section_independence_r2_length_two_loop():
    t = transversal(R2, 0)
    sec = section(t)
    loop = next(y for y in isotropy_ball(t, 2) if len(y) == 2)
    assert verify_section_independence(vertex_measure([Fraction(3, 2)]), t, [sec, sec.twisted({0: loop})], 4).ok


def test_group_case_weights():
    t = transversal(C3, 0)
    h = build(C3, [Fraction(1, 3)] * 3)
    alpha = transformation_haar(transformation_groupoid(rotation_action(3)))
    for y in h.groupoid.ball(4):
        assert h.weight(y) / alpha.weight(cycle_to_transformation(y)) == Fraction(1, 3)


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_group_case(n):
    assert verify_group_case(n, radius=4, trials=30, rng=random.Random(n)).ok


def test_group_case_general_nu():
    nu = vertex_measure([Fraction(1, 6), Fraction(1, 3), Fraction(1, 2)])
    assert verify_group_case(3, nu, radius=3, trials=20).ok
