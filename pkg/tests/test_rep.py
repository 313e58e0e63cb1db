import random
from fractions import Fraction

from hypothesis import given, strategies as st

from threadrep.ideal import Gap, IdealSpec
from threadrep.order import SRC, TGT, Inner, Vertex, make_interval
from threadrep.pathcat import make_pathlike
from threadrep.rep import (confine, dimension_vector, direct_sum, interval_module, partition_of_rep,
                           simple_module, support, validate)

from helpers import FLD, a2, fixture, random_partition, random_pwf

seeds = st.integers(0, 10_000)


def probe_points(q, rng, k=6):
    pts = [Vertex(v) for v in q.vertices]
    for a in q.threaded_arrows():
        lo = a.model.lo if a.model.lo is not None else Fraction(-5)
        hi = a.model.hi if a.model.hi is not None else Fraction(5)
        for _ in range(k):
            pts.append(Inner(a.name, lo + (hi - lo) * Fraction(rng.randrange(1, 48), 48)))
    return pts


@given(seeds)
def test_refining_and_normalizing_keep_the_module(seed):
    rng = random.Random(seed)
    q = fixture("d4_staircase").quiver
    m = random_pwf(q, rng)
    fine = m.on_partition(m.partition.refine(random_partition(q, rng)))
    norm = m.normalized()
    assert norm.normalized() == norm
    assert fine.normalized() == norm
    for p in probe_points(q, rng):
        assert m.eval(p) == fine.eval(p) == norm.eval(p)


@given(seeds)
def test_maps_agree_after_refinement(seed):
    rng = random.Random(seed)
    q = a2()
    m = random_pwf(q, rng)
    fine = m.on_partition(m.partition.refine(random_partition(q, rng)))
    xs = sorted(probe_points(q, rng), key=lambda p: (-1 if p == Vertex("0") else 2 if p == Vertex("1") else p.coord))
    for i in range(len(xs)):
        for j in range(i, len(xs)):
            f = make_pathlike(q, xs[i], xs[j])
            assert m.eval_map(f) == fine.eval_map(f)


@given(seeds)
def test_direct_sum_adds_dimensions(seed):
    rng = random.Random(seed)
    q = fixture("d4_staircase").quiver
    m, n = random_pwf(q, rng), random_pwf(q, rng)
    s = direct_sum(m, n)
    for p in probe_points(q, rng):
        assert s.eval(p) == m.eval(p) + n.eval(p)


@given(seeds)
def test_noise_in_core_keeps_pointwise_dimensions(seed):
    rng = random.Random(seed)
    q = a2()
    a = q.arrow("a")
    x, y = sorted(rng.sample(range(1, 24), 2))
    iv = make_interval(a, (Fraction(x, 24), rng.random() < 0.5), (Fraction(y, 24), rng.random() < 0.5))
    m = direct_sum(random_pwf(q, rng), interval_module(q, FLD, iv, as_noise=True))
    full = m.with_noise_in_core()
    assert not full.noise
    for p in probe_points(q, rng):
        assert m.eval(p) == full.eval(p)


def test_running_module_support_and_dimensions():
    m = fixture("d4_staircase").module("M")
    assert m.eval(Inner("alpha", Fraction(3))) == 2
    assert m.eval(Inner("beta", Fraction(-7))) == 2
    assert m.eval(Inner("beta", Fraction(7))) == 1
    assert len(support(m)) == 8
    d = dimension_vector(m)
    assert d.vertices == {"a": 1, "b": 2, "c": 1, "d": 1}


def test_confinement_to_a_thread_closure():
    doc = fixture("d4_staircase")
    m = doc.module("M")
    a = doc.quiver.arrow("alpha")
    c = confine(m, make_interval(a, (SRC, True), (TGT, True)))
    assert c.eval(Vertex("a")) == 1 and c.eval(Vertex("b")) == 2
    assert c.eval(Vertex("c")) == 0


def test_validate_against_gap_ideal():
    q = a2()
    a = q.arrow("a")
    gap = IdealSpec(families=[Gap("a", Fraction(1, 2))])
    short = interval_module(q, FLD, make_interval(a, (Fraction(1, 4), True), (Fraction(1, 2), False)), gap)
    assert validate(short, gap).ok
    whole = interval_module(q, FLD, make_interval(a, (SRC, True), (TGT, True)), gap)
    assert not validate(whole, gap).ok


def test_partition_of_simple_at_inner_point():
    q = a2()
    s = simple_module(q, FLD, Inner("a", Fraction(1, 3)))
    assert partition_of_rep(s).labels() == ["{0}", "{1}", "a:(0,1/3)", "a:[1/3,1/3]", "a:(1/3,1)"]
