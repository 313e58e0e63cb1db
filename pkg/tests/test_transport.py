import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from threadrep.errors import IncompatiblePartition, RelationViolation
from threadrep.ideal import Gap, IdealSpec
from threadrep.order import SRC, TGT, make_interval
from threadrep.partition import ValidPartition, sample, sampled_bound_quiver
from threadrep.rep import interval_module, partition_of_rep
from threadrep.transport import hom_dim, induce, pwf_hom_dim, restrict

from helpers import FLD, a2, fixture, random_finite, random_partition, random_pwf

seeds = st.integers(0, 10_000)
D4 = fixture("d4_staircase").quiver


@given(seeds)
def test_restrict_after_induce_is_identity(seed):
    rng = random.Random(seed)
    part = random_partition(D4, rng)
    sbq = sampled_bound_quiver(D4, IdealSpec(), part)
    x = random_finite(sbq.bound, rng)
    assert restrict(induce(x, part, sbq=sbq), sbq.sample, sbq=sbq) == x


@given(seeds)
def test_induce_after_restrict_is_identity(seed):
    rng = random.Random(seed)
    m = random_pwf(D4, rng).normalized()
    part = partition_of_rep(m)
    smp = sample(part)
    assert induce(restrict(m, smp), part, smp) == m


@given(seeds)
def test_induction_is_fully_faithful(seed):
    rng = random.Random(seed)
    part = random_partition(D4, rng, 2)
    sbq = sampled_bound_quiver(D4, IdealSpec(), part)
    x, y = random_finite(sbq.bound, rng, 2), random_finite(sbq.bound, rng, 2)
    assert hom_dim(x, y) == pwf_hom_dim(induce(x, part, sbq=sbq), induce(y, part, sbq=sbq))


def test_staircase_endomorphisms():
    m = fixture("d4_staircase").module("M")
    part = partition_of_rep(m)
    x = restrict(m, sample(part))
    assert hom_dim(x, x) == pwf_hom_dim(m, m) == 2


def test_coarser_sample_is_rejected():
    m = fixture("d4_staircase").module("M")
    with pytest.raises(IncompatiblePartition):
        restrict(m, sample(ValidPartition.coarsest(m.quiver)))


def test_restriction_respects_the_completed_ideal():
    q = a2()
    gap = IdealSpec(families=[Gap("a", Fraction(1, 2))])
    whole = interval_module(q, FLD, make_interval(q.arrow("a"), (SRC, True), (TGT, True)), gap)
    part = partition_of_rep(whole).with_markers({"a": {(Fraction(1, 2), "-"), (Fraction(1, 2), "+")}})
    with pytest.raises(RelationViolation):
        restrict(whole, sample(part), gap)
