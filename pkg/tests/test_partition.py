import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from threadrep.classify import graph_type
from threadrep.errors import InvalidDimVec, MalformedPartition
from threadrep.ideal import Gap, IdealSpec
from threadrep.order import Inner, make_interval
from threadrep.partition import (DimensionVector, ValidPartition, partition_of_dimvec, sample,
                                 sampled_bound_quiver)
from threadrep.rep import partition_of_rep

from helpers import a2, fixture, random_partition

STAIRCASE_CELLS = ["{a}", "{b}", "{c}", "{d}", "alpha:(0,2]", "alpha:(2,4)", "beta:(-inf,0]", "beta:(0,+inf)"]


def test_staircase_partition_and_sample():
    doc = fixture("d4_staircase")
    part = partition_of_rep(doc.module("M"))
    assert part.cell_count() == 8
    assert part.labels() == STAIRCASE_CELLS
    sbq = sampled_bound_quiver(doc.quiver, doc.ideal, part)
    assert len(sbq.bound.vertices) == 8
    assert str(graph_type(sbq.bound)) == "Euclidean (Ẽ7)"


def test_sample_points_lie_in_their_cells():
    doc = fixture("d4_staircase")
    part = partition_of_rep(doc.module("M"))
    for name, p in sample(part).points:
        assert part.vertex_of(p) == name


@given(st.integers(0, 10_000))
def test_refinement_is_reflexive_and_transitive(seed):
    rng = random.Random(seed)
    q = fixture("d4_staircase").quiver
    p1 = random_partition(q, rng)
    p2 = random_partition(q, rng)
    both = p1.refine(p2)
    assert p1.refines(p1)
    assert both.refines(p1) and both.refines(p2)
    assert both.refine(p1) == both


def test_gap_ideal_sampled_quiver_has_zero_relations():
    q = a2()
    ideal = IdealSpec(families=[Gap("a", Fraction(1, 2))])
    part = ValidPartition.from_markers(q, {"a": {(Fraction(1, 2), "-"), (Fraction(1, 2), "+")}})
    sbq = sampled_bound_quiver(q, ideal, part)
    assert sbq.bound.zero_relations
    # the source vertex and the point cell at 1/2 are half a unit apart: the chain between them dies
    assert sbq.bound.path_is_zero(("a:0", "a:1"))
    assert not sbq.bound.path_is_zero(("a:0",))


def test_dimension_vector_partition():
    q = a2()
    a = q.arrow("a")
    d = DimensionVector(q, {"0": 1, "1": 0}, {"a": [
        (make_interval(a, ("src", False), (Fraction(1, 3), True)), 1),
        (make_interval(a, (Fraction(1, 3), False), ("tgt", False)), 2)]})
    part = partition_of_dimvec(d)
    assert part.labels() == ["{0}", "{1}", "a:(0,1/3]", "a:(1/3,1)"]
    assert d.at(Inner("a", Fraction(1, 2))) == 2
    bad = DimensionVector(q, {"0": 1}, {"a": [(make_interval(a, ("src", False), (Fraction(1, 3), True)), 1)]})
    with pytest.raises(InvalidDimVec):
        partition_of_dimvec(bad)


def test_malformed_cells_rejected():
    q = a2()
    a = q.arrow("a")
    with pytest.raises(MalformedPartition):
        ValidPartition(q, {"a": [make_interval(a, ("src", False), (Fraction(1, 2), True))]})
