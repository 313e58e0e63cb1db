from fractions import Fraction

from hypothesis import given, strategies as st

from threadrep.ideal import Gap, IdealSpec, QuadII, check_weakly_admissible, mem
from threadrep.order import Inner, Vertex
from threadrep.pathcat import MorphismCombination, make_pathlike

from helpers import FLD, a2, fixture

coords = st.integers(0, 24).map(lambda k: Fraction(k, 24))


def point(c):
    if c == 0:
        return Vertex("0")
    if c == 1:
        return Vertex("1")
    return Inner("a", c)


@given(coords, coords)
def test_gap_ideal_kills_long_segments(x, y):
    q = a2()
    ideal = IdealSpec(families=[Gap("a", Fraction(1, 2))])
    expected = 1 if x <= y and y - x < Fraction(1, 2) else 0
    assert len(ideal.hom_basis(q, point(x), point(y))) == expected


@given(coords, coords)
def test_point_family_kills_segments_through_the_point(x, y):
    q = a2()
    ideal = IdealSpec(families=[QuadII("a", Fraction(1, 2))])
    expected = 1 if x <= y and not (x < Fraction(1, 2) < y) else 0
    assert len(ideal.hom_basis(q, point(x), point(y))) == expected


def test_gap_ideal_is_admissible():
    doc = fixture("a2_gap_half")
    rep = check_weakly_admissible(doc.ideal, doc.quiver, doc.field)
    assert rep.weakly_admissible and rep.admissible


def test_rectangle_ideal_is_weakly_admissible_and_kills_the_running_hom():
    doc = fixture("d4_rect_ideal")
    rep = check_weakly_admissible(doc.ideal, doc.quiver, doc.field)
    assert rep.weakly_admissible
    assert doc.ideal.hom_basis(doc.quiver, doc.point("x"), doc.point("y")) == []
    f = MorphismCombination.basis(FLD, make_pathlike(doc.quiver, doc.point("x"), doc.point("y")))
    assert mem(f, doc.ideal, doc.quiver)


def test_zero_ideal_on_two_cycle_fails_hom_finiteness():
    doc = fixture("two_cycle")
    rep = check_weakly_admissible(doc.ideal, doc.quiver, doc.field)
    assert not rep.hom_finite
    assert any("NotHomFinite" in f for f in rep.failures)


def test_linear_relation_removes_one_dimension():
    doc = fixture("kronecker_relation")
    x, y = Inner("t", Fraction(1, 3)), Inner("t", Fraction(2, 3))
    assert doc.ideal.hom_basis(doc.quiver, x, y) == []
    assert len(IdealSpec().hom_basis(doc.quiver, x, y)) == 1
