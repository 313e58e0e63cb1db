import random
from fractions import Fraction

from hypothesis import given, strategies as st

from threadrep.classify import (bands_exist, component_shape, detect_sb, graph_type,
                                is_string_algebra, tits_form_class, virtual_type)
from threadrep.partition import BoundQuiver

from helpers import fixture, tits_oracle

seeds = st.integers(0, 100_000)


def random_connected(seed, max_n=7):
    rng = random.Random(seed)
    n = rng.randint(1, max_n)
    vs = [f"v{i}" for i in range(n)]
    edges = [(vs[rng.randrange(i)], vs[i]) for i in range(1, n)]
    for _ in range(rng.choice([0, 0, 0, 1, 2])):
        edges.append((rng.choice(vs), rng.choice(vs)))
    return vs, edges


@given(seeds)
def test_graph_type_agrees_with_the_tits_form(seed):
    vs, edges = random_connected(seed)
    kind = graph_type((vs, edges)).kind
    sign = tits_oracle(vs, edges)
    assert {"Dynkin": "definite", "Euclidean": "semidefinite", "Neither": "indefinite"}[kind] == sign
    assert tits_form_class((vs, edges)) == sign


@given(st.integers(1, 7), st.integers(1, 7), st.integers(1, 7))
def test_star_shapes_follow_the_arm_inequality(p, q, r):
    # a star with arms of p, q, r edges is Dynkin iff 1/(p+1) + 1/(q+1) + 1/(r+1) > 1
    vs, edges = ["c"], []
    for name, n in (("x", p), ("y", q), ("z", r)):
        prev = "c"
        for i in range(n):
            vs.append(f"{name}{i}")
            edges.append((prev, f"{name}{i}"))
            prev = f"{name}{i}"
    s = Fraction(1, p + 1) + Fraction(1, q + 1) + Fraction(1, r + 1)
    expected = "Dynkin" if s > 1 else "Euclidean" if s == 1 else "Neither"
    assert graph_type((vs, edges)).kind == expected


def test_named_shapes():
    assert str(component_shape(["a", "b"], [("a", "b"), ("a", "b")])) == "Ã1"
    e7t = (["c", "x1", "x2", "x3", "y1", "y2", "y3", "z"],
           [("c", "x1"), ("x1", "x2"), ("x2", "x3"), ("c", "y1"), ("y1", "y2"), ("y2", "y3"), ("c", "z")])
    assert str(component_shape(*e7t)) == "Ẽ7"


def verdict(name, depth=6):
    doc = fixture(name)
    return virtual_type(doc.quiver, doc.ideal, depth)


def test_classification_table():
    assert verdict("a3_threaded").kind == "VirtuallyFinite"
    assert verdict("kronecker_relation").kind == "VirtuallyFinite"
    v3, v4 = verdict("d5_threaded"), verdict("kronecker_threaded")
    assert (v3.kind, v3.detail) == ("VirtuallyTame", "Euclidean D̃ family")
    assert (v4.kind, v4.detail) == ("VirtuallyTame", "Euclidean Ã family")


def test_threading_changes_the_type():
    assert str(verdict("d4_threading_1")) == "VirtuallyFinite (Dynkin D4)"
    assert str(verdict("d4_threading_2")) == "VirtuallyFinite (Dynkin D family)"
    for name in ("d4_threading_3", "d4_threading_4"):
        v = verdict(name)
        assert v.kind == "NotVirtuallyTame" and v.depth <= 4
        assert graph_type(v.witness.bound).kind == "Neither"


def test_special_biserial_detection():
    sb = detect_sb(fixture("d4_rect_ideal").quiver, fixture("d4_rect_ideal").ideal)
    assert sb.special_biserial and sb.gentle
    doc = fixture("kronecker_relation")
    sb = detect_sb(doc.quiver, doc.ideal)
    assert sb.special_biserial and sb.string
    d4 = fixture("d4_staircase")
    assert not detect_sb(d4.quiver, d4.ideal).special_biserial


def test_bands():
    kronecker = BoundQuiver(["a", "b"], {"t": ("a", "b"), "u": ("a", "b")})
    assert is_string_algebra(kronecker) and bands_exist(kronecker)
    chain = BoundQuiver(["a", "b", "c"], {"x": ("a", "b"), "y": ("b", "c")})
    assert not bands_exist(chain)
    cycle = BoundQuiver(["a", "b", "c"], {"x": ("a", "b"), "y": ("b", "c"), "z": ("a", "c")})
    assert bands_exist(cycle)
