import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from threadrep.errors import EndpointMismatch, NotHomFinite
from threadrep.order import Inner, OrderModel, Vertex
from threadrep.pathcat import (ThreadQuiver, compose_basis, format_pathlike, has_directed_cycle,
                               hom_basis, make_pathlike, monomials)

from helpers import fixture


def random_dag(seed, n=5, m=7):
    rng = random.Random(seed)
    vs = [f"v{i}" for i in range(n)]
    arrows = []
    for k in range(m):
        i, j = sorted(rng.sample(range(n), 2))
        model = OrderModel.dense(0, 1) if rng.random() < 0.5 else OrderModel.empty()
        arrows.append((f"e{k}", vs[i], vs[j], model))
    return ThreadQuiver(vs, arrows)


def path_counts(q):
    """Adjacency-matrix oracle: entry (u, w) of sum_k A^k counts the quiver paths."""
    idx = {v: i for i, v in enumerate(q.vertices)}
    a = np.zeros((len(idx), len(idx)), dtype=np.int64)
    for arr in q.arrows:
        a[idx[arr.source], idx[arr.target]] += 1
    total, power = np.eye(len(idx), dtype=np.int64), np.eye(len(idx), dtype=np.int64)
    for _ in range(len(idx)):
        power = power @ a
        total = total + power
    return idx, total


@given(st.integers(0, 10_000))
def test_vertex_hom_dims_count_quiver_paths(seed):
    q = random_dag(seed)
    idx, total = path_counts(q)
    for u in q.vertices:
        for w in q.vertices:
            assert len(hom_basis(q, Vertex(u), Vertex(w))) == total[idx[u], idx[w]]


@given(st.integers(0, 10_000))
def test_composition_is_associative(seed):
    rng = random.Random(seed)
    q = random_dag(seed)
    pts = [Vertex(v) for v in q.vertices]
    for a in q.threaded_arrows():
        pts += [Inner(a.name, Fraction(1, 3)), Inner(a.name, Fraction(2, 3))]
    for _ in range(10):
        w, x, y, z = (rng.choice(pts) for _ in range(4))
        fs, gs, hs = monomials(q, w, x), monomials(q, x, y), monomials(q, y, z)
        if fs and gs and hs:
            f, g, h = fs[0], gs[0], hs[0]
            assert compose_basis(q, h, compose_basis(q, g, f)) == compose_basis(q, compose_basis(q, h, g), f)


def test_staircase_hom_is_one_dimensional():
    doc = fixture("d4_staircase")
    basis = hom_basis(doc.quiver, doc.point("x"), doc.point("y"))
    assert len(basis) == 1
    assert format_pathlike(doc.quiver, basis[0]) == "η[beta:-1←src]·η[alpha:tgt←1]"


def test_two_cycle_is_not_hom_finite():
    doc = fixture("two_cycle")
    assert has_directed_cycle(doc.quiver)
    with pytest.raises(NotHomFinite) as exc:
        hom_basis(doc.quiver, doc.point("x"), doc.point("y"))
    assert set(exc.value.witness) <= {"al", "be"}


def test_pure_segments_go_forward_only():
    q = ThreadQuiver(["a", "b"], [("t", "a", "b", OrderModel.dense(0, 1))])
    lo, hi = Inner("t", Fraction(1, 4)), Inner("t", Fraction(3, 4))
    assert len(hom_basis(q, lo, hi)) == 1
    assert hom_basis(q, hi, lo) == []
    with pytest.raises(EndpointMismatch):
        make_pathlike(q, hi, lo)
