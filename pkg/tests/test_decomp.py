import random
from fractions import Fraction

from hypothesis import given, strategies as st

from threadrep.decomp import (barcode, barcode_svg, canonical_krs, decompose, end_algebra, krs,
                              noise_split, thread_chain)
from threadrep.exactla import Matrix, PrimeField, is_local
from threadrep.order import SRC, TGT, Bound, Inner, ThreadInterval, Vertex, make_interval
from threadrep.partition import BoundQuiver
from threadrep.rep import FiniteQuiverRep, direct_sum, interval_module, simple_module

from helpers import FLD, a2, elder_barcode, fixture, random_finite, random_pwf

seeds = st.integers(0, 10_000)


def oracle_bars(m, arrow):
    """Barcode from the elder-rule oracle, with chain positions turned into thread intervals."""
    _, dims, maps = thread_chain(m, arrow)
    cells = m.partition.cells(arrow)
    k = len(cells)

    def start(i):
        if i == 0:
            return Bound(SRC, True)
        if i == k + 1:
            return Bound(TGT, True)
        return cells[i - 1].lo

    def end(j):
        if j == 0:
            return Bound(SRC, True)
        if j == k + 1:
            return Bound(TGT, True)
        return cells[j - 1].hi

    return {ThreadInterval(arrow, start(i), end(j)): n for (i, j), n in elder_barcode(dims, maps).items()}


@given(seeds)
def test_barcode_matches_elder_rule_oracle(seed):
    rng = random.Random(seed)
    m = random_pwf(a2(), rng, max_dim=4, max_breaks=6)
    assert dict(barcode(m, "a")) == oracle_bars(m, "a")


@given(seeds)
def test_barcode_dimensions_add_up(seed):
    rng = random.Random(seed)
    q = a2()
    m = random_pwf(q, rng, max_dim=3, max_breaks=4)
    bars = barcode(m, "a")
    model = q.arrow("a").model
    for k in range(1, 24):
        pos = Fraction(k, 24)
        covered = sum(n for iv, n in bars
                      if (iv.lo.pos == SRC or iv.lo.pos != TGT and (iv.lo.pos < pos or iv.lo.pos == pos and iv.lo.closed))
                      and (iv.hi.pos == TGT or iv.hi.pos != SRC and (pos < iv.hi.pos or pos == iv.hi.pos and iv.hi.closed)))
        assert covered == m.eval(Inner("a", pos)), model


def test_noise_split_separates_the_parts():
    q = a2()
    a = q.arrow("a")
    noise = interval_module(q, FLD, make_interval(a, (Fraction(1, 4), True), (Fraction(1, 2), False)))
    free = interval_module(q, FLD, make_interval(a, (SRC, True), (Fraction(3, 4), True)))
    nf, bars = noise_split(direct_sum(free, noise))
    assert bars == [(make_interval(a, (Fraction(1, 4), True), (Fraction(1, 2), False)), 1)]
    assert nf.normalized() == free.normalized()


def test_simple_modules_at_inner_points_are_noise():
    q = a2()
    _, bars = noise_split(simple_module(q, FLD, Inner("a", Fraction(1, 2))))
    assert len(bars) == 1
    _, bars = noise_split(simple_module(q, FLD, Vertex("0")))
    assert bars == []


@given(seeds)
def test_krs_summands_are_local_and_add_up(seed):
    rng = random.Random(seed)
    bq = BoundQuiver(["a", "b", "c", "d"], {"x": ("a", "b"), "y": ("c", "b"), "z": ("b", "d")})
    x = random_finite(bq, rng, 3)
    parts = krs(x, seed)
    for p in parts:
        assert is_local(end_algebra(p)[0])
    for v in bq.vertices:
        assert sum(p.dims[v] for p in parts) == x.dims[v]


@given(seeds)
def test_canonical_decomposition_ignores_the_seed(seed):
    rng = random.Random(seed)
    bq = BoundQuiver(["a", "b", "c"], {"x": ("a", "b"), "y": ("b", "c")})
    x = random_finite(bq, rng, 3, density=0.4)
    a, b = canonical_krs(x, 0), canonical_krs(x, seed + 1)
    assert [(c.key, c.multiplicity) for c in a] == [(c.key, c.multiplicity) for c in b]


def test_staircase_decomposition():
    m = fixture("d4_staircase").module("M")
    res = decompose(m)
    assert res.noise == []
    assert len(res.partition.labels()) == 8
    assert [(s.key[1], s.multiplicity) for s in res.summands] == [
        ((0, 1, 0, 0, 0, 1, 1, 0), 1),
        ((1, 1, 1, 1, 1, 1, 1, 1), 1),
    ]
    double = decompose(direct_sum(m, m))
    assert [s.multiplicity for s in double.summands] == [2, 2]


def test_kronecker_rotation_splits_over_an_extension():
    f = PrimeField(7)
    bq = BoundQuiver(["a", "b"], {"t": ("a", "b"), "u": ("a", "b")})
    x = FiniteQuiverRep(bq, f, {"a": 2, "b": 2},
                        {"t": Matrix.identity(f, 2), "u": Matrix.from_ints(f, [[0, -1], [1, 0]])})
    parts = krs(x)
    assert len(parts) == 2
    assert all(p.field != f and p.total_dim == 2 for p in parts)


def test_svg_is_deterministic_and_marks_endpoints():
    q = a2()
    m = interval_module(q, FLD, make_interval(q.arrow("a"), (Fraction(1, 2), False), (TGT, True)))
    bars = barcode(m, "a")
    svg = barcode_svg(bars, q.arrow("a").model, "demo")
    assert svg == barcode_svg(bars, q.arrow("a").model, "demo")
    assert svg.count("<circle") == 2
    assert 'fill="white"' in svg and 'fill="black"' in svg
