import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from threadrep.errors import ExtendField
from threadrep.exactla import (ExtensionField, FiniteAlgebra, Matrix, PrimeField, RationalField,
                               field_from_spec, is_local, radical, rref, solve, split_idempotent)
from threadrep.polynomial import factor

F = PrimeField(32003)
Q = RationalField()

small = st.integers(min_value=-5, max_value=5)


def mats(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(lambda c: mats(r, c))))
def test_rank_matches_sympy_over_rationals(rows):
    m = Matrix(Q, [[Fraction(x) for x in r] for r in rows])
    assert m.rank() == sympy.Matrix(rows).rank()


@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(lambda c: mats(r, c))))
def test_rank_plus_nullity(rows):
    m = Matrix.from_ints(F, rows)
    res = rref(m)
    assert res.rank + res.kernel.ncols == m.ncols
    assert (m @ res.kernel).is_zero()


@given(mats(4, 4))
def test_prime_rank_equals_rational_rank_for_small_entries(rows):
    # entries are tiny, so no minor of a 4x4 matrix is divisible by 32003 unless it vanishes
    assert Matrix.from_ints(F, rows).rank() == Matrix(Q, [[Fraction(x) for x in r] for r in rows]).rank()


def test_inverse_and_solve():
    m = Matrix.from_ints(F, [[2, 1], [1, 1]])
    assert m @ m.inverse() == Matrix.identity(F, 2)
    x = solve(m, (3, 2))
    assert m @ Matrix.from_columns(F, [x], 2) == Matrix.from_ints(F, [[3], [2]])
    singular = Matrix.from_ints(F, [[1, 1], [1, 1]])
    assert solve(singular, (1, 0)) is None


def test_field_from_spec():
    assert field_from_spec(None) == PrimeField(32003)
    assert field_from_spec("Q") == RationalField()
    assert field_from_spec("7") == PrimeField(7)
    with pytest.raises(ValueError):
        PrimeField(12)


def test_extension_field_arithmetic():
    # x^2 + 1 is irreducible mod 7
    k = ExtensionField(7, [1, 0, 1])
    i = k.generator()
    assert k.mul(i, i) == k.from_int(-1)
    assert k.mul(i, k.inv(i)) == k.one


def test_factor_finite_field_matches_sympy():
    rng = random.Random(3)
    f = PrimeField(101)
    for _ in range(10):
        coeffs = [rng.randrange(101) for _ in range(5)] + [1]
        facs = factor(f, coeffs)
        expected = sympy.factor_list(sympy.Poly(list(reversed(coeffs)), sympy.Symbol("x"), modulus=101))[1]
        assert sorted(len(g) - 1 for g, e in facs for _ in range(e)) == \
            sorted(p.degree() for p, e in expected for _ in range(e))


def test_matrix_algebra_radical_of_upper_triangular():
    e11 = Matrix.from_ints(F, [[1, 0], [0, 0]])
    e22 = Matrix.from_ints(F, [[0, 0], [0, 1]])
    e12 = Matrix.from_ints(F, [[0, 1], [0, 0]])
    alg = FiniteAlgebra.from_matrices(F, [e11, e22, e12])
    assert len(radical(alg)) == 1
    assert not is_local(alg)
    e = split_idempotent(alg)
    assert alg.is_idempotent(e) and not alg.is_zero(e) and e != alg.unit


def test_local_algebra_dual_numbers():
    one = Matrix.identity(F, 2)
    n = Matrix.from_ints(F, [[0, 1], [0, 0]])
    alg = FiniteAlgebra.from_matrices(F, [one, n])
    assert is_local(alg)
    assert split_idempotent(alg) is None


def test_field_extension_requested_for_irreducible_rotation():
    # k[x]/(x^2+1) with 7 = 3 mod 4 is a field of degree 2
    f = PrimeField(7)
    one = Matrix.identity(f, 2)
    j = Matrix.from_ints(f, [[0, -1], [1, 0]])
    alg = FiniteAlgebra.from_matrices(f, [one, j])
    with pytest.raises(ExtendField) as exc:
        split_idempotent(alg)
    assert exc.value.degree == 2
    loc = is_local(alg)
    assert loc
