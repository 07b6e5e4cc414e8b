import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from sympy_oracle import from_sympy, q, to_sympy, x, y
from twistkit import _kernels_py, kernels
from twistkit.errors import NoSolution, NonMonicModulus, NotDivisible
from twistkit.ring import (
    MonicQuotRing,
    MPoly,
    Poly,
    SeriesTrunc,
    divisors,
    exact_div_int,
    finite_field,
    linear_solve_mod,
    mobius,
    poly_rem_monic,
    q_int,
)

ints = st.integers(-50, 50)
coeff_lists = st.lists(ints, min_size=0, max_size=12)
monic = st.lists(ints, min_size=0, max_size=5).map(lambda c: Poly(c + [1], "q"))
fracs = st.fractions(min_value=-20, max_value=20, max_denominator=9)


@given(coeff_lists, coeff_lists)
def test_ring_ops_match_sympy(a, b):
    f, g = Poly(a, "q"), Poly(b, "q")
    assert to_sympy(f + g) == sympy.expand(to_sympy(f) + to_sympy(g))
    assert to_sympy(f - g) == sympy.expand(to_sympy(f) - to_sympy(g))
    assert to_sympy(f * g) == sympy.expand(to_sympy(f) * to_sympy(g))


@given(st.lists(fracs, max_size=6), st.lists(fracs, max_size=6))
def test_rational_product_matches_sympy(a, b):
    f, g = Poly(a, "q"), Poly(b, "q")
    assert to_sympy(f * g) == sympy.expand(to_sympy(f) * to_sympy(g))


def test_large_product_matches_sympy():
    rng = random.Random(3)
    f = Poly([rng.randint(-10 ** 9, 10 ** 9) for _ in range(200)], "q")
    g = Poly([rng.randint(-10 ** 9, 10 ** 9) for _ in range(150)], "q")
    assert to_sympy(f * g) == sympy.expand(to_sympy(f) * to_sympy(g))


@given(coeff_lists, monic)
def test_rem_monic_matches_sympy(a, g):
    f = Poly(a, "q")
    _, r = sympy.div(to_sympy(f), to_sympy(g), q)
    assert poly_rem_monic(f, g) == from_sympy(r)


@given(coeff_lists, coeff_lists, monic)
def test_rem_is_a_ring_map(a, b, m):
    f, g = Poly(a, "q"), Poly(b, "q")
    assert poly_rem_monic(f + g, m) == poly_rem_monic(f, m) + poly_rem_monic(g, m)
    assert poly_rem_monic(f * g, m) == poly_rem_monic(poly_rem_monic(f, m) * poly_rem_monic(g, m), m)


def test_rem_examples():
    assert poly_rem_monic(Poly.gen("q") ** 3, Poly([1, 1])) == Poly.const(-1)
    assert poly_rem_monic(Poly.gen("q") ** 6 - 1, Poly([1, -1, 1])).is_zero()
    # (4)_q = (2)_q (2)_{q^2}, so the remainder vanishes
    assert poly_rem_monic(q_int(4), q_int(2)).is_zero()
    _, r = sympy.div(1 + q + q ** 2 + q ** 3, 1 + q, q)
    assert r == 0


def test_non_monic_modulus():
    with pytest.raises(NonMonicModulus):
        poly_rem_monic(Poly([1, 2, 3]), Poly([1, 2]))


def test_exact_div_int():
    assert exact_div_int(Poly([4, 2]), 2) == Poly([2, 1])
    f = q_int(2) ** 2 - 2 * q_int(2)
    assert exact_div_int(f, 1) == f
    with pytest.raises(NotDivisible) as exc:
        exact_div_int(Poly([2, 3, 4]), 2)
    assert exc.value.degree == 1


@given(st.integers(1, 30))
def test_q_int_matches_sympy(n):
    assert to_sympy(q_int(n)) == sympy.expand(sympy.cancel((q ** n - 1) / (q - 1)))


def test_mobius_and_divisors():
    assert [mobius(n) for n in (1, 6, 12)] == [1, 1, 0]
    for n in range(1, 40):
        assert mobius(n) == sympy.mobius(n)
        assert list(divisors(n)) == sympy.divisors(n)
    with pytest.raises(ValueError):
        mobius(0)


def test_linear_solve_mod():
    assert linear_solve_mod([[1, 0], [0, 1]], [3, 5], 2, 4) == [3, 5]
    (sol,) = linear_solve_mod([[2]], [2], 2, 3)
    assert (2 * sol - 2) % 8 == 0
    with pytest.raises(NoSolution):
        linear_solve_mod([[2]], [1], 2, 3)


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 3), ints), max_size=10), monic)
def test_mpoly_rem_monic_in_matches_sympy(terms, m):
    names = ("q", "x", "y")
    f = MPoly.const(0, names)
    for a, b, c, k in terms:
        f = f + MPoly.var(0, names) ** a * MPoly.var(1, names) ** b * MPoly.var(2, names) ** c * k
    got = f.rem_monic_in(0, m)
    want = sympy.rem(sympy.Poly(to_sympy(f), q), sympy.Poly(to_sympy(m), q)).as_expr()
    assert to_sympy(got) == sympy.expand(want)


def test_mpoly_rem_needs_repeated_reduction():
    # (1 - q^3) y^3 reduces to 0 modulo q - 1 only after reducing freshly created terms
    names = ("q", "x", "y")
    f = (MPoly.const(1, names) - MPoly.var(0, names) ** 3) * MPoly.var(2, names) ** 3
    assert f.rem_monic_in(0, Poly([-1, 1])).is_zero()


@given(coeff_lists, coeff_lists, monic, st.sampled_from([None, 2, 9]))
def test_quotient_ring_matches_sympy(a, b, m, mod):
    R = MonicQuotRing(m, coeff_mod=mod)
    f, g = R(Poly(a, "q")), R(Poly(b, "q"))
    want = sympy.rem(sympy.Poly(to_sympy(Poly(a, "q") * Poly(b, "q")), q), sympy.Poly(to_sympy(m), q))
    want = from_sympy(want.as_expr())
    if mod:
        want = want.map_coeffs(lambda c: c % mod)
    assert (f * g).rep == want


def test_finite_field():
    F2 = finite_field(2)
    assert F2.one + F2.one == F2.zero
    assert finite_field(5)(7) == finite_field(5)(2)


def test_series_inverse_matches_sympy():
    s = SeriesTrunc([1, 2, -3, 5], 10, "u")
    inv = s.inverse()
    u = sympy.Symbol("u")
    want = sympy.series(1 / (1 + 2 * u - 3 * u ** 2 + 5 * u ** 3), u, 0, 10).removeO()
    assert sum(Fraction(c) * u ** i for i, c in enumerate(inv.c)) == sympy.expand(want)


@given(st.lists(st.integers(-10 ** 12, 10 ** 12), max_size=80), st.lists(st.integers(-10 ** 12, 10 ** 12), max_size=80))
def test_kernel_backends_agree(a, b):
    assert kernels.dense_mul(a, b) == _kernels_py.dense_mul(a, b)


@given(st.integers(1, 14))
def test_necklace_count(L):
    # number of binary necklaces of length L, by Burnside's lemma
    want = sum(sympy.totient(d) * 2 ** (L // d) for d in sympy.divisors(L)) // L
    got = kernels.binary_necklaces(L)
    assert len(got) == want
    assert got == _kernels_py.binary_necklaces(L)


def test_canonical_rotation_backends_agree():
    for code in range(1 << 10):
        assert kernels.canonical_rotation(code, 10) == _kernels_py.canonical_rotation(code, 10)
