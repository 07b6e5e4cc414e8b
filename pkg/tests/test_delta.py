import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistkit.delta import DeltaRing, LambdaContext
from twistkit.errors import NotDivisible, UnsupportedVartheta
from twistkit.ring import Poly, q_int

small_polys = st.lists(st.integers(-4, 4), min_size=1, max_size=4).map(lambda c: Poly(c, "q"))
primes = st.sampled_from([2, 3, 5])


def test_solved_values_in_integers():
    R = DeltaRing.integers(2)
    assert R.delta(3) == -3
    assert R.delta_bullet(3, 2) == [3, -3, -24]
    assert R.theta(3, 1) == -3
    assert R.theta(3, 2) == -18
    assert R.delta(9) == -36
    assert R.phi_n_expand_check(3, 2)
    assert R.delta_theta_check(3, 2)
    assert R.delta_power_identity_check(3, 1)


def test_rank_one_is_delta_trivial():
    for p in (2, 3):
        R = DeltaRing.polynomials(p)
        qq = Poly.gen("q")
        assert R.delta(qq).is_zero()
        assert all(R.theta(qq, i).is_zero() for i in range(1, 4))
        assert R.phi_n_expand_check(qq, 3)


def test_not_a_frobenius_lift():
    R = DeltaRing(2, lambda f: f + 1)
    with pytest.raises(NotDivisible):
        R.delta(Poly([0, 1], "q"))


@given(small_polys, primes)
def test_frobenius_lift_law(f, p):
    R = DeltaRing.polynomials(p)
    assert R.frobenius_lift_check(f)
    assert R.phi(f) == f ** p + p * R.delta(f)


@given(small_polys, small_polys, primes)
def test_delta_of_product(f, g, p):
    R = DeltaRing.polynomials(p)
    assert R.delta(f * g) == R.phi(f) * R.delta(g) + R.delta(f) * g ** p
    assert R.delta_product_check(f, g)


@given(small_polys, st.sampled_from([2, 3]), st.integers(0, 3))
def test_theta_and_delta_identities(f, p, n):
    R = DeltaRing.polynomials(p)
    assert R.phi_n_expand_check(f, n)
    assert R.delta_power_identity_check(f, n)
    if n >= 1:
        assert R.delta_theta_check(f, n)
        assert R.theta(f, 1) == R.delta(f)


@given(small_polys, st.sampled_from([2, 3]), st.integers(1, 3))
def test_delta_bullet_ghost_components(f, p, n):
    R = DeltaRing.polynomials(p)
    a = R.delta_bullet(f, n)
    phi_k = f
    for k in range(n + 1):
        ghost = sum((p ** i * a[i] ** (p ** (k - i)) for i in range(k + 1)), Poly.const(0, "q"))
        assert ghost == phi_k
        phi_k = R.phi(phi_k)


@given(small_polys)
def test_cache_is_invisible(f):
    a, b = DeltaRing.polynomials(3), DeltaRing.polynomials(3, cache=False)
    assert a.delta_bullet(f, 2) == b.delta_bullet(f, 2) == a.delta_bullet(f, 2)


def test_vartheta_values():
    L = LambdaContext.integers()
    assert L.vartheta(3, 2) == -3
    assert L.vartheta(3, 3) == -8
    # 3 = 3^6 + 2 vartheta_2 + 3 vartheta_3 + 6 vartheta_6 in Z with psi = id
    assert L.vartheta(3, 6) == -116
    assert 3 ** 6 + 2 * (-3) + 3 * (-8) + 6 * (-116) == 3


@given(small_polys, st.sampled_from([(2, 1), (2, 2), (3, 1), (2, 3)]))
def test_vartheta_prime_power_is_theta(f, pr):
    p, r = pr
    L = LambdaContext.polynomials()
    assert L.vartheta(f, p ** r) == L.delta_ring(p).theta(f, r)


@given(small_polys, st.sampled_from([(m, n) for mn in (4, 8, 9, 6, 10, 15) for m in range(1, mn + 1) if mn % m == 0 for n in [mn // m]]))
def test_vartheta_power_identity(f, mn):
    m, n = mn
    assert LambdaContext.polynomials().vartheta_power_identity_check(f, m, n)


@given(small_polys, st.sampled_from([(2, 2), (2, 3), (3, 2), (2, 5)]))
def test_vartheta_factorization_consistency(f, mn):
    # the (mn, 1) instance follows from (m, n) and (n, 1)
    m, n = mn
    L = LambdaContext.polynomials()
    assert L.vartheta_power_identity_check(f, m * n, 1)
    assert L.vartheta_power_identity_check(f, m, n) and L.vartheta_power_identity_check(f, n, 1)


def test_vartheta_twelve_unsupported():
    L = LambdaContext.polynomials()
    with pytest.raises(UnsupportedVartheta):
        L.vartheta(q_int(2), 12)
    for m, n in ((12, 1), (4, 3), (6, 2), (3, 4)):
        with pytest.raises(UnsupportedVartheta):
            L.vartheta_power_identity_check(Poly([1, 1], "q"), m, n)
    assert L.vartheta_power_identity_check(Poly([1, 1], "q"), 1, 12)


def test_psi_composition():
    L = LambdaContext.polynomials()
    f = Poly([2, -1, 3], "q")
    assert L.psi(1, f) == f
    assert L.psi(2, L.psi(3, f)) == L.psi(6, f)
