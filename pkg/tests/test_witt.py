import json
import random
from math import gcd

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from twistkit.delta import DeltaRing
from twistkit.errors import NotInGhostImage
from twistkit.ring import ZZ, Poly, PolyRing, divisors, finite_field
from twistkit.witt import (
    F_int,
    F_p,
    N_int,
    N_p,
    TruncSet,
    UniversalCache,
    V_int,
    V_p,
    WittVector,
    _eval_all,
    additive_order,
    brun_check,
    delta_bullet_witt,
    norm_identity_check,
    norm_theta_check,
    universal_theta,
    witt_delta,
    witt_theta,
)


def sympy_ghost(coords, p):
    """w_n = sum_i p^i a_i^(p^(n-i)), written out independently of the package."""
    return [sum(p ** i * sympy.Integer(coords[i]) ** (p ** (n - i)) for i in range(n + 1)) for n in range(len(coords))]


def sympy_unghost(ghosts, p):
    a = []
    for n, w in enumerate(ghosts):
        rest = w - sum(p ** i * a[i] ** (p ** (n - i)) for i in range(n))
        q, r = divmod(int(rest), p ** n)
        assert r == 0
        a.append(q)
    return a


def witt_strategy(p, n, lo=-6, hi=6):
    return st.lists(st.integers(lo, hi), min_size=n + 1, max_size=n + 1).map(
        lambda c: WittVector(ZZ, TruncSet.p_typical(p, n), c)
    )


pn = st.sampled_from([(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])


def test_ghost_examples():
    w = WittVector(ZZ, TruncSet.p_typical(2, 1), [3, 5])
    assert w.to_ghost().coords == (3, 19)
    assert WittVector(ZZ, TruncSet.p_typical(2, 1), [3, 19], "ghost").to_witt().coords == (3, 5)
    assert WittVector(ZZ, TruncSet.p_typical(2, 1), [0, 2], "ghost").to_witt().coords == (0, 1)
    assert WittVector(ZZ, TruncSet.p_typical(2, 1), [1, 1], "ghost").to_witt().coords == (1, 0)
    one = WittVector(ZZ, TruncSet.divisors_of(6), [1, 0, 0, 0])
    assert one.to_ghost().coords == (1, 1, 1, 1)
    with pytest.raises(NotInGhostImage):
        WittVector(ZZ, TruncSet.p_typical(2, 1), [0, 1], "ghost").to_witt()


@given(pn.flatmap(lambda t: st.tuples(st.just(t[0]), witt_strategy(*t), witt_strategy(*t))))
def test_arithmetic_against_sympy_ghost(args):
    p, x, y = args
    gx, gy = sympy_ghost(x.coords, p), sympy_ghost(y.coords, p)
    assert list((x + y).coords) == sympy_unghost([a + b for a, b in zip(gx, gy)], p)
    assert list((x * y).coords) == sympy_unghost([a * b for a, b in zip(gx, gy)], p)
    assert list((-x).coords) == sympy_unghost([-a for a in gx], p)


@given(pn.flatmap(lambda t: st.tuples(witt_strategy(*t), witt_strategy(*t), witt_strategy(*t))))
def test_ring_axioms_in_witt_coordinates(xyz):
    x, y, z = xyz
    assert ((x + y) + z).coords == (x + (y + z)).coords
    assert (x * (y + z)).coords == (x * y + x * z).coords
    assert ((x * y) * z).coords == (x * (y * z)).coords
    assert (x * y).coords == (y * x).coords
    assert (x + (-x)).coords == WittVector.zero(ZZ, x.trunc).coords
    assert (x * WittVector.one(ZZ, x.trunc)).coords == x.coords


@given(st.sampled_from([2, 3]), st.integers(1, 2), st.data())
def test_torsion_base_agrees_with_reduction(p, n, data):
    # universal polynomials over F_p agree with Z-arithmetic reduced mod p
    x = data.draw(witt_strategy(p, n))
    y = data.draw(witt_strategy(p, n))
    Fp = finite_field(p)
    red = lambda w: WittVector(Fp, w.trunc, [Fp(c) for c in w.coords])  # noqa: E731
    assert (red(x) + red(y)).coords == red(x + y).coords
    assert (red(x) * red(y)).coords == red(x * y).coords


def test_f2_has_order_four():
    F2 = finite_field(2)
    x = WittVector(F2, TruncSet.p_typical(2, 1), [F2.one, F2.zero])
    assert additive_order(x) == 4
    assert additive_order(WittVector(finite_field(3), TruncSet.p_typical(3, 1), [1, 0])) == 9


@pytest.mark.parametrize("p", [2, 3, 5])
def test_burnside_relation(p):
    one = WittVector.one(ZZ, TruncSet.divisors_of(1))
    x = V_int(p, 1, one)
    assert (x * x).to_witt().coords == (x * p).to_witt().coords
    # p-typically V(1)^2 = p V(1) in W_1(Z)
    v = V_p(WittVector.one(ZZ, TruncSet.p_typical(p, 0)))
    assert (v * v).coords == (v * p).coords


@given(pn.flatmap(lambda t: st.tuples(st.just(t[0]), witt_strategy(*t))))
def test_p_typical_F_V_N(args):
    p, x = args
    n = x.trunc.levels
    r = x.restrict(n - 1)
    assert F_p(V_p(r)).coords == (r * p).coords
    assert F_p(N_p(r)).coords == (r ** p).coords
    assert (N_p(r) - x).coords[0] == 0
    assert norm_identity_check(x)
    y = WittVector(ZZ, r.trunc, [c + 1 for c in r.coords])
    assert N_p(r * y).coords == (N_p(r) * N_p(y)).coords


def test_V_ghost_formula():
    x = WittVector(ZZ, TruncSet.p_typical(3, 0), [2])
    assert V_p(x).to_ghost().coords == (0, 6)


@given(st.integers(1, 4), st.data())
def test_norm_identity_over_polynomials(n, data):
    coeffs = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=n + 1, max_size=n + 1))
    R = PolyRing("u")
    x = WittVector(R, TruncSet.p_typical(2, n), [Poly(c, "u") for c in coeffs])
    assert norm_identity_check(x)


@given(st.integers(-4, 4), st.sampled_from([2, 3]), st.integers(0, 3))
def test_norm_theta(f, p, n):
    assert norm_theta_check(DeltaRing.integers(p), f, n)


def test_theta_universal_route_matches_ghost_route():
    # over Z both the universal polynomial and the ghost route are available
    rng = random.Random(5)
    for p, n in ((2, 2), (3, 1), (2, 3)):
        t = TruncSet.p_typical(p, n)
        for _ in range(4):
            x = WittVector(ZZ, t, [rng.randint(-4, 4) for _ in range(n + 1)])
            for i in range(1, 3):
                universal = _eval_all(universal_theta(t, i), [x.coords], ZZ)
                assert universal == witt_theta(x, i).coords


def test_delta_bullet_witt():
    assert delta_bullet_witt(DeltaRing.integers(2), 3, 2).coords == (3, -3, -24)
    R = DeltaRing.polynomials(2)
    qq = Poly.gen("q")
    assert delta_bullet_witt(R, qq, 3).coords == (qq, 0, 0, 0)
    f = Poly([1, 2, -1], "q")
    w = delta_bullet_witt(R, f, 2)
    assert w.to_ghost().coords == (f, R.phi(f), R.phi(R.phi(f)))
    assert witt_delta(w).coords == delta_bullet_witt(R, R.delta(f), 1).coords


@given(pn.flatmap(lambda t: witt_strategy(t[0], min(t[1], 2))))
def test_brun_decomposition(x):
    assert brun_check(x)


def big_witt(n, rng):
    t = TruncSet.divisors_of(n)
    return WittVector(ZZ, t, [rng.randint(-3, 3) for _ in t.indices])


def test_big_witt_ghost_formulas():
    x = WittVector(ZZ, TruncSet.divisors_of(2), [1, 2], "ghost")
    # V^(mn)_n carries the factor m on ghost components
    assert V_int(3, 2, x).coords == (0, 0, 3, 6)
    assert N_int(3, 2, x).coords == (1, 2, 1, 8)
    assert F_int(3, 2, V_int(3, 2, x)).coords == (3, 6)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6])
def test_big_witt_tambara_identities(m):
    rng = random.Random(m)
    for a in divisors(m):
        for b in divisors(m):
            g = gcd(a, b)
            l = a * b // g
            for _ in range(3):
                x = big_witt(a, rng)
                lhs = F_int(m // b, b, V_int(m // a, a, x))
                rhs = V_int(b // g, g, F_int(a // g, g, x)) * (m // l)
                assert lhs == rhs
                lhs = F_int(m // b, b, N_int(m // a, a, x))
                rhs = N_int(b // g, g, F_int(a // g, g, x)) ** (m // l)
                assert lhs == rhs


def test_universal_cache_round_trip(tmp_path):
    path = tmp_path / "cache.json"
    cache = UniversalCache(str(path))
    t = TruncSet.p_typical(2, 2)
    built = cache.get("theta1", t, lambda: universal_theta(t, 1))
    again = UniversalCache(str(path)).get("theta1", t, lambda: pytest.fail("should load from disk"))
    assert again == built
    json.loads(path.read_text())
