import random

import pytest

from twistkit import prism as P
from twistkit import sandwich as S
from twistkit.errors import NoWitnessFound
from twistkit.ring import Poly, iverson, pos
from twistkit.witt import WittVector

CASES = [(model, p) for model in P.MODELS for p in (2, 3)]
PAIRS = [(1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (1, 2)]


@pytest.fixture(scope="module")
def contexts():
    out = {}
    for model, p in CASES:
        pres = P.PrismPresentation(model, p)
        for m, n in PAIRS:
            out[(model, p, m, n)] = S.SandwichContext(pres, m, n)
    return out


def test_bookkeeping_helpers():
    assert [pos(x) for x in (-2, 0, 3)] == [0, 0, 3]
    assert (iverson(True), iverson(False)) == (1, 0)


@pytest.mark.parametrize("model,p", CASES)
def test_c_at_n_zero_is_the_shifted_ghost(model, p, contexts):
    ctx = contexts[(model, p, 1, 0)]
    pres = ctx.pres
    a = ctx.random_source(random.Random(p))
    w0, w1 = (c.rep for c in a.to_ghost().coords)
    tc = pres.to_transversal(ctx.comparison_c(a), 1)
    assert tc.components == (pres.component(0)(w1), pres.component(1)(pres.phi(w0)))


@pytest.mark.parametrize("model,p", CASES)
@pytest.mark.parametrize("m,n", PAIRS)
def test_c_ghost_equals_c_witt(model, p, m, n, contexts):
    ctx = contexts[(model, p, m, n)]
    rng = random.Random(f"{model}{p}{m}{n}")
    for _ in range(4):
        a = ctx.random_source(rng)
        assert ctx.comparison_c(a) == ctx.comparison_c_witt(a)
        assert S.representative_independence_check(ctx, a, rng)
    zero = WittVector.zero(ctx.source_base, ctx.trunc)
    assert ctx.comparison_c(zero).is_zero()


@pytest.mark.parametrize("model,p", CASES)
def test_teichmuller_goes_to_the_norm_lift(model, p, contexts):
    for m, n in ((1, 0), (1, 1), (2, 0)):
        ctx = contexts[(model, p, m, n)]
        pres = ctx.pres
        rng = random.Random(m * 10 + n)
        f = ctx.source_base.random_element(rng).rep
        x = ctx.source_vector([f] + [0] * m)
        assert ctx.comparison_c(x) == ctx.middle(pres.lift_N(f, m, n))


@pytest.mark.parametrize("model,p", CASES)
def test_first_prismatic_ghost(model, p, contexts):
    ctx = contexts[(model, p, 1, 1)]
    pres = ctx.pres
    b0, b1 = Poly([1, 2], pres.var), Poly([-3, 1], pres.var)
    assert ctx.prismatic_ghost_rep([b0, b1]) == pres.phi(b0) + pres.pi(2) * b1


@pytest.mark.parametrize("model,p", CASES)
@pytest.mark.parametrize("m,n", PAIRS)
def test_epsilon_closed_form_and_vanishing(model, p, m, n, contexts):
    ctx = contexts[(model, p, m, n)]
    rng = random.Random(f"eps{model}{p}{m}{n}")
    for _ in range(2):
        a = ctx.random_source(rng)
        assert ctx.epsilon_check(a)
        v = ctx.vanish_checks(a, ctx.pres.random_ambient(rng, 2, 2))
        assert v["last_coordinate"] and v["delta_image"]
        assert v["n_zero"] is (True if n == 0 else None)


@pytest.mark.parametrize("model,p", CASES)
def test_epsilon_one(model, p, contexts):
    ctx = contexts[(model, p, 1, 1)]
    pres = ctx.pres
    a = ctx.random_source(random.Random(7))
    a0, a1 = (c.rep for c in a.coords)
    want = ctx.target_base(pres.lift_V(a1 - pres.theta(a0, 1), 1, 1))
    assert ctx.epsilon(a) == [want, ctx.target_base.zero]


@pytest.mark.parametrize("model,p", CASES)
@pytest.mark.parametrize("m,n", [(1, 0), (1, 1), (2, 1)])
def test_composite_and_perturbation(model, p, m, n, contexts):
    ctx = contexts[(model, p, m, n)]
    rng = random.Random(f"cor{model}{p}{m}{n}")
    for _ in range(2):
        x = ctx.random_middle(rng)
        assert ctx.composite_check(x)
        assert S.perturbation_check(ctx, x, rng)


def test_rank_one_delta_bullet(contexts):
    ctx = contexts[("q-de-rham", 2, 2, 1)]
    qq = Poly.gen("q")
    assert ctx.delta_bullet_quotient(qq).coords == (ctx.target_base(qq), ctx.target_base.zero, ctx.target_base.zero)


@pytest.mark.parametrize("model,p", CASES)
def test_delta_ideal(model, p):
    pres = P.PrismPresentation(model, p)
    rng = random.Random(1)
    for n in (1, 2):
        for k in range(1, n + 1):
            assert S.delta_ideal_check(pres, k, n, pres.random_ambient(rng, 1, 2))


@pytest.mark.parametrize("model,p", [("q-de-rham", 2), ("eisenstein", 2)])
def test_tambara_compatibility(model, p, contexts):
    rng = random.Random(3)
    for m, n in ((1, 0), (1, 1), (0, 1)):
        ctx = contexts[(model, p, m, n)]
        a = ctx.random_source(rng)
        assert ctx.commutes_with_F(a) and ctx.commutes_with_V(a) and ctx.commutes_with_N(a)


def test_ladder(contexts):
    ctx = contexts[("q-de-rham", 2, 1, 1)]
    assert ctx.ladder_check(ctx.random_source(random.Random(0)), 2)


def test_trace_for_m_two(contexts):
    rows = contexts[("q-de-rham", 2, 2, 0)].comparison_c_witt_trace()
    assert rows[0] == ["a_0^{\\phi^2}", "-V\\theta_1(a_0)^\\phi", "-V^2\\theta_2(a_0)"]
    assert rows[2] == ["V^2a_2"]


@pytest.mark.parametrize("model", P.MODELS)
def test_epsilon_witness_exists(model):
    w = S.find_epsilon_witness(P.PrismPresentation(model, 2), 1, 1, random.Random(0))
    assert any(e != "0" for e in w["epsilon"])


def test_no_witness_at_n_zero():
    with pytest.raises(NoWitnessFound):
        S.find_epsilon_witness(P.PrismPresentation("q-de-rham", 2), 1, 0, random.Random(0), samples=5)
