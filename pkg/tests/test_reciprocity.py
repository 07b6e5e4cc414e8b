import itertools
import random
from collections import Counter

import pytest
import sympy
from sympy.utilities.iterables import necklaces

from twistkit import gns as G
from twistkit import prism as P
from twistkit import reciprocity as RC
from twistkit.suites import WORKED_EXAMPLES, normalize_render


def brute_sum_terms(m, k):
    """(stabilizer order, letter counts) for every orbit of C_(m/k) on words in {x, y}."""
    L = m // k
    out = Counter()
    for neck in necklaces(L, 2):
        word = "".join("xy"[i] for i in neck)
        P_ = next(P_ for P_ in range(1, L + 1) if L % P_ == 0 and word == word[P_:] + word[:P_])
        out[(k * (L // P_), Counter(word[:P_])["x"], Counter(word[:P_])["y"])] += 1
    return out


def brute_transfer_orbits(m, n, k):
    """Orbit count and stabilizer multiset of choice sets by direct enumeration."""
    L, c = m // k, m // n
    sets = set()
    for js in itertools.product(range(n // k), repeat=c):
        sets.add(frozenset(r + c * j for r, j in enumerate(js)))
    seen, stabs = set(), Counter()
    for s in sets:
        if s in seen:
            continue
        orbit = {frozenset((e + i) % L for e in s) for i in range(L)}
        seen |= orbit
        stabs[k * (L // len(orbit))] += 1
    return stabs


def rule_terms(expr):
    out = Counter()
    for t in expr.terms:
        letters = Counter(t.word.letters)
        out[(t.target, letters["x"], letters["y"])] += t.multiplicity
    return out


@pytest.mark.parametrize("m,k", RC.GOLDEN_SUM_RULES)
def test_sum_rules_match_brute_force(m, k):
    assert rule_terms(RC.generate_sum_rule(m, k)) == brute_sum_terms(m, k)


@pytest.mark.parametrize("m,n,k", RC.GOLDEN_TRANSFER_RULES)
def test_transfer_rules_match_brute_force(m, n, k):
    expr = RC.generate_transfer_rule(m, n, k)
    assert Counter(t.target for t in expr.terms for _ in range(t.multiplicity)) == brute_transfer_orbits(m, n, k)


def test_worked_examples():
    rules = {RC.golden_name(e): e for e in RC.golden_rules()}
    for name, want in WORKED_EXAMPLES.items():
        assert normalize_render(rules[name].render()) == normalize_render(want)
    # 6 = 4 + 2: the middle binomial coefficient splits into a free orbit and a C_2-stable one
    middle = [t for t in rules["sum_4_0_1.json"].terms if Counter(t.word.letters) in (Counter("xxyy"), Counter("xy"))]
    assert sorted(len(t.word.letters) for t in middle) == [2, 4]


def test_degenerate_rules():
    assert RC.generate_sum_rule(3, 3).render() == "x + y"
    assert RC.generate_transfer_rule(4, 4, 2).render() == "V^4_2(f)"
    assert normalize_render(RC.generate_sum_rule(2, 1).render()) == normalize_render(
        "N^2_1(x) + V^2_1(\\overline{xy}) + N^2_1(y)"
    )


def test_goldens_on_disk_match_generator():
    for expr in RC.golden_rules():
        stored = RC.load_golden(RC.golden_name(expr))
        assert stored.to_json() == expr.to_json()
        assert (RC.golden_dir() / RC.golden_name(expr)).read_text() == expr.to_json()


@pytest.mark.parametrize("expr", RC.golden_rules(), ids=RC.golden_name)
def test_orbit_count_and_trivial_functor(expr):
    assert RC.orbit_count(expr) == RC.expected_orbit_count(expr)
    assert RC.trivial_specialization_check(expr)


@pytest.mark.parametrize("expr", RC.golden_rules(), ids=RC.golden_name)
def test_rules_hold_in_big_witt(expr):
    real = RC.BigWittGhostRealization()
    rng = random.Random(RC.golden_name(expr))
    assert RC.verify_rule(expr, real, RC.sample_values(expr, real, rng, 4))["status"] == "pass"


@pytest.mark.parametrize("expr", RC.golden_rules(), ids=RC.golden_name)
def test_rules_hold_in_gns(expr):
    real = G.GnsRealization(G.builtin_gns("multiplicative"))
    rng = random.Random(RC.golden_name(expr))
    assert RC.verify_rule(expr, real, RC.sample_values(expr, real, rng, 4))["status"] == "pass"


@pytest.mark.parametrize("model", P.MODELS)
def test_rules_hold_in_prism(model):
    real = P.PrismRealization(P.PrismPresentation(model, 2))
    rng = random.Random(model)
    for m, k in ((2, 1), (4, 1), (4, 2), (8, 2)):
        expr = RC.generate_sum_rule(m, k)
        assert RC.verify_rule(expr, real, RC.sample_values(expr, real, rng, 3))["status"] == "pass"
    expr = RC.generate_transfer_rule(4, 2, 1)
    assert RC.verify_rule(expr, real, RC.sample_values(expr, real, rng, 3))["status"] == "pass"


def test_wrong_rule_is_caught():
    expr = RC.generate_sum_rule(4, 1)
    broken = RC.TambaraExpression(expr.top, expr.source, expr.terms[:-1], expr.kind)
    real = RC.BigWittGhostRealization()
    rep = RC.verify_rule(broken, real, RC.sample_values(broken, real, random.Random(0), 3))
    assert rep["status"] == "fail" and "counterexample" in rep


@pytest.mark.parametrize("p", [2, 3, 5])
def test_p_typical_sum_formula(p):
    rng = random.Random(p)
    assert RC.p_typical_sum_check(p, "i", rng)
    assert not RC.p_typical_sum_check(p, "p", rng)


def test_binomial_split_matches_sympy():
    # sum rules refine binomial coefficients: orbit sizes with j letters y add to binom(L, j)
    for m, k in RC.GOLDEN_SUM_RULES:
        L = m // k
        sizes = Counter()
        for t in RC.generate_sum_rule(m, k).terms:
            period = len(t.word.letters)
            sizes[Counter(t.word.letters)["y"] * (L // period)] += period
        assert all(sizes[j] == sympy.binomial(L, j) for j in range(L + 1))


def test_enumeration_cap():
    with pytest.raises(ValueError):
        RC.generate_sum_rule(30, 1)
    with pytest.raises(ValueError):
        RC.generate_sum_rule(6, 4)
