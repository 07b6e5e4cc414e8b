"""Tambara reciprocity for cyclic groups by orbit enumeration.

Sum rules N^m_k(x + y) come from binary necklaces of length m/k (x = 0, y = 1).
Transfer rules N^m_n V^n_k(f) come from the choice sets picking one point of
Z/(m/k) in each residue class mod m/n.  In both cases an orbit with primitive
period P and stabilizer of order e (in the quotient by C_k) yields the term
V^m_d N^d_k(first P letters) with d = k*e.
"""

from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from math import comb

from . import kernels
from .expression import OrbitWord, TambaraExpression, Term
from .ring import MPolyRing
from .witt import N_int, TruncSet, V_int, WittVector

DEFAULT_CAP = 24


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TWISTKIT_THREADS", "1")))
    except ValueError:
        return 1


def _word(code: int, L: int, P: int, zero: str, one: str) -> tuple:
    return tuple(one if (code >> (L - 1 - i)) & 1 else zero for i in range(P))


def generate_sum_rule(m: int, k: int, cap: int = DEFAULT_CAP) -> TambaraExpression:
    """N^m_k(x + y) as a sum over necklaces."""
    if m % k:
        raise ValueError(f"{k} does not divide {m}")
    if m > cap:
        raise ValueError(f"m = {m} exceeds the enumeration cap {cap}")
    L = m // k
    terms = []
    for code, P in kernels.binary_necklaces(L):
        e = L // P
        terms.append(Term(k * e, k, OrbitWord(_word(code, L, P, "x", "y"), k * e)))
    return TambaraExpression(m, k, terms, "sum")


def _choice_codes(m: int, n: int, k: int):
    """Bit patterns (present = 0) of all choice sets, one point per residue class mod m/n."""
    L, c = m // k, m // n
    full = (1 << L) - 1
    for js in itertools.product(range(n // k), repeat=c):
        code = full
        for r, j in enumerate(js):
            pos = r + c * j
            code &= ~(1 << (L - 1 - pos))
        yield code


def _canonical_chunk(codes, L):
    out = {}
    for code in codes:
        rep, P = kernels.canonical_rotation(code, L)
        out[rep] = P
    return out


def generate_transfer_rule(m: int, n: int, k: int, cap: int = DEFAULT_CAP) -> TambaraExpression:
    """N^m_n V^n_k(f) as a sum over orbits of choice sets."""
    if n % k or m % n:
        raise ValueError("need k | n | m")
    if m > cap:
        raise ValueError(f"m = {m} exceeds the enumeration cap {cap}")
    L = m // k
    codes = list(_choice_codes(m, n, k))
    workers = _threads()
    if workers > 1 and len(codes) > 4096:
        size = -(-len(codes) // workers)
        chunks = [codes[i:i + size] for i in range(0, len(codes), size)]
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda ch: _canonical_chunk(ch, L), chunks))
        orbits = {}
        for part in parts:
            orbits.update(part)
    else:
        orbits = _canonical_chunk(codes, L)
    terms = []
    for rep in sorted(orbits):
        P = orbits[rep]
        e = L // P
        d = k * e
        terms.append(Term(d, k, OrbitWord(_word(rep, L, P, "f", "1"), d)))
    return TambaraExpression(m, k, terms, "transfer", middle=n)


def orbit_count(expr: TambaraExpression) -> int:
    """sum of orbit sizes; 2^(m/k) for sum rules, (n/k)^(m/n) for transfer rules."""
    return sum(len(t.word.letters) * t.multiplicity for t in expr.terms)


def expected_orbit_count(expr: TambaraExpression) -> int:
    if expr.kind == "sum":
        return 2 ** (expr.top // expr.source)
    return (expr.middle // expr.source) ** (expr.top // expr.middle)


def trivial_specialization_check(expr: TambaraExpression) -> bool:
    """In the constant Tambara functor V^m_d = m/d and N^d_k = (d/k)-th power."""
    R = MPolyRing(("x", "y", "f"))
    x, y, f = R.gens()
    got = expr.trivial_specialization({"x": x, "y": y, "f": f})
    if expr.kind == "sum":
        want = (x + y) ** (expr.top // expr.source)
    else:
        want = (f * (expr.middle // expr.source)) ** (expr.top // expr.middle)
    return got == want


# ------------------------------------------------------------- realizations


class BigWittGhostRealization:
    """Big Witt vectors with trivial action, in ghost coordinates.

    The group of order j corresponds to W over the divisors of j.
    """

    def __init__(self, base=None):
        self.base = base or MPolyRing(("x", "y"))

    def zero(self, j):
        return WittVector.zero(self.base, TruncSet.divisors_of(j)).to_ghost()

    def one(self, j):
        return WittVector.one(self.base, TruncSet.divisors_of(j)).to_ghost()

    def add(self, j, a, b):
        return a + b

    def mul(self, j, a, b):
        return a * b

    def V(self, m, d, x):
        return V_int(m // d, d, x)

    def N(self, d, k, x):
        return N_int(d // k, k, x)

    def random_element(self, j, rng):
        R = self.base
        gens = R.gens()
        coords = []
        for _ in TruncSet.divisors_of(j).indices:
            c = R(rng.randint(-3, 3))
            for g in gens:
                c = c + g * rng.randint(-2, 2)
            coords.append(c)
        return WittVector(R, TruncSet.divisors_of(j), coords).to_ghost()


def evaluate(expr: TambaraExpression, realization, values: dict):
    return expr.evaluate(realization, values)


def direct_side(expr: TambaraExpression, realization, values: dict):
    """The left-hand side computed straight from the realization's maps."""
    if expr.kind == "sum":
        s = realization.add(expr.source, values["x"], values["y"])
        return realization.N(expr.top, expr.source, s) if expr.top != expr.source else s
    v = values["f"]
    if expr.middle != expr.source:
        v = realization.V(expr.middle, expr.source, v)
    if expr.top != expr.middle:
        v = realization.N(expr.top, expr.middle, v)
    return v


def verify_rule(expr: TambaraExpression, realization, samples, check_id: str | None = None) -> dict:
    """Compare both sides on each sample; report the first counterexample."""
    report = {
        "check_id": check_id or f"reciprocity.{expr.kind}.{expr.top}.{expr.middle}.{expr.source}",
        "samples": 0,
        "status": "pass",
    }
    for values in samples:
        report["samples"] += 1
        lhs = direct_side(expr, realization, values)
        rhs = evaluate(expr, realization, values)
        if lhs != rhs:
            report["status"] = "fail"
            report["counterexample"] = {
                "inputs": {k: str(v) for k, v in sorted(values.items())},
                "lhs": str(lhs),
                "rhs": str(rhs),
            }
            break
    return report


def sample_values(expr: TambaraExpression, realization, rng, count: int):
    letters = ("x", "y") if expr.kind == "sum" else ("f",)
    return [
        {ch: realization.random_element(expr.source, rng) for ch in letters} for _ in range(count)
    ]


# ---------------------------------------------------- p-typical sum formula


def p_typical_sum_check(p: int, last_exponent: str, rng, count: int = 5) -> bool:
    """N(x+y) = N(x) + N(y) + (V/p) sum_{0<i<p} binom(p,i) x^(p-i) y^e in big Witt over Z[x,y].

    `last_exponent` is "i" for e = i or "p" for e = p.
    """
    real = BigWittGhostRealization()
    for _ in range(count):
        x = real.random_element(1, rng)
        y = real.random_element(1, rng)
        lhs = real.N(p, 1, x + y)
        inner = real.zero(1)
        for i in range(1, p):
            e = i if last_exponent == "i" else p
            inner = inner + (x ** (p - i) * y ** e) * (comb(p, i) // p)
        rhs = real.N(p, 1, x) + real.N(p, 1, y) + real.V(p, 1, inner)
        if lhs != rhs:
            return False
    return True


# ------------------------------------------------------------------ goldens


def golden_name(expr: TambaraExpression) -> str:
    return f"{expr.kind}_{expr.top}_{expr.middle or 0}_{expr.source}.json"


def golden_dir():
    return resources.files("twistkit") / "goldens"


def load_golden(name: str) -> TambaraExpression:
    data = json.loads((golden_dir() / name).read_text())
    return TambaraExpression.from_json_obj(data)


GOLDEN_SUM_RULES = [(2, 1), (3, 1), (4, 1), (4, 2), (6, 1), (6, 2), (6, 3), (8, 2), (12, 2)]
GOLDEN_TRANSFER_RULES = [(4, 2, 1), (6, 2, 1), (6, 3, 1), (8, 4, 2), (12, 6, 2), (12, 4, 2)]


def golden_rules():
    rules = [generate_sum_rule(m, k) for m, k in GOLDEN_SUM_RULES]
    rules += [generate_transfer_rule(m, n, k) for m, n, k in GOLDEN_TRANSFER_RULES]
    return rules
