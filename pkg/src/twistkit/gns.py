"""Generalized n-series: predicates, the Green/Tambara functor D/s(n), and the s-calculus.

Polynomial GNS's live in D = Z[q] with exact quotients; series GNS's (from a
formal group law) live in Z[[t]] truncated at a fixed order.  The Tambara
structure is only built for transversal polynomial GNS's, where
D/s(n) embeds into the product of the D/Phi_d(s), d | n.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .delta import LambdaContext
from .errors import NotDivisible, NotInImage, NoWitnessFound
from .ring import (
    MonicQuotRing,
    MPoly,
    Poly,
    QuotElem,
    SeriesTrunc,
    crt_extend,
    divisors,
    is_prime_power,
    lcm,
    mobius,
    q_int,
)

# ------------------------------------------------------------ formal group laws


class FormalGroupLaw:
    """F(x, y) evaluated on truncated series."""

    def __init__(self, name: str, law):
        self.name = name
        self._law = law

    def __call__(self, x: SeriesTrunc, y: SeriesTrunc) -> SeriesTrunc:
        return self._law(x, y)

    def __repr__(self):
        return f"FormalGroupLaw({self.name})"

    @classmethod
    def additive(cls) -> "FormalGroupLaw":
        return cls("additive", lambda x, y: x + y)

    @classmethod
    def multiplicative(cls) -> "FormalGroupLaw":
        return cls("multiplicative", lambda x, y: x + y + x * y)

    @classmethod
    def hyperbolic(cls) -> "FormalGroupLaw":
        """The tanh addition law (x + y) / (1 + xy)."""
        return cls("hyperbolic", lambda x, y: (x + y).divide(x * y + 1))

    @classmethod
    def from_table(cls, table, name: str = "table") -> "FormalGroupLaw":
        """F = sum c x^i y^j from {"i,j": c}, {(i, j): c} or [[i, j, c], ...]."""
        if isinstance(table, dict):
            items = []
            for key, c in table.items():
                i, j = (int(v) for v in key.split(",")) if isinstance(key, str) else key
                items.append((i, j, c))
        else:
            items = [tuple(row) for row in table]

        def law(x, y):
            total = x * 0
            for i, j, c in items:
                total = total + (x ** i) * (y ** j) * c
            return total

        return cls(name, law)


def fgl_n_series(F: FormalGroupLaw, n: int, order: int = 32, var: str = "t") -> SeriesTrunc:
    """[n]_F(t) by iterating [k+1] = F([k], t)."""
    t = SeriesTrunc.gen(order, var)
    out = SeriesTrunc([], order, var)
    for _ in range(n):
        out = F(out, t)
    return out


def fgl_reduced_n_series(F: FormalGroupLaw, n: int, order: int = 32, var: str = "t") -> SeriesTrunc:
    """<n>_F = [n]_F / t; one digit of order is lost."""
    return fgl_n_series(F, n, order, var).shift_down(1)


def hyperbolic_closed_form(n: int, order: int = 32, var: str = "t") -> SeriesTrunc:
    """((1+t)^n - (1-t)^n) / ((1+t)^n + (1-t)^n)."""
    u = SeriesTrunc([1, 1], order, var) ** n
    w = SeriesTrunc([1, -1], order, var) ** n
    return (u - w).divide(u + w)


# ------------------------------------------------------------------- GNS definitions


def _divides(a, b) -> bool:
    """b | a in Z[q] or Z[[t]]."""
    try:
        _quotient(a, b)
    except (NotDivisible, ArithmeticError):
        return False
    return True


def _quotient(a, b):
    if isinstance(a, SeriesTrunc):
        return a.divide(b)
    if b.is_constant():
        k = b.constant_term()
        for e, c in a.items():
            if type(c) is not int or c % k:
                raise NotDivisible(e, k, c)
        return a.exact_div_int(k)
    return a.exact_div(b)


class GnsSpec:
    """s: N -> D together with an optional lambda-structure psi."""

    def __init__(
        self,
        name: str,
        series,
        psi=None,
        transversal: bool = False,
        var: str = "q",
        order: int | None = None,
    ):
        self.name = name
        self._series = series
        self._psi = psi
        self.transversal = transversal
        self.var = var
        self.order = order
        self._memo = {}
        self._levels = {}
        self._components = {}
        self._phi = {}

    def __repr__(self):
        return f"GnsSpec({self.name})"

    @property
    def is_series(self) -> bool:
        return self.order is not None

    def s(self, n: int):
        if n not in self._memo:
            self._memo[n] = self._series(n)
        return self._memo[n]

    def __call__(self, n: int):
        return self.s(n)

    @property
    def has_lambda(self) -> bool:
        return self._psi is not None

    def psi(self, m: int, f):
        if self._psi is None:
            raise ValueError(f"{self.name} carries no lambda-structure")
        if m == 1 or isinstance(f, (int, Fraction)):
            return f
        return self._psi(m, f)

    def reduce(self) -> "GnsSpec":
        """s~(n) = s(n) / s(1)."""
        base = self

        def series(n):
            return _quotient(base.s(n), base.s(1)) if n else base.s(0)

        return GnsSpec(f"reduced({self.name})", series, self._psi, self.transversal, self.var, self.order)

    def rescale(self, m: int) -> "GnsSpec":
        """s_m(n) = s(mn)."""
        base = self
        return GnsSpec(f"{self.name}_{m}", lambda n: base.s(m * n), self._psi, self.transversal, self.var, self.order)

    def zero(self):
        return SeriesTrunc([], self.order, self.var) if self.is_series else Poly.const(0, self.var)

    # -- transversal machinery

    def _need_transversal(self):
        if not self.transversal or self.is_series:
            raise ValueError(f"{self.name} is not a transversal polynomial GNS")

    def phi_d(self, d: int):
        """Phi_d(s) = prod_{e | d} s(e)^mu(d/e), by exact division."""
        if d not in self._phi:
            num = self.zero() + 1
            den = self.zero() + 1
            for e in divisors(d):
                mu = mobius(d // e)
                if mu == 1:
                    num = num * self.s(e)
                elif mu == -1:
                    den = den * self.s(e)
            self._phi[d] = _quotient(num, den)
        return self._phi[d]

    def level(self, n: int) -> MonicQuotRing:
        """D/s(n)."""
        self._need_transversal()
        if n not in self._levels:
            self._levels[n] = MonicQuotRing(self.s(n), name=f"D/s({n})")
        return self._levels[n]

    def component(self, d: int) -> MonicQuotRing:
        """D/Phi_d(s)."""
        self._need_transversal()
        if d not in self._components:
            self._components[d] = MonicQuotRing(self.phi_d(d), name=f"D/Phi_{d}")
        return self._components[d]


def _psi_power(m: int, f):
    if isinstance(f, (int, Fraction)):
        return f
    return f.compose_power(m)


def _series_psi(m: int, f: SeriesTrunc) -> SeriesTrunc:
    """t -> (1 + t)^m - 1, i.e. q -> q^m with q = 1 + t."""
    inner = SeriesTrunc([1, 1], f.order, f.var) ** m - 1
    return f.compose(inner)


def builtin_gns(name: str, order: int = 32) -> GnsSpec:
    """"multiplicative" (q^n - 1), "q-analog" ((n)_q), "additive" (n) or "hyperbolic"."""
    if name == "multiplicative":
        return GnsSpec(name, lambda n: Poly({n: 1, 0: -1}, "q") if n else Poly.const(0, "q"), _psi_power, True)
    if name in ("q-analog", "reduced-multiplicative"):
        return builtin_gns("multiplicative").reduce()
    if name == "additive":
        return GnsSpec(name, lambda n: Poly.const(n, "q"), lambda m, f: f, False)
    if name == "hyperbolic":
        F = FormalGroupLaw.hyperbolic()
        return GnsSpec(name, lambda n: fgl_n_series(F, n, order), _series_psi, False, "t", order)
    raise ValueError(f"unknown GNS {name!r}")


def gns_from_config(cfg) -> GnsSpec:
    """{"name": ...} or {"fgl": coefficient table, "truncation": int}."""
    if isinstance(cfg, str):
        cfg = json.loads(cfg)
    order = int(cfg.get("truncation", 32))
    if "name" in cfg:
        return builtin_gns(cfg["name"], order)
    F = FormalGroupLaw.from_table(cfg["fgl"])
    return GnsSpec("fgl", lambda n: fgl_n_series(F, n, order), None, False, "t", order)


def reduce_gns(s: GnsSpec) -> GnsSpec:
    return s.reduce()


def rescale_gns(s: GnsSpec, m: int) -> GnsSpec:
    return s.rescale(m)


# ----------------------------------------------------------------- predicates


def _report(check_id: str, failures: list, samples: int, extra=None) -> dict:
    out = {"check_id": check_id, "samples": samples, "status": "fail" if failures else "pass"}
    if failures:
        out["counterexample"] = failures[0]
    if extra:
        out.update(extra)
    return out


def gns_axioms(s: GnsSpec, upto: int) -> dict:
    """s(0) = 0, s(n) != 0 and s(n-k) | s(n) - s(k) for 0 < k < n <= upto."""
    failures = []
    count = 1
    if s.s(0) != s.zero():
        failures.append({"axiom": "s(0)=0"})
    for n in range(1, upto + 1):
        count += 1
        sn = s.s(n)
        if (sn.valuation() >= sn.order) if s.is_series else sn.is_zero():
            failures.append({"axiom": "nonzero", "n": n})
        for k in range(1, n):
            count += 1
            if not _divides(sn - s.s(k), s.s(n - k)):
                failures.append({"axiom": "divisibility", "n": n, "k": k})
    return _report(f"gns.axioms.{s.name}", failures, count)


def is_lucasian(s: GnsSpec, upto: int) -> dict:
    """s(a+b) = s(a) + s(b) mod s(a)s(b) for 1 <= a, b <= upto."""
    failures = []
    count = 0
    for a in range(1, upto + 1):
        for b in range(a, upto + 1):
            count += 1
            if not _divides(s.s(a + b) - s.s(a) - s.s(b), s.s(a) * s.s(b)):
                failures.append({"a": a, "b": b})
    return _report(f"gns.lucasian.{s.name}", failures, count)


def lucas_extract_check(s: GnsSpec, a: int, b: int) -> bool:
    """s_b~(a) = s(ab)/s(b) is congruent to a mod s(b)."""
    sb = s.s(b)
    return _divides(_quotient(s.s(a * b), sb) - a, sb)


def green_condition(s: GnsSpec, m: int, a: int, b: int) -> bool:
    """s(m) = (m/l) s(a)s(b)/s(g) mod s(a)s(b), g = gcd(a, b), l = lcm(a, b)."""
    g, l = gcd(a, b), lcm(a, b)
    sasb = s.s(a) * s.s(b)
    return _divides(s.s(m) - _quotient(sasb, s.s(g)) * (m // l), sasb)


def is_green(s: GnsSpec, family: str = "T", upto: int = 24, lcm_only: bool = False) -> dict:
    """The Green congruence for all m <= upto in the family and all a, b | m.

    family "T" takes every m, "P" only prime powers.  With lcm_only the check
    runs at m = lcm(a, b) only, which suffices for Lucasian s.
    """
    matrix = {}
    failures = []
    for m in range(1, upto + 1):
        if family == "P" and m > 1 and is_prime_power(m) is None:
            continue
        for a in divisors(m):
            for b in divisors(m):
                if b < a or (lcm_only and lcm(a, b) != m):
                    continue
                ok = green_condition(s, m, a, b)
                matrix[f"{m},{a},{b}"] = ok
                if not ok:
                    failures.append({"m": m, "a": a, "b": b})
    return _report(f"gns.green.{family}.{s.name}", failures, len(matrix), {"matrix": matrix})


def lambda_gns_check(s: GnsSpec, upto: int = 6) -> dict:
    """s~(mn) = s~(m) psi^m(s~(n)) and psi^m psi^n = psi^mn for m, n <= upto."""
    if not s.has_lambda:
        return {"check_id": f"gns.lambda.{s.name}", "samples": 0, "status": "unsupported"}
    red = s.reduce()
    probe = SeriesTrunc([0, 1, 2, 3], s.order, s.var) if s.is_series else Poly([1, 2, 0, 3], s.var)
    failures = []
    count = 0
    for m in range(1, upto + 1):
        for n in range(1, upto + 1):
            count += 1
            if red.s(m * n) != red.s(m) * s.psi(m, red.s(n)):
                failures.append({"m": m, "n": n, "identity": "monoid"})
            if s.psi(m, s.psi(n, probe)) != s.psi(m * n, probe):
                failures.append({"m": m, "n": n, "identity": "psi"})
    return _report(f"gns.lambda.{s.name}", failures, count)


# ----------------------------------------------------- transversal coordinates


@dataclass(frozen=True)
class GnsTransversal:
    """Components w_d in D/Phi_d(s) for d | n, in increasing order of d."""

    spec: GnsSpec
    n: int
    components: tuple

    def __getitem__(self, d: int) -> QuotElem:
        return self.components[divisors(self.n).index(d)]

    def _zip(self, other, op):
        return GnsTransversal(self.spec, self.n, tuple(op(a, b) for a, b in zip(self.components, other.components)))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return GnsTransversal(self.spec, self.n, tuple(-a for a in self.components))

    def __mul__(self, other):
        if isinstance(other, int):
            return GnsTransversal(self.spec, self.n, tuple(a * other for a in self.components))
        return self._zip(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return GnsTransversal(self.spec, self.n, tuple(a ** e for a in self.components))

    def __eq__(self, other):
        if not isinstance(other, GnsTransversal):
            return NotImplemented
        return self.n == other.n and self.components == other.components

    def __hash__(self):
        return hash((self.n, self.components))

    def __repr__(self):
        return "(" + ", ".join(f"{d}: {c.rep}" for d, c in zip(divisors(self.n), self.components)) + ")"


def gns_transversal(s: GnsSpec, x, n: int) -> GnsTransversal:
    rep = x.rep if isinstance(x, QuotElem) else x
    return GnsTransversal(s, n, tuple(s.component(d)(rep) for d in divisors(n)))


def gns_from_transversal(w: GnsTransversal) -> QuotElem:
    """CRT over Z; NotInImage names the divisor whose lift is not integral."""
    s = w.spec
    ds = divisors(w.n)
    x = w.components[0].rep
    M = s.phi_d(ds[0])
    for d, comp in zip(ds[1:], w.components[1:]):
        x = crt_extend(x, M, comp.rep, s.phi_d(d), None, level=d)
        M = M * s.phi_d(d)
        x = x.rem_monic(M)
    return s.level(w.n)(x)


def gns_membership(w: GnsTransversal) -> bool:
    try:
        gns_from_transversal(w)
    except NotInImage:
        return False
    return True


def gns_zero(s: GnsSpec, n: int) -> GnsTransversal:
    return GnsTransversal(s, n, tuple(s.component(d).zero for d in divisors(n)))


def gns_one(s: GnsSpec, n: int) -> GnsTransversal:
    return GnsTransversal(s, n, tuple(s.component(d).one for d in divisors(n)))


def gns_V(s: GnsSpec, m: int, n: int, w: GnsTransversal) -> GnsTransversal:
    """V^(mn)_n(w)_k = [k | n] m w_k."""
    comps = []
    for k in divisors(m * n):
        comps.append(s.component(k)(w[k].rep * m) if n % k == 0 else s.component(k).zero)
    return GnsTransversal(s, m * n, tuple(comps))


def gns_F(s: GnsSpec, m: int, n: int, w: GnsTransversal) -> GnsTransversal:
    """F^(mn)_n: keep the components at divisors of n."""
    return GnsTransversal(s, n, tuple(w[d] for d in divisors(n)))


def norm_formula(m: int, n: int) -> list:
    """(k, l, k/l, m l/k) for k | mn, l = gcd(n, k): N(w)_k = psi^(k/l)(w_l)^(ml/k)."""
    out = []
    for k in divisors(m * n):
        l = gcd(n, k)
        out.append((k, l, k // l, m * l // k))
    return out


def render_norm(m: int, n: int) -> tuple:
    """The components of N^(mn)_n(w) as formulas in the w_l."""
    out = []
    for _, l, ps, e in norm_formula(m, n):
        body = f"w_{l}" if ps == 1 else f"\\psi^{ps}(w_{l})"
        out.append(body if e == 1 else f"{body}^{e}")
    return tuple(out)


def gns_N(s: GnsSpec, m: int, n: int, w: GnsTransversal, check: bool = True) -> GnsTransversal:
    """N^(mn)_n in transversal coordinates; with `check`, the output must lie in D/s(mn)."""
    comps = []
    for k, l, ps, e in norm_formula(m, n):
        comps.append(s.component(k)(s.psi(ps, w[l].rep)) ** e)
    out = GnsTransversal(s, m * n, tuple(comps))
    if check:
        gns_from_transversal(out)
    return out


def gns_V_intrinsic(s: GnsSpec, m: int, n: int, x: QuotElem) -> QuotElem:
    """Multiplication by s(mn)/s(n)."""
    return s.level(m * n)(x.rep * _quotient(s.s(m * n), s.s(n)))


def gns_F_intrinsic(s: GnsSpec, m: int, n: int, x: QuotElem) -> QuotElem:
    return s.level(n)(x.rep)


def random_transversal(s: GnsSpec, n: int, rng, bound: int = 3) -> GnsTransversal:
    return gns_transversal(s, s.level(n).random_element(rng, bound), n)


# -- Tambara identities, each side computed separately


def fv_check(s: GnsSpec, m: int, a: int, b: int, x: GnsTransversal) -> bool:
    """F^m_b V^m_a x = (m/l) V^b_g F^a_g x."""
    g, l = gcd(a, b), lcm(a, b)
    lhs = gns_F(s, m // b, b, gns_V(s, m // a, a, x))
    rhs = gns_V(s, b // g, g, gns_F(s, a // g, g, x)) * (m // l)
    return lhs == rhs


def fn_check(s: GnsSpec, m: int, a: int, b: int, x: GnsTransversal) -> bool:
    """F^m_b N^m_a x = (N^b_g F^a_g x)^(m/l)."""
    g, l = gcd(a, b), lcm(a, b)
    lhs = gns_F(s, m // b, b, gns_N(s, m // a, a, x))
    rhs = gns_N(s, b // g, g, gns_F(s, a // g, g, x)) ** (m // l)
    return lhs == rhs


def norm_composition_check(s: GnsSpec, a: int, b: int, c: int, x: GnsTransversal) -> bool:
    """N^(abc)_(ab) N^(ab)_a = N^(abc)_a."""
    return gns_N(s, c, a * b, gns_N(s, b, a, x)) == gns_N(s, b * c, a, x)


def fv_scalar_check(s: GnsSpec, m: int, n: int, x: GnsTransversal) -> bool:
    """F^(mn)_n V^(mn)_n = m."""
    return gns_F(s, m, n, gns_V(s, m, n, x)) == x * m


def intrinsic_V_check(s: GnsSpec, m: int, n: int, x: QuotElem) -> bool:
    return gns_transversal(s, gns_V_intrinsic(s, m, n, x), m * n) == gns_V(s, m, n, gns_transversal(s, x, n))


class GnsRealization:
    """The Tambara functor C_j -> D/s(j) in transversal coordinates."""

    def __init__(self, s: GnsSpec):
        s._need_transversal()
        self.spec = s

    def zero(self, j):
        return gns_zero(self.spec, j)

    def one(self, j):
        return gns_one(self.spec, j)

    def add(self, j, a, b):
        return a + b

    def mul(self, j, a, b):
        return a * b

    def V(self, m, d, x):
        return gns_V(self.spec, m // d, d, x)

    def N(self, d, k, x):
        return gns_N(self.spec, d // k, k, x)

    def random_element(self, j, rng):
        return random_transversal(self.spec, j, rng)


# ---------------------------------------------------------------- descent


def _norm_on_rep(s: GnsSpec, m: int, n: int, f: Poly) -> Poly:
    """N^(mn)_n(f mod s(n)) in D/s(mn), as a representative."""
    return gns_from_transversal(gns_N(s, m, n, gns_transversal(s, f, n), check=False)).rep


def _small_polys(bound: int, degree: int, var: str):
    """All polynomials of degree <= `degree` with coefficients in [-bound, bound], small ones first."""
    rng = sorted(range(-bound, bound + 1), key=lambda c: (abs(c), c < 0))
    for coeffs in itertools.product(rng, repeat=degree + 1):
        yield Poly(list(coeffs), var)


def localizer(s: GnsSpec, m: int, n: int) -> Poly:
    """prod Phi_k(s~) over k | mn with s~(gcd(n, k)) a unit and Phi_k(s~) not."""
    red = s.reduce()
    out = Poly.const(1, s.var)
    for k in divisors(m * n):
        unit = red.s(gcd(n, k))
        if unit.is_constant() and abs(unit.constant_term()) == 1:
            ph = red.phi_d(k)
            if not (ph.is_constant() and abs(ph.constant_term()) == 1):
                out = out * ph
    return out


def norm_descent_witness(
    s: GnsSpec, m: int, n: int, bound: int = 2, degree: int = 1, max_power: int = 6
) -> dict:
    """Search f, g with N(f + s~(n) g) != N(f) in D/s~(mn); then certify descent after localizing.

    `s` is the full lambda-GNS; the quotients use its reduction.  Raises
    NoWitnessFound when the search budget is exhausted.
    """
    red = s.reduce()
    target = red.s(m * n)
    loc = localizer(s, m, n)
    searched = 0
    for g in _small_polys(bound, degree, s.var):
        if g.is_zero():
            continue
        for f in _small_polys(bound, degree, s.var):
            searched += 1
            diff = (_norm_on_rep(s, m, n, f + red.s(n) * g) - _norm_on_rep(s, m, n, f)).rem_monic(target)
            if diff.is_zero():
                continue
            power = None
            acc = diff
            for j in range(1, max_power + 1):
                acc = (acc * loc).rem_monic(target)
                if acc.is_zero():
                    power = j
                    break
            return {
                "m": m,
                "n": n,
                "f": str(f),
                "g": str(g),
                "difference": str(diff),
                "localizer": str(loc),
                "localized_power": power,
                "localized": power is not None,
                "searched": searched,
            }
    raise NoWitnessFound(f"f, g of degree <= {degree} with coefficients in [-{bound}, {bound}]")


def localized_descent_check(s: GnsSpec, m: int, n: int, f: Poly, g: Poly, max_power: int = 6):
    """Smallest j <= max_power with loc^j (N(f + s~(n)g) - N(f)) = 0 mod s~(mn), or None."""
    red = s.reduce()
    target = red.s(m * n)
    loc = localizer(s, m, n)
    acc = (_norm_on_rep(s, m, n, f + red.s(n) * g) - _norm_on_rep(s, m, n, f)).rem_monic(target)
    for j in range(max_power + 1):
        if acc.is_zero():
            return j
        acc = (acc * loc).rem_monic(target)
    return None


# ------------------------------------------------------------------ s-calculus

_NAMES = ("q", "x", "y")


def _mp(f: Poly) -> MPoly:
    return MPoly.from_poly(f, 0, _NAMES)


def s_factorial(n: int, s: GnsSpec) -> Poly:
    out = Poly.const(1, s.var)
    for i in range(1, n + 1):
        out = out * s.s(i)
    return out


def s_binomial(n: int, k: int, s: GnsSpec) -> Poly:
    """s(n)! / (s(k)! s(n-k)!), exact."""
    if k < 0 or k > n:
        return Poly.const(0, s.var)
    return s_factorial(n, s).exact_div(s_factorial(k, s) * s_factorial(n - k, s))


def s_derivative(f: MPoly, s: GnsSpec, var: int = 1) -> MPoly:
    """The D-linear map x^n -> s(n) x^(n-1) in variable `var` of Z[q, x, y]."""
    out = MPoly.const(0, f.names)
    v = MPoly.var(var, f.names)
    for e, c in f.coefficients_in(var).items():
        if e:
            out = out + c * _mp(s.s(e)) * v ** (e - 1)
    return out


def _neg_y_coeffs(n: int, s: GnsSpec) -> list:
    """c_k with (0 - y)^k_s = c_k y^k, from (y - y)^k_s = 0."""
    c = [Poly.const(1, s.var)]
    for k in range(1, n + 1):
        acc = Poly.const(0, s.var)
        for j in range(k):
            acc = acc + s_binomial(k, j, s) * c[j]
        c.append(-acc)
    return c


def twisted_power(n: int, s: GnsSpec) -> MPoly:
    """(x - y)^n_s in Z[q, x, y] via the s-binomial theorem."""
    c = _neg_y_coeffs(n, s)
    x, y = MPoly.var(1, _NAMES), MPoly.var(2, _NAMES)
    out = MPoly.const(0, _NAMES)
    for k in range(n + 1):
        out = out + _mp(s_binomial(n, k, s) * c[k]) * x ** (n - k) * y ** k
    return out


def twisted_power_axioms_check(n: int, s: GnsSpec) -> bool:
    """(x-y)^0 = 1, (x-x)^n = 0, and nabla_x (x-y)^n = s(n) (x-y)^(n-1)."""
    tp = twisted_power(n, s)
    y = MPoly.var(2, _NAMES)
    if n == 0:
        return tp == MPoly.const(1, _NAMES)
    if not tp.substitute(1, y).is_zero():
        return False
    return s_derivative(tp, s, 1) == _mp(s.s(n)) * twisted_power(n - 1, s)


def product_formula_check(m: int, n: int) -> bool:
    """(x - y)^m for the GNS (k)_(q^n) equals prod_{i<m} (x - q^(ni) y)."""
    s = builtin_gns("multiplicative").rescale(n).reduce()
    x, y, q = MPoly.var(1, _NAMES), MPoly.var(2, _NAMES), MPoly.var(0, _NAMES)
    prod = MPoly.const(1, _NAMES)
    for i in range(m):
        prod = prod * (x - q ** (n * i) * y)
    return twisted_power(m, s) == prod


def s_lucas_checks(s: GnsSpec, n: int, d: int) -> bool:
    """(0-1)^n = (-1)^(n/d) and (0-y)^n = (-y^d)^(n/d) modulo Phi_d(s)."""
    if n % d:
        raise ValueError("d must divide n")
    ph = s.phi_d(d)
    c = _neg_y_coeffs(n, s)[n]
    if not (c - (-1) ** (n // d)).rem_monic(ph).is_zero():
        return False
    tp0 = twisted_power(n, s).substitute(1, MPoly.const(0, _NAMES))
    y = MPoly.var(2, _NAMES)
    return (tp0 - (-(y ** d)) ** (n // d)).rem_monic_in(0, ph).is_zero()


def is_rank_one(f: Poly) -> bool:
    """Syntactic: 0 or a monic monomial q^a, so that psi^m(f) = f^m for every m."""
    return f.is_zero() or (f.nterms() == 1 and f.lc() == 1)


def evaluate_twisted_power(n: int, s: GnsSpec, x: Poly, y: Poly) -> Poly:
    return twisted_power(n, s).evaluate([Poly.gen(s.var), x, y], Poly.const(1, s.var))


def s_lift_congruence_check(x: Poly, y: Poly, n: int, s: GnsSpec) -> bool:
    """(x - y)^n_s = (x^d - y^d)^(n/d) mod Phi_d(s) for every d | n."""
    tp = evaluate_twisted_power(n, s, x, y)
    return all((tp - (x ** d - y ** d) ** (n // d)).rem_monic(s.phi_d(d)).is_zero() for d in divisors(n))


def s_lift_check(x: Poly, y: Poly, n: int, s: GnsSpec, require_rank_one: bool = True) -> bool:
    """(x - y)^n_s mod s(n) equals N^n_1(x - y mod s(1)), the norm taken in transversal coordinates."""
    if require_rank_one and not (is_rank_one(x) and is_rank_one(y)):
        raise ValueError("x and y must be rank one")
    lifted = s.level(n)(evaluate_twisted_power(n, s, x, y))
    normed = gns_from_transversal(gns_N(s, n, 1, gns_transversal(s, x - y, 1)))
    return lifted == normed


def plus_twisted_square_check() -> bool:
    """(x + y)^2_q = x^2 + (2)_q xy + q y^2 = x^2 - y^2 mod (2)_q."""
    s = builtin_gns("q-analog")
    y = MPoly.var(2, _NAMES)
    tp = twisted_power(2, s).substitute(2, -y)
    x, q = MPoly.var(1, _NAMES), MPoly.var(0, _NAMES)
    if tp != x ** 2 + (1 + q) * x * y + q * y ** 2:
        return False
    return (tp - (x ** 2 - y ** 2)).rem_monic_in(0, q_int(2, "q")).is_zero()


# ------------------------------------------------------------- norm lifts


def lambda_context(s: GnsSpec) -> LambdaContext:
    return LambdaContext(lambda m, f: s.psi(m, f), s.name)


def norm_lift(f: Poly, m: int, n: int, s: GnsSpec) -> Poly:
    """N~^(mn)_n(f) = psi^m(f) - sum_{d | m, d != 1} (s(mn)/s(mn/d)) psi^(m/d)(vartheta_d(f))."""
    lam = lambda_context(s)
    out = s.psi(m, f)
    for d in divisors(m):
        if d == 1:
            continue
        factor = _quotient(s.s(m * n), s.s(m * n // d))
        out = out - factor * s.psi(m // d, lam.vartheta(f, d))
    return out


def norm_lift_check(f: Poly, m: int, n: int, s: GnsSpec) -> bool:
    """N~ reduces to the transversal norm of f mod s(n), and meets each congruence mod Phi_k."""
    lifted = norm_lift(f, m, n, s)
    for k, l, ps, e in norm_formula(m, n):
        if not (lifted - s.psi(ps, f) ** e).rem_monic(s.phi_d(k)).is_zero():
            return False
    normed = gns_from_transversal(gns_N(s, m, n, gns_transversal(s, f, n)))
    return s.level(m * n)(lifted) == normed
