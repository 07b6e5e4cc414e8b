"""Transversal prisms with a principal distinguished element d.

The ambient ring A is modeled by polynomials in one variable: Z[q] for the
q-de Rham prism and Z_(p)[z] (rationals with denominators prime to p) for the
Eisenstein model.  Both are dense delta-subrings of the completed prisms, and
every quotient A/I_n is exact because gen(I_n) = prod_{i<=n} phi^i(d) is monic.

Levels: A/I_n carries the Tambara structure in transversal coordinates
(t_0, ..., t_n) with t_i in A/phi^i(I).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .delta import DeltaRing
from .errors import NonMonicModulus, NoSolution, NotInImage
from .ring import (
    MonicQuotRing,
    Poly,
    QuotElem,
    crt_extend,
    is_p_integral,
    linear_solve_mod,
    mat_vec_mod,
    mod_p_power,
    poly_inverse_mod,
    q_int,
)

MODELS = ("q-de-rham", "eisenstein")


class PrismPresentation:
    """(A, (d)) with Frobenius v -> v^p, optionally twisted to (A, phi^shift(I))."""

    def __init__(
        self,
        model: str,
        p: int,
        series_order: int = 64,
        padic_digits: int = 16,
        shift: int = 0,
        var: str | None = None,
    ):
        if model not in MODELS:
            raise ValueError(f"unknown prism model {model!r}; choose from {MODELS}")
        self.model = model
        self.p = p
        self.series_order = series_order
        self.padic_digits = padic_digits
        self.shift = shift
        self.var = var or ("q" if model == "q-de-rham" else "z")
        if model == "q-de-rham":
            self.base_d = q_int(p, self.var)
        else:
            self.base_d = Poly.gen(self.var) - p
        self.delta_ring = DeltaRing(p, self.phi, f"{model}(p={p})")
        self._levels = {}
        self._components = {}

    @classmethod
    def from_config(cls, cfg) -> "PrismPresentation":
        if isinstance(cfg, str):
            cfg = json.loads(cfg)
        return cls(
            cfg["model"],
            int(cfg["p"]),
            int(cfg.get("series_order", 64)),
            int(cfg.get("padic_digits", 16)),
        )

    def config(self) -> dict:
        return {
            "model": self.model,
            "p": self.p,
            "series_order": self.series_order,
            "padic_digits": self.padic_digits,
        }

    def __repr__(self):
        tw = f", twisted by phi^{self.shift}" if self.shift else ""
        return f"PrismPresentation({self.model}, p={self.p}{tw})"

    def twist(self, m: int) -> "PrismPresentation":
        """The presentation (A, phi^m(I)) with the same Frobenius."""
        return PrismPresentation(
            self.model, self.p, self.series_order, self.padic_digits, self.shift + m, self.var
        )

    # -- ambient ring

    def gen(self) -> Poly:
        return Poly.gen(self.var)

    def phi(self, f, times: int = 1):
        if isinstance(f, QuotElem):
            raise TypeError("apply phi to a representative in A, not to a quotient element")
        if isinstance(f, (int, Fraction)):
            return f
        return f.compose_power(self.p ** times)

    @property
    def d(self) -> Poly:
        return self.phi_d(0)

    def phi_d(self, i: int) -> Poly:
        return self.phi(self.base_d, self.shift + i)

    def delta(self, f):
        return self.delta_ring.delta(f)

    def theta(self, f, i: int):
        return self.delta_ring.theta(f, i)

    # -- quotient rings

    def gen_I(self, n: int) -> Poly:
        """prod_{i=0}^n phi^i(d); monic by construction for both models."""
        g = Poly.const(1, self.var)
        for i in range(n + 1):
            g = g * self.phi_d(i)
        if g.lc() != 1:
            raise NonMonicModulus(g)
        return g

    def level(self, n: int) -> MonicQuotRing:
        """A/I_n."""
        if n not in self._levels:
            self._levels[n] = MonicQuotRing(self.gen_I(n), name=f"A/I_{n}")
        return self._levels[n]

    def component(self, i: int) -> MonicQuotRing:
        """A/phi^i(I)."""
        if i not in self._components:
            self._components[i] = MonicQuotRing(self.phi_d(i), name=f"A/phi^{i}(I)")
        return self._components[i]

    def element(self, f, n: int) -> QuotElem:
        return self.level(n)(f if not isinstance(f, QuotElem) else f.rep)

    def random_element(self, n: int, rng, bound: int = 4) -> QuotElem:
        return self.level(n).random_element(rng, bound)

    def random_ambient(self, rng, degree: int = 3, bound: int = 4) -> Poly:
        return Poly([rng.randint(-bound, bound) for _ in range(degree + 1)], self.var)

    # -- pi_n

    def pi(self, n: int) -> Poly:
        """pi_n = u_n phi^n(d) with pi_n = p mod I_(n-1), exactly."""
        return _pi_cached(self.model, self.p, self.shift, self.var, n)

    def unit(self, n: int) -> Poly:
        """u_n with pi_n = u_n * phi^n(d)."""
        return self.pi(n).exact_div(self.phi_d(n))

    def pi_padic(self, n: int, digits: int | None = None):
        """Solve u * phi^n(d) = p in A/(I_(n-1), p^P) by p-adic elimination.

        Returns (u as a list of residues mod p^P, P).  The residue check
        M u = p e_0 mod p^P is asserted.
        """
        if n < 1:
            raise ValueError("pi_n is defined for n >= 1")
        P = digits or self.padic_digits
        mod = self.p ** P
        ring = self.level(n - 1)
        r = ring.rank
        phd = ring(self.phi_d(n))
        cols = [(phd * ring(Poly.monomial(j, 1, self.var))).rep for j in range(r)]
        M = [[mod_p_power(cols[j].coeff(i), mod) for j in range(r)] for i in range(r)]
        b = [self.p % mod] + [0] * (r - 1)
        u = linear_solve_mod(M, b, self.p, P)
        assert mat_vec_mod(M, u, mod) == [x % mod for x in b], "p-adic solve failed its residue check"
        return u, P

    def pi_congruence_check(self, n: int, digits: int | None = None) -> bool:
        """Both the exact pi_n and the p-adic solve satisfy pi_n = p mod (I_(n-1), p^P)."""
        u_padic, P = self.pi_padic(n, digits)
        mod = self.p ** P
        M = self.gen_I(n - 1)
        exact_res = (self.pi(n) - self.p).rem_monic(M)
        if any(mod_p_power(c, mod) for _, c in exact_res.items()):
            return False
        padic = Poly.from_dense(u_padic, self.var) * self.phi_d(n)
        padic_res = (padic - self.p).rem_monic(M)
        if any(mod_p_power(c, mod) for _, c in padic_res.items()):
            return False
        # the exact unit, read mod p^P, must also solve the p-adic system
        exact_u = self.unit(n).rem_monic(M)
        check = (Poly({e: mod_p_power(c, mod) for e, c in exact_u.items()}, self.var) * self.phi_d(n) - self.p)
        return all(mod_p_power(c, mod) == 0 for _, c in check.rem_monic(M).items())

    def prism_condition(self) -> bool:
        """p in (d, phi(d)): the level-1 solve for pi_1 succeeds."""
        try:
            self.pi_padic(1)
        except NoSolution:
            return False
        return True

    def is_transversal(self) -> bool:
        """A/(d) is p-torsion free; holds structurally when d is monic."""
        return self.d.lc() == 1

    # -- transversal coordinates

    def to_transversal(self, x: QuotElem, n: int) -> "TransversalCoords":
        rep = x.rep if isinstance(x, QuotElem) else x
        return TransversalCoords(self, tuple(self.component(i)(rep) for i in range(n + 1)))

    def from_transversal(self, tc: "TransversalCoords") -> QuotElem:
        """Inductive CRT; NotInImage names the first level whose lift is not p-integral."""
        comps = tc.components
        x = comps[0].rep
        for n in range(1, len(comps)):
            M = self.gen_I(n - 1)
            x = crt_extend(x, M, comps[n].rep, self.phi_d(n), self.p, level=n)
            x = x.rem_monic(self.gen_I(n))
        return self.level(len(comps) - 1)(x)

    def membership_check(self, tc: "TransversalCoords") -> bool:
        """Recursive image criterion: t = t_n in A/(I_(n-1), p) at each level."""
        comps = tc.components
        for n in range(1, len(comps)):
            try:
                t = self.from_transversal(TransversalCoords(self, comps[:n]))
            except NotInImage:
                return False
            diff = (t.rep - comps[n].rep).rem_monic(self.gen_I(n - 1))
            for _, c in diff.items():
                num = c.numerator if isinstance(c, Fraction) else c
                if num % self.p:
                    return False
        return True

    # -- Tambara structure, transversal coordinates

    def tambara_F(self, tc: "TransversalCoords") -> "TransversalCoords":
        return TransversalCoords(self, tc.components[:-1])

    def tambara_V(self, tc: "TransversalCoords") -> "TransversalCoords":
        n = len(tc.components)
        out = tuple(c * self.p for c in tc.components) + (self.component(n).zero,)
        return self._checked(TransversalCoords(self, out))

    def tambara_N(self, tc: "TransversalCoords") -> "TransversalCoords":
        n = len(tc.components)
        last = tc.components[-1]
        out = tuple(c ** self.p for c in tc.components) + (self.component(n)(self.phi(last.rep)),)
        return self._checked(TransversalCoords(self, out))

    def _checked(self, tc):
        if not self.membership_check(tc):
            raise AssertionError(f"structure map left the image of A/I_n: {tc}")
        return tc

    # -- Tambara structure, intrinsic

    def intrinsic_V(self, x: QuotElem, n: int) -> QuotElem:
        """V: A/I_(n-1) -> A/I_n, multiplication by pi_n."""
        return self.level(n)(self.pi(n) * x.rep)

    def intrinsic_N(self, x: QuotElem, n: int) -> QuotElem:
        """N: A/I_(n-1) -> A/I_n, x -> phi(x) - pi_n delta(x) on the representative."""
        f = x.rep
        return self.level(n)(self.phi(f) - self.pi(n) * self.delta(f))

    # -- lifts

    def lift_V(self, f, m: int, n: int):
        """V~^(m+n)_n(f) = pi_(n+1) ... pi_(m+n) f."""
        out = f
        for j in range(n + 1, m + n + 1):
            out = self.pi(j) * out
        return out

    def lift_N(self, f, m: int, n: int):
        """N~^(m+n)_n(f) = phi^m(f) - sum_i V~^(m+n)_(m+n-i)(phi^(m-i)(theta_i f))."""
        out = self.phi(f, m)
        for i in range(1, m + 1):
            out = out - self.lift_V(self.phi(self.theta(f, i), m - i), i, m + n - i)
        return out

    def iterated_N(self, x: QuotElem, n: int, m: int) -> "TransversalCoords":
        tc = self.to_transversal(x, n)
        for _ in range(m):
            tc = self.tambara_N(tc)
        return tc

    def iterated_V(self, x: QuotElem, n: int, m: int) -> "TransversalCoords":
        tc = self.to_transversal(x, n)
        for _ in range(m):
            tc = self.tambara_V(tc)
        return tc

    def lift_N_check(self, f, m: int, n: int) -> bool:
        lifted = self.to_transversal(self.level(m + n)(self.lift_N(f, m, n)), m + n)
        return lifted == self.iterated_N(self.level(n)(f), n, m)

    def lift_V_check(self, f, m: int, n: int) -> bool:
        lifted = self.to_transversal(self.level(m + n)(self.lift_V(f, m, n)), m + n)
        return lifted == self.iterated_V(self.level(n)(f), n, m)

    def NV_check(self, x: QuotElem, n: int) -> bool:
        """N V x = p^(p-2) V^2 (x^p) for x in A/I_n."""
        tc = self.to_transversal(x, n)
        lhs = self.tambara_N(self.tambara_V(tc))
        rhs = self.tambara_V(self.tambara_V(tc ** self.p)) * (self.p ** (self.p - 2))
        return lhs == rhs

    def cohomological_defect(self, n: int) -> QuotElem:
        """V(1) - p in A/I_n; zero iff transfer after restriction is multiplication by p here."""
        return self.intrinsic_V(self.level(n - 1).one, n) - self.p


@lru_cache(maxsize=None)
def _pi_cached(model: str, p: int, shift: int, var: str, n: int) -> Poly:
    if n < 1:
        raise ValueError("pi_n is defined for n >= 1")
    base = PrismPresentation(model, p, var=var)
    if shift:
        pi = base.phi(base.pi(n), shift)
        tw = base.twist(shift)
    elif model == "q-de-rham":
        pi = base.phi_d(n)
        tw = base
    else:
        M = base.gen_I(n - 1)
        phd = base.phi_d(n)
        u = (poly_inverse_mod(phd.rem_monic(M), M) * p).rem_monic(M)
        for e, c in u.items():
            if not is_p_integral(c, p):
                raise ArithmeticError(f"u_{n} has coefficient {c} in degree {e}, not {p}-integral")
        pi = u * phd
        tw = base
    rest = (pi - p).rem_monic(tw.gen_I(n - 1))
    if not rest.is_zero():
        raise AssertionError(f"pi_{n} is not congruent to {p} modulo I_{n - 1}")
    return pi


@dataclass(frozen=True)
class TransversalCoords:
    presentation: PrismPresentation
    components: tuple

    def __add__(self, other):
        return TransversalCoords(
            self.presentation, tuple(a + b for a, b in zip(self.components, other.components))
        )

    def __sub__(self, other):
        return TransversalCoords(
            self.presentation, tuple(a - b for a, b in zip(self.components, other.components))
        )

    def __neg__(self):
        return TransversalCoords(self.presentation, tuple(-a for a in self.components))

    def __mul__(self, other):
        if isinstance(other, int):
            return TransversalCoords(self.presentation, tuple(a * other for a in self.components))
        return TransversalCoords(
            self.presentation, tuple(a * b for a, b in zip(self.components, other.components))
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return TransversalCoords(self.presentation, tuple(a ** e for a in self.components))

    def __eq__(self, other):
        if not isinstance(other, TransversalCoords):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    @property
    def level(self) -> int:
        return len(self.components) - 1

    def __repr__(self):
        return "(" + ", ".join(str(c.rep) for c in self.components) + ")"


# module-level entry points


def to_transversal(pres: PrismPresentation, x: QuotElem, n: int) -> TransversalCoords:
    return pres.to_transversal(x, n)


def from_transversal(tc: TransversalCoords) -> QuotElem:
    return tc.presentation.from_transversal(tc)


def membership_check(tc: TransversalCoords) -> bool:
    return tc.presentation.membership_check(tc)


def pi_n(pres: PrismPresentation, n: int) -> Poly:
    return pres.pi(n)


def refraction_residue(f: Poly, p: int) -> Poly:
    """phi(f) - (p)_(t^p) delta(f) - f^p reduced modulo d^p, d = (p)_t, phi(t) = t^p."""
    d = q_int(p, f.var)
    R = DeltaRing.polynomials(p)
    expr = R.phi(f) - q_int(p, f.var, step=p) * R.delta(f) - f ** p
    return expr.rem_monic(d ** p)


def refraction_check(f: Poly, p: int) -> bool:
    """Whether phi(f) - (p)_(t^p) delta(f) - f^p lies in (d^p), for d = (p)_t dividing f."""
    if not f.rem_monic(q_int(p, f.var)).is_zero():
        raise ValueError("refraction is only claimed for f divisible by d = (p)_t")
    return refraction_residue(f, p).is_zero()


def norm_lift_congruences(f: Poly, p: int) -> bool:
    """The congruences every Tambara functor forces on N~(f) = phi(f) - (p)_(t^p) delta(f):
    N~(f) = f^p mod (p)_t and N~(f) = phi(f) mod (p)_(t^p)."""
    R = DeltaRing.polynomials(p)
    phi_d = q_int(p, f.var, step=p)
    lifted = R.phi(f) - phi_d * R.delta(f)
    return (lifted - f ** p).rem_monic(q_int(p, f.var)).is_zero() and (
        (lifted - R.phi(f)).rem_monic(phi_d).is_zero()
    )


class PrismRealization:
    """Levels indexed by p^j; elements in transversal coordinates."""

    def __init__(self, pres: PrismPresentation):
        self.pres = pres

    def _lvl(self, index: int) -> int:
        j, p = 0, self.pres.p
        while index > 1:
            if index % p:
                raise ValueError(f"{index} is not a power of {p}")
            index //= p
            j += 1
        return j

    def zero(self, index):
        return self.pres.to_transversal(self.pres.level(self._lvl(index)).zero, self._lvl(index))

    def one(self, index):
        return self.pres.to_transversal(self.pres.level(self._lvl(index)).one, self._lvl(index))

    def add(self, index, a, b):
        return a + b

    def mul(self, index, a, b):
        return a * b

    def V(self, m, d, x):
        for _ in range(self._lvl(m) - self._lvl(d)):
            x = self.pres.tambara_V(x)
        return x

    def N(self, d, k, x):
        for _ in range(self._lvl(d) - self._lvl(k)):
            x = self.pres.tambara_N(x)
        return x

    def random_element(self, index, rng):
        n = self._lvl(index)
        return self.pres.to_transversal(self.pres.random_element(n, rng), n)
