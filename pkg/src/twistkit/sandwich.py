"""The sandwich W_m(A/I_n) -> A/I_(m+n) -> W_m(A/phi^m(I_n)).

The first map c is computed two ways: from ghost coordinates through
transversal coordinates, and from Witt coordinates through the lifted
transfers V~ and the theta operations.  The second map is delta_bullet reduced
modulo phi^m(I_n).  Their composite differs from W_m(phi^m) by a correction
eps_m, given both in closed form and as the literal difference.

Witt vectors over a quotient are `WittVector`s whose base is a `MonicQuotRing`;
elements of A are `Poly` representatives.
"""

from __future__ import annotations

from .errors import NoWitnessFound
from .prism import PrismPresentation, TransversalCoords
from .ring import Poly, QuotElem, pos
from .witt import TruncSet, WittVector, ghost_coords


def _rep(x) -> Poly:
    return x.rep if isinstance(x, QuotElem) else x


class SandwichContext:
    """Source W_m(A/I_n), middle A/I_(m+n), target W_m(A/phi^m(I_n))."""

    def __init__(self, pres: PrismPresentation, m: int, n: int):
        if m < 0 or n < 0:
            raise ValueError("m and n must be non-negative")
        self.pres = pres
        self.m = m
        self.n = n
        self.p = pres.p
        self.trunc = TruncSet.p_typical(pres.p, m)
        self.source_base = pres.level(n)
        self.middle = pres.level(m + n)
        self.twisted = pres.twist(m)
        self.target_base = self.twisted.level(n)
        self.target_middle = self.twisted.level(m + n)

    def __repr__(self):
        return f"SandwichContext({self.pres!r}, m={self.m}, n={self.n})"

    def next_rung(self) -> "SandwichContext":
        """The same sandwich for the prism (A, phi^m(I))."""
        return SandwichContext(self.twisted, self.m, self.n)

    # -- elements

    def source_vector(self, coords, system: str = "witt") -> WittVector:
        return WittVector(self.source_base, self.trunc, [self.source_base(_rep(c)) for c in coords], system)

    def random_source(self, rng, bound: int = 3) -> WittVector:
        return WittVector(
            self.source_base, self.trunc, [self.source_base.random_element(rng, bound) for _ in range(self.m + 1)]
        )

    def random_middle(self, rng, bound: int = 3) -> QuotElem:
        return self.middle.random_element(rng, bound)

    # -- the comparison map c

    def comparison_c(self, x: WittVector) -> QuotElem:
        """c via t_j(c x) = phi^<j-n>+(w_(m-<j-n>+)) for 0 <= j <= m+n."""
        pres, m, n = self.pres, self.m, self.n
        w = [_rep(c) for c in x.to_ghost().coords]
        comps = []
        for j in range(m + n + 1):
            k = pos(j - n)
            comps.append(pres.component(j)(pres.phi(w[m - k], k)))
        return pres.from_transversal(TransversalCoords(pres, tuple(comps)))

    def corrected_coords(self, a) -> list:
        """b_k = a_k - sum_{i=1}^k theta_i(a_(k-i)), on representatives in A."""
        a = [_rep(c) for c in (a.to_witt().coords if isinstance(a, WittVector) else a)]
        out = []
        for k in range(len(a)):
            b = a[k]
            for i in range(1, k + 1):
                b = b - self.pres.theta(a[k - i], i)
            out.append(b)
        return out

    def prismatic_ghost_rep(self, b) -> Poly:
        """sum_k V~^(m+n)_(m+n-k)(phi^(m-k)(b_k)) as an element of A."""
        pres, m, n = self.pres, self.m, self.n
        total = Poly.const(0, pres.var)
        for k in range(m + 1):
            total = total + pres.lift_V(pres.phi(_rep(b[k]), m - k), k, m + n - k)
        return total

    def prismatic_ghost(self, b) -> QuotElem:
        return self.middle(self.prismatic_ghost_rep(b))

    def comparison_c_witt(self, a) -> QuotElem:
        """c from Witt coordinates: the prismatic ghost polynomial at the corrected coordinates."""
        return self.prismatic_ghost(self.corrected_coords(a))

    def comparison_c_witt_trace(self) -> list:
        """The triangular table of summands of c in Witt coordinates.

        Row l lists the contributions of a_l; V^k stands for V~^(m+n)_(m+n-k).
        """
        m = self.m
        rows = []
        for l in range(m + 1):
            row = []
            for k in range(l, m + 1):
                tw = "" if m - k == 0 else ("^\\phi" if m - k == 1 else f"^{{\\phi^{m - k}}}")
                vk = "" if k == 0 else ("V" if k == 1 else f"V^{k}")
                if k == l:
                    row.append(f"{vk}a_{l}{tw}")
                else:
                    row.append(f"-{vk}\\theta_{k - l}(a_{l}){tw}")
            rows.append(row)
        return rows

    # -- delta_bullet

    def delta_bullet_quotient(self, x) -> WittVector:
        """(x, delta x, ..., delta_m x) reduced mod phi^m(I_n), Witt coordinates."""
        coords = self.pres.delta_ring.delta_bullet(_rep(x), self.m)
        return WittVector(self.target_base, self.trunc, [self.target_base(c) for c in coords])

    def frobenius_image(self, a: WittVector) -> WittVector:
        """W_m(phi^m)(a) over A/phi^m(I_n)."""
        a = a.to_witt()
        return WittVector(
            self.target_base, self.trunc, [self.target_base(self.pres.phi(_rep(c), self.m)) for c in a.coords]
        )

    # -- epsilon

    def epsilon(self, a) -> list:
        """Closed form: eps_i = sum_{k=i+1}^m p^i V~^(m+n)_(m+n-(k-i))(phi^(m-k+i)(b_k)) mod phi^m(I_n)."""
        pres, m, n, p = self.pres, self.m, self.n, self.p
        b = self.corrected_coords(a)
        out = []
        for i in range(m + 1):
            e = Poly.const(0, pres.var)
            for k in range(i + 1, m + 1):
                e = e + pres.lift_V(pres.phi(b[k], m - k + i), k - i, m + n - (k - i)) * (p ** i)
            out.append(self.target_base(e))
        return out

    def composite_ghost(self, a) -> list:
        """Ghost coordinates of delta_bullet(c(a))."""
        x = self.comparison_c_witt(a)
        return list(self.delta_bullet_quotient(x).to_ghost().coords)

    def epsilon_by_difference(self, a) -> list:
        """ghost(delta_bullet c a) - ghost(W_m(phi^m) a), each side computed from Witt coordinates."""
        a = a if isinstance(a, WittVector) else self.source_vector(a)
        lhs = self.composite_ghost(a)
        rhs = ghost_coords(self.frobenius_image(a).coords, self.trunc)
        return [u - v for u, v in zip(lhs, rhs)]

    def epsilon_check(self, a) -> bool:
        return self.epsilon(a) == self.epsilon_by_difference(a)

    # -- vanishing statements

    def delta_image_input(self, f) -> WittVector:
        """The image of f under A -> W(A) -> W_m(A/I_n)."""
        return self.source_vector(self.pres.delta_ring.delta_bullet(_rep(f), self.m))

    def vanish_checks(self, a, f=None) -> dict:
        """Closed form and literal difference both vanish where they must.

        `n_zero` is None when n > 0; `delta_image` is None without an f.
        """
        zero = self.target_base.zero
        eps = self.epsilon(a)
        diff = self.epsilon_by_difference(a)
        out = {
            "n_zero": None,
            "last_coordinate": eps[-1] == zero and diff[-1] == zero,
            "delta_image": None,
        }
        if self.n == 0:
            out["n_zero"] = all(e == zero for e in eps) and all(e == zero for e in diff)
        if f is not None:
            d = self.delta_image_input(f)
            out["delta_image"] = all(e == zero for e in self.epsilon(d)) and all(
                e == zero for e in self.epsilon_by_difference(d)
            )
        return out

    def composite_check(self, x) -> bool:
        """c'(delta_bullet x) = phi^m(x) in A/phi^m(I_(m+n)), c' the comparison map of (A, phi^m(I))."""
        y = self.delta_bullet_quotient(x)
        return self.next_rung().comparison_c_witt(y) == self.target_middle(self.pres.phi(_rep(x), self.m))

    def ladder_check(self, a, rungs: int = 2) -> bool:
        """Walk a down the ladder; at every rung both triangles commute."""
        ctx = self
        a = a if isinstance(a, WittVector) else self.source_vector(a)
        for _ in range(rungs):
            x = ctx.comparison_c_witt(a)
            if x != ctx.comparison_c(a):
                return False
            if not ctx.epsilon_check(a) or not ctx.composite_check(x):
                return False
            a = ctx.delta_bullet_quotient(x)
            ctx = ctx.next_rung()
            a = WittVector(ctx.source_base, ctx.trunc, [ctx.source_base(c.rep) for c in a.coords])
        return True

    # -- Tambara compatibility

    def commutes_with_F(self, x: WittVector) -> bool:
        """c(F x) is the restriction of c(x)."""
        if self.m == 0:
            return True
        lower = SandwichContext(self.pres, self.m - 1, self.n)
        return lower.comparison_c(_F(x)) == lower.middle(self.comparison_c(x).rep)

    def commutes_with_V(self, x: WittVector) -> bool:
        upper = SandwichContext(self.pres, self.m + 1, self.n)
        return upper.comparison_c(_V(x)) == self.pres.intrinsic_V(self.comparison_c(x), self.m + self.n + 1)

    def commutes_with_N(self, x: WittVector) -> bool:
        upper = SandwichContext(self.pres, self.m + 1, self.n)
        return upper.comparison_c(_N(x)) == self.pres.intrinsic_N(self.comparison_c(x), self.m + self.n + 1)


# Witt F, V, N on ghost coordinates over a quotient, where the Witt-side
# universal polynomials would need the base to be a polynomial ring.


def _ghost(x: WittVector) -> list:
    return list(x.to_ghost().coords)


def _F(x: WittVector) -> WittVector:
    w = _ghost(x)
    return WittVector(x.base, TruncSet.p_typical(x.p, len(w) - 2), w[1:], "ghost")


def _V(x: WittVector) -> WittVector:
    w = _ghost(x)
    return WittVector(x.base, TruncSet.p_typical(x.p, len(w)), [x.base.zero] + [c * x.p for c in w], "ghost")


def _N(x: WittVector) -> WittVector:
    w = _ghost(x)
    return WittVector(x.base, TruncSet.p_typical(x.p, len(w)), [w[0]] + [c ** x.p for c in w], "ghost")


def representative_independence_check(ctx: SandwichContext, a: WittVector, rng, bound: int = 2) -> bool:
    """Moving each Witt coordinate (and each ghost lift) by an element of I_n leaves c fixed."""
    g = ctx.pres.gen_I(ctx.n)
    a = a.to_witt()
    shifted = [c.rep + g * Poly([rng.randint(-bound, bound) for _ in range(3)], g.var) for c in a.coords]
    # the Witt-coordinate route works on representatives, so feed it the raw shifted lifts
    if ctx.prismatic_ghost(ctx.corrected_coords(shifted)) != ctx.comparison_c_witt(a):
        return False
    w = [c.rep for c in a.to_ghost().coords]
    w_shifted = [c + g * Poly([rng.randint(-bound, bound)], g.var) for c in w]
    pres = ctx.pres
    comps = []
    for j in range(ctx.m + ctx.n + 1):
        k = pos(j - ctx.n)
        comps.append(pres.component(j)(pres.phi(w_shifted[ctx.m - k], k)))
    return pres.from_transversal(TransversalCoords(pres, tuple(comps))) == ctx.comparison_c(a)


def perturbation_check(ctx: SandwichContext, x, rng, bound: int = 2) -> bool:
    """delta_bullet_quotient is unchanged when x moves by an element of I_(m+n)."""
    g = ctx.pres.gen_I(ctx.m + ctx.n)
    shift = g * Poly([rng.randint(-bound, bound) for _ in range(2)], g.var)
    return ctx.delta_bullet_quotient(_rep(x) + shift) == ctx.delta_bullet_quotient(_rep(x))


def delta_ideal_check(pres: PrismPresentation, k: int, n: int, g: Poly) -> bool:
    """delta_k(I_n) in phi^k(I_(n-k)), tested at the element gen(I_n) * g."""
    f = pres.gen_I(n) * g
    dk = pres.delta_ring.delta_bullet(f, k)[k]
    return dk.rem_monic(pres.twist(k).gen_I(n - k)).is_zero()


def find_epsilon_witness(pres: PrismPresentation, m: int, n: int, rng, samples: int = 200, bound: int = 3):
    """A Witt vector a with eps_m(a) != 0; NoWitnessFound after `samples` draws."""
    ctx = SandwichContext(pres, m, n)
    zero = ctx.target_base.zero
    for i in range(samples):
        a = ctx.random_source(rng, bound)
        eps = ctx.epsilon(a)
        if any(e != zero for e in eps):
            return {
                "model": pres.model,
                "p": pres.p,
                "m": m,
                "n": n,
                "a": [str(c.rep) for c in a.coords],
                "epsilon": [str(e.rep) for e in eps],
                "tries": i + 1,
            }
    raise NoWitnessFound(f"{samples} samples, model={pres.model}, p={pres.p}, m={m}, n={n}")


# module-level entry points


def comparison_c(ctx: SandwichContext, x: WittVector) -> QuotElem:
    return ctx.comparison_c(x)


def comparison_c_witt(ctx: SandwichContext, a) -> QuotElem:
    return ctx.comparison_c_witt(a)


def prismatic_ghost(pres: PrismPresentation, b, m: int, n: int) -> QuotElem:
    return SandwichContext(pres, m, n).prismatic_ghost(b)


def delta_bullet_quotient(ctx: SandwichContext, x) -> WittVector:
    return ctx.delta_bullet_quotient(x)


def epsilon_m(ctx: SandwichContext, a) -> list:
    return ctx.epsilon(a)


def vanish_checks(ctx: SandwichContext, a, f=None) -> dict:
    return ctx.vanish_checks(a, f)
