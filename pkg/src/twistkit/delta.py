"""delta-rings and lambda-rings with Adams operations.

A `DeltaRing` is a torsion-free carrier with a Frobenius lift phi; delta, the
iterated delta_n (Witt coordinates of delta_bullet) and theta_n are computed by
exact division.  A `LambdaContext` carries the whole family psi^m and the
integral operations vartheta_d for d a prime power or a product of two primes.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from .errors import UnsupportedVartheta
from .ring import MPoly, Poly, divisors, exact_div_int, factorize, is_prime_power


def power_substitution(k: int):
    """The endomorphism sending every variable v to v^k (identity on constants)."""

    def sub(f):
        if isinstance(f, (int, Fraction)):
            return f
        if isinstance(f, Poly):
            return f.compose_power(k)
        if isinstance(f, MPoly):
            return f.map_exponents([k] * f.nvars)
        raise TypeError(f"no power substitution on {type(f).__name__}")

    return sub


class _Memo:
    """Value-keyed memo table; lookups and stores are serialized."""

    def __init__(self, enabled: bool):
        self.enabled = enabled
        self._d = {}
        self._lock = threading.Lock()

    def get(self, key):
        if not self.enabled:
            return None
        with self._lock:
            return self._d.get(key)

    def put(self, key, value):
        if self.enabled:
            with self._lock:
                self._d[key] = value
        return value

    def clear(self):
        with self._lock:
            self._d.clear()


def _key(f):
    # type tag keeps 1 and Poly(1) apart
    return (type(f).__name__, getattr(f, "var", None), getattr(f, "names", None), f)


class DeltaRing:
    """Carrier with Frobenius lift `frobenius` at the prime p."""

    def __init__(self, p: int, frobenius=None, name: str = "R", cache: bool = True):
        self.p = p
        self.frobenius = frobenius or power_substitution(p)
        self.name = name
        self._memo = _Memo(cache)

    @classmethod
    def integers(cls, p: int, cache: bool = True) -> "DeltaRing":
        return cls(p, lambda f: f, f"Z(p={p})", cache)

    @classmethod
    def polynomials(cls, p: int, cache: bool = True) -> "DeltaRing":
        """Z[vars] with every variable sent to its p-th power (all variables rank one)."""
        return cls(p, power_substitution(p), f"Z[x](p={p})", cache)

    def __repr__(self):
        return f"DeltaRing({self.name})"

    def phi(self, f, times: int = 1):
        for _ in range(times):
            f = self.frobenius(f)
        return f

    def frobenius_lift_check(self, f) -> bool:
        """phi(f) = f^p mod p."""
        try:
            exact_div_int(self.phi(f) - f ** self.p, self.p)
        except ArithmeticError:
            return False
        return True

    def delta(self, f):
        key = ("delta", _key(f))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        return self._memo.put(key, exact_div_int(self.phi(f) - f ** self.p, self.p))

    def delta_bullet(self, f, levels: int) -> list:
        """[delta_0 f, ..., delta_levels f] by inverting the ghost map on (f, phi f, phi^2 f, ...)."""
        key = ("delta_bullet", _key(f), levels)
        hit = self._memo.get(key)
        if hit is not None:
            return list(hit)
        p = self.p
        out = [f]
        phis = f
        for n in range(1, levels + 1):
            phis = self.phi(phis)
            rest = phis
            for i, a in enumerate(out):
                rest = rest - (p ** i) * a ** (p ** (n - i))
            out.append(exact_div_int(rest, p ** n))
        self._memo.put(key, tuple(out))
        return out

    def delta_n(self, f, n: int):
        return self.delta_bullet(f, n)[n]

    def theta(self, f, n: int):
        """theta_n(f) defined by phi(f^(p^(n-1))) = f^(p^n) + p^n theta_n(f); theta_1 = delta."""
        if n < 1:
            raise ValueError("theta_n needs n >= 1")
        key = ("theta", _key(f), n)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        p = self.p
        val = exact_div_int(self.phi(f ** (p ** (n - 1))) - f ** (p ** n), p ** n)
        return self._memo.put(key, val)

    # -- identity checks; each compares two independently computed sides

    def phi_n_expand_check(self, f, n: int) -> bool:
        p = self.p
        rhs = f ** (p ** n)
        for i in range(1, n + 1):
            rhs = rhs + (p ** i) * self.phi(self.theta(f, i), n - i)
        return self.phi(f, n) == rhs

    def delta_theta_check(self, f, n: int) -> bool:
        """delta_n(f) = sum_{k<n} theta_{n-k}(delta_k f)."""
        if n == 0:
            return True
        ds = self.delta_bullet(f, n)
        rhs = 0
        for k in range(n):
            rhs = rhs + self.theta(ds[k], n - k)
        return ds[n] == rhs

    def delta_power_identity_check(self, f, n: int) -> bool:
        """delta(f^(n+1)) = delta(f) * sum_{i<=n} phi(f)^(n-i) f^(p i)."""
        pf = self.phi(f)
        s = 0
        for i in range(n + 1):
            s = s + pf ** (n - i) * f ** (self.p * i)
        return self.delta(f ** (n + 1)) == self.delta(f) * s

    def delta_product_check(self, f, g) -> bool:
        """delta(fg) = phi(f) delta(g) + delta(f) g^p."""
        return self.delta(f * g) == self.phi(f) * self.delta(g) + self.delta(f) * g ** self.p


class LambdaContext:
    """Torsion-free carrier with commuting Frobenius lifts psi^m."""

    def __init__(self, psi=None, name: str = "R", cache: bool = True):
        self._psi = psi or (lambda m, f: power_substitution(m)(f))
        self.name = name
        self._memo = _Memo(cache)

    @classmethod
    def integers(cls, cache: bool = True) -> "LambdaContext":
        return cls(lambda m, f: f, "Z", cache)

    @classmethod
    def polynomials(cls, cache: bool = True) -> "LambdaContext":
        """psi^m: every variable v -> v^m."""
        return cls(None, "Z[q]", cache)

    def psi(self, m: int, f):
        if m == 1:
            return f
        return self._psi(m, f)

    def delta_ring(self, p: int) -> DeltaRing:
        """The delta-structure with phi = psi^p."""
        return DeltaRing(p, lambda f: self.psi(p, f), f"{self.name}(psi^{p})", self._memo.enabled)

    def vartheta(self, f, d: int):
        """vartheta_d(f) for d = p^r or d = p*q (distinct primes)."""
        if d < 2:
            raise UnsupportedVartheta(d)
        key = ("vartheta", _key(f), d)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        fac = factorize(d)
        pp = is_prime_power(d)
        if pp is not None:
            p, r = pp
            rest = self.psi(d, f) - f ** d
            for i in range(1, r):
                rest = rest - (p ** i) * self.psi(p ** (r - i), self.vartheta(f, p ** i))
            val = exact_div_int(rest, d)
        elif len(fac) == 2 and fac[0][1] == 1 and fac[1][1] == 1:
            p, q = fac[0][0], fac[1][0]
            rest = (
                self.psi(d, f)
                - f ** d
                - p * self.psi(q, self.vartheta(f, p))
                - q * self.psi(p, self.vartheta(f, q))
            )
            val = exact_div_int(rest, d)
        else:
            raise UnsupportedVartheta(d)
        return self._memo.put(key, val)

    def vartheta_power_identity_check(self, f, m: int, n: int) -> bool:
        """psi^m(f^n) = f^(mn) + sum over d | mn, d not dividing n, of d psi^(mn/d)(vartheta_d f)."""
        mn = m * n
        rhs = f ** mn
        for d in divisors(mn):
            if n % d:
                rhs = rhs + d * self.psi(mn // d, self.vartheta(f, d))
        return self.psi(m, f ** n) == rhs


# module-level entry points


def delta(R: DeltaRing, f):
    return R.delta(f)


def delta_n(R: DeltaRing, f, n: int):
    return R.delta_n(f, n)


def theta_n(R: DeltaRing, f, n: int):
    return R.theta(f, n)


def phi_n_expand_check(R: DeltaRing, f, n: int) -> bool:
    return R.phi_n_expand_check(f, n)


def delta_theta_check(R: DeltaRing, f, n: int) -> bool:
    return R.delta_theta_check(f, n)


def delta_power_identity_check(R: DeltaRing, f, n: int) -> bool:
    return R.delta_power_identity_check(f, n)


def vartheta(L: LambdaContext, f, d: int):
    return L.vartheta(f, d)


def vartheta_power_identity_check(L: LambdaContext, f, m: int, n: int) -> bool:
    return L.vartheta_power_identity_check(f, m, n)
