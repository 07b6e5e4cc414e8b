"""Exact arithmetic substrate.

Univariate sparse polynomials (`Poly`), packed-exponent multivariate polynomials
(`MPoly`), quotients by monic polynomials (`MonicQuotRing`), u-adically
truncated series (`SeriesTrunc`), and a p-adic linear solver.

Coefficients are Python ints.  Rationals (`fractions.Fraction`) are accepted
wherever a computation needs p-local integers, i.e. denominators prime to p.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import kernels
from .errors import NonMonicModulus, NoSolution, NotDivisible

# dense kernels are used once the product of term counts passes this size
_DENSE_MIN = 64


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _div_exact_scalar(c, k, degree):
    """c / k where k must divide the numerator of c."""
    if type(c) is int:
        q, r = divmod(c, k)
        if r:
            raise NotDivisible(degree, k, c)
        return q
    if type(c) is Fraction:
        q, r = divmod(c.numerator, k)
        if r:
            raise NotDivisible(degree, k, c)
        return _norm(Fraction(q, c.denominator))
    # SeriesTrunc / Poly coefficients nested: defer to the element itself
    return exact_div_int(c, k)


def is_p_integral(c, p: int) -> bool:
    if type(c) is Fraction:
        return c.denominator % p != 0
    return True


def mod_p_power(c, pk: int) -> int:
    """Image of a p-local rational (or int) in Z/pk."""
    if type(c) is Fraction:
        return c.numerator * pow(c.denominator, -1, pk) % pk
    return c % pk


def _common_denominator(coeffs: dict) -> int:
    den = 1
    for c in coeffs.values():
        if type(c) is Fraction:
            den = den * c.denominator // gcd(den, c.denominator)
    return den


def _scaled(f, den: int):
    if den == 1:
        return f
    return Poly._raw({e: int(c * den) for e, c in f._c.items()}, f.var)


# ---------------------------------------------------------------- univariate


class Poly:
    """Sparse univariate polynomial: degree -> nonzero coefficient."""

    __slots__ = ("_c", "var", "_hash")

    def __init__(self, coeffs=None, var: str = "q"):
        self.var = var
        self._hash = None
        if coeffs is None:
            self._c = {}
        elif isinstance(coeffs, dict):
            self._c = {e: _norm(c) for e, c in coeffs.items() if c}
        else:
            self._c = {e: _norm(c) for e, c in enumerate(coeffs) if c}

    @classmethod
    def _raw(cls, d, var):
        p = cls.__new__(cls)
        p._c = d
        p.var = var
        p._hash = None
        return p

    @classmethod
    def gen(cls, var: str = "q") -> "Poly":
        return cls._raw({1: 1}, var)

    @classmethod
    def const(cls, c, var: str = "q") -> "Poly":
        c = _norm(c)
        return cls._raw({0: c} if c else {}, var)

    @classmethod
    def monomial(cls, e: int, c=1, var: str = "q") -> "Poly":
        return cls._raw({e: c} if c else {}, var)

    # -- inspection
    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def lc(self):
        return self._c[max(self._c)] if self._c else 0

    def coeff(self, e: int):
        return self._c.get(e, 0)

    def terms(self):
        return sorted(self._c.items())

    def items(self):
        return self._c.items()

    def nterms(self) -> int:
        return len(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return not self._c or (len(self._c) == 1 and 0 in self._c)

    def constant_term(self):
        return self._c.get(0, 0)

    def dense(self, length: int | None = None) -> list:
        n = self.degree() + 1 if length is None else length
        out = [0] * n
        for e, c in self._c.items():
            out[e] = c
        return out

    @classmethod
    def from_dense(cls, coeffs, var: str = "q") -> "Poly":
        return cls._raw({e: _norm(c) for e, c in enumerate(coeffs) if c}, var)

    def monomial_data(self):
        """(coefficient, exponent) if self is c*var^e, else None."""
        if len(self._c) == 1:
            (e, c), = self._c.items()
            return c, e
        return None

    # -- coercion
    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.var)
        return NotImplemented

    # -- arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = dict(self._c)
        for e, c in o._c.items():
            v = d.get(e, 0) + c
            if v:
                d[e] = _norm(v)
            else:
                d.pop(e, None)
        return Poly._raw(d, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({e: -c for e, c in self._c.items()}, self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw({}, self.var)
            return Poly._raw({e: _norm(c * other) for e, c in self._c.items()}, self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return Poly._raw({}, self.var)
        da_, db_ = _common_denominator(a), _common_denominator(b)
        if da_ != 1 or db_ != 1:
            # multiply integer numerators, then put the denominator back once
            prod = _scaled(self, da_) * _scaled(other, db_)
            den = da_ * db_
            return Poly._raw({e: _norm(Fraction(c, den)) for e, c in prod._c.items()}, self.var)
        na, nb = len(a), len(b)
        if na * nb >= _DENSE_MIN:
            da, db = max(a) + 1, max(b) + 1
            # dense only pays off when both operands are reasonably full
            if 4 * na >= da and 4 * nb >= db:
                return Poly.from_dense(kernels.dense_mul(self.dense(), other.dense()), self.var)
        d = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                d[e] = d.get(e, 0) + c1 * c2
        return Poly._raw({e: _norm(c) for e, c in d.items() if c}, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, c in sorted(self._c.items(), reverse=True):
            if e == 0:
                mon = str(c)
            else:
                x = self.var if e == 1 else f"{self.var}^{e}"
                if c == 1:
                    mon = x
                elif c == -1:
                    mon = "-" + x
                else:
                    mon = f"{c}*{x}" if type(c) is int else f"({c})*{x}"
            parts.append(mon)
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    # -- structural maps
    def compose_power(self, k: int) -> "Poly":
        """f(var^k)."""
        if k == 1:
            return self
        return Poly._raw({e * k: c for e, c in self._c.items()}, self.var)

    def substitute(self, g):
        """f(g) by Horner; g may be any ring element supporting + and *."""
        if not self._c:
            return g * 0
        result = None
        for e in range(self.degree(), -1, -1):
            c = self._c.get(e, 0)
            result = g * 0 + c if result is None else result * g + c
        return result

    def evaluate(self, x):
        return self.substitute(x)

    def map_coeffs(self, fn) -> "Poly":
        return Poly({e: fn(c) for e, c in self._c.items()}, self.var)

    def content(self) -> int:
        g = 0
        for c in self._c.values():
            g = gcd(g, c.numerator if type(c) is Fraction else c)
        return g

    # -- division
    def divmod_monic(self, g: "Poly"):
        if g.lc() != 1:
            raise NonMonicModulus(g)
        dg = g.degree()
        if dg == 0:
            return self, Poly._raw({}, self.var)
        if self.degree() < dg:
            return Poly._raw({}, self.var), self
        tail = [(e, c) for e, c in g._c.items() if e != dg]
        q, r = kernels.dense_divmod_monic(self.dense(), tail, dg)
        return Poly.from_dense(q, self.var), Poly.from_dense(r, self.var)

    def rem_monic(self, g: "Poly") -> "Poly":
        return self.divmod_monic(g)[1]

    def exact_div_int(self, k) -> "Poly":
        if k == 1:
            return self
        return Poly._raw({e: _div_exact_scalar(c, k, e) for e, c in self._c.items()}, self.var)

    def exact_div(self, g: "Poly") -> "Poly":
        """Exact quotient self / g; the leading coefficient of g must divide each step."""
        if g.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        dg, lc = g.degree(), g.lc()
        r = dict(self._c)
        q = {}
        while r:
            top = max(r)
            if top < dg:
                raise NotDivisible(top, g, r[top])
            c = r[top]
            if type(lc) is int and type(c) is int:
                qc, rem = divmod(c, lc)
                if rem:
                    raise NotDivisible(top, g, c)
            else:
                qc = _norm(Fraction(c) / lc)
            s = top - dg
            q[s] = qc
            for e, gc in g._c.items():
                v = r.get(s + e, 0) - qc * gc
                if v:
                    r[s + e] = _norm(v)
                else:
                    r.pop(s + e, None)
        return Poly._raw(q, self.var)

    def derivative(self) -> "Poly":
        return Poly._raw({e - 1: c * e for e, c in self._c.items() if e}, self.var)


def poly_rem_monic(f: Poly, g: Poly) -> Poly:
    """Remainder of f modulo the monic g; raises NonMonicModulus otherwise."""
    return f.rem_monic(g)


def q_int(n: int, var: str = "q", step: int = 1) -> Poly:
    """(n)_{var^step} = 1 + var^step + ... + var^(step(n-1))."""
    return Poly._raw({step * i: 1 for i in range(n)}, var)


def poly_divmod_field(a: Poly, b: Poly):
    """Division with remainder over Q."""
    if b.is_zero():
        raise ZeroDivisionError
    r = dict(a._c)
    q = {}
    db, lc = b.degree(), Fraction(b.lc())
    while r and max(r) >= db:
        top = max(r)
        c = _norm(Fraction(r[top]) / lc)
        s = top - db
        q[s] = c
        for e, gc in b._c.items():
            v = r.get(s + e, 0) - c * gc
            if v:
                r[s + e] = _norm(v)
            else:
                r.pop(s + e, None)
    return Poly._raw(q, a.var), Poly._raw(r, a.var)


def poly_inverse_mod(a: Poly, m: Poly) -> Poly:
    """Inverse of a modulo m over Q (extended Euclid); raises NoSolution if not coprime."""
    r0, r1 = m, a.rem_monic(m) if m.lc() == 1 else poly_divmod_field(a, m)[1]
    s0, s1 = Poly.const(0, a.var), Poly.const(1, a.var)
    while not r1.is_zero():
        qt, rr = poly_divmod_field(r0, r1)
        r0, r1 = r1, rr
        s0, s1 = s1, s0 - qt * s1
    if r0.degree() != 0:
        raise NoSolution(f"{a} is not invertible modulo {m}")
    inv = s0 * (Fraction(1) / Fraction(r0.constant_term()))
    return poly_divmod_field(inv, m)[1]


# -------------------------------------------------------------- multivariate

_EXP_BITS = 20
_EXP_MASK = (1 << _EXP_BITS) - 1


def pack_exponents(exps) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > _EXP_MASK:
            raise ValueError("exponent out of packed range")
        key |= e << (_EXP_BITS * i)
    return key


def unpack_exponents(key: int, nvars: int) -> tuple:
    return tuple((key >> (_EXP_BITS * i)) & _EXP_MASK for i in range(nvars))


class MPoly:
    """Sparse multivariate polynomial over Z with exponent vectors packed into ints."""

    __slots__ = ("_c", "names", "_hash")

    def __init__(self, terms=None, names=("x", "y")):
        self.names = tuple(names)
        self._hash = None
        self._c = {}
        if terms:
            for key, c in terms.items():
                if isinstance(key, tuple):
                    key = pack_exponents(key)
                if c:
                    self._c[key] = self._c.get(key, 0) + c
            self._c = {k: c for k, c in self._c.items() if c}

    @classmethod
    def _raw(cls, d, names):
        m = cls.__new__(cls)
        m._c = d
        m.names = names
        m._hash = None
        return m

    @classmethod
    def var(cls, i: int, names) -> "MPoly":
        return cls._raw({1 << (_EXP_BITS * i): 1}, tuple(names))

    @classmethod
    def const(cls, c, names) -> "MPoly":
        return cls._raw({0: c} if c else {}, tuple(names))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def terms(self):
        return sorted((unpack_exponents(k, self.nvars), c) for k, c in self._c.items())

    def nterms(self) -> int:
        return len(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def _coerce(self, other):
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(other, self.names)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = dict(self._c)
        for k, c in o._c.items():
            v = d.get(k, 0) + c
            if v:
                d[k] = v
            else:
                d.pop(k, None)
        return MPoly._raw(d, self.names)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw({k: -c for k, c in self._c.items()}, self.names)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MPoly._raw({}, self.names)
            return MPoly._raw({k: c * other for k, c in self._c.items()}, self.names)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        d = {}
        get = d.get
        for k2, c2 in b.items():
            for k1, c1 in a.items():
                k = k1 + k2
                d[k] = get(k, 0) + c1 * c2
        return MPoly._raw({k: c for k, c in d.items() if c}, self.names)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        if n == 0:
            return MPoly.const(1, self.names)
        if len(self._c) == 1:
            (k, c), = self._c.items()
            return MPoly._raw({k * n: c ** n}, self.names)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for exps, c in sorted(self.terms(), reverse=True):
            mon = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, exps) if e
            )
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    def exact_div_int(self, k) -> "MPoly":
        if k == 1:
            return self
        out = {}
        for key, c in self._c.items():
            q, r = divmod(c, k)
            if r:
                raise NotDivisible(unpack_exponents(key, self.nvars), k, c)
            out[key] = q
        return MPoly._raw(out, self.names)

    def map_exponents(self, powers) -> "MPoly":
        """Substitute var_i -> var_i^powers[i]."""
        out = {}
        for key, c in self._c.items():
            exps = unpack_exponents(key, self.nvars)
            nk = pack_exponents([e * k for e, k in zip(exps, powers)])
            out[nk] = out.get(nk, 0) + c
        return MPoly._raw({k: c for k, c in out.items() if c}, self.names)

    def degree_in(self, i: int) -> int:
        shift = _EXP_BITS * i
        return max(((k >> shift) & _EXP_MASK for k in self._c), default=-1)

    def evaluate(self, values, one=1):
        """Evaluate at ring elements; powers of each value are cached."""
        n = self.nvars
        maxdeg = [self.degree_in(i) for i in range(n)]
        powers = []
        for i in range(n):
            pw = [one]
            for _ in range(max(maxdeg[i], 0)):
                pw.append(pw[-1] * values[i])
            powers.append(pw)
        total = one * 0
        for key, c in self._c.items():
            term = None
            for i in range(n):
                e = (key >> (_EXP_BITS * i)) & _EXP_MASK
                if e:
                    term = powers[i][e] if term is None else term * powers[i][e]
            total = total + (one * c if term is None else term * c)
        return total

    def substitute(self, i: int, value: "MPoly") -> "MPoly":
        vals = [MPoly.var(j, self.names) for j in range(self.nvars)]
        vals[i] = value
        return self.evaluate(vals, MPoly.const(1, self.names))

    def coefficients_in(self, i: int) -> dict:
        """Split as sum_e coeff_e * var_i^e; returns {e: MPoly free of var_i}."""
        shift = _EXP_BITS * i
        out = {}
        for key, c in self._c.items():
            e = (key >> shift) & _EXP_MASK
            rest = key & ~(_EXP_MASK << shift)
            out.setdefault(e, {})[rest] = c
        return {e: MPoly._raw(d, self.names) for e, d in out.items()}

    def rem_monic_in(self, i: int, modulus: Poly) -> "MPoly":
        """Reduce modulo a monic univariate polynomial in variable i."""
        if modulus.lc() != 1:
            raise NonMonicModulus(modulus)
        dg = modulus.degree()
        parts = self.coefficients_in(i)
        tail = [(e, c) for e, c in modulus.items() if e != dg]
        while parts and max(parts) >= dg:
            top = max(parts)
            c = parts.pop(top)
            s = top - dg
            for e, gc in tail:
                parts[s + e] = parts.get(s + e, MPoly.const(0, self.names)) - c * gc
        out = MPoly.const(0, self.names)
        v = MPoly.var(i, self.names)
        for e, c in parts.items():
            if not c.is_zero():
                out = out + c * v ** e
        return out

    def to_poly(self, i: int, var: str | None = None) -> Poly:
        """View as univariate in variable i; every other exponent must be 0."""
        shift = _EXP_BITS * i
        d = {}
        for key, c in self._c.items():
            if key & ~(_EXP_MASK << shift):
                raise ValueError("not univariate")
            d[(key >> shift) & _EXP_MASK] = c
        return Poly(d, var or self.names[i])

    @classmethod
    def from_poly(cls, f: Poly, i: int, names) -> "MPoly":
        return cls._raw({e << (_EXP_BITS * i): c for e, c in f.items()}, tuple(names))


# ------------------------------------------------------------ monic quotient


class MonicQuotRing:
    """R[t]/(g) with g monic; R is Z (p-local rationals allowed) or Z/coeff_mod."""

    def __init__(self, modulus: Poly, coeff_mod: int | None = None, name: str | None = None):
        if modulus.lc() != 1:
            raise NonMonicModulus(modulus)
        if modulus.degree() < 0:
            raise NonMonicModulus(modulus)
        self.modulus = modulus
        self.coeff_mod = coeff_mod
        self.var = modulus.var
        self.name = name or f"{'Z' if coeff_mod is None else f'Z/{coeff_mod}'}[{self.var}]/({modulus})"
        self._key = (modulus, coeff_mod)
        self._tail = [(e, c) for e, c in modulus.items() if e != modulus.degree()]

    torsion_free = property(lambda self: self.coeff_mod is None)

    @property
    def rank(self) -> int:
        return self.modulus.degree()

    def __eq__(self, other):
        return isinstance(other, MonicQuotRing) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return self.name

    def reduce(self, f: Poly) -> Poly:
        dg = self.modulus.degree()
        if f.degree() >= dg:
            _, r = kernels.dense_divmod_monic(f.dense(), self._tail, dg)
            f = Poly.from_dense(r, self.var)
        elif f.var != self.var:
            f = Poly._raw(dict(f._c), self.var)
        if self.coeff_mod is not None:
            m = self.coeff_mod
            f = Poly({e: mod_p_power(c, m) for e, c in f.items()}, self.var)
        return f

    def __call__(self, x) -> "QuotElem":
        if isinstance(x, QuotElem):
            if x.ring == self:
                return x
            return QuotElem(self, self.reduce(x.rep))
        if isinstance(x, (int, Fraction)):
            x = Poly.const(x, self.var)
        if isinstance(x, Poly):
            return QuotElem(self, self.reduce(x))
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    @property
    def zero(self) -> "QuotElem":
        return QuotElem(self, Poly.const(0, self.var))

    @property
    def one(self) -> "QuotElem":
        return self(1)

    def gen(self) -> "QuotElem":
        return self(Poly.gen(self.var))

    def basis(self):
        return [self(Poly.monomial(i, 1, self.var)) for i in range(self.rank)]

    def random_element(self, rng, bound: int = 3) -> "QuotElem":
        return QuotElem(
            self, self.reduce(Poly([rng.randint(-bound, bound) for _ in range(self.rank)], self.var))
        )


class QuotElem:
    __slots__ = ("ring", "rep")

    def __init__(self, ring: MonicQuotRing, rep: Poly):
        self.ring = ring
        self.rep = rep

    def _coerce(self, other):
        if isinstance(other, QuotElem):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other.rep
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.ring.var)
        if isinstance(other, Poly):
            return other
        return NotImplemented

    def _wrap(self, f: Poly, reduce=True):
        return QuotElem(self.ring, self.ring.reduce(f) if reduce else f)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        f = self.rep + o
        return self._wrap(f, self.ring.coeff_mod is not None or f.degree() >= self.ring.rank)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.rep, self.ring.coeff_mod is not None)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        f = self.rep - o
        return self._wrap(f, self.ring.coeff_mod is not None or f.degree() >= self.ring.rank)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(o - self.rep)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.rep * o)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, QuotElem):
            return self.ring == other.ring and self.rep == other.rep
        if isinstance(other, (int, Fraction, Poly)):
            return self.rep == self.ring.reduce(
                other if isinstance(other, Poly) else Poly.const(other, self.ring.var)
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.rep))

    def __bool__(self):
        return not self.rep.is_zero()

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def lift(self) -> Poly:
        return self.rep

    def exact_div_int(self, k) -> "QuotElem":
        if self.ring.coeff_mod is not None:
            raise ArithmeticError("exact division is undefined with torsion coefficients")
        return QuotElem(self.ring, self.rep.exact_div_int(k))

    def __repr__(self):
        return f"[{self.rep}]"

    __str__ = __repr__


# ------------------------------------------------------------- series


class SeriesTrunc:
    """Power series in one variable known modulo var^order, exact coefficients."""

    __slots__ = ("c", "order", "var")

    def __init__(self, coeffs, order: int, var: str = "u"):
        c = [_norm(x) for x in list(coeffs)[:order]]
        c += [0] * (order - len(c))
        self.c = c
        self.order = order
        self.var = var

    @classmethod
    def from_poly(cls, f: Poly, order: int, var: str = "u", shift: int = 0) -> "SeriesTrunc":
        """Expand f(var + shift); shift=1 turns a polynomial in q into one in u=q-1."""
        if shift == 0:
            return cls(f.dense(max(order, f.degree() + 1))[:order], order, var)
        base = cls([shift, 1], order, var)
        return f.substitute(base) if not f.is_zero() else cls([], order, var)

    @classmethod
    def gen(cls, order: int, var: str = "u") -> "SeriesTrunc":
        return cls([0, 1], order, var)

    def _coerce(self, other):
        if isinstance(other, SeriesTrunc):
            return other
        if isinstance(other, (int, Fraction)):
            return SeriesTrunc([other], self.order, self.var)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = min(self.order, o.order)
        return SeriesTrunc([self.c[i] + o.c[i] for i in range(n)], n, self.var)

    __radd__ = __add__

    def __neg__(self):
        return SeriesTrunc([-x for x in self.c], self.order, self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SeriesTrunc([x * other for x in self.c], self.order, self.var)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = min(self.order, o.order)
        prod = kernels.dense_mul(self.c[:n], o.c[:n])
        return SeriesTrunc(prod[:n], n, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = SeriesTrunc([1], self.order, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = min(self.order, o.order)
        return self.c[:n] == o.c[:n]

    def __hash__(self):
        return hash((tuple(self.c), self.order))

    def __repr__(self):
        shown = " + ".join(f"{c}*{self.var}^{i}" for i, c in enumerate(self.c) if c) or "0"
        return f"{shown} + O({self.var}^{self.order})"

    def valuation(self) -> int:
        for i, x in enumerate(self.c):
            if x:
                return i
        return self.order

    def is_zero(self) -> bool:
        return not any(self.c)

    def exact_div_int(self, k) -> "SeriesTrunc":
        return SeriesTrunc([_div_exact_scalar(x, k, i) for i, x in enumerate(self.c)], self.order, self.var)

    def shift_down(self, v: int) -> "SeriesTrunc":
        """Divide by var^v; the first v coefficients must vanish.  Loses v digits of order."""
        for i in range(v):
            if self.c[i]:
                raise NotDivisible(i, f"{self.var}^{v}", self.c[i])
        return SeriesTrunc(self.c[v:], self.order - v, self.var)

    def divide(self, other: "SeriesTrunc") -> "SeriesTrunc":
        """Exact quotient self/other in Z[[var]], checking integrality of every coefficient."""
        v = other.valuation()
        if v >= other.order:
            raise ZeroDivisionError("division by a series that vanishes to its order")
        num = self.shift_down(v) if v else self
        den = other.shift_down(v) if v else other
        n = min(num.order, den.order)
        lead = den.c[0]
        q = []
        for j in range(n):
            acc = num.c[j]
            for i in range(max(0, j - n + 1), j):
                acc -= q[i] * den.c[j - i]
            q.append(_div_exact_scalar(acc, lead, j))
        return SeriesTrunc(q, n, self.var)

    def inverse(self) -> "SeriesTrunc":
        return SeriesTrunc([1], self.order, self.var).divide(self)

    def compose(self, g: "SeriesTrunc") -> "SeriesTrunc":
        """self(g) for g with zero constant term."""
        if g.c[0]:
            raise ValueError("inner series must have zero constant term")
        n = min(self.order, g.order)
        result = SeriesTrunc([0], n, self.var)
        for coeff in reversed(self.c[:n]):
            result = result * g + coeff
        return result


def exact_div_int(x, k):
    """Exact division by an integer on ints, rationals, polynomials, series and quotients."""
    if type(x) is int:
        q, r = divmod(x, k)
        if r:
            raise NotDivisible(0, k, x)
        return q
    if type(x) is Fraction:
        return _div_exact_scalar(x, k, 0)
    return x.exact_div_int(k)


# ------------------------------------------------------------- linear algebra


def _val(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def linear_solve_mod(M, b, p: int, P: int):
    """Solve M x = b over Z/p^P by p-adic elimination.

    Pivots are chosen with minimal p-adic valuation (units first); a pivot
    p^v * u costs v digits when the solution is lifted back.  Free variables are
    set to 0.  Raises NoSolution when the system is inconsistent mod p^P.
    """
    mod = p ** P
    rows = len(M)
    cols = len(M[0]) if rows else 0
    A = [[mod_p_power(x, mod) for x in row] + [mod_p_power(bb, mod)] for row, bb in zip(M, b)]
    pivots = []
    used_cols = set()
    used_rows = 0
    for _ in range(min(rows, cols)):
        best = None
        for r in range(used_rows, rows):
            for c in range(cols):
                if c in used_cols:
                    continue
                v = _val(A[r][c], p, P)
                if v < P and (best is None or v < best[0]):
                    best = (v, r, c)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, r, c = best
        A[used_rows], A[r] = A[r], A[used_rows]
        prow = A[used_rows]
        unit = (prow[c] // p ** v) % mod
        inv = pow(unit, -1, mod)
        for rr in range(rows):
            if rr == used_rows:
                continue
            x = A[rr][c]
            if x:
                # x = p^v * f with f integral because v is minimal
                f = (x // p ** v) * inv % mod
                A[rr] = [(a - f * pv) % mod for a, pv in zip(A[rr], prow)]
        pivots.append((used_rows, c, v, inv))
        used_cols.add(c)
        used_rows += 1
    for r in range(used_rows, rows):
        if A[r][-1] % mod:
            raise NoSolution(f"row {r} reduces to 0 = {A[r][-1]} mod {p}^{P}")
    x = [0] * cols
    for r, c, v, inv in pivots:
        rhs = A[r][-1]
        if rhs % p ** v:
            raise NoSolution(f"pivot p^{v} does not divide right-hand side")
        x[c] = (rhs // p ** v) * inv % mod
    return x


def mat_vec_mod(M, x, mod: int):
    return [sum(a * b for a, b in zip(row, x)) % mod for row in M]


# ---------------------------------------------------------------- number theory


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple:
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple:
    if n < 1:
        raise ValueError("divisors needs n >= 1")
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return tuple(sorted(set(small + [n // d for d in small])))


def is_prime_power(n: int):
    """(p, r) with n = p^r, r >= 1, else None."""
    f = factorize(n) if n > 1 else ()
    if len(f) == 1:
        return f[0]
    return None


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def pos(x: int) -> int:
    """Positive part max(x, 0)."""
    return x if x > 0 else 0


def iverson(cond) -> int:
    return 1 if cond else 0


# ---------------------------------------------------------------- CRT


def crt_extend(x: Poly, M: Poly, target: Poly, Phi: Poly, p: int | None, level=None):
    """Lift x (mod M) to y (mod M*Phi) with y = target mod Phi.

    Computed over Q and then checked: integral coefficients when p is None,
    p-local ones otherwise.  Raises NotInImage when the lift does not exist.
    """
    from .errors import NotInImage

    inv = _cached_inverse(M, Phi)
    diff = (target - x).rem_monic(Phi)
    y = (diff * inv).rem_monic(Phi)
    for e, c in y.items():
        if type(c) is Fraction and (p is None or c.denominator % p == 0):
            raise NotInImage(level, f"correction coefficient {c} in degree {e} is not integral")
    return x + M * y


@lru_cache(maxsize=512)
def _cached_inverse(M: Poly, Phi: Poly) -> Poly:
    return poly_inverse_mod(M.rem_monic(Phi), Phi)


# ---------------------------------------------------------------- base rings
#
# Lightweight handles naming the coefficient ring of a Witt vector or a delta
# ring: each knows zero, one, coercion and whether it is torsion-free.


class IntegerRing:
    name = "Z"
    torsion_free = True
    zero = 0
    one = 1

    def __call__(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def __repr__(self):
        return "ZZ"

    def random_element(self, rng, bound: int = 20):
        return rng.randint(-bound, bound)


ZZ = IntegerRing()


class PolyRing:
    torsion_free = True

    def __init__(self, var: str = "q"):
        self.var = var
        self.name = f"Z[{var}]"

    def __call__(self, x):
        if isinstance(x, Poly):
            return x
        return Poly.const(x, self.var)

    @property
    def zero(self):
        return Poly.const(0, self.var)

    @property
    def one(self):
        return Poly.const(1, self.var)

    def gen(self):
        return Poly.gen(self.var)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.var == self.var

    def __hash__(self):
        return hash(("PolyRing", self.var))

    def __repr__(self):
        return self.name

    def random_element(self, rng, degree: int = 3, bound: int = 5):
        return Poly([rng.randint(-bound, bound) for _ in range(degree + 1)], self.var)


class MPolyRing:
    torsion_free = True

    def __init__(self, names=("x", "y")):
        self.names = tuple(names)
        self.name = f"Z[{','.join(self.names)}]"

    def __call__(self, x):
        if isinstance(x, MPoly):
            return x
        return MPoly.const(x, self.names)

    @property
    def zero(self):
        return MPoly.const(0, self.names)

    @property
    def one(self):
        return MPoly.const(1, self.names)

    def gens(self):
        return [MPoly.var(i, self.names) for i in range(len(self.names))]

    def __eq__(self, other):
        return isinstance(other, MPolyRing) and other.names == self.names

    def __hash__(self):
        return hash(("MPolyRing", self.names))

    def __repr__(self):
        return self.name


def finite_field(p: int) -> MonicQuotRing:
    """F_p realized as Z[t]/(t) with coefficients mod p."""
    return MonicQuotRing(Poly.gen("t"), coeff_mod=p, name=f"F_{p}")
