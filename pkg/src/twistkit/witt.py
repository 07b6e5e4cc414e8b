"""Witt vectors with trivial action: p-typical and big (divisor-closed truncation).

Ghost coordinates make every structure map componentwise.  Witt-coordinate
arithmetic goes through universal polynomials: the ghost formula is applied on a
symbolic cover Z[a_i, b_i], pulled back through the inverse ghost map, and the
resulting integer polynomials are evaluated on the actual coordinates.  This is
what makes W_n(F_p) computable.
"""

from __future__ import annotations

import json
import os
import threading
from math import gcd

from .errors import NotDivisible, NotInGhostImage
from .expression import OrbitWord, TambaraExpression, Term
from .ring import ZZ, MPoly, MPolyRing, Poly, PolyRing, divisors, exact_div_int


class TruncSet:
    """Finite divisor-closed index set; p-typical sets are {1, p, ..., p^n}."""

    __slots__ = ("indices", "p", "_pos")

    def __init__(self, indices, p: int | None = None):
        idx = tuple(sorted(set(indices)))
        if not idx or idx[0] != 1:
            raise ValueError("a truncation set must contain 1")
        s = set(idx)
        for n in idx:
            for d in divisors(n):
                if d not in s:
                    raise ValueError(f"truncation set not divisor-closed: {d} | {n} missing")
        self.indices = idx
        self.p = p
        self._pos = {n: i for i, n in enumerate(idx)}

    @classmethod
    def p_typical(cls, p: int, levels: int) -> "TruncSet":
        return cls([p ** i for i in range(levels + 1)], p)

    @classmethod
    def divisors_of(cls, n: int) -> "TruncSet":
        return cls(divisors(n))

    @property
    def levels(self) -> int:
        if self.p is None:
            raise ValueError("levels are defined for p-typical sets only")
        return len(self.indices) - 1

    def __len__(self):
        return len(self.indices)

    def position(self, n: int) -> int:
        return self._pos[n]

    def __contains__(self, n):
        return n in self._pos

    def __eq__(self, other):
        return isinstance(other, TruncSet) and self.indices == other.indices and self.p == other.p

    def __hash__(self):
        return hash((self.indices, self.p))

    def __repr__(self):
        if self.p is not None:
            return f"TruncSet(p={self.p}, levels={self.levels})"
        return f"TruncSet({list(self.indices)})"

    def cache_key(self) -> dict:
        if self.p is not None:
            return {"p": self.p, "levels": self.levels}
        return {"p": None, "levels": list(self.indices)}


def infer_base(x):
    if isinstance(x, int):
        return ZZ
    if isinstance(x, Poly):
        return PolyRing(x.var)
    if isinstance(x, MPoly):
        return MPolyRing(x.names)
    ring = getattr(x, "ring", None)
    if ring is not None:
        return ring
    raise TypeError(f"cannot infer a base ring for {type(x).__name__}")


# ---------------------------------------------------------------- ghost maps


def ghost_coords(coords, trunc: TruncSet) -> list:
    """w_n = sum over d | n in the set of d * a_d^(n/d)."""
    out = []
    for n in trunc.indices:
        w = None
        for d in divisors(n):
            if d in trunc:
                term = coords[trunc.position(d)] ** (n // d) * d
                w = term if w is None else w + term
        out.append(w)
    return out


def from_ghost_coords(ghosts, trunc: TruncSet) -> list:
    """Inverse of ghost_coords by exact division; NotInGhostImage on failure."""
    a = []
    for j, n in enumerate(trunc.indices):
        rest = ghosts[j]
        for d in divisors(n):
            if d < n and d in trunc:
                rest = rest - a[trunc.position(d)] ** (n // d) * d
        try:
            a.append(exact_div_int(rest, n))
        except (NotDivisible, ArithmeticError) as exc:
            raise NotInGhostImage(n, str(exc)) from None
    return a


# ------------------------------------------------------- universal polynomials


class UniversalCache:
    """Universal Witt polynomials keyed by the JSON of {"op", "p", "levels"}.

    Kept in memory; when `path` is set (or TWISTKIT_CACHE names a file) new
    entries are also written there as JSON.
    """

    def __init__(self, path: str | None = None):
        self.path = path if path is not None else os.environ.get("TWISTKIT_CACHE") or None
        self._mem = {}
        self._lock = threading.Lock()
        self._loaded = False

    @staticmethod
    def key(op: str, trunc: TruncSet) -> str:
        return json.dumps({"op": op, **trunc.cache_key()}, sort_keys=True)

    @staticmethod
    def encode(polys) -> dict:
        names = list(polys[0].names) if polys else []
        return {
            "names": names,
            "coords": [
                [[list(exps), c] for exps, c in p.terms()] for p in polys
            ],
        }

    @staticmethod
    def decode(obj) -> list:
        names = tuple(obj["names"])
        return [MPoly({tuple(e): c for e, c in coord}, names) for coord in obj["coords"]]

    def _load(self):
        if self._loaded:
            return
        self._loaded = True
        if self.path and os.path.exists(self.path):
            with open(self.path) as fh:
                raw = json.load(fh)
            for k, v in raw.items():
                self._mem.setdefault(k, self.decode(v))

    def get(self, op: str, trunc: TruncSet, build):
        k = self.key(op, trunc)
        with self._lock:
            self._load()
            hit = self._mem.get(k)
        if hit is not None:
            return hit
        polys = build()
        with self._lock:
            self._mem[k] = polys
            if self.path:
                self._save()
        return polys

    def _save(self):
        data = {k: self.encode(v) for k, v in sorted(self._mem.items())}
        tmp = self.path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(data, fh, sort_keys=True)
        os.replace(tmp, self.path)

    def dump(self) -> str:
        with self._lock:
            return json.dumps({k: self.encode(v) for k, v in sorted(self._mem.items())}, sort_keys=True)

    def clear(self):
        with self._lock:
            self._mem.clear()


CACHE = UniversalCache()


def _cover(trunc: TruncSet, nargs: int):
    letters = "abc"[:nargs]
    names = tuple(f"{ch}{i}" for ch in letters for i in range(len(trunc)))
    n = len(trunc)
    gens = [[MPoly.var(j * n + i, names) for i in range(n)] for j in range(nargs)]
    return names, gens


def _universal(op: str, trunc: TruncSet, nargs: int, ghost_map, out_trunc: TruncSet):
    def build():
        names, gens = _cover(trunc, nargs)
        ghosts = [ghost_coords(g, trunc) for g in gens]
        return from_ghost_coords(ghost_map(*ghosts), out_trunc)

    return CACHE.get(op, trunc, build)


def _need_p(trunc: TruncSet, at_least: int = 0) -> int:
    if trunc.p is None:
        raise ValueError("operation is defined on p-typical Witt vectors only")
    if trunc.levels < at_least:
        raise ValueError(f"need at least {at_least} levels")
    return trunc.p


def universal_add(trunc):
    return _universal("add", trunc, 2, lambda x, y: [a + b for a, b in zip(x, y)], trunc)


def universal_mul(trunc):
    return _universal("mul", trunc, 2, lambda x, y: [a * b for a, b in zip(x, y)], trunc)


def universal_neg(trunc):
    return _universal("neg", trunc, 1, lambda x: [-a for a in x], trunc)


def universal_F(trunc):
    p = _need_p(trunc, 1)
    return _universal("F", trunc, 1, lambda w: w[1:], TruncSet.p_typical(p, trunc.levels - 1))


def universal_N(trunc):
    """Norm W_n -> W_(n+1), keyed by the source truncation."""
    p = _need_p(trunc)
    target = TruncSet.p_typical(p, trunc.levels + 1)
    return _universal("N", trunc, 1, lambda w: [w[0]] + [x ** p for x in w], target)


def universal_delta(trunc):
    p = _need_p(trunc, 1)
    return _universal(
        "delta",
        trunc,
        1,
        lambda w: [exact_div_int(w[k + 1] - w[k] ** p, p) for k in range(len(w) - 1)],
        TruncSet.p_typical(p, trunc.levels - 1),
    )


def universal_theta(trunc, i: int):
    p = _need_p(trunc, 1)
    pi = p ** i
    return _universal(
        f"theta{i}",
        trunc,
        1,
        lambda w: [
            exact_div_int(w[k + 1] ** (pi // p) - w[k] ** pi, pi) for k in range(len(w) - 1)
        ],
        TruncSet.p_typical(p, trunc.levels - 1),
    )


def _eval_all(polys, args, base):
    values = [c for a in args for c in a]
    one = base.one
    return tuple(poly.evaluate(values, one) for poly in polys)


# ------------------------------------------------------------------ vectors


class WittVector:
    """Coordinates over `base` indexed by `trunc`, in the Witt or ghost system."""

    __slots__ = ("base", "trunc", "coords", "system")

    def __init__(self, base, trunc: TruncSet, coords, system: str = "witt"):
        if system not in ("witt", "ghost"):
            raise ValueError("system must be 'witt' or 'ghost'")
        coords = tuple(base(c) for c in coords)
        if len(coords) != len(trunc):
            raise ValueError(f"{len(coords)} coordinates for a truncation of size {len(trunc)}")
        self.base = base
        self.trunc = trunc
        self.coords = coords
        self.system = system

    @classmethod
    def witt(cls, coords, p: int | None = None, base=None, trunc: TruncSet | None = None):
        coords = list(coords)
        base = base or infer_base(coords[0])
        trunc = trunc or TruncSet.p_typical(p, len(coords) - 1)
        return cls(base, trunc, coords, "witt")

    @classmethod
    def ghost_vector(cls, coords, p: int | None = None, base=None, trunc: TruncSet | None = None):
        coords = list(coords)
        base = base or infer_base(coords[0])
        trunc = trunc or TruncSet.p_typical(p, len(coords) - 1)
        return cls(base, trunc, coords, "ghost")

    @classmethod
    def zero(cls, base, trunc):
        return cls(base, trunc, [base.zero] * len(trunc))

    @classmethod
    def one(cls, base, trunc):
        return cls(base, trunc, [base.one] + [base.zero] * (len(trunc) - 1))

    @classmethod
    def teichmuller(cls, a, trunc, base=None):
        base = base or infer_base(a)
        return cls(base, trunc, [a] + [base.zero] * (len(trunc) - 1))

    @property
    def p(self):
        return self.trunc.p

    def to_ghost(self) -> "WittVector":
        if self.system == "ghost":
            return self
        return WittVector(self.base, self.trunc, ghost_coords(self.coords, self.trunc), "ghost")

    def to_witt(self) -> "WittVector":
        if self.system == "witt":
            return self
        if not self.base.torsion_free:
            raise ValueError(f"ghost inversion needs a torsion-free base, not {self.base}")
        return WittVector(self.base, self.trunc, from_ghost_coords(self.coords, self.trunc), "witt")

    def _same(self, other):
        if not isinstance(other, WittVector):
            raise TypeError("expected a WittVector")
        if other.trunc != self.trunc:
            raise ValueError(f"truncation mismatch: {self.trunc} vs {other.trunc}")
        return other.to_ghost() if self.system == "ghost" else other.to_witt()

    def __add__(self, other):
        return witt_add(self, other)

    def __sub__(self, other):
        return witt_add(self, witt_neg(other))

    def __neg__(self):
        return witt_neg(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return witt_scale(self, other)
        return witt_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = WittVector.one(self.base, self.trunc)
        if self.system == "ghost":
            result = result.to_ghost()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, WittVector) or other.trunc != self.trunc:
            return NotImplemented
        if self.system == other.system:
            return self.coords == other.coords
        if self.base.torsion_free:
            return self.to_ghost().coords == other.to_ghost().coords
        return self.coords == other.to_witt().coords

    def __hash__(self):
        return hash((self.trunc, self.to_witt().coords if self.base.torsion_free else self.coords))

    def __repr__(self):
        inner = ", ".join(str(c) for c in self.coords)
        return f"({inner})_{self.system}"

    def restrict(self, levels: int) -> "WittVector":
        """Projection W_n -> W_levels (p-typical); keeps the coordinate system."""
        _need_p(self.trunc)
        t = TruncSet.p_typical(self.p, levels)
        return WittVector(self.base, t, self.coords[: levels + 1], self.system)


def ghost(w: WittVector) -> WittVector:
    return w.to_ghost()


def from_ghost(w: WittVector) -> WittVector:
    return w.to_witt()


def witt_add(x: WittVector, y: WittVector) -> WittVector:
    y = x._same(y)
    if x.system == "ghost":
        return WittVector(x.base, x.trunc, [a + b for a, b in zip(x.coords, y.coords)], "ghost")
    return WittVector(x.base, x.trunc, _eval_all(universal_add(x.trunc), [x.coords, y.coords], x.base))


def witt_mul(x: WittVector, y: WittVector) -> WittVector:
    y = x._same(y)
    if x.system == "ghost":
        return WittVector(x.base, x.trunc, [a * b for a, b in zip(x.coords, y.coords)], "ghost")
    return WittVector(x.base, x.trunc, _eval_all(universal_mul(x.trunc), [x.coords, y.coords], x.base))


def witt_neg(x: WittVector) -> WittVector:
    if x.system == "ghost":
        return WittVector(x.base, x.trunc, [-a for a in x.coords], "ghost")
    return WittVector(x.base, x.trunc, _eval_all(universal_neg(x.trunc), [x.coords], x.base))


def witt_scale(x: WittVector, k: int) -> WittVector:
    """k * x by repeated doubling with Witt addition."""
    if k < 0:
        return witt_scale(witt_neg(x), -k)
    result = WittVector.zero(x.base, x.trunc)
    if x.system == "ghost":
        result = result.to_ghost()
    base = x
    while k:
        if k & 1:
            result = result + base
        k >>= 1
        if k:
            base = base + base
    return result


def additive_order(x: WittVector, bound: int = 10 ** 4) -> int:
    acc = x
    zero = WittVector.zero(x.base, x.trunc)
    for n in range(1, bound + 1):
        if acc == zero:
            return n
        acc = acc + x
    raise ArithmeticError(f"order exceeds {bound}")


# -------------------------------------------------------- p-typical F / V / N


def F_p(x: WittVector) -> WittVector:
    p = _need_p(x.trunc, 1)
    target = TruncSet.p_typical(p, x.trunc.levels - 1)
    if x.system == "ghost":
        return WittVector(x.base, target, x.coords[1:], "ghost")
    return WittVector(x.base, target, _eval_all(universal_F(x.trunc), [x.coords], x.base))


def V_p(x: WittVector) -> WittVector:
    p = _need_p(x.trunc)
    target = TruncSet.p_typical(p, x.trunc.levels + 1)
    if x.system == "ghost":
        return WittVector(x.base, target, [x.base.zero] + [w * p for w in x.coords], "ghost")
    return WittVector(x.base, target, (x.base.zero,) + x.coords, "witt")


def N_p(x: WittVector) -> WittVector:
    p = _need_p(x.trunc)
    target = TruncSet.p_typical(p, x.trunc.levels + 1)
    if x.system == "ghost":
        return WittVector(x.base, target, [x.coords[0]] + [w ** p for w in x.coords], "ghost")
    return WittVector(x.base, target, _eval_all(universal_N(x.trunc), [x.coords], x.base))


def witt_delta(x: WittVector) -> WittVector:
    """The delta-structure of W(R): W_n(R) -> W_(n-1)(R), with Frobenius F."""
    p = _need_p(x.trunc, 1)
    target = TruncSet.p_typical(p, x.trunc.levels - 1)
    if x.system == "ghost":
        w = x.coords
        return WittVector(
            x.base, target, [exact_div_int(w[k + 1] - w[k] ** p, p) for k in range(len(w) - 1)], "ghost"
        )
    return WittVector(x.base, target, _eval_all(universal_delta(x.trunc), [x.coords], x.base))


def witt_theta(x: WittVector, i: int) -> WittVector:
    """theta_i for the Witt delta-structure: (F(x^(p^(i-1))) - x^(p^i)) / p^i."""
    p = _need_p(x.trunc, 1)
    target = TruncSet.p_typical(p, x.trunc.levels - 1)
    if x.system == "ghost":
        w, pi = x.coords, p ** i
        return WittVector(
            x.base,
            target,
            [exact_div_int(w[k + 1] ** (pi // p) - w[k] ** pi, pi) for k in range(len(w) - 1)],
            "ghost",
        )
    if x.base.torsion_free:
        # the universal theta_i polynomials get large quickly; inverting the ghost map is cheaper
        return witt_theta(x.to_ghost(), i).to_witt()
    return WittVector(x.base, target, _eval_all(universal_theta(x.trunc, i), [x.coords], x.base))


def V_iter(x: WittVector, times: int) -> WittVector:
    for _ in range(times):
        x = V_p(x)
    return x


def N_iter(x: WittVector, times: int) -> WittVector:
    for _ in range(times):
        x = N_p(x)
    return x


# ----------------------------------------------------------- big Witt F / V / N


def _ghost_big(x: WittVector, n: int) -> WittVector:
    if x.trunc.indices != divisors(n):
        raise ValueError(f"expected the truncation set of divisors of {n}, got {x.trunc}")
    return x.to_ghost()


def _back(out: WittVector, like: WittVector) -> WittVector:
    return out if like.system == "ghost" else out.to_witt()


def F_int(m: int, n: int, x: WittVector) -> WittVector:
    """F^(mn)_n: ghost w_(k) -> w_(mk) for k | n."""
    g = _ghost_big(x, m * n)
    t = TruncSet.divisors_of(n)
    out = WittVector(x.base, t, [g.coords[g.trunc.position(m * k)] for k in t.indices], "ghost")
    return _back(out, x)


def V_int(m: int, n: int, x: WittVector) -> WittVector:
    """V^(mn)_n: ghost k -> [m | k] * m * w_(k/m) for k | mn."""
    g = _ghost_big(x, n)
    t = TruncSet.divisors_of(m * n)
    coords = [
        g.coords[g.trunc.position(k // m)] * m if k % m == 0 else x.base.zero for k in t.indices
    ]
    return _back(WittVector(x.base, t, coords, "ghost"), x)


def N_int(m: int, n: int, x: WittVector) -> WittVector:
    """N^(mn)_n: ghost k -> w_(k/g)^g with g = gcd(m, k), for k | mn."""
    g = _ghost_big(x, n)
    t = TruncSet.divisors_of(m * n)
    coords = []
    for k in t.indices:
        e = gcd(m, k)
        coords.append(g.coords[g.trunc.position(k // e)] ** e)
    return _back(WittVector(x.base, t, coords, "ghost"), x)


# ------------------------------------------------------------ decompositions


def brun_decompose(x: WittVector) -> TambaraExpression:
    """(a_0, ..., a_n) as sum_i V^(p^n)_(p^(n-i)) N^(p^(n-i))_1 (a_i)."""
    p = _need_p(x.trunc)
    n = x.trunc.levels
    top = p ** n
    terms = [Term(p ** (n - i), 1, OrbitWord((f"a{i}",))) for i in range(n + 1)]
    return TambaraExpression(top, 1, terms, kind="brun")


def brun_values(x: WittVector) -> dict:
    return {f"a{i}": c for i, c in enumerate(x.to_witt().coords)}


class WittRealization:
    """p-typical Witt vectors in Witt coordinates; the level index is p^j."""

    def __init__(self, p: int, base=ZZ):
        self.p = p
        self.base = base

    def _lvl(self, index: int) -> int:
        j = 0
        while index > 1:
            if index % self.p:
                raise ValueError(f"{index} is not a power of {self.p}")
            index //= self.p
            j += 1
        return j

    def trunc(self, index):
        return TruncSet.p_typical(self.p, self._lvl(index))

    def zero(self, index):
        return WittVector.zero(self.base, self.trunc(index))

    def one(self, index):
        return WittVector.one(self.base, self.trunc(index))

    def add(self, index, a, b):
        return a + b

    def mul(self, index, a, b):
        return a * b

    def V(self, m, d, x):
        return V_iter(x, self._lvl(m) - self._lvl(d))

    def N(self, d, k, x):
        return N_iter(x, self._lvl(d) - self._lvl(k))

    def letter(self, a):
        return WittVector.witt([a], self.p, self.base)


def brun_check(x: WittVector) -> bool:
    """Evaluating the Brun decomposition in Witt coordinates reproduces x."""
    real = WittRealization(x.p, x.base)
    values = {k: real.letter(v) for k, v in brun_values(x).items()}
    return brun_decompose(x).evaluate(real, values).to_witt() == x.to_witt()


# ------------------------------------------------------------- delta_bullet


def delta_bullet_witt(R, f, levels: int, base=None) -> WittVector:
    """(f, delta f, delta_2 f, ...) in Witt coordinates over the carrier of R."""
    base = base or infer_base(f)
    return WittVector(base, TruncSet.p_typical(R.p, levels), R.delta_bullet(f, levels), "witt")


def norm_identity_check(x: WittVector) -> bool:
    """N(Rx) = x - V delta(x) in Witt coordinates, R the restriction W_n -> W_(n-1)."""
    n = x.trunc.levels
    x = x.to_witt()
    lhs = N_p(x.restrict(n - 1))
    rhs = x - V_p(witt_delta(x))
    return lhs.coords == rhs.coords


def norm_theta_identity(x: WittVector):
    """Both sides of N^n(R^n x) = x - sum_i V^i theta_i(x), Witt coordinates."""
    n = x.trunc.levels
    x = x.to_witt()
    lhs = N_iter(x.restrict(0), n)
    rhs = x
    for i in range(1, n + 1):
        th = witt_theta(x, i).restrict(n - i)
        rhs = rhs - V_iter(th, i)
    return lhs, rhs


def norm_theta_check(R, f, n: int) -> bool:
    """The identity above at x = delta_bullet(f) in W_n of the carrier of R."""
    if n == 0:
        return True
    lhs, rhs = norm_theta_identity(delta_bullet_witt(R, f, n))
    return lhs.coords == rhs.coords
