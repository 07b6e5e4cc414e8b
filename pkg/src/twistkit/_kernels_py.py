"""Pure-Python hot kernels: dense polynomial products/remainders and binary necklaces.

The compiled module `_kernels` exposes the same four functions; `kernels.py`
picks one at import time.
"""

# below this many coefficient products the schoolbook loop wins
KRONECKER_THRESHOLD = 2048


def _all_ints(xs):
    for x in xs:
        if type(x) is not int:
            return False
    return True


def _pack(coeffs, k):
    # sum c_i 2^(k i) for non-negative c_i; k is a multiple of 8
    nb = k // 8
    return int.from_bytes(b"".join(c.to_bytes(nb, "little") for c in coeffs), "little")


def _kronecker_mul(a, b):
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * (len(a) + len(b) - 1)
    bound = ma * mb * min(len(a), len(b))
    k = bound.bit_length() + 2
    k += (-k) % 8
    A = _pack([x if x > 0 else 0 for x in a], k) - _pack([-x if x < 0 else 0 for x in a], k)
    B = _pack([x if x > 0 else 0 for x in b], k) - _pack([-x if x < 0 else 0 for x in b], k)
    n = len(a) + len(b) - 1
    half = 1 << (k - 1)
    # bias every digit into [0, 2^k) so the byte split is exact
    C = A * B + _pack([half] * n, k)
    nb = k // 8
    raw = C.to_bytes(n * nb, "little")
    return [int.from_bytes(raw[i * nb:(i + 1) * nb], "little") - half for i in range(n)]


def dense_mul(a, b):
    """Product of two dense coefficient lists (low degree first)."""
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return []
    if la * lb >= KRONECKER_THRESHOLD and _all_ints(a) and _all_ints(b):
        return _kronecker_mul(a, b)
    out = [0] * (la + lb - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def dense_divmod_monic(f, tail, dg):
    """Divide dense f by the monic t^dg + sum(c t^e for e, c in tail).

    Returns (quotient, remainder) as dense lists; the remainder has length dg.
    """
    r = list(f)
    n = len(r)
    if n <= dg:
        return [], r + [0] * (dg - n)
    q = [0] * (n - dg)
    for i in range(n - 1, dg - 1, -1):
        c = r[i]
        if c:
            s = i - dg
            q[s] = c
            for e, g in tail:
                r[s + e] -= c * g
    return q, r[:dg]


def binary_necklaces(L):
    """All binary necklaces of length L, as (code, primitive period).

    The code reads the word with position 0 as the most significant bit, so the
    numeric order is the lexicographic order.  Generated by the
    Fredricksen-Kessler-Maiorana recursion, in increasing order.
    """
    if L <= 0:
        return [(0, 1)] if L == 0 else []
    out = []
    a = [0] * (L + 1)

    def gen(t, p):
        if t > L:
            if L % p == 0:
                code = 0
                for i in range(1, L + 1):
                    code = (code << 1) | a[i]
                out.append((code, p))
            return
        a[t] = a[t - p]
        gen(t + 1, p)
        if a[t - p] == 0:
            a[t] = 1
            gen(t + 1, t)

    gen(1, 1)
    return out


def canonical_rotation(code, L):
    """Least rotation of an L-bit word and its primitive period."""
    mask = (1 << L) - 1
    best = cur = code
    for s in range(1, L + 1):
        cur = ((cur << 1) | (cur >> (L - 1))) & mask
        if cur == code:
            return best, s
        if cur < best:
            best = cur
    return best, L
