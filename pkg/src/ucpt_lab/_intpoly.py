"""Integer polynomial kernels (lists of Python ints, lowest degree first).

Products and exact quotients use Kronecker substitution: a polynomial is
packed into one big integer at a power-of-two radix wide enough that no
coefficient overflows, so a single big-int multiply or divide does the work.
"""

from __future__ import annotations

from math import gcd

from .errors import NotDivisible


def strip(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def maxbits(a) -> int:
    return max((abs(v).bit_length() for v in a), default=0)


def pack(a, bits: int) -> int:
    v = 0
    for c in reversed(a):
        v = (v << bits) + c
    return v


def unpack(v: int, bits: int, n: int):
    """Balanced-digit inverse of ``pack`` for n coefficients."""
    out = []
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    for _ in range(n):
        r = v & mask
        if r >= half:
            r -= 1 << bits
        out.append(r)
        v = (v - r) >> bits
    if v != 0:
        raise NotDivisible("packed value did not unpack cleanly")
    return strip(out)


def add(a, b):
    n = max(len(a), len(b))
    return strip([(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)])


def sub(a, b):
    n = max(len(a), len(b))
    return strip([(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)])


def mul(a, b):
    if not a or not b:
        return []
    if len(a) == 1:
        return [a[0] * c for c in b]
    if len(b) == 1:
        return [b[0] * c for c in a]
    bits = maxbits(a) + maxbits(b) + min(len(a), len(b)).bit_length() + 2
    return unpack(pack(a, bits) * pack(b, bits), bits, len(a) + len(b) - 1)


def exact_div(n, d):
    """Quotient q with q*d == n, raising NotDivisible when d does not divide n."""
    if not d:
        raise ZeroDivisionError("division by the zero polynomial")
    if not n:
        return []
    dq = len(n) - len(d)
    if dq < 0:
        raise NotDivisible("divisor has larger degree")
    if len(d) == 1:
        q = []
        for c in n:
            v, r = divmod(c, d[0])
            if r:
                raise NotDivisible("integer coefficient not divisible")
            q.append(v)
        return q
    if n[-1] % d[-1]:
        raise NotDivisible("leading coefficient not divisible")
    # any integer factor of n has coefficients below 2^(deg n) * ||n||_2 (Mignotte)
    bits = maxbits(n) + len(n) + len(n).bit_length() + 4
    pn, pd = pack(n, bits), pack(d, bits)
    qv, r = divmod(pn, pd)
    if r:
        raise NotDivisible("polynomial division leaves a remainder")
    q = unpack(qv, bits, dq + 1)
    if len(q) != dq + 1 or q[-1] * d[-1] != n[-1]:
        raise NotDivisible("quotient failed the leading-term check")
    return q


def eval_frac(a, p: int, q: int) -> int:
    """q^deg * a(p/q), an integer that vanishes iff p/q is a root."""
    n = len(a) - 1
    # Horner in homogeneous form: sum a_i p^i q^(n-i)
    acc = 0
    qp = 1
    for k in range(n, -1, -1):
        acc = acc * p + a[k] * qp
        qp *= q
    return acc if n >= 0 else 0


def div_linear(a, p: int, q: int):
    """Divide a by (q x - p) over the integers; None if it does not divide."""
    # a = (q x - p) * b; solve from the top coefficient down
    n = len(a) - 1
    b = [0] * n
    rem = list(a)
    for k in range(n - 1, -1, -1):
        c, r = divmod(rem[k + 1], q)
        if r:
            return None
        b[k] = c
        rem[k + 1] = 0
        rem[k] += p * c
    if rem[0] != 0:
        return None
    return b


def content(a) -> int:
    g = 0
    for v in a:
        g = gcd(g, v)
    return g


def primitive(a):
    g = content(a)
    if g == 0:
        return []
    a = [v // g for v in a]
    if a[-1] < 0:
        a = [-v for v in a]
    return a
