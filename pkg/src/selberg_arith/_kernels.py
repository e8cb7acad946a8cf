"""Compiled class-number kernel for large sweeps.

Same algorithm as :func:`selberg_arith.forms.class_number` (primitive reduced
forms partitioned into rho-cycles), but the values (D - b^2)/4 are factored
jointly by sieving over b with the square roots of D modulo small primes.
Valid while D fits comfortably in int64 (D < 2^60).
"""

from __future__ import annotations

import math

import numpy as np

try:
    import numba
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f
        return wrap(args[0]) if args and callable(args[0]) else wrap


@njit(cache=True)
def _isqrt64(n):
    r = np.int64(math.sqrt(n))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@njit(cache=True)
def _powmod(a, e, m):
    r = np.int64(1)
    a = a % m
    while e > 0:
        if e & 1:
            r = r * a % m
        a = a * a % m
        e >>= 1
    return r


@njit(cache=True)
def _sqrtmod(a, p):
    # Tonelli-Shanks; p odd prime, a a nonzero residue
    if p % 4 == 3:
        return _powmod(a, (p + 1) // 4, p)
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = np.int64(2)
    while _powmod(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m = s
    c = _powmod(z, q, p)
    t = _powmod(a, q, p)
    r = _powmod(a, (q + 1) // 2, p)
    while t != 1:
        i = 0
        tt = t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = c
        for _ in range(m - i - 1):
            b = b * b % p
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return r


@njit(cache=True)
def _gcd(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def class_number_kernel(D, primes):
    """Narrow class number of D; -1 signals an internal inconsistency."""
    s = _isqrt64(D)
    b0 = 2 if D % 2 == 0 else 1
    if s < b0:
        return np.int64(-1)
    M = (s - b0) // 2 + 1
    rem = np.empty(M, dtype=np.int64)
    for i in range(M):
        b = b0 + 2 * i
        rem[i] = (D - b * b) // 4
    nmax = rem[0]
    cap = M * 12 + 16
    head = np.full(M, -1, dtype=np.int64)
    nxt = np.empty(cap, dtype=np.int64)
    fp = np.empty(cap, dtype=np.int64)
    fe = np.empty(cap, dtype=np.int64)
    k = 0
    # q = 2
    for i in range(M):
        e = 0
        while rem[i] % 2 == 0:
            rem[i] //= 2
            e += 1
        if e:
            fp[k] = 2
            fe[k] = e
            nxt[k] = head[i]
            head[i] = k
            k += 1
    roots = np.empty(2, dtype=np.int64)
    for qi in range(1, primes.shape[0]):
        q = primes[qi]
        if q * q > nmax:
            break
        dq = D % q
        nr = 0
        if dq == 0:
            roots[0] = 0
            nr = 1
        elif _powmod(dq, (q - 1) // 2, q) == 1:
            r = _sqrtmod(dq, q)
            roots[0] = r
            roots[1] = q - r
            nr = 2
        inv2 = (q + 1) // 2
        for ri in range(nr):
            # b0 + 2i = r mod q
            i0 = ((roots[ri] - b0) % q) * inv2 % q
            for i in range(i0, M, q):
                e = 0
                while rem[i] % q == 0:
                    rem[i] //= q
                    e += 1
                if e:
                    if k >= cap:
                        return np.int64(-1)
                    fp[k] = q
                    fe[k] = e
                    nxt[k] = head[i]
                    head[i] = k
                    k += 1
    # Positive-a reduced forms (a, b).  rho flips the sign of a on reduced
    # forms, so every rho-cycle meets the positive forms in exactly one
    # rho^2-cycle and h(D) is the number of rho^2-cycles among them.
    fcap = 1024
    fa = np.empty(fcap, dtype=np.int64)
    fb = np.empty(fcap, dtype=np.int64)
    nf = 0
    divs = np.empty(4096, dtype=np.int64)
    for i in range(M):
        b = b0 + 2 * i
        n = (D - b * b) // 4
        g = _gcd(b, n)
        lo = (s - b + 2) // 2
        hi = (s + b) // 2
        nd = 1
        divs[0] = 1
        j = head[i]
        while True:
            if j >= 0:
                p = fp[j]
                e = fe[j]
                j = nxt[j]
            elif rem[i] > 1:
                p = rem[i]
                e = 1
                rem[i] = 1
            else:
                break
            cur = nd
            pw = np.int64(1)
            for _ in range(e):
                pw *= p
                if nd + cur > divs.shape[0]:
                    bigger = np.empty(2 * (nd + cur), dtype=np.int64)
                    bigger[:nd] = divs[:nd]
                    divs = bigger
                for x in range(cur):
                    divs[nd] = divs[x] * pw
                    nd += 1
        for x in range(nd):
            a = divs[x]
            if a < lo or a > hi:
                continue
            if g > 1 and _gcd(_gcd(a, g), n // a) != 1:
                continue
            if nf >= fcap:
                fcap *= 2
                na = np.empty(fcap, dtype=np.int64)
                nb = np.empty(fcap, dtype=np.int64)
                na[:nf] = fa[:nf]
                nb[:nf] = fb[:nf]
                fa = na
                fb = nb
            fa[nf] = a
            fb[nf] = b
            nf += 1
    if nf == 0:
        return np.int64(-1)
    # open-addressing set of visited keys a*(s+1) + b (always > 0)
    size = 1
    while size < 2 * nf:
        size *= 2
    mask = size - 1
    table = np.zeros(size, dtype=np.int64)
    width = s + 1
    cycles = 0
    for x in range(nf):
        a = fa[x]
        b = fb[x]
        start = a * width + b
        h = (start * 0x5851F42D4C957F2D) >> 17 & mask
        while table[h] != 0 and table[h] != start:
            h = (h + 1) & mask
        if table[h] == start:
            continue
        cycles += 1
        key = start
        while True:
            # insert key
            h = (key * 0x5851F42D4C957F2D) >> 17 & mask
            while table[h] != 0 and table[h] != key:
                h = (h + 1) & mask
            if table[h] == key:
                if key != start:
                    return np.int64(-1)
                break
            table[h] = key
            for _ in range(2):
                c = (b * b - D) // (4 * a)
                m = 2 * abs(c)
                b2 = s - (s + b) % m
                a, b = c, b2
            if a <= 0 or b <= 0 or b > s or 2 * a < s - b + 1 or 2 * a > s + b:
                return np.int64(-1)
            key = a * width + b
    return np.int64(cycles)


@njit(cache=True)
def class_numbers_kernel(Ds, primes):
    out = np.empty(Ds.shape[0], dtype=np.int64)
    for i in range(Ds.shape[0]):
        out[i] = class_number_kernel(Ds[i], primes)
    return out
