"""Elementary integer arithmetic: valuations, Legendre symbols, square roots,
factorization and the exhaustive quadratic-congruence root counter."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt as _isqrt

import numpy as np

from .errors import DomainError, ResourceLimitError

FACTOR_BOUND = 10**12
EXHAUSTION_BOUND = 10**6


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, r in self.factors:
            if p <= last or r < 1:
                raise DomainError(f"malformed factorization {self.factors}")
            last = p
            prod *= p**r
        if prod != self.value:
            raise DomainError(f"factors {self.factors} do not multiply to {self.value}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self):
        return iter(self.factors)


def valuation(p: int, a: int) -> int:
    """Exponent of the prime p in a (p^k || a)."""
    if a == 0:
        raise DomainError("infinite valuation: a = 0")
    k = 0
    a = abs(a)
    while a % p == 0:
        a //= p
        k += 1
    return k


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def kronecker(a: int, n: int) -> int:
    """Legendre symbol (a/n) for an odd prime n."""
    if n < 3 or n % 2 == 0 or not is_prime(n):
        raise DomainError(f"bottom argument {n} must be an odd prime")
    a %= n
    if a == 0:
        return 0
    return 1 if pow(a, (n - 1) // 2, n) == 1 else -1


def isqrt(n: int) -> tuple[int, bool]:
    """(floor(sqrt(n)), n is a perfect square)."""
    if n < 0:
        raise DomainError("isqrt of a negative number")
    r = _isqrt(n)
    return r, r * r == n


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n)[1]


def is_in_frakD(D: int) -> bool:
    """Positive non-square discriminants: D > 0, D = 0, 1 mod 4."""
    return D > 0 and D % 4 in (0, 1) and not isqrt(D)[1]


def frakD_failure(D: int) -> str | None:
    """Name of the first defining predicate of the discriminant set that D fails."""
    if D <= 0:
        return f"{D} is not positive"
    if D % 4 not in (0, 1):
        return f"{D} is not 0 or 1 mod 4 ({D} = {D % 4} mod 4)"
    if isqrt(D)[1]:
        return f"{D} is a perfect square"
    return None


def count_congruence_roots(A: int, B: int, C: int, p: int, e: int,
                           bound: int = EXHAUSTION_BOUND) -> int:
    """Number of m mod p^e with A m^2 + B m + C = 0 mod p^e, by exhaustion.

    Deliberately no Hensel lifting: this is the reference the closed forms
    are tested against.
    """
    if e < 0:
        raise DomainError("negative exponent")
    q = p**e
    if q > bound:
        raise ResourceLimitError(f"modulus {p}^{e} exceeds exhaustion bound {bound}")
    if e == 0:
        return 1
    A %= q
    B %= q
    C %= q
    return sum(1 for m in range(q) if (A * m * m + B * m + C) % q == 0)


def factorize(n: int) -> Factorization:
    """Prime factorization by trial division (n <= 10^12)."""
    if n < 2:
        raise DomainError(f"cannot factor {n} < 2")
    if n > FACTOR_BOUND:
        raise ResourceLimitError(f"{n} exceeds trial-division bound {FACTOR_BOUND}")
    return Factorization(n, tuple(sorted(_factor_dict(n).items())))


def _trial_factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for q in (f, f + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class _SmallestPrimeFactor:
    """Growable smallest-prime-factor sieve."""

    def __init__(self):
        self.limit = 0
        self.spf = np.zeros(1, dtype=np.int32)

    def ensure(self, n: int) -> None:
        if n <= self.limit:
            return
        limit = max(n, 2 * self.limit, 1 << 16)
        spf = np.zeros(limit + 1, dtype=np.int32)
        for p in range(2, _isqrt(limit) + 1):
            if spf[p] == 0:
                block = spf[p * p::p]
                block[block == 0] = p
        unset = spf == 0
        spf[unset] = np.arange(limit + 1, dtype=np.int32)[unset]
        self.spf = spf
        self.limit = limit

    def factor(self, n: int) -> dict[int, int]:
        out: dict[int, int] = {}
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out[p] = k
        return out


_SPF = _SmallestPrimeFactor()
SIEVE_LIMIT = 1 << 24


def _factor_dict(n: int) -> dict[int, int]:
    if n <= SIEVE_LIMIT:
        _SPF.ensure(n)
        return _SPF.factor(n)
    return _trial_factor(n)


def factor_dict(n: int) -> dict[int, int]:
    """{p: r} for n >= 1 (empty for 1); sieve-backed for small n."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    return _factor_dict(n)


def merge_factors(*parts: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for part in parts:
        for p, r in part.items():
            out[p] = out.get(p, 0) + r
    return out


def divisors_from(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for p, r in fac.items():
        divs = [d * p**i for d in divs for i in range(r + 1)]
    return divs


def divisors(n: int) -> list[int]:
    return divisors_from(factor_dict(n))


def mobius(n: int) -> int:
    fac = factor_dict(n)
    if any(r > 1 for r in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    _SPF.ensure(n)
    idx = np.nonzero(_SPF.spf[2:n + 1] == np.arange(2, n + 1))[0] + 2
    return [int(p) for p in idx]


def content(*xs: int) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
