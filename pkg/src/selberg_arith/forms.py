"""Indefinite binary quadratic forms: reduction, rho-cycles, narrow class
numbers, and the correspondence between forms and hyperbolic matrices.

Every comparison against sqrt(D) is made on integers: for non-square D,
``x < sqrt(D)`` iff ``x <= isqrt(D)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import DomainError, InconsistencyError, ResourceLimitError
from .intarith import (content, divisors_from, factor_dict, frakD_failure, is_in_frakD, isqrt,
                       kronecker, primes_upto)


@dataclass(frozen=True, order=True)
class QuadraticForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self) -> bool:
        return content(self.a, self.b, self.c) == 1

    def __iter__(self):
        return iter((self.a, self.b, self.c))


@dataclass(frozen=True)
class MatrixClass:
    g11: int
    g12: int
    g21: int
    g22: int

    def __post_init__(self):
        if self.g11 * self.g22 - self.g12 * self.g21 != 1:
            raise DomainError(f"{self.rows} does not have determinant 1")

    @classmethod
    def from_rows(cls, rows) -> MatrixClass:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @property
    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.g11, self.g12), (self.g21, self.g22)

    @property
    def trace(self) -> int:
        return self.g11 + self.g22

    @property
    def u(self) -> int:
        return gcd(gcd(self.g21, self.g12), self.g22 - self.g11)

    @property
    def D(self) -> int:
        return (self.trace**2 - 4) // self.u**2

    @property
    def is_hyperbolic(self) -> bool:
        return abs(self.trace) > 2


def _check_disc(D: int) -> int:
    if D <= 0 or isqrt(D)[1]:
        raise DomainError(f"discriminant {D} must be positive and non-square")
    return isqrt(D)[0]


def is_reduced(f: QuadraticForm) -> bool:
    """0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b."""
    s = _check_disc(f.disc)
    a2 = 2 * abs(f.a)
    return 0 < f.b <= s and a2 > s - f.b and a2 <= s + f.b


def rho_step(f: QuadraticForm) -> QuadraticForm:
    """(a, b, c) -> (c, b', (b'^2 - D)/(4c)) with b' = -b mod 2c normalized.

    This is f composed with [[0, -1], [1, k]], a determinant-one move, so it
    never leaves the narrow class.
    """
    D = f.disc
    s = _check_disc(D)
    c = f.c
    m = 2 * abs(c)
    if abs(c) <= s:
        # largest b' <= s with b' = -b mod 2|c|
        b2 = s - (s + f.b) % m
    else:
        b2 = (-f.b) % m
        if b2 > abs(c):
            b2 -= m
    num = b2 * b2 - D
    if num % (4 * c):
        raise InconsistencyError(f"rho_step produced a non-integral form from {f}")
    return QuadraticForm(c, b2, num // (4 * c))


def reduce_form(f: QuadraticForm, max_steps: int | None = None) -> tuple[QuadraticForm, int]:
    """Iterate rho until reduced; returns the reduced form and the step count."""
    steps = 0
    if max_steps is None:
        size = max(abs(f.a), abs(f.b), abs(f.c), 2)
        max_steps = 10 * size.bit_length() + 20
    while not is_reduced(f):
        f = rho_step(f)
        steps += 1
        if steps > max_steps:
            raise InconsistencyError(f"reduction did not terminate within {max_steps} steps")
    return f, steps


def reduced_forms(D: int) -> list[QuadraticForm]:
    """All primitive reduced forms of discriminant D."""
    s = _check_disc(D)
    out = []
    for b in range(s, 0, -1):
        if (b - D) % 2:
            continue
        n = (D - b * b) // 4
        lo = (s - b + 2) // 2   # 2|a| >= s - b + 1
        hi = (s + b) // 2       # 2|a| <= s + b
        for a in divisors_from(factor_dict(n)):
            if lo <= a <= hi:
                c = n // a
                if gcd(gcd(a, b), c) == 1:
                    out.append(QuadraticForm(a, b, -c))
                    out.append(QuadraticForm(-a, b, c))
    out.sort()
    return out


@lru_cache(maxsize=4096)
def _cycles(D: int) -> tuple[tuple[QuadraticForm, ...], ...]:
    forms = reduced_forms(D)
    seen = set()
    cycles = []
    for f in forms:
        if f in seen:
            continue
        cyc = [f]
        seen.add(f)
        g = rho_step(f)
        while g != f:
            if g in seen or not is_reduced(g):
                raise InconsistencyError(f"rho is not a permutation of reduced forms of {D}")
            cyc.append(g)
            seen.add(g)
            g = rho_step(g)
        cycles.append(tuple(cyc))
    return tuple(cycles)


def class_cycles(D: int) -> tuple[tuple[QuadraticForm, ...], ...]:
    """Reduced forms of D partitioned into rho-cycles (one cycle per narrow class)."""
    if not is_in_frakD(D):
        raise DomainError(f"D={D}: {frakD_failure(D)}")
    return _cycles(D)


def class_representatives(D: int) -> list[QuadraticForm]:
    return [cyc[0] for cyc in class_cycles(D)]


def class_number(D: int) -> int:
    """Narrow class number h(D): number of rho-cycles of primitive reduced forms."""
    return len(class_cycles(D))


def matrix_to_form(g: MatrixClass) -> QuadraticForm:
    if not g.is_hyperbolic or g.trace < 3:
        raise DomainError(f"{g.rows} is not hyperbolic with positive trace")
    u = g.u
    return QuadraticForm(g.g21 // u, (g.g22 - g.g11) // u, -g.g12 // u)


def form_to_matrix(f: QuadraticForm, t: int, u: int) -> MatrixClass:
    """[[ (t - bu)/2, -cu ], [ au, (t + bu)/2 ]]."""
    if f.disc * u * u != t * t - 4:
        raise DomainError(f"disc {f.disc} of {tuple(f)} is not (t^2-4)/u^2 for t={t}, u={u}")
    if (t - f.b * u) % 2:
        raise InconsistencyError("non-integral matrix entries")
    g = MatrixClass((t - f.b * u) // 2, -f.c * u, f.a * u, (t + f.b * u) // 2)
    if g.u != u or g.trace != t:
        raise InconsistencyError(f"form {tuple(f)} is not primitive for u={u}")
    return g


def _conj(m, g, ginv):
    # ginv * m * g on 4-tuples
    a, b, c, d = m
    p, q, r, s = g
    x, y, z, w = ginv
    a1, b1, c1, d1 = a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s
    return (x * a1 + y * c1, x * b1 + y * d1, z * a1 + w * c1, z * b1 + w * d1)


_GENS = (
    ((0, -1, 1, 0), (0, 1, -1, 0)),
    ((1, 1, 0, 1), (1, -1, 0, 1)),
    ((1, -1, 0, 1), (1, 1, 0, 1)),
)


def _orbit_count(t: int, u: int, bound: int) -> int:
    mats = set()
    for a in range(-bound, bound + 1):
        d = t - a
        if abs(d) > bound:
            continue
        n = a * d - 1
        if n == 0:
            continue
        for b0 in divisors_from(factor_dict(abs(n))):
            if b0 > bound:
                continue
            c0 = abs(n) // b0
            if c0 > bound:
                continue
            for b in (b0, -b0):
                c = n // b
                if gcd(gcd(c, b), d - a) == u:
                    mats.add((a, b, c, d))
    seen = set()
    orbits = 0
    for m in mats:
        if m in seen:
            continue
        orbits += 1
        seen.add(m)
        queue = deque([m])
        while queue:
            x = queue.popleft()
            for g, ginv in _GENS:
                y = _conj(x, g, ginv)
                if y in mats and y not in seen:
                    seen.add(y)
                    queue.append(y)
    return orbits


def hyperbolic_class_count_oracle(t: int, u: int, bound: int = 50,
                                  max_bound: int = 1600) -> int:
    """Count SL2(Z)-conjugacy classes with trace t and gcd-invariant u by brute force.

    Matrices with entries bounded by ``bound`` are merged along conjugation by
    the generators S, T, T^-1; the bound is doubled until two consecutive
    counts agree.
    """
    if t < 3:
        raise DomainError("trace must be at least 3")
    n = t * t - 4
    if n % (u * u) or not is_in_frakD(n // (u * u)):
        raise DomainError(f"(t, u) = ({t}, {u}) does not give a discriminant")
    prev = _orbit_count(t, u, bound)
    while bound < max_bound:
        bound *= 2
        cur = _orbit_count(t, u, bound)
        if cur == prev:
            return cur
        prev = cur
    raise ResourceLimitError(f"orbit count for (t={t}, u={u}) did not stabilize by bound {max_bound}")


# ------------------------------------------------------------ batch h(D)

_KERNEL_PRIME_LIMIT = 1 << 17
_KERNEL_D_LIMIT = 4 * _KERNEL_PRIME_LIMIT**2
_kernel_primes = None


def _kernel():
    global _kernel_primes
    try:
        import numpy as np
        from . import _kernels
    except ImportError:  # pragma: no cover
        return None, None
    if not _kernels.HAVE_NUMBA:
        return None, None
    if _kernel_primes is None:
        _kernel_primes = np.array(primes_upto(_KERNEL_PRIME_LIMIT), dtype=np.int64)
    return _kernels, _kernel_primes


def class_numbers(Ds, use_kernel: bool = True) -> dict[int, int]:
    """h(D) for many discriminants at once.

    Discriminants below ~6.9e10 go through the compiled kernel when numba is
    present; everything else uses :func:`class_number`.
    """
    Ds = sorted(set(Ds))
    for D in Ds:
        if not is_in_frakD(D):
            raise DomainError(f"D={D}: {frakD_failure(D)}")
    out = {}
    kern, primes = _kernel() if use_kernel else (None, None)
    fast = [D for D in Ds if D < _KERNEL_D_LIMIT] if kern is not None else []
    if fast:
        import numpy as np
        hs = kern.class_numbers_kernel(np.array(fast, dtype=np.int64), primes)
        for D, h in zip(fast, hs.tolist()):
            if h < 1:
                raise InconsistencyError(f"class-number kernel failed on D={D}")
            out[D] = h
    for D in Ds:
        if D not in out:
            out[D] = class_number(D)
    return out


# ------------------------------------------------- analytic cross-check


def is_fundamental(D: int) -> bool:
    if not is_in_frakD(D):
        return False
    if D % 4 == 1:
        return all(r == 1 for r in factor_dict(D).values())
    m = D // 4
    return m % 4 in (2, 3) and all(r == 1 for r in factor_dict(m).values())


def quadratic_character(D: int):
    """Values chi_D(a) for a = 0..D-1, built multiplicatively from Legendre symbols."""
    import numpy as np
    fac = {}
    chi = np.zeros(D, dtype=np.int8)
    chi[1] = 1
    for a in range(2, D):
        f = factor_dict(a)
        val = 1
        for p, r in f.items():
            if p not in fac:
                if p == 2:
                    fac[p] = 0 if D % 2 == 0 else (1 if D % 8 in (1, 7) else -1)
                else:
                    fac[p] = kronecker(D, p)
            val *= fac[p] ** r
            if val == 0:
                break
        chi[a] = val
    return chi


def dirichlet_L1(D: int, periods: int = 50) -> float:
    """L(1, chi_D) from partial sums, averaged over one full period.

    S_N = sum_{n <= N} chi(n)/n oscillates with period D once N is large; the
    mean of S_N over N in (periods*D, (periods+1)*D] cancels the oscillation.
    """
    import numpy as np
    chi = quadratic_character(D).astype(np.float64)
    n = np.arange(1, (periods + 1) * D + 1, dtype=np.float64)
    terms = np.tile(chi, periods + 1)
    terms = np.roll(terms, -1) / n   # terms[i] = chi(i+1)/(i+1)
    partial = np.cumsum(terms)
    return float(partial[periods * D:].mean())
