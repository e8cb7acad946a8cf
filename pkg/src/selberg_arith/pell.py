"""Solutions of t^2 - D u^2 = 4 and the unit arithmetic built on them.

A unit of the order of discriminant D is carried exactly as the pair (t, u)
standing for (t + u sqrt(D)) / 2.  Floating point only enters in
:func:`log_epsilon`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, InconsistencyError
from .intarith import divisors_from, factor_dict, frakD_failure, isqrt, merge_factors


@dataclass(frozen=True)
class QuadUnit:
    """(t + u sqrt(D)) / 2 with t^2 - D u^2 = 4."""
    t: int
    u: int
    D: int

    def __post_init__(self):
        if self.t * self.t - self.D * self.u * self.u != 4:
            raise DomainError(f"({self.t}, {self.u}) does not solve t^2 - {self.D} u^2 = 4")

    def __mul__(self, other: QuadUnit) -> QuadUnit:
        if self.D != other.D:
            raise DomainError("units of different discriminants")
        return QuadUnit(*_mul(self.t, self.u, other.t, other.u, self.D), self.D)

    def __pow__(self, j: int) -> QuadUnit:
        return QuadUnit(*_pow(self.t, self.u, self.D, j), self.D)


@dataclass(frozen=True)
class PellSolution(QuadUnit):
    j: int = 1

    def __post_init__(self):
        super().__post_init__()
        if self.t < 3 or self.u < 1 or self.j < 1:
            raise DomainError("Pell solutions are positive with t >= 3")

    @property
    def unit(self) -> QuadUnit:
        return QuadUnit(self.t, self.u, self.D)


@dataclass(frozen=True)
class FiberMember:
    u: int
    D: int
    j: int


@dataclass(frozen=True)
class TraceFiber:
    t: int
    members: tuple[FiberMember, ...]


def _mul(t1, u1, t2, u2, D):
    return (t1 * t2 + D * u1 * u2) // 2, (t1 * u2 + u1 * t2) // 2


def _pow(t, u, D, j):
    if j < 0:
        raise DomainError("negative power")
    rt, ru = 2, 0
    while j:
        if j & 1:
            rt, ru = _mul(rt, ru, t, u, D)
        t, u = _mul(t, u, t, u, D)
        j >>= 1
    return rt, ru


def _require_disc(D: int) -> None:
    why = frakD_failure(D)
    if why is not None:
        raise DomainError(f"D={D} is not a positive non-square discriminant: {why}")


@lru_cache(maxsize=1 << 16)
def _fundamental(D: int) -> tuple[int, int]:
    # Walk the convergents p/q of omega = (delta + sqrt D)/2, delta = D mod 2.
    # p - q*omega is a unit iff its norm ((2p - delta q)^2 - D q^2)/4 is +-1,
    # and every unit of Z[omega] shows up this way (D > 4).
    s, _ = isqrt(D)
    delta = D & 1
    P, Q = delta, 2
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while True:
        if Q > 0:
            a = (P + s) // Q
        else:
            a = -((P + s) // -Q) - 1
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        t = 2 * p - delta * q
        norm4 = t * t - D * q * q
        if norm4 == 4:
            return t, q
        if norm4 == -4:
            return (t * t + D * q * q) // 2, t * q
        P = a * Q - P
        Q = (D - P * P) // Q


def fundamental_solution(D: int) -> PellSolution:
    """Smallest positive solution of t^2 - D u^2 = 4, by continued fractions."""
    _require_disc(D)
    t, u = _fundamental(D)
    return PellSolution(t, u, D, 1)


def nth_solution(D: int, j: int) -> PellSolution:
    if j < 1:
        raise DomainError("solution index starts at 1")
    f = fundamental_solution(D)
    t, u = _pow(f.t, f.u, D, j)
    return PellSolution(t, u, D, j)


def solution_sequence(D: int):
    """Yield the solutions (t_j, u_j) for j = 1, 2, ... using the linear recurrence."""
    f = fundamental_solution(D)
    t, u, j = f.t, f.u, 1
    while True:
        yield PellSolution(t, u, D, j)
        t, u = _mul(f.t, f.u, t, u, D)
        j += 1


def d_of(t: int, u: int) -> int:
    n = t * t - 4
    if u < 1 or n % (u * u):
        raise DomainError(f"u={u} squared does not divide t^2-4={n}")
    return n // (u * u)


def solution_index(t: int, u: int) -> int:
    """Index j with (t, u) = (t_j(D), u_j(D)) for D = (t^2-4)/u^2."""
    if t < 3:
        raise DomainError("trace must be at least 3")
    D = d_of(t, u)
    _require_disc(D)
    f = fundamental_solution(D)
    j = max(1, round(math.log(t) / math.log(f.t)))
    for cand in (j, j - 1, j + 1):
        if cand >= 1 and _pow(f.t, f.u, D, cand) == (t, u):
            return cand
    for sol in solution_sequence(D):
        if sol.t == t and sol.u == u:
            return sol.j
        if sol.t > t:
            break
    raise InconsistencyError(f"({t}, {u}) solves t^2 - {D}u^2 = 4 but is not in the solution sequence")


def square_divisors(n: int, fac: dict[int, int] | None = None) -> list[int]:
    """All u >= 1 with u^2 | n, ascending."""
    if fac is None:
        fac = factor_dict(n)
    half = {p: r // 2 for p, r in fac.items() if r >= 2}
    return sorted(divisors_from(half))


def fiber_candidates(t: int) -> list[tuple[int, int]]:
    """(u, d_{t,u}) with u^2 | t^2 - 4 and d_{t,u} in the discriminant set."""
    if t < 3:
        raise DomainError("trace must be at least 3")
    fac = merge_factors(factor_dict(t - 2), factor_dict(t + 2))
    n = t * t - 4
    out = []
    for u in square_divisors(n, fac):
        d = n // (u * u)
        # t^2 - 4 is never a square for t >= 3, so only the residue test is needed
        if d % 4 in (0, 1):
            out.append((u, d))
    return out


def trace_fiber(t: int) -> TraceFiber:
    members = tuple(FiberMember(u, d, solution_index(t, u)) for u, d in fiber_candidates(t))
    return TraceFiber(t, members)


def log_epsilon(q: QuadUnit) -> float:
    """log((t + u sqrt(D)) / 2), finite for arbitrarily large t."""
    t = q.t
    if t < 3:
        raise DomainError("log_epsilon needs t >= 3")
    if t.bit_length() < 500:
        return math.log((t + math.sqrt(t * t - 4)) / 2)
    # u sqrt(D) = sqrt(t^2 - 4) = t sqrt(1 - 4/t^2)
    return math.log(t) + math.log1p(math.sqrt(1.0 - 4 / (t * t))) - math.log(2)


def unit_trace_power(t: int, k: int) -> int:
    """Trace of eps(t)^k, where eps(t) is the unit of trace t."""
    a, b = 2, t
    if k == 0:
        return 2
    for _ in range(k - 1):
        a, b = b, t * b - a
    return b


def unit_below(t: int, x: Fraction) -> bool:
    """Exact test of (t + sqrt(t^2 - 4)) / 2 < x for a norm-one unit of trace t >= 2.

    Both sides exceed 1 when the answer is True, and y + 1/y is increasing on
    y > 1, so the test is t < x + 1/x, i.e. t x < x^2 + 1.  Strict.
    """
    if x <= 1:
        return False
    return t * x < x * x + 1


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)
