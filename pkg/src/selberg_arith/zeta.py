"""Truncated series built from the (t, u)-indexed geodesic terms:
log-derivative of the Selberg zeta function, the counting functions pi_hat
and pi, window counts, and class-number sums over subsets of discriminants.

All cutoffs are strict and decided exactly: eps(t)^m < x is tested on the
integer trace of eps(t)^m (see :func:`selberg_arith.pell.unit_below`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import DomainError, InconsistencyError
from .intarith import is_prime, mobius
from .multiplicity import CongruenceGroup, Family, M, index
from .pell import (as_fraction, fiber_candidates, fundamental_solution, log_epsilon,
                   solution_index, unit_below, unit_trace_power, QuadUnit)
from .table import DiscriminantRecord, DiscriminantTable, build_table  # noqa: F401

_DEFAULT_TABLE = DiscriminantTable()


def _table(table: DiscriminantTable | None) -> DiscriminantTable:
    return _DEFAULT_TABLE if table is None else table


@dataclass(frozen=True)
class GeodesicTerm:
    t: int
    u: int
    D: int
    j: int
    h: int
    M: Fraction
    weight: float   # 2 log eps(D) / (1 - eps(t)^-2), i.e. 2 log eps(t) / (j (1 - eps(t)^-2))

    @property
    def norm_log(self) -> float:
        """log of the norm eps(t)^2."""
        return 2 * log_epsilon(QuadUnit(self.t, self.u, self.D))


def _traces_below(x: Fraction, power: int = 2) -> Iterator[int]:
    """Traces t = 3, 4, ... with eps(t)^power < x (eps(t) increases with t)."""
    t = 3
    while unit_below(unit_trace_power(t, power), x):
        yield t
        t += 1


def _fiber(x: Fraction, power: int):
    for t in _traces_below(x, power):
        for u, D in fiber_candidates(t):
            yield t, u, D


def enumerate_terms(g: CongruenceGroup, x, skip_zero: bool = True,
                    table: DiscriminantTable | None = None) -> list[GeodesicTerm]:
    """All terms with norm eps(t)^2 < x, in increasing trace order."""
    x = as_fraction(x)
    tab = _table(table)
    raw = []
    for t, u, D in _fiber(x, 2):
        m = M(g, t, u)
        if m == 0 and skip_zero:
            continue
        raw.append((t, u, D, m))
    hs = tab.class_numbers([D for _, _, D, _ in raw])
    out = []
    for t, u, D, m in raw:
        j = solution_index(t, u)
        le = log_epsilon(QuadUnit(t, u, D))
        weight = 2 * le / (j * -math.expm1(-2 * le)) if m else 0.0
        out.append(GeodesicTerm(t, u, D, j, hs[D], m, weight))
    return out


def _pi_hat_terms(terms, x: Fraction, power: int = 2) -> Fraction:
    total = Fraction(0)
    for term in terms:
        if power == 2 or unit_below(unit_trace_power(term.t, power), x):
            total += Fraction(term.M * term.h, term.j)
    return total


def pi_hat(g: CongruenceGroup, x, table: DiscriminantTable | None = None) -> Fraction:
    """Sum of j^-1 M h over terms with eps(t)^2 < x."""
    x = as_fraction(x)
    return _pi_hat_terms(enumerate_terms(g, x, table=table), x)


def pi(g: CongruenceGroup, x, table: DiscriminantTable | None = None) -> Fraction:
    """Primitive count sum_j mu(j)/j pi_hat(x^(1/j)); x^(1/j) is never formed explicitly,
    the condition eps(t)^2 < x^(1/j) is tested as eps(t)^(2j) < x."""
    x = as_fraction(x)
    terms = enumerate_terms(g, x, table=table)
    total = Fraction(0)
    j = 1
    while unit_below(unit_trace_power(3, 2 * j), x):
        mu = mobius(j)
        if mu:
            total += Fraction(mu, j) * _pi_hat_terms(terms, x, 2 * j)
        j += 1
    if total.denominator != 1 or total < 0:
        raise InconsistencyError(f"pi({g.name}, {x}) = {total} is not a nonnegative integer")
    return total


def pi_hat_from_pi(g: CongruenceGroup, x, table: DiscriminantTable | None = None) -> Fraction:
    """sum_j j^-1 pi(x^(1/j)), evaluated with the same exact cutoffs (inversion check)."""
    x = as_fraction(x)
    terms = enumerate_terms(g, x, table=table)
    total = Fraction(0)
    j = 1
    while unit_below(unit_trace_power(3, 2 * j), x):
        # pi at x^(1/j): sum over k of mu(k)/k pi_hat at x^(1/(jk))
        k = 1
        inner = Fraction(0)
        while unit_below(unit_trace_power(3, 2 * j * k), x):
            mu = mobius(k)
            if mu:
                inner += Fraction(mu, k) * _pi_hat_terms(terms, x, 2 * j * k)
            k += 1
        total += inner / j
        j += 1
    return total


@dataclass(frozen=True)
class LogDerivative:
    value: float
    tail_bound: float
    terms: int


def log_deriv(g: CongruenceGroup, s: float, x_cutoff,
              table: DiscriminantTable | None = None) -> LogDerivative:
    """Partial sum of Z'/Z(s) over terms with norm below x_cutoff, with a crude tail bound.

    Each term is M h weight eps(t)^(-2s).  The tail bound assumes
    pi_hat(u) <= 2 index(g) u / log u and integrates by parts; it is reported,
    never asserted.
    """
    if not s > 1:
        raise DomainError("log_deriv needs s > 1")
    x = as_fraction(x_cutoff)
    terms = enumerate_terms(g, x, table=table)
    value = 0.0
    for term in terms:
        value += float(term.M) * term.h * term.weight * math.exp(-s * term.norm_log)
    X = float(x)
    if X > 1:
        tail = 2 * index(g) * s * X ** (1 - s) / ((s - 1) * (1 - 1 / X))
    else:
        tail = math.inf
    return LogDerivative(value, tail, len(terms))


def sl2_product_partial(s: float, Dmax: int, nmax: int,
                        table: DiscriminantTable | None = None) -> float:
    """prod_{D <= Dmax} prod_{n <= nmax} (1 - eps(D)^(-2(s+n)))^h(D)."""
    if not s > 1:
        raise DomainError("the product converges for s > 1")
    from .intarith import is_in_frakD
    Ds = [D for D in range(5, Dmax + 1) if is_in_frakD(D)]
    hs = _table(table).class_numbers(Ds)
    logz = 0.0
    for D in Ds:
        le = log_epsilon(fundamental_solution(D))
        for n in range(nmax + 1):
            logz += hs[D] * math.log1p(-math.exp(-2 * (s + n) * le))
    return math.exp(logz)


def window_count(g: CongruenceGroup, x, y, table: DiscriminantTable | None = None) -> Fraction:
    x = as_fraction(x)
    y = as_fraction(y)
    if not 0 < y <= x:
        raise DomainError("window needs 0 < y <= x")
    return pi(g, x + y, table) - pi(g, x, table)


# ---------------------------------------------------------- class sums


@dataclass(frozen=True)
class DiscriminantFilter:
    kind: str
    p: int | None = None
    j: int | None = None
    r: int | None = None

    KINDS = ("all", "p_divides_D", "set1", "set2", "set2r")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise DomainError(f"unknown filter {self.kind!r}")
        if self.kind != "all" and (self.p is None or not is_prime(self.p)):
            raise DomainError("filter needs a prime p")
        if self.kind == "set2r" and (self.r is None or self.r < 1):
            raise DomainError("set2r needs r >= 1")

    def admits(self, D: int, u: int) -> bool:
        """Membership given D and u = u_j(D); the cutoff eps(D)^j < x is handled by the caller."""
        p = self.p
        if self.kind == "all":
            return True
        if self.kind == "p_divides_D":
            return D % p == 0
        if self.kind == "set1":
            return D % p == 0 or u % p == 0
        if self.kind == "set2":
            return D % p == 0 and u % p != 0
        return D % p == 0 and D % (p * p) != 0 and u % p**self.r != 0


def class_sum(flt: DiscriminantFilter, x, weights: str = "plain",
              table: DiscriminantTable | None = None) -> Fraction:
    """Sum of h(D) over the filter's set with eps(D)^j < x.

    ``plain``: j is the filter's j (1 if unset), each D counted once.
    ``j_weighted``: sum over j >= 1 of j^-1 h(D), or only the filter's j if set.
    The kinds ``all`` and ``p_divides_D`` always use j = 1.
    """
    if weights not in ("plain", "j_weighted"):
        raise DomainError(f"unknown weighting {weights!r}")
    x = as_fraction(x)
    if x <= 1:
        raise DomainError("class_sum needs x > 1")
    fixed_j = flt.j
    if flt.kind in ("all", "p_divides_D"):
        fixed_j = 1
    elif weights == "plain" and fixed_j is None:
        fixed_j = 1
    picked: list[tuple[int, int]] = []
    # eps(D)^j = eps(t) for (t, u) = (t_j, u_j), so the cutoff is eps(t) < x
    for t, u, D in _fiber(x, 1):
        if not flt.admits(D, u):
            continue
        if fixed_j == 1 and flt.kind in ("all", "p_divides_D"):
            if fundamental_solution(D).t != t:
                continue
            picked.append((D, 1))
            continue
        j = solution_index(t, u)
        if fixed_j is not None and j != fixed_j:
            continue
        picked.append((D, j))
    hs = _table(table).class_numbers([D for D, _ in picked])
    total = Fraction(0)
    for D, j in picked:
        total += Fraction(hs[D], j) if weights == "j_weighted" else hs[D]
    return total


@dataclass(frozen=True)
class CpEstimate:
    p: int
    x: Fraction
    total: Fraction
    ratio: float
    bracket: tuple[Fraction, Fraction]
    predicted: Fraction


def estimate_Cp(p: int, x, table: DiscriminantTable | None = None) -> CpEstimate:
    """sum_{p | D, eps(D) < x} h(D) * log(x) / x^2 against its predicted constant."""
    if p < 3 or not is_prime(p):
        raise DomainError("estimate_Cp needs an odd prime p")
    x = as_fraction(x)
    total = class_sum(DiscriminantFilter("p_divides_D", p), x, table=table)
    xf = float(x)
    ratio = float(total) * math.log(xf) / (xf * xf)
    return CpEstimate(p, x, total, ratio, (Fraction(1, p), Fraction(p, p * p - 1)),
                      Fraction(p * p, p**3 - 1))


@dataclass(frozen=True)
class IdentityReport:
    p: int
    x: Fraction
    set1: Fraction
    set2: Fraction
    rhs1: Fraction
    rhs2: Fraction

    @property
    def holds(self) -> bool:
        return self.set1 == self.rhs1 and self.set2 == self.rhs2


def identity_check_19(p: int, x, table: DiscriminantTable | None = None) -> IdentityReport:
    """Both class-sum identities for Gamma1(p) and Gamma(p), as exact rationals.

    sum_j sum_{set1} h/j = 2/(p-1) (pi_hat_{Gamma1(p)}(x^2) - pi_hat_{Gamma(p)}(x^2)/(p+1))
    sum_j sum_{set2} h/j = 2/(p-1) (pi_hat_{Gamma1(p)}(x^2) - pi_hat_{Gamma(p)}(x^2)/p)
    """
    if p < 3 or not is_prime(p):
        raise DomainError("identity needs an odd prime p")
    x = as_fraction(x)
    s1 = class_sum(DiscriminantFilter("set1", p), x, "j_weighted", table)
    s2 = class_sum(DiscriminantFilter("set2", p), x, "j_weighted", table)
    a = pi_hat(CongruenceGroup(Family.GAMMA1, p), x * x, table)
    b = pi_hat(CongruenceGroup(Family.GAMMA, p), x * x, table)
    c = Fraction(2, p - 1)
    return IdentityReport(p, x, s1, s2, c * (a - b / (p + 1)), c * (a - b / p))
