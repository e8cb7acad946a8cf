"""Multiplicity factors of hyperbolic SL2(Z)-classes in the congruence
subgroups Gamma0(N), Gamma1(N), Gamma(N).

Closed forms are functions of (t, u) = (trace, gcd-invariant); the oracles
compute the trace of the induced trivial representation by brute force,
either from explicit coset representatives or inside SL2(Z/N).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import DomainError, ResourceLimitError
from .forms import MatrixClass
from .intarith import (EXHAUSTION_BOUND, Factorization, count_congruence_roots,
                       factorize, is_in_frakD, kronecker, valuation)
from .pell import d_of


class Family(enum.Enum):
    GAMMA0 = "gamma0"
    GAMMA1 = "gamma1"
    GAMMA = "gamma"

    @classmethod
    def parse(cls, name: str) -> Family:
        key = name.strip().lower().replace("γ", "gamma").replace("Γ", "gamma").replace("_", "")
        aliases = {
            "gamma0": cls.GAMMA0, "g0": cls.GAMMA0,
            "gamma1": cls.GAMMA1, "g1": cls.GAMMA1,
            "gamma": cls.GAMMA, "gammafull": cls.GAMMA, "full": cls.GAMMA, "gfull": cls.GAMMA,
        }
        if key not in aliases:
            raise DomainError(f"unknown group family {name!r}")
        return aliases[key]


@dataclass(frozen=True)
class CongruenceGroup:
    family: Family
    N: int
    factorization: Factorization | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("level must be positive")
        if self.N > 1 and self.factorization is None:
            object.__setattr__(self, "factorization", factorize(self.N))

    @classmethod
    def sl2(cls) -> CongruenceGroup:
        return cls(Family.GAMMA0, 1)

    @classmethod
    def gamma0(cls, N: int) -> CongruenceGroup:
        return cls(Family.GAMMA0, N)

    @classmethod
    def gamma1(cls, N: int) -> CongruenceGroup:
        return cls(Family.GAMMA1, N)

    @classmethod
    def gamma(cls, N: int) -> CongruenceGroup:
        return cls(Family.GAMMA, N)

    @property
    def prime_powers(self) -> list[tuple[int, int]]:
        return [] if self.N == 1 else list(self.factorization.factors)

    @property
    def name(self) -> str:
        if self.N == 1:
            return "SL2(Z)"
        label = {Family.GAMMA0: "Gamma0", Family.GAMMA1: "Gamma1", Family.GAMMA: "Gamma"}
        return f"{label[self.family]}({self.N})"

    def contains_mod(self, a: int, b: int, c: int, d: int) -> bool:
        """Membership of a matrix (entries taken mod N) in the image of the group."""
        N = self.N
        if N == 1:
            return True
        if c % N:
            return False
        if self.family is Family.GAMMA0:
            return True
        a %= N
        d %= N
        if not ((a == 1 % N and d == 1 % N) or (a == (-1) % N and d == (-1) % N)):
            return False
        return self.family is Family.GAMMA1 or b % N == 0


def index(g: CongruenceGroup) -> int:
    """[SL2(Z) : g], with -I counted inside every group."""
    N = g.N
    if N == 1:
        return 1
    ps = g.factorization.primes
    if g.family is Family.GAMMA0:
        val = Fraction(N)
        for p in ps:
            val *= 1 + Fraction(1, p)
    elif N == 2:
        return 3 if g.family is Family.GAMMA1 else 6
    else:
        val = Fraction(N**2 if g.family is Family.GAMMA1 else N**3, 2)
        for p in ps:
            val *= 1 - Fraction(1, p * p)
    assert val.denominator == 1
    return int(val)


def _vals(p: int, r: int, t: int, u: int) -> tuple[int, int, int]:
    D = d_of(t, u)
    if not is_in_frakD(D):
        raise DomainError(f"(t, u) = ({t}, {u}) gives {D}, not a discriminant")
    return valuation(p, u), valuation(p, D), D


def L0_rows(p: int, r: int, t: int, u: int) -> list[tuple[int, int]]:
    """Every (row number, value) of the tabulated Gamma0(p^r) case list whose condition holds.

    The tabulated list is kept for comparison only; :func:`L0` is computed
    from local square-root counts, which agree with it except at 2^r, r >= 3.
    """
    if r < 1:
        raise DomainError("exponent must be positive")
    ku, ell, D = _vals(p, r, t, u)
    k = min(ku, r)
    hits = []
    if p == 2 and r == 1:
        if ku >= 1:
            hits.append((1, 3))
        if ku == 0 and D % 4 == 0:
            hits.append((2, 1))
        return hits
    if p == 2:
        if ku >= r:
            hits.append((1, 3 * 2 ** (r - 1)))
        if ku == r - 1 or (ku == r - 2 and D % 8 == 0):
            hits.append((2, 2 ** (r - 1)))
        if ku < r:
            if k <= r - 3 and D % 2 ** (r - k) == 0:
                hits.append((3, 2 ** ((r + k) // 2)))
            if ell % 2 == 0 and (D >> ell) % 8 == 1:
                m = ell // 2
                if 1 < 2 * m < r - k - 2:
                    hits.append((4, 2 ** (m + k + 2)))
                if m == (r - k - 1) // 2:
                    hits.append((5, 2 ** (m + k + 1)))
        return hits
    if ku >= r:
        hits.append((1, p ** (r - 1) * (p + 1)))
    if ku < r:
        if D % p ** (r - k) == 0:
            hits.append((2, p ** ((r + k) // 2)))
        if ell % 2 == 0 and 2 * (ell // 2) < r - k:
            m = ell // 2
            if kronecker(D // p ** (2 * m), p) == 1:
                hits.append((3, 2 * p ** (m + k)))
    return hits


def L0_table(p: int, r: int, t: int, u: int) -> int:
    """Tabulated case list, first matching row wins, default 0."""
    hits = L0_rows(p, r, t, u)
    return hits[0][1] if hits else 0


def sqrt_count(p: int, n: int, D: int) -> int:
    """Number of z mod p^n with z^2 = D mod p^n."""
    if n <= 0:
        return 1
    ell = valuation(p, D) if D else n
    if ell >= n:
        return p ** (n // 2)
    if ell % 2:
        return 0
    m = ell // 2
    e = n - ell
    unit = D // p**ell
    if p == 2:
        if e == 1:
            roots = 1
        elif e == 2:
            roots = 2 if unit % 4 == 1 else 0
        else:
            roots = 4 if unit % 8 == 1 else 0
    else:
        roots = 1 + kronecker(unit, p)
    # z = p^m w with w mod p^(n-m); each root of w^2 = unit mod p^e has p^m lifts
    return roots * p**m


def L0(p: int, r: int, t: int, u: int) -> int:
    """Trace of the permutation action of the (t, u) class on SL2(Z)/Gamma0(p^r).

    The cosets are the points of P^1(Z/p^r).  If p^k || u (k < r) the class
    acts through u f for a primitive form f of discriminant D, so a point is
    fixed iff f vanishes on it mod p^(r-k); each such point mod p^(r-k) has
    p^k lifts.  Zeros of f on P^1(Z/p^e) correspond to square roots of D mod
    p^e (odd p) or to half the square roots mod 2^(e+2) (p = 2).
    """
    if r < 1:
        raise DomainError("exponent must be positive")
    ku, _, D = _vals(p, r, t, u)
    if ku >= r:
        return p ** (r - 1) * (p + 1)
    if p == 2:
        return 2**ku * sqrt_count(2, r - ku + 2, D) // 2
    return p**ku * sqrt_count(p, r - ku, D)


def L1_table(p: int, r: int, t: int, u: int) -> int:
    """Tabulated Gamma1 local factor, with 0 for the unlisted case."""
    ku, _, D = _vals(p, r, t, u)
    if ku >= r:
        return p ** (2 * r - 2) * (p * p - 1)
    if D % p ** (r - ku) == 0:
        return p ** (r + ku - 1) * (p - 1)
    return 0


def _eigen_gcd(t: int, u: int, D: int, lam: int) -> int:
    # gcd of the entries of gamma - lam I: gcd(u, gamma_11 - lam), and
    # gamma_11 - lam = (t - 2 lam - b u)/2 with b = D mod 2 is well defined mod u
    b = D & 1
    return gcd(u, (t - 2 * lam - b * u) // 2)


def L1(p: int, r: int, t: int, u: int, lam: int = 1) -> int:
    """Number of primitive v mod p^r with v gamma = lam v.

    gamma - lam I has Smith form diag(d1, d2) with d1 = gcd of its entries and
    d1 d2 = |t - 2 lam|, so the kernel mod p^s has p^(min(e1,s) + min(e2,s))
    elements; primitive vectors are those outside p (Z/p^r)^2.
    """
    if r < 1:
        raise DomainError("exponent must be positive")
    _, _, D = _vals(p, r, t, u)
    e1 = valuation(p, _eigen_gcd(t, u, D, lam))
    e2 = valuation(p, t - 2 * lam) - e1
    full = p ** (min(e1, r) + min(e2, r))
    inner = p ** (min(e1, r - 1) + min(e2, r - 1))
    return full - inner


def _pm2(t: int, N: int) -> bool:
    return (t - 2) % N == 0 or (t + 2) % N == 0


def M_table(g: CongruenceGroup, t: int, u: int) -> Fraction:
    """The tabulated closed form, kept for comparison with :func:`M`."""
    D = d_of(t, u)
    if not is_in_frakD(D):
        raise DomainError(f"(t, u) = ({t}, {u}) gives {D}, not a discriminant")
    N = g.N
    if N == 1:
        return Fraction(1)
    pp = g.prime_powers
    val = Fraction(1)
    if g.family is Family.GAMMA0 or (g.family is Family.GAMMA1 and N == 2):
        for p, r in pp:
            val *= L0_table(p, r, t, u)
        return val
    if g.family is Family.GAMMA1:
        if not _pm2(t, N):
            return Fraction(0)
        val = Fraction(1, 2)
        for p, r in pp:
            val *= L1_table(p, r, t, u)
        return val
    if N == 2:
        return Fraction(6 if u % 2 == 0 else 0)
    if _pm2(t, N) and u % N == 0:
        return Fraction(index(g))
    return Fraction(0)


def M_breakdown(g: CongruenceGroup, t: int, u: int) -> tuple[Fraction, dict]:
    """(M, local factors) for the class with invariants (t, u).

    Local factors are keyed by p for Gamma0 and by (p, lam) for Gamma1.
    """
    D = d_of(t, u)
    if not is_in_frakD(D):
        raise DomainError(f"(t, u) = ({t}, {u}) gives {D}, not a discriminant")
    N = g.N
    if N == 1:
        return Fraction(1), {}
    pp = g.prime_powers
    if g.family is Family.GAMMA0 or (g.family is Family.GAMMA1 and N == 2):
        local = {p: L0(p, r, t, u) for p, r in pp}
        val = Fraction(1)
        for v in local.values():
            val *= v
        return val, local
    # +-Gamma1(N) is the stabilizer of +-(0, 1); fixed cosets are pairs +-v of
    # primitive vectors with v gamma = lam v, lam = 1 or -1 (both possible
    # only when N = 4).  Gamma(N) is normal, so its trace is the index or 0.
    lams = [lam for lam in (1, -1) if (t - 2 * lam) % N == 0]
    if g.family is Family.GAMMA:
        fixed = any(_eigen_gcd(t, u, D, lam) % N == 0 for lam in lams)
        return Fraction(index(g) if fixed else 0), {}
    local = {}
    total = 0
    for lam in lams:
        prod = 1
        for p, r in pp:
            local[(p, lam)] = L1(p, r, t, u, lam)
            prod *= local[(p, lam)]
        total += prod
    return Fraction(total, 2), local


def M(g: CongruenceGroup, t: int, u: int) -> Fraction:
    """Multiplicity of the (t, u) term in the log-derivative series of g."""
    return M_breakdown(g, t, u)[0]


# ---------------------------------------------------------------- oracles


def _mat_mul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _mat_inv(x):
    a, b, c, d = x
    return (d, -b, -c, a)


@dataclass(frozen=True)
class CosetSystem:
    group: CongruenceGroup
    representatives: tuple[tuple[int, int, int, int], ...]


def coset_reps_gamma0(p: int, r: int) -> CosetSystem:
    """[[1,0],[m,1]] (m mod p^r) and [[lp,-1],[1,0]] (l mod p^(r-1)) for SL2(Z)/Gamma0(p^r)."""
    q = p**r
    if q + q // p > EXHAUSTION_BOUND:
        raise ResourceLimitError(f"{p}^{r} exceeds the exhaustion bound")
    reps = [(1, 0, m, 1) for m in range(q)]
    reps += [(l * p, -1, 1, 0) for l in range(q // p)]
    g = CongruenceGroup.gamma0(q)
    for i, x in enumerate(reps):
        xi = _mat_inv(x)
        for y in reps[i + 1:]:
            if g.contains_mod(*_mat_mul(xi, y)):
                raise AssertionError(f"{x} and {y} lie in the same coset")
    return CosetSystem(g, tuple(reps))


def induced_trace_oracle_prime_power(p: int, r: int, gamma: MatrixClass,
                                     bound: int = EXHAUSTION_BOUND) -> int:
    """Fixed cosets of SL2(Z)/Gamma0(p^r) under gamma, counted by exhaustion."""
    q = p**r
    if q > bound:
        raise ResourceLimitError(f"{p}^{r} exceeds exhaustion bound {bound}")
    g11, g12, g21, g22 = gamma.g11, gamma.g12, gamma.g21, gamma.g22
    first = count_congruence_roots(g12, g11 - g22, -g21, p, r, bound)
    A, B, C = p * p * g21, p * (g11 - g22), -g12
    second = sum(1 for l in range(q // p) if (A * l * l + B * l + C) % q == 0)
    return first + second


SL2_MOD_BOUND = 30


class SL2ModN:
    """SL2(Z/NZ) as an explicit list of 4-tuples."""

    def __init__(self, N: int):
        if N < 2:
            raise DomainError("modulus must be at least 2")
        if N > SL2_MOD_BOUND:
            raise ResourceLimitError(f"SL2(Z/{N}) enumeration is capped at N = {SL2_MOD_BOUND}")
        self.N = N
        self.elements = [(a, b, c, d)
                         for a in range(N) for b in range(N) for c in range(N) for d in range(N)
                         if (a * d - b * c) % N == 1 % N]

    def __len__(self):
        return len(self.elements)

    def mul(self, x, y):
        N = self.N
        return tuple(v % N for v in _mat_mul(x, y))

    def inv(self, x):
        N = self.N
        return tuple(v % N for v in _mat_inv(x))

    def reduce(self, gamma: MatrixClass):
        N = self.N
        return (gamma.g11 % N, gamma.g12 % N, gamma.g21 % N, gamma.g22 % N)

    def left_cosets(self, g: CongruenceGroup) -> list[tuple[int, int, int, int]]:
        """One representative x per coset x H, H the image of g."""
        H = [h for h in self.elements if g.contains_mod(*h)]
        covered = set()
        reps = []
        for x in self.elements:
            if x in covered:
                continue
            reps.append(x)
            covered.update(self.mul(x, h) for h in H)
        return reps


@lru_cache(maxsize=64)
def sl2_modN(N: int) -> SL2ModN:
    return SL2ModN(N)


@lru_cache(maxsize=128)
def _coset_table(g: CongruenceGroup):
    G = sl2_modN(g.N)
    reps = G.left_cosets(g)
    return G, tuple((x, G.inv(x)) for x in reps)


def induced_trace_oracle_general(g: CongruenceGroup, gamma: MatrixClass) -> Fraction:
    """Number of cosets x H of SL2(Z/N) with x^-1 gamma x in H."""
    if g.N == 1:
        return Fraction(1)
    G, reps = _coset_table(g)
    y = G.reduce(gamma)
    count = 0
    for x, xi in reps:
        if g.contains_mod(*G.mul(G.mul(xi, y), x)):
            count += 1
    return Fraction(count)
