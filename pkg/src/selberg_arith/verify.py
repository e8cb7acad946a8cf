"""Invariant sweeps: closed forms against brute-force oracles, Pell exactness,
class numbers against the orbit oracle and the analytic formula, and exact
series identities.  Each check returns a :class:`CheckResult`."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .errors import ResourceLimitError
from .forms import (class_number, class_numbers, class_representatives, dirichlet_L1,
                    form_to_matrix, hyperbolic_class_count_oracle, is_fundamental)
from .intarith import is_in_frakD, isqrt
from .multiplicity import (CongruenceGroup, Family, L0, L0_rows, M, M_table,
                           induced_trace_oracle_general, induced_trace_oracle_prime_power, index)
from .pell import fiber_candidates, fundamental_solution, log_epsilon, nth_solution

PRIME_POWERS = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3),
                (5, 1), (5, 2), (7, 1), (7, 2), (11, 1), (13, 1)]
GENERAL_LEVELS = (2, 3, 4, 5, 6, 8, 9, 12)
GAMMA1_LEVELS = (3, 4, 5, 7, 9)


class BudgetExceeded(ResourceLimitError):
    pass


@dataclass
class CheckResult:
    suite: str
    name: str
    cases: int = 0
    failures: int = 0
    examples: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, example) -> None:
        self.failures += 1
        if len(self.examples) < 5:
            self.examples.append(example)

    def summary(self) -> str:
        return f"{self.name}: {self.failures} mismatches / {self.cases} cases"


class Budget:
    def __init__(self, seconds: float | None):
        self.deadline = None if seconds is None else time.monotonic() + seconds

    def check(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("verification budget exhausted")


def _classes(t, u, D):
    return [form_to_matrix(f, t, u) for f in class_representatives(D)]


# ------------------------------------------------------------------ pell

def pell_exactness(Dmax: int = 10**4, jmax: int = 5, budget: Budget | None = None) -> CheckResult:
    res = CheckResult("pell", "Pell exactness t_j^2 - D u_j^2 = 4")
    for D in range(5, Dmax + 1):
        if not is_in_frakD(D):
            continue
        if budget:
            budget.check()
        for j in range(1, jmax + 1):
            s = nth_solution(D, j)
            res.cases += 1
            if s.t * s.t - D * s.u * s.u != 4:
                res.fail((D, j))
    return res


def pell_bruteforce(Dmax: int = 500, ubound: int = 10**4) -> CheckResult:
    """Smallest u <= ubound with D u^2 + 4 a square must be the fundamental u1;
    when none exists, u1 must exceed the bound."""
    res = CheckResult("pell", "fundamental solution vs bounded search")
    for D in range(5, Dmax):
        if not is_in_frakD(D):
            continue
        res.cases += 1
        f = fundamental_solution(D)
        found = None
        for u in range(1, ubound + 1):
            r, sq = isqrt(D * u * u + 4)
            if sq:
                found = (r, u)
                break
        if found is None:
            if f.u <= ubound:
                res.fail((D, (f.t, f.u), None))
        elif found != (f.t, f.u):
            res.fail((D, (f.t, f.u), found))
    return res


# ----------------------------------------------------------------- forms

def class_count_oracle(tmax: int = 8) -> CheckResult:
    res = CheckResult("forms", "hyperbolic class count = h(D)")
    for t in range(3, tmax + 1):
        for u, D in fiber_candidates(t):
            res.cases += 1
            a, b = hyperbolic_class_count_oracle(t, u), class_number(D)
            if a != b:
                res.fail((t, u, D, a, b))
    return res


def kernel_agreement(Dmax: int = 5000) -> CheckResult:
    res = CheckResult("forms", "compiled class numbers = reference")
    Ds = [D for D in range(5, Dmax) if is_in_frakD(D)]
    fast = class_numbers(Ds)
    for D in Ds:
        res.cases += 1
        if fast[D] != class_number(D):
            res.fail((D, fast[D], class_number(D)))
    return res


def analytic_formula(Dmax: int = 5000, budget: Budget | None = None) -> CheckResult:
    """h(D) log eps(D) against sqrt(D) L(1, chi_D) for fundamental D."""
    res = CheckResult("forms", "analytic class number formula")
    errs = []
    for D in range(5, Dmax):
        if not is_fundamental(D):
            continue
        if budget:
            budget.check()
        lhs = class_number(D) * log_epsilon(fundamental_solution(D))
        rhs = math.sqrt(D) * dirichlet_L1(D)
        err = abs(lhs - rhs) / rhs
        errs.append(err)
        res.cases += 1
        if err >= 0.05:
            res.fail((D, err))
    within = sum(1 for e in errs if e < 0.01)
    res.notes = {"max_rel_error": max(errs, default=0.0),
                 "fraction_below_1pct": within / len(errs) if errs else 1.0}
    if errs and within < 0.99 * len(errs):
        res.fail(("fraction below 1%", within / len(errs)))
    return res


# ---------------------------------------------------------- multiplicity

def l0_oracle_sweep(tmax: int = 500, prime_powers=PRIME_POWERS,
                    budget: Budget | None = None) -> CheckResult:
    """L0 against the prime-power coset oracle on every class of every (t, u)."""
    res = CheckResult("mult", "L0 oracle sweep")
    classdep = 0
    for t in range(3, tmax + 1):
        if budget:
            budget.check()
        for u, D in fiber_candidates(t):
            mats = _classes(t, u, D)
            for p, r in prime_powers:
                vals = {induced_trace_oracle_prime_power(p, r, g) for g in mats}
                res.cases += 1
                if len(vals) > 1:
                    classdep += 1
                    res.fail((p, r, t, u, "class dependent", sorted(vals)))
                    continue
                o = vals.pop()
                c = L0(p, r, t, u)
                if c != o:
                    res.fail((p, r, t, u, c, o))
    res.notes = {"class_dependent": classdep}
    return res


def l0_table_report(tmax: int = 500, prime_powers=PRIME_POWERS) -> CheckResult:
    """Where the tabulated L0 case list differs from L0, and where two of its rows match
    with different values.  Informational: failures here do not fail the suite."""
    res = CheckResult("mult", "tabulated L0 case list vs L0")
    overlaps = []
    per_level: dict[str, int] = {}
    for t in range(3, tmax + 1):
        for u, D in fiber_candidates(t):
            for p, r in prime_powers:
                res.cases += 1
                rows = L0_rows(p, r, t, u)
                if len({v for _, v in rows}) > 1 and len(overlaps) < 20:
                    overlaps.append((p, r, t, u, rows))
                tab = rows[0][1] if rows else 0
                if tab != L0(p, r, t, u):
                    key = f"{p}^{r}"
                    per_level[key] = per_level.get(key, 0) + 1
                    res.fail((p, r, t, u, tab, L0(p, r, t, u)))
    res.notes = {"differences_by_level": per_level, "ambiguous_rows": overlaps}
    return res


def general_oracle_sweep(tmax: int = 200, budget: Budget | None = None) -> CheckResult:
    """M against the SL2(Z/N) coset oracle: Gamma0 and Gamma on the general levels,
    Gamma1 on its listed levels, every class of every (t, u)."""
    res = CheckResult("mult", "M general oracle sweep")
    groups = ([CongruenceGroup(Family.GAMMA0, N) for N in GENERAL_LEVELS]
              + [CongruenceGroup(Family.GAMMA, N) for N in GENERAL_LEVELS]
              + [CongruenceGroup(Family.GAMMA1, N) for N in GAMMA1_LEVELS])
    tabdiff: dict[str, int] = {}
    for t in range(3, tmax + 1):
        if budget:
            budget.check()
        for u, D in fiber_candidates(t):
            mats = _classes(t, u, D)
            for g in groups:
                c = M(g, t, u)
                if not 0 <= c <= index(g):
                    res.fail((g.name, t, u, "out of range", c))
                if M_table(g, t, u) != c:
                    tabdiff[g.name] = tabdiff.get(g.name, 0) + 1
                for gm in mats:
                    res.cases += 1
                    o = induced_trace_oracle_general(g, gm)
                    if o != c:
                        res.fail((g.name, t, u, c, o))
    res.notes = {"tabulated_form_differences": tabdiff}
    return res


def multiplicativity(tmax: int = 120, levels=(6, 10, 12, 15, 18, 20, 24, 28, 30)) -> CheckResult:
    res = CheckResult("mult", "Gamma0 oracle is multiplicative over p^r || N")
    for t in range(3, tmax + 1):
        for u, D in fiber_candidates(t):
            g = _classes(t, u, D)[0]
            for N in levels:
                G = CongruenceGroup(Family.GAMMA0, N)
                prod = 1
                for p, r in G.prime_powers:
                    prod *= L0(p, r, t, u)
                res.cases += 1
                o = induced_trace_oracle_general(G, g)
                if o != prod:
                    res.fail((N, t, u, prod, o))
    return res


# ------------------------------------------------------------------ zeta

def class_sum_identities(primes=(3, 5, 7), xs=(100, 1000), table=None) -> CheckResult:
    from .zeta import identity_check_19
    res = CheckResult("zeta", "class-sum identities for Gamma1(p), Gamma(p)")
    for p in primes:
        for x in xs:
            rep = identity_check_19(p, x, table)
            res.cases += 1
            if not rep.holds:
                res.fail((p, x, str(rep.set1), str(rep.rhs1), str(rep.set2), str(rep.rhs2)))
    return res


def inversion(xs=(100, 1000, 10**4), table=None) -> CheckResult:
    from .zeta import pi, pi_hat, pi_hat_from_pi
    res = CheckResult("zeta", "Moebius inversion and termwise bound")
    sl2 = CongruenceGroup.sl2()
    groups = [sl2, CongruenceGroup.gamma0(2), CongruenceGroup.gamma0(6),
              CongruenceGroup.gamma1(5), CongruenceGroup.gamma(3)]
    for g in groups:
        for x in xs:
            res.cases += 1
            ph, pp = pi_hat(g, x, table), pi(g, x, table)
            if pi_hat_from_pi(g, x, table) != ph or not 0 <= ph - pp:
                res.fail((g.name, x))
            if ph > index(g) * pi_hat(sl2, x, table):
                res.fail((g.name, x, "bound"))
    return res


SUITES = {
    "pell": [pell_exactness, pell_bruteforce],
    "forms": [class_count_oracle, kernel_agreement, analytic_formula],
    "mult": [l0_oracle_sweep, general_oracle_sweep, multiplicativity, l0_table_report],
    "zeta": [class_sum_identities, inversion],
}
INFORMATIONAL = {l0_table_report}


def run_suite(name: str, budget_seconds: float | None = None):
    """Yield (CheckResult, counts_toward_verdict) for each check of the suite(s)."""
    budget = Budget(budget_seconds)
    names = list(SUITES) if name == "all" else [name]
    for suite in names:
        for check in SUITES[suite]:
            budget.check()
            kwargs = {"budget": budget} if "budget" in check.__code__.co_varnames else {}
            yield check(**kwargs), check not in INFORMATIONAL
