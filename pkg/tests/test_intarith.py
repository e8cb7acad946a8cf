import pytest
from hypothesis import given, settings, strategies as st

from selberg_arith.errors import DomainError, ResourceLimitError
from selberg_arith.intarith import (Factorization, count_congruence_roots, divisors, factorize,
                                    frakD_failure, is_in_frakD, is_prime, isqrt, kronecker,
                                    mobius, primes_upto, valuation)

ODD_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 101]


@pytest.mark.parametrize("p,a,k", [(2, 12, 2), (3, 12, 1), (5, 12, 0), (2, -8, 3)])
def test_valuation(p, a, k):
    assert valuation(p, a) == k


def test_valuation_zero():
    with pytest.raises(DomainError, match="infinite"):
        valuation(3, 0)


@given(st.integers(-10**9, 10**9).filter(bool), st.sampled_from([2, 3, 5, 7, 11]))
def test_valuation_strips_p(a, p):
    k = valuation(p, a)
    q, r = divmod(a, p**k)
    assert r == 0 and q % p != 0


@pytest.mark.parametrize("a,n,v", [(5, 11, 1), (11, 11, 0), (2, 3, -1)])
def test_kronecker_examples(a, n, v):
    assert kronecker(a, n) == v


@pytest.mark.parametrize("n", [2, 9, 15, 1, -3])
def test_kronecker_rejects(n):
    with pytest.raises(DomainError):
        kronecker(3, n)


@given(st.integers(-500, 500), st.integers(-500, 500), st.sampled_from(ODD_PRIMES))
def test_kronecker_multiplicative_and_periodic(a, b, p):
    assert kronecker(a * b, p) == kronecker(a, p) * kronecker(b, p)
    assert kronecker(a, p) == kronecker(a % p, p)
    residues = {x * x % p for x in range(1, p)}
    expect = 0 if a % p == 0 else (1 if a % p in residues else -1)
    assert kronecker(a, p) == expect


@pytest.mark.parametrize("n,out", [(16, (4, True)), (17, (4, False)), (0, (0, True))])
def test_isqrt(n, out):
    assert isqrt(n) == out


@given(st.integers(0, 10**40))
def test_isqrt_bounds(n):
    r, sq = isqrt(n)
    assert r * r <= n < (r + 1) ** 2 and sq == (r * r == n)


@pytest.mark.parametrize("D,ok", [(5, True), (16, False), (7, False), (0, False), (-3, False), (8, True)])
def test_frakD(D, ok):
    assert is_in_frakD(D) is ok
    assert (frakD_failure(D) is None) is ok


@given(st.integers(-100, 10**6))
def test_frakD_predicates(D):
    expect = D > 0 and D % 4 in (0, 1) and int(D**0.5 + 0.5) ** 2 != D
    assert is_in_frakD(D) == expect


@pytest.mark.parametrize("args,n", [((1, 0, -1, 2, 2), 2), ((1, 1, -1, 2, 1), 0), ((1, 0, 0, 3, 1), 1),
                                    ((5, 7, 9, 3, 0), 1)])
def test_count_roots(args, n):
    assert count_congruence_roots(*args) == n


def test_count_roots_bound():
    with pytest.raises(ResourceLimitError):
        count_congruence_roots(1, 0, -1, 2, 30, bound=10**6)


@settings(max_examples=60)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50),
       st.sampled_from([2, 3, 5, 7]), st.integers(0, 4))
def test_roots_lift_consistently(A, B, C, p, e):
    q = p**e
    lifts = [m for m in range(q * p) if (A * m * m + B * m + C) % (q * p) == 0]
    assert all((A * m * m + B * m + C) % q == 0 for m in lifts)
    assert len(lifts) == count_congruence_roots(A, B, C, p, e + 1)


@pytest.mark.parametrize("n,f", [(12, ((2, 2), (3, 1))), (7, ((7, 1),)), (360, ((2, 3), (3, 2), (5, 1)))])
def test_factorize(n, f):
    assert factorize(n).factors == f


def test_factorize_errors():
    with pytest.raises(DomainError):
        factorize(1)
    with pytest.raises(ResourceLimitError):
        factorize(10**13)
    with pytest.raises(DomainError):
        Factorization(12, ((2, 1), (3, 1)))


@given(st.integers(2, 10**7))
def test_factorize_product(n):
    f = factorize(n)
    prod = 1
    for p, r in f:
        assert is_prime(p)
        prod *= p**r
    assert prod == n


def test_small_helpers():
    assert primes_upto(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert sorted(divisors(12)) == [1, 2, 3, 4, 6, 12]
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
