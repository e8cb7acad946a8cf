from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from selberg_arith.errors import DomainError, ResourceLimitError
from selberg_arith.forms import MatrixClass, class_representatives, form_to_matrix, QuadraticForm
from selberg_arith.intarith import is_in_frakD
from selberg_arith.multiplicity import (CongruenceGroup, Family, L0, L0_rows, L0_table, L1, L1_table, M,
                                        M_table, coset_reps_gamma0, index,
                                        induced_trace_oracle_general,
                                        induced_trace_oracle_prime_power, sl2_modN, sqrt_count)
from selberg_arith.pell import fiber_candidates

G0, G1, GF = Family.GAMMA0, Family.GAMMA1, Family.GAMMA


def cls(t, u):
    D = (t * t - 4) // (u * u)
    return form_to_matrix(class_representatives(D)[0], t, u)


@pytest.mark.parametrize("fam,N,idx", [(G0, 6, 12), (G1, 5, 12), (GF, 2, 6), (G1, 2, 3), (G0, 1, 1),
                                       (GF, 3, 12), (G1, 4, 6), (G0, 8, 12)])
def test_index(fam, N, idx):
    assert index(CongruenceGroup(fam, N)) == idx


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6, 8, 9, 10, 12])
def test_index_is_coset_count(N):
    for fam in Family:
        g = CongruenceGroup(fam, N)
        assert len(sl2_modN(N).left_cosets(g)) == index(g)


def test_group_parsing():
    assert Family.parse("γ0") is G0 and Family.parse("gamma1") is G1 and Family.parse("γfull") is GF
    with pytest.raises(DomainError):
        Family.parse("gamma2")
    assert CongruenceGroup.sl2().N == 1


@pytest.mark.parametrize("p,r,t,u,v", [(2, 1, 6, 2, 3), (2, 1, 3, 1, 0), (3, 1, 4, 1, 1), (2, 1, 4, 1, 1),
                                       (2, 3, 6, 2, 0), (2, 4, 18, 4, 8), (2, 4, 46, 8, 16), (2, 4, 6, 1, 0)])
def test_L0_values(p, r, t, u, v):
    assert L0(p, r, t, u) == v == induced_trace_oracle_prime_power(p, r, cls(t, u))


def test_L0_table_known_differences():
    # the tabulated list is right at 2 and 4 and off at 8 and 16
    assert L0_table(2, 3, 6, 2) == 4 and L0(2, 3, 6, 2) == 0
    assert L0_rows(2, 4, 46, 8) == [(2, 8), (5, 16)]


@pytest.mark.parametrize("p,r,t,u,v", [(3, 1, 11, 3, 8), (3, 1, 4, 1, 2), (3, 1, 3, 1, 0)])
def test_L1_table_values(p, r, t, u, v):
    assert L1_table(p, r, t, u) == v


def test_L1_eigenvectors():
    # t = 4 = -2 mod 3 so the eigenvalue is -1; t = 11 = 2 mod 3 with 3 | u
    assert L1(3, 1, 4, 1, lam=-1) == 2
    assert L1(3, 1, 11, 3, lam=1) == 8


@pytest.mark.parametrize("g,t,u,v", [(CongruenceGroup(G0, 2), 6, 2, 3), (CongruenceGroup(GF, 2), 6, 2, 6),
                                     (CongruenceGroup(G1, 5), 4, 1, 0), (CongruenceGroup(G1, 5), 3, 1, 2),
                                     (CongruenceGroup(G1, 4), 6, 1, 2), (CongruenceGroup(GF, 8), 46, 8, 0),
                                     (CongruenceGroup(GF, 8), 18, 8, 0), (CongruenceGroup(G1, 2), 6, 2, 3)])
def test_M_values(g, t, u, v):
    assert M(g, t, u) == v == induced_trace_oracle_general(g, cls(t, u))


def test_M_rejects_bad_pairs():
    with pytest.raises(DomainError):
        M(CongruenceGroup(G0, 3), 6, 4)


def test_coset_reps():
    assert coset_reps_gamma0(2, 1).representatives == ((1, 0, 0, 1), (1, 0, 1, 1), (0, -1, 1, 0))
    assert len(coset_reps_gamma0(3, 1).representatives) == 4
    assert len(coset_reps_gamma0(2, 2).representatives) == 6
    assert len(coset_reps_gamma0(5, 2).representatives) == 30


def test_sl2_modN():
    assert [len(sl2_modN(N)) for N in (2, 3, 4)] == [6, 24, 48]
    with pytest.raises(ResourceLimitError):
        sl2_modN(31)


def test_oracle_examples():
    g = MatrixClass(1, 2, 2, 5)
    assert induced_trace_oracle_prime_power(2, 1, g) == 3
    assert induced_trace_oracle_general(CongruenceGroup(G0, 2), g) == 3
    assert induced_trace_oracle_prime_power(2, 1, MatrixClass(2, 1, 1, 1)) == 0
    assert induced_trace_oracle_prime_power(3, 1, form_to_matrix(QuadraticForm(1, 2, -2), 4, 1)) == 1
    assert induced_trace_oracle_general(CongruenceGroup(G0, 6), MatrixClass(2, 1, 1, 1)) == 0


@given(st.sampled_from([2, 3, 5, 7]), st.integers(0, 6), st.integers(1, 3000))
def test_sqrt_count(p, n, D):
    assert sqrt_count(p, n, D) == sum(1 for z in range(p**n) if (z * z - D) % p**n == 0)


@given(st.integers(3, 400), st.sampled_from([(2, 1), (2, 2), (2, 3), (2, 5), (3, 2), (5, 1), (7, 2)]))
def test_L0_matches_oracle(t, pr):
    p, r = pr
    for u, D in fiber_candidates(t):
        assert L0(p, r, t, u) == induced_trace_oracle_prime_power(p, r, cls(t, u))


@given(st.integers(3, 150), st.sampled_from(list(Family)), st.integers(2, 14))
def test_M_matches_oracle_and_bound(t, fam, N):
    g = CongruenceGroup(fam, N)
    for u, D in fiber_candidates(t):
        v = M(g, t, u)
        assert 0 <= v <= index(g) and v.denominator == 1
        assert v == induced_trace_oracle_general(g, cls(t, u))


@given(st.integers(3, 300), st.sampled_from([3, 5, 7, 9, 11, 13]))
def test_odd_levels_agree_with_tabulated(t, N):
    # at odd levels the tabulated Gamma0/Gamma1/Gamma formulas hold
    for u, D in fiber_candidates(t):
        for fam in Family:
            g = CongruenceGroup(fam, N)
            assert M(g, t, u) == M_table(g, t, u)


def test_multiplicativity():
    for t in range(3, 60):
        for u, D in fiber_candidates(t):
            for N in (6, 10, 12, 18):
                g = CongruenceGroup(G0, N)
                prod = Fraction(1)
                for p, r in g.prime_powers:
                    prod *= L0(p, r, t, u)
                assert induced_trace_oracle_general(g, cls(t, u)) == prod
