import math

import pytest
from hypothesis import given, strategies as st

from selberg_arith.errors import DomainError
from selberg_arith.forms import (MatrixClass, QuadraticForm, class_cycles, class_number, class_numbers,
                                 dirichlet_L1, form_to_matrix, hyperbolic_class_count_oracle,
                                 is_fundamental, is_reduced, matrix_to_form, reduce_form,
                                 reduced_forms, rho_step)
from selberg_arith.intarith import is_in_frakD
from selberg_arith.pell import fiber_candidates, fundamental_solution, log_epsilon

discs = st.integers(5, 3000).filter(is_in_frakD)


@pytest.mark.parametrize("D,h", [(5, 1), (8, 1), (12, 2), (13, 1), (20, 1), (21, 2), (32, 2),
                                 (40, 2), (60, 4), (136, 4), (145, 4), (229, 3)])
def test_class_numbers(D, h):
    assert class_number(D) == h


@pytest.mark.parametrize("D", [16, 7, 0, -4])
def test_class_number_rejects(D):
    with pytest.raises(DomainError):
        class_number(D)


@given(discs)
def test_rho_permutes_reduced_forms(D):
    forms = reduced_forms(D)
    assert all(is_reduced(f) and f.disc == D and f.is_primitive for f in forms)
    images = [rho_step(f) for f in forms]
    assert sorted(images) == forms
    assert sum(len(c) for c in class_cycles(D)) == len(forms)


@given(discs, st.integers(-30, 30), st.integers(-30, 30))
def test_reduction_lands_in_a_cycle(D, a, k):
    # translate a reduced form by x -> x + k y and reduce again
    f = reduced_forms(D)[abs(a) % len(reduced_forms(D))]
    g = QuadraticForm(f.a, f.b + 2 * f.a * k, f.a * k * k + f.b * k + f.c)
    r, _ = reduce_form(g)
    assert r in reduced_forms(D)


def test_narrow_not_wide():
    # (1, 2, -2) and (-1, 2, 2) are wide-equivalent but in different narrow classes
    cyc = class_cycles(12)
    assert len(cyc) == 2
    where = {f: i for i, c in enumerate(cyc) for f in c}
    assert where[QuadraticForm(1, 2, -2)] != where[QuadraticForm(-1, 2, 2)]


def test_matrix_form_roundtrip():
    g = MatrixClass(0, -1, 1, 5)
    assert matrix_to_form(g) == QuadraticForm(1, 5, 1)
    assert form_to_matrix(QuadraticForm(1, 5, 1), 5, 1) == g
    with pytest.raises(DomainError):
        MatrixClass(1, 1, 1, 1)


@given(st.integers(3, 200))
def test_form_matrix_correspondence(t):
    for u, D in fiber_candidates(t):
        for f in reduced_forms(D):
            g = form_to_matrix(f, t, u)
            assert (g.trace, g.u, g.D) == (t, u, D)
            assert matrix_to_form(g) == f


@pytest.mark.parametrize("t", range(3, 9))
def test_orbit_oracle(t):
    for u, D in fiber_candidates(t):
        assert hyperbolic_class_count_oracle(t, u) == class_number(D)


def test_kernel_matches_reference():
    Ds = [D for D in range(5, 4000) if is_in_frakD(D)] + [10**6 + 1, 4 * 10**6 + 12, 99999989 * 4]
    Ds = [D for D in Ds if is_in_frakD(D)]
    fast = class_numbers(Ds)
    assert all(fast[D] == class_number(D) for D in Ds)


def test_fundamental_discriminants():
    assert [D for D in range(5, 45) if is_fundamental(D)] == [5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44]


@pytest.mark.parametrize("D", [5, 8, 12, 13, 60, 229, 1001])
def test_class_number_formula(D):
    lhs = class_number(D) * log_epsilon(fundamental_solution(D))
    assert lhs == pytest.approx(math.sqrt(D) * dirichlet_L1(D), rel=1e-3)
