import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clarkspectra import extensions, models
from clarkspectra.cplane import random_unitary
from clarkspectra.defect import ExpSum, Interval
from clarkspectra.errors import (DimensionError, DomainError, NonUnitaryError,
                                 RankError, UnsupportedError)

rates = st.builds(complex,
                  st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
                  st.floats(min_value=-2.0, max_value=2.0, allow_nan=False))


def test_quasi_diff_spec_shape_validation():
    spec = extensions.canonical_q0(3)
    assert spec.n == 3
    assert spec.super_entry(1) == 1.0
    assert spec.super_entry(3) == 1.0  # implicit q_{n,n+1}
    qm = spec.qmat()
    assert qm[0, 1] == 1.0 and qm[1, 2] == 1.0
    assert np.count_nonzero(qm) == 2
    with pytest.raises(DomainError):
        # vanishing superdiagonal entry
        extensions.QuasiDiffSpec(2, ((0.0, 0.0), (0.0, 0.0)))
    with pytest.raises(DomainError):
        # nonzero above the superdiagonal
        extensions.QuasiDiffSpec(3, (
            (0.0, 1.0, 5.0), (0.0, 0.0, 2.0), (0.0, 0.0, 0.0)))
    with pytest.raises(DimensionError):
        extensions.QuasiDiffSpec(3, ((0.0, 0.0), (0.0, 0.0)))


def test_quasi_derivative_nontrivial_table():
    spec = extensions.QuasiDiffSpec(2, ((0.5, 2.0), (1.0, 3.0)))
    r = 0.7 - 0.2j
    f = ExpSum(((1.0, r),), Interval(1.0))
    x = 0.25
    d1 = extensions.quasi_derivative(f, spec, 1)(x)
    d2 = extensions.quasi_derivative(f, spec, 2)(x)
    assert d1 == pytest.approx((r - 0.5) / 2.0 * f(x), rel=1e-12)
    expected2 = (r * (r - 0.5) / 2.0 - 1.0 - 3.0 * (r - 0.5) / 2.0) * f(x)
    assert d2 == pytest.approx(expected2, rel=1e-12)


def test_canonical_c():
    assert np.array_equal(extensions.canonical_c(1), np.array([[1.0]]))
    c2 = extensions.canonical_c(2)
    assert np.array_equal(c2, np.array([[0.0, -1.0], [1.0, 0.0]]))
    c4 = extensions.canonical_c(4)
    # alternating antidiagonal
    assert c4[0, 3] == -1.0 and c4[1, 2] == 1.0 and c4[2, 1] == -1.0 and c4[3, 0] == 1.0
    assert np.max(np.abs(c4 + c4.conj().T)) == 0.0  # skew


@given(rates, st.integers(min_value=0, max_value=3))
@settings(max_examples=30, deadline=None)
def test_quasi_derivative_zero_shape_is_ordinary(rate, r):
    spec = extensions.canonical_q0(3)
    f = ExpSum(((1.5 - 0.5j, rate),), Interval(1.0))
    qd = extensions.quasi_derivative(f, spec, r)
    x = 0.4
    assert qd(x) == pytest.approx(rate ** r * f(x), rel=1e-10, abs=1e-12)


def test_quasi_derivative_range_guard():
    spec = extensions.canonical_q0(2)
    f = ExpSum(((1.0, 0.3),), Interval(1.0))
    with pytest.raises(DomainError):
        extensions.quasi_derivative(f, spec, 3)
    with pytest.raises(DomainError):
        extensions.quasi_derivative(f, spec, -1)


def test_hat_check_vectors():
    spec = extensions.canonical_q0(2)
    f = ExpSum(((2.0, 0.5 + 0.25j),), Interval(1.0))
    x = -0.3
    hat = extensions.hat_vector(f, spec, x)
    assert hat == pytest.approx(np.array([f(x), (0.5 + 0.25j) * f(x)]))
    chk = extensions.check_vector(f, spec, x)
    c = extensions.canonical_c(2)
    assert chk == pytest.approx(np.conj(c @ hat))


@given(rates, rates, st.floats(min_value=-1.0, max_value=1.0, allow_nan=False))
@settings(max_examples=30, deadline=None)
def test_bracket_matches_matrix_form_order_two(r1, r2, x):
    spec = extensions.canonical_q0(2)
    f = ExpSum(((1.0 + 0.5j, r1),), Interval(1.0))
    g = ExpSum(((0.7, r2),), Interval(1.0))
    br = extensions.lagrange_bracket(f, g, x, spec)
    fh = extensions.hat_vector(f, spec, x)
    gh = extensions.hat_vector(g, spec, x)
    assert br == pytest.approx(complex(gh.conj() @ extensions.canonical_c(2) @ fh),
                               rel=1e-10, abs=1e-12)


def test_bracket_rejects_odd_order():
    spec = extensions.canonical_q0(3)
    f = ExpSum(((1.0, 0.2),), Interval(1.0))
    with pytest.raises(UnsupportedError):
        extensions.lagrange_bracket(f, f, 0.0, spec)


def test_boundary_matrices_defaults():
    bm = extensions.BoundaryMatrices([[1, 0], [0, 1]], [[1, 0], [0, 1]])
    assert np.array_equal(bm.c, extensions.canonical_c(2))
    assert bm.beta_a.dtype == complex


def test_validate_sa_matrices_known_cases():
    antiperiodic = extensions.BoundaryMatrices(np.eye(2), np.eye(2))
    assert extensions.validate_sa_matrices(antiperiodic)
    dirichlet = extensions.BoundaryMatrices([[1, 0], [0, 0]], [[0, 0], [1, 0]])
    assert extensions.validate_sa_matrices(dirichlet)
    rank_deficient = extensions.BoundaryMatrices([[1, 0], [2, 0]],
                                                 [[1, 0], [2, 0]])
    assert not extensions.validate_sa_matrices(rank_deficient)
    asymmetric = extensions.BoundaryMatrices([[1, 0], [0, 1]],
                                             [[0, 0], [0, 0]])
    assert not extensions.validate_sa_matrices(asymmetric)


def test_k1_map_anchors_and_involution():
    assert extensions.alpha_from_bc_k1(1.0, 0.0) == pytest.approx(1.0)
    assert extensions.alpha_from_bc_k1(0.0, 2.0) == pytest.approx(-1j)
    # Robin with sigma = 1 (decaying bound state exp(-x))
    a_robin = extensions.alpha_from_bc_k1(1.0, 1.0)
    assert abs(abs(a_robin) - 1.0) < 1e-12
    with pytest.raises(DomainError):
        extensions.alpha_from_bc_k1(0.0, 0.0)
    with pytest.raises(DomainError):
        extensions.alpha_from_bc_k1(1.0, 1j)  # admissibility Im(b conj(c)) = 0
    b, c = extensions.bc_from_alpha_k1(1.0)
    assert (b, c) == (1.0, 0.0)
    with pytest.raises(NonUnitaryError):
        extensions.bc_from_alpha_k1(0.8)


@given(st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False))
@settings(max_examples=40, deadline=None)
def test_k1_map_round_trip(theta):
    alpha = cmath.exp(1j * theta)
    b, c = extensions.bc_from_alpha_k1(alpha)
    back = extensions.alpha_from_bc_k1(b, c)
    assert abs(back - alpha) < 1e-10


@given(st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False),
       st.floats(min_value=0.2, max_value=2.5, allow_nan=False))
@settings(max_examples=40, deadline=None)
def test_l1_map_round_trip_and_unimodularity(theta, a):
    beta = cmath.exp(1j * theta)
    alpha = extensions.alpha_from_bc_l1(beta, a)
    assert abs(abs(alpha) - 1.0) < 1e-12
    assert abs(extensions.bc_from_alpha_l1(alpha, a) - beta) < 1e-10


def test_l1_map_periodic_anchors():
    # periodic boundary condition beta = 1 pins the lattice n pi / a,
    # which is the alpha = -1 lattice
    a = 0.9
    assert extensions.alpha_from_bc_l1(1.0, a) == pytest.approx(-1.0)
    assert extensions.alpha_from_bc_l1(-1.0, a) == pytest.approx(1.0)
    with pytest.raises(NonUnitaryError):
        extensions.alpha_from_bc_l1(0.5, a)


def test_alpha_from_bc_regular_dirichlet_and_periodic():
    m = models.l2(1.0)
    dirichlet = extensions.BoundaryMatrices([[1, 0], [0, 0]], [[0, 0], [1, 0]])
    alpha = extensions.alpha_from_bc_regular(m, dirichlet)
    assert np.max(np.abs(alpha @ alpha.conj().T - np.eye(2))) < 1e-12
    periodic = extensions.BoundaryMatrices(np.eye(2), -np.eye(2))
    alpha_p = extensions.alpha_from_bc_regular(m, periodic)
    assert np.max(np.abs(alpha_p @ alpha_p.conj().T - np.eye(2))) < 1e-12
    # the two extensions differ
    assert np.max(np.abs(alpha - alpha_p)) > 0.1
    with pytest.raises(DomainError):
        extensions.alpha_from_bc_regular(models.k1(), dirichlet)


def test_bc_regular_round_trip_random():
    rng = np.random.default_rng(12)
    m = models.l2(0.7)
    for _ in range(6):
        u = random_unitary(2, rng)
        bm = extensions.bc_from_alpha_regular(m, u)
        assert extensions.validate_sa_matrices(bm)
        back = extensions.alpha_from_bc_regular(m, bm)
        assert np.max(np.abs(back - u)) < 1e-9


def test_bc_regular_rejects_rank_deficient():
    m = models.l2(1.0)
    bad = extensions.BoundaryMatrices([[1, 0], [1, 0]], [[1, 0], [1, 0]])
    with pytest.raises(RankError):
        extensions.alpha_from_bc_regular(m, bad)


def test_bc_regular_l1_matches_closed_map():
    # the order-one interval model goes through the same generic route;
    # f(-a) + e^{0.4 i} f(a) = 0 is the coupling beta = -e^{-0.4 i}
    m = models.l1(1.0)
    bm = extensions.BoundaryMatrices(np.array([[1.0]]), np.array([[np.exp(0.4j)]]),
                                     c=np.array([[1.0]]))
    alpha = extensions.alpha_from_bc_regular(m, bm)
    assert alpha.shape == (1, 1)
    assert abs(abs(alpha[0, 0]) - 1.0) < 1e-10
    beta = -cmath.exp(-0.4j)
    assert complex(alpha[0, 0]) == pytest.approx(
        extensions.alpha_from_bc_l1(beta, 1.0), rel=1e-9)


def test_singular_template_matches_closed_k1():
    m = models.k1()
    for b_, c_ in ((1.0, 1.0), (1.0, 0.0), (2.0, -3.0), (0.0, 1.0), (1.0, -0.5)):
        bm = extensions.BoundaryMatrices(np.array([[b_, c_]]), np.zeros((1, 2)),
                                         c=np.eye(2))
        a_t = extensions.alpha_from_bc_singular_template(m, bm)
        assert complex(a_t[0, 0]) == pytest.approx(
            extensions.alpha_from_bc_k1(b_, c_))
    with pytest.raises(DomainError):
        extensions.alpha_from_bc_singular_template(models.l2(1.0),
                                                   extensions.BoundaryMatrices(
                                                       np.eye(2), np.eye(2)))
