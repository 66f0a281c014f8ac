import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heislax import from_symmetric, heisenberg, oscillator
from heislax.errors import DegenerateMetricError, InvalidArgument
from heislax.lie_core import (
    LieAlgebra,
    MetricForm,
    QuadraticFunction,
    ad_invariance_defect,
    ad_matrix,
    adjoint_exp,
    algebra_from_dict,
    algebra_to_dict,
    antisymmetry_defect,
    bracket,
    derived_series,
    gradient,
    jacobi_defect,
)

from conftest import oracle_bracket, random_symmetric


def test_heisenberg_bracket_x1_y1_is_center():
    h = heisenberg(1)
    assert np.array_equal(bracket(h, h.basis(1), h.basis(2)), h.basis(0))


def test_bracket_with_itself_vanishes(rng):
    g = from_symmetric(random_symmetric(rng, 2))
    x = rng.standard_normal(g.dim)
    assert np.max(np.abs(bracket(g.alg, x, x))) <= 1e-14


def test_from_identity_top_acts_on_x1_as_y1():
    g = from_symmetric(np.eye(2))
    assert np.array_equal(bracket(g.alg, g.alg.basis(3), g.alg.basis(1)), g.alg.basis(2))


def test_bracket_matches_hand_formula(rng):
    for n in (1, 2, 3):
        A = random_symmetric(rng, n)
        g = from_symmetric(A)
        for _ in range(10):
            x, y = rng.standard_normal((2, g.dim))
            assert np.allclose(bracket(g.alg, x, y), oracle_bracket(A, x, y), atol=1e-12)


def test_bracket_rejects_wrong_length():
    with pytest.raises(InvalidArgument):
        bracket(heisenberg(1), np.ones(2), np.ones(3))


def test_jacobi_defect_heisenberg_zero():
    assert jacobi_defect(heisenberg(2)) == 0.0


def test_jacobi_defect_random_extension(rng):
    assert jacobi_defect(from_symmetric(random_symmetric(rng, 2)).alg) <= 1e-12


def test_asymmetric_perturbation_is_detected():
    # Every bracket in h1 lands in the center, so a one-sided perturbation
    # of c[1][2][0] keeps the Jacobi sum at zero; it shows up as an
    # antisymmetry defect instead.
    c = np.array(heisenberg(1).structure)
    c[1, 2, 0] += 0.1
    broken = LieAlgebra(c)
    assert antisymmetry_defect(broken) == pytest.approx(0.1)
    assert jacobi_defect(broken) == 0.0


def test_jacobi_detects_perturbed_derivation_entry():
    g = oscillator(2)
    c = np.array(g.alg.structure)
    t = g.i_top
    c[t, 1, 2] += 0.1
    c[1, t, 2] -= 0.1
    broken = LieAlgebra(c)
    assert antisymmetry_defect(broken) == 0.0
    assert jacobi_defect(broken) > 1e-3


def test_ad_matrix_heisenberg_x1():
    M = ad_matrix(heisenberg(1), np.array([0.0, 1.0, 0.0]))
    expected = np.zeros((3, 3))
    expected[0, 2] = 1.0
    assert np.array_equal(M, expected)


def test_ad_matrix_zero():
    assert not np.any(ad_matrix(heisenberg(2), np.zeros(5)))


def test_ad_matrix_oscillator_top_is_rotation():
    g = oscillator(1)
    M = ad_matrix(g.alg, g.alg.basis(3))
    # X1 -> -Y1, Y1 -> X1
    assert np.array_equal(M[1:3, 1:3], np.array([[0.0, 1.0], [-1.0, 0.0]]))


def test_ad_matrix_reproduces_bracket(rng):
    g = from_symmetric(random_symmetric(rng, 2))
    x, y = rng.standard_normal((2, g.dim))
    assert np.allclose(ad_matrix(g.alg, x) @ y, bracket(g.alg, x, y), atol=1e-13)


def test_ad_invariance_random_extensions(rng):
    for _ in range(20):
        n = int(rng.integers(1, 4))
        g = from_symmetric(random_symmetric(rng, n))
        assert ad_invariance_defect(g.alg, g.metric) <= 1e-12


def test_ad_invariance_abelian_zero():
    assert ad_invariance_defect(LieAlgebra(np.zeros((3, 3, 3))), MetricForm(np.diag([1.0, 2.0, -1.0]))) == 0.0


def test_heisenberg_definite_metric_not_invariant():
    h = heisenberg(1)
    assert ad_invariance_defect(h, MetricForm(np.eye(3))) >= 1.0


def test_metric_rejects_singular_and_asymmetric():
    with pytest.raises(DegenerateMetricError):
        MetricForm(np.zeros((2, 2)))
    with pytest.raises(InvalidArgument):
        MetricForm(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_gradient_of_metric_quadratic_is_position(rng):
    g = from_symmetric(random_symmetric(rng, 2))
    x = rng.standard_normal(g.dim)
    assert np.allclose(gradient(g.metric, QuadraticFunction(g.metric.gram), x), x, atol=1e-12)


def test_gradient_of_zero():
    m = MetricForm(np.eye(3))
    assert not np.any(gradient(m, QuadraticFunction(np.zeros((3, 3))), np.ones(3)))


def test_gradient_of_extended_quadratic(rng):
    n = 2
    A = random_symmetric(rng, n)
    Ai = random_symmetric(rng, n, nonsingular=False)
    g = from_symmetric(A)
    Q = np.zeros((g.dim, g.dim))
    Q[1:-1, 1:-1] = Ai
    Q[0, -1] = Q[-1, 0] = 1.0
    x = rng.standard_normal(g.dim)
    expected = np.concatenate([[x[0]], np.linalg.solve(A, Ai @ x[1:-1]), [x[-1]]])
    assert np.allclose(gradient(g.metric, QuadraticFunction(Q), x), expected, atol=1e-10)


def test_gradient_pairing_identity(rng):
    g = from_symmetric(random_symmetric(rng, 2))
    Q = rng.standard_normal((g.dim, g.dim))
    f = QuadraticFunction(Q + Q.T)
    for _ in range(5):
        x = rng.standard_normal(g.dim)
        grad = gradient(g.metric, f, x)
        for _ in range(20):
            y = rng.standard_normal(g.dim)
            assert abs(g.metric(grad, y) - f.differential(x) @ y) <= 1e-10


def test_derived_series():
    assert derived_series(heisenberg(3)) == [7, 1, 0]
    assert derived_series(LieAlgebra(np.zeros((3, 3, 3)))) == [3, 0]
    series = derived_series(from_symmetric(np.eye(2)).alg)
    assert series[0] == 4 and series[-1] == 0


def test_adjoint_exp_identity_at_zero(rng):
    g = from_symmetric(random_symmetric(rng, 2))
    assert np.array_equal(adjoint_exp(g.alg, rng.standard_normal(g.dim), 0.0), np.eye(g.dim))


def test_adjoint_exp_oscillator_quarter_turn():
    g = oscillator(1)
    E = adjoint_exp(g.alg, g.alg.basis(3), np.pi / 2)
    assert np.allclose(E @ g.alg.basis(1), -g.alg.basis(2), atol=1e-15)


def test_adjoint_exp_nilpotent_truncates(rng):
    h = heisenberg(2)
    x = rng.standard_normal(5)
    assert np.allclose(adjoint_exp(h, x, 1.7), np.eye(5) + 1.7 * ad_matrix(h, x), atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.integers(0, 2**31))
def test_adjoint_exp_one_parameter_group(s, t, seed):
    rng = np.random.default_rng(seed)
    g = oscillator(2)
    x = rng.standard_normal(g.dim)
    lhs = adjoint_exp(g.alg, x, s + t)
    rhs = adjoint_exp(g.alg, x, s) @ adjoint_exp(g.alg, x, t)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(lhs)))


def test_algebra_json_round_trip(rng):
    g = from_symmetric(random_symmetric(rng, 2))
    alg, metric = algebra_from_dict(algebra_to_dict(g.alg, g.metric))
    assert np.array_equal(alg.structure, g.alg.structure)
    assert np.array_equal(metric.gram, g.metric.gram)
    assert alg.labels == g.alg.labels


def test_quadratic_requires_symmetry():
    with pytest.raises(InvalidArgument):
        QuadraticFunction(np.array([[0.0, 1.0], [0.0, 0.0]]))
