import math

import numpy as np
import pytest
from sklearn.base import clone

from reflectode._errors import DomainError, FunctionalResonanceError, ResonanceError
from reflectode.functional import Measure, lebesgue
from reflectode.kernel import KernelParams, gbar_minus_T
from reflectode.solver import (
    Antiperiodic,
    Functional,
    Lambda,
    Periodic,
    ProblemSpec,
    ReflectionBVP,
    solve,
    xi,
)
from reflectode.verify import boundary_residual, residual

from conftest import eqej1, eqej1_exact

GRID = np.linspace(-0.5, 0.5, 21)


def test_xi_of_exp_is_cosh(p_half):
    # cosh' + cosh(-t) = sinh + cosh = e^t and cosh is even, so periodic
    for t in (-0.5, -0.2, 0.0, 0.31, 0.5):
        assert xi("exp(t)", t, p_half) == pytest.approx(math.cosh(t), abs=1e-12)


def test_periodic_solution_satisfies_problem():
    spec = ProblemSpec(2.0, 0.6, "t^2 + sin(3*t)", Periodic())
    u = solve(spec)
    assert residual(u, spec.h, spec.m, spec.T) < 1e-6
    assert boundary_residual(u, spec.bc, spec.T) < 1e-10


def test_antiperiodic_solution_satisfies_problem():
    spec = ProblemSpec(1.5, 0.5, "exp(t) - 2*t", Antiperiodic())
    u = solve(spec)
    assert residual(u, spec.h, spec.m, spec.T) < 1e-6
    assert boundary_residual(u, spec.bc, spec.T) < 1e-10


def test_antiperiodic_at_zero_m():
    # x' = h with x(-T) + x(T) = 0: for h = 1 this is x = t
    u = solve(ProblemSpec(0.0, 1.0, "1", Antiperiodic()))
    np.testing.assert_allclose(u(np.linspace(-1, 1, 9)), np.linspace(-1, 1, 9), atol=1e-12)


def test_lambda_zero_equals_periodic():
    spec = ProblemSpec(1.0, 0.5, "cos(t) + t", Periodic())
    u0 = solve(spec).evaluate(GRID)
    ul = solve(spec.with_bc(Lambda(0.0))).evaluate(GRID)
    np.testing.assert_allclose(ul, u0, atol=1e-15)


def test_lambda_adds_homogeneous_column(p_half):
    spec = ProblemSpec(1.0, 0.5, "cos(t) + t", Lambda(0.7))
    u = solve(spec)
    base = solve(spec.with_bc(Periodic())).evaluate(GRID)
    np.testing.assert_allclose(u.evaluate(GRID), base + 0.7 * gbar_minus_T(GRID, p_half), atol=1e-13)
    assert boundary_residual(u, spec.bc, 0.5) < 1e-10
    assert residual(u, spec.h, 1.0, 0.5) < 1e-6


@pytest.mark.parametrize("c", [0.0, 1.0, 5.0])
def test_eqej1_matches_closed_form(c):
    u = solve(eqej1(c))
    np.testing.assert_allclose(u.evaluate(GRID), eqej1_exact(GRID, c), atol=1e-10)
    assert u.lambda_used == pytest.approx(c - 2 * math.sinh(0.5), abs=1e-9)


def test_eqej1_functional_value():
    spec = eqej1(1.0)
    u = solve(spec)
    assert lebesgue().apply(u, 0.5) == pytest.approx(1.0, abs=1e-7)
    assert residual(u, spec.h, 1.0, 0.5) < 1e-6


def test_functional_diagnostics():
    u = solve(eqej1(1.0))
    d = u.diagnostics
    assert d["gap"] == pytest.approx(2 * math.sin(0.5), abs=1e-12)
    assert d["F_homogeneous"] == pytest.approx(1.0, abs=1e-12)
    assert d["F_xi_h"] == pytest.approx(2 * math.sinh(0.5), abs=1e-9)


def test_homogeneous_point_evaluation():
    # h = 0 and F(x) = x(0): u = c (cos - sin)
    F = Measure(atoms=((0.0, 1.0),))
    u = solve(ProblemSpec(1.0, 0.5, "0", Functional(F, 2.0)))
    np.testing.assert_allclose(u(GRID), 2.0 * (np.cos(GRID) - np.sin(GRID)), atol=1e-12)


def test_homogeneous_endpoint_evaluation():
    # F(x) = x(T): u = c (cos - sin) / (cos mT - sin mT)
    F = Measure(atoms=((0.5, 1.0),))
    u = solve(ProblemSpec(1.0, 0.5, "0", Functional(F, 1.0)))
    expected = (np.cos(GRID) - np.sin(GRID)) / (math.cos(0.5) - math.sin(0.5))
    np.testing.assert_allclose(u(GRID), expected, atol=1e-12)


def test_functional_resonance():
    # F(cos) = F(sin) at t = pi/4
    F = Measure(atoms=((math.pi / 4, 1.0),))
    with pytest.raises(FunctionalResonanceError):
        solve(ProblemSpec(1.0, 1.0, "1", Functional(F, 1.0)))


def test_periodic_resonance():
    with pytest.raises(ResonanceError):
        solve(ProblemSpec(math.pi, 1.0, "1", Periodic()))
    with pytest.raises(ResonanceError):
        solve(ProblemSpec(math.pi / 2, 1.0, "1", Antiperiodic()))


def test_atom_outside_interval():
    with pytest.raises(DomainError):
        ProblemSpec(1.0, 0.5, "1", Functional(Measure(atoms=((0.7, 1.0),)), 1.0))


def test_evaluation_outside_interval():
    u = solve(ProblemSpec(1.0, 0.5, "1"))
    with pytest.raises(DomainError):
        u(0.6)


def test_linearity_in_forcing():
    spec = ProblemSpec(1.3, 0.8, "exp(t)", Periodic())
    grid = np.linspace(-0.8, 0.8, 11)
    u1 = solve(spec).evaluate(grid)
    u2 = solve(spec.with_forcing("sin(2*t)")).evaluate(grid)
    u12 = solve(spec.with_forcing("3*exp(t) - 2*sin(2*t)")).evaluate(grid)
    np.testing.assert_allclose(u12, 3 * u1 - 2 * u2, atol=1e-12)


def test_difference_of_functional_solutions_is_homogeneous(p_half):
    # u_c1 - u_c2 = (c1 - c2) gbar(., -T) / F(gbar(., -T)), and F(gbar(., -T)) = 1 here
    u1 = solve(eqej1(3.0)).evaluate(GRID)
    u2 = solve(eqej1(1.0)).evaluate(GRID)
    np.testing.assert_allclose(u1 - u2, 2.0 * gbar_minus_T(GRID, p_half), atol=1e-12)


def test_callable_forcing():
    u = solve(ProblemSpec(1.0, 0.5, np.exp, Periodic()))
    np.testing.assert_allclose(u(GRID), np.cosh(GRID), atol=1e-12)


def test_scalar_and_array_evaluation():
    u = solve(ProblemSpec(1.0, 0.5, "exp(t)"))
    assert isinstance(u(0.1), float)
    assert u(np.array([[0.1, 0.2]])).shape == (1, 2)


class TestEstimator:
    def test_params_roundtrip(self):
        est = ReflectionBVP(m=2.0, T=0.3, bc="lambda", lam=0.5)
        params = est.get_params()
        assert params["m"] == 2.0 and params["bc"] == "lambda" and params["lam"] == 0.5
        assert clone(est).get_params() == params
        est.set_params(c=4.0)
        assert est.c == 4.0

    def test_fit_predict(self):
        est = ReflectionBVP(m=1.0, T=0.5, bc="functional", c=1.0).fit("exp(t)")
        np.testing.assert_allclose(est.predict(GRID), eqej1_exact(GRID, 1.0), atol=1e-10)
        assert est.lambda_used_ == pytest.approx(1.0 - 2 * math.sinh(0.5), abs=1e-9)

    def test_predict_scalar_is_array(self):
        est = ReflectionBVP(m=1.0, T=0.5).fit("exp(t)")
        out = est.predict(0.2)
        assert out.shape == (1,)
        assert out[0] == pytest.approx(math.cosh(0.2), abs=1e-12)

    def test_unfitted(self):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            ReflectionBVP().predict(0.0)

    def test_unknown_bc(self):
        with pytest.raises(DomainError):
            ReflectionBVP(bc="dirichlet").fit("1")

    def test_resonant_fit(self):
        with pytest.raises(ResonanceError):
            ReflectionBVP(m=math.pi, T=1.0).fit("1")

    def test_kernel_params_used(self):
        est = ReflectionBVP(m=1.0, T=0.5).fit("1")
        assert est.solution_.spec.params == KernelParams(1.0, 0.5)
