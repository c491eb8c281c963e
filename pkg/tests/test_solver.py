"""Bundled solver against independent references.

Continuous correctness is checked against brute-force vertex
enumeration (and scipy, where available); integer mode against
exhaustive lattice enumeration.
"""

from __future__ import annotations

import numpy as np
import pytest

from capplan.errors import TooLargeForBundledSolver
from capplan.lp.model import LinearModel
from capplan.lp.solver import MODE_INTEGER, SolveOptions, solve
from conftest import lattice_minimum, random_lp, random_milp, vertex_enumeration_minimum


class TestBasics:
    def test_single_bound(self):
        model = LinearModel()
        x = model.add_variable("x", (), lower=3.0)
        model.add_objective(x, 1.0)
        solution = solve(model)
        assert solution.status == "optimal"
        assert solution.objective == pytest.approx(3.0, abs=1e-12)

    def test_contradictory_rows_are_infeasible(self):
        model = LinearModel()
        x = model.add_variable("x", ())
        model.add_constraint("c", [(x, 1.0)], "<=", -1.0)
        model.add_objective(x, 0.0)
        assert solve(model).status == "infeasible"

    def test_negative_cost_ray_is_unbounded(self):
        model = LinearModel()
        x = model.add_variable("x", ())
        model.add_objective(x, -1.0)
        assert solve(model).status == "unbounded"

    def test_free_variable_split(self):
        model = LinearModel()
        x = model.add_variable("x", (), lower=None)
        model.add_constraint("c", [(x, 1.0)], ">=", -7.0)
        model.add_objective(x, 1.0)
        solution = solve(model)
        assert solution.objective == pytest.approx(-7.0, abs=1e-9)

    def test_upper_bounded_only_variable(self):
        model = LinearModel()
        x = model.add_variable("x", (), lower=None, upper=4.0)
        model.add_objective(x, -2.0)
        solution = solve(model)
        assert solution.objective == pytest.approx(-8.0, abs=1e-9)

    def test_equality_system(self):
        # x + y = 4, x - y = 2  ->  (3, 1)
        model = LinearModel()
        x = model.add_variable("x", ())
        y = model.add_variable("y", ())
        model.add_constraint("sum", [(x, 1.0), (y, 1.0)], "=", 4.0)
        model.add_constraint("diff", [(x, 1.0), (y, -1.0)], "=", 2.0)
        model.add_objective(x, 1.0)
        model.add_objective(y, 1.0)
        solution = solve(model)
        assert solution.values[x] == pytest.approx(3.0, abs=1e-9)
        assert solution.values[y] == pytest.approx(1.0, abs=1e-9)

    def test_feasible_point_respects_tolerances(self):
        model = LinearModel()
        x = model.add_variable("x", ())
        y = model.add_variable("y", (), upper=10.0)
        model.add_constraint("c1", [(x, 2.0), (y, 1.0)], ">=", 8.0)
        model.add_constraint("c2", [(x, 1.0), (y, 3.0)], "<=", 15.0)
        model.add_objective(x, 3.0)
        model.add_objective(y, 1.0)
        solution = solve(model)
        assert solution.status == "optimal"
        assert model.max_violation(solution.values) <= 1e-9


class TestAgainstVertexEnumeration:
    def test_randomized_lps_match_brute_force(self):
        rng = np.random.default_rng(42)
        optimal = 0
        for _ in range(60):
            model = random_lp(rng)
            expected_status, expected = vertex_enumeration_minimum(model)
            solution = solve(model)
            assert solution.status == expected_status, (model.name, expected_status)
            if expected_status == "optimal":
                optimal += 1
                assert solution.objective == pytest.approx(expected, abs=1e-9)
        assert optimal >= 20  # the generator must produce real work

    def test_randomized_lps_match_scipy(self):
        scipy_opt = pytest.importorskip("scipy.optimize")
        rng = np.random.default_rng(71)
        for _ in range(40):
            model = random_lp(rng)
            n = len(model.variables)
            cost = np.zeros(n)
            for var, coeff in model.objective_coefficients().items():
                cost[var.position] = coeff
            a_ub, b_ub, a_eq, b_eq = [], [], [], []
            for constraint in model.constraints:
                row = np.zeros(n)
                for var, value in constraint.coefficients:
                    row[var.position] = value
                if constraint.sense == "<=":
                    a_ub.append(row), b_ub.append(constraint.rhs)
                elif constraint.sense == ">=":
                    a_ub.append(-row), b_ub.append(-constraint.rhs)
                else:
                    a_eq.append(row), b_eq.append(constraint.rhs)
            result = scipy_opt.linprog(
                cost,
                A_ub=np.array(a_ub) if a_ub else None,
                b_ub=np.array(b_ub) if b_ub else None,
                A_eq=np.array(a_eq) if a_eq else None,
                b_eq=np.array(b_eq) if b_eq else None,
                bounds=[(v.lower, v.upper) for v in model.variables],
                method="highs",
            )
            solution = solve(model)
            if result.status == 2:
                assert solution.status == "infeasible"
            elif result.status == 0:
                assert solution.status == "optimal"
                assert solution.objective == pytest.approx(result.fun, abs=1e-7)


class TestIntegerMode:
    def test_randomized_milps_match_lattice(self):
        rng = np.random.default_rng(2024)
        optimal = 0
        for _ in range(50):
            model = random_milp(rng)
            expected_status, expected = lattice_minimum(model)
            solution = solve(model, SolveOptions(mode=MODE_INTEGER))
            assert solution.status == expected_status
            if expected_status == "optimal":
                optimal += 1
                assert solution.objective == pytest.approx(expected, abs=1e-9)
                for var in model.variables:
                    assert solution.values[var] == round(solution.values[var])
        assert optimal >= 20

    def test_continuous_mode_relaxes_integrality(self):
        model = LinearModel()
        x = model.add_variable("x", (), integer=True)
        model.add_constraint("c", [(x, 2.0)], ">=", 3.0)
        model.add_objective(x, 1.0)
        relaxed = solve(model)
        assert relaxed.objective == pytest.approx(1.5, abs=1e-9)
        integral = solve(model, SolveOptions(mode=MODE_INTEGER))
        assert integral.objective == pytest.approx(2.0, abs=1e-9)

    def test_integer_cap_enforced(self):
        model = LinearModel()
        for i in range(26):
            model.add_variable("x", (i,), upper=1.0, integer=True)
        model.add_objective(model.get_variable("x", (0,)), 1.0)
        with pytest.raises(TooLargeForBundledSolver):
            solve(model, SolveOptions(mode=MODE_INTEGER))

    def test_continuous_size_cap_enforced(self):
        model = LinearModel()
        for i in range(2001):
            model.add_variable("x", (i,))
        model.add_objective(model.get_variable("x", (0,)), 1.0)
        with pytest.raises(TooLargeForBundledSolver):
            solve(model)


class TestDeterminism:
    def test_repeat_solves_are_bit_identical(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            model = random_lp(rng)
            first = solve(model)
            second = solve(model)
            assert first.status == second.status
            if first.status == "optimal":
                assert first.objective == second.objective
                assert all(first.values[v] == second.values[v] for v in model.variables)

    def test_iteration_limit_status(self):
        model = LinearModel()
        x = model.add_variable("x", ())
        y = model.add_variable("y", ())
        model.add_constraint("c", [(x, 1.0), (y, 1.0)], ">=", 1.0)
        model.add_objective(x, 1.0)
        model.add_objective(y, 2.0)
        solution = solve(model, SolveOptions(max_iterations=0))
        assert solution.status == "iteration_limit"
        assert solution.objective is None
