"""Mountain-pass search, ball minimization and the two-solution pipeline."""

import math

import numpy as np
import pytest

from graphpde import (
    Problem,
    SolverConfig,
    SolverError,
    StepRule,
    build_graph,
    build_spike_endpoint,
    ball_minimize,
    compute_boundary,
    directional_derivative,
    energy,
    mountain_pass,
    odd_poly,
    power,
    power_plus_const,
    two_solutions,
)
from util import bisect, random_connected_graph, random_partition, three_path_problem

POWER4 = power(4, theta=4.0, M=1.0)
POWER3 = power(3, theta=3.0, M=1.0)
PLUS_CONST = power_plus_const(4, 0.1)

# residual of the one-interior-vertex problem with the plus-const term
SMALL_ROOT = bisect(lambda t: 2 * t - t**3 - 0.1, 0.0, 0.5)
LARGE_ROOT = bisect(lambda t: 2 * t - t**3 - 0.1, 1.0, 1.4)


def test_spike_endpoint_oracle():
    problem = three_path_problem(POWER4)
    e = build_spike_endpoint(problem)
    assert e.tolist() == [0.0, 2.0, 0.0]
    assert energy(problem, e) <= 0.0


def test_spike_endpoint_prefers_heavier_vertex():
    graph = build_graph(
        ["a", "b", "c", "d"],
        [("a", "b", 1.0), ("b", "c", 3.0), ("c", "d", 2.0)],
    )
    part = compute_boundary(graph, ["b", "c"])
    problem = Problem(graph=graph, partition=part, h=np.ones(4), nl=POWER4, h0=1.0)
    e = build_spike_endpoint(problem)
    assert e[2] > 0.0 and e[1] == 0.0  # mu(c) = 5 beats mu(b) = 4


def test_spike_endpoint_rejects_subquadratic_growth():
    problem = three_path_problem(odd_poly({1: 1.0}))
    config = SolverConfig(spike_max_doublings=8, verify_hypotheses=False)
    with pytest.raises(SolverError) as err:
        build_spike_endpoint(problem, config)
    assert "superquadratic" in str(err.value)
    assert "energy(" in str(err.value)


def test_mountain_pass_power4():
    problem = three_path_problem(POWER4)
    sol = mountain_pass(problem)
    assert abs(sol.u[1] - math.sqrt(2)) <= 1e-8
    assert sol.u[0] == 0.0 and sol.u[2] == 0.0
    assert abs(sol.energy_value - 2.0) <= 1e-8
    assert sol.residual_max <= 1e-12
    assert sol.kind == "mountain_pass"
    assert not sol.newton_shifted
    assert sol.rho_used is None and not sol.in_ball
    assert sol.h_norm == pytest.approx(2 * math.sqrt(2), rel=1e-9)


def test_mountain_pass_power3():
    sol = mountain_pass(three_path_problem(POWER3))
    assert abs(sol.u[1] - 2.0) <= 1e-8
    assert abs(sol.energy_value - 8.0 / 3.0) <= 1e-8
    assert sol.residual_max <= 1e-12


def test_mountain_pass_plus_const_matches_bisection():
    problem = three_path_problem(PLUS_CONST)
    sol = mountain_pass(problem, SolverConfig(verify_hypotheses=False))
    assert abs(sol.u[1] - LARGE_ROOT) <= 1e-8


def test_mountain_pass_trace_and_verdicts():
    problem = three_path_problem(POWER4)
    trace: list = []
    verdicts: list = []
    sol = mountain_pass(problem, trace_out=trace, verdicts_out=verdicts)
    assert sol.residual_max <= 1e-12
    levels = [lv for lv, _ in trace]
    assert all(b <= a + 1e-15 for a, b in zip(levels, levels[1:]))
    # the discrete path max undershoots the exact saddle by at most the
    # sampling gap; the certified level must still land near it
    assert abs(levels[-1] - sol.energy_value) <= 0.05
    names = [v.name for v in verdicts]
    assert "H1" in names and "H2" in names and "F1" in names
    assert "F2" in names and "F4" in names  # superquadratic-constants route
    assert all(v.holds for v in verdicts)


def test_mountain_pass_monotone_route_uses_f5_f6():
    problem = three_path_problem(power(4))  # no growth constants attached
    verdicts: list = []
    config = SolverConfig(check_grid=None, f6_threshold=50.0)
    mountain_pass(problem, config, verdicts_out=verdicts)
    names = [v.name for v in verdicts]
    assert "F5" in names and "F6" in names and "F2" not in names


def test_mountain_pass_gate_failure_is_reported():
    problem = three_path_problem(power(4))
    # the default grid edge gives ratio 100 against the 1e3 threshold:
    # honest sampled evidence is "not superlinear enough", so it rejects
    with pytest.raises(SolverError) as err:
        mountain_pass(problem)
    assert "F6" in str(err.value)


def test_mountain_pass_f2_blocks_shifted_reaction():
    problem = three_path_problem(power_plus_const(4, 0.1, theta=3.0, M=2.0))
    with pytest.raises(SolverError) as err:
        mountain_pass(problem)
    assert "F2" in str(err.value)


def test_mountain_pass_no_barrier():
    problem = three_path_problem(power_plus_const(4, 10.0))
    with pytest.raises(SolverError) as err:
        mountain_pass(problem, SolverConfig(verify_hypotheses=False))
    assert "endpoint" in str(err.value)


def test_mountain_pass_on_random_graph(rng):
    graph = random_connected_graph(rng, n_min=6, n_max=10)
    part = random_partition(rng, graph)
    problem = Problem(graph=graph, partition=part, h=np.ones(graph.n), nl=POWER4, h0=1.0)
    trace: list = []
    sol = mountain_pass(problem, trace_out=trace)
    assert sol.residual_max <= 1e-12
    assert sol.energy_value > 0.0
    assert float(np.max(np.abs(sol.u))) > 1e-6
    levels = [lv for lv, _ in trace]
    assert all(b <= a + 1e-15 for a, b in zip(levels, levels[1:]))


def test_ball_minimize_plus_const():
    problem = three_path_problem(PLUS_CONST)
    sol = ball_minimize(problem, SolverConfig(rho=1.0))
    assert abs(sol.u[1] - SMALL_ROOT) <= 1e-8
    assert sol.kind == "ball_min"
    assert sol.in_ball and sol.rho_used == 1.0
    assert sol.h_norm < 1.0
    assert sol.residual_max <= 1e-12
    assert sol.energy_value < 0.0  # strictly below the zero function


def test_ball_minimize_fixed_step_rule():
    problem = three_path_problem(PLUS_CONST)
    config = SolverConfig(rho=1.0, step_rule=StepRule(kind="fixed", alpha=0.25))
    sol = ball_minimize(problem, config)
    assert abs(sol.u[1] - SMALL_ROOT) <= 1e-8


def test_ball_minimize_trivial_when_zero_is_solution():
    problem = three_path_problem(POWER4)
    sol = ball_minimize(problem, SolverConfig(rho=1.0))
    assert sol.kind == "trivial"
    assert np.all(sol.u == 0.0)
    assert sol.energy_value == 0.0
    assert sol.in_ball


def test_ball_minimize_pinned_to_sphere():
    problem = three_path_problem(power_plus_const(4, 10.0))
    with pytest.raises(SolverError) as err:
        ball_minimize(problem, SolverConfig(rho=1.0))
    assert "no interior minimizer found" in str(err.value)


def test_ball_minimize_needs_rho():
    problem = three_path_problem(PLUS_CONST)
    with pytest.raises(SolverError):
        ball_minimize(problem)


def test_two_solutions_plus_const():
    problem = three_path_problem(PLUS_CONST)
    report = two_solutions(problem, SolverConfig(rho=1.0))
    ball_sol, pass_sol = report.solutions
    assert ball_sol.kind == "ball_min" and pass_sol.kind == "mountain_pass"
    assert abs(ball_sol.u[1] - SMALL_ROOT) <= 1e-8
    assert abs(pass_sol.u[1] - LARGE_ROOT) <= 1e-8
    assert ball_sol.in_ball and not pass_sol.in_ball
    assert report.lambda1 == pytest.approx(1.0, abs=1e-10)
    assert report.constants is not None and report.constants.hypothesis == "H1"
    assert report.ball is not None
    assert report.ball.beta_max == pytest.approx(1.0 / 0.7 - 1.0, rel=1e-9)
    names = [v.name for v in report.hypothesis_verdicts]
    for expected in ("H1", "H2", "H3", "F7", "F1", "beta-range"):
        assert expected in names
    assert set(report.iteration_trace) == {"ball_min", "mountain_pass"}
    assert all(len(rows) > 0 for rows in report.iteration_trace.values())
    assert report.ps_diagnostic


def test_two_solutions_m0_mode_matches_rho_mode():
    problem = three_path_problem(PLUS_CONST)
    by_rho = two_solutions(problem, SolverConfig(rho=1.0))
    by_m0 = two_solutions(problem, SolverConfig(m0=1.0))
    for a, b in zip(by_rho.solutions, by_m0.solutions):
        assert np.allclose(a.u, b.u, rtol=0, atol=1e-12)
    assert by_m0.ball.rho == pytest.approx(1.0)
    assert by_m0.ball.u_bound == 1.0
    names = [v.name for v in by_m0.hypothesis_verdicts]
    assert "F8" in names
    assert "F8" not in [v.name for v in by_rho.hypothesis_verdicts]


def test_two_solutions_f8_blocks_large_beta():
    problem = three_path_problem(PLUS_CONST)
    with pytest.raises(SolverError) as err:
        two_solutions(problem, SolverConfig(m0=1.0, beta=1.0))
    assert "F8" in str(err.value)


def test_two_solutions_rho_mode_rejects_large_beta():
    problem = three_path_problem(PLUS_CONST)
    with pytest.raises(SolverError) as err:
        two_solutions(problem, SolverConfig(rho=1.0, beta=1.0))
    assert "no valid beta" in str(err.value)


def test_two_solutions_rejects_zero_preserving_reaction():
    problem = three_path_problem(POWER4)
    with pytest.raises(SolverError) as err:
        two_solutions(problem, SolverConfig(rho=1.0))
    msg = str(err.value)
    assert "F7" in msg and "f(x, 0) != 0" in msg


def test_two_solutions_rejects_vanishing_h():
    problem = three_path_problem(PLUS_CONST, h_value=0.0)
    with pytest.raises(SolverError) as err:
        two_solutions(problem, SolverConfig(rho=1.0))
    assert "H2" in str(err.value)


def test_two_solutions_rejects_when_h1_and_h3_fail():
    problem = three_path_problem(PLUS_CONST, h_value=0.6, h0=1.0)
    with pytest.raises(SolverError) as err:
        two_solutions(problem, SolverConfig(rho=1.0))
    assert "H1" in str(err.value) and "H3" in str(err.value)


def test_two_solutions_needs_h0():
    problem = three_path_problem(PLUS_CONST, h0=None)
    with pytest.raises(SolverError) as err:
        two_solutions(problem, SolverConfig(rho=1.0))
    assert "h0" in str(err.value)


def test_two_solutions_ball_spec_required_and_exclusive():
    problem = three_path_problem(PLUS_CONST)
    with pytest.raises(SolverError):
        two_solutions(problem)
    with pytest.raises(SolverError):
        two_solutions(problem, SolverConfig(rho=1.0, m0=1.0))


def test_two_solutions_attaches_f4_when_constants_present():
    nl = power_plus_const(4, 0.1, theta=3.0, M=2.0)
    problem = three_path_problem(nl)
    report = two_solutions(problem, SolverConfig(rho=1.0))
    f4 = [v for v in report.hypothesis_verdicts if v.name == "F4"]
    assert len(f4) == 1 and f4[0].holds

    bad = power_plus_const(4, 0.1, theta=4.0, M=1.0)
    with pytest.raises(SolverError) as err:
        two_solutions(three_path_problem(bad), SolverConfig(rho=1.0))
    assert "F4" in str(err.value)


def test_two_solutions_deterministic():
    problem = three_path_problem(PLUS_CONST)
    a = two_solutions(problem, SolverConfig(rho=1.0))
    b = two_solutions(problem, SolverConfig(rho=1.0))
    assert a.iteration_trace == b.iteration_trace
    for sa, sb in zip(a.solutions, b.solutions):
        assert np.array_equal(sa.u, sb.u)
        assert sa.energy_value == sb.energy_value


def test_solver_scaling_equivariance():
    base = three_path_problem(PLUS_CONST)
    lam = 2.0
    scaled_graph = build_graph(
        ["a", "b", "c"],
        [("a", "b", lam), ("b", "c", lam)],
        measure_mode="given",
        measures={"a": lam, "b": 2 * lam, "c": lam},
    )
    part = compute_boundary(scaled_graph, ["b"])
    scaled = Problem(
        graph=scaled_graph, partition=part, h=np.ones(3), nl=PLUS_CONST, h0=1.0
    )
    config = SolverConfig(verify_hypotheses=False)
    sol_base = mountain_pass(base, config)
    sol_scaled = mountain_pass(scaled, config)
    # same critical points, energies scaled by the common factor
    assert np.allclose(sol_scaled.u, sol_base.u, rtol=0, atol=1e-12)
    assert sol_scaled.energy_value == pytest.approx(lam * sol_base.energy_value, rel=1e-12)
    u = sol_base.u
    assert energy(scaled, u) == pytest.approx(lam * energy(base, u), rel=1e-14)


def test_weak_residual_at_solutions(rng):
    problem = three_path_problem(PLUS_CONST)
    report = two_solutions(problem, SolverConfig(rho=1.0))
    tol = SolverConfig().newton_tol
    for sol in report.solutions:
        for _ in range(50):
            phi = np.zeros(3)
            phi[1] = rng.uniform(-2.0, 2.0)
            norm_phi = math.sqrt(2.0) * abs(phi[1]) * math.sqrt(2.0)  # h-norm on this graph
            dd = directional_derivative(problem, sol.u, phi)
            assert abs(dd) <= 10 * tol * max(norm_phi, 1e-30)


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(path_points=2)
    with pytest.raises(ValueError):
        SolverConfig(deform_steps=0)
    with pytest.raises(ValueError):
        SolverConfig(deform_tol=0.0)
    with pytest.raises(ValueError):
        SolverConfig(newton_max=0)
    with pytest.raises(ValueError):
        SolverConfig(rho=-1.0)
    with pytest.raises(ValueError):
        SolverConfig(spike_max_doublings=0)
    with pytest.raises(ValueError):
        StepRule(kind="mystery")
    with pytest.raises(ValueError):
        StepRule(alpha=0.0)
    with pytest.raises(ValueError):
        StepRule(shrink=1.0)
    with pytest.raises(ValueError):
        StepRule(armijo=0.0)


def test_mountain_pass_in_ball_flag():
    problem = three_path_problem(POWER4)
    sol = mountain_pass(problem, SolverConfig(rho=100.0))
    assert sol.in_ball and sol.rho_used == 100.0
    assert sol.h_norm == pytest.approx(2 * math.sqrt(2), rel=1e-9)
