"""Energy functional for -laplacian(u) + h u = f(x, u) with zero boundary data.

The energy of a Dirichlet function u is

    energy(u) = 1/2 (int_closure |grad u|^2 dmu + int_omega h u^2 dmu)
                - int_omega F(x, u) dmu

with F the antiderivative of the reaction term.  Critical points are
weak solutions; on a finite graph they are also vertexwise solutions of
the equation, which is what the residual functions measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import (
    H_NORM,
    dirichlet_energy,
    gradient_form,
    integrate,
    laplacian,
    norm,
)
from .graphs import DomainPartition, WeightedGraph, is_dirichlet
from .nonlinearity import Nonlinearity, evaluate


@dataclass(frozen=True, eq=False)
class Problem:
    """A Dirichlet reaction-diffusion problem on a weighted graph.

    h is the zero-order coefficient (values outside the interior are
    ignored); h0 is the user-asserted uniform lower bound consumed by
    the hypothesis checks and the embedding constants, optional here.
    """

    graph: WeightedGraph
    partition: DomainPartition
    h: np.ndarray
    nl: Nonlinearity
    h0: float | None = None

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.shape != (self.graph.n,):
            raise ValueError(
                f"h must assign one value per vertex, expected shape ({self.graph.n},), "
                f"got {h.shape}"
            )
        if not np.all(np.isfinite(h[self.partition.omega])):
            raise ValueError("h must be finite on the interior")
        object.__setattr__(self, "h", h)
        if len(self.partition.omega) == 0:
            raise ValueError("interior region is empty")
        if len(self.partition.boundary) == 0:
            raise ValueError("boundary is empty; zero boundary data needs a boundary")
        if not self.partition.connected:
            raise ValueError("interior plus boundary must be connected")
        if self.h0 is not None and not self.h0 > 0.0:
            raise ValueError(f"h0 must be positive when given, got {self.h0}")

    def interior_h(self) -> np.ndarray:
        """h with off-interior entries zeroed.

        Every integral reads h on the interior only; the masked copy
        keeps stray values elsewhere (even inf) out of the arithmetic.
        """
        return np.where(self.partition.omega_mask, self.h, 0.0)


def _require_dirichlet(problem: Problem, u, name: str = "u"):
    u = np.asarray(u, dtype=float)
    if not is_dirichlet(problem.partition, u):
        raise ValueError(f"{name} must vanish outside the interior")
    return u


def energy(problem: Problem, u) -> float:
    """Value of the energy functional at a Dirichlet function."""
    u = _require_dirichlet(problem, u)
    g = problem.graph
    omega = problem.partition.omega
    quad = dirichlet_energy(g, problem.partition, u)
    mass = integrate(g, problem.interior_h() * u * u, omega)
    _, big_f, _ = evaluate(problem.nl, None, u)
    return 0.5 * (quad + mass) - integrate(g, big_f, omega)


def pointwise_residual(problem: Problem, u) -> np.ndarray:
    """Vertexwise equation residual -laplacian(u) + h u - f(x, u) on the
    interior, zero elsewhere.  Vanishes exactly at a solution."""
    u = _require_dirichlet(problem, u)
    g = problem.graph
    mask = problem.partition.omega_mask
    f, _, _ = evaluate(problem.nl, None, u)
    r = -laplacian(g, u) + problem.interior_h() * u - f
    return np.where(mask, r, 0.0)


def gradient(problem: Problem, u) -> np.ndarray:
    """Exact partial derivatives of the energy with respect to the
    interior values of u, zero elsewhere.

    The entry at x is measure(x) times the pointwise residual at x.
    The measure factor is what separates this Euclidean gradient from
    the residual itself; descent steps need the former, convergence
    reporting the latter, and mixing them up is the classic mistake.
    """
    return problem.graph.measure * pointwise_residual(problem, u)


def directional_derivative(problem: Problem, u, test) -> float:
    """Derivative of the energy at u in the direction of a Dirichlet
    test function, evaluated through the bilinear-form route.

    Equals sum(gradient(problem, u) * test); both routes are kept so
    they can be checked against each other.
    """
    u = _require_dirichlet(problem, u)
    test = _require_dirichlet(problem, test, name="test")
    g = problem.graph
    part = problem.partition
    omega = part.omega
    form = integrate(g, gradient_form(g, u, test), part.closure)
    f, _, _ = evaluate(problem.nl, None, u)
    zero_order = integrate(g, (problem.interior_h() * u - f) * test, omega)
    return form + zero_order


@dataclass(frozen=True)
class EnergyReport:
    """Scalar diagnostics of one candidate function: energy value,
    Euclidean gradient norm, weighted Sobolev norm and the largest
    vertexwise residual.  At an exact solution the last two of
    grad_norm and residual_max are zero."""

    value: float
    grad_norm: float
    h_norm_u: float
    residual_max: float


def energy_report(problem: Problem, u) -> EnergyReport:
    u = _require_dirichlet(problem, u)
    r = pointwise_residual(problem, u)
    grad = problem.graph.measure * r
    h_norm_u = norm(problem.graph, problem.partition, u, H_NORM, h=problem.interior_h())
    return EnergyReport(
        value=energy(problem, u),
        grad_norm=float(np.linalg.norm(grad)),
        h_norm_u=h_norm_u,
        residual_max=float(np.max(np.abs(r))) if len(r) else 0.0,
    )


@dataclass(frozen=True)
class BallConstants:
    """Constants for the small-ball branch of the two-solution setup.

    kappa converts the energy-ball radius sqrt(rho) into the pointwise
    range |u| <= u_bound = kappa sqrt(rho) scanned for the antiderivative
    maximum; beta_max = rho / (2 max|F|) - 1 is the largest admissible
    beta, +inf when F vanishes identically on the range and not a valid
    choice when <= 0.
    """

    kappa: float
    beta_max: float
    max_abs_F: float
    u_bound: float
    rho: float
    kappa_choice: str

    @property
    def valid(self) -> bool:
        return self.beta_max > 0.0


def ball_kappa(problem: Problem, kappa_choice: str) -> float:
    """Pointwise-range conversion constant for the ball argument.

    Three conventions are exposed because the source formulas are
    inconsistent with each other unless mu_min * h0 = 1:

      "H1"     the stated constant sqrt(mu_min h0)
      "H3"     the stated constant divided by
               sqrt(1 - mu_min h0 int_omega h dmu), for coefficients
               satisfying the integral-bound hypothesis
      "proof"  the reciprocal convention 1/sqrt(mu_min h0), which is
               the factor the sup-norm embedding bound actually yields

    No guess is made about which was intended; callers pick one and the
    reports label which was used.
    """
    if problem.h0 is None:
        raise ValueError("ball constants need the lower bound h0 on the problem")
    mu_h0 = problem.graph.mu_min * problem.h0
    if kappa_choice == "H1":
        return math.sqrt(mu_h0)
    if kappa_choice == "proof":
        return 1.0 / math.sqrt(mu_h0)
    if kappa_choice == "H3":
        h_int = integrate(problem.graph, problem.h, problem.partition.omega)
        radicand = 1.0 - mu_h0 * h_int
        if radicand <= 0.0:
            raise ValueError(
                f"1 - mu_min h0 int h = {radicand:g} is not positive; the H3 "
                "conversion constant is undefined for this coefficient"
            )
        return math.sqrt(mu_h0) / math.sqrt(radicand)
    raise ValueError(f"kappa_choice must be H1, H3 or proof, got {kappa_choice!r}")


def ball_constants(
    problem: Problem,
    rho: float,
    kappa_choice: str = "H1",
    grid_points: int = 10001,
) -> BallConstants:
    """Largest admissible beta for the energy ball of radius sqrt(rho).

    Scans |F| on a uniform grid over [-kappa sqrt(rho), kappa sqrt(rho)]
    and inverts the smallness condition
    beta + 1 <= rho / (2 max |F|).
    """
    if not rho > 0.0:
        raise ValueError(f"rho must be positive, got {rho}")
    kappa = ball_kappa(problem, kappa_choice)
    u_bound = kappa * math.sqrt(rho)
    us = np.linspace(-u_bound, u_bound, grid_points)
    _, big_f, _ = evaluate(problem.nl, None, us)
    max_abs = float(np.max(np.abs(big_f)))
    if max_abs == 0.0:
        beta_max = math.inf
    else:
        beta_max = rho / (2.0 * max_abs) - 1.0
    return BallConstants(
        kappa=kappa, beta_max=beta_max, max_abs_F=max_abs,
        u_bound=u_bound, rho=float(rho), kappa_choice=kappa_choice,
    )
