"""First Dirichlet eigenvalue and the derived embedding constants.

The first eigenvalue is the minimum of the Rayleigh quotient

    int_closure |grad u|^2  /  int_omega u^2

over Dirichlet functions, computed as the smallest eigenvalue of the
generalized problem L u = lambda M u on interior unknowns, where L is
the weighted Dirichlet Laplacian and M = diag(mu).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import _interior_matrix, dirichlet_energy, integrate
from .graphs import DomainPartition, WeightedGraph


@dataclass(frozen=True, eq=False)
class EigenResult:
    """lambda1 with its eigenfunction (Dirichlet, normalized so that
    int_omega u^2 dmu = 1, first nonzero entry positive)."""

    lambda1: float
    eigenfunction: np.ndarray
    iterations: int
    residual: float


def rayleigh_quotient(graph: WeightedGraph, partition: DomainPartition, u: np.ndarray) -> float:
    u = np.asarray(u, dtype=float)
    mass = integrate(graph, u * u, partition.omega)
    if mass == 0.0:
        raise ValueError("Rayleigh quotient needs u nonzero on the interior")
    return dirichlet_energy(graph, partition, u) / mass


def first_eigenvalue(
    graph: WeightedGraph,
    partition: DomainPartition,
    tolerance: float = 1e-12,
    max_iterations: int = 500,
    dense_cutoff: int = 200,
) -> EigenResult:
    """Smallest Dirichlet eigenvalue of the domain.

    Up to dense_cutoff interior vertices the dense symmetric problem
    M^(-1/2) L M^(-1/2) is solved directly; above that, inverse power
    iteration with a Rayleigh quotient stopping rule is used.
    """
    if partition.boundary.size == 0:
        raise ValueError(
            "empty boundary: constants make the Rayleigh quotient infimum 0, "
            "the eigenvalue problem is rejected"
        )
    if not partition.connected:
        raise ValueError("interior plus boundary must be connected")

    idx = partition.omega
    lmat = _interior_matrix(graph, partition)
    mdiag = graph.measure[idx]
    d = 1.0 / np.sqrt(mdiag)
    smat = lmat * d[:, None] * d[None, :]
    smat = 0.5 * (smat + smat.T)

    if len(idx) <= dense_cutoff:
        evals, evecs = np.linalg.eigh(smat)
        lam = float(evals[0])
        y = evecs[:, 0]
        iterations = 0
    else:
        y = np.sqrt(mdiag)
        y /= np.linalg.norm(y)
        lam = float(y @ smat @ y)
        iterations = 0
        for iterations in range(1, max_iterations + 1):
            z = np.linalg.solve(smat, y)
            y = z / np.linalg.norm(z)
            lam_new = float(y @ smat @ y)
            if abs(lam_new - lam) <= tolerance * max(1.0, abs(lam_new)):
                lam = lam_new
                break
            lam = lam_new
        else:
            raise ValueError(
                f"inverse power iteration did not converge in {max_iterations} iterations"
            )

    u_int = d * y  # back to the generalized problem; y unit => int u^2 dmu = 1
    scale = np.max(np.abs(u_int))
    for val in u_int:
        if abs(val) > 1e-14 * scale:
            if val < 0.0:
                u_int = -u_int
            break
    u = np.zeros(graph.n)
    u[idx] = u_int
    residual = float(np.max(np.abs(lmat @ u_int - lam * mdiag * u_int)))
    return EigenResult(lambda1=lam, eigenfunction=u, iterations=iterations, residual=residual)


@dataclass(frozen=True, eq=False)
class ConstantsReport:
    """Numeric constants attached to a domain and coefficient h.

    equiv_upper: factor 1 + 1/lambda1 relating the squared full and
        Dirichlet W12 norms.
    sup_embedding: bounds the sup norm on the interior by
        sup_embedding * ||u||_h, equal to sqrt(1/(mu_min * h0)).
    kappa: radius scale used by the two-solution ball criterion,
        sqrt(mu_min * h0) under H1, or that value divided by
        sqrt(1 - mu_min * h0 * int_omega h dmu) under H3.  kappa and
        sup_embedding are reciprocal conventions; both are reported so
        either one can be read off directly.
    """

    lambda1: float
    equiv_upper: float
    mu_min: float
    h0: float
    sup_embedding: float
    kappa: float
    hypothesis: str
    omega_measure: float

    def lq_embedding(self, q: float) -> float:
        """L^q bound factor: (total omega measure)^(1/q) * sup_embedding."""
        q = float(q)
        if not q >= 1.0:
            raise ValueError(f"q must be >= 1, got {q}")
        return self.omega_measure ** (1.0 / q) * self.sup_embedding


def embedding_constants(
    graph: WeightedGraph,
    partition: DomainPartition,
    h: np.ndarray,
    h0: float,
    hypothesis: str = "H1",
    eigen: EigenResult | None = None,
) -> ConstantsReport:
    """Collect lambda1, the norm-equivalence factor and the embedding
    constants for the given uniform lower bound h0 of h."""
    h0 = float(h0)
    if not h0 > 0.0:
        raise ValueError(f"h0 must be positive, got {h0}")
    if hypothesis not in ("H1", "H3"):
        raise ValueError(f"hypothesis must be 'H1' or 'H3', got {hypothesis!r}")
    if eigen is None:
        eigen = first_eigenvalue(graph, partition)
    mu_min = graph.mu_min
    base = math.sqrt(mu_min * h0)
    if hypothesis == "H1":
        kappa = base
    else:
        h_int = integrate(graph, np.asarray(h, dtype=float), partition.omega)
        denom = 1.0 - mu_min * h0 * h_int
        if denom <= 0.0:
            raise ValueError(
                "H3 kappa undefined: 1 - mu_min * h0 * int_omega h dmu = "
                f"{denom} is not positive"
            )
        kappa = base / math.sqrt(denom)
    return ConstantsReport(
        lambda1=eigen.lambda1,
        equiv_upper=1.0 + 1.0 / eigen.lambda1,
        mu_min=mu_min,
        h0=h0,
        sup_embedding=math.sqrt(1.0 / (mu_min * h0)),
        kappa=kappa,
        hypothesis=hypothesis,
        omega_measure=integrate(graph, np.ones(graph.n), partition.omega),
    )
