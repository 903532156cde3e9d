"""Maximal-entropy Markov measures, the resolvent route from a KMS state to an
invariant one, measure entropy, and the variational check.

For an irreducible 0/1 matrix with Perron data (lam, u, v), the stochasticized
chain p_ij = a_ij u_j / (lam u_i) with stationary vector pi_i = u_i v_i is the
unique maximal-entropy measure of the shift; its cylinder weights also have
the closed eigenvector form v_{w_1} u_{w_r} prod(a) / lam^(r-1), and both
forms are implemented so they can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import PerronData, as_zero_one, irreducible, perron_vectors


class InvariantViolation(RuntimeError):
    """A mathematically guaranteed identity failed numerically."""


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    """Stationary Markov measure supported on the transitions of a 0/1 matrix."""

    matrix: np.ndarray
    lam: float
    u: np.ndarray
    v: np.ndarray
    transitions: np.ndarray
    stationary: np.ndarray

    @property
    def entropy(self) -> float:
        return markov_entropy(self)


def parry_measure(A, tol: float = 1e-12) -> MarkovMeasure:
    """The maximal-entropy Markov measure of an irreducible 0/1 matrix.

    Raises InvariantViolation if the constructed chain misses row-stochasticity
    or stationarity beyond 1e-12.
    """
    M = as_zero_one(A)
    if not irreducible(M):
        raise ValueError("parry_measure requires an irreducible matrix")
    p = perron_vectors(M, tol=min(tol, 1e-13))
    P = M * p.u[None, :] / (p.lam * p.u[:, None])
    # float hygiene: divide out the row sums (a relative correction at the
    # Perron-residual scale) so row-stochasticity is exact
    P = P / P.sum(axis=1, keepdims=True)
    pi = p.u * p.v
    _check_markov(M, P, pi)
    return MarkovMeasure(matrix=M, lam=p.lam, u=p.u, v=p.v, transitions=P, stationary=pi)


def _check_markov(M, P, pi, tol: float = 1e-12) -> None:
    row_err = float(np.abs(P.sum(axis=1) - 1.0).max())
    stat_err = float(np.abs(pi @ P - pi).sum())
    norm_err = abs(float(pi.sum()) - 1.0)
    support_ok = bool(np.all((P > 0) == (M > 0)))
    if row_err > tol or stat_err > tol or norm_err > tol or not support_ok:
        raise InvariantViolation(
            f"Markov measure invariants failed: rows {row_err:.2e}, "
            f"stationarity {stat_err:.2e}, normalization {norm_err:.2e}, "
            f"support match {support_ok}"
        )


def cylinder(m: MarkovMeasure, word) -> float:
    """Measure of the cylinder set of a nonempty word: pi_{w_1} prod p; zero
    exactly on inadmissible words."""
    w = _validate_cylinder_word(m, word)
    value = float(m.stationary[w[0] - 1])
    for a, b in zip(w, w[1:]):
        value *= float(m.transitions[a - 1, b - 1])
        if value == 0.0:
            return 0.0
    return value


def cylinder_eigen(m: MarkovMeasure, word) -> float:
    """The same cylinder weight in the eigenvector form
    v_{w_1} u_{w_r} prod(a) / lam^(r-1)."""
    w = _validate_cylinder_word(m, word)
    for a, b in zip(w, w[1:]):
        if not m.matrix[a - 1, b - 1]:
            return 0.0
    r = len(w)
    return float(m.v[w[0] - 1] * m.u[w[-1] - 1] / m.lam ** (r - 1))


def _validate_cylinder_word(m: MarkovMeasure, word):
    w = tuple(int(s) for s in word)
    if len(w) < 1:
        raise ValueError("cylinder words must be nonempty")
    d = m.matrix.shape[0]
    for s in w:
        if s < 1 or s > d:
            raise ValueError(f"symbol {s} outside alphabet 1..{d}")
    return w


def markov_entropy(m: MarkovMeasure) -> float:
    """Entropy rate -sum_i pi_i sum_j p_ij log p_ij in nats (0 log 0 = 0)."""
    P = m.transitions
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(P > 0, P * np.log(np.where(P > 0, P, 1.0)), 0.0)
    return float(-(m.stationary @ plogp.sum(axis=1))) + 0.0


@dataclass(frozen=True, eq=False)
class ResolventVector:
    """a_t = (t - lam)(t I - A^T)^(-1) 1 with its pairing against u."""

    t: float
    a: np.ndarray
    pairing: float


def resolvent_vector(A, perron: PerronData, t: float) -> ResolventVector:
    """Resolvent vector at t > lam; u^T a_t = 1 identically, and a_t aligns
    with the left Perron direction as t decreases to lam."""
    M = np.asarray(A, dtype=float)
    if t <= perron.lam:
        raise ValueError(f"t must exceed the spectral radius {perron.lam}, got {t}")
    d = M.shape[0]
    try:
        x = np.linalg.solve(t * np.eye(d) - M.T, np.ones(d))
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"resolvent solve failed at t = {t}: {exc}") from None
    a = (t - perron.lam) * x
    return ResolventVector(t=t, a=a, pairing=float(perron.u @ a))


@dataclass(frozen=True, eq=False)
class VariationalReport:
    """Entropies of sampled compatible Markov measures against log r(A)."""

    top_entropy: float
    parry_entropy: float
    max_entropy: float
    max_sampled: float
    gap: float
    violations: int
    n_samples: int
    seed: int
    entropies: np.ndarray


def variational_scan(A, n_samples: int, seed: int = 0, slack: float = 1e-9) -> VariationalReport:
    """Sample row-stochastic matrices supported exactly on A and compare their
    stationary entropies with log r(A).

    Every sampled entropy must stay below log r(A) + slack (a violation raises
    InvariantViolation); the Parry measure is appended to the ensemble so the
    reported maximum attains the top value.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    M = as_zero_one(A)
    if not irreducible(M):
        raise ValueError("variational_scan requires an irreducible matrix")
    d = M.shape[0]
    parry = parry_measure(M)
    top = math.log(parry.lam)
    mask = M > 0
    Ps = np.zeros((n_samples, d, d))
    for idx in range(n_samples):
        rng = np.random.default_rng(np.random.SeedSequence([seed, idx]))
        draws = rng.standard_exponential((d, d)) * mask
        Ps[idx] = draws / draws.sum(axis=1, keepdims=True)
    pis = _stationary_batch(Ps)
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(Ps > 0, Ps * np.log(np.where(Ps > 0, Ps, 1.0)), 0.0)
    entropies = -(pis[:, :, None] * plogp).sum(axis=(1, 2))
    violations = int(np.sum(entropies > top + slack))
    if violations:
        raise InvariantViolation(
            f"{violations} sampled measures exceeded log r(A) + {slack}"
        )
    max_sampled = float(entropies.max())
    parry_entropy = parry.entropy
    max_entropy = max(max_sampled, parry_entropy)
    return VariationalReport(
        top_entropy=top,
        parry_entropy=parry_entropy,
        max_entropy=max_entropy,
        max_sampled=max_sampled,
        gap=top - max_entropy,
        violations=violations,
        n_samples=n_samples,
        seed=seed,
        entropies=entropies,
    )


def _stationary_batch(Ps: np.ndarray, tol: float = 1e-13, max_iter: int = 200_000) -> np.ndarray:
    """Stationary rows of a batch of stochastic matrices by lazy power
    iteration (average with the identity handles periodic chains)."""
    n, d, _ = Ps.shape
    pis = np.full((n, d), 1.0 / d)
    for _ in range(max_iter):
        nxt = 0.5 * (pis + np.einsum("nd,nde->ne", pis, Ps))
        err = np.abs(nxt - pis).sum(axis=1).max()
        pis = nxt
        if err <= tol:
            break
    else:
        raise InvariantViolation("stationary iteration did not converge")
    return pis / pis.sum(axis=1, keepdims=True)
