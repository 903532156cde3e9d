"""Trace-space model for Cuntz-Krieger data.

A trace on the homogeneous subalgebra is a coherent sequence of nonnegative
vectors (t_0, t_1, ...) with A t_{r+1} = t_r and sum(t_0) = 1.  The shift-type
operators act as s'((t_r)) = (A t_0, t_0, t_1, ...) and t'((t_r)) = (t_1, ...);
their normalized versions are power iterations whose fixed points are the
Perron eigen-sequences, and the growth rate of eps_n = 1^T A^n t recovers the
KMS inverse temperature log r(A).

The dual growth sequence (the one along t' instead of s') has no general
closed form in this finite model and is not exposed; on eigen-sequences it is
exactly 1/eps_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectral
from .spectral import (
    ReducibleMatrixError,
    aperiodic,
    as_nonnegative,
    as_zero_one,
    column_sum_powers,
    component_perron_data,
    has_zero_column,
    has_zero_row,
    irreducible,
    perron_vectors,
    strongly_connected_components,
)

COHERENCE_TOL = 1e-9


def as_trace_vector(t, tol: float = 1e-12) -> np.ndarray:
    """Validate t as a nonnegative vector summing to 1 within tol."""
    v = np.asarray(t, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("trace vector must be a nonempty 1-d array")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise ValueError("trace vector entries must be finite and nonnegative")
    if abs(float(v.sum()) - 1.0) > tol:
        raise ValueError(f"trace vector must sum to 1 within {tol}, got {v.sum()}")
    return v


@dataclass(frozen=True, eq=False)
class CoherentSequence:
    """Truncated coherent sequence (t_0, ..., t_R) over a fixed matrix.

    residuals[r] = l1 norm of A t_{r+1} - t_r; the truncation is the only
    finite model of the inverse limit, so residuals are kept visible instead
    of being assumed away.
    """

    matrix: np.ndarray
    levels: tuple[np.ndarray, ...]
    residuals: tuple[float, ...]
    normalized: bool
    tol: float

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def coherent(self) -> bool:
        return all(r <= self.tol for r in self.residuals)


def coherent_sequence(A, levels, tol: float = COHERENCE_TOL, require: bool = True) -> CoherentSequence:
    """Assemble and check a coherent sequence; with require=True a residual
    above tol is an error, otherwise it is only recorded."""
    M = as_nonnegative(A)
    levs = tuple(np.asarray(t, dtype=float) for t in levels)
    if len(levs) < 1:
        raise ValueError("need at least one level")
    for t in levs:
        if t.shape != (M.shape[0],):
            raise ValueError("level length must match the matrix dimension")
        if np.any(t < 0):
            raise ValueError("levels must be nonnegative")
    residuals = tuple(
        float(np.abs(M @ levs[r + 1] - levs[r]).sum()) for r in range(len(levs) - 1)
    )
    if require and any(r > tol for r in residuals):
        raise ValueError(f"sequence is not coherent within {tol}: residuals {residuals}")
    normalized = abs(float(levs[0].sum()) - 1.0) <= 1e-12
    return CoherentSequence(matrix=M, levels=levs, residuals=residuals, normalized=normalized, tol=tol)


def s_prime(seq: CoherentSequence) -> CoherentSequence:
    """(t_0, ..., t_R) -> (A t_0, t_0, ..., t_{R-1}); same truncation depth."""
    top = seq.matrix @ seq.levels[0]
    levels = (top,) + seq.levels[:-1]
    residuals = ((0.0,) + seq.residuals[:-1]) if seq.residuals else ()
    normalized = abs(float(top.sum()) - 1.0) <= 1e-12
    return CoherentSequence(
        matrix=seq.matrix, levels=levels, residuals=residuals, normalized=normalized, tol=seq.tol
    )


def t_prime(seq: CoherentSequence) -> CoherentSequence:
    """(t_0, ..., t_R) -> (t_1, ..., t_R); depth drops by one."""
    if seq.depth == 0:
        raise ValueError("cannot shift a depth-0 sequence")
    levels = seq.levels[1:]
    normalized = abs(float(levels[0].sum()) - 1.0) <= 1e-12
    return CoherentSequence(
        matrix=seq.matrix,
        levels=levels,
        residuals=seq.residuals[1:],
        normalized=normalized,
        tol=seq.tol,
    )


def k_iterate(A, t, n: int) -> list[np.ndarray]:
    """n steps of t -> A t / (1^T A t); a power iteration toward the right
    Perron direction for irreducible aperiodic A.  Returns the n iterates."""
    M = as_nonnegative(A)
    if has_zero_column(M):
        raise ValueError("k iteration requires a matrix with no zero column")
    v = as_trace_vector(t)
    out = []
    for _ in range(n):
        w = M @ v
        s = float(w.sum())
        if s <= 0.0:
            raise ValueError("iterate collapsed to zero")
        v = w / s
        out.append(v)
    return out


def h_iterate(seq: CoherentSequence, n: int) -> CoherentSequence:
    """n steps of (t_r) -> (t_{r+1}) / sum(t_1); fixed points (up to the
    truncation) are exactly the eigen-sequences."""
    if seq.depth < n:
        raise ValueError(f"sequence depth {seq.depth} is insufficient for {n} steps")
    levels = seq.levels
    for _ in range(n):
        s = float(levels[1].sum())
        if s <= 0.0:
            raise ValueError("renormalizer sum(t_1) vanished")
        levels = tuple(t / s for t in levels[1:])
    return coherent_sequence(seq.matrix, levels, tol=seq.tol, require=False)


def kms_eigen_sequence(A, R: int, tol: float = 1e-13) -> CoherentSequence:
    """Eigen-sequence t_r = lam^(-r) u with u the Perron right eigenvector
    normalized to sum 1; the coherence residuals inherit the Perron residual
    and stay below 1e-12."""
    M = as_nonnegative(A)
    p = perron_vectors(M, tol=tol)
    levels = [p.u * p.lam ** (-r) for r in range(R + 1)]
    return coherent_sequence(M, levels, tol=1e-12, require=True)


def coherent_truncation(A, t0, R: int, tol: float = COHERENCE_TOL) -> CoherentSequence:
    """Coherent truncation grown forward from a starting trace: each next level
    solves A x = t_r by least squares projected to x >= 0, residuals recorded.

    Positivity can be incompatible with deep coherent extensions of a generic
    t_0 (the extendable cone narrows to the Perron direction), in which case
    the projection leaves visible residuals rather than faking coherence.
    """
    M = as_nonnegative(A)
    levels = [as_trace_vector(t0)]
    for _ in range(R):
        x, *_ = np.linalg.lstsq(M, levels[-1], rcond=None)
        levels.append(np.clip(x, 0.0, None))
    return coherent_sequence(M, levels, tol=tol, require=False)


def coherent_from_boundary(A, boundary, R: int, tol: float = COHERENCE_TOL) -> CoherentSequence:
    """Exactly coherent truncation built downward from a deep boundary level:
    t_R proportional to the boundary vector, t_r = A t_{r+1}, everything scaled
    so sum(t_0) = 1."""
    M = as_nonnegative(A)
    b = np.asarray(boundary, dtype=float)
    if b.shape != (M.shape[0],) or np.any(b < 0) or float(b.sum()) <= 0.0:
        raise ValueError("boundary must be a nonnegative vector with positive sum")
    probe = b
    for _ in range(R):
        probe = M @ probe
    scale = float(probe.sum())
    if scale <= 0.0:
        raise ValueError("boundary vector dies under the matrix; choose another boundary")
    # rebuild from the rescaled boundary so every level is bitwise A @ next
    levels = [b / scale]
    for _ in range(R):
        levels.append(M @ levels[-1])
    levels.reverse()
    return coherent_sequence(M, levels, tol=tol, require=True)


@dataclass(frozen=True, eq=False)
class EpsilonSequence:
    """Growth data of eps_n = 1^T A^n t, kept in log space for stability."""

    log_values: tuple[float, ...]
    rates: tuple[float, ...]

    @property
    def eps(self) -> tuple[float, ...]:
        return tuple(math.exp(v) for v in self.log_values)


def epsilon_sequence(A, t, n_max: int) -> EpsilonSequence:
    """log eps_n and (1/n) log eps_n for n = 1..n_max via a normalized recursion."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    M = as_nonnegative(A)
    v = as_trace_vector(t)
    log_values = []
    acc = 0.0
    for _ in range(n_max):
        v = M @ v
        s = float(v.sum())
        if s <= 0.0:
            raise ValueError("eps_n vanished; the matrix has a dead column for this trace")
        acc += math.log(s)
        v = v / s
        log_values.append(acc)
    rates = tuple(lv / n for n, lv in enumerate(log_values, start=1))
    return EpsilonSequence(log_values=tuple(log_values), rates=rates)


def temperature_from_trace(A, t, n_max: int = 300) -> float:
    """Trailing estimate (1/n) log eps_n at n = n_max; converges to log r(A)
    for strictly positive traces on irreducible matrices."""
    v = as_trace_vector(t)
    if float(v.min()) <= 0.0:
        raise ValueError("temperature_from_trace requires a strictly positive trace")
    return epsilon_sequence(A, v, n_max).rates[-1]


@dataclass(frozen=True, eq=False)
class KmsReport:
    """KMS temperature data for a Cuntz-Krieger matrix.

    Irreducible input fills lam/beta and the eigen-sequence; reducible input in
    the explicit per-component mode fills only the heuristic bracket of
    candidate temperatures (log of the min/max component Perron radii).
    """

    lam: float | None
    beta: float | None
    eigen_sequence: CoherentSequence | None
    uniqueness_flag: bool
    bracket: tuple[float, float] | None
    heuristic: bool


def kms_temperature(
    A, depth: int = 10, tol: float = 1e-12, reducible_mode: bool = False
) -> KmsReport:
    """KMS inverse temperature(s) of the gauge action for a 0/1 matrix.

    Irreducible A has a single temperature log r(A) with the Perron
    eigen-sequence; the uniqueness flag is set when A is aperiodic.  Reducible
    A is rejected unless reducible_mode is set, in which case the bracket of
    per-component candidates is reported.
    """
    M = as_zero_one(A)
    if has_zero_row(M) or has_zero_column(M):
        raise ValueError("matrix must have no zero row and no zero column")
    if irreducible(M):
        # same deterministic computation as sft_entropy_exact, so the reported
        # temperature equals log(exact entropy) bitwise; tol governs the
        # eigen-sequence residuals
        lam = spectral.spectral_radius(M)
        return KmsReport(
            lam=lam,
            beta=math.log(lam),
            eigen_sequence=kms_eigen_sequence(M, depth, tol=min(tol, 1e-13)),
            uniqueness_flag=aperiodic(M),
            bracket=None,
            heuristic=False,
        )
    if not reducible_mode:
        raise ReducibleMatrixError(
            "matrix is reducible; pass reducible_mode=True for the per-component bracket"
        )
    radii = [c.radius for c in component_perron_data(M, tol=tol) if c.radius > 0]
    return KmsReport(
        lam=None,
        beta=None,
        eigen_sequence=None,
        uniqueness_flag=False,
        bracket=(math.log(min(radii)), math.log(max(radii))),
        heuristic=True,
    )


@dataclass(frozen=True, eq=False)
class BimoduleKms:
    lam: float
    beta: float
    v0: np.ndarray
    sequence: tuple[np.ndarray, ...]


def bimodule_kms(Lambda, depth: int = 10, tol: float = 1e-12) -> BimoduleKms:
    """KMS temperature log r(Lambda) for a coherent lambda-matrix of a
    Cuntz-Krieger bimodule; v0 is the Perron right eigenvector with sum 1 and
    the sequence iterates v^r = lam^(-r) v0."""
    M = as_nonnegative(Lambda)
    if not irreducible(M):
        raise ReducibleMatrixError("the lambda-matrix must be irreducible")
    p = perron_vectors(M, tol=tol)
    seq = tuple(p.u * p.lam ** (-r) for r in range(depth + 1))
    return BimoduleKms(lam=p.lam, beta=math.log(p.lam), v0=p.u, sequence=seq)


@dataclass(frozen=True, eq=False)
class TemperatureSign:
    """Sign classification of admissible KMS temperatures.

    lower/upper are the limits of (min/max column sum of A^n)^(1/n), obtained
    from per-component spectral radii propagated along reachability; the
    bracket sequences at small n are attached as finite evidence.
    """

    classification: str
    lower: float
    upper: float
    column_growth: tuple[float, ...]
    evidence_lower: tuple[float, ...]
    evidence_upper: tuple[float, ...]


def temperature_sign(A, n_evidence: int = 12, tol: float = 1e-9) -> TemperatureSign:
    """Classify the temperatures a matrix admits: positive, negative, tracial
    or mixed.

    The limit of the bracket for column k is the largest component radius
    among components that reach k; classification compares the extreme limits
    against 1.
    """
    M = as_nonnegative(A)
    if has_zero_row(M) or has_zero_column(M):
        raise ValueError("matrix must have no zero row and no zero column")
    d = M.shape[0]
    comps = strongly_connected_components(M)
    radius_of_node = np.zeros(d)
    for comp in comps:
        idx = np.array(comp)
        sub = M[np.ix_(idx, idx)]
        r = 0.0 if (len(comp) == 1 and sub[0, 0] == 0.0) else spectral.spectral_radius(sub)
        for i in comp:
            radius_of_node[i] = r
    growth = radius_of_node.copy()
    edges = [(i, j) for i in range(d) for j in range(d) if M[i, j] > 0]
    for _ in range(len(comps)):
        for i, j in edges:
            if growth[i] > growth[j]:
                growth[j] = growth[i]
    lower, upper = float(growth.min()), float(growth.max())
    if lower > 1.0 + tol:
        cls = "positive"
    elif upper < 1.0 - tol:
        cls = "negative"
    elif abs(lower - 1.0) <= tol and abs(upper - 1.0) <= tol:
        cls = "tracial"
    else:
        cls = "mixed"
    ev_lo, ev_hi = spectral.spectral_radius_bracket_sequences(M, n_evidence)
    return TemperatureSign(
        classification=cls,
        lower=lower,
        upper=upper,
        column_growth=tuple(float(g) for g in growth),
        evidence_lower=tuple(ev_lo),
        evidence_upper=tuple(ev_hi),
    )


def normalization_profile(seq: CoherentSequence) -> list[float]:
    """sum_k t_r(k) d_{r,k} for r = 0..R; constant (= sum t_0) on a coherent
    normalized sequence."""
    M = seq.matrix
    as_zero_one(M)
    out = [float(seq.levels[0].sum())]
    for r in range(1, len(seq.levels)):
        d_r = np.array(column_sum_powers(M, r), dtype=float)
        out.append(float(d_r @ seq.levels[r]))
    return out
