"""Dense complex linear algebra shared by both models.

Eigendecomposition is delegated to LAPACK (via scipy), then every pair is
checked against a residual contract and, if needed, polished by a few steps
of shifted inverse iteration.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg as sla

RESIDUAL_TOL = 1e-10
NORM_TOL = 1e-12
PIVOT_TOL = 1e-14
INVERSE_ITERATION_SHIFT = 1e-8
MAX_INVERSE_ITERATIONS = 3
FLUSH_TOL = 1e-30


class NonConvergence(ArithmeticError):
    """The eigenvalue iteration did not converge."""


class SingularMatrix(ArithmeticError):
    """A pivot fell below tolerance; for eigenvector matrices this signals coalescence."""


def as_matrix(M) -> np.ndarray:
    """Validate ``M`` as a finite square complex matrix and return a read-only copy."""
    A = np.array(M, dtype=np.complex128, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    A.flags.writeable = False
    return A


def normalize_phase(v: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    """Scale to unit 2-norm and rotate so the first non-negligible entry is real positive."""
    v = np.asarray(v, dtype=np.complex128)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    v = v / nrm
    big = np.flatnonzero(np.abs(v) > rel_tol)
    idx = big[0] if big.size else int(np.argmax(np.abs(v)))
    return v * (abs(v[idx]) / v[idx])


def spectral_order(values: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """Indices sorting by ascending real part, ties broken by ascending imaginary part.

    Real parts are quantized at ``1e-12 * scale`` first, so conjugate partners
    whose real parts differ only by roundoff are ordered by imaginary part.
    """
    values = np.asarray(values)
    q = 1e-12 * max(scale, 1e-300)
    re_key = np.round(values.real / q)
    return np.lexsort((values.imag, re_key))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues with unit right eigenvectors (columns) and their residual norms."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    matrix_norm: float

    def __post_init__(self):
        n = len(self.eigenvalues)
        if self.eigenvectors.shape != (n, n) or len(self.residuals) != n:
            raise ValueError("inconsistent decomposition shapes")
        bound = RESIDUAL_TOL * max(self.matrix_norm, np.finfo(float).tiny)
        bad = np.flatnonzero(self.residuals > bound)
        if bad.size:
            raise NonConvergence(
                f"residuals {self.residuals[bad]} exceed {bound:.3e} for eigenpairs {bad.tolist()}"
            )
        norms = np.linalg.norm(self.eigenvectors, axis=0)
        if np.any(np.abs(norms - 1.0) > NORM_TOL):
            raise ValueError("eigenvectors are not unit norm")

    def __len__(self):
        return len(self.eigenvalues)

    def pair(self, k: int) -> tuple[complex, np.ndarray]:
        return complex(self.eigenvalues[k]), self.eigenvectors[:, k]


def _residual(A, lam, v):
    return float(np.linalg.norm(A @ v - lam * v))


def _inverse_iteration(A, lam, v, scale):
    delta = INVERSE_ITERATION_SHIFT * lam
    if abs(delta) < 1e-13 * scale:
        # relative shift is lost in roundoff for eigenvalues near zero; the
        # residual after a step is about |delta|, so keep the floor small
        delta = 1e-13 * scale
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        w = sla.solve(A - (lam + delta) * np.eye(len(A)), v, check_finite=False)
    if not np.all(np.isfinite(w)) or not np.any(w):
        return v
    return normalize_phase(w)


def _polish(A, lam, v0, scale):
    # LAPACK can return a vector almost orthogonal to the true one for badly
    # scaled input; restarting from a uniform vector recovers it.
    best = None
    for start in (v0, np.ones(len(A), dtype=complex)):
        v = normalize_phase(start)
        r = _residual(A, lam, v)
        for _ in range(MAX_INVERSE_ITERATIONS):
            if r <= RESIDUAL_TOL * scale:
                return v, r
            v = _inverse_iteration(A, lam, v, scale)
            r = _residual(A, lam, v)
        if best is None or r < best[1]:
            best = (v, r)
    return best


def eig(M) -> SpectralDecomposition:
    """Full eigendecomposition of a general complex matrix.

    Pairs are sorted by ascending real part, then imaginary part. Eigenvectors
    are normalized with :func:`normalize_phase`.
    """
    A = as_matrix(M)
    scale = float(np.linalg.norm(A, "fro"))
    # Entries far below roundoff only steer LAPACK's balancing into bad
    # scalings; dropping them is a backward perturbation well under eps.
    B = np.where(np.abs(A) < FLUSH_TOL * scale, 0, A)
    try:
        w, V = sla.eig(B, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    order = spectral_order(w, scale)
    w = w[order]
    V = V[:, order]

    vecs = np.empty_like(V)
    res = np.empty(len(w))
    for k, lam in enumerate(w):
        vecs[:, k], res[k] = _polish(A, lam, V[:, k], scale)
    return SpectralDecomposition(w, vecs, res, scale)


class LinearSolution(NamedTuple):
    x: np.ndarray
    condition: float


def solve_linear(M, rhs) -> LinearSolution:
    """Solve ``M x = rhs`` by pivoted LU; returns the solution and 2-norm condition number."""
    A = as_matrix(M)
    b = np.asarray(rhs, dtype=np.complex128)
    if b.shape != (len(A),):
        raise ValueError(f"rhs has shape {b.shape}, expected ({len(A)},)")
    scale = float(np.linalg.norm(A, "fro"))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < PIVOT_TOL * scale:
        raise SingularMatrix(f"pivot {pivots.min():.3e} below {PIVOT_TOL * scale:.3e}")
    x = sla.lu_solve((lu, piv), b, check_finite=False)
    return LinearSolution(x, float(np.linalg.cond(A)))
