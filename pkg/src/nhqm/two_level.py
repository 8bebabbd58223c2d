"""The 2x2 PT-symmetric model H(mu) = [[1-i, mu], [mu, 1+i]].

Covers closed-form eigenpairs in all three regimes, time evolution, the
diagonal time-dependent metric that makes complex-pair energies observable,
and the exceptional point at mu = +-1 where H has a single eigenvector.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg as sla

from .linalg import SingularMatrix, solve_linear

EXCEPTIONAL_TOL = 1e-12
NEAR_EXCEPTIONAL_TOL = 1e-8
EXPANSION_COND_LIMIT = 1e8

# Fixed basis used at and near the exceptional point; orthogonal, each of norm^2 = 2.
BASIS_PLUS = np.array([1, 1j])
BASIS_MINUS = np.array([1, -1j])


class Regime(Enum):
    REAL = "real"
    COMPLEX = "complex"
    EXCEPTIONAL = "exceptional"


class ExceptionalInput(ValueError):
    """The metric transform is undefined at the exceptional point."""


def hamiltonian(mu: float) -> np.ndarray:
    return np.array([[1 - 1j, mu], [mu, 1 + 1j]])


@dataclass(frozen=True)
class TwoLevelModel:
    mu: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise ValueError("mu must be finite")
        object.__setattr__(self, "mu", float(self.mu))

    @property
    def hamiltonian(self) -> np.ndarray:
        return hamiltonian(self.mu)

    @property
    def gap(self) -> float:
        """mu^2 - 1; positive for real spectrum, negative for a complex pair."""
        return self.mu * self.mu - 1.0

    @property
    def regime(self) -> Regime:
        if abs(self.gap) <= EXCEPTIONAL_TOL:
            return Regime.EXCEPTIONAL
        return Regime.REAL if self.gap > 0 else Regime.COMPLEX

    @property
    def sign(self) -> int:
        return 1 if self.mu >= 0 else -1

    @property
    def kappa(self) -> float:
        """Decay rate |Im lambda_1| of the complex pair; zero otherwise."""
        return math.sqrt(-self.gap) if self.regime is Regime.COMPLEX else 0.0


@dataclass(frozen=True)
class EigenSystem2:
    lambda1: complex
    lambda2: complex
    u1: np.ndarray
    u2: np.ndarray


@dataclass(frozen=True)
class ExceptionalReport:
    """Single eigenpair at mu = sign, plus the auxiliary H^dagger eigenvector ``u2``."""

    eigenvalue: complex
    u1: np.ndarray
    u2: np.ndarray
    sign: int


def eigenvalues(mu: float) -> tuple[complex, complex]:
    root = cmath.sqrt(mu * mu - 1)  # principal branch, Im >= 0
    return 1 + root, 1 - root


def _eigvec(mu, lam):
    a = np.array([mu, lam - 1 + 1j])
    b = np.array([lam - 1 - 1j, mu])
    v = a if np.linalg.norm(a) >= np.linalg.norm(b) else b
    return v / np.linalg.norm(v)


def exceptional_basis(sign: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """(eigenvector, auxiliary vector) of H(mu = sign), unnormalized with u^dagger u = 2."""
    if sign == 1:
        return BASIS_PLUS, BASIS_MINUS
    if sign == -1:
        return BASIS_MINUS, BASIS_PLUS
    raise ValueError("sign must be +1 or -1")


def eigenpairs(model: TwoLevelModel) -> EigenSystem2 | ExceptionalReport:
    if model.regime is Regime.EXCEPTIONAL:
        u1, u2 = exceptional_basis(model.sign)
        return ExceptionalReport(1.0 + 0j, u1 / math.sqrt(2), u2 / math.sqrt(2), model.sign)
    lam1, lam2 = eigenvalues(model.mu)
    return EigenSystem2(lam1, lam2, _eigvec(model.mu, lam1), _eigvec(model.mu, lam2))


def fixed_basis_system(mu: float) -> np.ndarray:
    """Coefficient matrix M with i d/dt (a, b) = M (a, b) for psi = a(1, i) + b(1, -i).

    Smooth in mu; M(1) = [[1, -2i], [0, 1]].
    """
    return np.array([[1, -1j * (mu + 1)], [1j * (mu - 1), 1]])


def _fixed_basis_evolve(mu, psi0, t):
    u1, u2 = BASIS_PLUS, BASIS_MINUS
    c0 = np.array([np.vdot(u1, psi0), np.vdot(u2, psi0)]) / 2
    c = sla.expm(-1j * t * fixed_basis_system(mu)) @ c0
    return c[0] * u1 + c[1] * u2


def defective_evolve(psi0, t: float, sign: int = 1) -> np.ndarray:
    """Exact evolution at the exceptional point mu = sign.

    With psi = a u1 + b u2: b = K1 exp(-it), a = (K2 - 2 K1 t) exp(-it), so any
    component along the auxiliary vector produces linear secular growth.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if t == 0:
        return psi0.copy()
    u1, u2 = exceptional_basis(sign)
    K2 = np.vdot(u1, psi0) / 2
    K1 = np.vdot(u2, psi0) / 2
    phase = cmath.exp(-1j * t)
    a = (K2 - 2 * K1 * t) * phase
    b = K1 * phase
    return a * u1 + b * u2


def expansion_coefficients(model: TwoLevelModel, psi0) -> tuple[complex, complex]:
    """(A, B) with psi0 = A u1 + B u2 in the normalized eigenbasis."""
    es = eigenpairs(model)
    if isinstance(es, ExceptionalReport):
        raise SingularMatrix("eigenvectors coalesce at the exceptional point")
    U = np.column_stack([es.u1, es.u2])
    sol = solve_linear(U, psi0)
    if sol.condition > EXPANSION_COND_LIMIT:
        raise SingularMatrix(f"eigenvector matrix condition {sol.condition:.3e}")
    return complex(sol.x[0]), complex(sol.x[1])


def evolve(model: TwoLevelModel, psi0, t: float) -> np.ndarray:
    """psi(t) = A exp(-i lambda1 t) u1 + B exp(-i lambda2 t) u2.

    At the exceptional point this defers to :func:`defective_evolve`; within
    ``NEAR_EXCEPTIONAL_TOL`` of it, the fixed (1, +-i) basis is used instead of
    the ill-conditioned eigenbasis.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if t == 0:
        return psi0.copy()
    if model.regime is Regime.EXCEPTIONAL:
        return defective_evolve(psi0, t, model.sign)
    if abs(model.gap) <= NEAR_EXCEPTIONAL_TOL:
        return _fixed_basis_evolve(model.mu, psi0, t)
    es = eigenpairs(model)
    A, B = expansion_coefficients(model, psi0)
    return A * cmath.exp(-1j * es.lambda1 * t) * es.u1 + B * cmath.exp(-1j * es.lambda2 * t) * es.u2


def _check_metric_args(model, tau, t):
    if model.regime is Regime.EXCEPTIONAL:
        raise ExceptionalInput("metric transform needs distinct eigenvalues")
    if not tau > 0:
        raise ValueError("tau must be positive")
    if t < 0:
        raise ValueError("t must be non-negative")


def metric_factors(model: TwoLevelModel, tau: float, t: float) -> tuple[float, float]:
    """Diagonal entries (r, s) of eta(t); r = exp(kappa (t - tau)), s = 1 / r."""
    _check_metric_args(model, tau, t)
    if model.regime is Regime.REAL:
        return 1.0, 1.0
    r = math.exp(model.kappa * (t - tau))
    return r, 1.0 / r


def metric_rates(model: TwoLevelModel) -> tuple[float, float]:
    """Logarithmic derivatives (r'/r, s'/s), constant in t."""
    k = model.kappa
    return k, -k


def transformed_hamiltonian(model: TwoLevelModel, tau: float, t: float) -> np.ndarray:
    """eta^-1 h eta - i eta^-1 deta/dt with h = diag(lambda1, lambda2)."""
    r, s = metric_factors(model, tau, t)
    dr, ds = (rate * f for rate, f in zip(metric_rates(model), (r, s)))
    lam1, lam2 = eigenvalues(model.mu)
    eta = np.diag([r, s]).astype(complex)
    eta_inv = np.diag([1 / r, 1 / s]).astype(complex)
    h = np.diag([lam1, lam2])
    return eta_inv @ h @ eta - 1j * eta_inv @ np.diag([dr, ds])


def metric_inner_product(phi1, phi2, model: TwoLevelModel, tau: float, t: float) -> complex:
    """<phi1 | eta^dagger eta phi2> for the diagonal metric at time t."""
    r, s = metric_factors(model, tau, t)
    phi1 = np.asarray(phi1, dtype=np.complex128)
    phi2 = np.asarray(phi2, dtype=np.complex128)
    return complex(r * r * np.conj(phi1[0]) * phi2[0] + s * s * np.conj(phi1[1]) * phi2[1])
