"""Galerkin treatment of H = -d^2/dx^2 + i mu x on (-T/2, T/2) with Dirichlet walls.

Basis functions use a single combined index k = 1, 2, ...:

    k odd  -> cos(k pi x / T)     (even parity)
    k even -> sin(k pi x / T)     (odd parity)

so every function vanishes at x = +-T/2 and -D^2 is diagonal with entries
(k pi / T)^2. Under the inner product (1/T) int f* g dx each basis function
has norm^2 = 1/2, which is why raw position integrals enter the matrix with
a factor 2.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .integrate import rk4_adaptive, schrodinger_rhs
from .linalg import SingularMatrix, eig, solve_linear

OVERLAP = 0.5
EXPANSION_COND_LIMIT = 1e8
TOL_IM_REL = 1e-9
PAIR_WINDOW_REL = 1e-6


class Coupling(str, Enum):
    FULL = "full"
    NEAREST = "nearest"


# Chosen by tests/test_acceptance.py::test_criterion_1_table1, which scores
# both coupling modes with and without the factor-2 overlap: full coupling
# with the factor is closest to table 1 (max error 6e-7), every other
# convention misses by 0.4 or more.
DEFAULT_COUPLING = Coupling.FULL


class DomainError(ValueError):
    """Point outside the box."""


class ParityError(ValueError):
    """Same-parity pair: the position integral vanishes by symmetry."""


class ClassificationWarning(UserWarning):
    pass


class PropagationFallback(UserWarning):
    """Eigenbasis expansion was ill-conditioned; RK4 integration was used instead."""


def frequency(k: int, T: float) -> float:
    return k * math.pi / T


def basis_eval(k: int, T: float, x):
    if k < 1:
        raise ValueError("basis index starts at 1")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > T / 2 * (1 + 1e-12)):
        raise DomainError(f"x outside [-{T / 2}, {T / 2}]")
    arg = frequency(k, T) * x
    out = np.cos(arg) if k % 2 else np.sin(arg)
    # cos((2n-1) pi / 2) is 6e-17 in floating point, not 0.
    out = np.where(np.isclose(np.abs(x), T / 2, rtol=1e-14, atol=0), 0.0, out)
    return out if out.ndim else float(out)


def coupling_integral(j: int, k: int, T: float) -> float:
    """(1/T) int x w_j(x) w_k(x) dx for a cos/sin pair, in closed form.

    With m+- = k +- j (both odd), the integral equals
    (T / pi^2) [sin(m+ pi/2) / m+^2 + sin(m- pi/2) / m-^2],
    where ``k`` is the sine (even) index. Arguments may be given in either order.
    """
    if j % 2 == k % 2:
        raise ParityError(f"indices {j} and {k} have equal parity")
    if j % 2 == 0:
        j, k = k, j
    total = 0.0
    for m in (k + j, k - j):
        sigma = 1.0 if (m % 4) == 1 else -1.0  # sin(m pi / 2) for odd m, incl. negative m
        total += sigma / (m * m)
    return T / math.pi**2 * total


@dataclass(frozen=True)
class ConfinedModel:
    T: float
    mu: float
    N: int
    coupling: Coupling
    matrix: np.ndarray = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return 2 * self.N

    @property
    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    @property
    def coupling_matrix(self) -> np.ndarray:
        """Real symmetric C with matrix = D + i mu C (zero when mu = 0)."""
        C = np.zeros((self.dim, self.dim))
        if self.mu != 0:
            C = (self.matrix - np.diag(self.matrix.diagonal())).imag / self.mu
        return C


def assemble(T: float, mu: float, N: int, coupling: Coupling | str = DEFAULT_COUPLING) -> ConfinedModel:
    if not T > 0:
        raise ValueError("T must be positive")
    if N < 1:
        raise ValueError("N must be >= 1")
    coupling = Coupling(coupling)
    dim = 2 * N
    k = np.arange(1, dim + 1)
    h = np.diag((k * math.pi / T) ** 2).astype(np.complex128)
    for j in range(1, dim + 1, 2):
        for kk in range(2, dim + 1, 2):
            if coupling is Coupling.NEAREST and abs(kk - j) != 1:
                continue
            v = 1j * mu * coupling_integral(j, kk, T) / OVERLAP
            h[j - 1, kk - 1] = v
            h[kk - 1, j - 1] = v
    h.flags.writeable = False
    return ConfinedModel(float(T), float(mu), int(N), coupling, h)


class Label(str, Enum):
    REAL = "real"
    PAIR = "pair"
    UNPAIRED = "unpaired"


@dataclass(frozen=True)
class ClassifiedState:
    value: complex
    label: Label
    partner: int | None
    diagonal_deviation: complex


@dataclass(frozen=True)
class ClassifiedSpectrum:
    states: tuple[ClassifiedState, ...]
    tol_im: float

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]

    @property
    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.states])

    def pair_count(self, n: int | None = None) -> int:
        """Number of conjugate pairs with both members among the lowest ``n`` states."""
        n = len(self.states) if n is None else n
        return sum(
            1
            for i, s in enumerate(self.states[:n])
            if s.label is Label.PAIR and s.partner is not None and i < s.partner < n
        )


def classify(values, diagonal, tol_im: float, window: float) -> ClassifiedSpectrum:
    """Label sorted eigenvalues as real or conjugate-pair members.

    Pairs are matched greedily: each complex value takes the nearest unmatched
    value to its conjugate, provided it lies within ``window``.
    """
    values = np.asarray(values, dtype=np.complex128)
    diagonal = np.sort(np.asarray(diagonal, dtype=float))
    partner: dict[int, int] = {}
    complex_idx = [i for i, v in enumerate(values) if abs(v.imag) > tol_im]
    for i in complex_idx:
        if i in partner:
            continue
        best, best_d = None, window
        for j in complex_idx:
            if j == i or j in partner:
                continue
            d = abs(values[j] - values[i].conjugate())
            if d <= best_d:
                best, best_d = j, d
        if best is not None:
            partner[i], partner[best] = best, i
    unpaired = [i for i in complex_idx if i not in partner]
    if unpaired:
        warnings.warn(f"complex eigenvalues without conjugate partner: {unpaired}", ClassificationWarning)
    states = []
    for i, v in enumerate(values):
        if abs(v.imag) <= tol_im:
            label, p = Label.REAL, None
        elif i in partner:
            label, p = Label.PAIR, partner[i]
        else:
            label, p = Label.UNPAIRED, None
        states.append(ClassifiedState(complex(v), label, p, complex(v - diagonal[i])))
    return ClassifiedSpectrum(tuple(states), tol_im)


def spectrum(model: ConfinedModel, tol_im: float | None = None) -> ClassifiedSpectrum:
    scale = float(np.linalg.norm(model.matrix, "fro"))
    if tol_im is None:
        tol_im = TOL_IM_REL * scale
    dec = eig(model.matrix)
    return classify(dec.eigenvalues, model.diagonal, tol_im, PAIR_WINDOW_REL * scale)


@dataclass(frozen=True)
class SweepRecord:
    T: float
    mu: float
    N: int
    spectrum: ClassifiedSpectrum | None
    error: str | None = None

    def pair_count(self, n: int = 10) -> int | None:
        return None if self.spectrum is None else self.spectrum.pair_count(n)


@dataclass(frozen=True)
class SweepResult:
    records: tuple[SweepRecord, ...]
    coupling: Coupling

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def _check_grid(name, grid):
    grid = list(grid)
    if not grid:
        raise ValueError(f"{name} grid is empty")
    diffs = np.diff(grid)
    if len(grid) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ValueError(f"{name} grid must be strictly monotone")
    return grid


def sweep(
    T_grid: Sequence[float],
    mu_grid: Sequence[float],
    N_grid: Sequence[int],
    coupling: Coupling | str = DEFAULT_COUPLING,
    tol_im: float | None = None,
) -> SweepResult:
    """Spectra on the full (T, mu, N) product grid; per-point failures are recorded, not raised."""
    T_grid = _check_grid("T", T_grid)
    mu_grid = _check_grid("mu", mu_grid)
    N_grid = _check_grid("N", N_grid)
    coupling = Coupling(coupling)
    records = []
    for T in T_grid:
        for mu in mu_grid:
            for N in N_grid:
                try:
                    spec = spectrum(assemble(T, mu, N, coupling), tol_im)
                    records.append(SweepRecord(T, mu, N, spec))
                except (ArithmeticError, ValueError) as exc:
                    records.append(SweepRecord(T, mu, N, None, f"{type(exc).__name__}: {exc}"))
    return SweepResult(tuple(records), coupling)


def evolve_confined(model: ConfinedModel, coeffs0, t: float) -> np.ndarray:
    """Basis coefficients at time t for i dc/dt = h c.

    Uses the eigenvector expansion; if the eigenvector matrix is singular or
    its condition number exceeds ``EXPANSION_COND_LIMIT`` the system is
    integrated with adaptive RK4 instead and a :class:`PropagationFallback`
    warning is issued.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    c0 = np.asarray(coeffs0, dtype=np.complex128)
    if c0.shape != (model.dim,):
        raise ValueError(f"expected {model.dim} coefficients")
    if t == 0:
        return c0.copy()
    dec = eig(model.matrix)
    try:
        sol = solve_linear(dec.eigenvectors, c0)
        ok = sol.condition <= EXPANSION_COND_LIMIT
    except SingularMatrix:
        ok = False
    if ok:
        return dec.eigenvectors @ (np.exp(-1j * dec.eigenvalues * t) * sol.x)
    warnings.warn("eigenvector matrix ill-conditioned; integrating with RK4", PropagationFallback)
    return rk4_adaptive(schrodinger_rhs(model.matrix), c0, 0.0, t)


def wavefunction_eval(model: ConfinedModel, coeffs, x):
    """Psi(x) = sum_k c_k w_k(x)."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.shape != (model.dim,):
        raise ValueError(f"expected {model.dim} coefficients")
    x = np.asarray(x, dtype=float)
    out = sum(c[k - 1] * basis_eval(k, model.T, x) for k in range(1, model.dim + 1))
    return np.asarray(out, dtype=np.complex128) if x.ndim else complex(out)


def row_offdiagonal_sums(model: ConfinedModel) -> np.ndarray:
    """Sum of off-diagonal moduli per row, for comparison with the diagonal."""
    A = np.abs(model.matrix)
    return A.sum(axis=1) - np.diag(A)
