"""Shooting oracle for -psi'' + i mu x psi = E psi with psi(+-T/2) = 0.

Shares no code with the Galerkin solver: two solutions are launched from the
walls with fixed-step RK4 and matched at x = 0 through their Wronskian.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

RENORM_THRESHOLD = 2.0**500
MAGNITUDE_LIMIT = 1e300


class OverflowGuard(OverflowError):
    pass


class NoConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class ShootingProblem:
    T: float
    mu: float
    E: complex = 0j
    step: float | None = None

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("T must be positive")
        if self.step is None:
            object.__setattr__(self, "step", self.T / 4000)
        if not (0 < self.step <= self.T / 100):
            raise ValueError("step must lie in (0, T/100]")
        object.__setattr__(self, "E", complex(self.E))

    def with_energy(self, E: complex) -> "ShootingProblem":
        return ShootingProblem(self.T, self.mu, E, self.step)


def _shoot(T, mu, E, step, from_right):
    """Integrate (psi, psi') from a wall to x = 0.

    Returns psi, dpsi and a binary exponent e such that the true values are
    ldexp-scaled by 2**e; rescaling by powers of two is exact, so the
    Wronskian stays an analytic function of E.
    """
    half = T / 2
    n = max(1, math.ceil(half / step))
    h = (-half if from_right else half) / n
    x = half if from_right else -half
    y, dy = 0j, 1 + 0j
    imu = 1j * mu
    exponent = 0
    for _ in range(n):
        # y'' = (i mu x - E) y
        k1y, k1d = dy, (imu * x - E) * y
        xm = x + h / 2
        y2, d2 = y + h / 2 * k1y, dy + h / 2 * k1d
        k2y, k2d = d2, (imu * xm - E) * y2
        y3, d3 = y + h / 2 * k2y, dy + h / 2 * k2d
        k3y, k3d = d3, (imu * xm - E) * y3
        x = x + h
        y4, d4 = y + h * k3y, dy + h * k3d
        k4y, k4d = d4, (imu * x - E) * y4
        y = y + h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        dy = dy + h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d)
        mag = max(abs(y), abs(dy))
        if not math.isfinite(mag):
            raise OverflowGuard("solution overflowed between renormalizations")
        if mag > RENORM_THRESHOLD:
            _, e = math.frexp(mag)
            y, dy = math.ldexp(1, -e) * y, math.ldexp(1, -e) * dy
            exponent += e
    return y, dy, exponent


def _scaled(z: complex, e: int) -> complex:
    if e == 0:
        return z
    if abs(z) == 0:
        return 0j
    log2 = math.log2(abs(z)) + e
    if log2 > math.log2(MAGNITUDE_LIMIT):
        raise OverflowGuard(f"mismatch magnitude 2**{log2:.0f} exceeds {MAGNITUDE_LIMIT:g}")
    return complex(math.ldexp(z.real, e), math.ldexp(z.imag, e))


def match(problem: ShootingProblem) -> tuple[complex, float]:
    """Wronskian at x = 0 and its natural scale |(psi_L, psi_L')| |(psi_R, psi_R')|."""
    yl, dl, el = _shoot(problem.T, problem.mu, problem.E, problem.step, from_right=False)
    yr, dr, er = _shoot(problem.T, problem.mu, problem.E, problem.step, from_right=True)
    w = yl * dr - dl * yr
    scale = math.hypot(abs(yl), abs(dl)) * math.hypot(abs(yr), abs(dr))
    e = el + er
    return _scaled(w, e), float(abs(_scaled(complex(scale), e)))


def mismatch(problem: ShootingProblem) -> complex:
    """psi_L psi_R' - psi_L' psi_R at x = 0; zero iff E is an eigenvalue."""
    return match(problem)[0]


def refine(
    problem: ShootingProblem,
    E0: complex,
    max_iter: int = 50,
    rtol: float = 1e-10,
    step_tol: float = 1e-13,
) -> complex:
    """Complex secant iteration on the mismatch, seeded at ``E0``.

    Iterates until the secant update falls below ``step_tol * (1 + |E|)`` and
    then requires ``|mismatch| < rtol * scale`` at the returned root.
    """
    E_prev = complex(E0)
    f_prev, _ = match(problem.with_energy(E_prev))
    E = E_prev + 1e-7 * (1 + abs(E_prev))
    for _ in range(max_iter):
        f, scale = match(problem.with_energy(E))
        if f == 0:
            return E
        if f == f_prev:
            break
        E_next = E - f * (E - E_prev) / (f - f_prev)
        E_prev, f_prev = E, f
        E = E_next
        if abs(E - E_prev) <= step_tol * (1 + abs(E)):
            f, scale = match(problem.with_energy(E))
            if abs(f) < rtol * scale:
                return E
            break
    raise NoConvergence(f"secant iteration from {E0} did not converge (last E = {E})")
