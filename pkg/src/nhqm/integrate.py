"""Classical RK4 with step-doubling error control."""
from __future__ import annotations

import numpy as np


def rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_adaptive(f, y0, t0, t1, rtol=1e-11, atol=1e-14, h0=None, max_steps=10_000_000):
    """Integrate ``y' = f(t, y)`` from ``t0`` to ``t1`` and return ``y(t1)``.

    Each step is compared with two half steps; the difference divided by 15 is
    the local error estimate, and the accepted value is Richardson-extrapolated.
    """
    y = np.array(y0, dtype=np.complex128)
    span = t1 - t0
    if span == 0:
        return y
    direction = np.sign(span)
    h = abs(h0) if h0 else abs(span) / 100
    t = t0
    for _ in range(max_steps):
        remaining = (t1 - t) * direction
        if remaining <= 0:
            return y
        h = min(h, remaining)
        hs = h * direction
        full = rk4_step(f, t, y, hs)
        half = rk4_step(f, t, y, hs / 2)
        half = rk4_step(f, t + hs / 2, half, hs / 2)
        diff = half - full
        err = np.linalg.norm(diff) / 15
        tol = atol + rtol * np.linalg.norm(half)
        if err <= tol:
            t = t + hs if h < remaining else t1
            y = half + diff / 15
        factor = 0.9 * (tol / err) ** 0.2 if err > 0 else 4.0
        h *= min(4.0, max(0.1, factor))
    raise RuntimeError(f"rk4_adaptive exceeded {max_steps} steps")


def schrodinger_rhs(H):
    """Right-hand side of ``i dy/dt = H y``."""
    H = np.asarray(H, dtype=np.complex128)
    return lambda t, y: -1j * (H @ y)
