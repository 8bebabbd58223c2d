"""Large-|x| behaviour of eigenfunctions of -D^2 + i x^m on the whole line (m odd).

For x > 0 write psi = exp(-b x^p) psi_1. Choosing 2p - 2 = m and b^2 p^2 = i
removes the potential, leaving

    -psi_1'' + b (m^2 + 2m)/4 x^((m-2)/2) psi_1 + (m+2) b x^(m/2) psi_1' - E psi_1 = 0.

A power tail psi_1 ~ x^q needs q = -m/4. For x < 0 the same analysis holds
with i -> -i, i.e. b -> conj(b).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np


class Side(Enum):
    POSITIVE = "+"
    NEGATIVE = "-"


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class TailExpansion:
    m: int
    p: float
    b: complex
    q: float

    def coefficient_for(self, side: Side) -> complex:
        return self.b if side is Side.POSITIVE else self.b.conjugate()

    def potential_coefficient(self) -> complex:
        """Coefficient of x^m left after the exponential substitution: i - b^2 p^2."""
        return 1j - self.b**2 * self.p**2

    def leading_coefficient(self, q: float | None = None) -> complex:
        """Coefficient of the leading power in the psi_1 equation for psi_1 ~ x^q."""
        q = self.q if q is None else q
        m = self.m
        return (m * m + 2 * m) / 4 * self.b + (m + 2) * self.b * q

    def series_coefficients(self, order: int, E: complex = 0) -> np.ndarray:
        """A_0..A_order of psi_1 = sum_n A_n x^(q - n/2), with A_0 = 1.

        Half-integer steps are required: for odd m the shifts (m-2)/2 and
        -(m+2)/2 between the three terms of the psi_1 equation are
        half-integers. Matching the power x^(q - n/2 + (m-2)/2) gives

            (m+2) b (n/2) A_n = -E A_{n-(m-2)} - s (s-1) A_{n-(m+2)},
            s = q - (n-m-2)/2.

        For m = 1 the E term would reference A_{n+1}; only E = 0 is allowed.
        """
        m = self.m
        if m == 1 and E != 0:
            raise ValueError("for m = 1 the tail recursion is not triangular unless E = 0")
        A = np.zeros(order + 1, dtype=np.complex128)
        A[0] = 1
        for n in range(1, order + 1):
            acc = 0j
            n1 = n - (m - 2)
            if 0 <= n1 < n:
                acc += E * A[n1]
            n2 = n - (m + 2)
            if n2 >= 0:
                s = self.q - n2 / 2
                acc += s * (s - 1) * A[n2]
            A[n] = -acc / ((m + 2) * self.b * n / 2)
        return A


def _check_m(m):
    if not isinstance(m, (int, np.integer)) or m < 1 or m % 2 == 0:
        raise ValueError(f"m must be a positive odd integer, got {m!r}")


def tail_parameters(m: int) -> TailExpansion:
    _check_m(m)
    p = (m + 2) / 2
    b = math.sqrt(2) / (m + 2) * (1 + 1j)  # (2/(m+2)) sqrt(i), branch with Re b > 0
    q = -m / 4
    return TailExpansion(int(m), p, b, q)


def asymptotic_psi(exp: TailExpansion, x: float, side: Side | None = None) -> complex:
    """exp(-b |x|^p) |x|^q, using b on the positive side and conj(b) on the negative side."""
    if x == 0:
        raise DomainError("the tail form is singular at x = 0")
    inferred = Side.POSITIVE if x > 0 else Side.NEGATIVE
    if side is None:
        side = inferred
    elif side is not inferred:
        raise DomainError(f"x = {x} is not on the {side.name.lower()} side")
    ax = abs(x)
    return cmath.exp(-exp.coefficient_for(side) * ax**exp.p) * ax**exp.q


def residual_check(exp: TailExpansion, x: float, order: int = 0, E: complex = 0) -> float:
    """|(-D^2 + i x^m - E) psi| / |psi| / x^(m-1) for the truncated tail ansatz at x > 0.

    Derivatives of psi = exp(-b x^p) g(x), g = sum_n A_n x^(q - n/2), are taken
    analytically term by term. With correct parameters the ratio decays in x.
    """
    if x <= 0:
        raise DomainError("residual_check evaluates the positive tail")
    m, p, b, q = exp.m, exp.p, exp.b, exp.q
    A = exp.series_coefficients(order, E) if order else np.ones(1, dtype=np.complex128)
    g = dg = d2g = 0j
    for n, a in enumerate(A):
        s = q - n / 2
        g += a * x**s
        dg += a * s * x ** (s - 1)
        d2g += a * s * (s - 1) * x ** (s - 2)
    op = (
        -d2g
        + 2 * b * p * x ** (p - 1) * dg
        + b * p * (p - 1) * x ** (p - 2) * g
        - b * b * p * p * x ** (2 * p - 2) * g
        + 1j * x**m * g
        - E * g
    )
    return abs(op / g) / x ** (m - 1)


def consistency_flag(m: int) -> bool:
    """False when the tail ansatz cannot keep psi_1'' finite at the origin (needs m >= 2)."""
    _check_m(m)
    return m >= 2


def with_coefficient(exp: TailExpansion, b: complex) -> TailExpansion:
    """Copy of ``exp`` with a different exponential coefficient (for negative controls)."""
    return replace(exp, b=complex(b))
