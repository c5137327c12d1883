"""Static multipole series solutions of the axisymmetric vacuum equations.

The static potential psi = (1/2) ln f solves a linear cylindrical Laplace
equation; its decaying solutions form the series

    psi(rho, z) = sum_n a_n P_n(cos theta) / r^(n+1),
    r = sqrt(rho^2 + z^2),  cos theta = z / r,

with free coefficients a_n.  The companion metric function k has a closed
double series.  The monopole member a = [-m] is the Curzon solution
psi = -m/r, k = -m^2 rho^2 / (2 r^4), used throughout the tests as an exact
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..grid import GridSpec
from .axisym import AxisymFields


@dataclass(frozen=True)
class WeylCoefficients:
    """Finite list of multipole coefficients a_0 ... a_N."""

    a: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.a, dtype=float))
        object.__setattr__(self, "a", arr)
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise DomainError("coefficients must be a finite 1D list")

    @property
    def order(self) -> int:
        return len(self.a) - 1


def legendre(n: int, x) -> np.ndarray:
    """P_n(x) by the three-term recurrence, |x| <= 1 (+1e-12 slack)."""
    if n < 0:
        raise DomainError("Legendre degree must be >= 0")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-12):
        raise DomainError("Legendre argument must lie in [-1, 1]")
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev
    p = x.copy()
    for k in range(1, n):
        p, p_prev = ((2 * k + 1) * x * p - k * p_prev) / (k + 1), p
    return p


def legendre_table(nmax: int, x):
    """P_0..P_nmax and their derivatives, stacked on a leading axis.

    The derivative recurrence P'_{k+1} = P'_{k-1} + (2k+1) P_k stays finite
    at the axis (x = +-1) where the (1-x^2) form degenerates.
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-12):
        raise DomainError("Legendre argument must lie in [-1, 1]")
    P = np.zeros((nmax + 1,) + x.shape)
    dP = np.zeros_like(P)
    P[0] = 1.0
    if nmax >= 1:
        P[1] = x
        dP[1] = 1.0
    for k in range(1, nmax):
        P[k + 1] = ((2 * k + 1) * x * P[k] - k * P[k - 1]) / (k + 1)
        dP[k + 1] = dP[k - 1] + (2 * k + 1) * P[k]
    return P, dP


def _radius(rho, z):
    rho = np.asarray(rho, dtype=float)
    z = np.asarray(z, dtype=float)
    r2 = rho * rho + z * z
    if np.any(r2 == 0.0):
        raise DomainError("singular point of the multipole series")
    return rho, z, np.sqrt(r2)


def weyl_psi(coeffs: WeylCoefficients, rho, z):
    """Series value of psi and its analytic gradient (psi, dpsi_rho, dpsi_z)."""
    rho, z, r = _radius(rho, z)
    u = z / r
    N = coeffs.order
    P, dP = legendre_table(N, u)
    psi = np.zeros_like(r)
    d_rho = np.zeros_like(r)
    d_z = np.zeros_like(r)
    for n, a_n in enumerate(coeffs.a):
        if a_n == 0.0:
            continue
        rpow = r ** (-(n + 1))
        psi += a_n * P[n] * rpow
        # d/drho [P_n(u) r^-(n+1)] with du/drho = -z rho / r^3
        d_rho += a_n * (-(n + 1) * P[n] * rho * rpow / (r * r)
                        - dP[n] * z * rho * rpow / (r ** 3))
        d_z += a_n * (-(n + 1) * P[n] * z * rpow / (r * r)
                      + dP[n] * rho * rho * rpow / (r ** 3))
    return psi, d_rho, d_z


def weyl_k(coeffs: WeylCoefficients, rho, z):
    """Closed double series for the metric function k of a static solution."""
    rho, z, r = _radius(rho, z)
    u = z / r
    N = coeffs.order
    P, _ = legendre_table(N + 1, u)
    k = np.zeros_like(r)
    for n, a_n in enumerate(coeffs.a):
        if a_n == 0.0:
            continue
        for m, a_m in enumerate(coeffs.a):
            if a_m == 0.0:
                continue
            k -= (a_n * a_m * (n + 1) * (m + 1) / (n + m + 2)
                  * (P[n] * P[m] - P[n + 1] * P[m + 1])
                  * r ** (-(n + m + 2)))
    return k


def weyl_fields(coeffs: WeylCoefficients, grid: GridSpec) -> AxisymFields:
    """Sample a static series solution on a grid: f = e^{2 psi}, Omega = 0."""
    x = grid.points()
    psi, _, _ = weyl_psi(coeffs, x[0], x[1])
    k = weyl_k(coeffs, x[0], x[1])
    return AxisymFields(grid=grid, f=np.exp(2.0 * psi),
                        Omega=np.zeros(grid.dims), k=k)


def curzon(grid: GridSpec, mass: float = 1.0) -> AxisymFields:
    """Monopole solution psi = -mass/r with its closed-form k."""
    return weyl_fields(WeylCoefficients(a=[-mass]), grid)


def curzon_k_exact(rho, z, mass: float = 1.0):
    rho = np.asarray(rho, dtype=float)
    z = np.asarray(z, dtype=float)
    r2 = rho * rho + z * z
    return -mass * mass * rho * rho / (2.0 * r2 * r2)
