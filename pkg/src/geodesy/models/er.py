"""Cylindrical gravitational waves (two spacelike symmetries).

Fields psi(t, rho) and twist potential Omega(t, rho) on a Minkowski-like
base gamma_ab = diag(1, -1), x = (t, rho), with curved target

    G_munu = diag(2 rho, (rho / 2) e^{-4 psi}).

Residuals carry the variational orientation: the psi-residual is
psi_tt - psi_rhorho - psi_rho/rho + ..., the exact negative of the
spatial-operator-first display form, so that the generic engine and the
hand-coded equations agree pointwise, not just on solutions.

The separable standing wave psi = J0(rho) cos t (Omega = 0) is the exact
oracle; J0 comes from its ascending power series so the oracle has no
external special-function dependency.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import BaseMetricSpec, TargetMetricSpec, FieldMap, EmtField, minkowski_base
from ..errors import DomainError
from ..grid import GridSpec, diff1, diff2


@dataclass(frozen=True)
class ErFields:
    """Sampled (psi, Omega) on a (t, rho) lattice."""

    grid: GridSpec
    psi: np.ndarray
    Omega: np.ndarray
    gamma_potential: Optional[np.ndarray] = None
    omega_lower: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.grid.coord_names != ("t", "rho"):
            raise DomainError("cylindrical-wave fields expect coordinates ('t', 'rho')")
        for name in ("psi", "Omega"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            if arr.shape != self.grid.dims:
                raise DomainError(f"{name} has shape {arr.shape}, "
                                  f"grid wants {self.grid.dims}")
            if not np.all(np.isfinite(arr)):
                raise DomainError(f"{name} contains non-finite samples")
        if self.grid.origin[1] < 0.0:
            raise DomainError("rho must be nonnegative")

    def to_map(self) -> FieldMap:
        base, target = er_model(self.grid)
        return FieldMap(grid=self.grid, components=np.stack([self.psi, self.Omega]),
                        base=base, target=target)


def er_model(grid: GridSpec) -> tuple[BaseMetricSpec, TargetMetricSpec]:
    """Minkowski-like base and the rho-weighted target for cylindrical waves."""
    if grid.coord_names != ("t", "rho"):
        raise DomainError("cylindrical-wave model expects coordinates ('t', 'rho')")

    def g_eval(X, x):
        psi = X[0]
        rho = x[1]
        G = np.zeros((2, 2) + np.shape(psi))
        G[0, 0] = 2.0 * rho + 0.0 * psi
        G[1, 1] = 0.5 * rho * np.exp(-4.0 * psi)
        return G

    def g_dX(X, x):
        psi = X[0]
        rho = x[1]
        D = np.zeros((2, 2, 2) + np.shape(psi))
        D[1, 1, 0] = -2.0 * rho * np.exp(-4.0 * psi)
        return D

    def g_dx(X, x):
        psi = X[0]
        D = np.zeros((2, 2, 2) + np.shape(psi))
        D[0, 0, 1] = 2.0 + 0.0 * psi
        D[1, 1, 1] = 0.5 * np.exp(-4.0 * psi)
        return D

    target = TargetMetricSpec(dim=2, eval=g_eval, dX_partials=g_dX,
                              dx_partials=g_dx)
    return minkowski_base(), target


# ---------------------------------------------------------------------------
# pointwise formulas

def er_psi_pointwise(rho, psi, psi_tt, psi_rr, psi_r, om_t, om_r):
    return (psi_tt - psi_rr - psi_r / rho
            + 0.5 * np.exp(-4.0 * psi) * (om_t * om_t - om_r * om_r))


def er_omega_pointwise(rho, om_tt, om_rr, om_r, psi_t, psi_r, om_t):
    return (om_tt - om_rr - om_r / rho
            - 4.0 * (om_t * psi_t - om_r * psi_r))


def er_emt_pointwise(rho, psi, psi_t, psi_r, om_t, om_r):
    """(T_tt, T_trho); T_rhorho = T_tt closes the tensor."""
    w = 0.25 * rho * np.exp(-4.0 * psi)
    t_tt = rho * (psi_t * psi_t + psi_r * psi_r) + w * (om_t * om_t + om_r * om_r)
    t_tr = 2.0 * rho * psi_t * psi_r + 2.0 * w * om_t * om_r
    return t_tt, t_tr


# ---------------------------------------------------------------------------
# grid operations

def _grads(grid: GridSpec, u: np.ndarray):
    h0, h1 = grid.spacing
    p0, p1 = grid.periodic
    return (diff1(u, h0, 0, p0), diff1(u, h1, 1, p1),
            diff2(u, h0, 0, p0), diff2(u, h1, 1, p1))


def er_residuals(fields: ErFields, include_edges: bool = False):
    """Residuals of the two wave equations (variational orientation)."""
    grid = fields.grid
    rho = grid.points()[1]
    if np.min(rho) <= 0.0:
        raise DomainError("rho must be positive on stencil points; "
                          "use a staggered grid at the axis")
    psi_t, psi_r, psi_tt, psi_rr = _grads(grid, fields.psi)
    om_t, om_r, om_tt, om_rr = _grads(grid, fields.Omega)
    r1 = er_psi_pointwise(rho, fields.psi, psi_tt, psi_rr, psi_r, om_t, om_r)
    r2 = er_omega_pointwise(rho, om_tt, om_rr, om_r, psi_t, psi_r, om_t)
    if not include_edges:
        r1, r2 = grid.interior(r1), grid.interior(r2)
    return r1, r2


def er_emt(fields: ErFields) -> EmtField:
    grid = fields.grid
    rho = grid.points()[1]
    psi_t, psi_r, _, _ = _grads(grid, fields.psi)
    om_t, om_r, _, _ = _grads(grid, fields.Omega)
    t_tt, t_tr = er_emt_pointwise(rho, fields.psi, psi_t, psi_r, om_t, om_r)
    comp = np.stack([np.stack([t_tt, t_tr]), np.stack([t_tr, t_tt])])
    # mixed trace with gamma = diag(1,-1): T^t_t + T^rho_rho = T_tt - T_rhorho
    return EmtField(components=comp, trace=t_tt - t_tt)


def er_gamma_gradient(fields: ErFields):
    """Gradient of the quadrature potential gamma, in grid-axis order (t, rho).

    The t-component is T_trho and the rho-component T_tt; integrability of
    this pair is the conservation law in disguise.
    """
    grid = fields.grid
    rho = grid.points()[1]
    psi_t, psi_r, _, _ = _grads(grid, fields.psi)
    om_t, om_r, _, _ = _grads(grid, fields.Omega)
    t_tt, t_tr = er_emt_pointwise(rho, fields.psi, psi_t, psi_r, om_t, om_r)
    return t_tr, t_tt


# ---------------------------------------------------------------------------
# Bessel oracle

def bessel_j0(x) -> np.ndarray:
    """J0 by its ascending power series, term-ratio cutoff 1e-16.

    Accurate to full precision for small arguments; cancellation limits the
    absolute error to about 5e-9 near x = 20, which bounds the usable test
    range.
    """
    x = np.asarray(x, dtype=float)
    q = -0.25 * x * x
    term = np.ones_like(q)
    total = np.ones_like(q)
    for k in range(1, 200):
        term = term * q / (k * k)
        total = total + term
        if np.all(np.abs(term) <= 1e-16 * np.maximum(1.0, np.abs(total))):
            break
    return total


def bessel_standing_wave(grid: GridSpec) -> ErFields:
    """Exact linearly polarized solution psi = J0(rho) cos t, Omega = 0."""
    x = grid.points()
    psi = bessel_j0(x[1]) * np.cos(x[0])
    return ErFields(grid=grid, psi=psi, Omega=np.zeros(grid.dims))
