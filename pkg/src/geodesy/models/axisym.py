"""Stationary axisymmetric vacuum fields in Weyl canonical coordinates.

Working variables are the norm f > 0 of the timelike Killing vector and the
twist potential Omega, both functions of (rho, z).  The model is expressed
twice: as hand-coded field equations / energy-momentum components, and as a
(base, target) metric pair for the generic engine, with the flat base
gamma_ab = delta_ab and the conformally flat target

    G_munu = (rho / 2 f^2) delta_munu.

The two routes generate identical equations; tests compare them pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import (BaseMetricSpec, TargetMetricSpec, FieldMap, EmtField,
                    euclidean_base)
from ..errors import DomainError
from ..grid import GridSpec, diff1, diff2


@dataclass(frozen=True)
class AxisymFields:
    """Sampled (f, Omega) on a (rho, z) lattice, optionally with k and omega."""

    grid: GridSpec
    f: np.ndarray
    Omega: np.ndarray
    k: Optional[np.ndarray] = None
    omega_lower: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in ("f", "Omega"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            if arr.shape != self.grid.dims:
                raise DomainError(f"{name} has shape {arr.shape}, "
                                  f"grid wants {self.grid.dims}")
            if not np.all(np.isfinite(arr)):
                raise DomainError(f"{name} contains non-finite samples")
        if np.min(self.f) <= 0.0:
            raise DomainError("f must be positive everywhere "
                              "(horizons/ergoregions are outside the domain)")

    def to_map(self) -> FieldMap:
        base, target = axisym_model(self.grid)
        return FieldMap(grid=self.grid, components=np.stack([self.f, self.Omega]),
                        base=base, target=target)


def axisym_model(grid: GridSpec) -> tuple[BaseMetricSpec, TargetMetricSpec]:
    """Flat base and conformal target for the stationary axisymmetric model."""
    if grid.coord_names != ("rho", "z"):
        raise DomainError("axisym model expects grid coordinates ('rho', 'z')")
    if grid.origin[0] <= 0.0:
        raise DomainError("axis not allowed for stationary model; use offset grid")

    def g_eval(X, x):
        f = X[0]
        rho = x[0]
        phi = rho / (2.0 * f * f)
        G = np.zeros((2, 2) + np.shape(phi))
        G[0, 0] = phi
        G[1, 1] = phi
        return G

    def g_dX(X, x):
        f = X[0]
        rho = x[0]
        dphi = -rho / (f * f * f)
        D = np.zeros((2, 2, 2) + np.shape(dphi))
        D[0, 0, 0] = dphi
        D[1, 1, 0] = dphi
        return D

    def g_dx(X, x):
        f = X[0]
        val = 1.0 / (2.0 * f * f)
        D = np.zeros((2, 2, 2) + np.shape(val))
        D[0, 0, 0] = val
        D[1, 1, 0] = val
        return D

    target = TargetMetricSpec(dim=2, eval=g_eval, dX_partials=g_dX,
                              dx_partials=g_dx)
    return euclidean_base(), target


# ---------------------------------------------------------------------------
# pointwise formulas (shared by the grid operations and the solver)

def main1_pointwise(rho, f, f_rho, f_z, f_lap, om_rho, om_z):
    """f-equation: cylindrical Laplacian of f plus the quadratic source."""
    return (f_lap + f_rho / rho
            + (om_rho * om_rho + om_z * om_z
               - f_rho * f_rho - f_z * f_z) / f)


def main2_pointwise(rho, f, f_rho, f_z, om_rho, om_z, om_lap):
    """Omega-equation: cylindrical Laplacian minus the f-coupling."""
    return (om_lap + om_rho / rho
            - 2.0 * (f_rho * om_rho + f_z * om_z) / f)


def emt_pointwise(rho, f, f_rho, f_z, om_rho, om_z):
    """(T_rhorho, T_rhoz); T_zz = -T_rhorho closes the symmetric tensor."""
    t_rr = (rho / (4.0 * f * f)) * (f_rho * f_rho + om_rho * om_rho
                                    - f_z * f_z - om_z * om_z)
    t_rz = (rho / (2.0 * f * f)) * (f_rho * f_z + om_rho * om_z)
    return t_rr, t_rz


def k_gradient_pointwise(rho, f, f_rho, f_z, om_rho, om_z):
    """Quadrature right sides (dk/drho, dk/dz) for the metric function k."""
    dk_rho = (rho / (4.0 * f * f)) * (f_rho * f_rho + om_rho * om_rho
                                      - f_z * f_z - om_z * om_z)
    dk_z = (rho / (2.0 * f * f)) * (f_rho * f_z + om_rho * om_z)
    return dk_rho, dk_z


def static_laplace_pointwise(rho, psi_rho, psi_lap):
    """Static limit: the linear equation for psi = (1/2) ln f."""
    return psi_lap + psi_rho / rho


# ---------------------------------------------------------------------------
# grid operations

def _grads(grid: GridSpec, u: np.ndarray):
    h0, h1 = grid.spacing
    p0, p1 = grid.periodic
    return (diff1(u, h0, 0, p0), diff1(u, h1, 1, p1),
            diff2(u, h0, 0, p0) + diff2(u, h1, 1, p1))


def axisym_residuals(fields: AxisymFields, include_edges: bool = False):
    """Residuals of the two main field equations, zero on solutions.

    The radial operator is discretized in expanded form f_rhorho + f_rho/rho
    with the same compact stencils the generic engine uses.
    """
    grid = fields.grid
    rho = grid.points()[0]
    f_rho, f_z, f_lap = _grads(grid, fields.f)
    om_rho, om_z, om_lap = _grads(grid, fields.Omega)
    r1 = main1_pointwise(rho, fields.f, f_rho, f_z, f_lap, om_rho, om_z)
    r2 = main2_pointwise(rho, fields.f, f_rho, f_z, om_rho, om_z, om_lap)
    if not include_edges:
        r1, r2 = grid.interior(r1), grid.interior(r2)
    return r1, r2


def k_gradient(fields: AxisymFields):
    """(dk/drho, dk/dz) on the full grid, from the quadrature equations."""
    grid = fields.grid
    rho = grid.points()[0]
    f_rho, f_z, _ = _grads(grid, fields.f)
    om_rho, om_z, _ = _grads(grid, fields.Omega)
    return k_gradient_pointwise(rho, fields.f, f_rho, f_z, om_rho, om_z)


def axisym_emt(fields: AxisymFields) -> EmtField:
    """Energy-momentum tensor of the axisymmetric map (flat base)."""
    grid = fields.grid
    rho = grid.points()[0]
    f_rho, f_z, _ = _grads(grid, fields.f)
    om_rho, om_z, _ = _grads(grid, fields.Omega)
    t_rr, t_rz = emt_pointwise(rho, fields.f, f_rho, f_z, om_rho, om_z)
    comp = np.stack([np.stack([t_rr, t_rz]), np.stack([t_rz, -t_rr])])
    return EmtField(components=comp, trace=t_rr + (-t_rr))


def static_laplace_residual(grid: GridSpec, psi: np.ndarray,
                            include_edges: bool = False) -> np.ndarray:
    """Residual of the static potential equation on sampled psi."""
    rho = grid.points()[0]
    psi_rho, _, psi_lap = _grads(grid, psi)
    res = static_laplace_pointwise(rho, psi_rho, psi_lap)
    return res if include_edges else grid.interior(res)


def omega_conversion(fields: AxisymFields, direction: str,
                     anchor: tuple[int, int] = (0, 0),
                     anchor_value: float = 0.0):
    """Convert between the metric function omega and the twist potential.

    direction "omega_to_twist" integrates the gradient relations
    rho dOmega/drho = f^2 domega/dz, rho dOmega/dz = -f^2 domega/drho;
    "twist_to_omega" inverts them.  Returns (field, loop_defect); the loop
    defect measures path dependence and is only small when the relations are
    integrable (on-shell data).
    """
    from .potentials import integrate_potential

    grid = fields.grid
    rho = grid.points()[0]
    f2 = fields.f * fields.f
    if direction == "omega_to_twist":
        if fields.omega_lower is None:
            raise DomainError("fields.omega_lower is required for omega_to_twist")
        w = np.asarray(fields.omega_lower, dtype=float)
        w_rho, w_z, _ = _grads(grid, w)
        grad = (f2 * w_z / rho, -f2 * w_rho / rho)
    elif direction == "twist_to_omega":
        om_rho, om_z, _ = _grads(grid, fields.Omega)
        grad = (-rho * om_z / f2, rho * om_rho / f2)
    else:
        raise DomainError("direction must be 'omega_to_twist' or 'twist_to_omega'")
    return integrate_potential(grad, grid, anchor=anchor, anchor_value=anchor_value)
