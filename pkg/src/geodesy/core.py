"""Generic engine for harmonic maps whose target metric depends on the
base coordinates.

A map is a set of scalar fields X^mu(x) on a 2D base lattice together with
a base metric gamma_ab(x) and a target metric G_munu(X, x).  The engine
evaluates Christoffel symbols of G (X-derivatives only), the motion-equation
residual

    gamma^{ab} d2_ab X^mu  +  c^a d_a X^mu
      + Gamma^mu_nulam gamma^{ab} d_a X^nu d_b X^lam
      + G^{mulam} gamma^{ab} d_a X^nu (dG_lamnu/dx^b at fixed X),

with c^a = (1/sqrt|gamma|) d_b(sqrt|gamma| gamma^{ab}) expanded analytically
so that every derivative of X uses the compact second-order stencils, plus
the action, the energy-momentum tensor, its conservation defect, the induced
metric, Weyl rescalings and the linearity diagnostic.

Metric evaluation callables are numpy-broadcasting: they accept coordinate
stacks of shape (m, ...) / field stacks (n, ...) and return matrices with
those grid axes trailing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateMetricError, DomainError
from .grid import (GridSpec, diff1, diff2, to_cell_centers,
                   cell_center_gradient)

DEGENERACY_THRESHOLD = 1e-14
FD_RELATIVE_STEP = 1e-6


@dataclass(frozen=True)
class BaseMetricSpec:
    """Covariant base metric gamma_ab(x) with analytic determinant/inverse.

    ``dx_partials`` optionally supplies d gamma_ab / dx^c as an array indexed
    [a, b, c, ...]; central finite differences stand in when absent.
    """

    dim: int
    eval: Callable[[np.ndarray], np.ndarray]
    det: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    dx_partials: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def partials_x(self, x: np.ndarray) -> np.ndarray:
        if self.dx_partials is not None:
            return np.asarray(self.dx_partials(x), dtype=float)
        return _fd_partials(lambda xx: self.eval(xx), x)


@dataclass(frozen=True)
class TargetMetricSpec:
    """Symmetric target metric G_munu(X, x) with optional analytic partials.

    ``dX_partials`` returns dG_munu/dX^lam indexed [mu, nu, lam, ...];
    ``dx_partials`` returns the explicit coordinate derivative at fixed X,
    indexed [mu, nu, a, ...].
    """

    dim: int
    eval: Callable[[np.ndarray, np.ndarray], np.ndarray]
    dX_partials: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    dx_partials: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None

    def partials_X(self, X: np.ndarray, x: np.ndarray,
                   force_fd: bool = False) -> np.ndarray:
        if self.dX_partials is not None and not force_fd:
            return np.asarray(self.dX_partials(X, x), dtype=float)
        return _fd_partials(lambda XX: self.eval(XX, x), X)

    def partials_x(self, X: np.ndarray, x: np.ndarray,
                   force_fd: bool = False) -> np.ndarray:
        if self.dx_partials is not None and not force_fd:
            return np.asarray(self.dx_partials(X, x), dtype=float)
        return _fd_partials(lambda xx: self.eval(X, xx), x)


@dataclass(frozen=True)
class FieldMap:
    """Sampled map X: base lattice -> target, bound to its two metrics."""

    grid: GridSpec
    components: np.ndarray
    base: BaseMetricSpec
    target: TargetMetricSpec

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=float)
        object.__setattr__(self, "components", comp)
        if comp.shape != (self.target.dim, *self.grid.dims):
            raise DomainError(
                f"expected {self.target.dim} components on {self.grid.dims}, "
                f"got array of shape {comp.shape}")
        if not np.all(np.isfinite(comp)):
            raise DomainError("field samples must be finite")


@dataclass(frozen=True)
class EmtField:
    """Covariant energy-momentum tensor T_ab on the grid plus its trace."""

    components: np.ndarray  # (2, 2, n1, n2), symmetric
    trace: np.ndarray       # (n1, n2), mixed trace T^a_a

    def __post_init__(self):
        asym = np.max(np.abs(self.components[0, 1] - self.components[1, 0]))
        scale = max(1.0, float(np.max(np.abs(self.components))))
        if asym > 1e-12 * scale:
            raise DomainError("energy-momentum tensor is not symmetric")


# ---------------------------------------------------------------------------
# metric plumbing

def _fd_partials(fn, v: np.ndarray) -> np.ndarray:
    """Central differences of a matrix-valued function of the stack v.

    Step per component: FD_RELATIVE_STEP * max(1, |v_k|).
    """
    v = np.asarray(v, dtype=float)
    m = v.shape[0]
    cols = []
    for k in range(m):
        h = FD_RELATIVE_STEP * np.maximum(1.0, np.abs(v[k]))
        vp = v.copy()
        vm = v.copy()
        vp[k] = v[k] + h
        vm[k] = v[k] - h
        cols.append((np.asarray(fn(vp), dtype=float)
                     - np.asarray(fn(vm), dtype=float)) / (2.0 * h))
    return np.stack(cols, axis=2)


def _move_in(mat: np.ndarray, k: int = 2) -> np.ndarray:
    return np.moveaxis(mat, tuple(range(k)), tuple(range(-k, 0)))


def _move_out(mat: np.ndarray, k: int = 2) -> np.ndarray:
    return np.moveaxis(mat, tuple(range(-k, 0)), tuple(range(k)))


def matrix_inverse(mat: np.ndarray) -> np.ndarray:
    """Inverse of a (n, n, ...) stack of matrices."""
    return _move_out(np.linalg.inv(_move_in(mat)))


def matrix_det(mat: np.ndarray) -> np.ndarray:
    return np.linalg.det(_move_in(mat))


def check_target_metric(G: np.ndarray, where: str = "") -> None:
    n = G.shape[0]
    if n > 1:
        asym = np.max(np.abs(G - np.swapaxes(G, 0, 1)))
        if asym > 1e-12 * max(1.0, float(np.max(np.abs(G)))):
            raise DomainError("target metric is not symmetric" + where)
    det = matrix_det(G)
    bad = np.abs(det) <= DEGENERACY_THRESHOLD
    if np.any(bad):
        raise DegenerateMetricError("degenerate target metric at (X,x)" + where)


def constant_base(matrix: np.ndarray) -> BaseMetricSpec:
    """Base metric with constant components (flat in these coordinates)."""
    mat = np.asarray(matrix, dtype=float)
    dim = mat.shape[0]
    det_val = float(np.linalg.det(mat))
    inv_val = np.linalg.inv(mat)

    def _expand(m, x):
        out = np.zeros(m.shape + x.shape[1:])
        out += m.reshape(m.shape + (1,) * (x.ndim - 1))
        return out

    return BaseMetricSpec(
        dim=dim,
        eval=lambda x: _expand(mat, x),
        det=lambda x: np.full(x.shape[1:], det_val),
        inverse=lambda x: _expand(inv_val, x),
        dx_partials=lambda x: np.zeros((dim, dim, dim) + x.shape[1:]),
    )


def euclidean_base() -> BaseMetricSpec:
    return constant_base(np.eye(2))


def minkowski_base() -> BaseMetricSpec:
    return constant_base(np.diag([1.0, -1.0]))


def weyl_rescale(base: BaseMetricSpec, sigma: Callable[[np.ndarray], np.ndarray]
                 ) -> BaseMetricSpec:
    """Conformal rescaling gamma -> e^{sigma(x)} gamma of a 2D base.

    Leaves sqrt|gamma| gamma^{ab}, and hence the action, unchanged.
    """
    if base.dim != 2:
        raise DomainError("Weyl symmetry only defined for 2-dimensional base")
    return BaseMetricSpec(
        dim=2,
        eval=lambda x: np.exp(sigma(x)) * base.eval(x),
        det=lambda x: np.exp(2.0 * sigma(x)) * base.det(x),
        inverse=lambda x: np.exp(-sigma(x)) * base.inverse(x),
        dx_partials=None,
    )


# ---------------------------------------------------------------------------
# pointwise tensor algebra

def christoffel(target: TargetMetricSpec, X: np.ndarray, x: np.ndarray,
                force_fd: bool = False) -> np.ndarray:
    """Christoffel symbols of the target metric from its X-derivatives only.

    Returns Gamma^mu_{nu lam} indexed [mu, nu, lam, ...], symmetric in the
    lower pair.  The explicit x-dependence of G plays no role here.
    """
    X = np.asarray(X, dtype=float)
    x = np.asarray(x, dtype=float)
    G = np.asarray(target.eval(X, x), dtype=float)
    check_target_metric(G)
    Ginv = matrix_inverse(G)
    D = target.partials_X(X, x, force_fd=force_fd)  # [mu, nu, lam]
    # bracket[s, n, l] = d_n G_sl + d_l G_sn - d_s G_nl
    bracket = (np.moveaxis(D, (0, 1, 2), (0, 2, 1))        # D[s, l, n]
               + D                                          # D[s, n, l]
               - np.moveaxis(D, (0, 1, 2), (1, 2, 0)))      # D[n, l, s]
    return 0.5 * np.einsum("ms...,snl...->mnl...", Ginv, bracket)


# ---------------------------------------------------------------------------
# grid-level helpers

def _field_gradients(fmap: FieldMap):
    """First derivatives DX[a, mu] and diagonal second derivatives."""
    g = fmap.grid
    X = fmap.components
    DX = np.stack([diff1(X, g.spacing[a], a, g.periodic[a]) for a in (0, 1)])
    D2 = [diff2(X, g.spacing[a], a, g.periodic[a]) for a in (0, 1)]
    return DX, D2


def _base_divergence_coeff(base: BaseMetricSpec, x: np.ndarray,
                           ginv: np.ndarray) -> np.ndarray:
    """c^a = (1/sqrt|g|) d_b(sqrt|g| g^{ab}), from the metric partials."""
    dgam = base.partials_x(x)  # [a, b, c]
    # trace term: (1/2) tr(g^{-1} d_c gamma) g^{ac}
    tr = np.einsum("ab...,bac...->c...", ginv, dgam)
    c = 0.5 * np.einsum("c...,ac...->a...", tr, ginv)
    # derivative of the inverse: d_c g^{ab} = -(g^{-1} d_c gamma g^{-1})^{ab}
    dginv = -np.einsum("ad...,dec...,eb...->abc...", ginv, dgam, ginv)
    c = c + np.einsum("abb...->a...", dginv)
    return c


def _target_data(fmap: FieldMap, x: np.ndarray):
    X = fmap.components
    G = np.asarray(fmap.target.eval(X, x), dtype=float)
    check_target_metric(G)
    return G


def el_residual(fmap: FieldMap, include_edges: bool = False) -> np.ndarray:
    """Motion-equation residual per target component, zero on solutions.

    Interior points by default; ``include_edges`` keeps the one-sided edge
    stencils in the output.
    """
    g = fmap.grid
    x = g.points()
    X = fmap.components
    DX, D2 = _field_gradients(fmap)

    ginv = np.asarray(fmap.base.inverse(x), dtype=float)
    G = _target_data(fmap, x)
    Ginv = matrix_inverse(G)
    Gamma = christoffel(fmap.target, X, x)
    dxG = fmap.target.partials_x(X, x)  # [mu, nu, a]

    res = ginv[0, 0] * D2[0] + ginv[1, 1] * D2[1]
    if np.any(ginv[0, 1] != 0.0):
        cross = diff1(diff1(X, g.spacing[0], 0, g.periodic[0]),
                      g.spacing[1], 1, g.periodic[1])
        res = res + 2.0 * ginv[0, 1] * cross
    c = _base_divergence_coeff(fmap.base, x, ginv)
    res = res + np.einsum("a...,am...->m...", c, DX)
    res = res + np.einsum("mnl...,ab...,an...,bl...->m...", Gamma, ginv, DX, DX)
    res = res + np.einsum("ml...,ab...,an...,lnb...->m...", Ginv, ginv, DX, dxG)
    return res if include_edges else g.interior(res)


def lagrangian_density(fmap: FieldMap) -> np.ndarray:
    """sqrt|gamma| gamma^{ab} d_a X^mu d_b X^nu G_munu at the grid points."""
    g = fmap.grid
    x = g.points()
    DX, _ = _field_gradients(fmap)
    ginv = np.asarray(fmap.base.inverse(x), dtype=float)
    sqrtg = np.sqrt(np.abs(np.asarray(fmap.base.det(x), dtype=float)))
    G = _target_data(fmap, x)
    return sqrtg * np.einsum("ab...,am...,bn...,mn...->...", ginv, DX, DX, G)


def action(fmap: FieldMap) -> float:
    """Discrete action: cell-centered (midpoint) quadrature of the density."""
    g = fmap.grid
    xc = g.cell_centers()
    Xc = to_cell_centers(fmap.components)
    DXc = cell_center_gradient(fmap.components, g)
    ginv = np.asarray(fmap.base.inverse(xc), dtype=float)
    sqrtg = np.sqrt(np.abs(np.asarray(fmap.base.det(xc), dtype=float)))
    G = np.asarray(fmap.target.eval(Xc, xc), dtype=float)
    dens = sqrtg * np.einsum("ab...,am...,bn...,mn...->...", ginv, DXc, DXc, G)
    return float(np.sum(dens) * g.spacing[0] * g.spacing[1])


def induced_metric(fmap: FieldMap) -> np.ndarray:
    """h_ab = G_munu(X, x) d_a X^mu d_b X^nu, the pullback of G."""
    g = fmap.grid
    x = g.points()
    DX, _ = _field_gradients(fmap)
    G = _target_data(fmap, x)
    return np.einsum("am...,bn...,mn...->ab...", DX, DX, G)


def _emt_mixed(fmap: FieldMap, x: np.ndarray):
    """T_a^b including the sqrt|gamma| weight, plus pieces for reuse."""
    g = fmap.grid
    DX, _ = _field_gradients(fmap)
    ginv = np.asarray(fmap.base.inverse(x), dtype=float)
    gam = np.asarray(fmap.base.eval(x), dtype=float)
    sqrtg = np.sqrt(np.abs(np.asarray(fmap.base.det(x), dtype=float)))
    G = _target_data(fmap, x)
    h = np.einsum("am...,bn...,mn...->ab...", DX, DX, G)
    dens = np.einsum("ab...,ab...->...", ginv, h)
    eye = np.eye(2).reshape(2, 2, *([1] * (h.ndim - 2)))
    T = sqrtg * (np.einsum("bc...,ac...->ab...", ginv, h) - 0.5 * eye * dens)
    return T, h, dens, ginv, gam, sqrtg, DX, G


def emt(fmap: FieldMap) -> EmtField:
    """Canonical energy-momentum tensor of the map, lowered with gamma.

    Internally cross-checks the 'canonical' normalization: the tensor built
    from dL/d(dX) equals exactly twice the metric variation, and the mixed
    trace vanishes algebraically for a 2D base.
    """
    x = fmap.grid.points()
    T, h, dens, ginv, gam, sqrtg, DX, G = _emt_mixed(fmap, x)
    # independent coding of the canonical tensor from dL/d(d_b X^mu)
    T_can = 2.0 * sqrtg * np.einsum("bc...,cm...,an...,mn...->ab...",
                                    ginv, DX, DX, G)
    T_can = T_can - np.eye(2).reshape(2, 2, *([1] * (T.ndim - 2))) * (sqrtg * dens)
    mismatch = np.max(np.abs(T_can - 2.0 * T))
    scale = max(1.0, float(np.max(np.abs(T))))
    if mismatch > 1e-13 * scale:
        raise DomainError(
            f"canonical EMT mismatch: |T_canonical - 2 T| = {mismatch:.3e}")
    # lowered on the second slot: T_ab = T_a^c gamma_cb
    T_cov = np.einsum("ac...,cb...->ab...", T, gam)
    trace = np.einsum("aa...->...", T)
    return EmtField(components=T_cov, trace=trace)


def conservation_residual(fmap: FieldMap, include_edges: bool = False) -> np.ndarray:
    """Defect of the conservation law nabla_b T_a^b + (1/2) dL/dx^a.

    dL/dx^a is the explicit coordinate derivative (through gamma(x) and the
    explicit x-dependence of G at fixed X).  On solutions the defect vanishes
    at the stencil order.  Two layers are trimmed from non-periodic edges by
    default since the divergence differentiates an already-differenced field.
    """
    g = fmap.grid
    x = g.points()
    T, h, dens, ginv, gam, sqrtg, DX, G = _emt_mixed(fmap, x)

    divT = (diff1(T[:, 0], g.spacing[0], 0, g.periodic[0])
            + diff1(T[:, 1], g.spacing[1], 1, g.periodic[1]))
    dgam = fmap.base.partials_x(x)  # [a, b, c]
    # base Christoffels Gamma^c_{ab}
    brace = (np.moveaxis(dgam, (0, 1, 2), (0, 2, 1))
             + dgam
             - np.moveaxis(dgam, (0, 1, 2), (1, 2, 0)))
    Gb = 0.5 * np.einsum("cd...,dab...->cab...", ginv, brace)
    divT = divT - np.einsum("cab...,cb...->a...", Gb, T)

    # explicit dL/dx^a: derivative of sqrt|g| g^{bc} plus explicit dG/dx
    tr = np.einsum("ab...,bac...->c...", ginv, dgam)
    dginv = -np.einsum("ad...,dec...,eb...->abc...", ginv, dgam, ginv)
    dweight = sqrtg * (0.5 * np.einsum("c...,bd...->bdc...", tr, ginv) + dginv)
    dxG = fmap.target.partials_x(fmap.components, x)
    dL = (np.einsum("bca...,bc...->a...", dweight, h)
          + sqrtg * np.einsum("bc...,bm...,cn...,mna...->a...", ginv, DX, DX, dxG))

    res = divT + 0.5 * dL
    return res if include_edges else g.interior(res, width=2)


def linearity_residual(fmap: FieldMap, include_edges: bool = False) -> np.ndarray:
    """Size of the terms that make the motion equations nonlinear.

    Evaluates gamma^{ab}(Gamma^mu_nulam d_b X^lam + G^{mulam} d_b G_lamnu)
    d_a X^nu; identically zero only for effectively linear maps.
    """
    g = fmap.grid
    x = g.points()
    X = fmap.components
    DX, _ = _field_gradients(fmap)
    ginv = np.asarray(fmap.base.inverse(x), dtype=float)
    G = _target_data(fmap, x)
    Ginv = matrix_inverse(G)
    Gamma = christoffel(fmap.target, X, x)
    dxG = fmap.target.partials_x(X, x)
    val = np.einsum("mnl...,ab...,bl...,an...->m...", Gamma, ginv, DX, DX)
    val = val + np.einsum("ml...,ab...,lnb...,an...->m...", Ginv, ginv, dxG, DX)
    return val if include_edges else g.interior(val)
