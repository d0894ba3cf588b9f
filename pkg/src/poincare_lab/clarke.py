"""Nonsmooth analysis of the signed distance field.

The signed distance to the boundary is 1-Lipschitz but not differentiable;
its generalized directional derivative (limsup of difference quotients over
nearby base points and shrinking steps) is estimated from above by a finite
max over lattice base points within a radius and a ladder of step sizes, with
off-lattice values obtained by multilinear interpolation.

The band scan certifies descent: inside the boundary layer of a single-patch
graph domain, stepping straight down decreases the signed distance at rate at
least 1/sqrt(1+M^2) up to resolution effects, so the layer contains no
critical points and erosion cannot change connectivity there.  Component
counting stands in for the full deformation argument: connectedness is all
the downstream checks need.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .grid import DistanceField, GridDomain, connected_components, exact_distance_transform
from .hypotheses import unit_directions

__all__ = [
    "DirectionalDerivativeEstimate",
    "BandScanReport",
    "directional_derivative",
    "critical_band_scan",
    "homotopy_surrogate",
    "band_report_json",
]


@dataclass
class DirectionalDerivativeEstimate:
    point: tuple
    direction: tuple
    estimate: float
    samples_used: int
    rho: float
    t_max: float


@dataclass
class BandScanReport:
    delta: float
    m_lip: float
    c_theory: float
    tol: float
    worst_estimate: float
    vertical_worst: float
    violating_cells: list
    near_critical_cells: list
    n_cells_scanned: int

    def __post_init__(self):
        if not 0 < self.c_theory <= 1:
            raise ValueError("c_theory must lie in (0, 1]")


def _ball_offsets(rho, h, dim):
    k = int(math.floor(rho / h + 1e-9))
    axes = [np.arange(-k, k + 1)] * dim
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    keep = (grid * grid).sum(axis=1) * h * h <= rho * rho + 1e-12
    return grid[keep]


def _estimate_many(gamma: DistanceField, cells, v, rho, t_steps, t_min_steps=1):
    """Vectorized upper estimate of the generalized derivative along v at
    several cells: max over lattice base points within rho and steps t in
    {t_min_steps*h, ..., (t_min_steps+t_steps-1)*h} of the interpolated
    difference quotient."""
    spec = gamma.spec
    h = spec.h
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    offs = _ball_offsets(rho, h, spec.dim)
    base_idx = cells[:, None, :] + offs[None, :, :]
    n = np.asarray(spec.extents)
    if (base_idx < 0).any() or (base_idx >= n).any():
        raise ValueError("insufficient margin: base points leave the grid")
    gamma_y = gamma.value[tuple(base_idx[:, :, k] for k in range(spec.dim))]
    centers = np.asarray(spec.origin) + (base_idx + 0.5) * h
    flat = centers.reshape(-1, spec.dim)
    best = np.full(len(cells), -np.inf)
    count = 0
    for step in range(t_min_steps, t_min_steps + t_steps):
        t = step * h
        vals = gamma.sample(flat + t * v[None, :]).reshape(gamma_y.shape)
        quot = (vals - gamma_y) / t
        best = np.maximum(best, quot.max(axis=1))
        count += quot.size
    return best, count


def directional_derivative(gamma: DistanceField, x, v, rho: float | None = None,
                           t_steps: int = 3,
                           t_min_steps: int = 1) -> DirectionalDerivativeEstimate:
    """Scale-(rho, T) upper approximation of the generalized directional
    derivative of the signed distance at cell x along v.

    The lattice signed field carries O(h) staircase noise, so quotients at
    step t are biased by about 0.4h/t; callers probing the continuum rate
    should raise t_min_steps (the band scan uses 4, putting the bias at the
    0.1 tolerance floor).
    """
    if not gamma.signed:
        raise ValueError("gamma must be a signed distance field")
    h = gamma.spec.h
    if rho is None:
        rho = 2 * h
    if rho < 2 * h:
        raise ValueError("rho must be at least 2h")
    if t_steps < 3:
        raise ValueError("t_steps must be at least 3")
    if t_min_steps < 1:
        raise ValueError("t_min_steps must be at least 1")
    cells = np.asarray([x], dtype=np.int64)
    best, count = _estimate_many(gamma, cells, v, rho, t_steps, t_min_steps)
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    return DirectionalDerivativeEstimate(
        point=tuple(int(c) for c in x),
        direction=tuple(float(c) for c in v),
        estimate=float(best[0]),
        samples_used=int(count),
        rho=float(rho),
        t_max=float((t_min_steps + t_steps - 1) * h),
    )


def critical_band_scan(d: GridDomain, delta: float, directions: int | None = None,
                       rho: float | None = None, t_steps: int = 3,
                       t_min_steps: int = 4) -> BandScanReport:
    """Scan the boundary layer of a single-patch graph domain for descent.

    Cells scanned are those of the band (signed distance in (0, delta]) whose
    patch position keeps every sample graph-governed: a margin of delta + rho
    + (t_min_steps+t_steps+1)h from the patch walls and top.  The asserted
    direction is straight down; the per-cell minimum over the full direction
    set feeds the near-critical flags.  Steps start at 4h so the staircase
    noise of the lattice field stays under the 0.1 tolerance floor.
    """
    meta = d.meta
    if meta.get("family") != "lip_graph" or "M" not in meta:
        raise ValueError("unknown M: domain does not carry graph-patch metadata")
    m_lip = float(meta["M"])
    gamma_patch = float(meta["gamma"])
    spec = d.spec
    dim = spec.dim
    h = spec.h
    if rho is None:
        rho = 2 * h
    proxy = gamma_patch / 4.0 if m_lip == 0 else min(
        gamma_patch / 4.0, m_lip * gamma_patch * math.sqrt(dim - 1) / 4.0
    )
    if delta > proxy + 1e-12:
        raise ValueError(f"delta exceeds the band proxy {proxy:.4g}")
    if directions is None:
        directions = 16 if dim == 2 else 64

    gamma = exact_distance_transform(d, signed=True)
    band = d.inside & (gamma.value <= delta)
    margin = delta + rho + (t_min_steps + t_steps + 1) * h
    mesh = [spec.axis_centers(k) for k in range(dim)]
    keep = band.copy()
    for ax in range(dim - 1):
        ok = np.abs(mesh[ax]) < gamma_patch - margin
        shape = [1] * dim
        shape[ax] = -1
        keep &= ok.reshape(shape)
    top = meta["spec"].box_half_height if "spec" in meta else mesh[dim - 1].max()
    okv = mesh[dim - 1] < top - margin
    keep &= okv.reshape([1] * (dim - 1) + [-1])
    cells = np.argwhere(keep)
    if len(cells) == 0:
        raise ValueError("band is empty at this delta/margin")

    down = np.zeros(dim)
    down[dim - 1] = -1.0
    vertical, _ = _estimate_many(gamma, cells, down, rho, t_steps, t_min_steps)

    dirs = unit_directions(directions, dim)
    dirs = np.vstack([dirs, down])
    min_est = np.full(len(cells), np.inf)
    for v in dirs:
        est, _ = _estimate_many(gamma, cells, v, rho, t_steps, t_min_steps)
        min_est = np.minimum(min_est, est)

    c_theory = 1.0 / math.sqrt(1.0 + m_lip * m_lip)
    tol = 0.1 + 4.0 * h / delta
    bad = vertical > -c_theory + tol
    near = min_est > -0.5
    return BandScanReport(
        delta=float(delta),
        m_lip=m_lip,
        c_theory=c_theory,
        tol=tol,
        worst_estimate=float(min_est.max()),
        vertical_worst=float(vertical.max()),
        violating_cells=[tuple(int(v) for v in c) for c in cells[bad]],
        near_critical_cells=[tuple(int(v) for v in c) for c in cells[near]],
        n_cells_scanned=int(len(cells)),
    )


def homotopy_surrogate(d: GridDomain, deltas) -> list:
    """Component counts of the domain and its erosions: the computable shadow
    of the deformation argument (connectedness is a homotopy invariant)."""
    from .grid import erode

    base = connected_components(d)[1]
    out = []
    for t in deltas:
        t = float(t)
        if t != 0.0 and t < 2 * d.spec.h:
            raise ValueError("nonzero deltas must be at least 2h")
        n = connected_components(erode(d, t))[1] if t > 0 else base
        out.append((t, base, n, base == n))
    return out


def band_report_json(report: BandScanReport) -> str:
    return json.dumps(
        {
            "delta": report.delta,
            "M": report.m_lip,
            "c_theory": report.c_theory,
            "worst_estimate": report.worst_estimate,
            "n_violations": len(report.violating_cells),
            "violator_cells": [list(c) for c in report.violating_cells],
        },
        indent=2,
    )
