"""Analytic constructors for the domain families and test functions.

Every generator rasterizes a documented analytic set to a GridDomain by
cell-center sampling, at a caller-chosen resolution.  A small registry makes
the zoo addressable by name from the command line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import GridDomain, GridSpec, ScalarField, connected_components, dilate

__all__ = [
    "ConeSpec",
    "LipGraphSpec",
    "DumbbellSpec",
    "make_dumbbell",
    "make_u_eps",
    "make_lip_graph_domain",
    "make_tube",
    "make_named",
    "named_families",
    "rasterize_polyline",
]


@dataclass(frozen=True)
class ConeSpec:
    """Open finite cone: apex, unit axis, half-aperture in (0, pi/2), height."""

    apex: tuple
    axis: tuple
    half_aperture: float
    height: float

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        norm = np.linalg.norm(axis)
        if norm == 0:
            raise ValueError("axis must be nonzero")
        object.__setattr__(self, "axis", tuple(axis / norm))
        object.__setattr__(self, "apex", tuple(float(x) for x in self.apex))
        if not 0 < self.half_aperture < np.pi / 2:
            raise ValueError("half_aperture must lie in (0, pi/2)")
        if self.height <= 0:
            raise ValueError("height must be positive")

    def contains(self, points, apex=None, axis=None):
        """Strict membership test; apex/axis may be overridden per call."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        a = np.asarray(self.apex if apex is None else apex, dtype=float)
        v = np.asarray(self.axis if axis is None else axis, dtype=float)
        v = v / np.linalg.norm(v)
        rel = pts - a
        s = rel @ v
        perp = rel - np.outer(s, v)
        lateral = np.linalg.norm(perp, axis=1)
        return (s > 0) & (s < self.height) & (lateral < np.tan(self.half_aperture) * s)

    def volume(self, dim):
        """Measure of the cone in the given dimension."""
        t = math.tan(self.half_aperture)
        if dim == 2:
            return t * self.height**2
        return math.pi / 3.0 * t * t * self.height**3


@dataclass
class LipGraphSpec:
    """Single graph patch: boundary is y_N = phi(x_hat) over a centered box.

    ``gamma`` is the patch half-width per horizontal axis.  ``phi`` may be a
    callable or an array aligned with the horizontal cell centers; samples are
    checked against the declared Lipschitz bound M (with one-cell slack).
    ``box_half_height`` defaults to max(M * gamma * sqrt(dim-1), gamma) so the
    flat case M = 0 still yields a usable box.
    """

    M: float
    gamma: float
    phi: object
    dim: int = 2
    box_half_height: float | None = None

    def __post_init__(self):
        if self.M < 0 or self.gamma <= 0:
            raise ValueError("need M >= 0 and gamma > 0")
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        if self.box_half_height is None:
            self.box_half_height = max(
                self.M * self.gamma * math.sqrt(self.dim - 1), self.gamma
            )


def _check_lipschitz(xhat_axes, phi_vals, M, h):
    """All-pairs check in 2D, per-axis adjacent + random pairs in 3D."""
    if phi_vals.ndim == 1:
        x = xhat_axes[0]
        dif = np.abs(phi_vals[:, None] - phi_vals[None, :])
        dx = np.abs(x[:, None] - x[None, :])
        if (dif > M * dx + h + 1e-12).any():
            raise ValueError("not in Lip(M,gamma): sampled slope exceeds M")
    else:
        for ax in range(2):
            dif = np.abs(np.diff(phi_vals, axis=ax))
            if (dif > M * h + h + 1e-12).any():
                raise ValueError("not in Lip(M,gamma): sampled slope exceeds M")
        rng = np.random.default_rng(0)
        flat = phi_vals.ravel()
        xs = np.stack(np.meshgrid(*xhat_axes, indexing="ij"), axis=-1).reshape(-1, 2)
        k = min(20000, flat.size**2)
        i = rng.integers(0, flat.size, k)
        j = rng.integers(0, flat.size, k)
        dif = np.abs(flat[i] - flat[j])
        dx = np.linalg.norm(xs[i] - xs[j], axis=1)
        if (dif > M * dx + h + 1e-12).any():
            raise ValueError("not in Lip(M,gamma): sampled slope exceeds M")


def make_lip_graph_domain(s: LipGraphSpec, h: float) -> GridDomain:
    """Rasterized epigraph {y_N > phi(x_hat)} inside the patch box."""
    half = (s.gamma,) * (s.dim - 1) + (s.box_half_height,)
    spec = GridSpec.symmetric(half, h, pad=2)
    xhat_axes = [spec.axis_centers(k) for k in range(s.dim - 1)]
    if callable(s.phi):
        if s.dim == 2:
            phi_vals = np.asarray(s.phi(xhat_axes[0]), dtype=float)
        else:
            gx, gy = np.meshgrid(*xhat_axes, indexing="ij")
            phi_vals = np.asarray(s.phi(gx, gy), dtype=float)
    else:
        phi_vals = np.asarray(s.phi, dtype=float)
        want = tuple(len(a) for a in xhat_axes)
        if phi_vals.shape != (want if len(want) > 1 else (want[0],)):
            raise ValueError("sampled phi shape does not match the patch grid")
    y = spec.axis_centers(s.dim - 1)
    in_patch = [np.abs(a) < s.gamma for a in xhat_axes]
    # the declared bounds only concern samples inside the patch; pad columns
    # never enter the domain
    patch_idx = np.ix_(*in_patch) if s.dim == 3 else (in_patch[0],)
    patch_phi = phi_vals[patch_idx if s.dim == 3 else in_patch[0]]
    patch_axes = [a[m] for a, m in zip(xhat_axes, in_patch)]
    _check_lipschitz(patch_axes, patch_phi, s.M, h)
    if np.abs(patch_phi).max() >= s.box_half_height:
        raise ValueError("graph does not fit the patch box")
    if s.dim == 2:
        inside = (
            in_patch[0][:, None]
            & (y[None, :] > phi_vals[:, None])
            & (np.abs(y)[None, :] < s.box_half_height)
        )
    else:
        inside = (
            (in_patch[0][:, None, None] & in_patch[1][None, :, None])
            & (y[None, None, :] > phi_vals[:, :, None])
            & (np.abs(y)[None, None, :] < s.box_half_height)
        )
    meta = {"family": "lip_graph", "spec": s, "phi_samples": phi_vals,
            "M": s.M, "gamma": s.gamma}
    return GridDomain(spec, inside, meta)


@dataclass(frozen=True)
class DumbbellSpec:
    """Two opposed unit cones of half-aperture 45 degrees, shifted so they
    overlap in a neck of half-height eps.  Only dim 3 is supported: in the
    plane the neck energy does not shrink with eps and the counterexample
    degenerates."""

    eps: float
    dim: int = 3

    def __post_init__(self):
        if self.dim != 3:
            raise ValueError("dumbbell family is defined for dim 3 only")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")

    def cones(self):
        lower = ConeSpec((0.0, 0.0, -self.eps), (0.0, 0.0, 1.0), np.pi / 4, 1.0)
        upper = ConeSpec((0.0, 0.0, self.eps), (0.0, 0.0, -1.0), np.pi / 4, 1.0)
        return lower, upper


def make_dumbbell(s: DumbbellSpec, h: float) -> GridDomain:
    """Union of the two shifted cones; the neck must span >= 4 cells."""
    if h > s.eps / 4 + 1e-12:
        raise ValueError("neck under-resolved: need h <= eps/4")
    eps = s.eps
    spec = GridSpec.symmetric((1.0, 1.0, 1.0 - eps), h, pad=2)
    x, y, z = spec.center_mesh()
    rho2 = x * x + y * y  # (nx, ny, 1)
    zc = z.ravel()
    r_lower = np.where((zc > -eps) & (zc < 1.0 - eps), zc + eps, 0.0)
    r_upper = np.where((zc > eps - 1.0) & (zc < eps), eps - zc, 0.0)
    radius = np.maximum(r_lower, r_upper)
    inside = rho2 < (radius**2)[None, None, :]
    meta = {"family": "dumbbell", "eps": eps}
    return GridDomain(spec, inside, meta)


def make_u_eps(omega: GridDomain, eps: float) -> ScalarField:
    """Ramp witness: -1 below the neck, z/eps across it, +1 above."""
    if omega.meta.get("family") != "dumbbell" or not np.isclose(
        omega.meta.get("eps", np.nan), eps
    ):
        raise ValueError("domain was not generated as a dumbbell with this eps")
    return ScalarField.from_function(
        omega, lambda x, y, z: np.clip(z / eps, -1.0, 1.0)
    )


def make_tube(k_cells: GridDomain, r: float) -> GridDomain:
    """Open r-neighborhood of a connected seed set."""
    if r <= 0:
        raise ValueError("r must be positive")
    _, n = connected_components(k_cells)
    if n != 1:
        raise ValueError("K must be connected")
    out = dilate(k_cells, r)
    out.meta.update({"family": "tube", "r": r})
    return out


def rasterize_polyline(spec: GridSpec, points) -> GridDomain:
    """Cells traversed by a polyline, bridged to a face-connected chain."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != spec.dim:
        raise ValueError("points must be (m, dim)")
    inside = np.zeros(spec.extents, dtype=bool)
    cells = []
    for a, b in zip(pts[:-1], pts[1:]):
        n_samp = max(2, int(np.ceil(np.linalg.norm(b - a) / (spec.h / 8))) + 1)
        for t in np.linspace(0.0, 1.0, n_samp):
            cells.append(spec.point_to_index([a * (1 - t) + b * t])[0])
    if len(pts) == 1:
        cells.append(spec.point_to_index([pts[0]])[0])
    prev = None
    for c in cells:
        c = tuple(int(v) for v in c)
        if any(v < 0 or v >= n for v, n in zip(c, spec.extents)):
            raise ValueError("polyline leaves the grid")
        if prev is not None and prev != c:
            # bridge multi-axis steps one axis at a time (deterministic order)
            cur = list(prev)
            for ax in range(spec.dim):
                while cur[ax] != c[ax]:
                    cur[ax] += 1 if c[ax] > cur[ax] else -1
                    inside[tuple(cur)] = True
        inside[c] = True
        prev = c
    return GridDomain(spec, inside, {"family": "polyline"})


# ---------------------------------------------------------------------------
# Named zoo
# ---------------------------------------------------------------------------


def _square(h, side=1.0, pad=2):
    spec = GridSpec.cover((0.0, 0.0), (side, side), h, pad=pad)
    x, y = spec.center_mesh()
    inside = (x > 0) & (x < side) & (y > 0) & (y < side)
    return GridDomain(spec, np.broadcast_to(inside, spec.extents).copy(),
                      {"family": "square", "side": side})


def _rectangle(h, width=2.0, height=1.0, pad=2):
    spec = GridSpec.cover((0.0, 0.0), (width, height), h, pad=pad)
    x, y = spec.center_mesh()
    inside = (x > 0) & (x < width) & (y > 0) & (y < height)
    return GridDomain(spec, np.broadcast_to(inside, spec.extents).copy(),
                      {"family": "rectangle", "width": width, "height": height})


def _ball(h, radius=1.0, pad=3):
    spec = GridSpec.symmetric((radius, radius), h, pad=pad)
    x, y = spec.center_mesh()
    return GridDomain(spec, x * x + y * y < radius * radius,
                      {"family": "ball", "radius": radius})


def _ball_minus_segment(h, radius=1.0, slit_half_length=0.5, pad=3):
    # interior wall along y = 0; the lattice straddles it, so the rasterized
    # slit is the two adjacent cell rows
    spec = GridSpec.symmetric((radius, radius), h, pad=pad)
    x, y = spec.center_mesh()
    ball = x * x + y * y < radius * radius
    slit = (np.abs(y) < h) & (np.abs(x) < slit_half_length)
    return GridDomain(spec, ball & ~slit,
                      {"family": "ball_minus_segment", "radius": radius,
                       "slit_half_length": slit_half_length})


def _cusp(h, exponent=2.0, pad=2):
    # outward power cusp at the origin, with a body box so the domain has bulk
    spec = GridSpec.cover((0.0, -0.5), (1.5, 0.5), h, pad=pad)
    x, y = spec.center_mesh()
    horn = (x > 0) & (x < 1.0) & (np.abs(y) < x**exponent)
    body = (x >= 1.0) & (x < 1.5) & (np.abs(y) < 0.5)
    return GridDomain(spec, horn | body, {"family": "cusp", "exponent": exponent})


def _point_seed(h, at=(0.0, 0.0), pad_length=0.45):
    spec = GridSpec.cover(
        (at[0] - pad_length, at[1] - pad_length),
        (at[0] + pad_length, at[1] + pad_length), h, pad=2)
    inside = np.zeros(spec.extents, dtype=bool)
    inside[tuple(spec.point_to_index([at])[0])] = True
    return GridDomain(spec, inside, {"family": "point"})


def _segment_seed(h, length=1.0, pad_length=0.45):
    spec = GridSpec.cover((-pad_length, -pad_length),
                          (length + pad_length, pad_length), h, pad=2)
    return rasterize_polyline(spec, [(0.0, 0.0), (length, 0.0)])


def _l_polyline_seed(h, leg=0.5, pad_length=0.45):
    spec = GridSpec.cover((-pad_length, -pad_length),
                          (leg + pad_length, leg + pad_length), h, pad=2)
    return rasterize_polyline(spec, [(0.0, 0.0), (leg, 0.0), (leg, leg)])


_REGISTRY = {
    "square": (_square, "open unit square (param: side)"),
    "rectangle": (_rectangle, "open axis-aligned rectangle (params: width, height)"),
    "ball": (_ball, "open disk (param: radius)"),
    "ball_minus_segment": (
        _ball_minus_segment,
        "disk with an interior slit removed (params: radius, slit_half_length)",
    ),
    "cusp": (_cusp, "power cusp horn glued to a box (param: exponent)"),
    "point": (_point_seed, "single-cell seed for tube building (param: pad_length)"),
    "segment": (_segment_seed, "segment seed for tube building (params: length, pad_length)"),
    "l_polyline": (_l_polyline_seed, "L-shaped polyline seed (params: leg, pad_length)"),
}


def named_families():
    """Registered generator names with one-line descriptions."""
    return {name: doc for name, (_, doc) in _REGISTRY.items()}


def make_named(name: str, h: float, **params) -> GridDomain:
    """Construct a zoo domain by name; unknown names list the registry."""
    if name not in _REGISTRY:
        raise ValueError(
            f"unknown domain {name!r}; known: {', '.join(sorted(_REGISTRY))}"
        )
    builder, _ = _REGISTRY[name]
    return builder(h, **params)
