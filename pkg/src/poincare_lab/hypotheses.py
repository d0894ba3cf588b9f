"""Executable geometric hypothesis checks on grid domains.

The checks cover: a uniform enclosing radius, the interior cone condition
(tested over a finite direction set with sub-grid sampling), connectedness of
the eroded domains, the boundary-layer measure curve with its small-delta
linear fit, the connected-core condition combining the last two, and the set
identities of offset tubes.

A cone-check miss means "fails at this resolution and direction count", never
a continuum disproof; the quantifiers are sampled, not decided.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .fitting import linear_fit
from .generators import ConeSpec
from .grid import (
    GridDomain,
    boundary_cells,
    connected_components,
    distance_to_set,
    erode,
    exact_distance_transform,
    measure,
)

__all__ = [
    "unit_directions",
    "check_h1",
    "check_h2",
    "largest_h2_aperture",
    "check_h3",
    "property_q_curve",
    "check_f3",
    "check_tube_annulus",
    "graph_strip_measure",
    "audit_domain",
    "report_to_json",
]


def unit_directions(n: int, dim: int) -> np.ndarray:
    """Deterministic, uniformly spread unit vectors: circle in 2D, Fibonacci
    sphere in 3D."""
    if dim == 2:
        ang = 2 * np.pi * np.arange(n) / n
        return np.column_stack([np.cos(ang), np.sin(ang)])
    i = np.arange(n)
    z = 1.0 - 2.0 * (i + 0.5) / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = i * np.pi * (3.0 - np.sqrt(5.0))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def check_h1(d: GridDomain) -> float:
    """Radius of a ball at the origin containing the domain (cells included)."""
    if d.is_empty():
        raise ValueError("domain is empty")
    coords = np.argwhere(d.inside)
    centers = np.asarray(d.spec.origin) + (coords + 0.5) * d.spec.h
    return float(np.linalg.norm(centers, axis=1).max() + d.spec.h / 2)


def _cone_template(cone: ConeSpec, direction, pitch, dim):
    """Sample points of the cone along `direction`, plus a nested coarse mask
    (every second index per axis) used for fast rejection."""
    v = np.asarray(direction, dtype=float)
    if dim == 2:
        w = np.array([-v[1], v[0]])
        basis = [w]
    else:
        helper = np.zeros(3)
        helper[np.argmin(np.abs(v))] = 1.0
        w1 = np.cross(v, helper)
        w1 /= np.linalg.norm(w1)
        w2 = np.cross(v, w1)
        basis = [w1, w2]
    tan = math.tan(cone.half_aperture)
    pts, coarse = [], []
    for j, s in enumerate(np.arange(pitch / 2, cone.height, pitch)):
        r = tan * s
        k_max = int(math.floor(r / pitch - 1e-12))
        lat = np.arange(-k_max, k_max + 1)
        if dim == 2:
            offs = s * v[None, :] + (lat * pitch)[:, None] * basis[0][None, :]
            cmask = (j % 2 == 0) & (np.abs(lat) % 2 == 0)
        else:
            a, b = np.meshgrid(lat, lat, indexing="ij")
            keep = (a * a + b * b) * pitch * pitch < r * r
            a, b = a[keep], b[keep]
            offs = (
                s * v[None, :]
                + (a * pitch)[:, None] * basis[0][None, :]
                + (b * pitch)[:, None] * basis[1][None, :]
            )
            cmask = (j % 2 == 0) & (np.abs(a) % 2 == 0) & (np.abs(b) % 2 == 0)
        pts.append(offs)
        coarse.append(np.broadcast_to(cmask, (len(offs),)).copy()
                      if np.ndim(cmask) else np.full(len(offs), cmask))
    if not pts:
        raise ValueError("cone under-resolved: no sample points at this pitch")
    return np.concatenate(pts), np.concatenate(coarse)


def _cells_admit(d, cell_centers, offsets):
    """For each cell center, True when every offset sample lands inside."""
    spec = d.spec
    n = np.asarray(spec.extents)
    ok = np.ones(len(cell_centers), dtype=bool)
    chunk = max(1, int(2e6 / max(len(offsets), 1)))
    for lo in range(0, len(cell_centers), chunk):
        pts = cell_centers[lo : lo + chunk, None, :] + offsets[None, :, :]
        idx = np.floor((pts - np.asarray(spec.origin)) / spec.h).astype(np.int64)
        good = np.ones(idx.shape[:2], dtype=bool)
        for k in range(spec.dim):
            good &= (idx[:, :, k] >= 0) & (idx[:, :, k] < n[k])
        idx_clipped = np.minimum(np.maximum(idx, 0), n - 1)
        good &= d.inside[tuple(idx_clipped[:, :, k] for k in range(spec.dim))]
        ok[lo : lo + chunk] = good.all(axis=1)
    return ok


def check_h2(d: GridDomain, cone: ConeSpec, directions: int | None = None) -> dict:
    """Interior cone condition over a finite orientation set.

    Every boundary cell must admit at least one orientation whose cone
    samples (pitch h/2, apex at the cell center) all lie inside the domain.
    Orientations are tried per cell in order of alignment with the inward
    normal estimated from the distance field.
    """
    spec = d.spec
    h = spec.h
    if cone.height < 4 * h:
        raise ValueError("cone under-resolved: height must be at least 4h")
    if directions is None:
        directions = 32 if spec.dim == 2 else 128
    dirs = unit_directions(directions, spec.dim)

    bmask = boundary_cells(d)
    cells = np.argwhere(bmask)
    if len(cells) == 0:
        return {"holds": True, "failing_cells": [], "n_boundary": 0,
                "aperture": cone.half_aperture, "height": cone.height,
                "directions": directions}
    centers = np.asarray(spec.origin) + (cells + 0.5) * h

    dist = exact_distance_transform(d).value
    grad = np.gradient(dist, h)
    normals = np.stack([g[bmask] for g in grad], axis=1)
    norms = np.linalg.norm(normals, axis=1)
    normals = normals / np.where(norms > 0, norms, 1.0)[:, None]

    pref = np.argsort(-(normals @ dirs.T), axis=1, kind="stable")
    unresolved = np.ones(len(cells), dtype=bool)
    templates = {}
    for rnd in range(directions):
        if not unresolved.any():
            break
        choice = pref[:, rnd]
        for dir_id in np.unique(choice[unresolved]):
            sel = np.flatnonzero(unresolved & (choice == dir_id))
            if dir_id not in templates:
                templates[dir_id] = _cone_template(cone, dirs[dir_id], h / 2, spec.dim)
            pts, coarse = templates[dir_id]
            passed = _cells_admit(d, centers[sel], pts[coarse])
            if passed.any():
                fine = _cells_admit(d, centers[sel[passed]], pts[~coarse])
                unresolved[sel[passed]] = ~fine
    failing = [tuple(int(v) for v in c) for c in cells[unresolved]]
    return {
        "holds": not unresolved.any(),
        "failing_cells": failing,
        "n_boundary": int(len(cells)),
        "aperture": cone.half_aperture,
        "height": cone.height,
        "directions": directions,
    }


def largest_h2_aperture(d: GridDomain, height: float, candidates,
                        directions: int | None = None) -> dict:
    """Scan candidate half-apertures (descending) and report the largest one
    for which the cone condition holds at this resolution."""
    last = None
    for ap in sorted(candidates, reverse=True):
        cone = ConeSpec((0.0,) * d.spec.dim, (0.0,) * (d.spec.dim - 1) + (1.0,),
                        ap, height)
        last = check_h2(d, cone, directions)
        if last["holds"]:
            return {"aperture": ap, "height": height, "result": last}
    return {"aperture": None, "height": height, "result": last}


def check_h3(d: GridDomain, deltas) -> dict:
    """Component counts of the eroded domains; delta0 is the largest tested
    value below which every erosion stayed connected (never extrapolated)."""
    deltas = [float(t) for t in deltas]
    if any(b <= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be strictly ascending")
    if deltas and deltas[0] < 2 * d.spec.h:
        raise ValueError("deltas must be at least 2h to be grid-meaningful")
    dist = exact_distance_transform(d).value
    counts = []
    for t in deltas:
        sub = GridDomain(d.spec, d.inside & (dist > t))
        counts.append(connected_components(sub)[1])
    delta0 = 0.0
    for t, c in zip(deltas, counts):
        if c != 1:
            break
        delta0 = t
    return {"delta0": delta0, "deltas": deltas, "counts": counts}


def property_q_curve(d: GridDomain, deltas, fit_window: float | None = None) -> dict:
    """Boundary-layer measures |domain minus eroded| per delta, with a linear
    fit over the small-delta prefix (default: delta <= diameter/20)."""
    deltas = [float(t) for t in deltas]
    if any(b <= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be strictly ascending")
    if d.is_empty():
        raise ValueError("domain is empty")
    dist = exact_distance_transform(d).value
    total = measure(d)
    vol = d.spec.cell_volume
    pairs = []
    for t in deltas:
        if t < 0:
            raise ValueError("deltas must be nonnegative")
        kept = int((d.inside & (dist > t)).sum())
        pairs.append((t, total - kept * vol))
    coords = np.argwhere(d.inside)
    diam = float(np.linalg.norm(coords.max(axis=0) - coords.min(axis=0) + 1) * d.spec.h)
    window = fit_window if fit_window is not None else diam / 20.0
    fit_pts = [(t, m) for t, m in pairs if t <= window + 1e-12]
    if len(fit_pts) < 2:
        raise ValueError("fewer than two deltas inside the fit window")
    slope, intercept, r2 = linear_fit([t for t, _ in fit_pts], [m for _, m in fit_pts])
    return {"pairs": pairs, "slope": slope, "intercept": intercept, "r2": r2,
            "fit_window": window}


def check_f3(d: GridDomain, eps: float, delta: float) -> dict:
    """Connected-core condition: U is the largest component of the eroded
    domain; holds when the leftover |domain minus U| is below eps."""
    if delta < 2 * d.spec.h:
        raise ValueError("delta must be at least 2h")
    eroded = erode(d, delta)
    labels, n = connected_components(eroded)
    if n == 0:
        u = GridDomain(d.spec, np.zeros_like(d.inside))
    else:
        sizes = np.bincount(labels.ravel())[1:]
        best = int(np.argmax(sizes)) + 1  # ties: first label in scan order
        u = GridDomain(d.spec, labels == best)
    leftover = measure(d) - measure(u)
    return {"holds": leftover < eps, "U": u, "leftover": leftover,
            "components": n}


def _subset_within_tolerance(part: np.ndarray, whole: np.ndarray, spec, cells=1.0):
    """True when every cell of `part` lies within `cells` lattice cells of
    `whole` (diagonal metric)."""
    if not part.any():
        return True
    if not whole.any():
        return False
    dist = distance_to_set(GridDomain(spec, whole)).value
    tol = cells * spec.h * math.sqrt(spec.dim) + 1e-12
    return bool(dist[part].max() <= tol)


def check_tube_annulus(k: GridDomain, r: float, delta: float) -> dict:
    """Set identities behind the tube construction, on the lattice.

    With U the closed (r - delta)-neighborhood of K: U must sit inside the
    delta-eroded open tube, and the shell (tube minus U) must coincide with
    the cells at distance in (0, delta) from U, both up to a one-cell band.
    """
    if not (0 < delta < r / 2):
        raise ValueError("delta must lie in the open interval (0, r/2)")
    if k.is_empty():
        raise ValueError("K must be nonempty")
    spec = k.spec
    dk = distance_to_set(k).value
    tube = dk < r
    rim = np.zeros_like(tube)
    for ax in range(tube.ndim):
        sl = [slice(None)] * tube.ndim
        sl[ax] = 0
        rim[tuple(sl)] = True
        sl[ax] = -1
        rim[tuple(sl)] = True
    if (tube & rim).any():
        raise ValueError("grid too small: tube reaches the lattice rim")
    u = dk <= r - delta
    shell = tube & ~u

    eroded_tube = erode(GridDomain(spec, tube), delta).inside
    inclusion = _subset_within_tolerance(u & ~eroded_tube, eroded_tube, spec)

    du = distance_to_set(GridDomain(spec, u)).value
    shell_by_u = (du > 0) & (du < delta)
    ident_a = _subset_within_tolerance(shell & ~shell_by_u, shell_by_u, spec)
    ident_b = _subset_within_tolerance(shell_by_u & ~shell, shell, spec)
    return {
        "inclusion_holds": inclusion,
        "annulus_identity_holds": ident_a and ident_b,
        "shell_cells": int(shell.sum()),
        "shell_by_u_cells": int(shell_by_u.sum()),
    }


def graph_strip_measure(d: GridDomain, delta: float) -> dict:
    """Per-patch boundary-layer certificate for a single-patch graph domain.

    Measures the strip of vertical thickness M*delta above the graph over the
    central sub-patch of base measure gamma^(dim-1), and compares it to
    gamma^(dim-1) * M * delta * (1 + 10h).  The vertical strip is the quantity
    the layer estimate actually controls; the Euclidean-distance band exceeds
    this bound by sqrt(1 + M^2) already in the continuum.
    """
    if d.meta.get("family") != "lip_graph":
        raise ValueError("domain does not carry graph-patch metadata")
    m_lip = d.meta["M"]
    gamma = d.meta["gamma"]
    phi = d.meta["phi_samples"]
    spec = d.spec
    h = spec.h
    dim = spec.dim
    y = spec.axis_centers(dim - 1)
    if dim == 2:
        x = spec.axis_centers(0)
        half = np.abs(x) < gamma / 2
        strip = d.inside & half[:, None] & (y[None, :] <= phi[:, None] + m_lip * delta)
    else:
        x0 = spec.axis_centers(0)
        x1 = spec.axis_centers(1)
        half = (np.abs(x0) < gamma / 2)[:, None] & (np.abs(x1) < gamma / 2)[None, :]
        strip = d.inside & half[:, :, None] & (
            y[None, None, :] <= phi[:, :, None] + m_lip * delta
        )
    measured = float(strip.sum()) * spec.cell_volume
    bound = gamma ** (dim - 1) * m_lip * delta * (1.0 + 10.0 * h)
    return {"measured": measured, "bound": bound, "holds": measured <= bound}


def audit_domain(d: GridDomain, cone: ConeSpec, h3_deltas, q_deltas,
                 directions: int | None = None,
                 q_fit_window: float | None = None) -> dict:
    """Full hypothesis audit with the stable report field names."""
    r = check_h1(d)
    h2 = check_h2(d, cone, directions)
    h3 = check_h3(d, h3_deltas)
    q = property_q_curve(d, q_deltas, fit_window=q_fit_window)
    return {
        "h1": {"R": r},
        "h2": {"holds": h2["holds"], "aperture": h2["aperture"],
               "height": h2["height"], "fail_count": len(h2["failing_cells"])},
        "h3": {"delta0": h3["delta0"], "counts": h3["counts"]},
        "q": {"pairs": q["pairs"], "slope": q["slope"], "r2": q["r2"]},
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False)
