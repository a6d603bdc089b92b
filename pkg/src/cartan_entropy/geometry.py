"""Polytope volumes for polyhedral norm balls.

Exact route: vertex enumeration over active-constraint subsets, then a fan
of pyramids from the origin over the facets (facet membership read off the
known half-space representation rather than a recomputed hull).  Monte
Carlo route: seeded, chunked sampling whose result is independent of how
chunks are distributed over workers.  Closed forms used as cross-checks
live here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, islice, product
from math import comb, factorial, fsum, sqrt

import numpy as np

from .errors import (
    DegenerateFacet,
    DimensionTooLarge,
    InvalidInput,
    SpanDeficient,
    Unbounded,
)

_VERTEX_DEDUP_TOL = 1e-9
_FEAS_TOL = 1e-9
_Z99 = 2.5758293035489004  # two-sided 99% normal quantile


@dataclass(frozen=True)
class HPolytope:
    """Intersection of half-spaces  normal . x <= offset."""

    dimension: int
    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        normals = np.atleast_2d(np.asarray(self.normals, dtype=float))
        offsets = np.asarray(self.offsets, dtype=float).ravel()
        if normals.shape[0] != offsets.shape[0]:
            raise InvalidInput("one offset per normal required")
        if normals.shape[1] != self.dimension:
            raise InvalidInput("normal length disagrees with dimension")
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)

    @classmethod
    def from_pairs(cls, pairs, dimension: int | None = None) -> "HPolytope":
        normals = np.array([p[0] for p in pairs], dtype=float)
        offsets = np.array([p[1] for p in pairs], dtype=float)
        dim = dimension if dimension is not None else normals.shape[1]
        return cls(dim, normals, offsets)

    def contains(self, points: np.ndarray, tol: float = _FEAS_TOL) -> np.ndarray:
        pts = np.atleast_2d(points)
        return np.all(pts @ self.normals.T <= self.offsets + tol, axis=1)


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    method: str  # "exact" | "montecarlo"
    half_width: float = 0.0
    samples: int | None = None

    def agrees_with(self, other: float, sigmas: float = 3.0) -> bool:
        slack = sigmas / 3.0 * self.half_width if self.method == "montecarlo" else 0.0
        return abs(self.value - other) <= slack + 1e-9 * max(1.0, abs(other))


def hrep_abs_sum(functionals, radius: float) -> HPolytope:
    """Half-space form of {t : 1/2 sum_j |xi_j . t| <= radius} using all
    2^n sign combinations; redundant rows are allowed."""
    g = np.atleast_2d(np.asarray(functionals, dtype=float))
    n, k = g.shape
    if np.linalg.matrix_rank(g) < k:
        raise SpanDeficient("functionals do not span the space")
    signs = np.array(list(product((1.0, -1.0), repeat=n)))
    normals = signs @ g
    offsets = np.full(signs.shape[0], 2.0 * radius)
    return HPolytope(k, normals, offsets)


def _check_bounded(p: HPolytope):
    from scipy.optimize import linprog

    k = p.dimension
    for i in range(k):
        for sign in (1.0, -1.0):
            c = np.zeros(k)
            c[i] = -sign
            res = linprog(c, A_ub=p.normals, b_ub=np.zeros_like(p.offsets),
                          bounds=[(-1, 1)] * k, method="highs")
            if res.status == 0 and -res.fun > 1e-7:
                raise Unbounded("recession direction found")


def vertex_enumeration(p: HPolytope) -> np.ndarray:
    """All vertices of a bounded polytope of dimension <= 5; each vertex is
    the unique solution of some set of k active constraints."""
    k = p.dimension
    if k > 5:
        raise DimensionTooLarge(f"dimension {k} > 5")
    _check_bounded(p)
    normals, offsets = p.normals, p.offsets
    m = normals.shape[0]
    if k == 1:
        ups = offsets[normals[:, 0] > 0] / normals[normals[:, 0] > 0, 0]
        los = offsets[normals[:, 0] < 0] / normals[normals[:, 0] < 0, 0]
        if ups.size == 0 or los.size == 0:
            raise Unbounded("interval misses a side")
        hi, lo = float(ups.min()), float(los.max())
        return np.array([[lo], [hi]]) if hi - lo > _VERTEX_DEDUP_TOL \
            else np.array([[lo]])
    scale = 1.0 + float(np.max(np.abs(offsets)))
    row_norms = np.linalg.norm(normals, axis=1)
    verts: dict[tuple, np.ndarray] = {}
    combo_iter = combinations(range(m), k)
    while True:
        block = list(islice(combo_iter, 200_000))
        if not block:
            break
        idx = np.array(block)
        mats = normals[idx]
        dets = np.linalg.det(mats)
        norm_prod = np.prod(row_norms[idx], axis=1)
        good = np.abs(dets) > 1e-12 * np.maximum(norm_prod, 1e-300)
        if not np.any(good):
            continue
        sols = np.linalg.solve(mats[good], offsets[idx[good]][..., None])[..., 0]
        feas = np.all(sols @ normals.T <= offsets + _FEAS_TOL * scale, axis=1)
        for v in sols[feas]:
            key = tuple(np.round(v / _VERTEX_DEDUP_TOL).astype(np.int64))
            verts.setdefault(key, v)
    if not verts:
        raise Unbounded("no vertices found")
    out = np.array(sorted(verts.values(), key=lambda v: tuple(v)))
    return out


def _dedupe_halfspaces(p: HPolytope) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(p.normals, axis=1)
    keep = norms > 1e-14
    unit = p.normals[keep] / norms[keep, None]
    off = p.offsets[keep] / norms[keep]
    seen: dict[tuple, int] = {}
    out_n, out_o = [], []
    for u, o in zip(unit, off):
        key = tuple(np.round(u / 1e-9).astype(np.int64))
        if key in seen:
            j = seen[key]
            out_o[j] = min(out_o[j], o)
        else:
            seen[key] = len(out_n)
            out_n.append(u)
            out_o.append(o)
    return np.array(out_n), np.array(out_o)


def _facet_area(points: np.ndarray) -> float:
    """(k-1)-volume of a convex facet given by its vertices embedded in
    R^k; coordinates are taken in an orthonormal basis of the facet."""
    v0 = points[0]
    rel = points[1:] - v0
    if rel.shape[0] == 0:
        return 0.0
    # orthonormal basis of the affine hull; SVD is rank-revealing where
    # plain QR is not
    _, sing, vt = np.linalg.svd(rel, full_matrices=False)
    d = int((sing > 1e-10 * max(float(sing[0]), 1e-300)).sum())
    if d == 0:
        return 0.0
    basis = vt[:d].T
    proj = (points - v0) @ basis
    if d == 1:
        return float(proj.max() - proj.min())
    if d == 2:
        c = proj.mean(axis=0)
        ang = np.arctan2(proj[:, 1] - c[1], proj[:, 0] - c[0])
        order = np.argsort(ang)
        ring = proj[order]
        x, y = ring[:, 0], ring[:, 1]
        return float(abs(fsum(x * np.roll(y, -1) - np.roll(x, -1) * y)) / 2.0)
    from scipy.spatial import ConvexHull, QhullError

    try:
        return float(ConvexHull(proj).volume)
    except QhullError:
        return 0.0


def polytope_volume(vertices: np.ndarray, dimension: int,
                    hpoly: HPolytope | None = None) -> VolumeEstimate:
    """Exact volume by a fan of pyramids from the origin over the facets.
    Facet membership comes from the half-space representation when given
    (each facet is the set of vertices active on one irredundant
    half-space); without it the hull is recomputed."""
    pts = np.atleast_2d(np.asarray(vertices, dtype=float))
    k = dimension
    if k == 1:
        return VolumeEstimate(float(pts.max() - pts.min()), "exact")
    if pts.shape[0] < k + 1:
        raise DegenerateFacet("too few vertices for the dimension")
    if hpoly is None:
        from scipy.spatial import ConvexHull

        return VolumeEstimate(float(ConvexHull(pts).volume), "exact")
    unit_n, unit_o = _dedupe_halfspaces(hpoly)
    scale = 1.0 + float(np.max(np.abs(pts)))
    act = np.abs(pts @ unit_n.T - unit_o) <= 1e-8 * scale
    total = []
    for j in range(unit_n.shape[0]):
        members = pts[act[:, j]]
        if members.shape[0] < k:
            continue
        area = _facet_area(members)
        if area <= 0.0:
            continue
        total.append(unit_o[j] * area / k)
    value = fsum(total)
    if value <= 0.0:
        raise DegenerateFacet("no positive-volume facet fan")
    return VolumeEstimate(float(value), "exact")


_MC_CHUNK = 1 << 16


def mc_volume(membership, box, samples: int, seed: int) -> VolumeEstimate:
    """Monte Carlo volume of {x in box : membership(x)}.

    membership must be vectorized: it receives an (N, k) array and returns
    a boolean array.  Sampling is split into fixed-size chunks with seeds
    derived from (seed, chunk index), so the result does not depend on how
    chunks are assigned to workers.
    """
    lo = np.array([b[0] for b in box], dtype=float)
    hi = np.array([b[1] for b in box], dtype=float)
    if np.any(hi <= lo):
        raise InvalidInput("degenerate sampling box")
    k = lo.size
    box_vol = float(np.prod(hi - lo))
    hits = 0
    done = 0
    chunk_index = 0
    while done < samples:
        take = min(_MC_CHUNK, samples - done)
        rng = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,))))
        pts = rng.random((take, k)) * (hi - lo) + lo
        hits += int(np.count_nonzero(membership(pts)))
        done += take
        chunk_index += 1
    p = hits / samples
    half = _Z99 * sqrt(max(p * (1.0 - p), 1e-300) / samples) * box_vol
    return VolumeEstimate(p * box_vol, "montecarlo", half, samples)


def box_slab_volume(a) -> float:
    """Exact volume of [-1,1]^m intersected with {|a . x| <= 1}, by
    inclusion-exclusion over truncated powers; coordinates with weight
    below 1e-14 are factored out as free directions."""
    arr = np.abs(np.asarray(a, dtype=float).ravel())
    m = arr.size
    if m < 1:
        raise InvalidInput("weight vector must be nonempty")
    active = arr[arr >= 1e-14]
    k = active.size
    free = 2.0 ** (m - k)
    if k == 0:
        return 2.0 ** m
    total_weight = fsum(active)
    if total_weight <= 1.0:
        return 2.0 ** m
    t1 = (total_weight - 1.0) / 2.0
    t2 = (total_weight + 1.0) / 2.0
    terms = []
    for r in range(k + 1):
        for subset in combinations(range(k), r):
            s = fsum(active[i] for i in subset)
            hi = t2 - s
            lo = t1 - s
            val = (hi ** k if hi > 0 else 0.0) - (lo ** k if lo > 0 else 0.0)
            terms.append((-1.0) ** r * val)
    denom = factorial(k) * float(np.prod(active))
    return free * 2.0 ** k * fsum(terms) / denom


def l1_slice_volume(n: int) -> float:
    """(n-1)-volume of the radius-2 l^1 ball cut by the zero-sum
    hyperplane: sqrt(n) * C(2n-2, n-1) / (n-1)!."""
    if n < 2:
        raise InvalidInput("n must be at least 2")
    return sqrt(n) * comb(2 * n - 2, n - 1) / factorial(n - 1)
