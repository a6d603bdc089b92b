"""Fried average entropy and its variants for a Lyapunov matrix.

Everything here consumes the n x k Lyapunov matrix X.  The average
entropy has a closed form R * 2^(n-1) / C(2n-2, n-1) where R is the
common absolute value of the maximal minors of X; the definitional route
goes through the volume of the unit ball of h(t) = 1/2 sum_j |chi_j(t)|.
Both are computed and must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb, factorial, log, sqrt, e as _E

import numpy as np

from .cartan import ActionCase, classify, entropy_of_element
from .errors import CaseOError, IdentityViolation, InvalidInput, RatioOutOfRange
from .geometry import (
    VolumeEstimate,
    hrep_abs_sum,
    mc_volume,
    polytope_volume,
    vertex_enumeration,
)

# c = half the logarithm of the golden ratio: unit Mahler-measure floor
GROWTH_C = 0.5 * log((1.0 + sqrt(5.0)) / 2.0)

_CROSS_CHECK_TOL = 1e-9
_MC_SAMPLES = 1_000_000
_MC_SEED = 94_111
_RANK_DIRECTIONS = 512
_RANK_SEED = 52_889
_ENUM_CAP = 20_000
_GRID_CAP = 50_000_000


@dataclass(frozen=True)
class OneEntropyResult:
    value: float
    minimizer: tuple[int, ...]

    def as_dict(self) -> dict:
        return {"value": self.value, "minimizer": list(self.minimizer)}


@dataclass(frozen=True)
class LEntropyResult:
    ell: int
    upper_estimate: float
    lower_bound: float
    best_basis: tuple[tuple[int, ...], ...]
    searched: int
    effective_bound: int

    def as_dict(self) -> dict:
        return {
            "ell": self.ell,
            "upperEstimate": self.upper_estimate,
            "lowerBound": self.lower_bound,
            "bestBasis": [list(r) for r in self.best_basis],
            "searched": self.searched,
            "effectiveBound": self.effective_bound,
        }


@dataclass(frozen=True)
class FriedReport:
    n: int
    case: str
    regulator: float | None
    vol_closed: float | None
    vol_geometric: VolumeEstimate | None
    fried_entropy: float
    one_entropy: OneEntropyResult | None
    l_entropies: tuple[LEntropyResult, ...] = ()
    zimmert_lb: dict | None = None

    def as_dict(self) -> dict:
        geo = None
        if self.vol_geometric is not None:
            geo = {
                "value": self.vol_geometric.value,
                "method": self.vol_geometric.method,
                "halfWidth": self.vol_geometric.half_width,
                "samples": self.vol_geometric.samples,
            }
        return {
            "n": self.n,
            "case": self.case,
            "regulator": self.regulator,
            "volClosed": self.vol_closed,
            "volGeometric": geo,
            "friedEntropy": self.fried_entropy,
            "oneEntropy": None if self.one_entropy is None
            else self.one_entropy.as_dict(),
            "lEntropies": [r.as_dict() for r in self.l_entropies],
            "zimmertLB": self.zimmert_lb,
        }


def fried_from_volume(k: int, vol: float) -> float:
    """h* = 2^k / (k! * vol of the unit entropy ball)."""
    if vol <= 0:
        raise InvalidInput("ball volume must be positive")
    return 2.0 ** k / (factorial(k) * vol)


def regulator_of(x: np.ndarray) -> float:
    """Common absolute value of the n maximal minors of X (they agree up
    to sign because the columns sum to zero)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n = x.shape[0]
    if x.shape[1] != n - 1:
        raise InvalidInput(
            f"regulator needs an n x (n-1) profile, got {n} x {x.shape[1]}")
    minors = [abs(float(np.linalg.det(np.delete(x, j, axis=0))))
              for j in range(n)]
    spread = max(minors) - min(minors)
    if spread > 1e-9 * max(1.0, max(minors)):
        raise IdentityViolation(f"maximal minors disagree: {minors}")
    return float(np.mean(minors))


def _ball_box(x: np.ndarray, radius: float) -> np.ndarray:
    """Per-coordinate extents of {t : 1/2 sum|chi_j(t)| <= radius} via
    linear programs in (t, slack) variables."""
    from scipy.optimize import linprog

    n, k = x.shape
    rows = []
    for j in range(n):
        rows.append(np.concatenate([x[j], -np.eye(n)[j]]))
        rows.append(np.concatenate([-x[j], -np.eye(n)[j]]))
    rows.append(np.concatenate([np.zeros(k), np.ones(n)]))
    a_ub = np.array(rows)
    b_ub = np.concatenate([np.zeros(2 * n), [2.0 * radius]])
    bounds = [(None, None)] * k + [(0, None)] * n
    ext = np.empty(k)
    for i in range(k):
        c = np.zeros(k + n)
        c[i] = -1.0
        res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if res.status != 0:
            raise InvalidInput("entropy ball is unbounded; not case P")
        ext[i] = -res.fun
    return ext


def entropy_ball_volume(x: np.ndarray, mc_samples: int = _MC_SAMPLES,
                        seed: int = _MC_SEED) -> tuple[float, VolumeEstimate]:
    """Closed-form and measured volume of {t : h(t) <= 1}; the closed
    form is C(2n-2, n-1) / (R * (n-1)!).  Exact geometry up to n = 5,
    Monte Carlo beyond."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n, k = x.shape
    if classify(x) is ActionCase.O:
        raise CaseOError("entropy ball has infinite volume in case O")
    r = regulator_of(x)
    closed = comb(2 * n - 2, n - 1) / (r * factorial(n - 1))
    poly = hrep_abs_sum(x, 1.0)
    if n <= 5:
        verts = vertex_enumeration(poly)
        geometric = polytope_volume(verts, k, poly)
    else:
        ext = _ball_box(x, 1.0) * (1.0 + 1e-9) + 1e-12
        box = [(-float(t), float(t)) for t in ext]
        geometric = mc_volume(poly.contains, box, mc_samples, seed)
    return closed, geometric


def fried_average_entropy(x: np.ndarray) -> float:
    """Closed form R * 2^(n-1) / C(2n-2, n-1); zero in case O.  The value
    is cross-checked through the definitional volume route."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n, k = x.shape
    if classify(x) is ActionCase.O:
        return 0.0
    r = regulator_of(x)
    closed = r * 2.0 ** (n - 1) / comb(2 * n - 2, n - 1)
    vol_closed = comb(2 * n - 2, n - 1) / (r * factorial(n - 1))
    other = fried_from_volume(n - 1, vol_closed)
    if abs(other - closed) > _CROSS_CHECK_TOL * max(1.0, abs(closed)):
        raise IdentityViolation(
            f"volume route {other} disagrees with closed form {closed}")
    return closed


def one_entropy(x: np.ndarray, search_radius: float | None = None
                ) -> OneEntropyResult:
    """Exact minimum of h over nonzero integer vectors: a seed box gives
    a candidate radius, then every lattice point inside the polyhedral
    ball of that radius is enumerated."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n, k = x.shape
    if classify(x) is ActionCase.O:
        raise CaseOError("the entropy minimum is 0 along the common kernel")
    if search_radius is None:
        seed_pts = np.array(list(product(range(-3, 4), repeat=k)))
        seed_pts = seed_pts[np.any(seed_pts != 0, axis=1)]
        h0 = float(np.abs(seed_pts @ x.T).sum(axis=1).min()) / 2.0
    else:
        h0 = float(search_radius)
    ext = np.floor(_ball_box(x, h0) * (1.0 + 1e-9) + 1e-9).astype(int)
    total = int(np.prod(2 * ext.astype(object) + 1))
    if total > _GRID_CAP:
        raise InvalidInput(
            f"{total} lattice points to scan; pass a smaller searchRadius")
    axes = [np.arange(-int(t), int(t) + 1) for t in ext]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    pts = pts[np.any(pts != 0, axis=1)]
    best_val = np.inf
    best: list[tuple[int, ...]] = []
    for start in range(0, pts.shape[0], 1_000_000):
        chunk = pts[start:start + 1_000_000]
        vals = 0.5 * np.abs(chunk @ x.T).sum(axis=1)
        lo = float(vals.min())
        if lo < best_val - 1e-12:
            best_val = lo
            best = []
        near = chunk[vals <= best_val + 1e-12]
        best.extend(tuple(int(v) for v in row) for row in near)
    def canonical(m):
        lead = next(v for v in m if v != 0)
        return tuple(-v for v in m) if lead < 0 else m
    winner = min(canonical(m) for m in best)
    return OneEntropyResult(entropy_of_element(x, winner), winner)


def _hnf_count(k: int, ell: int, bound: int) -> int:
    total = 0
    for pivots in combinations(range(k), ell):
        free = sum(1 for i, c in enumerate(pivots)
                   for col in range(c + 1, k) if col not in pivots)
        for pvals in product(range(1, bound + 1), repeat=ell):
            above = 1
            for j, p in enumerate(pvals):
                above *= p ** j
            total += above * (2 * bound + 1) ** free
    return total


def _primitive_bases(k: int, ell: int, bound: int):
    """Row-Hermite-form bases of rank-ell sublattices of Z^k with entries
    bounded by `bound`; primitive ones only (unit gcd of maximal minors)."""
    for pivots in combinations(range(k), ell):
        free_slots = [(i, col) for i, c in enumerate(pivots)
                      for col in range(c + 1, k) if col not in pivots]
        above_slots = [(r, j) for j in range(ell) for r in range(j)]
        for pvals in product(range(1, bound + 1), repeat=ell):
            above_ranges = [range(pvals[j]) for _, j in above_slots]
            for above in product(*above_ranges):
                for free in product(range(-bound, bound + 1),
                                    repeat=len(free_slots)):
                    h = [[0] * k for _ in range(ell)]
                    for i, c in enumerate(pivots):
                        h[i][c] = pvals[i]
                    for (r, j), v in zip(above_slots, above):
                        h[r][pivots[j]] = v
                    for (i, col), v in zip(free_slots, free):
                        h[i][col] = v
                    if _is_primitive(h):
                        yield h


def _is_primitive(h: list[list[int]]) -> bool:
    ell = len(h)
    k = len(h[0])
    g = 0
    for cols in combinations(range(k), ell):
        sub = [[h[r][c] for c in cols] for r in range(ell)]
        g = _gcd_int(g, abs(_det_small(sub)))
        if g == 1:
            return True
    return g == 1


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _det_small(m: list[list[int]]) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    det = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        det += (-1) ** j * m[0][j] * _det_small(minor)
    return det


def _sublattice_entropy_exact(x: np.ndarray, basis: np.ndarray) -> float:
    """h* of the restriction to the sublattice with the given row basis:
    2^ell / (ell! * vol of the pulled-back unit ball)."""
    ell = basis.shape[0]
    g = x @ basis.T
    poly = hrep_abs_sum(g, 1.0)
    if ell <= 5:
        verts = vertex_enumeration(poly)
        vol = polytope_volume(verts, ell, poly).value
    else:
        ext = _ball_box(g, 1.0) * (1.0 + 1e-9) + 1e-12
        box = [(-float(t), float(t)) for t in ext]
        vol = mc_volume(poly.contains, box, _MC_SAMPLES, _MC_SEED).value
    return fried_from_volume(ell, vol)


def l_entropy_lower_bound(n: int, ell: int) -> float:
    """c^ell * n^ell / ell! with c the golden-ratio constant."""
    return GROWTH_C ** ell * n ** ell / factorial(ell)


def l_entropy_search(x: np.ndarray, ell: int,
                     basis_bound: int = 3) -> LEntropyResult:
    """Best h* over primitive rank-ell sublattices with Hermite-form
    basis entries up to basis_bound (reduced automatically if the space
    is too large); the infimum itself is not certified, so the result is
    an interval [lowerBound, upperEstimate]."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n, k = x.shape
    if not 1 <= ell <= k:
        raise InvalidInput(f"ell must lie in [1, {k}]")
    lower = l_entropy_lower_bound(n, ell)
    if ell == k:
        identity = tuple(tuple(int(i == j) for j in range(k))
                         for i in range(k))
        return LEntropyResult(ell, fried_average_entropy(x), lower,
                              identity, 1, basis_bound)
    if ell == 1:
        one = one_entropy(x)
        return LEntropyResult(ell, one.value, lower, (one.minimizer,),
                              0, basis_bound)
    bound = basis_bound
    while bound > 1 and _hnf_count(k, ell, bound) > _ENUM_CAP:
        bound -= 1
    bases = [np.array(h) for h in _primitive_bases(k, ell, bound)]
    if not bases:
        raise InvalidInput("no primitive sublattice in the search box")
    scores = _rank_by_radial_volume(x, bases, ell)
    width = {2: 16, 3: 10}.get(ell, 4)
    top = np.argsort(scores)[::-1][:width]
    best_val, best_basis = np.inf, None
    for idx in top:
        val = _sublattice_entropy_exact(x, bases[idx])
        if val < best_val:
            best_val, best_basis = val, bases[idx]
    return LEntropyResult(
        ell, float(best_val), lower,
        tuple(tuple(int(v) for v in row) for row in best_basis),
        len(bases), bound)


def _rank_by_radial_volume(x: np.ndarray, bases: list[np.ndarray],
                           ell: int) -> np.ndarray:
    """Relative ball volumes by a common-directions radial estimate:
    vol ~ mean over fixed unit directions of (2 / ||G theta||_1)^ell.
    Shared directions make the ranking stable even at modest sample
    counts."""
    rng = np.random.Generator(np.random.PCG64(_RANK_SEED))
    theta = rng.standard_normal((_RANK_DIRECTIONS, ell))
    theta /= np.linalg.norm(theta, axis=1, keepdims=True)
    scores = np.empty(len(bases))
    for start in range(0, len(bases), 2048):
        block = bases[start:start + 2048]
        gs = np.stack([x @ b.T for b in block])  # (M, n, ell)
        norms = np.abs(np.einsum("dl,mnl->mdn", theta, gs)).sum(axis=2)
        scores[start:start + len(block)] = ((2.0 / norms) ** ell).mean(axis=1)
    return scores


def exp_growth_bound(n: int, ell: int) -> float:
    """Exponent floor rho*log(c) - rho*log(rho) + rho at rho = ell/n,
    valid on 0 < rho < e*c."""
    rho = ell / n
    if not 0.0 < rho < _E * GROWTH_C:
        raise RatioOutOfRange(
            f"ell/n = {rho} outside (0, {_E * GROWTH_C:.5f})")
    return rho * log(GROWTH_C) - rho * log(rho) + rho


def full_report(x: np.ndarray, l_values=None, basis_bound: int = 3,
                mc_samples: int = _MC_SAMPLES, seed: int = _MC_SEED,
                zimmert_s: float = 0.35) -> FriedReport:
    """Everything at once for one Lyapunov matrix; case O collapses to a
    report of zeros."""
    from .bounds import zimmert_fried_lb

    x = np.atleast_2d(np.asarray(x, dtype=float))
    n, k = x.shape
    if classify(x) is ActionCase.O:
        return FriedReport(n=n, case="O", regulator=None, vol_closed=None,
                           vol_geometric=None, fried_entropy=0.0,
                           one_entropy=None)
    vol_closed, vol_geo = entropy_ball_volume(x, mc_samples, seed)
    h_star = fried_average_entropy(x)
    one = one_entropy(x)
    if l_values is None:
        l_values = range(1, k + 1)
    l_results = tuple(l_entropy_search(x, ell, basis_bound)
                      for ell in l_values)
    # Zimmert bound requires degree >= 3; n = 2 reports are still useful.
    zim = None
    if n >= 3:
        z = zimmert_fried_lb(n, zimmert_s)
        zim = {"s": zimmert_s, "value": z, "satisfied": h_star > z}
    report = FriedReport(
        n=n, case="P", regulator=regulator_of(x), vol_closed=vol_closed,
        vol_geometric=vol_geo, fried_entropy=h_star, one_entropy=one,
        l_entropies=l_results, zimmert_lb=zim,
    )
    return report
