"""Slow entropy: polyhedral norms, the SH functional, and C(n).

For case-P actions the slow entropy is C(n) * R^(1/(n-1)) where C(n) is
the minimum over coefficient vectors of a reduced objective F(c): after
permuting so the last coefficient is minimal, the minimizing norm is a
weighted l^infinity ball and its data collapse to F(c) =
(sum_{i<n} 1/c_i + min(1, T)/c_n) * (prod_{i<n} c_i)^{1/(n-1)} / vol^{1/(n-1)}
with T = sum_{i<n} c_n/c_i and vol the box-slab volume of the ratios.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, inf, isfinite

import numpy as np

from .cartan import ActionCase, classify
from .errors import BoundViolation, IdentityViolation, InvalidInput, NotANorm
from .fried import fried_average_entropy, regulator_of
from .geometry import (
    HPolytope,
    box_slab_volume,
    polytope_volume,
    vertex_enumeration,
)

_GRID_MESH = 24
_NM_FATOL = 1e-10
_NM_STARTS = 5
_C_CACHE: dict[int, tuple[float, tuple[float, ...]]] = {}


class PolyhedralNorm:
    """p(x) = max_i c_i |xi_i . x| with nonnegative coefficients; the
    functionals carrying positive coefficients must span the space."""

    def __init__(self, functionals, coefficients):
        g = np.atleast_2d(np.asarray(functionals, dtype=float))
        c = np.asarray(coefficients, dtype=float).ravel()
        if g.shape[0] != c.shape[0]:
            raise InvalidInput("one coefficient per functional required")
        if np.any(c < 0):
            raise NotANorm("coefficients must be nonnegative")
        active = c > 0
        if np.linalg.matrix_rank(g[active]) < g.shape[1]:
            raise NotANorm("active functionals do not span the space")
        self.functionals = g
        self.coefficients = c
        self.dimension = g.shape[1]
        self._vertices: np.ndarray | None = None

    def __call__(self, x) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        vals = np.abs(pts @ self.functionals.T) * self.coefficients
        out = vals.max(axis=1)
        return out if out.size > 1 else float(out[0])

    def ball(self) -> HPolytope:
        active = self.coefficients > 0
        rows = self.functionals[active] * self.coefficients[active, None]
        normals = np.vstack([rows, -rows])
        offsets = np.ones(normals.shape[0])
        return HPolytope(self.dimension, normals, offsets)

    def vertices(self) -> np.ndarray:
        if self._vertices is None:
            self._vertices = vertex_enumeration(self.ball())
        return self._vertices

    def scaled(self, factor: float) -> "PolyhedralNorm":
        if factor <= 0:
            raise NotANorm("scale factor must be positive")
        return PolyhedralNorm(self.functionals, self.coefficients * factor)

    def precompose(self, matrix) -> "PolyhedralNorm":
        """The norm x -> p(Lx): functionals become xi_i L."""
        m = np.asarray(matrix, dtype=float)
        return PolyhedralNorm(self.functionals @ m, self.coefficients)


def dual_norm(p: PolyhedralNorm, xi) -> float:
    """p*(xi) = max |xi . v| over the vertices of the unit ball."""
    vec = np.asarray(xi, dtype=float).ravel()
    if vec.shape != (p.dimension,):
        raise InvalidInput("functional length must match the dimension")
    return float(np.abs(p.vertices() @ vec).max())


def ball_volume(p: PolyhedralNorm) -> float:
    hp = p.ball()
    return polytope_volume(p.vertices(), p.dimension, hp).value


def sh_functional(xi_list, p: PolyhedralNorm) -> float:
    """SH_Xi(p) = sum_i p*(xi_i) / vol(unit ball of p)^(1/k); invariant
    under rescaling of p."""
    total = sum(dual_norm(p, xi) for xi in xi_list)
    return total / ball_volume(p) ** (1.0 / p.dimension)


def sh_for_norm(x: np.ndarray, p: PolyhedralNorm) -> float:
    """sum over the Lyapunov functionals of the dual norm."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    return sum(dual_norm(p, row) for row in x)


def induced_polyhedral_norm(xi_list, p: PolyhedralNorm) -> PolyhedralNorm:
    """q(x) = max_i |xi_i . x| / p*(xi_i): a polyhedral minorant of p
    with q*(xi_i) <= p*(xi_i), so SH_Xi(q) <= SH_Xi(p)."""
    xi = np.atleast_2d(np.asarray(xi_list, dtype=float))
    coeffs = []
    for row in xi:
        d = dual_norm(p, row)
        coeffs.append(0.0 if d == 0 else 1.0 / d)
    return PolyhedralNorm(xi, coeffs)


def coefficient_objective(c) -> float:
    """The reduced minimization target F(c); symmetric, scale-invariant,
    and continuous across the case boundary T = 1."""
    arr = np.sort(np.asarray(c, dtype=float))
    if arr[0] < 0 or arr.size < 2:
        return inf
    cn, rest = arr[0], arr[1:]
    if np.any(rest <= 0):
        return inf
    k = rest.size
    inv_sum = float((1.0 / rest).sum())
    prod_pow = float(np.exp(np.log(rest).sum() / k))
    t = cn * inv_sum
    if t <= 1.0:
        # vol = 2^k exactly, cancelling the doubled numerator
        return inv_sum * prod_pow
    vol = box_slab_volume(cn / rest)
    return (inv_sum + 1.0 / cn) * prod_pow / vol ** (1.0 / k)


def equal_coefficient_value(n: int) -> float:
    """F at c = (1, ..., 1): the conjectured minimizer."""
    return coefficient_objective(np.ones(n))


def _partitions(total: int, parts: int, minimum: int = 1):
    if parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for first in range(minimum, total - (parts - 1) * minimum + 1):
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def c_of_n(n: int, grid_mesh: int = _GRID_MESH, starts: int = _NM_STARTS,
           fatol: float = _NM_FATOL) -> tuple[float, tuple[float, ...]]:
    """Minimize the reduced objective: deterministic simplex grid, then
    Nelder-Mead refinement in mean-centred log coordinates from the best
    grid points.  The result must land in [(n-1)/2, n-1]."""
    from scipy.optimize import minimize

    if n < 3:
        raise InvalidInput("n must be at least 3")
    if n in _C_CACHE and grid_mesh == _GRID_MESH and starts == _NM_STARTS:
        return _C_CACHE[n]
    grid = []
    for part in _partitions(grid_mesh, n):
        c = np.array(part, dtype=float) / grid_mesh
        grid.append((coefficient_objective(c), tuple(c)))
    grid.sort(key=lambda item: item[0])

    def centred(u):
        v = np.asarray(u) - np.mean(u)
        return coefficient_objective(np.exp(v))

    best_val, best_c = grid[0]
    best_c = np.array(best_c)
    for _, start in grid[:starts]:
        u0 = np.log(np.array(start))
        res = minimize(centred, u0 - u0.mean(), method="Nelder-Mead",
                       options={"fatol": fatol, "xatol": 1e-10,
                                "maxiter": 4000, "maxfev": 8000})
        if isfinite(res.fun) and res.fun < best_val:
            best_val = float(res.fun)
            best_c = np.exp(res.x - np.mean(res.x))
    lo, hi = (n - 1) / 2.0, float(n - 1)
    if not lo - 1e-6 <= best_val <= hi + 1e-6:
        raise BoundViolation(
            f"C({n}) = {best_val} outside [{lo}, {hi}]")
    vec = np.sort(best_c)[::-1]
    vec = vec / vec.max()
    result = (best_val, tuple(float(v) for v in vec))
    if grid_mesh == _GRID_MESH and starts == _NM_STARTS:
        _C_CACHE[n] = result
    return result


@dataclass(frozen=True)
class SlowReport:
    n: int
    case: str
    regulator: float | None
    c_of_n: float | None
    c_vector: tuple[float, ...] | None
    sh_entropy: float
    equal_coeff_value: float | None
    corollary_c: float | None
    bounds: dict | None

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "case": self.case,
            "regulator": self.regulator,
            "cOfN": self.c_of_n,
            "cVector": None if self.c_vector is None else list(self.c_vector),
            "shEntropy": self.sh_entropy,
            "equalCoeffValue": self.equal_coeff_value,
            "corollaryC": self.corollary_c,
            "bounds": self.bounds,
        }


def corollary_check(h_star: float, sh: float, k: int) -> float:
    """c(k) = sh / (C(2k,k)^(1/k) * h*^(1/k)); must equal C(k+1)/2 and
    lie in [k/4, k/2]."""
    if h_star <= 0:
        raise InvalidInput("positive average entropy required")
    c_k = sh / (comb(2 * k, k) ** (1.0 / k) * h_star ** (1.0 / k))
    expected = c_of_n(k + 1)[0] / 2.0
    if abs(c_k - expected) > 1e-9 * max(1.0, abs(expected)):
        raise IdentityViolation(
            f"c({k}) = {c_k} but C({k + 1})/2 = {expected}")
    if not k / 4.0 - 1e-6 <= c_k <= k / 2.0 + 1e-6:
        raise IdentityViolation(f"c({k}) = {c_k} outside [k/4, k/2]")
    return c_k


def slow_entropy(x: np.ndarray) -> SlowReport:
    """sh = C(n) * R^(1/(n-1)) for case P; identically 0 for case O."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n = x.shape[0]
    if classify(x) is ActionCase.O:
        return SlowReport(n=n, case="O", regulator=None, c_of_n=None,
                          c_vector=None, sh_entropy=0.0,
                          equal_coeff_value=None, corollary_c=None,
                          bounds=None)
    r = regulator_of(x)
    cn, cvec = c_of_n(n)
    sh = cn * r ** (1.0 / (n - 1))
    h_star = fried_average_entropy(x)
    k = n - 1
    cor = corollary_check(h_star, sh, k)
    return SlowReport(
        n=n, case="P", regulator=r, c_of_n=cn, c_vector=cvec,
        sh_entropy=sh, equal_coeff_value=equal_coefficient_value(n),
        corollary_c=cor,
        bounds={"cLower": (n - 1) / 2.0, "cUpper": float(n - 1),
                "corollaryLower": k / 4.0, "corollaryUpper": k / 2.0},
    )
