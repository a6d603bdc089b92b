"""Commuting unimodular integer matrices and their Lyapunov data.

An action is k commuting integer matrices of size n with determinant +-1.
Its Lyapunov matrix X is n x k with X[j][i] = log|lambda_j(A_i)|, rows
indexed by one fixed ordering of the common eigenbasis.  Entropy of a
group element m is half the l^1 norm of X m.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import fsum, gcd

import numpy as np

from .errors import (
    DegenerateArrangement,
    DeterminantNotUnit,
    IdentityViolation,
    InvalidInput,
    NonIntegerEntry,
    NotCommuting,
    NotUnimodular,
    ReducibleCharPoly,
    ZeroEigenvalue,
)
from .intpoly import IntPolynomial, is_irreducible
from .numberfield import NumberField, UnitSystem, hnf_with_transform

_COLUMN_SUM_TOL = 1e-9
_EIG_MATCH_TOL = 1e-8
_PROPORTIONAL_TOL = 1e-10
_DEFAULT_SEED = 7_180
_DEFAULT_SAMPLES = 100_000

IntMatrix = tuple[tuple[int, ...], ...]


class ActionCase(enum.Enum):
    P = "P"  # entropy rank n-1: every nonzero element has positive entropy
    O = "O"  # common kernel present: entropies vanish identically


@dataclass(frozen=True)
class CartanAction:
    n: int
    matrices: tuple[IntMatrix, ...]
    lyapunov: np.ndarray

    @property
    def k(self) -> int:
        return len(self.matrices)

    def float_matrices(self) -> list[np.ndarray]:
        return [np.array(m, dtype=float) for m in self.matrices]


@dataclass(frozen=True)
class ActionDiagnostics:
    action: CartanAction
    determinants: tuple[int, ...]
    char_poly: IntPolynomial
    commuting: bool
    irreducible: bool
    diagonalization_residual: float

    def as_dict(self) -> dict:
        return {
            "n": self.action.n,
            "k": self.action.k,
            "determinants": list(self.determinants),
            "charPolyA1": list(self.char_poly.coeffs),
            "commuting": self.commuting,
            "irreducible": self.irreducible,
            "diagonalizationResidual": self.diagonalization_residual,
            "lyapunov": self.action.lyapunov.tolist(),
        }


def _as_int_matrix(m) -> IntMatrix:
    rows = [tuple(int(x) for x in row) for row in m]
    size = len(rows)
    if size == 0 or any(len(r) != size for r in rows):
        raise InvalidInput("matrices must be square and nonempty")
    for row, raw in zip(rows, m):
        for x, y in zip(row, raw):
            if x != y:
                raise NonIntegerEntry(f"entry {y} is not an integer")
    return tuple(rows)


def _mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n))
        for i in range(n)
    )


def _int_det(m: IntMatrix) -> int:
    # Bareiss: fraction-free elimination, exact over the integers.
    n = len(m)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for r in range(n - 1):
        if a[r][r] == 0:
            for s in range(r + 1, n):
                if a[s][r] != 0:
                    a[r], a[s] = a[s], a[r]
                    sign = -sign
                    break
            else:
                return 0
        for s in range(r + 1, n):
            for c in range(r + 1, n):
                a[s][c] = (a[s][c] * a[r][r] - a[s][r] * a[r][c]) // prev
            a[s][r] = 0
        prev = a[r][r]
    return sign * a[n - 1][n - 1]


def _char_poly(m: IntMatrix) -> IntPolynomial:
    # Faddeev-LeVerrier over exact rationals; result must be integral.
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    work = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(1)]  # leading first while building
    for step in range(1, n + 1):
        work = [
            [sum(a[i][t] * work[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
        trace = sum(work[i][i] for i in range(n))
        c = -trace / step
        coeffs.append(c)
        for i in range(n):
            work[i][i] += c
    ints = []
    for c in coeffs:
        if c.denominator != 1:
            raise NonIntegerEntry("characteristic polynomial not integral")
        ints.append(int(c))
    return IntPolynomial(tuple(reversed(ints)))


def _common_eigen_rows(matrices: tuple[IntMatrix, ...]):
    """Diagonalize all matrices in the eigenbasis of the first one and
    return (|lambda| table n x k, row order key, residual)."""
    floats = [np.array(m, dtype=float) for m in matrices]
    n = floats[0].shape[0]
    vals, vecs = np.linalg.eig(floats[0])
    inv = np.linalg.inv(vecs)
    lam = np.empty((n, len(floats)), dtype=complex)
    residual = 0.0
    for i, a in enumerate(floats):
        d = inv @ a @ vecs
        lam[:, i] = np.diag(d)
        off = d - np.diag(np.diag(d))
        residual = max(residual, float(np.abs(off).max()) /
                       max(1.0, float(np.abs(a).max())))
    order = np.lexsort((np.round(lam[:, 0].imag, 9),
                        np.round(lam[:, 0].real, 9)))
    return lam[order], residual


def verify_action(matrices) -> ActionDiagnostics:
    """Validate commutation, unimodularity, and irreducibility of the
    first matrix's characteristic polynomial; build the Lyapunov matrix
    on a consistent common eigenbasis ordering."""
    mats = tuple(_as_int_matrix(m) for m in matrices)
    if not mats:
        raise InvalidInput("at least one matrix required")
    n = len(mats[0])
    if any(len(m) != n for m in mats):
        raise InvalidInput("matrices must share one size")
    dets = tuple(_int_det(m) for m in mats)
    for d in dets:
        if d not in (1, -1):
            raise NotUnimodular(f"determinant {d} is not +-1")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if _mat_mul(mats[i], mats[j]) != _mat_mul(mats[j], mats[i]):
                raise NotCommuting(f"matrices {i} and {j} do not commute")
    cp = _char_poly(mats[0])
    if not is_irreducible(cp):
        raise ReducibleCharPoly(f"char poly {cp} factors over Q")
    lam, residual = _common_eigen_rows(mats)
    absolute = np.abs(lam)
    if np.any(absolute < 1e-12):
        raise ZeroEigenvalue("eigenvalue of magnitude ~0 on a unimodular matrix")
    x = np.log(absolute)
    action = CartanAction(n=n, matrices=mats, lyapunov=x)
    return ActionDiagnostics(
        action=action,
        determinants=dets,
        char_poly=cp,
        commuting=True,
        irreducible=True,
        diagonalization_residual=residual,
    )


def _canonical_hnf(int_rows: list[list[int]]) -> tuple[list[list[int]], int]:
    """Unique Hermite form: echelon reduction, then entries above each
    pivot reduced into [0, pivot)."""
    h, _, rank = hnf_with_transform(int_rows)
    h = [row[:] for row in h[:rank]]
    width = len(h[0]) if h else 0
    for r in range(rank):
        c = next(i for i in range(width) if h[r][i] != 0)
        for rr in range(r):
            q = h[rr][c] // h[r][c]
            if q:
                h[rr] = [x - q * y for x, y in zip(h[rr], h[r])]
    return h, rank


def _order_basis(nf: NumberField, units) -> list:
    """Z-basis, in hermite normal form, of the smallest multiplication-
    closed lattice containing the power basis and the given units."""
    n = nf.f.degree
    gens = [nf.element([0] * i + [1]) for i in range(1, n)] + list(units)
    basis = [nf.element([0] * i + [1]) for i in range(n)]
    state = None
    for _ in range(32):
        rows = [b.coeffs for b in basis]
        for b in basis:
            for g in gens:
                rows.append(nf.mul(b, g).coeffs)
        den = 1
        for row in rows:
            for c in row:
                den = den * c.denominator // gcd(den, c.denominator)
        int_rows = [[int(c * den) for c in row] for row in rows]
        h, rank = _canonical_hnf(int_rows)
        if rank != n:
            raise NonIntegerEntry("order closure lost full rank")
        content = den
        for row in h:
            for x in row:
                content = gcd(content, abs(x))
        key = (den // content,
               tuple(tuple(x // content for x in row) for row in h))
        basis = [nf.element([Fraction(x, den) for x in row]) for row in h]
        if key == state:
            return basis
        state = key
    raise NonIntegerEntry("order closure did not stabilize")


def _solve_exact(basis_rows: list[list[Fraction]], target: list[Fraction]):
    """Solve x . B = target exactly over the rationals (B rows = basis)."""
    n = len(basis_rows)
    aug = [[Fraction(basis_rows[r][c]) for r in range(n)] + [Fraction(target[c])]
           for c in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise NonIntegerEntry("singular basis in coordinate solve")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def from_unit_system(f: IntPolynomial, us: UnitSystem) -> CartanAction:
    """Matrices of multiplication by each fundamental unit on the order
    generated by the power basis and the units themselves; for units
    inside Z[lambda] this is exactly p_i(companion(f))."""
    nf = NumberField(f, us.embeddings)
    basis = _order_basis(nf, us.units)
    basis_rows = [list(b.coeffs) for b in basis]
    mats = []
    for unit in us.units:
        cols = []
        for b in basis:
            prod = nf.mul(b, unit)
            coords = _solve_exact(basis_rows, list(prod.coeffs))
            for c in coords:
                if c.denominator != 1:
                    raise NonIntegerEntry(
                        f"unit action has non-integer coordinate {c}")
            cols.append([int(c) for c in coords])
        mat = tuple(tuple(cols[c][r] for c in range(len(cols)))
                    for r in range(len(cols)))
        det = _int_det(mat)
        if det not in (1, -1):
            raise DeterminantNotUnit(f"determinant {det} is not +-1")
        mats.append(mat)
    action = CartanAction(n=f.degree, matrices=tuple(mats),
                          lyapunov=np.array(us.log_matrix, dtype=float))
    _verify_unit_eigenvalues(action, nf, us)
    return action


def _verify_unit_eigenvalues(action: CartanAction, nf: NumberField,
                             us: UnitSystem):
    for mat, unit in zip(action.float_matrices(), us.units):
        got = np.sort(np.abs(np.linalg.eigvals(mat)))
        want = np.sort(np.abs(nf.conjugates(unit)))
        err = float(np.max(np.abs(got - want) / np.maximum(1.0, want)))
        if err > _EIG_MATCH_TOL:
            raise IdentityViolation(
                f"matrix eigenvalues disagree with embeddings by {err:.2e}")


def lyapunov_matrix(action: CartanAction) -> np.ndarray:
    """The n x k matrix X[j][i] = log|lambda_j(A_i)|; columns sum to 0
    within 1e-9 because each matrix is unimodular."""
    x = np.asarray(action.lyapunov, dtype=float)
    sums = np.abs(x.sum(axis=0))
    if np.any(sums > _COLUMN_SUM_TOL * max(1.0, float(np.abs(x).max()))):
        raise ZeroEigenvalue(f"column sums {sums} exceed tolerance")
    return x


def classify(x: np.ndarray) -> ActionCase:
    """Case P iff the row functionals of X have trivial common kernel
    (rank(X) = k, which is rank n - 1 for a full Cartan action);
    otherwise case O (all entropies vanish)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    k = x.shape[1]
    return ActionCase.P if np.linalg.matrix_rank(x) == k else ActionCase.O


def _check_nondegenerate(x: np.ndarray):
    n = x.shape[0]
    for a in range(n):
        for b in range(a + 1, n):
            na, nb = np.linalg.norm(x[a]), np.linalg.norm(x[b])
            outer = np.abs(np.outer(x[a], x[b]) - np.outer(x[b], x[a]))
            if outer.max() <= _PROPORTIONAL_TOL * max(na * nb, 1e-30):
                raise DegenerateArrangement(
                    f"row functionals {a} and {b} are proportional")


def _certify_pattern(x: np.ndarray, signs: np.ndarray):
    from scipy.optimize import linprog

    k = x.shape[1]
    a_ub = -(signs[:, None] * x)
    res = linprog(np.zeros(k), A_ub=a_ub, b_ub=-np.ones(x.shape[0]),
                  bounds=[(None, None)] * k, method="highs")
    if res.status == 0:
        return res.x
    return None


def weyl_chambers(x: np.ndarray, seed: int = _DEFAULT_SEED,
                  samples: int = _DEFAULT_SAMPLES):
    """Sign patterns (sign chi_1(t), ..., sign chi_n(t)) realized over
    R^k, each certified by a linear-programming witness.  Sampling finds
    candidates fast; for n <= 12 every pattern is also tested directly,
    so the returned list is complete."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n, k = x.shape
    if k >= 2:
        # in R^1 every pair of functionals is proportional and the two
        # half-lines are still honest chambers, so only check for k >= 2
        _check_nondegenerate(x)
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = rng.standard_normal((samples, k))
    raw = np.sign(pts @ x.T).astype(np.int8)
    candidates = {tuple(row) for row in raw if 0 not in row}
    if n <= 12:
        candidates.update(product((1, -1), repeat=n))
    out = []
    for pattern in sorted(candidates, reverse=True):
        witness = _certify_pattern(x, np.array(pattern, dtype=float))
        if witness is not None:
            out.append((tuple(int(s) for s in pattern), witness))
    return out


def entropy_of_element(x: np.ndarray, m) -> float:
    """h(m) = 1/2 sum_j |sum_i m_i X[j][i]|."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    vec = np.asarray(m, dtype=float)
    if vec.shape != (x.shape[1],):
        raise InvalidInput("element length must match the number of matrices")
    return 0.5 * float(fsum(np.abs(x @ vec)))
