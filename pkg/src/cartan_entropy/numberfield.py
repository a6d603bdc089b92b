"""Totally real number fields: exact element arithmetic, unit search,
fundamental systems and regulators.

Elements of K = Q[x]/(f) are coefficient vectors in the power basis of
lambda = x mod f.  Coordinates are exact rationals: unit-group saturation
has to adjoin roots that live outside Z[lambda] when the ring of integers
is larger.  All norms are verified through exact resultants; floating
point only enters through the log embedding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, isqrt, lcm

import numpy as np

from .errors import (
    EmptyResult,
    InconsistentDeterminants,
    InvalidInput,
    RankDeficient,
    VerificationError,
)
from .intpoly import (
    IntPolynomial,
    RealEmbeddings,
    discriminant,
    find_real_roots,
    is_irreducible,
    poly_inverse_mod,
    poly_mul_mod,
    poly_pow_mod,
    sylvester_resultant,
)

_TORSION_TOL = 1e-10        # log vector below this is a root of unity (+-1 here)
_COORD_DEN_CAP = 64         # denominator cap for exponent-coordinate recognition
_COORD_RESID_TOL = 1e-7     # lstsq residual above this means independent unit
_SATURATION_PRIMES = (2, 3, 5, 7)


@dataclass(frozen=True)
class FieldElement:
    """Element of K in the power basis; exact rational coordinates."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_ints(cls, values) -> "FieldElement":
        return cls(tuple(Fraction(int(v)) for v in values))

    @property
    def denominator(self) -> int:
        d = 1
        for c in self.coeffs:
            d = lcm(d, c.denominator)
        return d

    @property
    def is_integral(self) -> bool:
        return self.denominator == 1

    def canonical_sign(self) -> "FieldElement":
        for c in self.coeffs:
            if c != 0:
                return self if c > 0 else FieldElement(
                    tuple(-x for x in self.coeffs))
        return self

    def as_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def element_norm(f: IntPolynomial, a) -> int | Fraction:
    """Exact norm prod_j a(lambda_j), computed as Res(f, a) with the
    denominator cleared; an int whenever the result is integral."""
    coeffs = a.coeffs if isinstance(a, FieldElement) else [Fraction(c) for c in a]
    den = 1
    for c in coeffs:
        den = lcm(den, Fraction(c).denominator)
    ai = [int(Fraction(c) * den) for c in coeffs]
    d = len(ai) - 1
    while d >= 0 and ai[d] == 0:
        d -= 1
    if d < 0:
        return 0
    res = sylvester_resultant(list(f.coeffs), ai[: d + 1])
    value = Fraction(res, den ** f.degree)
    return int(value) if value.denominator == 1 else value


def square_part(value: int) -> int:
    """Largest s with s^2 dividing |value|."""
    v = abs(int(value))
    s = 1
    p = 2
    while p * p <= v:
        e = 0
        while v % p == 0:
            v //= p
            e += 1
        s *= p ** (e // 2)
        p += 1 if p == 2 else 2
    return s


class NumberField:
    """Arithmetic context: defining polynomial, embeddings, exact ops."""

    def __init__(self, f: IntPolynomial, embeddings: RealEmbeddings | None = None):
        if not f.is_monic:
            raise InvalidInput("defining polynomial must be monic")
        if not is_irreducible(f):
            raise InvalidInput("defining polynomial must be irreducible")
        self.f = f
        self.n = f.degree
        self.embeddings = embeddings if embeddings is not None else find_real_roots(f)
        self._fq = [Fraction(c) for c in f.coeffs]

    def element(self, values) -> FieldElement:
        coeffs = [Fraction(v) for v in values]
        if len(coeffs) > self.n:
            raise InvalidInput("coordinate vector longer than the degree")
        coeffs += [Fraction(0)] * (self.n - len(coeffs))
        return FieldElement(tuple(coeffs))

    def one(self) -> FieldElement:
        return self.element([1])

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return FieldElement(tuple(poly_mul_mod(list(a.coeffs), list(b.coeffs), self._fq)))

    def inv(self, a: FieldElement) -> FieldElement:
        return FieldElement(tuple(poly_inverse_mod(list(a.coeffs), self._fq)))

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        if e < 0:
            return self.pow(self.inv(a), -e)
        return FieldElement(tuple(poly_pow_mod(list(a.coeffs), e, self._fq)))

    def power_product(self, pairs) -> FieldElement:
        """Exact product of powers: pairs of (element, integer exponent)."""
        acc = self.one()
        for el, e in pairs:
            if e == 0:
                continue
            acc = self.mul(acc, self.pow(el, int(e)))
        return acc

    def conjugates(self, a: FieldElement) -> np.ndarray:
        v = np.array([float(c) for c in a.coeffs], dtype=float)
        return self.embeddings.vandermonde @ v

    def log_vector(self, a: FieldElement) -> np.ndarray:
        return np.log(np.abs(self.conjugates(a)))

    def norm(self, a: FieldElement) -> int | Fraction:
        return element_norm(self.f, a)


# ---------------------------------------------------------------------------
# unit search

def search_units(f: IntPolynomial, coeff_bound: int,
                 field: NumberField | None = None) -> list[FieldElement]:
    """All units sum a_j lambda^j with |a_j| <= coeff_bound and exact norm
    +-1, excluding +-1, deduplicated up to sign.  A floating prefilter on
    the conjugate product keeps the exact resultant confirmations cheap."""
    K = field if field is not None else NumberField(f)
    n = K.n
    if coeff_bound < 1:
        raise InvalidInput("coeff_bound must be positive")
    vander_t = K.embeddings.vandermonde.T.astype(float)
    axis = np.arange(-coeff_bound, coeff_bound + 1)
    tail_axes = [axis] * (n - 1)
    units: list[FieldElement] = []
    seen: set[tuple[int, ...]] = set()
    # chunk on the leading coordinate to bound memory
    for a0 in axis:
        grids = np.meshgrid(np.array([a0]), *tail_axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1).astype(float)
        vals = pts @ vander_t
        normf = np.abs(np.prod(vals, axis=1))
        cand = np.where(np.abs(normf - 1.0) < 0.5)[0]
        for idx in cand:
            a = tuple(int(v) for v in pts[idx])
            if not any(a[1:]) and abs(a[0]) == 1:
                continue  # the torsion units +-1
            if not any(a):
                continue
            key = a if next(c for c in a if c) > 0 else tuple(-v for v in a)
            if key in seen:
                continue
            seen.add(key)
            if abs(element_norm(f, [Fraction(v) for v in key])) == 1:
                units.append(FieldElement.from_ints(key))
    if not units:
        raise EmptyResult(f"no unit found with |coeffs| <= {coeff_bound}")
    return units


# ---------------------------------------------------------------------------
# multiplicative lattice maintenance

def hnf_with_transform(rows: list[list[int]]):
    """Row Hermite form H of an integer matrix A with unimodular U so that
    U A = H; returns (H, U, rank)."""
    a = [list(map(int, row)) for row in rows]
    m = len(a)
    width = len(a[0])
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, m):
            while a[i][c] != 0:
                q = a[r][c] // a[i][c]
                a[r] = [x - q * y for x, y in zip(a[r], a[i])]
                u[r] = [x - q * y for x, y in zip(u[r], u[i])]
                a[r], a[i] = a[i], a[r]
                u[r], u[i] = u[i], u[r]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        r += 1
        if r == m:
            break
    return a, u, r


class _UnitLattice:
    """Multiplicative basis under construction: (element, log vector)
    pairs kept size-reduced; insertion recognizes dependent units and
    enlarges the lattice exactly through an HNF transform."""

    def __init__(self, field: NumberField):
        self.K = field
        self.basis: list[tuple[FieldElement, np.ndarray]] = []

    def log_rows(self) -> np.ndarray:
        return np.array([lv for _, lv in self.basis])

    def insert(self, el: FieldElement, lv: np.ndarray | None = None) -> bool:
        K = self.K
        if lv is None:
            lv = K.log_vector(el)
        if float(np.max(np.abs(lv))) < _TORSION_TOL:
            return False
        if not self.basis:
            self.basis.append((el, lv))
            return True
        b = self.log_rows()
        coords, *_ = np.linalg.lstsq(b.T, lv, rcond=None)
        resid = lv - b.T @ coords
        if float(np.linalg.norm(resid)) > _COORD_RESID_TOL:
            self.basis.append((el, lv))
            self._reduce()
            return True
        fr = [Fraction(float(x)).limit_denominator(_COORD_DEN_CAP) for x in coords]
        if max(abs(float(fr[i]) - coords[i]) for i in range(len(coords))) > 1e-6:
            return False
        if all(x.denominator == 1 for x in fr):
            return False  # already in the group
        den = 1
        for x in fr:
            den = lcm(den, x.denominator)
        r = len(self.basis)
        rows = [[den * int(i == j) for j in range(r)] for i in range(r)]
        rows.append([int(x * den) for x in fr])
        _, u, rank = hnf_with_transform(rows)
        new_basis = []
        for k in range(rank):
            pairs = [(self.basis[j][0], u[k][j]) for j in range(r)]
            pairs.append((el, u[k][r]))
            g = self.K.power_product(pairs)
            new_basis.append((g, K.log_vector(g)))
        self.basis = new_basis
        self._reduce()
        return True

    def _reduce(self):
        """Pairwise size reduction in log space with exact element updates."""
        changed = True
        while changed:
            changed = False
            self.basis.sort(key=lambda b: float(np.dot(b[1], b[1])))
            for i in range(len(self.basis)):
                for j in range(len(self.basis)):
                    if i == j:
                        continue
                    bi, bj = self.basis[i][1], self.basis[j][1]
                    denom = float(np.dot(bj, bj))
                    if denom == 0:
                        continue
                    mu = round(float(np.dot(bi, bj)) / denom)
                    if mu == 0:
                        continue
                    cand = bi - mu * bj
                    if float(np.dot(cand, cand)) < float(np.dot(bi, bi)) - 1e-12:
                        g = self.K.power_product(
                            [(self.basis[i][0], 1), (self.basis[j][0], -mu)])
                        self.basis[i] = (g, self.K.log_vector(g))
                        changed = True

    def improve_short_vectors(self, radius: int = 1):
        """Exhaustive box pass: try replacing a basis vector by any short
        +-radius exponent combination that shrinks it.  Keeps the group
        unchanged because replacements use a unit exponent on the slot."""
        r = len(self.basis)
        if r == 0 or r > 6:
            return
        changed = True
        while changed:
            changed = False
            b = self.log_rows()
            norms = [float(np.dot(lv, lv)) for _, lv in self.basis]
            for expo in product(range(-radius, radius + 1), repeat=r):
                if not any(expo):
                    continue
                v = np.asarray(expo, dtype=float) @ b
                vv = float(np.dot(v, v))
                for i in range(r):
                    if abs(expo[i]) == 1 and vv < norms[i] - 1e-12:
                        g = self.K.power_product(
                            [(self.basis[j][0], expo[j]) for j in range(r)])
                        self.basis[i] = (g, self.K.log_vector(g))
                        changed = True
                        break
                if changed:
                    break
            if changed:
                self._reduce()

    def regulator_minors(self) -> list[float]:
        b = self.log_rows()
        return [abs(float(np.linalg.det(np.delete(b, j, axis=1))))
                for j in range(self.K.n)]


# ---------------------------------------------------------------------------
# saturation: exact m-th roots of power products

def _divisor_ladder(bound: int) -> list[int]:
    return sorted({d for d in range(1, bound + 1) if bound % d == 0})


def _saturate(lat: _UnitLattice, disc: int):
    """Enlarge the lattice by any exact m-th roots (m in 2,3,5,7) of power
    products of the basis.  Root candidates are recognized numerically
    (denominators bounded by the square part of the discriminant) and then
    verified exactly: r^m == +-w and |Norm(r)| == 1."""
    K = lat.K
    den_bound = max(2, square_part(disc))
    divisors = _divisor_ladder(den_bound)
    improved = True
    while improved:
        improved = False
        r = len(lat.basis)
        if r == 0:
            return
        b = lat.log_rows()
        conj = np.array([K.conjugates(el) for el, _ in lat.basis])
        log_conj = np.log(np.abs(conj))
        sgn_conj = (conj < 0).astype(int)
        for m in _SATURATION_PRIMES:
            expos = np.array([e for e in product(range(m), repeat=r) if any(e)])
            # shift each exponent vector so the prospective root is short
            approx = np.linalg.lstsq(b.T, (expos @ b).T / m, rcond=None)[0].T
            reduced = expos - m * np.round(approx).astype(int)
            log_w = reduced @ log_conj
            sgn_w = (reduced @ sgn_conj) % 2
            w_vals = np.exp(log_w) * np.where(sgn_w, -1.0, 1.0)
            hits: list[tuple[int, int, np.ndarray]] = []
            if m % 2 == 1:
                roots = np.sign(w_vals) * np.abs(w_vals) ** (1.0 / m)
                coords = np.linalg.solve(
                    K.embeddings.vandermonde, roots.T).T
                for d in divisors:
                    scaled = coords * d
                    close = np.all(np.abs(scaled - np.round(scaled)) < 1e-6 * d, axis=1)
                    for i in np.where(close)[0]:
                        hits.append((int(i), 1, roots[i]))
                    if hits:
                        break
            else:
                sign_pats = np.array(list(product([1.0, -1.0], repeat=K.n - 1)))
                sign_pats = np.hstack(
                    [np.ones((sign_pats.shape[0], 1)), sign_pats])
                for outer_sign in (1, -1):
                    wv = outer_sign * w_vals
                    positive = np.all(wv > 0, axis=1)
                    for i in np.where(positive)[0]:
                        root_abs = wv[i] ** (1.0 / m)
                        traces = sign_pats @ root_abs
                        near = sign_pats[np.abs(traces - np.round(traces)) < 1e-6]
                        for pat in near:
                            v = root_abs * pat
                            coords = np.linalg.solve(K.embeddings.vandermonde, v)
                            if any(np.all(np.abs(coords * d - np.round(coords * d))
                                          < 1e-6 * d) for d in divisors):
                                hits.append((int(i), outer_sign, v))
                                break
                        if hits:
                            break
                    if hits:
                        break
            inserted = False
            for i, outer_sign, v in hits:
                coords = np.linalg.solve(K.embeddings.vandermonde, v)
                fr = [Fraction(float(c)).limit_denominator(den_bound)
                      for c in coords]
                if max(abs(float(fr[j]) - coords[j]) for j in range(K.n)) > 1e-6:
                    continue
                candidate = FieldElement(tuple(fr))
                w = K.power_product(
                    [(lat.basis[j][0], int(reduced[i][j])) for j in range(r)])
                rm = K.pow(candidate, m)
                target = FieldElement(tuple(Fraction(outer_sign) * c
                                            for c in w.coeffs))
                if rm.coeffs == target.coeffs and abs(K.norm(candidate)) == 1:
                    if lat.insert(candidate):
                        inserted = True
                        break
            if inserted:
                improved = True
                break


# ---------------------------------------------------------------------------
# fundamental systems

@dataclass(eq=False)
class UnitSystem:
    """A multiplicative basis of the unit group found for f, with the log
    embedding matrix (rows = embeddings ordered by ascending root, columns
    = units) and its regulator."""

    f: IntPolynomial
    embeddings: RealEmbeddings
    units: tuple[FieldElement, ...]
    log_matrix: np.ndarray
    regulator: float

    @property
    def degree(self) -> int:
        return self.f.degree


_COLUMN_SUM_TOL = 1e-9
_MINOR_AGREE_TOL = 1e-9


def fundamental_system(f: IntPolynomial, units) -> UnitSystem:
    """Build a multiplicative basis from the given units: insert by
    increasing log size, size-reduce, run the exhaustive short-vector
    pass, then saturate (adjoin exact p-th roots of power products,
    which repairs finite index left by a coefficient-bounded search)."""
    K = NumberField(f)
    lat = _UnitLattice(K)
    pool = [u if isinstance(u, FieldElement) else K.element(u) for u in units]
    pool.sort(key=lambda u: float(np.dot(K.log_vector(u), K.log_vector(u))))
    for u in pool:
        lat.insert(u)
    if len(lat.basis) < K.n - 1:
        raise RankDeficient(
            f"unit logs span {len(lat.basis)} < {K.n - 1} dimensions")
    lat.improve_short_vectors()
    _saturate(lat, discriminant(f))
    lat.improve_short_vectors()

    # canonical order and sign
    entries = []
    for el, lv in lat.basis:
        el = el.canonical_sign()
        key = (float(np.dot(lv, lv)),
               tuple((c.numerator, c.denominator) for c in el.coeffs))
        entries.append((key, el, lv))
    entries.sort(key=lambda t: t[0])
    basis_elems = tuple(e for _, e, _ in entries)

    log_matrix = np.column_stack([K.log_vector(el) for el in basis_elems])
    for idx, el in enumerate(basis_elems):
        nrm = element_norm(f, el)
        if abs(nrm) != 1:
            raise VerificationError(
                f"basis element {idx} has exact norm {nrm}, not a unit")
    col_sums = np.abs(log_matrix.sum(axis=0))
    if float(col_sums.max()) > _COLUMN_SUM_TOL:
        raise VerificationError(
            f"log matrix column sum {col_sums.max():.3g} exceeds tolerance")
    minors = [abs(float(np.linalg.det(np.delete(log_matrix, j, axis=0))))
              for j in range(K.n)]
    if max(minors) - min(minors) > _MINOR_AGREE_TOL:
        raise InconsistentDeterminants(
            f"regulator minors spread {max(minors) - min(minors):.3g}")
    reg = float(np.mean(minors))
    return UnitSystem(f, K.embeddings, basis_elems, log_matrix, reg)


def regulator(us: UnitSystem) -> float:
    """Absolute determinant of any row-deleted minor of the log matrix,
    cross-checked over all n deletions."""
    n = us.f.degree
    minors = [abs(float(np.linalg.det(np.delete(us.log_matrix, j, axis=0))))
              for j in range(n)]
    if max(minors) - min(minors) > _MINOR_AGREE_TOL:
        raise InconsistentDeterminants(
            f"regulator minors spread {max(minors) - min(minors):.3g}")
    return float(np.mean(minors))
