"""Exact univariate polynomial arithmetic over Z and Q.

Coefficient sequences are stored constant term first.  Everything here is
exact: resultants and discriminants run a fraction-free Bareiss elimination
on Python integers, irreducibility does a bounded search over candidate
integer factors, and only the final root isolation leaves exact arithmetic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import comb, lcm

import numpy as np

from .errors import DegreeTooLarge, InvalidInput, NotSquarefree, NotTotallyReal

QCoeffs = list[Fraction]

_ROOT_IMAG_TOL = 1e-10
_RESIDUAL_FACTOR = 1e-12


# ---------------------------------------------------------------------------
# raw coefficient-list helpers (Fraction arithmetic, constant term first)

def poly_trim(p: list) -> list:
    d = len(p) - 1
    while d > 0 and p[d] == 0:
        d -= 1
    return list(p[:d + 1])


def poly_degree(p: list) -> int:
    d = len(p) - 1
    while d >= 0 and p[d] == 0:
        d -= 1
    return d


def poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def poly_mul_mod(a: list, b: list, f: list) -> QCoeffs:
    """a*b reduced mod the monic polynomial f; result has length deg f."""
    n = len(f) - 1
    r = poly_mul(a, b)
    for d in range(len(r) - 1, n - 1, -1):
        c = r[d]
        if c:
            r[d] = Fraction(0)
            for i in range(n):
                r[d - n + i] -= c * f[i]
    out = r[:n]
    return [Fraction(x) for x in out] + [Fraction(0)] * (n - len(out))


def poly_pow_mod(a: list, e: int, f: list) -> QCoeffs:
    n = len(f) - 1
    r = [Fraction(1)] + [Fraction(0)] * (n - 1)
    b = [Fraction(c) for c in a] + [Fraction(0)] * max(0, n - len(a))
    if e < 0:
        raise ValueError("negative exponent; invert first")
    while e:
        if e & 1:
            r = poly_mul_mod(r, b, f)
        b = poly_mul_mod(b, b, f)
        e >>= 1
    return r


def poly_inverse_mod(a: list, f: list) -> QCoeffs:
    """Inverse of a modulo the monic irreducible f, by the extended Euclid
    algorithm over Q[x]."""
    n = len(f) - 1
    r0 = [Fraction(c) for c in f]
    r1 = [Fraction(c) for c in a] + [Fraction(0)] * max(0, len(f) - 1 - len(a))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while poly_degree(r1) > 0:
        d0, d1 = poly_degree(r0), poly_degree(r1)
        rr = list(r0)
        q = [Fraction(0)] * (d0 - d1 + 1)
        for k in range(d0 - d1, -1, -1):
            qc = rr[k + d1] / r1[d1]
            q[k] = qc
            for j in range(d1 + 1):
                rr[k + j] -= qc * r1[j]
        r0, r1 = r1, rr
        qs = poly_mul(q, s1)
        ns = [Fraction(0)] * max(len(s0), len(qs))
        for i, c in enumerate(s0):
            ns[i] += c
        for i, c in enumerate(qs):
            ns[i] -= c
        s0, s1 = s1, ns
    lead = r1[poly_degree(r1)]
    if lead == 0:
        raise ZeroDivisionError("element not invertible modulo f")
    inv = [x / lead for x in s1][:n]
    return inv + [Fraction(0)] * (n - len(inv))


def poly_derivative(p: list) -> list:
    return [i * c for i, c in enumerate(p)][1:] or [0]


def poly_eval(p: list, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_gcd_q(a: list, b: list) -> QCoeffs:
    """Monic gcd over Q[x]."""
    r0 = [Fraction(c) for c in a]
    r1 = [Fraction(c) for c in b]
    while poly_degree(r1) >= 0:
        d0, d1 = poly_degree(r0), poly_degree(r1)
        if d0 < d1:
            r0, r1 = r1, r0
            continue
        rr = list(r0)
        for k in range(d0 - d1, -1, -1):
            qc = rr[k + d1] / r1[d1]
            if qc:
                for j in range(d1 + 1):
                    rr[k + j] -= qc * r1[j]
        r0, r1 = r1, poly_trim(rr) if poly_degree(rr) >= 0 else [Fraction(0)]
        if poly_degree(r1) < 0 or all(c == 0 for c in r1):
            break
    d = poly_degree(r0)
    lead = r0[d]
    return [c / lead for c in r0[:d + 1]]


# ---------------------------------------------------------------------------
# exact resultant / discriminant

def sylvester_resultant(f: list[int], g: list[int]) -> int:
    """Resultant of two integer polynomials via fraction-free Bareiss
    elimination of the Sylvester matrix.  Exact for arbitrary sizes."""
    f = [int(c) for c in poly_trim(f)]
    g = [int(c) for c in poly_trim(g)]
    fd, gd = poly_degree(f), poly_degree(g)
    if fd < 0 or gd < 0:
        return 0
    if fd == 0:
        return f[0] ** gd
    if gd == 0:
        return g[0] ** fd
    size = fd + gd
    m = [[0] * size for _ in range(size)]
    frow = list(reversed(f))
    grow = list(reversed(g))
    for i in range(gd):
        for j, c in enumerate(frow):
            m[i][i + j] = c
    for i in range(fd):
        for j, c in enumerate(grow):
            m[gd + i][i + j] = c
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, size) if m[i][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[size - 1][size - 1]


# ---------------------------------------------------------------------------
# domain types

@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, constant term first, trailing zeros trimmed."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise InvalidInput("empty coefficient list")
        trimmed = tuple(int(c) for c in poly_trim(list(self.coeffs)))
        if any(c != int(c) for c in self.coeffs):
            raise InvalidInput("coefficients must be integers")
        object.__setattr__(self, "coeffs", trimmed)
        if self.degree > 0 and self.coeffs[-1] == 0:
            raise InvalidInput("leading coefficient is zero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    @classmethod
    def from_dense(cls, values) -> "IntPolynomial":
        coeffs = []
        for v in values:
            if int(v) != v:
                raise InvalidInput(f"non-integer coefficient {v!r}")
            coeffs.append(int(v))
        return cls(tuple(coeffs))

    @classmethod
    def from_text(cls, text: str) -> "IntPolynomial":
        return parse_polynomial(text)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __call__(self, x):
        return poly_eval(list(self.coeffs), x)

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            return IntPolynomial((0,))
        return IntPolynomial(tuple(poly_derivative(list(self.coeffs))))


@dataclass(eq=False)
class RealEmbeddings:
    """The real roots of a totally real defining polynomial, ascending."""

    degree: int
    roots: tuple[float, ...]
    residual_bound: float

    @cached_property
    def vandermonde(self) -> np.ndarray:
        """Row j holds (1, r_j, r_j^2, ...); maps coefficient vectors to
        their conjugate values."""
        return np.vander(np.asarray(self.roots), self.degree, increasing=True)


# ---------------------------------------------------------------------------
# operations

def discriminant(f: IntPolynomial) -> int:
    """Exact integer discriminant of a monic polynomial."""
    if not f.is_monic:
        raise InvalidInput("discriminant requires a monic polynomial")
    n = f.degree
    res = sylvester_resultant(list(f.coeffs), poly_derivative(list(f.coeffs)))
    return (-1) ** (n * (n - 1) // 2) * res


def _root_magnitude_bound(f: IntPolynomial) -> float:
    rts = np.roots(np.asarray(f.coeffs[::-1], dtype=float))
    m = float(np.prod(np.maximum(1.0, np.abs(rts))))
    return m * 1.02 + 1e-9


def _divisors(v: int) -> list[int]:
    v = abs(v)
    out = [d for d in range(1, v + 1) if v % d == 0]
    return out


def _divides_exactly(f: list[int], g: list[int]) -> bool:
    """True iff monic g divides f over Z (synthetic division)."""
    rem = list(f)
    dg = len(g) - 1
    for k in range(len(rem) - 1, dg - 1, -1):
        c = rem[k]
        if c:
            for j in range(dg + 1):
                rem[k - dg + j] -= c * g[j]
    return all(c == 0 for c in rem[:dg])


def is_irreducible(f: IntPolynomial) -> bool:
    """Exact irreducibility over Q for monic integer polynomials of degree
    at most 16, by searching all candidate monic factors of degree up to
    n/2 whose coefficients respect the root-magnitude (Mignotte-style)
    bound |e_k| <= C(d,k) * prod max(1,|root|)."""
    n = f.degree
    if n > 16:
        raise DegreeTooLarge(f"degree {n} > 16")
    if not f.is_monic:
        raise InvalidInput("irreducibility test requires a monic polynomial")
    if n <= 1:
        return True
    coeffs = list(f.coeffs)
    if coeffs[0] == 0:
        return False  # divisible by x
    f1 = poly_eval(coeffs, 1)
    fm1 = poly_eval(coeffs, -1)
    if f1 == 0 or fm1 == 0:
        return False
    bound = _root_magnitude_bound(f)
    for d in range(1, n // 2 + 1):
        # monic candidate g = x^d + b_{d-1} x^{d-1} + ... + b_0
        limits = [int(comb(d, d - i) * bound) for i in range(d)]
        const_choices = [s * v for v in _divisors(coeffs[0]) for s in (1, -1)
                         if v <= limits[0]]
        mid_ranges = [range(-limits[i], limits[i] + 1) for i in range(1, d)]
        for b0 in const_choices:
            for mids in product(*mid_ranges):
                g = [b0, *mids, 1]
                g1 = sum(g)
                if g1 == 0 or f1 % g1 != 0:
                    continue
                gm1 = sum(c * (-1) ** i for i, c in enumerate(g))
                if gm1 == 0 or fm1 % gm1 != 0:
                    continue
                if _divides_exactly(coeffs, g):
                    return False
    return True


def find_real_roots(f: IntPolynomial) -> RealEmbeddings:
    """All n real roots of a monic squarefree totally real polynomial,
    Newton-polished to residual below 1e-12 * (1 + max |coeff|)."""
    if not f.is_monic:
        raise InvalidInput("root isolation requires a monic polynomial")
    if f.degree < 1:
        raise InvalidInput("degree must be at least 1")
    g = poly_gcd_q(list(f.coeffs), poly_derivative(list(f.coeffs)))
    if poly_degree(g) > 0:
        raise NotSquarefree(f"gcd(f, f') has degree {poly_degree(g)}")
    rts = np.roots(np.asarray(f.coeffs[::-1], dtype=float))
    scale = 1.0 + float(np.max(np.abs(rts)))
    if float(np.max(np.abs(rts.imag))) > _ROOT_IMAG_TOL * scale:
        raise NotTotallyReal(
            f"complex root detected (|imag| up to {np.max(np.abs(rts.imag)):.3g})")
    r = np.sort(rts.real)
    fc = np.asarray(f.coeffs, dtype=float)
    dc = np.asarray(poly_derivative(list(f.coeffs)), dtype=float)
    tol = _RESIDUAL_FACTOR * (1.0 + max(abs(c) for c in f.coeffs))
    for _ in range(60):
        fv = np.polynomial.polynomial.polyval(r, fc)
        if float(np.max(np.abs(fv))) <= tol:
            break
        dv = np.polynomial.polynomial.polyval(r, dc)
        r = r - fv / dv
    residual = float(np.max(np.abs(np.polynomial.polynomial.polyval(r, fc))))
    if residual > tol:
        raise ArithmeticError(f"root polishing stalled at residual {residual:.3g}")
    if float(np.min(np.diff(r))) <= 0:
        raise NotSquarefree("roots collide after polishing")
    return RealEmbeddings(f.degree, tuple(float(x) for x in r), residual)


# ---------------------------------------------------------------------------
# text round-trip

_TERM_RE = re.compile(r"([+-])((?:\d+)?)(?:\*?(x)(?:\^(\d+))?)?")


def parse_polynomial(text: str) -> IntPolynomial:
    """Accepts either a dense coefficient list '[1,1,-3,-1,1]' (constant
    term first) or polynomial text like 'x^4 - x^3 - 3*x^2 + x + 1'
    (the '*' is optional)."""
    s = text.strip()
    if s.startswith("["):
        try:
            values = json.loads(s)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"bad coefficient list: {exc}") from exc
        if not isinstance(values, list) or not values:
            raise InvalidInput("coefficient list must be a nonempty array")
        return IntPolynomial.from_dense(values)
    s = s.replace(" ", "").replace("**", "^")
    if not s:
        raise InvalidInput("empty polynomial text")
    if s[0] not in "+-":
        s = "+" + s
    coeff: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise InvalidInput(f"cannot parse polynomial text near '{s[pos:]}'")
        sign, num, xpart, exp = m.groups()
        if not num and not xpart:
            raise InvalidInput(f"dangling sign in '{text}'")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        e = (int(exp) if exp else 1) if xpart else 0
        coeff[e] = coeff.get(e, 0) + c
        pos = m.end()
    deg = max(coeff)
    return IntPolynomial(tuple(coeff.get(i, 0) for i in range(deg + 1)))


def format_polynomial(f: IntPolynomial) -> str:
    """Canonical text form: descending powers, explicit '*'."""
    parts: list[str] = []
    for e in range(f.degree, -1, -1):
        c = f.coeffs[e]
        if c == 0:
            continue
        mag = abs(c)
        if e == 0:
            body = str(mag)
        elif e == 1:
            body = "x" if mag == 1 else f"{mag}*x"
        else:
            body = f"x^{e}" if mag == 1 else f"{mag}*x^{e}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"
