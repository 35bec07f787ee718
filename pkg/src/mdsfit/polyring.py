"""Sparse multivariate polynomials with exact integer coefficients.

Polynomials live in Z[a1, ..., an].  A monomial is a dense tuple of
exponents (one slot per variable); a polynomial is a mapping from
monomials to nonzero integer coefficients.  Integer coefficients are
enough for everything built here: the coefficient polynomials of an
expanded root product are signed elementary symmetric sums, so a
polynomial that vanishes over Z vanishes over every field.

Canonical term order for printing and hashing is graded lexicographic,
highest first: compare total degree, then the exponent tuple.  The text
form is stable, e.g. ``+1*a1*a2 -1*a3^2``; the zero polynomial prints
as ``0``.

The univariate layer: a RootPoly is the expansion of prod(x - a_r) over
a root set, stored as a stack of m coefficient polynomials (index j is
the coefficient of x^j, trailing entries zero-padded).  The determinant
of the m x m coefficient matrix of m such stacks is the object all the
vanishing tests in this package care about.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

from .fields import FieldElem, FieldSpec

# fixed prime for randomized vanishing tests (Mersenne, 2^31 - 1)
RANDOM_TEST_PRIME = 2147483647


class DegreeTooHigh(ValueError):
    """Root set too large for the requested coefficient stack."""


class SizeMismatch(ValueError):
    """Operands disagree on variable count or stack height."""


class MissingAssignment(KeyError):
    """Evaluation point does not cover every occurring variable."""


class MultiPoly:
    """Immutable sparse polynomial in Z[a1..an]."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], int] | None = None):
        object.__setattr__(self, "nvars", nvars)
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    if len(mono) != nvars:
                        raise SizeMismatch("monomial length does not match nvars")
                    clean[mono] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def const(cls, c: int, nvars: int) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, index: int, nvars: int) -> "MultiPoly":
        """The polynomial a_index, 1-based index."""
        if not 1 <= index <= nvars:
            raise ValueError(f"variable index {index} out of [1, {nvars}]")
        mono = tuple(1 if i == index - 1 else 0 for i in range(nvars))
        return cls(nvars, {mono: 1})

    # -- ring operations ----------------------------------------------

    def _same(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise SizeMismatch("mixing polynomials with different variable counts")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            elif m in out:
                del out[m]
        return MultiPoly(self.nvars, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return MultiPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        self._same(other)
        out: dict[tuple[int, ...], int] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                elif m in out:
                    del out[m]
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, MultiPoly)
                and self.nvars == other.nvars and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, tuple(self.sorted_terms())))

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def degree_in(self, var: int) -> int:
        return max((m[var - 1] for m in self.terms), default=0)

    def variables(self) -> set[int]:
        """1-based indices of variables that actually occur."""
        occ = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    occ.add(i + 1)
        return occ

    # -- canonical form -----------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in graded-lex order, highest first."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def text(self) -> str:
        """Canonical stable text form, e.g. ``+1*a1*a2 -1*a3^2``."""
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            piece = f"{'+' if c > 0 else '-'}{abs(c)}"
            for i, e in enumerate(mono):
                if e == 1:
                    piece += f"*a{i + 1}"
                elif e > 1:
                    piece += f"*a{i + 1}^{e}"
            parts.append(piece)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.text()!r})"


def is_identically_zero(p: MultiPoly) -> bool:
    """True iff every monomial coefficient is zero (zero as a formal polynomial)."""
    return p.is_zero()


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------

def derivative(p: MultiPoly, var: int, times: int = 1) -> MultiPoly:
    """Iterated formal partial derivative (coefficients pick up falling factorials)."""
    if not 1 <= var <= p.nvars:
        raise ValueError(f"variable index {var} out of [1, {p.nvars}]")
    if times < 1:
        raise ValueError("times must be >= 1")
    i = var - 1
    out = {}
    for mono, c in p.terms.items():
        e = mono[i]
        if e < times:
            continue
        f = 1
        for t in range(times):
            f *= e - t
        out[mono[:i] + (e - times,) + mono[i + 1:]] = c * f
    return MultiPoly(p.nvars, out)


def hasse_derivative(p: MultiPoly, var: int, times: int = 1) -> MultiPoly:
    """Divided-power derivative: coefficient of a_var^times shifts down with
    a binomial factor instead of a falling factorial.  Equals the ordinary
    iterated derivative divided by times!, which keeps the result meaningful
    in every characteristic."""
    if not 1 <= var <= p.nvars:
        raise ValueError(f"variable index {var} out of [1, {p.nvars}]")
    if times < 1:
        raise ValueError("times must be >= 1")
    i = var - 1
    out = {}
    for mono, c in p.terms.items():
        e = mono[i]
        if e < times:
            continue
        out[mono[:i] + (e - times,) + mono[i + 1:]] = c * comb(e, times)
    return MultiPoly(p.nvars, out)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def evaluate(p: MultiPoly, point: Mapping[int, FieldElem], spec: FieldSpec) -> FieldElem:
    """Evaluate over GF(q): integer coefficients are reduced into the field,
    then the term sum is taken at the given point (1-based variable keys)."""
    needed = p.variables()
    missing = needed - set(point)
    if missing:
        raise MissingAssignment(f"no value for variables {sorted(missing)}")
    acc = spec.zero()
    powers: dict[tuple[int, int], FieldElem] = {}
    for mono, c in p.terms.items():
        term = spec.embed(c)
        for i, e in enumerate(mono):
            if not e:
                continue
            key = (i + 1, e)
            pw = powers.get(key)
            if pw is None:
                pw = point[i + 1] ** e
                powers[key] = pw
            term = term * pw
        acc = acc + term
    return acc


def eval_int(p: MultiPoly, values: Mapping[int, int]) -> int:
    """Exact integer evaluation (1-based variable keys)."""
    acc = 0
    for mono, c in p.terms.items():
        t = c
        for i, e in enumerate(mono):
            if e:
                t *= values[i + 1] ** e
        acc += t
    return acc


def eval_mod(p: MultiPoly, values: Sequence[int], mod: int) -> int:
    """Evaluate modulo ``mod`` with values[i] assigned to a_{i+1}."""
    acc = 0
    for mono, c in p.terms.items():
        t = c % mod
        for i, e in enumerate(mono):
            if e:
                t = (t * pow(values[i], e, mod)) % mod
        acc = (acc + t) % mod
    return acc


def probably_zero(p: MultiPoly, trials: int, seed: int) -> bool:
    """Randomized vanishing test at ``trials`` uniform points over the fixed
    prime field GF(2^31 - 1).  Any nonzero evaluation certifies nonzero;
    all-zero answers are only probabilistic.  Deterministic given seed."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    for _ in range(trials):
        values = [rng.randrange(RANDOM_TEST_PRIME) for _ in range(p.nvars)]
        if eval_mod(p, values, RANDOM_TEST_PRIME) != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# root products and the coefficient-matrix determinant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootPoly:
    """Expansion of prod_{r in roots} (x - a_r) as a coefficient stack.

    coeffs[j] is the coefficient of x^j, a MultiPoly in Z[a1..an];
    the stack is zero-padded to height m.  An empty root set expands
    to the constant 1.
    """

    m: int
    nvars: int
    coeffs: tuple[MultiPoly, ...]

    @property
    def degree(self) -> int:
        for j in range(self.m - 1, -1, -1):
            if not self.coeffs[j].is_zero():
                return j
        return 0


def root_poly(roots: Iterable[int], m: int, n: int) -> RootPoly:
    """Expand prod(x - a_r) over the given root indices into m coefficients."""
    rs = sorted(set(roots))
    if len(rs) > m - 1:
        raise DegreeTooHigh(f"{len(rs)} roots need degree {len(rs)} > m-1 = {m - 1}")
    for r in rs:
        if not 1 <= r <= n:
            raise ValueError(f"root index {r} out of [1, {n}]")
    coeffs = [MultiPoly.const(1, n)]
    for r in rs:
        a_r = MultiPoly.variable(r, n)
        nxt = [MultiPoly.zero(n) for _ in range(len(coeffs) + 1)]
        for j, c in enumerate(coeffs):
            nxt[j + 1] = nxt[j + 1] + c
            nxt[j] = nxt[j] - c * a_r
        coeffs = nxt
    while len(coeffs) < m:
        coeffs.append(MultiPoly.zero(n))
    return RootPoly(m=m, nvars=n, coeffs=tuple(coeffs))


def coeff_matrix_det(polys: Sequence[RootPoly]) -> MultiPoly:
    """Determinant of the m x m matrix whose column j holds the coefficient
    stack of polys[j]; computed by cofactor expansion with memoized minors
    (the coefficient ring has no division)."""
    m = len(polys)
    if m == 0:
        raise SizeMismatch("empty polynomial list")
    n = polys[0].nvars
    for p in polys:
        if p.m != m or p.nvars != n:
            raise SizeMismatch("all stacks must share the same m and nvars")
    cols = [p.coeffs for p in polys]
    memo: dict[int, MultiPoly] = {}

    def minor(colmask: int) -> MultiPoly:
        cached = memo.get(colmask)
        if cached is not None:
            return cached
        live = [j for j in range(m) if colmask & (1 << j)]
        row = m - len(live)
        if len(live) == 1:
            val = cols[live[0]][row]
        else:
            val = MultiPoly.zero(n)
            for pos, j in enumerate(live):
                entry = cols[j][row]
                if entry.is_zero():
                    continue
                sub = entry * minor(colmask & ~(1 << j))
                val = val + sub if pos % 2 == 0 else val - sub
        memo[colmask] = val
        return val

    return minor((1 << m) - 1)


def coeff_matrix_det_zero_randomized(polys: Sequence[RootPoly], trials: int, seed: int) -> bool:
    """Randomized vanishing test for coeff_matrix_det without expanding it:
    evaluate the coefficient matrix at random points over GF(2^31 - 1) and
    take the numeric determinant.  Substitution commutes with det, so a
    nonzero numeric determinant certifies the symbolic one is nonzero."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    m = len(polys)
    n = polys[0].nvars
    for p in polys:
        if p.m != m or p.nvars != n:
            raise SizeMismatch("all stacks must share the same m and nvars")
    P = RANDOM_TEST_PRIME
    rng = random.Random(seed)
    for _ in range(trials):
        values = [rng.randrange(P) for _ in range(n)]
        mat = [[eval_mod(polys[j].coeffs[i], values, P) for j in range(m)] for i in range(m)]
        if _det_mod(mat, P) != 0:
            return False
    return True


def _det_mod(a: list[list[int]], p: int) -> int:
    n = len(a)
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] % p), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        inv = pow(a[col][col], p - 2, p)
        det = (det * a[col][col]) % p
        for r in range(col + 1, n):
            f = (a[r][col] * inv) % p
            if f:
                for c in range(col, n):
                    a[r][c] = (a[r][c] - f * a[col][c]) % p
    return det % p
