"""Exact arithmetic over finite fields GF(p^k).

Elements of GF(p^k) are coefficient vectors of length k over GF(p),
reduced modulo a monic irreducible polynomial of degree k.  The modulus
is found by deterministic search: monic degree-k polynomials are scanned
in lexicographic order of their coefficient tuple read from the x^(k-1)
coefficient down to the constant, and the first irreducible one wins.
Repeated calls therefore always produce the identical field.

For prime fields (k=1) the vector has a single entry and the modulus is
the polynomial x itself; no reduction is ever needed.

Everything is immutable and exact.  No lookup tables: fields here stay
small (q <= 2^16) and are used for code construction and spot checks,
not bulk encoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence


class NotPrimePower(ValueError):
    """Raised when a requested field size is not a prime power."""


class NonSquare(ValueError):
    """Raised when a square matrix is required."""


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p); polys are tuples of ints, low-to-high,
# no trailing zeros (the zero polynomial is the empty tuple)
# ---------------------------------------------------------------------------

def _px_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _px_mul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _px_trim(out)


def _px_mod(a: Sequence[int], mod: Sequence[int], p: int) -> tuple[int, ...]:
    r = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(r) - 1 >= dm and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dm:
            break
        f = (r[-1] * inv_lead) % p
        shift = len(r) - 1 - dm
        for i, mi in enumerate(mod):
            r[shift + i] = (r[shift + i] - f * mi) % p
        r.pop()
    return _px_trim(r)


def _px_divmod(a: Sequence[int], b: Sequence[int], p: int):
    r = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - db, 0)
    while True:
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db or not r:
            break
        f = (r[-1] * inv_lead) % p
        shift = len(r) - 1 - db
        q[shift] = f
        for i, bi in enumerate(b):
            r[shift + i] = (r[shift + i] - f * bi) % p
    return _px_trim(q), _px_trim(r)


def _px_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    k = len(poly) - 1
    if k <= 0:
        return False
    for d in range(1, k // 2 + 1):
        for v in range(p ** d):
            div = _digits(v, p, d) + (1,)
            _, rem = _px_divmod(poly, div, p)
            if not rem:
                return False
    return True


def _digits(v: int, p: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        out.append(v % p)
        v //= p
    return tuple(out)


# ---------------------------------------------------------------------------
# field spec and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) described by characteristic, degree and reduction modulus.

    ``modulus`` is the monic irreducible polynomial, coefficients
    low-to-high (length k+1, last entry 1).
    """

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.k

    def zero(self) -> "FieldElem":
        return FieldElem(self, (0,) * self.k)

    def one(self) -> "FieldElem":
        return FieldElem(self, (1,) + (0,) * (self.k - 1))

    def element(self, i: int) -> "FieldElem":
        """The i-th element in the canonical order, 0 <= i < q.

        Coefficients are the base-p digits of i, low digit first, so
        element(0) = 0 and element(1) = 1 in every field.
        """
        if not 0 <= i < self.q:
            raise ValueError(f"element index {i} out of range for GF({self.q})")
        return FieldElem(self, _digits(i, self.p, self.k))

    def embed(self, c: int) -> "FieldElem":
        """Ring homomorphism from the integers: c maps to (c mod p) * 1."""
        return FieldElem(self, (c % self.p,) + (0,) * (self.k - 1))

    def elements(self) -> Iterator["FieldElem"]:
        for i in range(self.q):
            yield self.element(i)

    def __repr__(self) -> str:
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldSpec:
    """Build GF(q), finding the modulus deterministically.

    Raises NotPrimePower unless q = p^k with p prime and k >= 1.
    """
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = None
    for d in range(2, q + 1):
        if d * d > q:
            p = q  # q itself is prime
            break
        if q % d == 0:
            p = d
            break
    assert p is not None
    k = 0
    rest = q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    if k == 1:
        return FieldSpec(p, 1, (0, 1))
    # scan x^k + c_{k-1} x^{k-1} + ... + c_0, lowest lexicographic first
    # (tuple read from the x^{k-1} coefficient down to the constant)
    for v in range(p ** k):
        lower = _digits(v, p, k)[::-1]  # (c_0, ..., c_{k-1}) from high-first digits
        cand = lower + (1,)
        if _px_irreducible(cand, p):
            return FieldSpec(p, k, cand)
    raise AssertionError("no irreducible polynomial found (unreachable)")


class FieldElem:
    """One element of GF(p^k): an immutable coefficient vector."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: Sequence[int]):
        if len(coeffs) != spec.k:
            raise ValueError("coefficient vector has wrong length")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coeffs", tuple(c % spec.p for c in coeffs))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("FieldElem is immutable")

    def _check(self, other: "FieldElem") -> None:
        if self.spec != other.spec:
            raise ValueError("elements of different fields")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        p = self.spec.p
        return FieldElem(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        p = self.spec.p
        return FieldElem(self.spec, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FieldElem":
        p = self.spec.p
        return FieldElem(self.spec, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        spec = self.spec
        prod = _px_mul(self.coeffs, other.coeffs, spec.p)
        if spec.k > 1:
            prod = _px_mod(prod, spec.modulus, spec.p)
        prod = prod + (0,) * (spec.k - len(prod))
        return FieldElem(spec, prod)

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        spec = self.spec
        if spec.k == 1:
            return FieldElem(spec, (pow(self.coeffs[0], spec.p - 2, spec.p),))
        # extended Euclid over GF(p)[x]: r0 = modulus, r1 = self
        p = spec.p
        r0, r1 = spec.modulus, _px_trim(list(self.coeffs))
        s0, s1 = (), (1,)
        while r1:
            q, r = _px_divmod(r0, r1, p)
            r0, r1 = r1, r
            qs = _px_mul(q, s1, p)
            s0, s1 = s1, _px_trim([(a - b) % p for a, b in
                                   zip(s0 + (0,) * max(0, len(qs) - len(s0)),
                                       qs + (0,) * max(0, len(s0) - len(qs)))])
        # r0 is now a nonzero constant gcd
        scale = pow(r0[0], p - 2, p)
        inv = tuple((c * scale) % p for c in s0)
        inv = inv + (0,) * (spec.k - len(inv))
        return FieldElem(spec, inv[:spec.k])

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return self * other.inverse()

    def __pow__(self, e: int) -> "FieldElem":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.spec.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_int(self) -> int:
        """Canonical integer encoding, inverse of FieldSpec.element."""
        v = 0
        for c in reversed(self.coeffs):
            v = v * self.spec.p + c
        return v

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FieldElem)
                and self.spec == other.spec and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs))

    def __repr__(self) -> str:
        return f"{self.spec!r}:{self.to_int()}"


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class FieldMatrix:
    """Immutable row-major matrix over one field."""

    __slots__ = ("spec", "rows", "cols", "entries")

    def __init__(self, spec: FieldSpec, rows: int, cols: int, entries: Sequence[FieldElem]):
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match shape")
        for e in entries:
            if e.spec != spec:
                raise ValueError("mixed field specs in matrix")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(entries))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("FieldMatrix is immutable")

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[FieldElem]]) -> "FieldMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = [e for row in rows for e in row]
        return cls(spec, r, c, flat)

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "FieldMatrix":
        one, zero = spec.one(), spec.zero()
        return cls(spec, n, n, [one if i == j else zero for i in range(n) for j in range(n)])

    def entry(self, i: int, j: int) -> FieldElem:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[FieldElem, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column_submatrix(self, cols: Sequence[int]) -> "FieldMatrix":
        ents = [self.entry(i, j) for i in range(self.rows) for j in cols]
        return FieldMatrix(self.spec, self.rows, len(cols), ents)

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.cols != other.rows or self.spec != other.spec:
            raise ValueError("shape or field mismatch in matrix product")
        zero = self.spec.zero()
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = zero
                for t in range(self.cols):
                    acc = acc + ri[t] * other.entry(t, j)
                out.append(acc)
        return FieldMatrix(self.spec, self.rows, other.cols, out)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FieldMatrix) and self.spec == other.spec
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.spec, self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(e.to_int()) for e in self.row(i)) for i in range(self.rows))
        return f"FieldMatrix({self.spec!r}, [{body}])"


def det(mat: FieldMatrix) -> FieldElem:
    """Determinant by Gaussian elimination with first-nonzero pivoting."""
    if mat.rows != mat.cols:
        raise NonSquare(f"determinant of a {mat.rows}x{mat.cols} matrix")
    n = mat.rows
    spec = mat.spec
    a = [list(mat.row(i)) for i in range(n)]
    sign_flip = False
    result = spec.one()
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not a[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            return spec.zero()
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign_flip = not sign_flip
        pv = a[col][col]
        result = result * pv
        inv = pv.inverse()
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f.is_zero():
                continue
            for c in range(col, n):
                a[r][c] = a[r][c] - f * a[col][c]
    if sign_flip:
        result = -result
    return result


def invertible(mat: FieldMatrix) -> bool:
    """True iff the (square) matrix has nonzero determinant."""
    return not det(mat).is_zero()
