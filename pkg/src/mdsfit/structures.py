"""Support matrices, root families, and the combinatorial predicates on them.

A support matrix M is an m x n binary matrix whose rows prescribe where
generator-matrix entries may be nonzero.  Its complement view is a root
family: row i maps to the set N_i of column indices where M is zero, and
N_i becomes the root set of an expanded root product of degree m-1 or
less.  The predicates here are pure set combinatorics:

* the Hall-type completability bound on row-support unions,
* the rectangular property (some k >= 2 of the degree-(m-1) sets share
  at least m-k+1 roots) and its generalization that admits lower-degree
  sets via a slack parameter,
* (r,s)-subsets: a size-s root set contained in r of the family's sets,
  ordered by r+s and then r.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .polyring import DegreeTooHigh, RootPoly, root_poly


class ParseError(ValueError):
    """Malformed matrix or family input."""


class DegreesNotUniform(ValueError):
    """A predicate that needs all degrees equal to m-1 saw something else."""


# ---------------------------------------------------------------------------
# support matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupportMatrix:
    m: int
    n: int
    bits: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not 1 < self.m <= self.n:
            raise ParseError(f"need 1 < m <= n, got m={self.m}, n={self.n}")
        if len(self.bits) != self.m or any(len(r) != self.n for r in self.bits):
            raise ParseError("bit rows do not match declared shape")
        if any(b not in (0, 1) for r in self.bits for b in r):
            raise ParseError("entries must be 0 or 1")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "SupportMatrix":
        return cls(len(rows), len(rows[0]) if rows else 0, tuple(tuple(r) for r in rows))

    @classmethod
    def from_text(cls, text: str) -> "SupportMatrix":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty matrix input")
        if any(set(ln) - {"0", "1"} for ln in lines):
            raise ParseError("matrix rows must be strings of 0/1")
        if len(set(map(len, lines))) != 1:
            raise ParseError("matrix rows have unequal lengths")
        return cls.from_rows([[int(ch) for ch in ln] for ln in lines])

    @classmethod
    def from_json(cls, data: dict) -> "SupportMatrix":
        try:
            m, n, rows = data["m"], data["n"], data["rows"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"matrix JSON needs m, n, rows: {exc}") from exc
        mat = cls.from_text("\n".join(rows))
        if mat.m != m or mat.n != n:
            raise ParseError("declared m/n disagree with rows")
        return mat

    @classmethod
    def loads(cls, text: str) -> "SupportMatrix":
        stripped = text.lstrip()
        if stripped.startswith("{"):
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad JSON: {exc}") from exc
            return cls.from_json(data)
        return cls.from_text(text)

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n,
                "rows": ["".join(str(b) for b in row) for row in self.bits]}

    def support(self, i: int) -> frozenset[int]:
        """1-based column support of row i (1-based)."""
        return frozenset(j + 1 for j, b in enumerate(self.bits[i - 1]) if b)

    def validate(self) -> list[str]:
        """Report structural problems without fixing them."""
        problems = []
        for i in range(1, self.m + 1):
            if not self.support(i):
                problems.append(f"row {i} is all zero")
        return problems


# ---------------------------------------------------------------------------
# root families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootFamily:
    n: int
    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.sets) < 2:
            raise ParseError("a family needs at least two root sets")
        m = self.m
        for i, N in enumerate(self.sets, start=1):
            if any(not 1 <= r <= self.n for r in N):
                raise ParseError(f"set {i} has indices outside [1, {self.n}]")
            if len(N) > m - 1:
                raise DegreeTooHigh(f"set {i} has {len(N)} roots > m-1 = {m - 1}")

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(N) for N in self.sets)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "RootFamily":
        return cls(n, tuple(frozenset(s) for s in sets))

    @classmethod
    def from_json(cls, data: dict) -> "RootFamily":
        try:
            return cls.from_sets(data["n"], data["sets"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"family JSON needs n, sets: {exc}") from exc

    def to_json(self) -> dict:
        return {"n": self.n, "sets": [sorted(N) for N in self.sets]}

    def validate(self, allow_loose_n: bool = False) -> None:
        """Enforce the size window 1 < m <= n (<= m(m-1) unless loosened)."""
        if not 1 < self.m <= self.n:
            raise ParseError(f"need 1 < m <= n, got m={self.m}, n={self.n}")
        if not allow_loose_n and self.n > self.m * (self.m - 1):
            raise ParseError(
                f"n={self.n} exceeds m(m-1)={self.m * (self.m - 1)}; "
                "pass allow_loose_n to explore anyway")

    def without_root(self, beta: int) -> "RootFamily":
        return RootFamily(self.n, tuple(N - {beta} for N in self.sets))


def root_polys(family: RootFamily) -> list[RootPoly]:
    """Expand every root set of the family into its coefficient stack."""
    m = family.m
    return [root_poly(N, m, family.n) for N in family.sets]


# ---------------------------------------------------------------------------
# MDS condition and the complement view
# ---------------------------------------------------------------------------

def mds_condition(mat: SupportMatrix) -> tuple[bool, tuple[int, ...] | None]:
    """Hall-type bound: every nonempty row subset I must cover at least
    n - m + |I| columns.  Returns (ok, witness), the witness being a
    violating I (1-based, smallest first in size-then-lex order)."""
    m, n = mat.m, mat.n
    supports = [mat.support(i) for i in range(1, m + 1)]
    for size in range(1, m + 1):
        for rows in combinations(range(1, m + 1), size):
            union: set[int] = set()
            for i in rows:
                union |= supports[i - 1]
            if len(union) < n - m + size:
                return False, rows
    return True, None


def to_root_family(mat: SupportMatrix) -> RootFamily:
    """Complement view: N_i = columns where row i is zero."""
    full = frozenset(range(1, mat.n + 1))
    sets = []
    for i in range(1, mat.m + 1):
        N = full - mat.support(i)
        if len(N) > mat.m - 1:
            raise DegreeTooHigh(
                f"row {i}: {len(N)} zeros > m-1 = {mat.m - 1}; not expressible "
                "as a degree-limited root set")
        sets.append(N)
    return RootFamily(mat.n, tuple(sets))


# ---------------------------------------------------------------------------
# rectangular property and its generalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RectWitness:
    members: tuple[int, ...]
    common: tuple[int, ...]
    slack: int = 0  # the l parameter; 0 for the plain rectangular property


def has_rp(family: RootFamily) -> tuple[bool, RectWitness | None]:
    """Rectangular property: some k >= 2 sets, all of degree m-1, share at
    least m-k+1 roots.  Requires every degree equal to m-1."""
    m = family.m
    if any(d != m - 1 for d in family.degrees):
        raise DegreesNotUniform(f"degrees {family.degrees} are not all m-1 = {m - 1}")
    for k in range(2, m + 1):
        for group in combinations(range(m), k):
            common = frozenset.intersection(*(family.sets[i] for i in group))
            if len(common) >= m - k + 1:
                witness = RectWitness(tuple(i + 1 for i in group), tuple(sorted(common)))
                return True, witness
    return False, None


def has_grp(family: RootFamily) -> tuple[bool, RectWitness | None]:
    """Generalized rectangular property: some k >= 2 sets of degree at most
    m-l-1 share at least m-k-l+1 roots, for a slack l >= 0 (a requirement
    of zero or fewer common roots is vacuously met; that degenerate case
    is what makes families of k sets with degrees <= k-2 rectangular, and
    without it all-low-degree families would escape the property while
    their determinant still vanishes).

    Only the largest feasible l per group needs checking: growing l keeps
    the degree bound satisfied and weakens the common-root requirement.
    """
    m = family.m
    degrees = family.degrees
    for k in range(2, m + 1):
        for group in combinations(range(m), k):
            slack = m - 1 - max(degrees[i] for i in group)
            common = frozenset.intersection(*(family.sets[i] for i in group))
            if len(common) >= max(0, m - k - slack + 1):
                witness = RectWitness(tuple(i + 1 for i in group),
                                      tuple(sorted(common)), slack)
                return True, witness
    return False, None


# ---------------------------------------------------------------------------
# (r,s)-subsets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RSSubset:
    elements: frozenset[int]
    members: frozenset[int]  # 1-based indices of sets containing elements

    @property
    def r(self) -> int:
        return len(self.members)

    @property
    def s(self) -> int:
        return len(self.elements)

    def order_key(self) -> tuple[int, int]:
        return (self.r + self.s, self.r)

    def __repr__(self) -> str:
        return (f"RSSubset(({self.r},{self.s}), elements={sorted(self.elements)}, "
                f"members={sorted(self.members)})")


def higher_order(a: RSSubset, b: RSSubset) -> int:
    """+1 if a has higher order than b, -1 if lower, 0 if equal.

    Order compares r+s first, then r."""
    ka, kb = a.order_key(), b.order_key()
    return (ka > kb) - (ka < kb)


def all_rs_subsets(family: RootFamily, scope: Iterable[int] | None = None) -> list[RSSubset]:
    """Every (r,s)-subset with maximal membership inside the scope.

    Candidates are the nonempty subsets of each in-scope root set (any
    subset of an intersection of several sets is also a subset of each of
    them, so per-set enumeration already covers every intersection).
    Membership is computed against the full scope.
    """
    idx = sorted(scope) if scope is not None else list(range(1, family.m + 1))
    if not idx:
        raise ValueError("scope must be nonempty")
    seen: set[frozenset[int]] = set()
    out: list[RSSubset] = []
    for i in idx:
        N = family.sets[i - 1]
        for size in range(1, len(N) + 1):
            for combo in combinations(sorted(N), size):
                S = frozenset(combo)
                if S in seen:
                    continue
                seen.add(S)
                members = frozenset(j for j in idx if S <= family.sets[j - 1])
                out.append(RSSubset(S, members))
    out.sort(key=lambda rs: (len(rs.elements), sorted(rs.elements)))
    return out
