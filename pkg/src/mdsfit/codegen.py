"""Building generator matrices that fit a support matrix.

The route: complement the support rows into root sets, expand them into
coefficient stacks, evaluate the stacks at distinct field points to get
the square transformation T, and multiply by the Vandermonde matrix V of
those points.  Row i of G = T V is then the root product of row i
evaluated at the points, so zeros land exactly where the support matrix
demands, and every m x m minor of G is invertible as long as T is
(the generalized Reed-Solomon property).

Orientation fixed here once: V is m x n with powers going down the rows
(entry (i,j) = point_j^(i-1)) and row i of T holds the coefficients of
the i-th root product, so det(T) equals the coefficient-matrix
determinant of the family up to transposition, i.e. exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .fields import FieldElem, FieldMatrix, FieldSpec, det, make_field
from .polyring import MultiPoly, coeff_matrix_det, evaluate
from .structures import RootFamily, SupportMatrix, mds_condition, root_polys, to_root_family


class FieldTooSmall(ValueError):
    """q cannot host n distinct points (or violates the size bound)."""


class NotFound(RuntimeError):
    """Point search exhausted its budget without a non-singular T."""

    def __init__(self, tried: int, reason: str = ""):
        msg = f"no suitable evaluation points after {tried} candidate tuples"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)
        self.tried = tried


class NotMDSCondition(ValueError):
    """The support matrix fails the completability bound."""

    def __init__(self, witness: tuple[int, ...]):
        super().__init__(f"support matrix violates the MDS condition on rows {witness}")
        self.witness = witness


def smallest_prime_power(minimum: int) -> int:
    """The least prime power q >= minimum."""
    from .fields import NotPrimePower
    q = max(2, minimum)
    while True:
        try:
            make_field(q)
            return q
        except NotPrimePower:
            q += 1


def vandermonde(points: Sequence[FieldElem], m: int) -> FieldMatrix:
    """m x n matrix of point powers, exponent i-1 in row i."""
    if m < 1 or not points:
        raise ValueError("need m >= 1 and at least one point")
    spec = points[0].spec
    rows = []
    row = [spec.one()] * len(points)
    for _ in range(m):
        rows.append(list(row))
        row = [r * p for r, p in zip(row, points)]
    return FieldMatrix.from_rows(spec, rows)


def transformation(family: RootFamily, points: Mapping[int, FieldElem]) -> FieldMatrix:
    """The m x m matrix whose row i holds the coefficients of the i-th root
    product evaluated at the points; its determinant is the evaluated
    coefficient-matrix determinant of the family."""
    some = next(iter(points.values()))
    spec = some.spec
    polys = root_polys(family)
    m = family.m
    rows = [[evaluate(p.coeffs[j], points, spec) for j in range(m)] for p in polys]
    return FieldMatrix.from_rows(spec, rows)


# ---------------------------------------------------------------------------
# point search
# ---------------------------------------------------------------------------

def _field_terms(w: MultiPoly, spec: FieldSpec) -> dict[tuple[int, ...], FieldElem]:
    out = {}
    for mono, c in w.terms.items():
        fc = spec.embed(c)
        if not fc.is_zero():
            out[mono] = fc
    return out


def _substitute(terms: dict[tuple[int, ...], FieldElem], var0: int,
                value: FieldElem) -> dict[tuple[int, ...], FieldElem]:
    out: dict[tuple[int, ...], FieldElem] = {}
    for mono, c in terms.items():
        e = mono[var0]
        if e:
            c = c * value ** e
            mono = mono[:var0] + (0,) + mono[var0 + 1:]
        if c.is_zero():
            continue
        prev = out.get(mono)
        s = c if prev is None else prev + c
        if s.is_zero():
            out.pop(mono, None)
        else:
            out[mono] = s
    return out


def _check_field_size(n: int, m: int, q: int, allow_small_field: bool) -> None:
    if q < n:
        raise FieldTooSmall(f"q={q} < n={n}: no n distinct points exist")
    if q < n + m - 1:
        if allow_small_field:
            warnings.warn(f"q={q} is below the n+m-1 = {n + m - 1} bound; "
                          "the search may fail", stacklevel=3)
        else:
            raise FieldTooSmall(f"q={q} < n+m-1 = {n + m - 1}; "
                                "pass allow_small_field to try anyway")


def find_points(family: RootFamily, q: int, strategy: str = "auto",
                seed: int = 0, budget: int = 20000,
                allow_small_field: bool = False) -> tuple[FieldElem, ...]:
    """Distinct evaluation points making the transformation non-singular.

    Strategies: ``exhaustive`` backtracks over ordered selections in the
    field's canonical element order (lowest tuple wins), pruning any prefix
    under which the partially substituted determinant already vanishes;
    ``greedy`` keeps only the first workable extension per variable (no
    backtracking); ``random`` draws seeded distinct tuples and tests the
    numeric determinant, up to ``budget`` tries; ``auto`` is greedy with an
    exhaustive fallback.
    """
    n, m = family.n, family.m
    spec = make_field(q)
    _check_field_size(n, m, q, allow_small_field)
    if strategy == "auto":
        try:
            return find_points(family, q, "greedy", seed, budget, allow_small_field)
        except NotFound:
            return find_points(family, q, "exhaustive", seed, budget, allow_small_field)
    if strategy == "random":
        return _find_points_random(family, spec, seed, budget)
    if strategy not in ("exhaustive", "greedy"):
        raise ValueError(f"unknown strategy {strategy!r}")

    w = coeff_matrix_det(root_polys(family))
    if w.is_zero():
        raise NotFound(0, "the coefficient determinant vanishes identically")
    terms = _field_terms(w, spec)
    if not terms:
        raise NotFound(0, f"the coefficient determinant vanishes modulo {spec.p}")
    elements = list(spec.elements())

    if strategy == "greedy":
        chosen: list[FieldElem] = []
        cur = terms
        for var0 in range(n):
            used = set(chosen)
            for cand in elements:
                if cand in used:
                    continue
                nxt = _substitute(cur, var0, cand)
                if nxt:
                    chosen.append(cand)
                    cur = nxt
                    break
            else:
                raise NotFound(len(chosen), f"greedy stuck at variable {var0 + 1}")
        return tuple(chosen)

    # exhaustive backtracking, depth-first in canonical order
    tried = 0
    chosen = []

    def walk(var0: int, cur: dict) -> tuple[FieldElem, ...] | None:
        nonlocal tried
        if var0 == n:
            return tuple(chosen)
        used = set(chosen)
        for cand in elements:
            if cand in used:
                continue
            nxt = _substitute(cur, var0, cand)
            if var0 == n - 1:
                tried += 1
            if not nxt:
                continue
            chosen.append(cand)
            got = walk(var0 + 1, nxt)
            if got is not None:
                return got
            chosen.pop()
        return None

    got = walk(0, terms)
    if got is None:
        raise NotFound(tried)
    return got


def _find_points_random(family: RootFamily, spec: FieldSpec,
                        seed: int, budget: int) -> tuple[FieldElem, ...]:
    import random as _random
    rng = _random.Random(seed)
    n = family.n
    q = spec.q
    pool = list(range(q))
    for attempt in range(budget):
        idx = rng.sample(pool, n)
        pts = tuple(spec.element(i) for i in idx)
        T = transformation(family, {i + 1: p for i, p in enumerate(pts)})
        if not det(T).is_zero():
            return pts
    raise NotFound(budget)


# ---------------------------------------------------------------------------
# end-to-end construction and verification
# ---------------------------------------------------------------------------

def equalize_supports(mat: SupportMatrix) -> SupportMatrix:
    """Shrink oversized row supports to exactly n-m+1 columns while keeping
    the completability bound intact (depth-first over per-row column
    choices, pruned by the bound; shrinking rows only ever shrinks unions,
    so a failing prefix can never be rescued).

    Used when the raw complement family cannot carry the construction:
    rows with more than n-m+1 supported columns leave their root products
    short of degree m-1, and some such families (all-ones rows, say) make
    the coefficient determinant vanish identically even though the matrix
    is completable.  Forcing extra zeros is harmless for the fit and
    restores the equal-degree shape whose determinant the bound controls.
    """
    target = mat.n - mat.m + 1
    supports = [sorted(mat.support(i)) for i in range(1, mat.m + 1)]

    def rebuild(rows: list[tuple[int, ...]]) -> SupportMatrix:
        bits = tuple(tuple(1 if j + 1 in set(row) else 0 for j in range(mat.n))
                     for row in rows)
        return SupportMatrix(mat.m, mat.n, bits)

    def dfs(i: int, chosen: list[tuple[int, ...]]) -> SupportMatrix | None:
        if i == mat.m:
            return rebuild(chosen)
        for combo in combinations(supports[i], target):
            cand = rebuild(chosen + [combo] + [tuple(s) for s in supports[i + 1:]])
            ok, _ = mds_condition(cand)
            if not ok:
                continue
            got = dfs(i + 1, chosen + [combo])
            if got is not None:
                return got
        return None

    got = dfs(0, [])
    if got is None:
        raise NotFound(0, "no equal-size support shrink keeps the MDS condition")
    return got


@dataclass(frozen=True)
class MinorReport:
    ok: bool
    minors_checked: int
    singular_column_sets: tuple[tuple[int, ...], ...]
    fit_failures: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class CodeInstance:
    matrix: SupportMatrix
    family: RootFamily
    q: int
    points: tuple[FieldElem, ...]
    T: FieldMatrix
    G: FieldMatrix
    report: MinorReport

    @property
    def det_t(self) -> FieldElem:
        return det(self.T)

    def to_json(self) -> dict:
        spec = self.points[0].spec

        def enc(e: FieldElem):
            return e.to_int() if spec.k == 1 else list(e.coeffs)

        return {
            "m": self.matrix.m, "n": self.matrix.n, "q": self.q,
            "field": {"p": spec.p, "k": spec.k, "modulus": list(spec.modulus)},
            "points": [enc(p) for p in self.points],
            "det_T": enc(self.det_t),
            "G": [[enc(self.G.entry(i, j)) for j in range(self.G.cols)]
                  for i in range(self.G.rows)],
            "minors_checked": self.report.minors_checked,
        }


def verify_mds(G: FieldMatrix, mat: SupportMatrix) -> MinorReport:
    """Exhaustively check every m x m minor and the fit condition."""
    if G.rows != mat.m or G.cols != mat.n:
        raise ValueError("generator and support shapes disagree")
    singular = []
    checked = 0
    for cols in combinations(range(mat.n), mat.m):
        checked += 1
        if det(G.column_submatrix(cols)).is_zero():
            singular.append(tuple(c + 1 for c in cols))
    fit = []
    for i in range(mat.m):
        for j in range(mat.n):
            if mat.bits[i][j] == 0 and not G.entry(i, j).is_zero():
                fit.append((i + 1, j + 1))
    return MinorReport(ok=not singular and not fit, minors_checked=checked,
                       singular_column_sets=tuple(singular), fit_failures=tuple(fit))


def build_code(mat: SupportMatrix, q: int, strategy: str = "auto", seed: int = 0,
               allow_small_field: bool = False) -> CodeInstance:
    """Full pipeline: complement, search points, assemble G = T V, verify.

    The raw complement family is used directly whenever it lacks the
    generalized rectangular property (its determinant is then nonzero in
    every proven regime).  Rectangular complements, which only arise from
    oversized supports, are routed through equalize_supports first; the
    resulting generator carries extra zeros but still fits the original
    matrix.
    """
    ok, witness = mds_condition(mat)
    if not ok:
        raise NotMDSCondition(witness)
    family = to_root_family(mat)
    if has_grp(family)[0]:
        family = to_root_family(equalize_supports(mat))
    try:
        points = find_points(family, q, strategy=strategy, seed=seed,
                             allow_small_field=allow_small_field)
    except NotFound:
        equalized = to_root_family(equalize_supports(mat))
        if equalized.sets == family.sets:
            raise
        family = equalized
        points = find_points(family, q, strategy=strategy, seed=seed,
                             allow_small_field=allow_small_field)
    point_map = {i + 1: p for i, p in enumerate(points)}
    T = transformation(family, point_map)
    V = vandermonde(points, mat.m)
    G = T @ V
    # row i of G must be the i-th root product evaluated at each point
    for i in range(mat.m):
        for j in range(mat.n):
            expect = _eval_root_product(family.sets[i], points, j)
            if G.entry(i, j) != expect:
                raise AssertionError(f"G[{i + 1}][{j + 1}] is not the root product value")
    report = verify_mds(G, mat)
    if not report.ok:
        raise AssertionError(f"verification failed on a constructed instance: {report}")
    return CodeInstance(matrix=mat, family=family, q=q, points=points,
                        T=T, G=G, report=report)


def _eval_root_product(roots: frozenset[int], points: Sequence[FieldElem], j: int) -> FieldElem:
    spec = points[0].spec
    acc = spec.one()
    for r in roots:
        acc = acc * (points[j] - points[r - 1])
    return acc
