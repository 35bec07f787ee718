"""Family enumeration and the vanishing-implies-rectangular harness.

The harness classifies root families into four cells: determinant
identically zero with the generalized rectangular property (consistent),
nonzero without it (consistent), nonzero with it (consistent for the
implication under test, but flagged since the converse never failed in
any run we know of), and the counterexample cell: identically zero yet
no rectangular structure.  Runs are deterministic given their scope and
seed; randomized zero tests are only advisory, and anything they flag is
re-verified symbolically before a report may fail.

Enumeration quotients raw families by variable relabeling and by
permutations of equal-degree positions.  The key fact making this cheap:
up to relabeling, a family is determined by the multiset of variable
incidence vectors (which sets contain each variable), so the canonical
key is the lexicographically smallest sorted multiset of incidence
bitmasks over the allowed position permutations.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import comb
from typing import Iterable, Iterator, Sequence

from .polyring import coeff_matrix_det, coeff_matrix_det_zero_randomized
from .reduction import (StuckGRP, reduce_all, strongly_reducible_subsets,
                        weakly_reducible)
from .structures import (RootFamily, SupportMatrix, all_rs_subsets, has_grp,
                         has_rp, mds_condition, root_polys, to_root_family)

ZERO_GRP = "zero-grp"
NONZERO_GNRP = "nonzero-gnrp"
NONZERO_GRP = "nonzero-grp"  # converse anomaly: flagged but not a counterexample
COUNTEREXAMPLE = "counterexample"

LABELS = (ZERO_GRP, NONZERO_GNRP, NONZERO_GRP, COUNTEREXAMPLE)


class BudgetExceeded(RuntimeError):
    """Soft budget hit; partial results are still meaningful."""


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _check_profile(m: int, n: int, profile: Sequence[int]) -> tuple[int, ...]:
    prof = tuple(sorted(profile))
    if len(prof) != m:
        raise ValueError(f"profile length {len(prof)} != m = {m}")
    if any(not 0 <= d <= m - 1 for d in prof):
        raise ValueError(f"degrees must lie in [0, {m - 1}]: {prof}")
    if max(prof) != m - 1:
        raise ValueError(f"some degree must equal m-1 = {m - 1}: {prof}")
    if not 1 < m <= n <= m * (m - 1):
        raise ValueError(f"need 1 < m <= n <= m(m-1), got m={m}, n={n}")
    return prof


def raw_family_count(n: int, profile: Sequence[int]) -> int:
    out = 1
    for d in profile:
        out *= comb(n, d)
    return out


def _position_perms(profile: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Permutations of positions that preserve the degree profile."""
    groups: dict[int, list[int]] = {}
    for i, d in enumerate(profile):
        groups.setdefault(d, []).append(i)
    perms: list[tuple[int, ...]] = [tuple(range(len(profile)))]
    for d, idx in groups.items():
        if len(idx) == 1:
            continue
        new = []
        for base in perms:
            for reorder in permutations(idx):
                p = list(base)
                for slot, src in zip(idx, reorder):
                    p[slot] = base[src]
                new.append(tuple(p))
        perms = list(dict.fromkeys(new))
    return perms


def canonical_key(family: RootFamily, perms: list[tuple[int, ...]] | None = None
                  ) -> tuple[int, tuple[int, ...]]:
    """Sorted multiset of variable incidence masks, minimized over the
    degree-preserving position permutations."""
    m = family.m
    if perms is None:
        perms = _position_perms(tuple(family.degrees))
    masks = []
    for v in range(1, family.n + 1):
        mask = 0
        for i, N in enumerate(family.sets):
            if v in N:
                mask |= 1 << i
        masks.append(mask)
    best = None
    for p in perms:
        remapped = []
        for mask in masks:
            out = 0
            for new_pos, old_pos in enumerate(p):
                if mask & (1 << old_pos):
                    out |= 1 << new_pos
            remapped.append(out)
        key = tuple(sorted(remapped))
        if best is None or key < best:
            best = key
    assert best is not None
    return (m, best)


def _family_from_key(key, n: int) -> RootFamily:
    m, masks = key
    sets = [set() for _ in range(m)]
    for v, mask in enumerate(masks, start=1):
        for i in range(m):
            if mask & (1 << i):
                sets[i].add(v)
    return RootFamily.from_sets(n, sets)


def enumerate_families(m: int, n: int, profile: Sequence[int],
                       canonical: bool = True) -> Iterator[RootFamily]:
    """All families with the given degree profile over variables 1..n.

    canonical=True yields one representative per orbit under variable
    relabeling and equal-degree position swaps, in a deterministic order.
    The first set can then be pinned to an initial segment, since any
    orbit has a member of that shape.
    """
    prof = _check_profile(m, n, profile)
    if not canonical:
        pools = [list(combinations(range(1, n + 1), d)) for d in prof]
        for sets in product(*pools):
            yield RootFamily.from_sets(n, sets)
        return
    perms = _position_perms(prof)
    first = tuple(range(1, prof[0] + 1))
    pools = [list(combinations(range(1, n + 1), d)) for d in prof[1:]]
    keys = set()
    for rest in product(*pools):
        fam = RootFamily.from_sets(n, (first,) + rest)
        keys.add(canonical_key(fam, perms))
    for key in sorted(keys):
        yield _family_from_key(key, n)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def classify_family(family: RootFamily, exact: bool = True,
                    trials: int = 3, seed: int = 0) -> str:
    """Which cell the family lands in.  With exact=False the zero test is
    the randomized one; counterexample labels then still need an exact
    recheck (run_suite does this) before they may be trusted."""
    grp, _ = has_grp(family)
    polys = root_polys(family)
    if exact:
        zero = coeff_matrix_det(polys).is_zero()
    else:
        zero = coeff_matrix_det_zero_randomized(polys, trials, seed)
    if zero:
        return ZERO_GRP if grp else COUNTEREXAMPLE
    return NONZERO_GRP if grp else NONZERO_GNRP


def _classify_indexed(args):
    fam_json, exact, trials, seed = args
    family = RootFamily.from_json(fam_json)
    return classify_family(family, exact=exact, trials=trials, seed=seed)


# ---------------------------------------------------------------------------
# suite runner
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteScope:
    m: int
    n: int
    profiles: tuple[tuple[int, ...], ...]
    mode: str = "exhaustive"  # or "random"
    samples: int = 0
    seed: int = 0
    exact: bool = True
    trials: int = 3

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n,
                "profiles": [list(p) for p in self.profiles],
                "mode": self.mode, "samples": self.samples,
                "seed": self.seed, "exact": self.exact, "trials": self.trials}


def all_profiles(m: int) -> tuple[tuple[int, ...], ...]:
    """Every nondecreasing degree profile with maximal degree m-1."""
    from itertools import combinations_with_replacement
    return tuple(lower + (m - 1,)
                 for lower in combinations_with_replacement(range(m), m - 1))


@dataclass
class VerifyReport:
    scope: SuiteScope
    tested: int = 0
    counts: dict = field(default_factory=lambda: {label: 0 for label in LABELS})
    counterexamples: list = field(default_factory=list)
    rechecked: int = 0
    partial: bool = False
    runtime: float = 0.0

    @property
    def zero_count(self) -> int:
        return self.counts[ZERO_GRP] + self.counts[COUNTEREXAMPLE]

    @property
    def grp_count(self) -> int:
        return self.counts[ZERO_GRP] + self.counts[NONZERO_GRP]

    @property
    def ok(self) -> bool:
        return self.counts[COUNTEREXAMPLE] == 0

    def to_json(self) -> dict:
        return {
            "scope": self.scope.to_json(),
            "tested": self.tested,
            "counts": dict(self.counts),
            "zero_count": self.zero_count,
            "grp_count": self.grp_count,
            "counterexamples": list(self.counterexamples),
            "rechecked": self.rechecked,
            "partial": self.partial,
            "ok": self.ok,
            "runtime_seconds": round(self.runtime, 3),
        }


def _iter_scope_families(scope: SuiteScope) -> Iterator[RootFamily]:
    if scope.mode == "exhaustive":
        for prof in scope.profiles:
            yield from enumerate_families(scope.m, scope.n, prof, canonical=True)
    elif scope.mode == "random":
        import random as _random
        rng = _random.Random(scope.seed)
        for _ in range(scope.samples):
            prof = scope.profiles[rng.randrange(len(scope.profiles))]
            sets = [rng.sample(range(1, scope.n + 1), d) for d in prof]
            yield RootFamily.from_sets(scope.n, sets)
    else:
        raise ValueError(f"unknown mode {scope.mode!r}")


def run_suite(scope: SuiteScope, budget: int | None = None,
              threads: int = 1, ce_path: str | None = None) -> VerifyReport:
    """Classify every family in scope; deterministic for a fixed scope.

    Any counterexample seen under a randomized zero test is re-verified
    with the exact path; only confirmed ones survive into the report.
    Budget overruns truncate the run and mark the report partial.
    """
    start = time.time()
    report = VerifyReport(scope=scope)
    jobs = []
    families = []
    for idx, family in enumerate(_iter_scope_families(scope)):
        if budget is not None and idx >= budget:
            report.partial = True
            break
        families.append(family)
        jobs.append((family.to_json(), scope.exact, scope.trials,
                     scope.seed + 7919 * idx))
    if threads > 1:
        import multiprocessing
        with multiprocessing.Pool(threads) as pool:
            labels = list(pool.imap(_classify_indexed, jobs, chunksize=64))
    else:
        labels = [_classify_indexed(j) for j in jobs]
    for family, label in zip(families, labels):
        if label == COUNTEREXAMPLE and not scope.exact:
            report.rechecked += 1
            label = classify_family(family, exact=True)
        report.tested += 1
        report.counts[label] += 1
        if label in (COUNTEREXAMPLE, NONZERO_GRP):
            entry = {"family": family.to_json(), "classification": label}
            if label == COUNTEREXAMPLE:
                report.counterexamples.append(entry)
        # converse anomalies are counted but not stored: every zero-grp cell
        # can be reproduced from the scope, and none has ever appeared
    report.counterexamples.sort(key=lambda e: json.dumps(e, sort_keys=True))
    if ce_path and report.counterexamples:
        with open(ce_path, "w") as fh:
            json.dump(report.counterexamples, fh, indent=2, sort_keys=True)
    report.runtime = time.time() - start
    return report


# ---------------------------------------------------------------------------
# support-matrix enumeration
# ---------------------------------------------------------------------------

def enumerate_support_matrices(m: int, n: int, canonical: bool = True
                               ) -> Iterator[SupportMatrix]:
    """All m x n support matrices whose rows have at most m-1 zeros (the
    shape expressible as a root family), as one representative per orbit
    under column relabeling and row permutation when canonical.

    A matrix up to column order is a multiset of column bitmasks, so the
    enumeration walks nondecreasing mask tuples under per-row zero budgets
    and keeps the tuples that are minimal among their row permutations.
    """
    if not 1 < m <= n:
        raise ValueError(f"need 1 < m <= n, got m={m}, n={n}")
    full = (1 << m) - 1
    perms = list(permutations(range(m)))

    def permute_mask(mask: int, perm) -> int:
        out = 0
        for new_pos, old_pos in enumerate(perm):
            if mask & (1 << old_pos):
                out |= 1 << new_pos
        return out

    def is_canonical(masks: tuple[int, ...]) -> bool:
        for perm in perms:
            if tuple(sorted(permute_mask(v, perm) for v in masks)) < masks:
                return False
        return True

    def walk(next_mask: int, left: int, zero_budget: list[int], chosen: list[int]):
        if left == 0:
            masks = tuple(chosen)
            if not canonical or is_canonical(masks):
                bits = tuple(tuple((mask >> i) & 1 for mask in masks) for i in range(m))
                yield SupportMatrix(m, n, bits)
            return
        for mask in range(next_mask, full + 1):
            zeros = [i for i in range(m) if not mask & (1 << i)]
            if any(zero_budget[i] == 0 for i in zeros):
                continue
            for i in zeros:
                zero_budget[i] -= 1
            chosen.append(mask)
            yield from walk(mask, left - 1, zero_budget, chosen)
            chosen.pop()
            for i in zeros:
                zero_budget[i] += 1

    yield from walk(0, n, [m - 1] * m, [])


def random_support_matrix(m: int, n: int, rng) -> SupportMatrix:
    """A support matrix with seeded random zero patterns, at most m-1
    zeros per row (not filtered for the completability bound)."""
    rows = []
    for _ in range(m):
        zeros = set(rng.sample(range(n), rng.randrange(m)))
        rows.append(tuple(0 if j in zeros else 1 for j in range(n)))
    return SupportMatrix(m, n, tuple(rows))


# ---------------------------------------------------------------------------
# support-matrix equivalence check
# ---------------------------------------------------------------------------

@dataclass
class EquivalenceReport:
    m: int
    n: int
    total: int
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "total": self.total,
                "checked": self.checked, "ok": self.ok,
                "violations": list(self.violations)}


def check_mds_rp_equivalence(m: int, n: int, limit: int | None = None,
                             seed: int = 0) -> EquivalenceReport:
    """On support matrices with equal row supports of size n-m+1, the
    completability bound must hold exactly when the complement family has
    no rectangular structure.  Exhaustive up to ``limit`` matrices, then
    seeded sampling."""
    support_size = n - m + 1
    per_row = list(combinations(range(1, n + 1), support_size))
    total = len(per_row) ** m
    report = EquivalenceReport(m=m, n=n, total=total, checked=0, violations=[])

    def check(rows: tuple) -> None:
        bits = tuple(tuple(1 if j in row else 0 for j in range(1, n + 1)) for row in rows)
        mat = SupportMatrix(m, n, bits)
        cond, _ = mds_condition(mat)
        rp, _ = has_rp(to_root_family(mat))
        report.checked += 1
        if cond != (not rp):
            report.violations.append(mat.to_json())

    if limit is None or total <= limit:
        for rows in product(*([per_row] * m)):
            check(rows)
    else:
        import random as _random
        rng = _random.Random(seed)
        for _ in range(limit):
            check(tuple(per_row[rng.randrange(len(per_row))] for _ in range(m)))
    return report


# ---------------------------------------------------------------------------
# reduction property suite
# ---------------------------------------------------------------------------

REDUCTION_PROPERTIES = (
    "top-degree-membership",   # every full-order subset of the non-survivors
                               # sits inside a degree-(m-1) set there
    "weak-reducibility",       # ... and is weakly reducible in the full family
    "disjoint-membership",     # strongly reducible full-order subsets do not
                               # share non-survivor sets
    "breaks-full-order",       # the process removes something from each
                               # strongly reducible full-order subset
)


@dataclass
class ReductionPropertyReport:
    m: int
    n: int
    profile: tuple[int, ...]
    families: int = 0
    gnrp_families: int = 0
    traces: int = 0
    stuck: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and self.stuck == 0

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "profile": list(self.profile),
                "families": self.families, "gnrp_families": self.gnrp_families,
                "traces": self.traces, "stuck": self.stuck, "ok": self.ok,
                "violations": list(self.violations)}


def _check_trace_properties(family: RootFamily, trace, check_breaks: bool,
                            violations: list) -> None:
    m = family.m
    degrees = family.degrees
    star = trace.star_indices
    star_subsets = [rs for rs in all_rs_subsets(family, scope=star)
                    if rs.r + rs.s == m]
    strong = {rs.elements for rs in strongly_reducible_subsets(family)}

    def log(prop: str, rs) -> None:
        violations.append({"property": prop, "family": family.to_json(),
                           "survivor": trace.survivor,
                           "removed": sorted(trace.removed),
                           "subset": sorted(rs.elements),
                           "members": sorted(rs.members)})

    for rs in star_subsets:
        if not any(degrees[i - 1] == m - 1 for i in rs.members):
            log("top-degree-membership", rs)
        if not weakly_reducible(family, rs.elements):
            log("weak-reducibility", rs)
    strong_star = [rs for rs in star_subsets if rs.elements in strong]
    for a, b in combinations(strong_star, 2):
        if a.members & b.members:
            log("disjoint-membership", a)
    if check_breaks:
        for rs in strong_star:
            if not (rs.elements & trace.removed):
                log("breaks-full-order", rs)


def check_reduction_properties(m: int, profile: Sequence[int], n: int,
                               samples: int = 0, seed: int = 0,
                               exhaustive: bool = False,
                               max_traces: int | None = None) -> ReductionPropertyReport:
    """Drive the process with every free choice over GNRP inputs and check
    the four structural properties on each trace.

    The breaks-full-order property is only asserted inside its proven
    regimes (any degrees for m <= 4; all degrees m-1 for m = 5); outside
    them violations are logged all the same, never raised.
    """
    prof = _check_profile(m, n, profile)
    report = ReductionPropertyReport(m=m, n=n, profile=prof)
    check_breaks = m <= 4 or all(d == m - 1 for d in prof)

    if exhaustive:
        families: Iterable[RootFamily] = enumerate_families(m, n, prof, canonical=True)
    else:
        import random as _random
        rng = _random.Random(seed)

        def sample_iter():
            produced = 0
            attempts = 0
            while produced < samples and attempts < samples * 1000:
                attempts += 1
                sets = [rng.sample(range(1, n + 1), d) for d in prof]
                fam = RootFamily.from_sets(n, sets)
                if not has_grp(fam)[0]:
                    produced += 1
                    yield fam

        families = sample_iter()

    for family in families:
        report.families += 1
        if has_grp(family)[0]:
            continue
        report.gnrp_families += 1
        try:
            traces = reduce_all(family, max_traces=max_traces)
        except StuckGRP:
            report.stuck += 1
            report.violations.append({"property": "stuck-on-gnrp",
                                      "family": family.to_json()})
            continue
        for trace in traces:
            report.traces += 1
            _check_trace_properties(family, trace, check_breaks, report.violations)
    return report
