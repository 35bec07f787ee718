"""Round-by-round root removal with order-maximal subset breaking.

Each round picks a strongly reducible subset (a weakly reducible subset
of maximal order), then removes one of its removable roots, preferring
roots shared by the most degree-(m-1) sets.  Rounds repeat until a
single degree-(m-1) set remains.  The trace records every choice plus,
per removed root, the number of sets containing it at removal time;
since every removed root is distinct, that count equals the count in
the initial family.

The derivative identity checked here ties the trace to the coefficient
determinant: dividing out the removed roots corresponds to iterated
divided-power (Hasse) derivatives of the determinant, up to the sign
(-1)^(sum of multiplicities).  Divided powers rather than plain
iterated derivatives: the plain ones pick up a factorial per removed
root, which is both noise over the integers and fatal in small
characteristic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .polyring import (MultiPoly, coeff_matrix_det, hasse_derivative,
                       probably_zero, root_poly)
from .structures import RootFamily, RSSubset, all_rs_subsets, root_polys


class StuckGRP(RuntimeError):
    """No strongly reducible subset although several sets have degree m-1.

    Happens exactly when two degree-(m-1) sets are identical; the pair is
    attached as the witness."""

    def __init__(self, pair: tuple[int, int]):
        super().__init__(f"identical degree-(m-1) sets at indices {pair}")
        self.pair = pair


class NotAcceptable(RuntimeError):
    """Terminal degrees violate the one-survivor shape (process bug)."""


@dataclass(frozen=True)
class ReductionRound:
    index: int
    subset: RSSubset
    beta: int
    degrees_after: tuple[int, ...]


@dataclass(frozen=True)
class ReductionTrace:
    initial: RootFamily
    rounds: tuple[ReductionRound, ...]
    removed: frozenset[int]
    multiplicities: dict[int, int]
    final: RootFamily
    permutation: tuple[int, ...]  # original 1-based indices, survivor last

    @property
    def survivor(self) -> int:
        return self.permutation[-1]

    @property
    def star_indices(self) -> tuple[int, ...]:
        """Original indices of the non-surviving sets."""
        return self.permutation[:-1]

    def to_json(self) -> dict:
        return {
            "status": "accepted",
            "rounds": [{"round": r.index,
                        "subset": sorted(r.subset.elements),
                        "members": sorted(r.subset.members),
                        "r": r.subset.r, "s": r.subset.s,
                        "beta": r.beta,
                        "degrees": list(r.degrees_after)} for r in self.rounds],
            "removed": sorted(self.removed),
            "multiplicities": {str(k): v for k, v in sorted(self.multiplicities.items())},
            "final_sets": [sorted(N) for N in self.final.sets],
            "permutation": list(self.permutation),
        }


# ---------------------------------------------------------------------------
# reducibility predicates
# ---------------------------------------------------------------------------

def removable_elements(family: RootFamily, subset: frozenset[int] | set[int]) -> frozenset[int]:
    """Elements of the subset that are roots of at least one but not every
    degree-(m-1) set."""
    if not subset:
        raise ValueError("subset must be nonempty")
    m = family.m
    top = [N for N in family.sets if len(N) == m - 1]
    out = set()
    for beta in subset:
        hits = sum(1 for N in top if beta in N)
        if 0 < hits < len(top):
            out.add(beta)
    return frozenset(out)


def weakly_reducible(family: RootFamily, subset: frozenset[int] | set[int]) -> bool:
    """Contained in some degree-(m-1) set and owning a removable element."""
    m = family.m
    S = frozenset(subset)
    in_top = any(S <= N for N in family.sets if len(N) == m - 1)
    return in_top and bool(removable_elements(family, S))


def strongly_reducible_subsets(family: RootFamily) -> list[RSSubset]:
    """The weakly reducible subsets of maximal order (all of them)."""
    candidates = [rs for rs in all_rs_subsets(family) if weakly_reducible(family, rs.elements)]
    if not candidates:
        return []
    best = max(rs.order_key() for rs in candidates)
    top = [rs for rs in candidates if rs.order_key() == best]
    top.sort(key=lambda rs: (sorted(rs.elements), sorted(rs.members)))
    return top


# ---------------------------------------------------------------------------
# the process
# ---------------------------------------------------------------------------

def _beta_options(family: RootFamily, subset: frozenset[int]) -> list[int]:
    """Removable roots of the subset hitting the most degree-(m-1) sets;
    all tied maximizers, lowest index first."""
    m = family.m
    top = [N for N in family.sets if len(N) == m - 1]
    removable = removable_elements(family, subset)
    counts = {beta: sum(1 for N in top if beta in N) for beta in removable}
    best = max(counts.values())
    return sorted(b for b, c in counts.items() if c == best)


def _top_count(family: RootFamily) -> int:
    m = family.m
    return sum(1 for d in family.degrees if d == m - 1)


def _identical_top_pair(family: RootFamily) -> tuple[int, int]:
    m = family.m
    tops = [(i + 1, N) for i, N in enumerate(family.sets) if len(N) == m - 1]
    for a in range(len(tops)):
        for b in range(a + 1, len(tops)):
            if tops[a][1] == tops[b][1]:
                return (tops[a][0], tops[b][0])
    raise AssertionError("no strongly reducible subset yet no identical pair")


def _finish(initial: RootFamily, rounds: list[ReductionRound],
            multiplicities: dict[int, int], final: RootFamily) -> ReductionTrace:
    m = final.m
    top = [i + 1 for i, d in enumerate(final.degrees) if d == m - 1]
    if len(top) != 1:
        raise NotAcceptable(f"terminal degrees {final.degrees} have {len(top)} "
                            f"sets of degree m-1")
    perm = sorted(range(1, m + 1), key=lambda i: (final.degrees[i - 1], i))
    return ReductionTrace(initial=initial, rounds=tuple(rounds),
                          removed=frozenset(multiplicities),
                          multiplicities=dict(multiplicities), final=final,
                          permutation=tuple(perm))


def reduce_family(family: RootFamily, policy: str = "lex") -> ReductionTrace:
    """Run the process to termination with a deterministic policy.

    ``lex`` resolves both free choices by lowest index: the subset with
    the smallest sorted element tuple, then the smallest maximizing root.
    """
    if policy != "lex":
        raise ValueError(f"unknown policy {policy!r}; use reduce_all for enumeration")
    m = family.m
    if all(d != m - 1 for d in family.degrees):
        raise ValueError("need at least one set of degree m-1")
    cur = family
    rounds: list[ReductionRound] = []
    mult: dict[int, int] = {}
    budget = sum(family.degrees)
    while _top_count(cur) > 1:
        if len(rounds) > budget:
            raise AssertionError("round budget exceeded; process failed to terminate")
        srs = strongly_reducible_subsets(cur)
        if not srs:
            raise StuckGRP(_identical_top_pair(cur))
        subset = srs[0]
        beta = _beta_options(cur, subset.elements)[0]
        mult[beta] = sum(1 for N in cur.sets if beta in N)
        cur = cur.without_root(beta)
        if _top_count(cur) < 1:
            raise AssertionError("no degree-(m-1) set survived a round")
        rounds.append(ReductionRound(len(rounds) + 1, subset, beta, cur.degrees))
    return _finish(family, rounds, mult, cur)


def reduce_all(family: RootFamily, max_traces: int | None = None) -> list[ReductionTrace]:
    """Every trace reachable by the free choices (subset, then any root
    tied on the maximizer rule).  Used for property checks that must hold
    for arbitrary choices."""
    m = family.m
    if all(d != m - 1 for d in family.degrees):
        raise ValueError("need at least one set of degree m-1")
    out: list[ReductionTrace] = []

    def walk(cur: RootFamily, rounds: list[ReductionRound], mult: dict[int, int]):
        if max_traces is not None and len(out) >= max_traces:
            return
        if _top_count(cur) <= 1:
            out.append(_finish(family, rounds, mult, cur))
            return
        srs = strongly_reducible_subsets(cur)
        if not srs:
            raise StuckGRP(_identical_top_pair(cur))
        for subset in srs:
            for beta in _beta_options(cur, subset.elements):
                nxt = cur.without_root(beta)
                rounds.append(ReductionRound(len(rounds) + 1, subset, beta, nxt.degrees))
                mult[beta] = sum(1 for N in cur.sets if beta in N)
                walk(nxt, rounds, mult)
                rounds.pop()
                del mult[beta]

    walk(family, [], {})
    return out


# ---------------------------------------------------------------------------
# the determinant identity along a trace
# ---------------------------------------------------------------------------

def check_reduction_identity(family: RootFamily, trace: ReductionTrace,
                             exact: bool = True, trials: int = 3,
                             seed: int = 0) -> bool:
    """Verify both halves of the trace/determinant relation:

    1. applying, for each removed root, its multiplicity as a divided-power
       derivative to the determinant of the initial family equals
       (-1)^(sum of multiplicities) times the determinant of the reduced
       family (columns kept in the original order);
    2. after reindexing so the surviving set comes last, the reduced m x m
       determinant collapses to the (m-1) x (m-1) determinant of the
       non-survivors (their stacks rebuilt at height m-1).

    exact=False replaces symbolic equality with a randomized difference
    test at ``trials`` points (seeded).
    """
    m = family.m
    w_full = coeff_matrix_det(root_polys(family))
    deriv = w_full
    for r in sorted(trace.removed):
        deriv = hasse_derivative(deriv, r, trace.multiplicities[r])
    reduced_polys = root_polys(trace.final)
    w_reduced = coeff_matrix_det(reduced_polys)
    sign = -1 if sum(trace.multiplicities.values()) % 2 else 1
    lhs = deriv - sign * w_reduced

    perm_polys = [reduced_polys[i - 1] for i in trace.permutation]
    w_perm = coeff_matrix_det(perm_polys)
    minors = [root_poly(trace.final.sets[i - 1], m - 1, family.n)
              for i in trace.star_indices]
    w_minor = coeff_matrix_det(minors)
    rhs = w_perm - w_minor

    if exact:
        return lhs.is_zero() and rhs.is_zero()
    return (probably_zero(lhs, trials, seed)
            and probably_zero(rhs, trials, seed + 1))
