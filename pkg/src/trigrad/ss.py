"""Spectral-sequence feasibility at the graded-dimension level.

A collapse witness is a list of cancellation polynomials c_k with

    E_{k+1} = E_k - c_k * (1 + degree(k)),

all pages termwise nonnegative and the last page equal to the target.  The
search deliberately over-approximates honest differentials: any degree-
compatible pairing counts.  Feasibility plus the external constraints of
the verification pipeline is what pins down answers, never feasibility
alone.

``converge_to_point`` handles the collapse-to-one-generator filters.  It
works on X-orbit units rather than single monomials: differentials commute
with the basepoint action, so strings cancel against strings of the same
shape, and a free generator adjacent to a string endpoint may first fuse
onto the string (the fused string is the same graded space).  Fusions
commute with every other move, so the search applies fusion choices first
and then runs a pure matching, lowest t-degree outward.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .families import FamilyPoincare
from .grading import TriDegree
from .poly import Poincare
from .strings import StringModule


@dataclass(frozen=True)
class DifferentialFamily:
    """Page-indexed differential degrees.

    d(N): degree (-2k, 2Nk, 1) on page k; d(-1): degree (2-2k, 2-2k, 2k-1).
    """

    label: str
    n: Optional[int] = None

    @classmethod
    def d_n(cls, n: int) -> "DifferentialFamily":
        if n < 1:
            raise ValueError("d(N) needs N >= 1")
        return cls(f"d({n})", n)

    @classmethod
    def d_minus_one(cls) -> "DifferentialFamily":
        return cls("d(-1)", None)

    def degree(self, k: int) -> TriDegree:
        if k < 1:
            raise ValueError("pages are indexed from 1")
        if self.n is not None:
            return TriDegree(-2 * k, 2 * self.n * k, 2)
        return TriDegree(2 - 2 * k, 2 - 2 * k, 4 * k - 2)


def differential_vanishes(p: Poincare, fam: DifferentialFamily, k: int) -> bool:
    """True iff no generator pair of p is connected by the page-k degree."""
    d = fam.degree(k)
    return all((mono + d) not in p for mono, _ in p.items())


def max_relevant_page(p: Poincare, fam: DifferentialFamily, cap: int = 16) -> int:
    """Largest k whose differential degree connects two occupied degrees."""
    best = 0
    for k in range(1, cap + 1):
        if not differential_vanishes(p, fam, k):
            best = k
    return best


@dataclass
class CancellationWitness:
    pages: List[Tuple[int, Poincare]]

    def pairs_on_page(self, k: int) -> int:
        return sum(c.total_dim for page, c in self.pages if page == k)

    @property
    def total_pairs(self) -> int:
        return sum(c.total_dim for _, c in self.pages)

    def replay(self, e1: Poincare, fam: DifferentialFamily) -> Poincare:
        """Re-run the page recurrence; raises if any page goes negative."""
        current = e1
        for k, c in self.pages:
            current = current.subtract(c).subtract(c.shift(fam.degree(k)))
        return current


def collapse_feasible(
    e1: Poincare,
    target: Poincare,
    fam: DifferentialFamily,
    max_pages: Optional[int] = None,
) -> Optional[CancellationWitness]:
    """Search for a cancellation witness transforming e1 into target.

    When the target carries no a-grading but e1 does, pages are compared
    through the sl(N) specialization of the family's N; otherwise directly.
    """
    sl_mode = (
        fam.n is not None
        and any(m.a for m, _ in e1.items())
        and all(m.a == 0 for m, _ in target.items())
    )

    def matches(p: Poincare) -> bool:
        return (p.sl_specialize(fam.n) if sl_mode else p) == target

    if e1.total_dim < target.total_dim or (e1.total_dim - target.total_dim) % 2:
        return None
    if max_pages is None:
        max_pages = max_relevant_page(e1, fam)

    seen: set = set()

    def dfs(k: int, state: Poincare, floor_key) -> Optional[List[Tuple[int, TriDegree]]]:
        if matches(state):
            return []
        if k > max_pages:
            return None
        key = (k, state, floor_key)
        if key in seen:
            return None
        seen.add(key)
        d = fam.degree(k)
        # Either cancel one more pair on this page (canonically ordered to
        # avoid permutations) or move on to the next page.
        for mono, _ in state.items():
            if floor_key is not None and mono.sort_key() < floor_key:
                continue
            if (mono + d) in state:
                nxt = state.subtract(Poincare({mono: 1, mono + d: 1}))
                sub = dfs(k, nxt, mono.sort_key())
                if sub is not None:
                    return [(k, mono)] + sub
        return dfs(k + 1, state, None)

    moves = dfs(1, e1, None)
    if moves is None:
        return None
    pages: Dict[int, Dict[TriDegree, int]] = {}
    for k, mono in moves:
        pages.setdefault(k, {})
        pages[k][mono] = pages[k].get(mono, 0) + 1
    witness = CancellationWitness([(k, Poincare(c)) for k, c in sorted(pages.items())])
    assert matches(witness.replay(e1, fam))
    return witness


# ---------------------------------------------------------------------------
# collapse to a single generator, X-orbit aware

# A family-mode unit is (t2, a, q, c): c is None for a free generator, else
# the bracket offset of a string [N+c].  A per-N unit is (t2, lo, hi), a
# contiguous run in the sl(n) q-degree.
Unit = Tuple[int, int, int, Optional[int]]


@dataclass
class PointWitness:
    moves: List[str]
    survivor: TriDegree


def converge_to_point(
    e1: "FamilyPoincare | StringModule | Poincare",
    fam: DifferentialFamily,
    survivor_t2: int,
    n: Optional[int] = None,
    max_k: int = 6,
) -> Optional[PointWitness]:
    """Decide whether e1 collapses to a single unit at the given t-degree.

    Family mode (FamilyPoincare or StringModule input): units are X-orbits;
    the survivor must be one-dimensional at N = 1, i.e. a free generator or
    an [N]-string.  Per-N mode (Poincare input plus n): units are q-degree
    runs after sl(n) projection and the survivor is any single unit.
    """
    if isinstance(e1, Poincare):
        if n is None:
            raise ValueError("per-N mode needs n")
        return _converge_proj(e1, fam, survivor_t2, n, max_k)
    module = e1 if isinstance(e1, StringModule) else StringModule.from_family(e1, fuse=False)
    units: Dict[Unit, int] = {}
    for ob in module.orbits:
        u = (ob.base.t2, ob.base.a, ob.base.q, ob.c)
        units[u] = units.get(u, 0) + ob.mult
    degs = [fam.degree(k) for k in range(1, max_k + 1)]

    def fusions(state: Dict[Unit, int]):
        for brk, bc in state.items():
            if not bc or brk[3] is None:
                continue
            t2, ba, bq, c = brk
            for plain, fused in (
                ((t2, ba + 1, bq + c + 1, None), (t2, ba, bq + 1, c + 1)),
                ((t2, ba - 1, bq - c - 1, None), (t2, ba, bq - 1, c + 1)),
            ):
                if state.get(plain, 0) > 0:
                    nxt = dict(state)
                    nxt[plain] -= 1
                    nxt[brk] -= 1
                    nxt[fused] = nxt.get(fused, 0) + 1
                    yield f"fuse {plain} onto {brk}", nxt

    def survivor_ok(u: Unit) -> bool:
        return u[0] == survivor_t2 and (u[3] is None or u[3] == 0)

    def cancel_targets(state: Dict[Unit, int], u: Unit):
        t2, a, q, c = u
        for k, d in enumerate(degs, start=1):
            v = (t2 + d.t2, a + d.a, q + d.q, c)
            if state.get(v, 0) > 0:
                yield k, v

    return _orbit_search(units, fusions, cancel_targets, survivor_ok, _unit_degree)


def _unit_degree(u: Unit) -> TriDegree:
    return TriDegree(u[1], u[2], u[0])


def _converge_proj(
    e1: Poincare, fam: DifferentialFamily, survivor_t2: int, n: int, max_k: int
) -> Optional[PointWitness]:
    units: Dict[Tuple[int, int, int], int] = {}
    for mono, mult in e1.items():
        qn, t2 = mono.proj(n)
        u = (t2, qn, qn)
        units[u] = units.get(u, 0) + mult
    shifts = [fam.degree(k).proj(n) for k in range(1, max_k + 1)]

    def fusions(state):
        for u, cu in state.items():
            if not cu:
                continue
            for v, cv in state.items():
                if not cv or v[0] != u[0]:
                    continue
                if v[1] == u[2] + 2 and state.get(u, 0) and (u != v):
                    fused = (u[0], u[1], v[2])
                    nxt = dict(state)
                    nxt[u] -= 1
                    nxt[v] -= 1
                    nxt[fused] = nxt.get(fused, 0) + 1
                    yield f"fuse {u}+{v}", nxt

    def survivor_ok(u) -> bool:
        return u[0] == survivor_t2

    def cancel_targets(state, u):
        t2, lo, hi = u
        for k, (dq, dt2) in enumerate(shifts, start=1):
            v = (t2 + dt2, lo + dq, hi + dq)
            if state.get(v, 0) > 0:
                yield k, v

    return _orbit_search(
        units, fusions, cancel_targets, survivor_ok, lambda u: TriDegree(0, u[1], u[0])
    )


def _orbit_search(units, fusions, cancel_targets, survivor_ok, unit_degree):
    """Fusions first (they commute with everything), then pure matching."""
    seen_fusion: set = set()
    failed_match: set = set()

    def freeze(state) -> FrozenSet:
        return frozenset((u, m) for u, m in state.items() if m)

    def match(state, survivor):
        live = {u: m for u, m in state.items() if m}
        if not live:
            return ([], survivor) if survivor is not None else None
        key = (freeze(live), survivor is None)
        if key in failed_match:
            return None
        t_min = min(u[0] for u in live)
        u = min(u for u in live if u[0] == t_min)
        for k, v in cancel_targets(live, u):
            nxt = dict(live)
            nxt[u] -= 1
            nxt[v] -= 1
            sub = match(nxt, survivor)
            if sub is not None:
                return ([f"cancel k={k} {u} ~ {v}"] + sub[0], sub[1])
        # The one surviving generator may sit at any level; designate it
        # here and let the rest keep cancelling.
        if survivor is None and survivor_ok(u):
            nxt = dict(live)
            nxt[u] -= 1
            sub = match(nxt, u)
            if sub is not None:
                return ([f"survivor {u}"] + sub[0], sub[1])
        failed_match.add(key)
        return None

    def dfs(state):
        key = freeze(state)
        if key in seen_fusion:
            return None
        seen_fusion.add(key)
        sub = match(state, None)
        if sub is not None:
            return sub
        for label, nxt in fusions(state):
            out = dfs(nxt)
            if out is not None:
                return ([label] + out[0], out[1])
        return None

    found = dfs(units)
    if found is None:
        return None
    moves, survivor = found
    return PointWitness(moves, unit_degree(survivor))
