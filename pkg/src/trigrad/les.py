"""Three-periodic long exact sequences of graded spaces with fixed map degrees.

Everything here works at the level of Poincare polynomials: exactness of

    ... -> A --f--> B --g--> C --h--> A -> ...

with shift degrees (d_f, d_g, d_h) is the statement that each node splits as
kernel plus shifted kernel of the next map:

    A = K_A + d_f^{-1} K_B,   B = K_B + d_g^{-1} K_C,   C = K_C + d_h^{-1} K_A.

``check_exact`` decides feasibility of these identities degree by degree
after sl(n)-projection (the sequences are sequences of sl(n) homologies; the
(a,q)-bigrading is a lift).  ``solve_corner`` solves for the unknown node A
given B and C together with their X-orbit structure, the situation used
when B is totally reduced so that every generator of B is killed by X and
can only map onto ker(X) in C, i.e. onto string tops and free generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import TrigradError
from .families import FamilyPoincare
from .grading import TriDegree
from .poly import Poincare
from .strings import Orbit, StringModule


@dataclass(frozen=True)
class LesSpec:
    """Node roles and the three map degrees of a 3-periodic sequence."""

    name: str
    roles: Tuple[str, str, str]
    d_f: TriDegree
    d_g: TriDegree
    d_h: TriDegree


# Built-in sequences.  The once-reduced -> totally-reduced sequence has the
# X map first; the skein-triangle sequences carry the sl(N) shift (N, -1/2)
# in its a-lift a*t^(-1/2) and the returning map a^(-2)*t^2.
TOTRED = LesSpec(
    "TOTRED",
    ("reduced", "reduced", "totally-reduced"),
    TriDegree(0, 2, 0),
    TriDegree(0, -1, 1),
    TriDegree(0, -1, 1),
)
LES = LesSpec(
    "LES",
    ("negative-crossing", "resolved-totally-reduced", "positive-crossing"),
    TriDegree(1, 0, -1),
    TriDegree(1, 0, -1),
    TriDegree(-2, 0, 4),
)
KTOTRED = LesSpec(
    "KTOTRED",
    ("negative-link", "resolved-knot-totally-reduced", "positive-link"),
    TriDegree(1, 0, -1),
    TriDegree(1, 0, -1),
    TriDegree(-2, 0, 4),
)

BUILTIN_SPECS = {s.name: s for s in (TOTRED, LES, KTOTRED)}


@dataclass
class ExactnessWitness:
    """Kernel polynomials at the three nodes, in sl(n)-projected degrees."""

    k_a: Poincare
    k_b: Poincare
    k_c: Poincare


def check_exact(
    spec: LesSpec,
    p_a: Poincare,
    p_b: Poincare,
    p_c: Poincare,
    n: int,
) -> Optional[ExactnessWitness]:
    """Find kernel polynomials certifying exactness, or None if infeasible.

    The three node polynomials are projected to sl(n) bidegrees.  The
    per-degree identities decouple into finite alternating chains (the
    composite shift strictly raises t-degree), so each chain is solved by
    propagation from its forced zero ends; the witness is unique.
    """
    occ = {
        "A": _project(p_a, n),
        "B": _project(p_b, n),
        "C": _project(p_c, n),
    }
    shifts = {
        "A": spec.d_f.proj(n),
        "B": spec.d_g.proj(n),
        "C": spec.d_h.proj(n),
    }
    succ = {"A": "B", "B": "C", "C": "A"}
    pred = {"A": "C", "B": "A", "C": "B"}

    # Variables: kernel multiplicity k_X[d] for every occupied degree.
    vars_: Dict[Tuple[str, Tuple[int, int]], Optional[int]] = {
        (node, d): None for node in "ABC" for d in occ[node]
    }

    def eq_vars(node: str, d: Tuple[int, int]):
        """Variables of the identity at (node, d): k_node[d] + k_succ[d + shift]."""
        out = []
        if (node, d) in vars_:
            out.append((node, d))
        nxt = succ[node]
        d2 = (d[0] + shifts[node][0], d[1] + shifts[node][1])
        if (nxt, d2) in vars_:
            out.append((nxt, d2))
        return out

    # Every variable sits in exactly two identities; collect the relevant ones.
    eqs: Dict[Tuple[str, Tuple[int, int]], int] = {}
    for node, d in vars_:
        eqs[(node, d)] = occ[node].get(d, 0)
        p = pred[node]
        dp = (d[0] - shifts[p][0], d[1] - shifts[p][1])
        eqs.setdefault((p, dp), occ[p].get(dp, 0))

    changed = True
    while changed:
        changed = False
        for (node, d), rhs in eqs.items():
            vs = eq_vars(node, d)
            unknown = [v for v in vs if vars_[v] is None]
            known_sum = sum(vars_[v] for v in vs if vars_[v] is not None)
            if not unknown:
                if known_sum != rhs:
                    return None
                continue
            if len(unknown) == 1:
                val = rhs - known_sum
                if val < 0:
                    return None
                vars_[unknown[0]] = val
                changed = True

    if any(v is None for v in vars_.values()):
        # Chains are finite with forced zero boundary equations, so full
        # propagation always terminates; leftovers mean an internal cycle.
        raise TrigradError("unresolved exactness chain (unexpected cycle)")

    def kernel(node: str) -> Poincare:
        return Poincare(
            {
                TriDegree(0, d[0], d[1]): v
                for (nd, d), v in vars_.items()
                if nd == node and v
            }
        )

    return ExactnessWitness(kernel("A"), kernel("B"), kernel("C"))


def _project(p: Poincare, n: int) -> Dict[Tuple[int, int], int]:
    out: Dict[Tuple[int, int], int] = {}
    for mono, mult in p.items():
        key = mono.proj(n)
        out[key] = out.get(key, 0) + mult
    return out


# ---------------------------------------------------------------------------
# corner solving


@dataclass
class PairGroup:
    """One ambiguous source/target degree class with integer capacity.

    Promoting one unit of the group keeps a B-generator in the kernel and a
    C-generator in the cokernel; both then contribute to A through the usual
    lifts.  Unpromoted units are isomorphisms and contribute nothing.
    """

    source: TriDegree        # degree in B
    target: TriDegree        # degree in C (merged name for string tops)
    source_lift: TriDegree   # source - d_f
    target_lift: TriDegree   # target + d_h
    capacity: int
    target_is_top: bool
    psi_partner: Optional[int] = None  # index of the psi-linked group


@dataclass
class CornerSolution:
    guaranteed: FamilyPoincare
    groups: List[PairGroup]
    forced_kernel: Poincare = field(default_factory=Poincare)
    forced_cokernel: FamilyPoincare = field(default_factory=FamilyPoincare)

    def possible_from_kernel(self) -> List[Tuple[TriDegree, int]]:
        return [(g.source_lift, g.capacity) for g in self.groups]

    def possible_from_cokernel(self) -> List[Tuple[TriDegree, int]]:
        return [(g.target_lift, g.capacity) for g in self.groups]


def solve_corner(spec: LesSpec, module_b: StringModule, module_c: StringModule) -> CornerSolution:
    """Solve for the unknown first node A of spec given B and C with X-orbits.

    Every generator of B must be a length-1 orbit (X acts as zero there);
    its image under the middle map lies in ker(X) of C, i.e. on a string top
    or a length-1 generator.  A generator of B with unoccupied image degree
    is forced into the kernel and lifts to A by d_f^{-1}; string interiors,
    string bottoms and unhit generators of C are forced into the cokernel
    and lift to A by d_h.  Source/target degree classes where a map may or
    may not vanish are returned as capacity-graded pair groups.
    """
    for ob in module_b.orbits:
        if ob.c is not None:
            raise TrigradError("corner solve requires X to act as zero on the middle node")

    # Available targets in C: free generators and string tops, by merged name.
    plain_avail: Dict[TriDegree, int] = {}
    top_avail: Dict[TriDegree, int] = {}
    for ob in module_c.orbits:
        if ob.c is None:
            plain_avail[ob.base] = plain_avail.get(ob.base, 0) + ob.mult
        else:
            top_avail[ob.top_name] = top_avail.get(ob.top_name, 0) + ob.mult

    remaining_plain = dict(plain_avail)
    remaining_top = dict(top_avail)
    hit_plain: Dict[TriDegree, int] = {}
    hit_top: Dict[TriDegree, int] = {}
    forced_kernel: Dict[TriDegree, int] = {}
    groups: List[PairGroup] = []

    for ob in sorted(module_b.orbits, key=lambda o: o.base.sort_key()):
        src, mult = ob.base, ob.mult
        image = src + spec.d_g
        avail = remaining_plain.get(image, 0) + remaining_top.get(image, 0)
        cap = min(mult, avail)
        if mult > avail:
            forced_kernel[src] = forced_kernel.get(src, 0) + (mult - avail)
        if cap:
            is_top = remaining_plain.get(image, 0) == 0
            groups.append(
                PairGroup(
                    source=src,
                    target=image,
                    source_lift=src - spec.d_f,
                    target_lift=image + spec.d_h,
                    capacity=cap,
                    target_is_top=is_top,
                )
            )
            # Consume target availability, free generators first.
            take_plain = min(cap, remaining_plain.get(image, 0))
            if take_plain:
                remaining_plain[image] -= take_plain
                hit_plain[image] = hit_plain.get(image, 0) + take_plain
            if cap - take_plain:
                remaining_top[image] -= cap - take_plain
                hit_top[image] = hit_top.get(image, 0) + (cap - take_plain)

    guaranteed: Dict[Tuple[TriDegree, Optional[int]], int] = {}
    forced_coker: Dict[Tuple[TriDegree, Optional[int]], int] = {}

    def add(store, mono: TriDegree, c: Optional[int], mult: int = 1):
        if mult:
            store[(mono, c)] = store.get((mono, c), 0) + mult

    for src, mult in forced_kernel.items():
        add(guaranteed, src - spec.d_f, None, mult)

    for ob in module_c.orbits:
        if ob.c is None:
            excess = ob.mult - min(hit_plain.get(ob.base, 0), ob.mult)
            taken = min(hit_plain.get(ob.base, 0), ob.mult)
            if taken:
                hit_plain[ob.base] -= taken
            add(guaranteed, ob.base + spec.d_h, None, excess)
            add(forced_coker, ob.base + spec.d_h, None, excess)
        else:
            hit = min(hit_top.get(ob.top_name, 0), ob.mult)
            if hit:
                hit_top[ob.top_name] -= hit
            unhit = ob.mult - hit
            # Orbits whose top may be hit keep interior+bottom in the
            # cokernel for sure: a one-step-shorter string.
            if hit and ob.c is not None:
                shorter = (ob.base + TriDegree(0, -1, 0) + spec.d_h, ob.c - 1)
                add(guaranteed, shorter[0], shorter[1], hit)
                add(forced_coker, shorter[0], shorter[1], hit)
            if unhit:
                add(guaranteed, ob.base + spec.d_h, ob.c, unhit)
                add(forced_coker, ob.base + spec.d_h, ob.c, unhit)

    _link_psi_partners(groups)
    return CornerSolution(
        guaranteed=FamilyPoincare(guaranteed),
        groups=groups,
        forced_kernel=Poincare(forced_kernel),
        forced_cokernel=FamilyPoincare(forced_coker),
    )


def _link_psi_partners(groups: List[PairGroup]) -> None:
    for i, g in enumerate(groups):
        if g.psi_partner is not None:
            continue
        want_tgt = -g.source_lift
        want_src = -g.target_lift
        for j in range(i, len(groups)):
            h = groups[j]
            if h.psi_partner is not None and j != i:
                continue
            if h.target_lift == want_tgt and h.source_lift == want_src:
                g.psi_partner = j
                h.psi_partner = i
                break


def psi_filter(sol: CornerSolution) -> Tuple[CornerSolution, List[PairGroup]]:
    """Drop pair groups whose lifts cannot be mirrored by the psi involution.

    A promotion is only admissible when another group supplies the degree-
    negated lifts (possibly the group itself); unmatched groups are resolved
    as isomorphisms.  Returns the filtered solution and the dropped groups.
    """
    kept = [g for g in sol.groups if g.psi_partner is not None]
    dropped = [g for g in sol.groups if g.psi_partner is None]
    filtered = CornerSolution(
        guaranteed=sol.guaranteed,
        groups=kept,
        forced_kernel=sol.forced_kernel,
        forced_cokernel=sol.forced_cokernel,
    )
    _relink(filtered.groups, sol.groups)
    return filtered, dropped


def point_filter(
    sol: CornerSolution, deg_of_page: "callable", max_k: int = 6
) -> Tuple[CornerSolution, List[PairGroup]]:
    """Drop groups one of whose lifts can never cancel in the collapse to a point.

    A lifted generator is dead when no generator degree in the universe
    (guaranteed free generators plus every remaining lift) sits one page
    differential away, in either direction, on any page.  Dead promotions
    would survive to the last page and violate one-dimensionality, so the
    group and its psi partner are resolved as isomorphisms.  Iterates to a
    fixpoint since removals shrink the universe.
    """
    groups = list(sol.groups)
    while True:
        _relink(groups, groups)
        universe = {m for (m, c), _ in sol.guaranteed.items() if c is None}
        for g in groups:
            universe.add(g.source_lift)
            universe.add(g.target_lift)

        def alive(mono: TriDegree) -> bool:
            for k in range(1, max_k + 1):
                d = deg_of_page(k)
                if mono + d in universe or mono - d in universe:
                    return True
            return False

        dead_idx = {
            i
            for i, g in enumerate(groups)
            if not (alive(g.source_lift) and alive(g.target_lift))
        }
        if not dead_idx:
            break
        for i in list(dead_idx):
            j = groups[i].psi_partner
            if j is not None:
                dead_idx.add(j)
        groups = [g for i, g in enumerate(groups) if i not in dead_idx]
    out = CornerSolution(
        guaranteed=sol.guaranteed,
        groups=groups,
        forced_kernel=sol.forced_kernel,
        forced_cokernel=sol.forced_cokernel,
    )
    _relink(out.groups, sol.groups)
    kept_ids = {id(g) for g in out.groups}
    dropped = [g for g in sol.groups if id(g) not in kept_ids]
    return out, dropped


def _relink(groups: List[PairGroup], _old: List[PairGroup]) -> None:
    for g in groups:
        g.psi_partner = None
    _link_psi_partners(groups)


def enumerate_candidates(sol: CornerSolution, promoted: Dict[int, int]) -> FamilyPoincare:
    """Candidate A-polynomial for a choice of promotion counts per group.

    ``promoted`` maps group index -> number of surviving pairs (at most the
    capacity).  Each surviving pair contributes its source lift and its
    target lift as free generators on top of the guaranteed part.
    """
    extra: Dict[Tuple[TriDegree, Optional[int]], int] = {}
    for idx, count in promoted.items():
        if count < 0 or count > sol.groups[idx].capacity:
            raise ValueError(f"promotion count {count} out of range for group {idx}")
        if count:
            g = sol.groups[idx]
            extra[(g.source_lift, None)] = extra.get((g.source_lift, None), 0) + count
            extra[(g.target_lift, None)] = extra.get((g.target_lift, None), 0) + count
    return sol.guaranteed + FamilyPoincare(extra)


def psi_consistent_choices(sol: CornerSolution) -> List[Dict[int, int]]:
    """All promotion maps where psi-linked groups toggle together."""
    links: List[Tuple[Tuple[int, ...], int]] = []
    seen = set()
    for i, g in enumerate(sol.groups):
        if i in seen:
            continue
        j = g.psi_partner
        if j is None or j == i:
            links.append(((i,), g.capacity))
            seen.add(i)
        else:
            links.append(((i, j), min(g.capacity, sol.groups[j].capacity)))
            seen.update((i, j))
    choices: List[Dict[int, int]] = [{}]
    for idxs, cap in links:
        choices = [
            {**base, **{i: count for i in idxs}}
            for base in choices
            for count in range(cap + 1)
        ]
    return choices


# ---------------------------------------------------------------------------
# reassembly of per-N evaluations into bracket form


def assemble_family(evals: Dict[int, Poincare]) -> FamilyPoincare:
    """Fit per-N polynomials to plain monomials plus bracket strings.

    The evaluations (N -> Poincare, at least two consecutive N) must come
    from one family: within each (t-degree, a-degree) slot the q-exponents
    form constant monomials plus arithmetic strings of length N+c.  Raises
    AssemblyError when no exact fit exists.
    """
    from .errors import AssemblyError

    ns = sorted(evals)
    if len(ns) < 2:
        raise AssemblyError("need at least two evaluations")
    slots: Dict[Tuple[int, int], Dict[int, Dict[int, int]]] = {}
    for n in ns:
        for mono, mult in evals[n].items():
            slot = slots.setdefault((mono.t2, mono.a), {m: {} for m in ns})
            slot[n][mono.q] = slot[n].get(mono.q, 0) + mult
    terms: Dict[Tuple[TriDegree, Optional[int]], int] = {}
    for (t2, a), per_n in sorted(slots.items()):
        fitted = _fit_slot({n: dict(qs) for n, qs in per_n.items()}, ns)
        if fitted is None:
            raise AssemblyError(f"no bracket/plain fit at t2={t2}, a={a}")
        for q0, c in fitted:
            key = (TriDegree(a, q0, t2), c)
            terms[key] = terms.get(key, 0) + 1
    return FamilyPoincare(terms)


def _fit_slot(per_n: Dict[int, Dict[int, int]], ns: List[int]):
    """Backtracking exact cover of q-multisets by plains and bracket runs."""
    if all(not per_n[n] for n in ns):
        return []
    n_hi = ns[-1]
    if not per_n[n_hi]:
        return None
    top = max(per_n[n_hi])

    def present_everywhere(q: int) -> bool:
        return all(per_n[n].get(q, 0) > 0 for n in ns)

    def take(qs_by_n):
        for n, q in qs_by_n:
            per_n[n][q] -= 1
            if not per_n[n][q]:
                del per_n[n][q]

    def put(qs_by_n):
        for n, q in qs_by_n:
            per_n[n][q] = per_n[n].get(q, 0) + 1

    # Hypothesis: plain monomial at the current top exponent.
    if present_everywhere(top):
        moves = [(n, top) for n in ns]
        take(moves)
        rest = _fit_slot(per_n, ns)
        if rest is not None:
            return [(top, None)] + rest
        put(moves)

    # Hypothesis: top is the highest entry of a bracket run [N+c].
    for c in range(2, -min(ns) - 1, -1):
        q0 = top - (n_hi + c - 1)
        lengths_ok = all(n + c >= 0 for n in ns)
        if not lengths_ok:
            continue
        moves = []
        ok = True
        for n in ns:
            for j in range(n + c - 1, -(n + c) - 1, -2):
                q = q0 + j
                have = per_n[n].get(q, 0) - sum(1 for mn, mq in moves if mn == n and mq == q)
                if have <= 0:
                    ok = False
                    break
                moves.append((n, q))
            if not ok:
                break
        if not ok:
            continue
        take(moves)
        rest = _fit_slot(per_n, ns)
        if rest is not None:
            return [(q0, c)] + rest
        put(moves)
    return None
