"""End-to-end replay of the Kinoshita-Terasaka / Conway computation.

The stages mirror the published derivation:

  1. corner-table     solve the totally-reduced skein sequence for the
                      resolved link, symmetry-filtered (first table)
  2. filtered-table   reject promotions that would survive the collapse-to-
                      a-point filter (updated table)
  3. promotion-search search promotion subsets under the point filter and
                      the N=2 Khovanov collapse; unique minimal survivor
  4. total-reduction  X-orbit total reduction of the link answer
  5. final-sequence   skein sequence against the unknot; constraint filters
                      pin the final homology
  6. cross-checks     Euler specialization, Khovanov collapse, vanishing of
                      higher differentials for N >= 3

plus the Conway-side stages reusing the same resolved-link inputs.  Every
stage compares its output against the embedded expected record and raises
StageMismatch with a degree-level diff in strict mode.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .db import HomologyDB, db_load
from .errors import StageMismatch
from .families import FamilyPoincare, format_family, format_poly, parse_poly
from .grading import TriDegree, fmt_monomial
from .les import (
    KTOTRED,
    LES,
    CornerSolution,
    assemble_family,
    check_exact,
    enumerate_candidates,
    point_filter,
    psi_consistent_choices,
    psi_filter,
    solve_corner,
)
from .poly import Poincare, format_signed
from .ss import (
    DifferentialFamily,
    collapse_feasible,
    converge_to_point,
    differential_vanishes,
)
from .strings import StringModule, x_string_total_reduce

EVAL_LEVELS = (2, 3, 4, 5)
D1 = DifferentialFamily.d_n(1)
D2 = DifferentialFamily.d_n(2)


def canonical(fam: FamilyPoincare) -> FamilyPoincare:
    """Canonical representative: the maximally fused orbit presentation."""
    return StringModule.from_family(fam).family()


# Expected generator tables for the resolved link (canonical bracket form).
TABLE1_GUARANTEED = (
    "a^3q^3t^-5 + aq^5t^-4"
    " + a^3q^-1t^-3 + [N-2]a^2q^2t^-3"
    " + aqt^-2 + [N-2]q^4t^-2"
    " + [N-2]a^2q^-2t^-1"
    " + a^-1q + aq^-1 + 3[N-2]"
    " + [N-2]a^-2q^2t"
    " + a^-1q^-1t^2 + [N-2]q^-4t^2"
    " + a^-3qt^3 + [N-2]a^-2q^-2t^3"
    " + a^-1q^-5t^4 + a^-3q^-3t^5"
)

# Possible generators, per column, as (doubled t-degree, monomial) cells.
TABLE1_POSSIBLE_FROM_KERNEL = (
    "aq^3t^-3 + aqt^-2 + a^-1q^3t^-1 + aq^-1t^-1 + a^-1q + aq^-3"
    " + a^-1q^-1t + a^-1q^-3t^2"
)
TABLE1_POSSIBLE_FROM_COKERNEL = (
    "aq^3t^-2 + aqt^-1 + a^-1q^3 + aq^-1 + a^-1qt + aq^-3t"
    " + a^-1q^-1t^2 + a^-1q^-3t^3"
)
TABLE2_POSSIBLE_FROM_KERNEL = (
    "aqt^-2 + a^-1q^3t^-1 + aq^-1t^-1 + a^-1q + aq^-3 + a^-1q^-1t"
)
TABLE2_POSSIBLE_FROM_COKERNEL = (
    "aqt^-1 + a^-1q^3 + aq^-1 + a^-1qt + aq^-3t + a^-1q^-1t^2"
)


@dataclass
class PipelineStage:
    name: str
    status: str = "pass"  # pass | fail | ambiguous
    details: List[str] = field(default_factory=list)

    def note(self, line: str):
        self.details.append(line)


@dataclass
class Report:
    stages: List[PipelineStage] = field(default_factory=list)

    @property
    def status(self) -> str:
        if any(s.status == "fail" for s in self.stages):
            return "fail"
        if any(s.status == "ambiguous" for s in self.stages):
            return "ambiguous"
        return "pass"

    def stage(self, name: str) -> PipelineStage:
        st = PipelineStage(name)
        self.stages.append(st)
        return st

    def to_text(self) -> str:
        lines = []
        for st in self.stages:
            lines.append(f"[{st.status.upper():9s}] {st.name}")
            for d in st.details:
                lines.append(f"    {d}")
        lines.append(f"overall: {self.status}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "overall": self.status,
                "stages": [
                    {"name": s.name, "status": s.status, "details": s.details}
                    for s in self.stages
                ],
            },
            indent=2,
            sort_keys=True,
        )


def poly_diff(got: Poincare, want: Poincare) -> str:
    lines = []
    degrees = {m for m, _ in got.items()} | {m for m, _ in want.items()}
    for mono in sorted(degrees, key=lambda m: m.sort_key()):
        g, w = got[mono], want[mono]
        if g != w:
            lines.append(f"  at {fmt_monomial(mono)}: got {g}, expected {w}")
    return "\n".join(lines) or "  (no monomial-level difference)"


def family_diff(got: FamilyPoincare, want: FamilyPoincare, n: int = 4) -> str:
    if got == want:
        return "  (equal)"
    return poly_diff(got.evaluate(n), want.evaluate(n)) + f"   [evaluated at N={n}]"


class PaperVerifier:
    """Replays the computation against a database; collects a report."""

    def __init__(self, db: Optional[HomologyDB] = None, strict: bool = False):
        self.db = db or db_load()
        self.strict = strict
        self.report = Report()
        self.link_solution: Optional[CornerSolution] = None
        self.link_value: Optional[FamilyPoincare] = None
        self.link_totred: Optional[Poincare] = None
        self.final_value: Optional[Poincare] = None

    # -- helpers ---------------------------------------------------------

    def _fail(self, stage: PipelineStage, diff: str):
        stage.status = "fail"
        stage.note(diff)
        if self.strict:
            raise StageMismatch(stage.name, diff)

    def _expect_family(self, stage: PipelineStage, got: FamilyPoincare,
                       want: FamilyPoincare, label: str) -> bool:
        cg, cw = canonical(got), canonical(want)
        if cg != cw:
            self._fail(stage, f"{label} differs:\n" + family_diff(cg, cw))
            return False
        stage.note(f"{label}: ok ({format_family(cw)})")
        return True

    def _expect_poincare(self, stage: PipelineStage, got: Poincare,
                         want: Poincare, label: str) -> bool:
        if got != want:
            self._fail(stage, f"{label} differs:\n" + poly_diff(got, want))
            return False
        stage.note(f"{label}: ok (dim {want.total_dim})")
        return True

    # -- stages ----------------------------------------------------------

    def stage_corner_table(self) -> PipelineStage:
        stage = self.report.stage("kt-corner-table")
        mod_b = self.db.get("hh-820m").string_module()
        mod_c = self.db.get("m-plus").string_module()
        sol = solve_corner(KTOTRED, mod_b, mod_c)
        sol, psi_dropped = psi_filter(sol)
        self.link_solution = sol
        stage.note(
            "symmetry filter dropped pairs: "
            + ", ".join(fmt_monomial(g.source_lift) for g in psi_dropped)
        )
        self._expect_family(
            stage, sol.guaranteed, parse_poly(TABLE1_GUARANTEED), "guaranteed column"
        )
        self._check_possible(stage, sol, TABLE1_POSSIBLE_FROM_KERNEL,
                             TABLE1_POSSIBLE_FROM_COKERNEL)
        self._per_level_checks(stage, sol)
        return stage

    def _check_possible(self, stage, sol, want_src_text, want_tgt_text):
        got_src = Poincare([(g.source_lift, 1) for g in sol.groups])
        got_tgt = Poincare([(g.target_lift, 1) for g in sol.groups])
        self._expect_poincare(
            stage, got_src, parse_poly(want_src_text).plain_part,
            "possible generators (kernel side)",
        )
        self._expect_poincare(
            stage, got_tgt, parse_poly(want_tgt_text).plain_part,
            "possible generators (cokernel side)",
        )

    def _per_level_checks(self, stage, sol):
        table = canonical(parse_poly(TABLE1_GUARANTEED))
        got = canonical(sol.guaranteed)
        evals = {}
        for n in EVAL_LEVELS:
            if got.evaluate(n) != table.evaluate(n):
                self._fail(stage, f"guaranteed column differs at N={n}")
                return
            evals[n] = got.evaluate(n)
        reassembled = assemble_family(evals)
        if canonical(reassembled) != got:
            self._fail(stage, "bracket reassembly of per-N evaluations differs")
            return
        stage.note(f"per-N evaluations at N={EVAL_LEVELS} reassemble to bracket form")

    def stage_filtered_table(self) -> PipelineStage:
        stage = self.report.stage("kt-filtered-table")
        sol, dropped = point_filter(self.link_solution, D1.degree)
        self.link_solution = sol
        got_drop = Poincare([(g.source_lift, 1) for g in dropped])
        want_drop = parse_poly("aq^3t^-3 + a^-1q^-3t^2").plain_part
        self._expect_poincare(stage, got_drop, want_drop, "rejected promotions")
        self._check_possible(stage, sol, TABLE2_POSSIBLE_FROM_KERNEL,
                             TABLE2_POSSIBLE_FROM_COKERNEL)
        self._expect_family(
            stage, sol.guaranteed, parse_poly(TABLE1_GUARANTEED),
            "guaranteed column (unchanged)",
        )
        return stage

    def stage_promotion_search(self, khovanov_filter: bool = True) -> PipelineStage:
        stage = self.report.stage("kt-promotion-search")
        sol = self.link_solution
        kh = self.db.get("kh-L10n36").poincare()
        survivors: List[Tuple[int, Dict[int, int], FamilyPoincare]] = []
        for choice in psi_consistent_choices(sol):
            cand = enumerate_candidates(sol, choice)
            if converge_to_point(cand, D1, 0) is None:
                continue
            if khovanov_filter:
                if collapse_feasible(canonical(cand).evaluate(2), kh, D2) is None:
                    continue
            survivors.append((sum(choice.values()), choice, cand))
        stage.note(f"{len(survivors)} candidate(s) satisfy the active filters")
        if not survivors:
            self._fail(stage, "no promotion subset satisfies the constraints")
            return stage
        survivors.sort(key=lambda s: s[0])
        if not khovanov_filter and len(survivors) > 1:
            stage.status = "ambiguous"
            stage.note(
                "ambiguous without the Khovanov filter: "
                + "; ".join(format_family(canonical(c)) for _, _, c in survivors)
            )
            return stage
        minimal = [s for s in survivors if s[0] == survivors[0][0]]
        if len(minimal) != 1:
            stage.status = "ambiguous"
            stage.note("no unique minimal promotion subset")
            return stage
        if len(survivors) > 1:
            # Larger survivors absorb symmetric pairs of free generators into
            # strings; verify they are downstream-equivalent, then select the
            # minimal one (generators are only promoted when forced).
            reductions = {
                x_string_total_reduce(StringModule.from_family(c))[2]
                for _, _, c in survivors
            }
            if len(reductions) != 1:
                stage.status = "ambiguous"
                stage.note("surviving candidates differ after total reduction")
                return stage
            stage.note(
                f"{len(survivors) - 1} non-minimal survivor(s) are "
                "downstream-equivalent to the minimal one"
            )
        self.link_value = minimal[0][2]
        self._expect_family(
            stage, self.link_value, self.db.get("link-k0").value, "resolved-link homology"
        )
        for n in EVAL_LEVELS:
            witness = check_exact(
                KTOTRED,
                canonical(self.link_value).evaluate(n),
                self.db.get("hh-820m").poincare(),
                self.db.get("m-plus").poincare(n),
                n,
            )
            if witness is None:
                self._fail(stage, f"exactness fails at N={n}")
                return stage
        stage.note(f"exactness witnesses found at N={EVAL_LEVELS}")
        return stage

    def stage_total_reduction(self) -> PipelineStage:
        stage = self.report.stage("kt-total-reduction")
        module = self.db.get("link-k0").string_module()
        if self.link_value is not None:
            got_orbits = StringModule.from_family(self.link_value)
            if got_orbits.family() != module.family():
                self._fail(stage, "orbit presentation differs from the stored one")
                return stage
        ker, coker, total = x_string_total_reduce(module)
        stage.note(f"{module.orbit_count} X-orbits; kernel/cokernel dim "
                   f"{ker.total_dim}/{coker.total_dim}")
        self.link_totred = total
        self._expect_poincare(
            stage, total, self.db.get("hh-link-k0").poincare(), "totally reduced value"
        )
        return stage

    def stage_final_sequence(self) -> PipelineStage:
        stage = self.report.stage("kt-final-sequence")
        total = self.link_totred
        mod_b = StringModule.from_family(FamilyPoincare.from_poincare(total))
        sol = solve_corner(LES, mod_b, self.db.get("unknot").string_module())
        stage.note(
            f"{len(sol.groups)} ambiguous pair(s) against the unknot; "
            "testing both resolutions"
        )
        p_kt = self.db.get("homfly-kt").value
        kh_kt = self.db.get("kh-kt").poincare()
        finals = []
        for choice in psi_consistent_choices(sol):
            cand = enumerate_candidates(sol, choice).plain_part
            checks = {
                "euler": cand.euler_specialize() == p_kt,
                "khovanov": collapse_feasible(cand, kh_kt, D2) is not None,
                "point": converge_to_point(
                    FamilyPoincare.from_poincare(cand), D1, 0) is not None,
            }
            stage.note(
                f"candidate dim {cand.total_dim}: "
                + ", ".join(f"{k}={'ok' if v else 'NO'}" for k, v in checks.items())
            )
            if all(checks.values()):
                finals.append(cand)
        if len(finals) != 1:
            stage.status = "ambiguous" if finals else "fail"
            stage.note(f"{len(finals)} candidates pass all constraints")
            if self.strict and not finals:
                raise StageMismatch(stage.name, "no final candidate")
            return stage
        self.final_value = finals[0]
        self._expect_poincare(
            stage, self.final_value, self.db.get("kt-final").poincare(),
            "final reduced HOMFLY-PT homology",
        )
        return stage

    def stage_cross_checks(self, kh_name="kh-kt", homfly_name="homfly-kt",
                           stage_name="kt-cross-checks") -> PipelineStage:
        stage = self.report.stage(stage_name)
        final = self.final_value
        if final is None:
            self._fail(stage, "no final value to check")
            return stage
        euler = final.euler_specialize()
        want = self.db.get(homfly_name).value
        if euler != want:
            self._fail(stage, "Euler specialization differs from the "
                              "HOMFLY-PT polynomial")
        else:
            stage.note(f"Euler specialization matches {homfly_name}: "
                       f"{format_signed(euler)}")
        kh = self.db.get(kh_name).poincare()
        witness = collapse_feasible(final, kh, D2)
        if witness is None:
            self._fail(stage, "no collapse onto the reduced Khovanov homology")
        else:
            pairs = witness.pairs_on_page(1)
            later = witness.total_pairs - pairs
            stage.note(f"Khovanov collapse: {pairs} first-page pairs, "
                       f"{later} on later pages "
                       f"({final.total_dim} -> {kh.total_dim})")
            if later:
                self._fail(stage, "collapse needs differentials past the second page")
        # sl(2) consistency of the resolved link value
        kh_k0 = self.db.get("kh-L10n36").poincare()
        link2 = canonical(self.db.get("link-k0").value).evaluate(2)
        w0 = collapse_feasible(link2, kh_k0, D2)
        if w0 is None or w0.total_pairs:
            self._fail(stage, "resolved-link value does not collapse trivially "
                              "onto its Khovanov homology at N=2")
        else:
            stage.note("resolved-link value equals its Khovanov homology at N=2 "
                       "(all cancellations zero)")
        for n in range(3, 9):
            fam = DifferentialFamily.d_n(n)
            bad = [k for k in range(1, 7) if not differential_vanishes(final, fam, k)]
            if bad:
                self._fail(stage, f"d({n}) does not vanish on pages {bad}")
                return stage
        stage.note("all differentials vanish for N >= 3 (checked N=3..8, pages 1..6)")
        return stage

    # -- drivers ---------------------------------------------------------

    def run_kt(self) -> Report:
        self.stage_corner_table()
        self.stage_filtered_table()
        self.stage_promotion_search()
        self.stage_total_reduction()
        self.stage_final_sequence()
        self.stage_cross_checks()
        return self.report

    def run_conway(self) -> Report:
        """Conway side: the resolved diagrams are isotopic to the ones used
        above, so the link homology is reused; the final assembly and all
        cross-checks are re-run against the Conway records."""
        stage = self.report.stage("conway-input-reuse")
        if self.link_value is None:
            self._fail(stage, "Kinoshita-Terasaka run must complete first")
            return self.report
        same = canonical(self.link_value) == canonical(self.db.get("link-k0").value)
        if not same:
            self._fail(stage, "resolved-link homologies differ")
        else:
            stage.note("resolved diagrams are isotopic to the earlier pair; "
                       "link homology carried over")

        stage2 = self.report.stage("conway-final-equality")
        module = StringModule.from_family(self.link_value)
        _, _, total = x_string_total_reduce(module)
        mod_b = StringModule.from_family(FamilyPoincare.from_poincare(total))
        sol = solve_corner(LES, mod_b, self.db.get("unknot").string_module())
        p_c = self.db.get("homfly-conway").value
        kh_c = self.db.get("kh-conway").poincare()
        finals = []
        for choice in psi_consistent_choices(sol):
            cand = enumerate_candidates(sol, choice).plain_part
            if (
                cand.euler_specialize() == p_c
                and collapse_feasible(cand, kh_c, D2) is not None
                and converge_to_point(FamilyPoincare.from_poincare(cand), D1, 0)
            ):
                finals.append(cand)
        if len(finals) != 1:
            stage2.status = "ambiguous" if finals else "fail"
            return self.report
        conway_final = finals[0]
        self._expect_poincare(
            stage2, conway_final, self.db.get("conway-final").poincare(),
            "Conway final homology",
        )
        if self.final_value is not None:
            self._expect_poincare(
                stage2, conway_final, self.final_value,
                "agreement with the Kinoshita-Terasaka answer",
            )
        saved = self.final_value
        self.final_value = conway_final
        self.stage_cross_checks(kh_name="kh-conway", homfly_name="homfly-conway",
                                stage_name="conway-cross-checks")
        self.final_value = saved or conway_final
        return self.report


def verify_paper(knot: str = "both", db: Optional[HomologyDB] = None,
                 strict: bool = False) -> Report:
    v = PaperVerifier(db=db, strict=strict)
    if knot in ("kt", "both"):
        v.run_kt()
    if knot in ("conway", "both"):
        if knot == "conway" and v.link_value is None:
            v.run_kt()
        v.run_conway()
    return v.report
