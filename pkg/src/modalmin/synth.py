"""Exhaustive formula synthesis and lower-bound certificates.

Formulas are enumerated bottom-up over a fixed universe of pointed models,
deduplicated by denotation: per denotation only Pareto-minimal measure
vectors survive, and only survivors feed later combinations.  On top of the
stream sit minimal-separator searches (over index sets, or frame-wise over a
witness set) and certify_bound, which turns "no cheaper formula separates
these frames" into a checkable Certificate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .formula import (
    And,
    BASIC,
    Box,
    Dia,
    ExistsMod,
    FALSE,
    ForallMod,
    Formula,
    MeasureKind,
    MeasureVector,
    NegLit,
    Or,
    PosLit,
    TRUE,
    check_language,
    measure_all,
    print_formula,
)
from .gallery import WitnessSet
from .kripke import (
    ReducedExpansion,
    ResourceCapError,
    UNIVERSE_CAP,
    Universe,
    expand_reduced,
    frame_valid,
)

__all__ = [
    "ENUM_CAP",
    "EnumerationStats",
    "Certificate",
    "enumerate_formulas",
    "min_separating",
    "min_separating_frames",
    "certify_bound",
    "format_certificate",
]

ENUM_CAP = 2_000_000


@dataclass
class EnumerationStats:
    """Live counters for one enumeration run."""

    formulas: int = 0
    denotations: int = 0


def enumerate_formulas(
    u: Universe,
    var_bound: int,
    length_cap: int,
    language: str = BASIC,
    max_candidates: int = ENUM_CAP,
    stats: EnumerationStats | None = None,
):
    """Yield (formula, denotation mask, measure vector), shortest first.

    Level k holds formulas of length exactly k: the atoms, then every unary
    and binary combination of retained smaller formulas.  A candidate is
    retained, yielded, and made available to later levels iff no retained
    formula with the same denotation has a measure vector that is <= on
    every component; within a level, newly dominated entries are dropped.
    Raises ResourceCapError once more than max_candidates formulas have
    been considered, leaving partial counts in stats.
    """
    check_language(language)
    if var_bound < 0:
        raise ValueError("var bound must be >= 0")
    # modal denotations are composed through the successor masks, which only
    # see states present in the universe
    if not u.point_closed:
        raise ValueError("universe must be point-closed")
    if stats is None:
        stats = EnumerationStats()

    succ = u.succ_masks
    same = u.same_masks
    n = len(u)
    full = (1 << n) - 1
    lit_masks = {
        var: sum(1 << i for i, pm in enumerate(u.models) if pm.model.holds(var, pm.point))
        for var in range(1, var_bound + 1)
    }

    def dia_of(m: int) -> int:
        return sum(1 << i for i in range(n) if succ[i] & m)

    def box_of(m: int) -> int:
        return sum(1 << i for i in range(n) if succ[i] & ~m == 0)

    def exists_of(m: int) -> int:
        return sum(1 << i for i in range(n) if same[i] & m)

    def forall_of(m: int) -> int:
        return sum(1 << i for i in range(n) if same[i] & ~m == 0)

    # per denotation, the Pareto-minimal (vector, length) retained so far
    pareto: dict[int, list[tuple[MeasureVector, int]]] = {}
    by_len: dict[int, list[tuple[Formula, int]]] = {}

    def admit(phi: Formula, den: int, length: int):
        stats.formulas += 1
        if stats.formulas > max_candidates:
            raise ResourceCapError(
                f"enumeration exceeded {max_candidates} candidate formulas "
                f"({stats.denotations} denotations reached)"
            )
        vec = measure_all(phi)
        kept = pareto.get(den)
        if kept is None:
            pareto[den] = [(vec, length)]
            stats.denotations += 1
        else:
            if any(v.dominates(vec) for v, _ in kept):
                return None
            # only same-length entries can be newly dominated: every measure
            # vector includes Length, so shorter retained entries never are
            kept[:] = [e for e in kept if not vec.dominates(e[0])]
            kept.append((vec, length))
        by_len.setdefault(length, []).append((phi, den))
        return phi, den, vec

    atoms: list[tuple[Formula, int]] = [(FALSE, 0), (TRUE, full)]
    for var in range(1, var_bound + 1):
        atoms.append((PosLit(var), lit_masks[var]))
        atoms.append((NegLit(var), full & ~lit_masks[var]))

    for length in range(1, length_cap + 1):
        if length == 1:
            for phi, den in atoms:
                out = admit(phi, den, 1)
                if out:
                    yield out
            continue
        for phi, den in list(by_len.get(length - 1, ())):
            for ctor, op in (
                (Dia, dia_of), (Box, box_of), (ExistsMod, exists_of), (ForallMod, forall_of),
            ):
                if language == BASIC and ctor in (ExistsMod, ForallMod):
                    continue
                out = admit(ctor(phi), op(den), length)
                if out:
                    yield out
        for len1 in range(1, (length - 1) // 2 + 1):
            len2 = length - 1 - len1
            ones = list(by_len.get(len1, ()))
            twos = list(by_len.get(len2, ())) if len2 != len1 else ones
            for i1, (a, da) in enumerate(ones):
                start = i1 if len1 == len2 else 0
                for b, db in twos[start:]:
                    out = admit(Or(a, b), da | db, length)
                    if out:
                        yield out
                    out = admit(And(a, b), da & db, length)
                    if out:
                        yield out


def min_separating(
    u: Universe,
    left,
    right,
    kind: MeasureKind,
    var_bound: int,
    length_cap: int,
    language: str = BASIC,
    max_candidates: int = ENUM_CAP,
) -> tuple[Formula, MeasureVector] | None:
    """The cheapest formula true on all left and false on all right indices.

    Minimizes the requested measure with ties broken by Length and then by
    the printed form; None when nothing within the caps separates.
    """
    left = frozenset(left)
    right = frozenset(right)
    if left & right:
        raise ValueError("left and right index sets must be disjoint")
    if not kind.applies_to(language):
        raise ValueError(f"measure {kind.value} needs the global language")
    lmask = sum(1 << i for i in left)
    rmask = sum(1 << i for i in right)
    best = None
    for phi, den, vec in enumerate_formulas(
        u, var_bound, length_cap, language, max_candidates
    ):
        if (
            best is not None
            and kind is MeasureKind.LENGTH
            and vec.get(MeasureKind.LENGTH) > best[0][1]
        ):
            break
        if lmask & ~den == 0 and rmask & den == 0:
            key = (vec.get(kind), vec.get(MeasureKind.LENGTH), print_formula(phi))
            if best is None or key < best[0]:
                best = (key, phi, vec)
    if best is None:
        return None
    return best[1], best[2]


# --- frame-wise separation --------------------------------------------------


def _reduced_setup(w: WitnessSet, var_bound: int, language: str, cap: int):
    named = [(f"+{nm}", fr) for nm, fr in w.named_positives()]
    named += [(f"-{nm}", fr) for nm, fr in w.named_negatives()]
    red = expand_reduced(named, var_bound, language, cap)
    pos_mask = 0
    for nm, _ in w.named_positives():
        for i in red.class_reps[f"+{nm}"]:
            pos_mask |= 1 << i
    neg_masks = []
    for nm, _ in w.named_negatives():
        neg_masks.append(sum(1 << i for i in red.class_reps[f"-{nm}"]))
    return red, pos_mask, neg_masks


def _separates_frames(den: int, pos_mask: int, neg_masks: list[int]) -> bool:
    # valid on every positive frame, refuted somewhere on every negative one
    if pos_mask & ~den:
        return False
    return all(m & ~den for m in neg_masks)


def min_separating_frames(
    w: WitnessSet,
    kind: MeasureKind,
    var_bound: int,
    length_cap: int,
    language: str = BASIC,
    max_candidates: int = ENUM_CAP,
    cap: int = UNIVERSE_CAP,
) -> tuple[Formula, MeasureVector] | None:
    """The cheapest formula valid on all positive and on no negative frame.

    Validity is read off denotations over a bisimulation-reduced expansion
    of all witness frames; ties break as in min_separating.
    """
    if not kind.applies_to(language):
        raise ValueError(f"measure {kind.value} needs the global language")
    red, pos_mask, neg_masks = _reduced_setup(w, var_bound, language, cap)
    best = None
    for phi, den, vec in enumerate_formulas(
        red.universe, var_bound, length_cap, language, max_candidates
    ):
        if (
            best is not None
            and kind is MeasureKind.LENGTH
            and vec.get(MeasureKind.LENGTH) > best[0][1]
        ):
            break
        if _separates_frames(den, pos_mask, neg_masks):
            key = (vec.get(kind), vec.get(MeasureKind.LENGTH), print_formula(phi))
            if best is None or key < best[0]:
                best = (key, phi, vec)
    if best is None:
        return None
    return best[1], best[2]


# --- certificates -----------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """The outcome of exhaustively checking a claimed lower bound.

    Proved: no formula with measure below claimed_bound separates the
    witness frames within the caps; a full proof exactly when the measure
    is Length and length_cap >= claimed_bound - 1, a capped claim
    otherwise.  Refuted carries a cheaper separating formula, re-validated
    frame by frame without the denotation machinery.  Inconclusive records
    a resource cap ending the run early.
    """

    witnesses: str
    measure: MeasureKind
    claimed_bound: int
    var_bound: int
    length_cap: int
    language: str
    verdict: str
    refutation: Formula | None = None
    formulas_enumerated: int = 0
    distinct_denotations: int = 0
    wall_time: float = 0.0

    @property
    def scope(self) -> str:
        if self.verdict == "Refuted":
            return "full"
        if self.verdict == "Proved" and (
            self.measure is MeasureKind.LENGTH
            and self.length_cap >= self.claimed_bound - 1
        ):
            return "full"
        return "length-capped"

    def same_claim(self, other: "Certificate") -> bool:
        """Equality up to run statistics and timing."""
        mine = (
            self.witnesses, self.measure, self.claimed_bound, self.var_bound,
            self.length_cap, self.language, self.verdict,
            None if self.refutation is None else print_formula(self.refutation),
        )
        theirs = (
            other.witnesses, other.measure, other.claimed_bound,
            other.var_bound, other.length_cap, other.language, other.verdict,
            None if other.refutation is None else print_formula(other.refutation),
        )
        return mine == theirs


def certify_bound(
    w: WitnessSet,
    kind: MeasureKind,
    claimed_bound: int,
    var_bound: int = 1,
    length_cap: int | None = None,
    language: str = BASIC,
    max_candidates: int = ENUM_CAP,
    cap: int = UNIVERSE_CAP,
) -> Certificate:
    """Check that no formula with measure below claimed_bound separates w.

    For Length the default cap enumerates every shorter formula, making a
    Proved verdict a full proof; for other measures a length cap bounds the
    infinite space and the certificate records the capped scope.  A
    refutation is re-validated per frame via frame_valid before being
    reported; a resource cap yields Inconclusive with partial statistics.
    """
    check_language(language)
    if claimed_bound < 0:
        raise ValueError("claimed bound must be non-negative")
    if not kind.applies_to(language):
        raise ValueError(f"measure {kind.value} needs the global language")
    if length_cap is None:
        if kind is MeasureKind.LENGTH:
            length_cap = claimed_bound - 1
        else:
            length_cap = claimed_bound + 2
    t0 = time.perf_counter()
    stats = EnumerationStats()

    def done(verdict: str, refutation: Formula | None = None) -> Certificate:
        return Certificate(
            witnesses=w.name,
            measure=kind,
            claimed_bound=claimed_bound,
            var_bound=var_bound,
            length_cap=length_cap,
            language=language,
            verdict=verdict,
            refutation=refutation,
            formulas_enumerated=stats.formulas,
            distinct_denotations=stats.denotations,
            wall_time=time.perf_counter() - t0,
        )

    try:
        red, pos_mask, neg_masks = _reduced_setup(w, var_bound, language, cap)
        for phi, den, vec in enumerate_formulas(
            red.universe, var_bound, length_cap, language, max_candidates, stats
        ):
            if vec.get(kind) >= claimed_bound:
                continue
            if _separates_frames(den, pos_mask, neg_masks):
                for _, fr in w.named_positives():
                    if not frame_valid(fr, phi):
                        raise RuntimeError(
                            "refutation failed independent re-validation"
                        )
                for _, fr in w.named_negatives():
                    if frame_valid(fr, phi):
                        raise RuntimeError(
                            "refutation failed independent re-validation"
                        )
                return done("Refuted", phi)
    except ResourceCapError:
        return done("Inconclusive")
    return done("Proved")


def format_certificate(cert: Certificate) -> str:
    """Render a certificate as a line-oriented text document.

    Every field except wall-time is bit-exact for identical inputs.
    """
    lines = [
        f"certificate {cert.witnesses}",
        f"measure {cert.measure.value}",
        f"claimed-bound {cert.claimed_bound}",
        f"var-bound {cert.var_bound}",
        f"length-cap {cert.length_cap}",
        f"language {cert.language}",
        f"verdict {cert.verdict}",
    ]
    if cert.refutation is not None:
        lines.append(f"refutation {print_formula(cert.refutation)}")
    lines.append(f"scope {cert.scope}")
    lines.append(f"formulas-enumerated {cert.formulas_enumerated}")
    lines.append(f"distinct-denotations {cert.distinct_denotations}")
    lines.append(f"wall-time {cert.wall_time:.3f}s")
    return "\n".join(lines) + "\n"
