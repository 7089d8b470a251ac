"""Denotation-deduplicated enumeration, separator search, certificates."""

import pytest

from modalmin.formula import (
    BASIC,
    GLOBAL,
    MeasureKind,
    measure,
    measure_all,
    parse,
    print_formula,
)
from modalmin.gallery import (
    axiom,
    lob_witnesses,
    symmetry_witnesses,
    transfer_witnesses,
)
from modalmin.kripke import (
    Frame,
    Model,
    PointedModel,
    ResourceCapError,
    Universe,
    bisimilar,
    build_universe,
    frame_valid,
)
from modalmin.synth import (
    Certificate,
    EnumerationStats,
    certify_bound,
    enumerate_formulas,
    format_certificate,
    min_separating,
    min_separating_frames,
)

from .oracles import brute_denotations, brute_min_separating


def _two_point_universe():
    loop = Frame(1, [(0, 0)])
    yes = PointedModel(Model(loop, {1: 1}), 0)
    no = PointedModel(Model(loop, {}), 0)
    return Universe([yes, no])


# --- enumeration ------------------------------------------------------------


def test_enumeration_replays_to_true_denotations():
    u = build_universe([(Frame(2, [(0, 1)]), 1)])
    for phi, den, vec in enumerate_formulas(u, 1, 5):
        assert u.den(phi) == den
        assert measure_all(phi) == vec


def test_enumeration_is_shortest_first():
    u = _two_point_universe()
    lengths = [vec.get(MeasureKind.LENGTH) for _, _, vec in enumerate_formulas(u, 1, 5)]
    assert lengths == sorted(lengths)
    assert lengths[0] == 1


def test_enumeration_irreflexive_point_no_vars():
    # one state, no arrows, no atoms: only two denotations ever appear
    u = Universe([PointedModel(Model(Frame(1, []), {}), 0)])
    dens = {den for _, den, _ in enumerate_formulas(u, 0, 3)}
    assert dens == {0, 1}


def test_enumeration_covers_all_reachable_denotations(rng):
    for language in (BASIC, GLOBAL):
        for _ in range(12):
            count = rng.randint(1, 3)
            edges = [
                (a, b) for a in range(count) for b in range(count) if rng.random() < 0.5
            ]
            u = build_universe([(Frame(count, edges), 1)])
            got = {den for _, den, _ in enumerate_formulas(u, 1, 4, language)}
            want = brute_denotations(u, [1], 4, language)
            assert got == want


def test_enumeration_keeps_pareto_incomparable_vectors():
    u = build_universe([(Frame(2, [(0, 1)]), 1)])
    seen: dict[int, list] = {}
    for _, den, vec in enumerate_formulas(u, 1, 5):
        for old in seen.get(den, ()):
            assert not old.dominates(vec)
        seen.setdefault(den, []).append(vec)


def test_enumeration_rejects_open_universe():
    chain = Frame(2, [(0, 1)])
    u = Universe([PointedModel(Model(chain, {}), 0)])
    with pytest.raises(ValueError):
        list(enumerate_formulas(u, 1, 3))


def test_enumeration_rejects_negative_var_bound():
    with pytest.raises(ValueError):
        list(enumerate_formulas(_two_point_universe(), -1, 3))


def test_enumeration_stats_and_cap():
    u = _two_point_universe()
    stats = EnumerationStats()
    list(enumerate_formulas(u, 1, 4, stats=stats))
    assert stats.formulas > stats.denotations > 0

    partial = EnumerationStats()
    with pytest.raises(ResourceCapError):
        list(enumerate_formulas(u, 1, 6, max_candidates=10, stats=partial))
    assert partial.formulas == 11
    assert 0 < partial.denotations <= 10


# --- separator search over index sets ---------------------------------------


def test_min_separating_pinned_pair():
    u = _two_point_universe()
    phi, vec = min_separating(u, [0], [1], MeasureKind.LENGTH, 1, 4)
    assert phi == parse("p1")
    assert vec.get(MeasureKind.LENGTH) == 1


def test_min_separating_transfer_shape():
    # within one model: a state with a p1 successor against one without
    frame = Frame(3, [(0, 1), (2, 2)])
    model = Model(frame, {1: 0b010})
    u = Universe([PointedModel(model, s) for s in range(3)])
    phi, _ = min_separating(u, [0], [2], MeasureKind.LENGTH, 1, 4)
    assert u.den(phi) & 1
    assert not (u.den(phi) >> 2) & 1
    assert measure(phi, MeasureKind.LENGTH) == 2


def test_min_separating_validates_inputs():
    u = _two_point_universe()
    with pytest.raises(ValueError):
        min_separating(u, [0], [0], MeasureKind.LENGTH, 1, 4)
    with pytest.raises(ValueError):
        min_separating(u, [0], [1], MeasureKind.EXISTS_COUNT, 1, 4, language=BASIC)


def test_min_separating_absent_for_bisimilar_pair():
    loop = Frame(1, [(0, 0)])
    a = PointedModel(Model(loop, {1: 1}), 0)
    chain = Frame(2, [(0, 1), (1, 0)])
    b = PointedModel(Model(chain, {1: 0b11}), 0)
    u = build_universe([a, b, PointedModel(Model(chain, {1: 0b11}), 1)])
    assert bisimilar(u.models[0], u.models[1], language=GLOBAL)
    assert min_separating(u, [0], [1], MeasureKind.LENGTH, 1, 6, language=GLOBAL) is None


def test_min_separating_matches_brute_force(rng):
    for _ in range(20):
        count = rng.randint(1, 3)
        edges = [(a, b) for a in range(count) for b in range(count) if rng.random() < 0.45]
        u = build_universe([(Frame(count, edges), 1)])
        if len(u.models) > 7:
            continue
        pick = min(2, len(u.models))
        left = tuple(rng.sample(range(len(u.models)), rng.randint(1, pick)))
        right = tuple(i for i in rng.sample(range(len(u.models)), pick) if i not in left)
        language = GLOBAL if rng.random() < 0.5 else BASIC
        got = min_separating(u, left, right, MeasureKind.LENGTH, 1, 5, language)
        want = brute_min_separating(u, left, right, MeasureKind.LENGTH, 99, 5, language)
        if want is None:
            assert got is None
        else:
            assert got is not None
            assert got[1].get(MeasureKind.LENGTH) == want


def test_min_separating_non_length_measure():
    frame = Frame(3, [(0, 1), (1, 2)])
    model = Model(frame, {1: 0b100})
    u = Universe([PointedModel(model, s) for s in range(3)])
    phi, vec = min_separating(u, [0], [1, 2], MeasureKind.DIA_COUNT, 1, 6)
    # a diamond-free separator exists here, e.g. (~p1 & [] ~p1)
    want = brute_min_separating(u, (0,), (1, 2), MeasureKind.DIA_COUNT, 99, 6, BASIC)
    assert vec.get(MeasureKind.DIA_COUNT) == want == 0
    assert u.den(phi) == 0b001


# --- frame-wise separation --------------------------------------------------


def test_min_separating_frames_reads_off_validity():
    w = transfer_witnesses(0, 1)
    phi, vec = min_separating_frames(w, MeasureKind.LENGTH, 1, 4)
    assert vec.get(MeasureKind.LENGTH) == 4
    assert all(frame_valid(f, phi) for f in w.positives)
    assert not any(frame_valid(f, phi) for f in w.negatives)
    assert phi in (parse("(~p1 | <> p1)"), parse("(p1 | <> ~p1)"))


def test_min_separating_frames_below_minimum_absent():
    assert min_separating_frames(transfer_witnesses(0, 1), MeasureKind.LENGTH, 1, 3) is None


def test_min_separating_frames_symmetry():
    phi, vec = min_separating_frames(symmetry_witnesses(), MeasureKind.LENGTH, 1, 5)
    # frame validity cannot tell a variable from its negation
    assert print_formula(phi) in ("(~p1 | [] <> p1)", "(p1 | [] <> ~p1)")
    assert vec.get(MeasureKind.LENGTH) == 5


def test_min_separating_frames_language_gate():
    with pytest.raises(ValueError):
        min_separating_frames(symmetry_witnesses(), MeasureKind.FORALL_COUNT, 1, 5)


# --- certificates -----------------------------------------------------------


def test_certify_transfer_0_1_proved_at_4():
    cert = certify_bound(transfer_witnesses(0, 1), MeasureKind.LENGTH, 4)
    assert cert.verdict == "Proved"
    assert cert.scope == "full"
    assert cert.length_cap == 3
    assert cert.refutation is None
    assert cert.formulas_enumerated > 0
    assert cert.distinct_denotations > 0


def test_certify_transfer_0_1_refuted_at_5():
    cert = certify_bound(transfer_witnesses(0, 1), MeasureKind.LENGTH, 5)
    assert cert.verdict == "Refuted"
    assert cert.scope == "full"
    assert measure(cert.refutation, MeasureKind.LENGTH) == 4
    w = transfer_witnesses(0, 1)
    assert all(frame_valid(f, cert.refutation) for f in w.positives)
    assert not any(frame_valid(f, cert.refutation) for f in w.negatives)


def test_certify_vacuous_and_invalid_claims():
    w = transfer_witnesses(0, 1)
    assert certify_bound(w, MeasureKind.LENGTH, 0).verdict == "Proved"
    with pytest.raises(ValueError):
        certify_bound(w, MeasureKind.LENGTH, -1)
    with pytest.raises(ValueError):
        certify_bound(w, MeasureKind.EXISTS_COUNT, 1, language=BASIC)


def test_certify_default_caps():
    length_cert = certify_bound(transfer_witnesses(0, 1), MeasureKind.LENGTH, 4)
    assert length_cert.length_cap == 3
    dia_cert = certify_bound(transfer_witnesses(0, 1), MeasureKind.DIA_COUNT, 1)
    assert dia_cert.length_cap == 3
    assert dia_cert.scope == "length-capped"


def test_certify_non_length_measures_transfer_1_2():
    w = transfer_witnesses(1, 2)
    for kind, bound in (
        (MeasureKind.DIA_COUNT, 2),
        (MeasureKind.BOX_COUNT, 1),
        (MeasureKind.MODAL_DEPTH, 2),
        (MeasureKind.VAR_COUNT, 1),
    ):
        cert = certify_bound(w, kind, bound, length_cap=8)
        assert cert.verdict == "Proved", kind
        refuted = certify_bound(w, kind, bound + 1, length_cap=8)
        assert refuted.verdict == "Refuted", kind
        assert measure(refuted.refutation, kind) == bound


def test_certify_inconclusive_on_tiny_cap():
    cert = certify_bound(
        symmetry_witnesses(), MeasureKind.LENGTH, 5, max_candidates=8
    )
    assert cert.verdict == "Inconclusive"
    assert cert.refutation is None
    assert cert.formulas_enumerated == 9


def test_certificate_same_claim_ignores_statistics():
    a = certify_bound(transfer_witnesses(0, 1), MeasureKind.LENGTH, 4)
    b = Certificate(
        witnesses=a.witnesses,
        measure=a.measure,
        claimed_bound=a.claimed_bound,
        var_bound=a.var_bound,
        length_cap=a.length_cap,
        language=a.language,
        verdict=a.verdict,
        formulas_enumerated=0,
        distinct_denotations=0,
        wall_time=99.0,
    )
    assert a.same_claim(b)
    c = certify_bound(transfer_witnesses(0, 1), MeasureKind.LENGTH, 5)
    assert not a.same_claim(c)


def test_certify_lob_axiom_is_optimal_witness():
    w = lob_witnesses(2)
    cert = certify_bound(w, MeasureKind.LENGTH, 8)
    assert cert.verdict == "Proved"
    loeb = axiom(w.prop)
    assert measure(loeb, MeasureKind.LENGTH) == 8
    assert all(frame_valid(f, loeb) for f in w.positives)
    assert not any(frame_valid(f, loeb) for f in w.negatives)


def test_format_certificate_layout():
    cert = certify_bound(transfer_witnesses(0, 1), MeasureKind.LENGTH, 5)
    text = format_certificate(cert)
    lines = text.splitlines()
    assert lines[0] == "certificate transfer-0-1"
    assert lines[1] == "measure length"
    assert lines[2] == "claimed-bound 5"
    assert lines[3] == "var-bound 1"
    assert lines[4] == "length-cap 4"
    assert lines[5] == "language basic"
    assert lines[6] == "verdict Refuted"
    assert lines[7].startswith("refutation ")
    assert lines[8] == "scope full"
    assert lines[9].startswith("formulas-enumerated ")
    assert lines[10].startswith("distinct-denotations ")
    assert lines[11].startswith("wall-time ") and lines[11].endswith("s")
    assert text.endswith("\n")


def test_format_certificate_deterministic_modulo_time():
    runs = [
        format_certificate(certify_bound(transfer_witnesses(1, 0), MeasureKind.LENGTH, 4))
        for _ in range(2)
    ]
    heads = [r.rsplit("wall-time", 1)[0] for r in runs]
    assert heads[0] == heads[1]
