"""Formula syntax: parsing, printing, measures, NNF negation."""

import random

import pytest
from hypothesis import given, strategies as st

from modalmin.formula import (
    BASIC,
    FALSE,
    GLOBAL,
    And,
    Box,
    Dia,
    ExistsMod,
    ForallMod,
    MeasureKind,
    MeasureVector,
    NegLit,
    Or,
    ParseError,
    PosLit,
    TRUE,
    canonical_rename,
    language_of,
    measure,
    measure_all,
    measures_for,
    nnf_negate,
    parse,
    print_formula,
    rename_vars,
    subformulas,
    uses_global,
    vars_of,
)
from modalmin.kripke import Model

from .conftest import rand_formula, rand_model
from .oracles import formulas_up_to, naive_eval, variables


@st.composite
def formulas(draw, language=GLOBAL, var_bound=3, max_len=9):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    length = draw(st.integers(min_value=1, max_value=max_len))
    return rand_formula(random.Random(seed), var_bound, length, language)


# --- parsing and printing ---------------------------------------------------


def test_parse_literals_and_constants():
    assert parse("T") == TRUE
    assert parse("F") == FALSE
    assert parse("p3") == PosLit(3)
    assert parse("~p12") == NegLit(12)


def test_parse_connectives():
    assert parse("(~p1 | <> p1)") == Or(NegLit(1), Dia(PosLit(1)))
    assert parse("[] [] ~p1") == Box(Box(NegLit(1)))
    assert parse("E <> T") == ExistsMod(Dia(TRUE))
    assert parse("(p1 & A ~p2)") == And(PosLit(1), ForallMod(NegLit(2)))


def test_parse_is_whitespace_insensitive():
    assert parse("(p1|<>p1)") == parse("( p1 |  <>   p1 )")
    assert parse("[]p1") == Box(PosLit(1))


def test_print_canonical_forms():
    assert print_formula(Or(NegLit(1), Dia(PosLit(1)))) == "(~p1 | <> p1)"
    assert print_formula(TRUE) == "T"
    assert print_formula(FALSE) == "F"
    assert print_formula(Box(Box(NegLit(1)))) == "[] [] ~p1"
    assert print_formula(ExistsMod(And(PosLit(1), PosLit(2)))) == "E (p1 & p2)"


@pytest.mark.parametrize(
    "text",
    ["", "(p1 |", "p0", "q1", "(p1 | p2", "p1 p2", "<>", "(p1 & & p2)", "~T"],
)
def test_parse_rejects_malformed_text(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse("(p1 | q2)")
    assert err.value.position == 6


def test_parse_language_gate():
    assert parse("E p1", GLOBAL) == ExistsMod(PosLit(1))
    for text in ("E p1", "A p1", "<> E p1"):
        with pytest.raises(ParseError):
            parse(text, BASIC)


def test_roundtrip_every_formula_up_to_length_5():
    for forms in formulas_up_to([1, 2], 5, GLOBAL).values():
        for phi in forms:
            assert parse(print_formula(phi)) == phi


@given(phi=formulas())
def test_roundtrip_random_formulas(phi):
    assert parse(print_formula(phi)) == phi


# --- language classification ------------------------------------------------


def test_uses_global_and_language_of():
    assert not uses_global(parse("(p1 | <> ~p1)"))
    assert uses_global(parse("[] A p1"))
    assert language_of(parse("<> p1")) == BASIC
    assert language_of(parse("E p1")) == GLOBAL


def test_subformulas_and_vars():
    phi = parse("(~p1 | <> (p2 & p1))")
    assert set(subformulas(phi)) == {
        phi,
        NegLit(1),
        Dia(And(PosLit(2), PosLit(1))),
        And(PosLit(2), PosLit(1)),
        PosLit(2),
        PosLit(1),
    }
    assert vars_of(phi) == frozenset({1, 2})
    assert vars_of(TRUE) == frozenset()


# --- measures ---------------------------------------------------------------


def test_measure_families():
    assert len(measures_for(BASIC)) == 9
    assert len(measures_for(GLOBAL)) == 11
    assert MeasureKind.EXISTS_COUNT not in measures_for(BASIC)
    assert all(kind.applies_to(GLOBAL) for kind in MeasureKind)


def test_measure_kind_names_roundtrip():
    for kind in MeasureKind:
        assert MeasureKind.from_name(kind.value) is kind
    with pytest.raises(ValueError):
        MeasureKind.from_name("size")


def test_measure_all_box_box_example():
    vec = measure_all(parse("([] [] ~p1 | <> p1)"))
    assert vec.get(MeasureKind.LENGTH) == 6
    assert vec.get(MeasureKind.MODAL_DEPTH) == 2
    assert vec.get(MeasureKind.VAR_COUNT) == 1
    assert vec.get(MeasureKind.OR_COUNT) == 1
    assert vec.get(MeasureKind.BOX_COUNT) == 2
    assert vec.get(MeasureKind.DIA_COUNT) == 1
    assert vec.get(MeasureKind.AND_COUNT) == 0
    assert vec.get(MeasureKind.FALSE_COUNT) == 0
    assert vec.get(MeasureKind.TRUE_COUNT) == 0


def test_measure_all_symmetry_shape_example():
    vec = measure_all(parse("(~p1 | [] <> p1)"))
    assert (vec.length, vec.modal_depth, vec.var_count) == (5, 2, 1)


def test_modal_depth_counts_global_modalities():
    assert measure(parse("A [] p1"), MeasureKind.MODAL_DEPTH) == 2
    assert measure(parse("E p1"), MeasureKind.MODAL_DEPTH) == 1


def test_var_count_is_number_of_distinct_variables():
    assert measure(parse("((p1 | ~p1) & p1)"), MeasureKind.VAR_COUNT) == 1
    assert measure(parse("(p1 | (p2 & ~p7))"), MeasureKind.VAR_COUNT) == 3
    assert measure(parse("(T | F)"), MeasureKind.VAR_COUNT) == 0


@given(phi=formulas())
def test_measure_all_agrees_with_measure(phi):
    vec = measure_all(phi)
    for kind in MeasureKind:
        assert vec.get(kind) == measure(phi, kind)


@given(phi=formulas())
def test_every_component_at_most_length(phi):
    vec = measure_all(phi)
    assert all(component <= vec.length for component in vec)


@given(phi=formulas())
def test_symbol_counts_plus_literals_cover_length(phi):
    vec = measure_all(phi)
    symbol_total = (
        vec.false_count
        + vec.true_count
        + vec.or_count
        + vec.and_count
        + vec.dia_count
        + vec.box_count
        + vec.exists_count
        + vec.forall_count
    )
    literal_leaves = sum(1 for psi in subformulas(phi) if isinstance(psi, (PosLit, NegLit)))
    assert symbol_total + literal_leaves == vec.length


@given(phi=formulas())
def test_var_count_matches_recursive_collection(phi):
    assert measure(phi, MeasureKind.VAR_COUNT) == len(variables(phi))


# --- negation ---------------------------------------------------------------


def test_negate_swaps_duals():
    assert nnf_negate(PosLit(1)) == NegLit(1)
    assert nnf_negate(TRUE) == FALSE
    assert nnf_negate(parse("([] ~p1 | <> (p1 & [] ~p1))")) == parse(
        "(<> p1 & [] (~p1 | <> p1))"
    )
    assert nnf_negate(parse("E p1")) == parse("A ~p1")


@given(phi=formulas())
def test_negate_is_an_involution(phi):
    assert nnf_negate(nnf_negate(phi)) == phi


@given(phi=formulas(var_bound=2, max_len=7), seed=st.integers(0, 2**32 - 1))
def test_negate_flips_evaluation(phi, seed):
    rng = random.Random(seed)
    model = rand_model(rng, var_bound=2, max_states=3)
    for state in range(model.frame.state_count):
        assert naive_eval(model, state, nnf_negate(phi)) != naive_eval(model, state, phi)


# --- renaming ---------------------------------------------------------------


def test_canonical_rename_orders_by_first_occurrence():
    assert canonical_rename(parse("(p5 | (p2 & p5))")) == parse("(p1 | (p2 & p1))")
    assert canonical_rename(parse("(~p3 | <> p1)")) == parse("(~p1 | <> p2)")
    assert canonical_rename(TRUE) == TRUE


def test_rename_vars_applies_mapping():
    assert rename_vars(parse("(p1 & ~p2)"), {1: 4, 2: 1}) == parse("(p4 & ~p1)")


@given(phi=formulas())
def test_canonical_rename_is_idempotent(phi):
    once = canonical_rename(phi)
    assert canonical_rename(once) == once
