"""Formula-complexity games: tree legality, the search engines, weights."""

import itertools
import random

import pytest

from modalmin.colouring import noncol_game_setup
from modalmin.formula import (
    BASIC,
    GLOBAL,
    MeasureKind,
    measure,
    parse,
    print_formula,
)
from modalmin.game import (
    GamePosition,
    GameTree,
    _is_exact_image,
    _minimal_hitting_masks,
    check_weight,
    closed_tree_violations,
    fgf_min_cost,
    min_cost_fgm,
    node_count,
    psi_of_tree,
    special_pair_weight,
    tree_cost,
    verify_closed_tree,
)
from modalmin.gallery import symmetry_witnesses, transfer_witnesses
from modalmin.kripke import (
    Frame,
    Model,
    PointedModel,
    ResourceCapError,
    Universe,
    bisimilar,
    build_universe,
    den_states,
)

from .oracles import brute_exact_image, brute_min_separating

BASIC_KINDS = tuple(k for k in MeasureKind if k.applies_to(BASIC))
ALL_KINDS = tuple(MeasureKind)


def _universe_pair():
    """Two single-state models, one satisfying p1, one not."""
    loop = Frame(1, [(0, 0)])
    yes = PointedModel(Model(loop, {1: 1}), 0)
    no = PointedModel(Model(loop, {}), 0)
    return Universe([yes, no])


# --- trees and read-off -----------------------------------------------------


def test_psi_of_tree_reads_off_structure():
    u = _universe_pair()
    leaf_pos = GamePosition(u, [0], [1])
    leaf = GameTree("lit", leaf_pos, var=1, positive=True)
    assert psi_of_tree(leaf) == parse("p1")
    assert node_count(leaf) == 1
    or_node = GameTree("or", leaf_pos, children=(leaf, GameTree("bot", GamePosition(u, [], [1]))))
    assert psi_of_tree(or_node) == parse("(p1 | F)")
    assert node_count(or_node) == 3
    assert tree_cost(or_node, MeasureKind.LENGTH) == 3
    assert tree_cost(or_node, MeasureKind.FALSE_COUNT) == 1


def test_psi_of_tree_rejects_open_nodes():
    u = _universe_pair()
    with pytest.raises(ValueError):
        psi_of_tree(GameTree("or", GamePosition(u, [0], [1]), children=()))


def test_literal_leaf_legality():
    u = _universe_pair()
    good = GameTree("lit", GamePosition(u, [0], [1]), var=1, positive=True)
    assert verify_closed_tree(good)
    # right side satisfies the literal: illegal
    bad = GameTree("lit", GamePosition(u, [0], [0]), var=1, positive=True)
    violations = closed_tree_violations(bad)
    assert violations and violations[0].startswith("root")


def test_bot_and_top_leaf_legality():
    u = _universe_pair()
    assert verify_closed_tree(GameTree("bot", GamePosition(u, [], [0, 1])))
    assert not verify_closed_tree(GameTree("bot", GamePosition(u, [0], [1])))
    assert verify_closed_tree(GameTree("top", GamePosition(u, [0, 1], [])))
    assert not verify_closed_tree(GameTree("top", GamePosition(u, [0], [1])))


def test_dia_greedy_reply_is_checked():
    chain = Frame(2, [(0, 1), (1, 1)])
    model = Model(chain, {1: 0b10})
    u = Universe([PointedModel(model, s) for s in range(2)])
    root = GamePosition(u, [0], [])
    child_ok = GameTree("lit", GamePosition(u, [1], []), var=1, positive=True)
    assert verify_closed_tree(GameTree("dia", root, children=(child_ok,)))
    # a diamond that drops a right successor is not the greedy reply
    both = Universe([PointedModel(model, s) for s in range(2)] + [PointedModel(Model(chain, {}), s) for s in range(2)])
    root2 = GamePosition(both, [0], [2])
    dropped = GameTree("lit", GamePosition(both, [1], []), var=1, positive=True)
    assert not verify_closed_tree(GameTree("dia", root2, children=(dropped,)))
    kept = GameTree("lit", GamePosition(both, [1], [3]), var=1, positive=True)
    assert verify_closed_tree(GameTree("dia", root2, children=(kept,)))


def test_dia_requires_left_successors():
    bare = Frame(1, [])
    u = Universe([PointedModel(Model(bare, {1: 1}), 0), PointedModel(Model(bare, {}), 0)])
    root = GamePosition(u, [0], [])
    child = GameTree("top", GamePosition(u, [], []))
    assert not verify_closed_tree(GameTree("dia", root, children=(child,)))


# --- helper machinery -------------------------------------------------------


def test_exact_image_matches_brute_force(rng):
    for _ in range(400):
        n = rng.randint(0, 5)
        options = [tuple(sorted(rng.sample(range(6), rng.randint(1, 3)))) for _ in range(n)]
        image = frozenset(rng.sample(range(6), rng.randint(0, 4)))
        assert _is_exact_image(options, image) == brute_exact_image(options, image)


def test_exact_image_deep_chain_does_not_recurse():
    n = 2500
    options = [tuple(range(max(0, i - 1), i + 1)) for i in range(n)]
    assert _is_exact_image(options, frozenset(range(n)))


def test_minimal_hitting_masks_properties(rng):
    assert _minimal_hitting_masks([]) == [0]
    for _ in range(120):
        sets = [rng.randrange(1, 32) for _ in range(rng.randint(1, 4))]
        hits = _minimal_hitting_masks(sets)
        for mask in hits:
            assert all(mask & s for s in sets)
            for other in hits:
                if other != mask:
                    assert not (other & ~mask) == 0
        # every hitting set contains a minimal one
        for candidate in range(32):
            if all(candidate & s for s in sets):
                assert any((mask & ~candidate) == 0 for mask in hits)


# --- the model game ---------------------------------------------------------


def test_fgm_pinned_small_cases():
    u = _universe_pair()
    cost, tree = min_cost_fgm(GamePosition(u, [0], [1]), MeasureKind.LENGTH, 6)
    assert cost == 1
    assert psi_of_tree(tree) == parse("p1")

    empty_left = min_cost_fgm(GamePosition(u, [], [0, 1]), MeasureKind.LENGTH, 6)
    assert empty_left is not None
    cost, tree = empty_left
    assert cost == 1
    assert tree.move == "bot" and not tree.children

    empty_right = min_cost_fgm(GamePosition(u, [0, 1], []), MeasureKind.LENGTH, 6)
    assert empty_right[0] == 1 and empty_right[1].move == "top"


def test_fgm_bisimilar_sides_are_absent():
    u = _universe_pair()
    pos = GamePosition(u, [0], [0])
    for budget in (1, 4, 9):
        assert min_cost_fgm(pos, MeasureKind.LENGTH, budget) is None


def test_fgm_budget_is_inclusive():
    u = build_universe([(Frame(2, [(0, 1)]), 1)])
    # index 0: empty valuation, point 0; find any pair needing length >= 2
    pos = GamePosition(u, [1], [0])
    cost, _ = min_cost_fgm(pos, MeasureKind.LENGTH, 8)
    assert min_cost_fgm(pos, MeasureKind.LENGTH, cost) is not None
    if cost > 1:
        assert min_cost_fgm(pos, MeasureKind.LENGTH, cost - 1) is None


def test_fgm_validates_arguments():
    u = _universe_pair()
    pos = GamePosition(u, [0], [1])
    with pytest.raises(ValueError):
        min_cost_fgm(pos, MeasureKind.LENGTH, 0)
    with pytest.raises(ValueError):
        min_cost_fgm(pos, MeasureKind.DIA_COUNT, 3)  # needs a length cap
    with pytest.raises(ValueError):
        min_cost_fgm(pos, MeasureKind.EXISTS_COUNT, 3, language=BASIC, length_cap=4)
    open_universe = Universe([PointedModel(Model(Frame(2, [(0, 1)]), {}), 0)])
    with pytest.raises(ValueError):
        min_cost_fgm(GamePosition(open_universe, [0], []), MeasureKind.LENGTH, 3)


def test_fgm_trees_verify_and_match_cost(rng):
    for _ in range(40):
        # random universe over one frame; full expansion keeps it point-closed
        count = rng.randint(1, 3)
        edges = [(a, b) for a in range(count) for b in range(count) if rng.random() < 0.45]
        u = build_universe([(Frame(count, edges), 1)])
        indices = range(len(u.models))
        left = rng.sample(indices, rng.randint(0, 2))
        right = rng.sample(indices, rng.randint(0, 2))
        language = GLOBAL if rng.random() < 0.5 else BASIC
        found = min_cost_fgm(
            GamePosition(u, left, right), MeasureKind.LENGTH, 6, language=language
        )
        if found is None:
            continue
        cost, tree = found
        assert verify_closed_tree(tree, language)
        psi = psi_of_tree(tree)
        assert measure(psi, MeasureKind.LENGTH) == cost
        den = u.den(psi)
        assert all(den >> i & 1 for i in left)
        assert not any(den >> i & 1 for i in right)


def test_fgm_matches_enumeration_oracle(rng):
    checked = 0
    for _ in range(25):
        count = rng.randint(1, 3)
        edges = [(a, b) for a in range(count) for b in range(count) if rng.random() < 0.45]
        model_count = rng.randint(1, 2)
        seeds = []
        for _ in range(model_count):
            valuation = {1: rng.getrandbits(count)}
            model = Model(Frame(count, edges), valuation)
            seeds.extend(PointedModel(model, s) for s in range(count))
        u = Universe(seeds)
        if len(u.models) > 7:
            continue
        indices = range(len(u.models))
        pick = min(2, len(u.models))
        left = rng.sample(indices, rng.randint(0, pick))
        right = rng.sample(indices, rng.randint(0, pick))
        language = GLOBAL if rng.random() < 0.5 else BASIC
        pos = GamePosition(u, left, right)
        blocked = any(
            bisimilar(u.models[i], u.models[j], language=language)
            for i in left
            for j in right
        )
        kinds = ALL_KINDS if language == GLOBAL else BASIC_KINDS
        for kind in kinds:
            budget = 6 if kind is MeasureKind.LENGTH else rng.randint(1, 5)
            got = min_cost_fgm(pos, kind, budget, language=language, length_cap=6)
            want = (
                None
                if blocked
                else brute_min_separating(u, tuple(left), tuple(right), kind, budget, 6, language)
            )
            got_value = got if got is None else got[0]
            assert got_value == want, (kind, left, right, language)
            checked += 1
    assert checked > 100


def test_fgm_cost_monotone_in_left_set(rng):
    for _ in range(15):
        count = rng.randint(2, 3)
        edges = [(a, b) for a in range(count) for b in range(count) if rng.random() < 0.45]
        u = build_universe([(Frame(count, edges), 1)])
        indices = range(len(u.models))
        left = rng.sample(indices, 2)
        right = rng.sample(indices, 1)
        small = min_cost_fgm(GamePosition(u, left[:1], right), MeasureKind.LENGTH, 6)
        big = min_cost_fgm(GamePosition(u, left, right), MeasureKind.LENGTH, 6)
        if big is not None:
            assert small is not None
            assert small[0] <= big[0]


def test_fgm_resource_cap():
    u, left, right = noncol_game_setup(3)
    with pytest.raises(ResourceCapError):
        min_cost_fgm(
            GamePosition(u, left, right),
            MeasureKind.LENGTH,
            9,
            language=GLOBAL,
            position_cap=50,
        )


# --- the frame game ---------------------------------------------------------


def test_fgf_transfer_0_1_cost_4():
    cost, tree, choices = fgf_min_cost(transfer_witnesses(0, 1), MeasureKind.LENGTH, 1, 6)
    assert cost == 4
    psi = psi_of_tree(tree)
    assert psi == parse("(~p1 | <> p1)") or psi == parse("(p1 | <> ~p1)")
    assert set(choices) == {"b"}


def test_fgf_symmetry_cost_5():
    cost, tree, _ = fgf_min_cost(symmetry_witnesses(), MeasureKind.LENGTH, 1, 5)
    assert cost == 5
    assert psi_of_tree(tree) == parse("(~p1 | [] <> p1)")
    assert verify_closed_tree(tree)


def test_fgf_respects_budget():
    assert fgf_min_cost(transfer_witnesses(0, 1), MeasureKind.LENGTH, 1, 3) is None


def test_fgf_non_length_measures():
    w = transfer_witnesses(1, 2)
    dia, _, _ = fgf_min_cost(w, MeasureKind.DIA_COUNT, 1, 5, length_cap=8)
    box, _, _ = fgf_min_cost(w, MeasureKind.BOX_COUNT, 1, 5, length_cap=8)
    depth, _, _ = fgf_min_cost(w, MeasureKind.MODAL_DEPTH, 1, 5, length_cap=8)
    assert (dia, box, depth) == (2, 1, 2)


def test_fgf_tree_separates_the_frames():
    w = transfer_witnesses(2, 1)
    cost, tree, _ = fgf_min_cost(w, MeasureKind.LENGTH, 1, 8)
    assert cost == 6
    psi = psi_of_tree(tree)
    from modalmin.kripke import frame_valid

    assert all(frame_valid(f, psi) for f in w.positives)
    assert not any(frame_valid(f, psi) for f in w.negatives)


# --- weight functions -------------------------------------------------------


def test_check_weight_single_leaf():
    u = _universe_pair()
    leaf = GameTree("lit", GamePosition(u, [0], [1]), var=1, positive=True)
    assert check_weight(leaf, {leaf: 1})
    assert not check_weight(leaf, {leaf: 2})
    assert not check_weight(leaf, {leaf: -1})


def test_check_weight_parent_excess_clause():
    u = _universe_pair()
    leaf_pos = GamePosition(u, [0], [1])
    left = GameTree("lit", leaf_pos, var=1, positive=True)
    right = GameTree("bot", GamePosition(u, [], [1]))
    parent = GameTree("or", leaf_pos, children=(left, right))
    assert check_weight(parent, {parent: 3, left: 1, right: 1})
    assert not check_weight(parent, {parent: 4, left: 1, right: 1})


def test_node_count_bounds_root_weight(rng):
    universe, left, right = noncol_game_setup(2)
    cost, tree = min_cost_fgm(
        GamePosition(universe, left, right), MeasureKind.LENGTH, 6, language=GLOBAL
    )
    weight = special_pair_weight(tree)
    assert check_weight(tree, weight)
    assert weight[tree] == 2
    assert node_count(tree) >= weight[tree]
    assert cost == 6
