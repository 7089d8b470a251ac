"""Formula-complexity games on pointed models and on frames.

One player grows a formula syntax tree move by move; the other answers every
modal move greedily by keeping all available successor (or same-model)
pointed models.  A finished tree whose leaves legally close reads off a
formula separating the root position, and the cheapest closed tree equals
the cheapest separating formula, which is what the search procedures here
compute.  Positions are pairs of index sets over a fixed point-closed
Universe, handled internally as int bit masks.
"""

from __future__ import annotations

from .formula import (
    BASIC,
    GLOBAL,
    And,
    Box,
    Dia,
    ExistsMod,
    FALSE,
    ForallMod,
    Formula,
    MeasureKind,
    NegLit,
    Or,
    PosLit,
    TRUE,
    check_language,
    measure,
)
from .gallery import WitnessSet
from .kripke import (
    PointedModel,
    ResourceCapError,
    UNIVERSE_CAP,
    Universe,
    bisimilar,
    expand_reduced,
)

__all__ = [
    "POSITION_CAP",
    "MOVES",
    "GamePosition",
    "GameTree",
    "psi_of_tree",
    "node_count",
    "tree_cost",
    "closed_tree_violations",
    "verify_closed_tree",
    "check_weight",
    "special_pair_weight",
    "min_cost_fgm",
    "fgf_min_cost",
]

POSITION_CAP = 200_000

MOVES = ("bot", "top", "lit", "or", "and", "dia", "box", "exists", "forall")

_ARITY = {
    "bot": 0, "top": 0, "lit": 0,
    "dia": 1, "box": 1, "exists": 1, "forall": 1,
    "or": 2, "and": 2,
}

_MODAL_MOVES = frozenset(("dia", "box", "exists", "forall"))

_SYMBOL_OF_MOVE = {
    "bot": MeasureKind.FALSE_COUNT,
    "top": MeasureKind.TRUE_COUNT,
    "or": MeasureKind.OR_COUNT,
    "and": MeasureKind.AND_COUNT,
    "dia": MeasureKind.DIA_COUNT,
    "box": MeasureKind.BOX_COUNT,
    "exists": MeasureKind.EXISTS_COUNT,
    "forall": MeasureKind.FORALL_COUNT,
}


class GamePosition:
    """A pair of index sets over a shared universe of pointed models.

    The left set holds the pointed models the eventual formula must satisfy,
    the right set those it must refute.
    """

    __slots__ = ("universe", "left", "right")

    def __init__(self, universe: Universe, left, right):
        self.universe = universe
        self.left = frozenset(left)
        self.right = frozenset(right)
        for i in self.left | self.right:
            if not (0 <= i < len(universe)):
                raise ValueError(f"index {i} out of range for the universe")

    def __eq__(self, other):
        return (
            isinstance(other, GamePosition)
            and other.universe is self.universe
            and other.left == self.left
            and other.right == self.right
        )

    def __hash__(self):
        return hash((id(self.universe), self.left, self.right))

    def __repr__(self):
        return f"GamePosition(left={sorted(self.left)}, right={sorted(self.right)})"


class GameTree:
    """A node of a (closed) game tree; compared by identity."""

    __slots__ = ("move", "position", "children", "var", "positive")

    def __init__(self, move, position, children=(), var=None, positive=None):
        if move not in MOVES:
            raise ValueError(f"unknown move: {move!r}")
        self.move = move
        self.position = position
        self.children = tuple(children)
        self.var = var
        self.positive = positive

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def __repr__(self):
        return f"GameTree({self.move!r}, children={len(self.children)})"


def psi_of_tree(t: GameTree) -> Formula:
    """The formula whose syntax tree the closed game tree spells out."""
    if len(t.children) != _ARITY[t.move]:
        raise ValueError(
            f"{t.move} node with {len(t.children)} children is not closed"
        )
    if t.move == "bot":
        return FALSE
    if t.move == "top":
        return TRUE
    if t.move == "lit":
        if t.var is None or t.positive is None:
            raise ValueError("literal leaf without a literal")
        return PosLit(t.var) if t.positive else NegLit(t.var)
    if t.move == "or":
        return Or(psi_of_tree(t.children[0]), psi_of_tree(t.children[1]))
    if t.move == "and":
        return And(psi_of_tree(t.children[0]), psi_of_tree(t.children[1]))
    ctor = {"dia": Dia, "box": Box, "exists": ExistsMod, "forall": ForallMod}[t.move]
    return ctor(psi_of_tree(t.children[0]))


def node_count(t: GameTree) -> int:
    return 1 + sum(node_count(c) for c in t.children)


def tree_cost(t: GameTree, kind: MeasureKind) -> int:
    return measure(psi_of_tree(t), kind)


# --- legality ---------------------------------------------------------------


def _is_exact_image(options: list[tuple[int, ...]], image: frozenset[int]) -> bool:
    """Whether some choice of one option per slot has exactly this image.

    Needs every slot to intersect the image and an injective assignment of a
    distinct slot to every image element, found by iterative augmenting
    paths so large images stay within the recursion limit.
    """
    if not all(image.intersection(o) for o in options):
        return False
    elems = sorted(image)
    if len(elems) > len(options):
        return False
    slots_for = {
        x: [s for s, o in enumerate(options) if x in o] for x in elems
    }
    owner: dict[int, int] = {}

    def augment(x: int) -> bool:
        visited: set[int] = set()
        stack = [(x, iter(slots_for[x]), None)]
        while stack:
            elem, it, _ = stack[-1]
            moved = False
            for s in it:
                if s in visited:
                    continue
                visited.add(s)
                if s not in owner:
                    while stack:
                        elem, _, via = stack.pop()
                        owner[s] = elem
                        s = via
                    return True
                stack.append((owner[s], iter(slots_for[owner[s]]), s))
                moved = True
                break
            if not moved:
                stack.pop()
        return False

    return all(augment(x) for x in elems)


def closed_tree_violations(t: GameTree, language: str = GLOBAL) -> list[str]:
    """Diagnostics for every way the tree fails to be a legal closed tree.

    Each entry is "path: message" with the path a dot-joined child index
    sequence from the root.  Split moves accept any cover of the parent set,
    matching the move definition; the search itself only emits partitions.
    """
    check_language(language)
    out: list[str] = []

    def visit(node: GameTree, path: str) -> None:
        u = node.position.universe
        left, right = node.position.left, node.position.right
        if len(node.children) != _ARITY[node.move]:
            out.append(
                f"{path}: {node.move} node has {len(node.children)} children"
            )
            return
        for k, c in enumerate(node.children):
            if c.position.universe is not u:
                out.append(f"{path}.{k}: child position over a different universe")
                return
        if node.move in ("exists", "forall") and language == BASIC:
            out.append(f"{path}: {node.move} move outside the basic language")

        if node.move == "bot":
            if left:
                out.append(f"{path}: bot move with non-empty left set")
        elif node.move == "top":
            if right:
                out.append(f"{path}: top move with non-empty right set")
        elif node.move == "lit":
            if node.var is None or node.positive is None:
                out.append(f"{path}: literal leaf without a literal")
            else:
                for i in sorted(left):
                    pm = u.models[i]
                    if pm.model.holds(node.var, pm.point) != node.positive:
                        out.append(f"{path}: left index {i} refutes the literal")
                for i in sorted(right):
                    pm = u.models[i]
                    if pm.model.holds(node.var, pm.point) == node.positive:
                        out.append(f"{path}: right index {i} satisfies the literal")
        elif node.move == "or":
            a, b = node.children
            if a.position.right != right or b.position.right != right:
                out.append(f"{path}: or move must keep the right set")
            if a.position.left | b.position.left != left:
                out.append(f"{path}: or children do not cover the left set")
        elif node.move == "and":
            a, b = node.children
            if a.position.left != left or b.position.left != left:
                out.append(f"{path}: and move must keep the left set")
            if a.position.right | b.position.right != right:
                out.append(f"{path}: and children do not cover the right set")
        elif node.move in ("dia", "exists"):
            child = node.children[0]
            if node.move == "dia":
                options = [u.succ[i] for i in sorted(left)]
                if any(not o for o in options):
                    out.append(f"{path}: dia move with a successor-less left index")
                greedy = frozenset(j for i in right for j in u.succ[i])
            else:
                options = [u.same_model[i] for i in sorted(left)]
                greedy = frozenset(j for i in right for j in u.same_model[i])
            if child.position.right != greedy:
                out.append(f"{path}: child right set is not the greedy reply")
            if not _is_exact_image(options, child.position.left):
                out.append(f"{path}: child left set is not an exact choice image")
        elif node.move in ("box", "forall"):
            child = node.children[0]
            if node.move == "box":
                options = [u.succ[i] for i in sorted(right)]
                if any(not o for o in options):
                    out.append(f"{path}: box move with a successor-less right index")
                greedy = frozenset(j for i in left for j in u.succ[i])
            else:
                options = [u.same_model[i] for i in sorted(right)]
                greedy = frozenset(j for i in left for j in u.same_model[i])
            if child.position.left != greedy:
                out.append(f"{path}: child left set is not the greedy reply")
            if not _is_exact_image(options, child.position.right):
                out.append(f"{path}: child right set is not an exact choice image")
        for k, c in enumerate(node.children):
            visit(c, f"{path}.{k}")

    visit(t, "root")
    return out


def verify_closed_tree(t: GameTree, language: str = GLOBAL) -> bool:
    return not closed_tree_violations(t, language)


# --- weight functions -------------------------------------------------------


def check_weight(t: GameTree, f: dict[GameTree, float]) -> bool:
    """Whether f satisfies the three weight clauses on every node.

    Leaves need f <= 1; a node's weight may exceed its children's total by
    at most 1.  Every node must be assigned a non-negative value.
    """
    for node in t.walk():
        if node not in f:
            return False
        w = f[node]
        if w < 0:
            return False
        if not node.children:
            if w > 1:
                return False
        elif w > sum(f[c] for c in node.children) + 1:
            return False
    return True


def special_pair_weight(t: GameTree) -> dict[GameTree, int]:
    """Per node, how many left models pair with a right index on equal atoms.

    A pair is special when the left and right points carry identical
    valuations; the count is over distinct left models admitting one.  On
    positions built by the non-colourability game setup the root count is n,
    and the count satisfies the weight clauses, so any closed tree from the
    root has at least n nodes.
    """
    out: dict[GameTree, int] = {}
    for node in t.walk():
        u = node.position.universe
        pairs = set()
        for i in node.position.left:
            lm = u.models[i]
            for j in node.position.right:
                rm = u.models[j]
                var_order = sorted(set(lm.model.valuation) | set(rm.model.valuation))
                if lm.model.atom_code(lm.point, var_order) == rm.model.atom_code(
                    rm.point, var_order
                ):
                    pairs.add(lm.model)
                    break
        out[node] = len(pairs)
    return out


# --- measure algebra for searches -------------------------------------------
#
# A search entry tracks (aux, length): length is the node count so far, aux
# the measure being minimized (an int, or a frozenset of variables for
# VAR_COUNT).  Entries are kept Pareto-minimal per position; for Length the
# two components agree and frontiers collapse to singletons.


def _aux_leaf(kind: MeasureKind, move: str, var: int | None):
    if kind is MeasureKind.LENGTH:
        return 1
    if kind is MeasureKind.VAR_COUNT:
        return frozenset((var,)) if move == "lit" else frozenset()
    if kind is MeasureKind.MODAL_DEPTH:
        return 0
    return 1 if _SYMBOL_OF_MOVE.get(move) is kind else 0


def _aux_zero(kind: MeasureKind):
    if kind is MeasureKind.LENGTH:
        return 1
    if kind is MeasureKind.VAR_COUNT:
        return frozenset()
    return 0


def _aux_combine(kind: MeasureKind, move: str, child_auxes):
    if kind is MeasureKind.LENGTH:
        return 1 + sum(child_auxes)
    if kind is MeasureKind.VAR_COUNT:
        out = frozenset()
        for a in child_auxes:
            out |= a
        return out
    if kind is MeasureKind.MODAL_DEPTH:
        return max(child_auxes) + (1 if move in _MODAL_MOVES else 0)
    own = 1 if _SYMBOL_OF_MOVE.get(move) is kind else 0
    return own + sum(child_auxes)


def _aux_value(kind: MeasureKind, aux) -> int:
    return len(aux) if kind is MeasureKind.VAR_COUNT else aux


def _aux_key(kind: MeasureKind, aux):
    if kind is MeasureKind.VAR_COUNT:
        return (len(aux), tuple(sorted(aux)))
    return aux


def _aux_le(kind: MeasureKind, a, b) -> bool:
    return a <= b


def _pareto(kind: MeasureKind, entries: list) -> tuple:
    """Keep entries minimal under (aux, length), stable on ties."""
    entries = sorted(entries, key=lambda e: (_aux_key(kind, e[0]), e[1]))
    kept = []
    for e in entries:
        if not any(_aux_le(kind, k[0], e[0]) and k[1] <= e[1] for k in kept):
            kept.append(e)
    return tuple(kept)


def _mask_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _minimal_hitting_masks(option_masks: list[int]) -> list[int]:
    """All inclusion-minimal sets hitting every option mask.

    Minimal hitting sets are exactly the inclusion-minimal exact choice
    images, which by cost monotonicity are the only images worth searching;
    with no options at all the empty image is the answer.
    """
    opts = sorted(set(option_masks), key=lambda m: (m.bit_count(), m))
    found: list[int] = []
    seen: set[int] = set()

    def dfs(chosen: int) -> None:
        if chosen in seen:
            return
        seen.add(chosen)
        for m in opts:
            if not m & chosen:
                for b in _mask_bits(m):
                    dfs(chosen | 1 << b)
                return
        found.append(chosen)

    dfs(0)
    uniq = sorted(set(found), key=lambda m: (m.bit_count(), m))
    minimal: list[int] = []
    for m in uniq:
        if not any(g & ~m == 0 for g in minimal):
            minimal.append(m)
    return minimal


# --- the search engine ------------------------------------------------------
#
# One shared table serves both games: it maps each right set R to a Pareto
# family of elements (achievable left set, aux, length), the left sets from
# which a closed tree with those costs exists against R.  Left sets are
# handled as whole masks (an or-move is a union of two elements), so only
# right sets are ever partitioned; the families grow level by level in tree
# length, and a query asks for the cheapest element covering a target left
# set.  Cost monotonicity in both position sets makes this equivalent to
# searching positions directly while keeping large left sets tractable.
#
# Dominated elements are dropped, but every dropped element is covered by a
# survivor that is at least as large and no more expensive, so tree
# reconstruction re-queries the families instead of trusting stored child
# references.


class _FamilySearch:
    # elements are (set_mask, aux, length, prov)

    def __init__(self, universe, kind, budget, length_cap, language, element_cap):
        self.u = universe
        self.kind = kind
        self.budget = budget
        self.length_cap = length_cap
        self.language = language
        self.element_cap = element_cap
        self.cells: dict[int, list] = {}
        self.done_len: dict[int, int] = {}
        self.element_count = 0
        self.vars = sorted(
            {v for pm in universe.models for v in pm.model.valuation}
        )
        self.lit_masks = {
            var: sum(
                1 << i
                for i, pm in enumerate(universe.models)
                if pm.model.holds(var, pm.point)
            )
            for var in self.vars
        }
        self.full = (1 << len(universe)) - 1

    def _insert(self, cell: list, element) -> None:
        mask, aux, length, _ = element
        kind = self.kind
        if _aux_value(kind, aux) > self.budget:
            return
        for m2, a2, l2, _ in cell:
            if mask & ~m2 == 0 and _aux_le(kind, a2, aux) and l2 <= length:
                return
        cell[:] = [
            e for e in cell
            if not (
                e[0] & ~mask == 0
                and _aux_le(kind, aux, e[1])
                and length <= e[2]
            )
        ] + [element]
        self.element_count += 1
        if self.element_count > self.element_cap:
            raise ResourceCapError(
                f"frame game search exceeded {self.element_cap} elements"
            )

    def _cell(self, rmask: int) -> list:
        cell = self.cells.get(rmask)
        if cell is None:
            cell = []
            self.cells[rmask] = cell
            self.done_len[rmask] = 0
        return cell

    def _entries_at(self, rmask: int, length: int) -> list:
        return [e for e in self.cells[rmask] if e[2] == length]

    def compute(self, rmask: int, upto: int) -> None:
        cell = self._cell(rmask)
        start = self.done_len[rmask]
        for length in range(start + 1, upto + 1):
            self._level(rmask, cell, length)
            self.done_len[rmask] = length

    def _greedy_succ(self, rmask: int) -> int:
        out = 0
        for i in _mask_bits(rmask):
            out |= self.u.succ_masks[i]
        return out

    def _greedy_same(self, rmask: int) -> int:
        out = 0
        for i in _mask_bits(rmask):
            out |= self.u.same_masks[i]
        return out

    def _admitted_exists(self, m: int) -> int:
        u = self.u
        return sum(1 << i for i in range(len(u)) if u.succ_masks[i] & m)

    def _admitted_box(self, m: int) -> int:
        u = self.u
        return sum(1 << i for i in range(len(u)) if u.succ_masks[i] & ~m == 0)

    def _admitted_same(self, m: int) -> int:
        u = self.u
        return sum(1 << i for i in range(len(u)) if u.same_masks[i] & m)

    def _admitted_forall(self, m: int) -> int:
        u = self.u
        return sum(1 << i for i in range(len(u)) if u.same_masks[i] & ~m == 0)

    def _level(self, rmask: int, cell: list, length: int) -> None:
        kind = self.kind
        u = self.u
        if length == 1:
            self._insert(cell, (0, _aux_leaf(kind, "bot", None), 1, ("bot",)))
            if rmask == 0:
                self._insert(
                    cell, (self.full, _aux_leaf(kind, "top", None), 1, ("top",))
                )
            for var in self.vars:
                holds = self.lit_masks[var]
                if rmask & holds == 0:
                    self._insert(
                        cell,
                        (holds, _aux_leaf(kind, "lit", var), 1, ("lit", var, True)),
                    )
                if rmask & ~holds == 0:
                    self._insert(
                        cell,
                        (self.full & ~holds, _aux_leaf(kind, "lit", var), 1,
                         ("lit", var, False)),
                    )
            return

        def child_entries(crmask: int):
            self.compute(crmask, length - 1)
            return self._entries_at(crmask, length - 1)

        # dia: the reply keeps all right successors; a subtree winning from
        # (M, R') admits every left index with a successor inside M.
        greedy = self._greedy_succ(rmask)
        for m, aux, clen, _ in child_entries(greedy):
            self._insert(
                cell,
                (self._admitted_exists(m), _aux_combine(kind, "dia", (aux,)),
                 length, ("dia", greedy, aux, clen)),
            )
        # box: an image of the right successors is chosen; admitted left
        # indices are those whose successors all land inside M.
        if all(u.succ_masks[i] for i in _mask_bits(rmask)):
            for image in _minimal_hitting_masks(
                [u.succ_masks[i] for i in _mask_bits(rmask)]
            ):
                for m, aux, clen, _ in child_entries(image):
                    self._insert(
                        cell,
                        (self._admitted_box(m), _aux_combine(kind, "box", (aux,)),
                         length, ("box", image, aux, clen)),
                    )
        if self.language == GLOBAL:
            greedy = self._greedy_same(rmask)
            for m, aux, clen, _ in child_entries(greedy):
                self._insert(
                    cell,
                    (self._admitted_same(m), _aux_combine(kind, "exists", (aux,)),
                     length, ("exists", greedy, aux, clen)),
                )
            for image in _minimal_hitting_masks(
                [u.same_masks[i] for i in _mask_bits(rmask)]
            ):
                for m, aux, clen, _ in child_entries(image):
                    self._insert(
                        cell,
                        (self._admitted_forall(m),
                         _aux_combine(kind, "forall", (aux,)),
                         length, ("forall", image, aux, clen)),
                    )

        # or: union of two achievable sets against the same right set.
        for len1 in range(1, (length - 1) // 2 + 1):
            len2 = length - 1 - len1
            ones = self._entries_at(rmask, len1)
            twos = self._entries_at(rmask, len2) if len2 != len1 else ones
            for i1, (m1, a1, l1, _) in enumerate(ones):
                start = i1 + 1 if len1 == len2 else 0
                for m2, a2, l2, _ in twos[start:]:
                    self._insert(
                        cell,
                        (m1 | m2, _aux_combine(kind, "or", (a1, a2)), length,
                         ("or", a1, l1, a2, l2)),
                    )

        # and: the right set splits in two; both subtrees must admit.
        if rmask & (rmask - 1):
            low = rmask & -rmask
            rest = rmask ^ low
            sub = rest
            while sub:
                part1 = low | (rest ^ sub)
                part2 = sub
                for len1 in range(1, length - 1):
                    len2 = length - 1 - len1
                    self.compute(part1, len1)
                    self.compute(part2, len2)
                    for m1, a1, l1, _ in self._entries_at(part1, len1):
                        for m2, a2, l2, _ in self._entries_at(part2, len2):
                            self._insert(
                                cell,
                                (m1 & m2,
                                 _aux_combine(kind, "and", (a1, a2)), length,
                                 ("and", part1, l1, part2, l2)),
                            )
                sub = (sub - 1) & rest

    # --- queries and reconstruction ---

    def best_cover(self, rmask: int, target: int, len_limit: int):
        cands = [
            e for e in self.cells.get(rmask, ())
            if target & ~e[0] == 0 and e[2] <= len_limit
        ]
        if not cands:
            return None
        return min(cands, key=lambda e: (_aux_key(self.kind, e[1]), e[2]))

    def build(self, target: int, rmask: int, len_limit: int) -> GameTree:
        """A closed tree from (target, rmask) no costlier than the best cover.

        Dropped elements are always covered by surviving ones, so children
        are re-queried rather than read from stored references.
        """
        entry = self.best_cover(rmask, target, len_limit)
        if entry is None:
            raise RuntimeError("no covering element during reconstruction")
        _, aux, length, prov = entry
        kind = self.kind
        u = self.u
        pos = GamePosition(u, _mask_bits(target), _mask_bits(rmask))
        tag = prov[0]
        if tag == "bot":
            return GameTree("bot", pos)
        if tag == "top":
            return GameTree("top", pos)
        if tag == "lit":
            return GameTree("lit", pos, var=prov[1], positive=prov[2])
        if tag in ("dia", "exists"):
            crmask, caux, clen = prov[1], prov[2], prov[3]
            moved = u.succ_masks if tag == "dia" else u.same_masks
            child_cands = [
                f for f in self.cells.get(crmask, ())
                if f[2] <= clen
                and _aux_le(kind, f[1], caux)
                and all(moved[i] & f[0] for i in _mask_bits(target))
            ]
            f = min(child_cands, key=lambda e: (_aux_key(kind, e[1]), e[2]))
            image = 0
            for i in _mask_bits(target):
                opts = moved[i] & f[0]
                image |= opts & -opts
            child = self.build(image, crmask, f[2])
            return GameTree(tag, pos, (child,))
        if tag in ("box", "forall"):
            image, clen = prov[1], prov[3]
            moved = u.succ_masks if tag == "box" else u.same_masks
            ctarget = 0
            for i in _mask_bits(target):
                ctarget |= moved[i]
            child = self.build(ctarget, image, clen)
            return GameTree(tag, pos, (child,))
        if tag == "or":
            a1, l1, a2, l2 = prov[1:]
            cell = self.cells[rmask]
            pairs = [
                (f, g)
                for f in cell if f[2] <= l1 and _aux_le(kind, f[1], a1)
                for g in cell if g[2] <= l2 and _aux_le(kind, g[1], a2)
                and target & ~(f[0] | g[0]) == 0
            ]
            f, g = min(
                pairs,
                key=lambda p: (
                    _aux_key(kind, _aux_combine(kind, "or", (p[0][1], p[1][1]))),
                    p[0][2] + p[1][2],
                ),
            )
            t1 = target & f[0]
            t2 = target & ~f[0]
            return GameTree(
                "or", pos,
                (self.build(t1, rmask, f[2]), self.build(t2, rmask, g[2])),
            )
        part1, l1, part2, l2 = prov[1:]
        return GameTree(
            "and", pos,
            (self.build(target, part1, l1), self.build(target, part2, l2)),
        )


def min_cost_fgm(
    pos: GamePosition,
    kind: MeasureKind,
    budget: int,
    language: str = BASIC,
    length_cap: int | None = None,
    position_cap: int = POSITION_CAP,
) -> tuple[int, GameTree] | None:
    """The cheapest closed game tree from the position, if any within budget.

    The cost is the measure of the read-off formula; for measures other
    than Length a length_cap is required to bound the search.  Returns
    (cost, tree) with cost <= budget, or None when no closed tree fits.
    """
    check_language(language)
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not kind.applies_to(language):
        raise ValueError(f"measure {kind.value} needs the global language")
    if kind is MeasureKind.LENGTH:
        eff_cap = budget if length_cap is None else min(budget, length_cap)
    else:
        if length_cap is None:
            raise ValueError("non-Length measures need a length_cap")
        eff_cap = length_cap
    u = pos.universe
    if not u.point_closed:
        raise ValueError("game search needs a point-closed universe")
    for i in pos.left:
        for j in pos.right:
            if bisimilar(u.models[i], u.models[j], language):
                return None

    search = _FamilySearch(u, kind, budget, eff_cap, language, position_cap)
    lmask = sum(1 << i for i in pos.left)
    rmask = sum(1 << i for i in pos.right)
    best = None
    for upto in range(1, eff_cap + 1):
        search.compute(rmask, upto)
        if kind is MeasureKind.LENGTH or upto == eff_cap:
            best = search.best_cover(rmask, lmask, upto)
            if best is not None and kind is MeasureKind.LENGTH:
                break
    if lmask == 0 and eff_cap >= 1:
        # The bot leaf always closes an empty left side; prefer it on ties
        # even when a wider element shadowed it in the family.
        bot_aux = _aux_leaf(kind, "bot", None)
        if _aux_value(kind, bot_aux) <= budget and (
            best is None
            or (_aux_key(kind, bot_aux), 1) <= (_aux_key(kind, best[1]), best[2])
        ):
            return _aux_value(kind, bot_aux), GameTree(
                "bot", GamePosition(u, (), pos.right)
            )
    if best is None:
        return None
    tree = search.build(lmask, rmask, best[2])
    return _aux_value(kind, best[1]), tree


def fgf_min_cost(
    w: WitnessSet,
    kind: MeasureKind,
    var_bound: int,
    budget: int,
    language: str = BASIC,
    length_cap: int | None = None,
    cap: int = UNIVERSE_CAP,
    element_cap: int = POSITION_CAP,
) -> tuple[int, GameTree, dict[str, PointedModel]] | None:
    """The cheapest formula separating the witness frames, as a game value.

    The left side opens with all pointed models over the positive frames
    (up to var_bound variables); the search minimizes over the opponent's
    choices of one pointed model per negative frame.  Returns (cost, tree,
    choice) giving the chosen pointed model per negative frame name (up to
    bisimilarity), or None when no separating formula fits the caps.
    """
    check_language(language)
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if var_bound < 0:
        raise ValueError("var bound must be >= 0")
    if not kind.applies_to(language):
        raise ValueError(f"measure {kind.value} needs the global language")
    if kind is MeasureKind.LENGTH:
        eff_cap = budget if length_cap is None else min(budget, length_cap)
    else:
        if length_cap is None:
            raise ValueError("non-Length measures need a length_cap")
        eff_cap = length_cap

    named = [(f"+{nm}", fr) for nm, fr in w.named_positives()]
    named += [(f"-{nm}", fr) for nm, fr in w.named_negatives()]
    red = expand_reduced(named, var_bound, language, cap)
    u = red.universe

    target = 0
    for nm, _ in w.named_positives():
        for i in red.class_reps[f"+{nm}"]:
            target |= 1 << i
    # Classes are merged globally, so a candidate bisimilar to some positive
    # pointed model is simply a candidate index inside the target set; such
    # a choice blocks every separating formula.
    candidates: list[tuple[str, list[int]]] = []
    for nm, _ in w.named_negatives():
        free = [i for i in red.class_reps[f"-{nm}"] if not target >> i & 1]
        if not free:
            return None
        candidates.append((nm, free))

    search = _FamilySearch(u, kind, budget, eff_cap, language, element_cap)

    def choices(k: int, acc: tuple):
        if k == len(candidates):
            yield acc
            return
        for i in candidates[k][1]:
            yield from choices(k + 1, acc + (i,))

    combos = list(choices(0, ()))
    best = None  # (sort key, aux, length, combo, rmask)
    for upto in range(1, eff_cap + 1):
        last = upto == eff_cap
        for combo in combos:
            rmask = sum(1 << i for i in combo)
            search.compute(rmask, upto)
            if kind is not MeasureKind.LENGTH and not last:
                continue
            entry = search.best_cover(rmask, target, upto)
            if entry is not None:
                key = (_aux_key(kind, entry[1]), entry[2], combo)
                if best is None or key < best[0]:
                    best = (key, entry[1], entry[2], combo, rmask)
        if best is not None and kind is MeasureKind.LENGTH:
            break
    if best is None:
        return None
    _, aux, length, combo, rmask = best
    tree = search.build(target, rmask, length)
    choice = {nm: u.models[i] for (nm, _), i in zip(candidates, combo)}
    return _aux_value(kind, aux), tree, choice
