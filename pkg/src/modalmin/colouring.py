"""Graph colouring expressed as frame validity.

A directed graph is n-colourable when its states can be partitioned into n
classes with no edge inside a class (a self-loop therefore rules every
colouring out).  Encoding colours as truth value combinations of
ceil(log2 n) variables turns non-colourability into validity of a single
formula with the global modality, and the associated games yield matching
lower bounds.
"""

from __future__ import annotations

from .formula import (
    Formula,
    TRUE,
    Or,
    And,
    Dia,
    PosLit,
    NegLit,
    ExistsMod,
)
from .kripke import Frame, Model, PointedModel, Universe, frame_valid

__all__ = [
    "colour_code_width",
    "elementary_conjunction",
    "phi_n",
    "k_complete",
    "khat",
    "colour_assignment",
    "is_n_colourable",
    "noncol_equivalence",
    "standard_colour_model",
    "noncol_game_setup",
]


def colour_code_width(n: int) -> int:
    """Variables needed to give n colours distinct truth value codes."""
    if n < 1:
        raise ValueError("need at least one colour")
    return (n - 1).bit_length()


def elementary_conjunction(code: int, width: int) -> Formula:
    """The conjunction of literals over p1..p{width} matching ``code``.

    Bit b of the code decides the sign of p{b+1}; the conjunction is
    right-associated.  Width must be positive.
    """
    if width < 1:
        raise ValueError("elementary conjunction needs at least one variable")
    lits = [
        PosLit(b + 1) if code >> b & 1 else NegLit(b + 1)
        for b in range(width)
    ]
    out = lits[-1]
    for lit in reversed(lits[:-1]):
        out = And(lit, out)
    return out


def phi_n(n: int) -> Formula:
    """A formula valid on exactly the frames that are not n-colourable.

    Reading each state's truth values for p1..pk (k = ceil(log2 n)) as a
    colour code, the formula says some state either carries one of the
    2^k - n unused codes or repeats its code on a successor.  For n = 1 it
    degenerates to "some state has a successor".
    """
    if n < 1:
        raise ValueError("need at least one colour")
    if n == 1:
        return ExistsMod(Dia(TRUE))
    width = colour_code_width(n)
    terms = []
    for code in range(n):
        conj = elementary_conjunction(code, width)
        terms.append(And(conj, Dia(conj)))
    for code in range(n, 1 << width):
        terms.append(elementary_conjunction(code, width))
    out = terms[-1]
    for term in reversed(terms[:-1]):
        out = Or(term, out)
    return ExistsMod(out)


def k_complete(n: int) -> Frame:
    """The complete loopless digraph on n states."""
    if n < 1:
        raise ValueError("need at least one state")
    return Frame(
        n, [(u, v) for u in range(n) for v in range(n) if u != v]
    )


def khat(n: int) -> Frame:
    """Two disjoint copies of the complete graph, one with a reflexive state.

    States 0..n-1 form a plain copy, states n..2n-1 a second copy whose
    state n (the image of 0) carries a self-loop.  The copies are not
    connected to each other.
    """
    if n < 1:
        raise ValueError("need at least one state")
    edges = [(u, v) for u in range(n) for v in range(n) if u != v]
    edges += [(n + u, n + v) for u in range(n) for v in range(n) if u != v]
    edges.append((n, n))
    return Frame(2 * n, edges)


def colour_assignment(frame: Frame, n: int) -> tuple[int, ...] | None:
    """A proper n-colouring of the frame's states, or None.

    Edge direction is ignored: an edge in either direction forces distinct
    colours, and a self-loop makes every colouring improper.
    """
    if n < 1:
        raise ValueError("need at least one colour")
    count = frame.state_count
    adj = [0] * count
    for u, v in frame.edges():
        if u == v:
            return None
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    colours = [-1] * count

    def assign(s: int) -> bool:
        if s == count:
            return True
        used = {
            colours[t]
            for t in range(count)
            if adj[s] >> t & 1 and colours[t] >= 0
        }
        # Trying at most one previously unused colour suffices: unused
        # colours are interchangeable.
        fresh_tried = False
        for c in range(n):
            if c in used:
                continue
            if c > max(colours[:s], default=-1):
                if fresh_tried:
                    break
                fresh_tried = True
            colours[s] = c
            if assign(s + 1):
                return True
            colours[s] = -1
        return False

    if not assign(0):
        return None
    return tuple(colours)


def is_n_colourable(frame: Frame, n: int) -> bool:
    return colour_assignment(frame, n) is not None


def noncol_equivalence(frame: Frame, n: int) -> bool:
    """Whether the two routes to n-non-colourability agree on the frame.

    Route one decides validity of phi_n over all valuations; route two
    searches for a colouring directly.  Both are computed in full; the
    return value reports their agreement.
    """
    via_validity = frame_valid(frame, phi_n(n))
    via_search = not is_n_colourable(frame, n)
    return via_validity == via_search


def standard_colour_model(n: int) -> PointedModel:
    """The complete graph with each state carrying its own index as code.

    State w satisfies p{b+1} exactly when bit b of w is set, so the n
    states get pairwise distinct colour codes; the point is state 0.
    """
    width = colour_code_width(n)
    frame = k_complete(n)
    valuation = {}
    for b in range(width):
        valuation[b + 1] = sum(1 << w for w in range(n) if w >> b & 1)
    return PointedModel(Model(frame, valuation), 0)


def noncol_game_setup(
    n: int,
    right_choice: PointedModel | None = None,
) -> tuple[Universe, tuple[int, ...], tuple[int, ...]]:
    """The game position whose value bounds separating formulas for phi_n.

    The right side is a single pointed model over the complete graph with
    pairwise distinct state codes (default: ``standard_colour_model``).
    The left side holds one pointed model per state w: the doubled graph
    ``khat(n)`` carrying the right valuation composed with the
    transposition of 0 and w, pointed so that its code matches the right
    point's code.  Returns a point-closed universe plus the left and right
    index tuples.
    """
    if n < 1:
        raise ValueError("need at least one colour")
    if right_choice is None:
        right_choice = standard_colour_model(n)
    model, point = right_choice.model, right_choice.point
    if model.frame != k_complete(n):
        raise ValueError("right model must live on the complete graph")
    var_order = sorted(model.valuation)
    codes = [model.atom_code(w, var_order) for w in range(n)]
    if len(set(codes)) != n:
        raise ValueError("right model's state codes must be pairwise distinct")

    doubled = khat(n)
    pointed: list[PointedModel] = []
    left: list[int] = []
    for w in range(n):
        swap = {0: w, w: 0}
        valuation = {}
        for var, mask in model.valuation.items():
            out = 0
            for u in range(n):
                if mask >> swap.get(u, u) & 1:
                    out |= 1 << u | 1 << (n + u)
            valuation[var] = out
        moved = Model(doubled, valuation)
        base = len(pointed)
        pointed.extend(PointedModel(moved, s) for s in range(2 * n))
        left.append(base + swap.get(point, point))
    base = len(pointed)
    pointed.extend(PointedModel(model, s) for s in range(n))
    right = (base + point,)
    return Universe(pointed), tuple(left), right
