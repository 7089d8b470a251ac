"""Frame properties, modal axioms, and witness sets that separate them.

A witness set packages finitely many frames that satisfy a frame property
("positives") together with finitely many that violate it ("negatives").
Searching for a formula valid on every positive and refutable on every
negative then gives concrete lower and upper bounds on how succinctly the
property can be expressed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import Formula, Or, And, Dia, Box, PosLit, NegLit
from .kripke import Frame

__all__ = [
    "FrameProperty",
    "REFLEXIVE",
    "TRANSITIVE",
    "SYMMETRIC",
    "CONVERSE_WELL_FOUNDED",
    "REFLEXIVE_TRANSITIVE",
    "TRANSITIVE_CWF",
    "check_property",
    "WitnessSet",
    "transfer_witnesses",
    "s4_witnesses",
    "lob_witnesses",
    "symmetry_witnesses",
    "axiom",
    "builtin_witnesses",
    "format_witnesses",
    "parse_witnesses",
]


@dataclass(frozen=True)
class FrameProperty:
    """A property of Kripke frames checked structurally.

    ``kind`` is one of ``transfer``, ``reflexive``, ``transitive``,
    ``symmetric``, ``cwf``, ``reflexive-transitive``, ``transitive-cwf``.
    Transfer properties carry the two exponents: R^m subset of R^n.
    """

    kind: str
    m: int = 0
    n: int = 0

    @staticmethod
    def transfer(m: int, n: int) -> "FrameProperty":
        if m < 0 or n < 0:
            raise ValueError("transfer exponents must be non-negative")
        return FrameProperty("transfer", m, n)

    def __str__(self) -> str:
        if self.kind == "transfer":
            return f"transfer {self.m} {self.n}"
        return self.kind


REFLEXIVE = FrameProperty("reflexive")
TRANSITIVE = FrameProperty("transitive")
SYMMETRIC = FrameProperty("symmetric")
CONVERSE_WELL_FOUNDED = FrameProperty("cwf")
REFLEXIVE_TRANSITIVE = FrameProperty("reflexive-transitive")
TRANSITIVE_CWF = FrameProperty("transitive-cwf")

_PROPERTY_NAMES = {
    "reflexive": REFLEXIVE,
    "transitive": TRANSITIVE,
    "symmetric": SYMMETRIC,
    "cwf": CONVERSE_WELL_FOUNDED,
    "reflexive-transitive": REFLEXIVE_TRANSITIVE,
    "transitive-cwf": TRANSITIVE_CWF,
}


def _relation_power(frame: Frame, k: int) -> tuple[int, ...]:
    """Successor masks of R^k; R^0 is the identity."""
    rows = tuple(1 << s for s in range(frame.state_count))
    for _ in range(k):
        rows = tuple(
            _compose_row(rows[s], frame) for s in range(frame.state_count)
        )
    return rows


def _compose_row(mask: int, frame: Frame) -> int:
    out = 0
    m = mask
    while m:
        low = m & -m
        out |= frame.succ_masks[low.bit_length() - 1]
        m ^= low
    return out


def _is_reflexive(frame: Frame) -> bool:
    return all(frame.has_edge(s, s) for s in range(frame.state_count))


def _is_transitive(frame: Frame) -> bool:
    two = _relation_power(frame, 2)
    return all(
        two[s] & ~frame.succ_masks[s] == 0 for s in range(frame.state_count)
    )


def _is_symmetric(frame: Frame) -> bool:
    return all(
        frame.has_edge(v, u) for u, v in frame.edges()
    )


def _is_cwf(frame: Frame) -> bool:
    # Converse well-founded on a finite frame means no cycle at all,
    # including self-loops: check the diagonal of the transitive closure.
    closure = frame.transitive_closure()
    return all(
        not closure.succ_masks[s] >> s & 1 for s in range(frame.state_count)
    )


def check_property(frame: Frame, prop: FrameProperty) -> bool:
    if prop.kind == "transfer":
        pm = _relation_power(frame, prop.m)
        pn = _relation_power(frame, prop.n)
        return all(
            pm[s] & ~pn[s] == 0 for s in range(frame.state_count)
        )
    if prop.kind == "reflexive":
        return _is_reflexive(frame)
    if prop.kind == "transitive":
        return _is_transitive(frame)
    if prop.kind == "symmetric":
        return _is_symmetric(frame)
    if prop.kind == "cwf":
        return _is_cwf(frame)
    if prop.kind == "reflexive-transitive":
        return _is_reflexive(frame) and _is_transitive(frame)
    if prop.kind == "transitive-cwf":
        return _is_transitive(frame) and _is_cwf(frame)
    raise ValueError(f"unknown frame property kind: {prop.kind!r}")


@dataclass(frozen=True)
class WitnessSet:
    """Named frames separating a frame property.

    Every positive frame satisfies ``prop`` and every negative frame
    violates it; this coherence is asserted at construction time so a
    witness set can never silently drift out of sync with its property.
    """

    name: str
    prop: FrameProperty
    positives: tuple[Frame, ...]
    negatives: tuple[Frame, ...]
    positive_names: tuple[str, ...]
    negative_names: tuple[str, ...]
    recommended_var_bound: int = 1

    def __post_init__(self) -> None:
        if len(self.positives) != len(self.positive_names):
            raise ValueError("positive frames and names differ in length")
        if len(self.negatives) != len(self.negative_names):
            raise ValueError("negative frames and names differ in length")
        if not self.positives or not self.negatives:
            raise ValueError("witness set needs both positives and negatives")
        for nm, fr in zip(self.positive_names, self.positives):
            if not check_property(fr, self.prop):
                raise ValueError(
                    f"{self.name}: positive frame {nm} violates {self.prop}"
                )
        for nm, fr in zip(self.negative_names, self.negatives):
            if check_property(fr, self.prop):
                raise ValueError(
                    f"{self.name}: negative frame {nm} satisfies {self.prop}"
                )

    def named_positives(self) -> tuple[tuple[str, Frame], ...]:
        return tuple(zip(self.positive_names, self.positives))

    def named_negatives(self) -> tuple[tuple[str, Frame], ...]:
        return tuple(zip(self.negative_names, self.negatives))


def _path_frame(edge_count: int) -> Frame:
    """A bare directed path with the given number of edges."""
    return Frame(
        edge_count + 1, [(i, i + 1) for i in range(edge_count)]
    )


def _transfer_frames_m0(n: int) -> tuple[list[tuple[str, Frame]], list[tuple[str, Frame]]]:
    # R^0 subset of R^n: every state must reach itself in exactly n steps.
    a1 = Frame(1, [(0, 0)])
    # An n-cycle whose states all also feed a shared reflexive sink: the
    # cycle returns in n steps and the sink trivially does.
    cyc = [(i, (i + 1) % n) for i in range(n)]
    feed = [(i, n) for i in range(n)]
    a2 = Frame(n + 1, cyc + feed + [(n, n)])
    b = Frame(2, [(0, 1), (1, 1)])
    return [("a1", a1), ("a2", a2)], [("b", b)]


def _transfer_frames_n0(m: int) -> tuple[list[tuple[str, Frame]], list[tuple[str, Frame]]]:
    # R^m subset of R^0 = identity: every m-step path is a self-return.
    positives = [("a1", Frame(1, [(0, 0)]))]
    # Bare paths of 0 .. m-1 edges have empty R^m, so they qualify vacuously.
    for i in range(2, m + 2):
        positives.append((f"a{i}", _path_frame(i - 2)))
    b = Frame(2, [(0, 1), (1, 1)])
    return positives, [("b", b)]


def _transfer_frames_mn(m: int, n: int) -> tuple[list[tuple[str, Frame]], list[tuple[str, Frame]]]:
    # 0 < m < n.  The heavy positive a1 realizes both exponents: a root r
    # with a reflexive escape, an m-step vertical path and an n-step path
    # to a shared target t which has its own reflexive escape.  Every state
    # on the n-path carries a self-loop so that shorter-than-n walks can
    # idle; the loop on the first such state is load-bearing for R^m there.
    r = 0
    loop = 1
    verticals = list(range(2, m + 1))
    t = m + 1
    loop2 = m + 2
    walkers = list(range(m + 3, m + n + 2))

    edges = [(r, loop), (loop, loop), (t, loop2), (loop2, loop2)]
    chain = [r] + verticals + [t]
    edges += [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]
    wchain = [r] + walkers + [t]
    edges += [(wchain[i], wchain[i + 1]) for i in range(len(wchain) - 1)]
    edges += [(w, w) for w in walkers]
    a1 = Frame(m + n + 2, edges)

    positives = [("a1", a1)]
    for i in range(2, m + 2):
        # Root with reflexive escape plus a dead-end path of i-2 edges.
        pe = [(0, 1), (1, 1)]
        chain = [0] + list(range(2, i))
        pe += [(chain[j], chain[j + 1]) for j in range(len(chain) - 1)]
        positives.append((f"a{i}", Frame(max(2, i), pe)))

    # The negative is a1 without the n-path: r still has the m-step route
    # to t but no n-step one.
    edges_b = [(r, loop), (loop, loop), (t, loop2), (loop2, loop2)]
    chain = [r] + verticals + [t]
    edges_b += [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]
    b = Frame(m + 3, edges_b)
    return positives, [("b", b)]


def _transfer_frames_nm(m: int, n: int) -> tuple[list[tuple[str, Frame]], list[tuple[str, Frame]]]:
    # 0 < n < m.  a1 is a triangle: an m-edge vertical path and an n-edge
    # hypotenuse meeting at a common corner c, with an n-j edge branch
    # hanging off the j-th hypotenuse state.
    r = 0
    verticals = list(range(1, m))
    c = m
    hypo = list(range(m + 1, m + n))
    edges = []
    chain = [r] + verticals + [c]
    edges += [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]
    hchain = [r] + hypo + [c]
    edges += [(hchain[i], hchain[i + 1]) for i in range(len(hchain) - 1)]
    nxt = m + n
    for j in range(n):
        prev = hchain[j]
        for _ in range(n - j):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    a1 = Frame(nxt, edges)

    positives = [("a1", a1)]
    for i in range(2, m + 2):
        # Disjoint union of a dead-end path of i-2 edges and one of n edges,
        # sharing only the root.
        pe = []
        chain = [0] + list(range(1, i - 1))
        pe += [(chain[j], chain[j + 1]) for j in range(len(chain) - 1)]
        diag = [0] + list(range(i - 1, i - 1 + n))
        pe += [(diag[j], diag[j + 1]) for j in range(len(diag) - 1)]
        positives.append((f"a{i}", Frame(i - 1 + n, pe)))

    # Negative: the m-path and n-path both dead-end instead of rejoining.
    eb = []
    chain = [0] + list(range(1, m + 1))
    eb += [(chain[j], chain[j + 1]) for j in range(len(chain) - 1)]
    diag = [0] + list(range(m + 1, m + n + 1))
    eb += [(diag[j], diag[j + 1]) for j in range(len(diag) - 1)]
    b = Frame(m + n + 1, eb)
    return positives, [("b", b)]


def transfer_witnesses(m: int, n: int) -> WitnessSet:
    """Witness frames for the transfer property R^m subset of R^n.

    Requires m != n (the property is trivially universal otherwise) and
    not both zero.
    """
    if m == n:
        raise ValueError("transfer witnesses need distinct exponents")
    if m == 0:
        pos, neg = _transfer_frames_m0(n)
    elif n == 0:
        pos, neg = _transfer_frames_n0(m)
    elif m < n:
        pos, neg = _transfer_frames_mn(m, n)
    else:
        pos, neg = _transfer_frames_nm(m, n)
    return WitnessSet(
        name=f"transfer-{m}-{n}",
        prop=FrameProperty.transfer(m, n),
        positives=tuple(f for _, f in pos),
        negatives=tuple(f for _, f in neg),
        positive_names=tuple(nm for nm, _ in pos),
        negative_names=tuple(nm for nm, _ in neg),
    )


def _reflexive(edges: list[tuple[int, int]], count: int) -> list[tuple[int, int]]:
    return edges + [(s, s) for s in range(count)]


def s4_witnesses() -> WitnessSet:
    """Witnesses for reflexivity plus transitivity.

    The negatives are a reflexive frame that is not transitive and a
    transitive frame that is not reflexive, so a separating formula must
    express the conjunction rather than either half.
    """
    a1 = Frame(4, _reflexive([(0, 1), (0, 2), (0, 3), (1, 2)], 4))
    a2 = Frame(2, _reflexive([(0, 1)], 2))
    a3 = Frame(3, _reflexive([(0, 1), (0, 2)], 3))
    b1 = Frame(4, _reflexive([(0, 1), (1, 2), (0, 3)], 4))
    b2 = Frame(2, [(0, 1), (1, 1)])
    return WitnessSet(
        name="s4",
        prop=REFLEXIVE_TRANSITIVE,
        positives=(a1, a2, a3),
        negatives=(b1, b2),
        positive_names=("a1", "a2", "a3"),
        negative_names=("b1", "b2"),
    )


def lob_witnesses(depth: int) -> WitnessSet:
    """Witnesses for transitivity plus converse well-foundedness.

    ``depth`` controls the largest positive: the transitive closure of a
    tree with branches of length 1 .. depth, which forces any separating
    formula to look that many steps ahead.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    a1 = Frame(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
    a2 = Frame(2, [(0, 1)])
    a3 = Frame(3, [(0, 1), (0, 2)])
    edges = []
    nxt = 1
    for i in range(1, depth + 1):
        prev = 0
        for _ in range(i):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    a4 = Frame(nxt, edges).transitive_closure()
    b1 = Frame(4, [(0, 1), (1, 2), (0, 3)])
    b2 = Frame(2, [(0, 0), (0, 1)])
    return WitnessSet(
        name=f"lob-{depth}",
        prop=TRANSITIVE_CWF,
        positives=(a1, a2, a3, a4),
        negatives=(b1, b2),
        positive_names=("a1", "a2", "a3", "a4"),
        negative_names=("b1", "b2"),
    )


def symmetry_witnesses() -> WitnessSet:
    a1 = Frame(1, [(0, 0)])
    a2 = Frame(1, [])
    a3 = Frame(2, [(0, 1), (1, 0), (1, 1)])
    b = Frame(2, [(0, 1), (1, 1)])
    return WitnessSet(
        name="symmetry",
        prop=SYMMETRIC,
        positives=(a1, a2, a3),
        negatives=(b,),
        positive_names=("a1", "a2", "a3"),
        negative_names=("b",),
    )


def _iterate(op, phi: Formula, k: int) -> Formula:
    for _ in range(k):
        phi = op(phi)
    return phi


def axiom(prop: FrameProperty) -> Formula:
    """The standard modal axiom whose frame validity defines ``prop``.

    Stated in negation normal form over the single variable p1.
    """
    p = PosLit(1)
    np = NegLit(1)
    if prop.kind == "transfer":
        return Or(_iterate(Box, np, prop.m), _iterate(Dia, p, prop.n))
    if prop.kind == "reflexive-transitive":
        return Or(And(np, Box(Box(np))), Dia(p))
    if prop.kind == "transitive-cwf":
        return Or(Box(np), Dia(And(p, Box(np))))
    if prop.kind == "symmetric":
        return Or(np, Box(Dia(p)))
    raise ValueError(f"no axiom registered for property: {prop}")


def builtin_witnesses(name: str) -> WitnessSet:
    """Resolve a builtin witness set name.

    Supported: ``transfer-M-N``, ``s4``, ``lob-D``, ``symmetry``.
    """
    if name == "s4":
        return s4_witnesses()
    if name == "symmetry":
        return symmetry_witnesses()
    if name.startswith("lob-"):
        try:
            depth = int(name[4:])
        except ValueError:
            raise ValueError(f"bad witness set name: {name!r}") from None
        return lob_witnesses(depth)
    if name.startswith("transfer-"):
        parts = name.split("-")
        if len(parts) == 3:
            try:
                return transfer_witnesses(int(parts[1]), int(parts[2]))
            except ValueError as exc:
                raise ValueError(f"bad witness set name: {name!r}") from exc
    raise ValueError(f"unknown witness set: {name!r}")


def format_witnesses(w: WitnessSet) -> str:
    from .kripke import format_frame

    lines = [f"witnesses {w.name}", f"property {w.prop}"]
    if w.recommended_var_bound != 1:
        lines.append(f"vars {w.recommended_var_bound}")
    lines.append("positive:")
    for nm, fr in w.named_positives():
        lines.append(format_frame(nm, fr).rstrip())
    lines.append("negative:")
    for nm, fr in w.named_negatives():
        lines.append(format_frame(nm, fr).rstrip())
    return "\n".join(lines) + "\n"


def parse_witnesses(text: str) -> WitnessSet:
    from .kripke import parse_frames

    name = None
    prop = None
    var_bound = 1
    sections: dict[str, list[str]] = {"positive": [], "negative": []}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped == "positive:":
            current = "positive"
            continue
        if stripped == "negative:":
            current = "negative"
            continue
        if current is not None:
            sections[current].append(raw)
            continue
        parts = stripped.split()
        if parts[0] == "witnesses" and len(parts) == 2:
            name = parts[1]
        elif parts[0] == "property":
            if parts[1] == "transfer" and len(parts) == 4:
                prop = FrameProperty.transfer(int(parts[2]), int(parts[3]))
            elif len(parts) == 2 and parts[1] in _PROPERTY_NAMES:
                prop = _PROPERTY_NAMES[parts[1]]
            else:
                raise ValueError(
                    f"line {lineno}: bad property declaration: {stripped!r}"
                )
        elif parts[0] == "vars" and len(parts) == 2:
            var_bound = int(parts[1])
        else:
            raise ValueError(f"line {lineno}: unexpected line: {stripped!r}")
    if name is None or prop is None:
        raise ValueError("witness file needs 'witnesses' and 'property' lines")
    pos = parse_frames("\n".join(sections["positive"]))
    neg = parse_frames("\n".join(sections["negative"]))
    if not pos or not neg:
        raise ValueError("witness file needs both positive and negative frames")
    return WitnessSet(
        name=name,
        prop=prop,
        positives=tuple(f for _, f in pos),
        negatives=tuple(f for _, f in neg),
        positive_names=tuple(nm for nm, _ in pos),
        negative_names=tuple(nm for nm, _ in neg),
        recommended_var_bound=var_bound,
    )
