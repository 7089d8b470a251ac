"""Finite Kripke structures: frames, models, pointed models, evaluation,
frame validity, bisimulation, and indexed universes of pointed models.

States are dense integer ranges; successor sets and valuation sets are kept
as bit masks so that evaluation and validity checking reduce to bitwise
arithmetic over machine integers.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from . import formula as fm
from .formula import (
    BASIC,
    GLOBAL,
    And,
    Box,
    Dia,
    ExistsMod,
    FalseConst,
    ForallMod,
    Formula,
    NegLit,
    Or,
    PosLit,
    TrueConst,
    check_language,
    vars_of,
)

VALIDITY_CAP_BITS = 24
UNIVERSE_CAP = 600_000


class ResourceCapError(RuntimeError):
    """A requested computation exceeds the configured resource cap."""


def _mask_to_states(mask: int) -> tuple[int, ...]:
    out = []
    s = 0
    while mask:
        if mask & 1:
            out.append(s)
        mask >>= 1
        s += 1
    return tuple(out)


class Frame:
    """A finite directed graph: state_count states, successor bit masks."""

    __slots__ = ("state_count", "succ_masks", "_hash")

    def __init__(self, state_count: int, edges: Iterable[tuple[int, int]] = ()):
        if state_count < 1:
            raise ValueError("a frame needs at least one state")
        masks = [0] * state_count
        for u, v in edges:
            if not (0 <= u < state_count and 0 <= v < state_count):
                raise ValueError(f"edge ({u},{v}) out of range for {state_count} states")
            masks[u] |= 1 << v
        self.state_count = state_count
        self.succ_masks = tuple(masks)
        self._hash = hash((state_count, self.succ_masks))

    def successors_of(self, s: int) -> tuple[int, ...]:
        return _mask_to_states(self.succ_masks[s])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.succ_masks[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.state_count):
            for v in self.successors_of(u):
                yield (u, v)

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.succ_masks)

    def reflexive_mask(self) -> int:
        out = 0
        for s, m in enumerate(self.succ_masks):
            if m >> s & 1:
                out |= 1 << s
        return out

    def transitive_closure(self) -> "Frame":
        masks = list(self.succ_masks)
        for k in range(self.state_count):
            kmask = masks[k]
            for u in range(self.state_count):
                if masks[u] >> k & 1:
                    masks[u] |= kmask
        closed = Frame.__new__(Frame)
        closed.state_count = self.state_count
        closed.succ_masks = tuple(masks)
        closed._hash = hash((self.state_count, closed.succ_masks))
        return closed

    def __eq__(self, other):
        return (
            isinstance(other, Frame)
            and other.state_count == self.state_count
            and other.succ_masks == self.succ_masks
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Frame({self.state_count}, edges={list(self.edges())})"


class Model:
    """A frame with a valuation; valuation sets are state bit masks.

    Variables absent from the valuation are read as the empty set.
    """

    __slots__ = ("frame", "valuation", "_hash")

    def __init__(self, frame: Frame, valuation: dict[int, int] | None = None):
        self.frame = frame
        clean = {}
        limit = (1 << frame.state_count) - 1
        for var, mask in sorted((valuation or {}).items()):
            if var < 1:
                raise ValueError("variable indices start at 1")
            if mask & ~limit:
                raise ValueError(f"valuation of p{var} mentions states out of range")
            if mask:
                clean[var] = mask
        self.valuation = clean
        self._hash = hash((frame, tuple(clean.items())))

    @classmethod
    def from_sets(cls, frame: Frame, sets: dict[int, Iterable[int]]) -> "Model":
        masks = {var: sum(1 << s for s in set(states)) for var, states in sets.items()}
        return cls(frame, masks)

    def val_mask(self, var: int) -> int:
        return self.valuation.get(var, 0)

    def holds(self, var: int, state: int) -> bool:
        return bool(self.val_mask(var) >> state & 1)

    def atom_code(self, state: int, var_order: Sequence[int]) -> int:
        code = 0
        for k, var in enumerate(var_order):
            if self.holds(var, state):
                code |= 1 << k
        return code

    def __eq__(self, other):
        return (
            isinstance(other, Model)
            and other.frame == self.frame
            and other.valuation == self.valuation
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        sets = {f"p{v}": _mask_to_states(m) for v, m in self.valuation.items()}
        return f"Model({self.frame!r}, {sets})"


class PointedModel:
    __slots__ = ("model", "point", "_hash")

    def __init__(self, model: Model, point: int):
        if not (0 <= point < model.frame.state_count):
            raise ValueError(f"point {point} out of range")
        self.model = model
        self.point = point
        self._hash = hash((model, point))

    def __eq__(self, other):
        return (
            isinstance(other, PointedModel)
            and other.point == self.point
            and other.model == self.model
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PointedModel({self.model!r}, point={self.point})"


# --- evaluation -------------------------------------------------------------


def den_states(m: Model, phi: Formula) -> int:
    """Bit mask of the model states where phi holds."""
    frame = m.frame
    w = frame.state_count
    full = (1 << w) - 1
    if isinstance(phi, TrueConst):
        return full
    if isinstance(phi, FalseConst):
        return 0
    if isinstance(phi, PosLit):
        return m.val_mask(phi.var)
    if isinstance(phi, NegLit):
        return m.val_mask(phi.var) ^ full
    if isinstance(phi, Or):
        return den_states(m, phi.left) | den_states(m, phi.right)
    if isinstance(phi, And):
        return den_states(m, phi.left) & den_states(m, phi.right)
    if isinstance(phi, Dia):
        child = den_states(m, phi.child)
        return sum(1 << s for s in range(w) if frame.succ_masks[s] & child)
    if isinstance(phi, Box):
        child = den_states(m, phi.child)
        return sum(1 << s for s in range(w) if not (frame.succ_masks[s] & ~child))
    if isinstance(phi, ExistsMod):
        return full if den_states(m, phi.child) else 0
    if isinstance(phi, ForallMod):
        return full if den_states(m, phi.child) == full else 0
    raise TypeError(f"not a formula: {phi!r}")


def eval_formula(m: Model, w: int, phi: Formula) -> bool:
    if not (0 <= w < m.frame.state_count):
        raise ValueError(f"state {w} out of range")
    return bool(den_states(m, phi) >> w & 1)


# --- frame validity ---------------------------------------------------------
#
# Validity quantifies over every valuation of the occurring variables.  All
# 2^(W*v) valuations are packed into one bit string: position c*W + s stands
# for "state s under valuation code c", where bit k*W + s of the code c says
# that variable slot k holds at state s.  One compositional pass per chunk of
# codes then checks all valuations at once.

_CHUNK_CODE_BITS = 14

_geom_cache: dict[tuple[int, int], int] = {}
_atom_cache: dict[tuple[int, int, int], int] = {}


def _geometric(step: int, count: int) -> int:
    """Sum of 2**(t*step) for t < count; count must be a power of two or small."""
    key = (step, count)
    got = _geom_cache.get(key)
    if got is not None:
        return got
    out, span = 1, 1
    while span * 2 <= count:
        out |= out << (span * step)
        span *= 2
    while span < count:
        out |= 1 << (span * step)
        span += 1
    _geom_cache[key] = out
    return out


def _atom_pattern(w: int, chunk_codes: int, j: int) -> int:
    """Bits c*W+s with bit j of c set, for the code-local part (2^(j+1) <= chunk)."""
    key = (w, chunk_codes, j)
    got = _atom_cache.get(key)
    if got is not None:
        return got
    period = 1 << (j + 1)
    half = 1 << j
    unit = _geometric(w, half) << (half * w)
    span = period
    while span < chunk_codes:
        unit |= unit << (span * w)
        span *= 2
    _atom_cache[key] = unit
    return unit


def frame_valid(frame: Frame, phi: Formula, cap_bits: int = VALIDITY_CAP_BITS) -> bool:
    """True iff phi holds at every state under every valuation of vars(phi)."""
    w = frame.state_count
    var_order = sorted(vars_of(phi))
    v = len(var_order)
    if w * v > cap_bits:
        raise ResourceCapError(
            f"validity space needs {w * v} bits, cap is {cap_bits}"
        )
    total_codes = 1 << (w * v)
    chunk_codes = min(total_codes, 1 << _CHUNK_CODE_BITS)
    full = (1 << (chunk_codes * w)) - 1
    state0 = _geometric(w, chunk_codes)
    chunk_bit = chunk_codes.bit_length() - 1

    succ_sets = [frame.successors_of(s) for s in range(w)]

    def atom_mask(slot: int, c0: int) -> int:
        out = 0
        for s in range(w):
            j = slot * w + s
            if (1 << (j + 1)) <= chunk_codes:
                out |= _atom_pattern(w, chunk_codes, j) << s
            elif c0 >> (j - chunk_bit) & 1:
                # bit j of the code is constant across an aligned chunk
                out |= state0 << s
        return out

    def walk(node: Formula, c0: int) -> int:
        if isinstance(node, TrueConst):
            return full
        if isinstance(node, FalseConst):
            return 0
        if isinstance(node, PosLit):
            return atom_mask(var_order.index(node.var), c0)
        if isinstance(node, NegLit):
            return atom_mask(var_order.index(node.var), c0) ^ full
        if isinstance(node, Or):
            return walk(node.left, c0) | walk(node.right, c0)
        if isinstance(node, And):
            return walk(node.left, c0) & walk(node.right, c0)
        child = walk(node.child, c0)
        per_state = [child >> t & state0 for t in range(w)]
        if isinstance(node, Dia):
            out = 0
            for s in range(w):
                acc = 0
                for t in succ_sets[s]:
                    acc |= per_state[t]
                out |= acc << s
            return out
        if isinstance(node, Box):
            out = 0
            for s in range(w):
                acc = state0
                for t in succ_sets[s]:
                    acc &= per_state[t]
                out |= acc << s
            return out
        if isinstance(node, ExistsMod):
            acc = 0
            for t in range(w):
                acc |= per_state[t]
            return acc * ((1 << w) - 1)
        if isinstance(node, ForallMod):
            acc = state0
            for t in range(w):
                acc &= per_state[t]
            return acc * ((1 << w) - 1)
        raise TypeError(f"not a formula: {node!r}")

    for c0 in range(0, total_codes, chunk_codes):
        if walk(phi, c0) != full:
            return False
    return True


# --- bisimulation -----------------------------------------------------------


def _refine(models: Sequence[Model], var_order: Sequence[int]) -> list[list[int]]:
    """Coarsest atom-respecting bisimulation classes across the given models.

    Returns one class-id list per model (ids shared across models).
    """
    colours = [
        [m.atom_code(s, var_order) for s in range(m.frame.state_count)]
        for m in models
    ]
    while True:
        # splitting is monotone, so an unchanged class count means stability
        intern: dict[tuple, int] = {}
        fresh = []
        for mi, m in enumerate(models):
            row = []
            for s in range(m.frame.state_count):
                sig = (
                    colours[mi][s],
                    frozenset(colours[mi][t] for t in m.frame.successors_of(s)),
                )
                row.append(intern.setdefault(sig, len(intern)))
            fresh.append(row)
        old_count = len({c for row in colours for c in row})
        if len(intern) == old_count:
            return fresh
        colours = fresh


def bisimilar(a: PointedModel, b: PointedModel, language: str = BASIC) -> bool:
    """Bisimilarity of two pointed models.

    For the global language the coarsest bisimulation must additionally be
    mutually total: every class holding a state of one model also holds a
    state of the other, so the E/A modalities are preserved.
    """
    check_language(language)
    var_order = sorted(
        set(a.model.valuation) | set(b.model.valuation)
    )
    classes = _refine([a.model, b.model], var_order)
    if classes[0][a.point] != classes[1][b.point]:
        return False
    if language == GLOBAL:
        return set(classes[0]) == set(classes[1])
    return True


# --- universes --------------------------------------------------------------


class Universe:
    """An indexed list of pointed models with precomputed move structure.

    succ(i) lists the indices whose pointed model shares i's model and whose
    point is an R-successor of i's point; same_model(i) lists every index
    over i's model.  The universe is point-closed when every state of every
    member model appears as an index; game search requires closure.
    """

    __slots__ = ("models", "succ", "same_model", "succ_masks", "same_masks", "point_closed")

    def __init__(self, models: Sequence[PointedModel]):
        self.models = tuple(models)
        by_model: dict[Model, list[int]] = {}
        for i, pm in enumerate(self.models):
            by_model.setdefault(pm.model, []).append(i)
        succ: list[tuple[int, ...]] = []
        same: list[tuple[int, ...]] = []
        for pm in self.models:
            group = by_model[pm.model]
            smask = pm.model.frame.succ_masks[pm.point]
            succ.append(tuple(j for j in group if smask >> self.models[j].point & 1))
            same.append(tuple(group))
        self.succ = tuple(succ)
        self.same_model = tuple(same)
        self.succ_masks = tuple(sum(1 << j for j in js) for js in self.succ)
        self.same_masks = tuple(sum(1 << j for j in js) for js in self.same_model)
        self.point_closed = all(
            {self.models[j].point for j in group} == set(range(m.frame.state_count))
            for m, group in by_model.items()
        )

    def __len__(self):
        return len(self.models)

    def index_of(self, pm: PointedModel) -> int:
        return self.models.index(pm)

    def den(self, phi: Formula) -> int:
        """Denotation bit mask: bit i set iff phi holds at pointed model i."""
        cache: dict[Model, int] = {}
        out = 0
        for i, pm in enumerate(self.models):
            mask = cache.get(pm.model)
            if mask is None:
                mask = den_states(pm.model, phi)
                cache[pm.model] = mask
            if mask >> pm.point & 1:
                out |= 1 << i
        return out


def expand_frame(frame: Frame, var_bound: int) -> Iterator[PointedModel]:
    """All pointed models over the frame with valuations of p1..p{var_bound}.

    Valuation codes ascend; bit k*W+s of the code puts state s into p(k+1).
    """
    w = frame.state_count
    for code in range(1 << (w * var_bound)):
        valuation = {}
        for k in range(var_bound):
            mask = code >> (k * w) & ((1 << w) - 1)
            if mask:
                valuation[k + 1] = mask
        model = Model(frame, valuation)
        for point in range(w):
            yield PointedModel(model, point)


def build_universe(
    seeds: Iterable[PointedModel | tuple[Frame, int]],
    cap: int = UNIVERSE_CAP,
) -> Universe:
    """Builds a Universe from pointed models and/or (frame, var_bound) pairs.

    A (frame, v) seed expands to all valuations of p1..pv times all points.
    """
    out: list[PointedModel] = []
    for seed in seeds:
        if isinstance(seed, PointedModel):
            out.append(seed)
        else:
            frame, var_bound = seed
            if var_bound < 0:
                raise ValueError("var bound must be >= 0")
            size = (1 << (frame.state_count * var_bound)) * frame.state_count
            if len(out) + size > cap:
                raise ResourceCapError(
                    f"universe would exceed {cap} pointed models"
                )
            out.extend(expand_frame(frame, var_bound))
        if len(out) > cap:
            raise ResourceCapError(f"universe would exceed {cap} pointed models")
    return Universe(out)


# --- reduced expansions -----------------------------------------------------
#
# Validity over a frame quantifies over all valuations and points, but
# bisimilar pointed models agree on every formula of the matching language.
# A reduced expansion therefore keeps only enough models to represent every
# bisimulation class of every frame's full expansion, and remembers which
# universe indices stand for each frame's classes.  Read-offs over the
# representatives coincide with read-offs over the full expansion.


class ReducedExpansion:
    __slots__ = ("universe", "class_reps", "class_counts")

    def __init__(self, universe: Universe, class_reps: dict[str, tuple[int, ...]],
                 class_counts: dict[str, int]):
        self.universe = universe
        self.class_reps = class_reps
        self.class_counts = class_counts


def expand_reduced(
    named_frames: Sequence[tuple[str, Frame]],
    var_bound: int,
    language: str = BASIC,
    cap: int = UNIVERSE_CAP,
) -> ReducedExpansion:
    """Expands every frame over var_bound variables and quotients by bisimilarity.

    Returns a point-closed universe of representative models plus, per frame
    name, the universe indices representing that frame's pointed-model classes.
    The quotient matches the language: basic classes for the basic language,
    and for the global one points are additionally split by their model's set
    of classes, since E/A read whole models.  Read-offs of formulas of the
    chosen language over the representatives coincide with read-offs over the
    full expansion.
    """
    check_language(language)
    names = [name for name, _ in named_frames]
    if len(set(names)) != len(names):
        raise ValueError("frame names must be unique")

    # flat tables over (frame instance, valuation code, state)
    specs = []  # (name, frame, code, base index into flat colour table)
    base = 0
    for name, frame in named_frames:
        w = frame.state_count
        count = 1 << (w * var_bound)
        if base + count * w > cap:
            raise ResourceCapError(f"expansion would exceed {cap} states")
        for code in range(count):
            specs.append((name, frame, code, base))
            base += w
    total = base

    colours = [0] * total
    for name, frame, code, off in specs:
        w = frame.state_count
        for s in range(w):
            atom = 0
            for k in range(var_bound):
                if code >> (k * w + s) & 1:
                    atom |= 1 << k
            colours[off + s] = atom

    succ_lists: dict[Frame, list[tuple[int, ...]]] = {}
    for _, frame, _, _ in specs:
        if frame not in succ_lists:
            succ_lists[frame] = [frame.successors_of(s) for s in range(frame.state_count)]

    while True:
        while True:
            intern: dict[tuple[int, frozenset[int]], int] = {}
            fresh = [0] * total
            for _, frame, _, off in specs:
                succs = succ_lists[frame]
                for s in range(frame.state_count):
                    sig = (colours[off + s], frozenset(colours[off + t] for t in succs[s]))
                    fresh[off + s] = intern.setdefault(sig, len(intern))
            if len(intern) == len(set(colours)):
                break
            colours = fresh
        if language == BASIC:
            break
        # E/A read whole models: split same-coloured points whose models
        # realize different colour sets, then restabilize.
        intern2: dict[tuple[int, frozenset[int]], int] = {}
        fresh = [0] * total
        for _, frame, _, off in specs:
            profile = frozenset(colours[off + s] for s in range(frame.state_count))
            for s in range(frame.state_count):
                fresh[off + s] = intern2.setdefault((colours[off + s], profile), len(intern2))
        if len(intern2) == len(set(colours)):
            break
        colours = fresh

    # classes needed per frame name: classes of every expanded point
    needed: dict[str, set[int]] = {name: set() for name in names}
    counts: dict[str, int] = {}
    for name, frame, code, off in specs:
        for s in range(frame.state_count):
            needed[name].add(colours[off + s])
    for name in names:
        counts[name] = len(needed[name])

    all_needed = set().union(*needed.values()) if needed else set()

    # greedy cover: keep few models while representing every needed class
    spec_cover = []
    for idx, (name, frame, code, off) in enumerate(specs):
        spec_cover.append(frozenset(colours[off + s] for s in range(frame.state_count)))
    kept: list[int] = []
    covered: set[int] = set()
    while covered != all_needed:
        best, best_gain = None, -1
        for idx, cover in enumerate(spec_cover):
            gain = len((cover & all_needed) - covered)
            if gain > best_gain:
                best, best_gain = idx, gain
        kept.append(best)
        covered |= spec_cover[best] & all_needed
    kept.sort()

    # materialize kept models and the class -> universe index map
    pointed: list[PointedModel] = []
    class_index: dict[int, int] = {}
    for idx in kept:
        name, frame, code, off = specs[idx]
        w = frame.state_count
        valuation = {}
        for k in range(var_bound):
            mask = code >> (k * w) & ((1 << w) - 1)
            if mask:
                valuation[k + 1] = mask
        model = Model(frame, valuation)
        for s in range(w):
            cls = colours[off + s]
            if cls not in class_index:
                class_index[cls] = len(pointed)
            pointed.append(PointedModel(model, s))

    universe = Universe(pointed)
    class_reps = {
        name: tuple(sorted(class_index[c] for c in needed[name])) for name in names
    }
    return ReducedExpansion(universe, class_reps, counts)


# --- file formats -----------------------------------------------------------


def format_frame(name: str, frame: Frame) -> str:
    lines = [f"frame {name}", f"states {frame.state_count}"]
    lines.extend(f"edge {u} {v}" for u, v in frame.edges())
    return "\n".join(lines) + "\n"


def parse_frames(text: str) -> list[tuple[str, Frame]]:
    """Parses one or more frame blocks: `frame <name>` / `states <N>` / `edge <u> <v>`.

    Blank lines and `#` comments are skipped; duplicate edges are ignored.
    """
    out: list[tuple[str, Frame]] = []
    name: str | None = None
    count: int | None = None
    edges: list[tuple[int, int]] = []

    def flush(lineno: int):
        nonlocal name, count, edges
        if name is None:
            return
        if count is None:
            raise ValueError(f"line {lineno}: frame {name!r} has no states line")
        out.append((name, Frame(count, edges)))
        name, count, edges = None, None, []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "frame":
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'frame <name>'")
            flush(lineno)
            name = parts[1]
        elif parts[0] == "states":
            if name is None:
                raise ValueError(f"line {lineno}: 'states' before any 'frame'")
            if count is not None:
                raise ValueError(f"line {lineno}: duplicate 'states' line")
            count = int(parts[1])
        elif parts[0] == "edge":
            if count is None:
                raise ValueError(f"line {lineno}: 'edge' before 'states'")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'edge <u> <v>'")
            u, v = int(parts[1]), int(parts[2])
            if not (0 <= u < count and 0 <= v < count):
                raise ValueError(f"line {lineno}: edge ({u},{v}) out of range")
            if (u, v) not in edges:
                edges.append((u, v))
        else:
            raise ValueError(f"line {lineno}: unknown directive {parts[0]!r}")
    flush(len(text.splitlines()) + 1)
    if not out:
        raise ValueError("no frames found")
    return out


def format_model(name: str, model: Model, point: int | None = None) -> str:
    lines = [format_frame(name, model.frame).rstrip("\n")]
    for var in sorted(model.valuation):
        states = " ".join(str(s) for s in _mask_to_states(model.valuation[var]))
        lines.append(f"val p{var} {states}")
    if point is not None:
        lines.append(f"point {point}")
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> tuple[str, Model, int | None]:
    """Parses a single model file: a frame block plus `val pK <states...>` and
    an optional `point <w>` line."""
    frame_lines = []
    val_lines = []
    point: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "val":
            if len(parts) < 2 or not parts[1].startswith("p"):
                raise ValueError(f"line {lineno}: expected 'val pK <states...>'")
            var = int(parts[1][1:])
            states = [int(x) for x in parts[2:]]
            val_lines.append((lineno, var, states))
        elif parts[0] == "point":
            if point is not None:
                raise ValueError(f"line {lineno}: duplicate 'point' line")
            point = int(parts[1])
        else:
            frame_lines.append(raw)
    frames = parse_frames("\n".join(frame_lines))
    if len(frames) != 1:
        raise ValueError("model files contain exactly one frame")
    name, frame = frames[0]
    sets: dict[int, list[int]] = {}
    for lineno, var, states in val_lines:
        for s in states:
            if not (0 <= s < frame.state_count):
                raise ValueError(f"line {lineno}: state {s} out of range")
        sets.setdefault(var, []).extend(states)
    model = Model.from_sets(frame, sets)
    if point is not None and not (0 <= point < frame.state_count):
        raise ValueError(f"point {point} out of range")
    return name, model, point
