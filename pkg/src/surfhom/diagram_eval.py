"""Evaluation of string diagrams on left-canonical fusion-tree bases.

A basis vector of ``Hom(d, x_1 ⊗ ... ⊗ x_n)`` is a path ``p_0, p_1, ..., p_n``
with ``p_0 = unit``, ``p_n = d`` and ``p_j`` the channel of ``x_1 ⊗ ... ⊗ x_j``
(vertices are isometries). A morphism ``T: X -> Y`` is represented by the
matrices of ``v ↦ T ∘ v`` on ``Hom(d, X) -> Hom(d, Y)``, one for each root ``d``.

Every move is a *local operation*: it replaces ``k ∈ {0, 1, 2}`` adjacent
strands by ``l ∈ {0, 1, 2}`` strands through a kernel acting on the channel
``f`` of the replaced strands. For ``k = 2`` the left-canonical vertex pair is
first converted to ``p_pos ⊗ (x_pos ⊗ x_pos+1)_f`` with an F-move; for
``l = 2`` the result is converted back. Re-association is therefore never a
separate move.

Strands carry an integer *tag* next to their simple label. Plain diagrams use
tag 0; algebra objects use the tag to index a basis of the multiplicity space
of the fiber, which lets one engine evaluate both string diagrams and
algebra-level composites.

Duality: ``R_x: 1 -> x̄ ⊗ x`` is ``sqrt(d_x)`` times the isometric vertex, so
``R_x† R_x = d_x``; ``R̄_x: 1 -> x ⊗ x̄`` is normalized so that both snake
identities hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .fusion_data import FusionData

Item = tuple[int, int]  # (simple label, multiplicity tag)
Key = tuple[tuple[Item, ...], tuple[int, ...]]
State = dict[Key, complex]
Kernel = Callable[[FusionData, tuple[Item, ...], int], Iterable[tuple[tuple[Item, ...], complex]]]


class DiagramError(ValueError):
    pass


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeBasis:
    leaves: tuple[int, ...]
    root: int
    paths: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.paths)

    @property
    def vectors(self) -> tuple[tuple[int, ...], ...]:
        """Internal edge labels ``p_2 .. p_{n-1}`` of every basis path."""
        return tuple(p[2:-1] for p in self.paths)

    def index(self) -> dict[tuple[int, ...], int]:
        return {p: i for i, p in enumerate(self.paths)}


def tree_paths(data: FusionData, leaves: Sequence[int], root: int | None = None) -> list[tuple[int, ...]]:
    partial = [(data.unit,)]
    for x in leaves:
        partial = [p + (c,) for p in partial for c in data.channels(p[-1], x)]
    if root is not None:
        partial = [p for p in partial if p[-1] == root]
    return sorted(partial)


def tree_basis(data: FusionData, leaves: Sequence[int], root: int) -> TreeBasis:
    """All admissible left-canonical paths, in lexicographic order."""
    leaves = tuple(int(x) for x in leaves)
    return TreeBasis(leaves, int(root), tuple(tree_paths(data, leaves, root)))


def roots(data: FusionData, leaves: Sequence[int]) -> list[int]:
    reach = {data.unit}
    for x in leaves:
        reach = {c for p in reach for c in data.channels(p, x)}
    return sorted(reach)


# ---------------------------------------------------------------------------
# F-move helpers
# ---------------------------------------------------------------------------


def to_pair(data: FusionData, E: int, a: int, b: int, G: int, e: int) -> list[tuple[int, complex]]:
    """``|(E a)_e b; G> = Σ_f F[E,a,b,G,e,f] |E (a b)_f; G>`` as ``[(f, coeff)]``."""
    out = []
    for f in data.channels(a, b):
        if data.N(E, f, G):
            c = data.f_symbol(E, a, b, G, e, f)
            if c != 0:
                out.append((f, c))
    return out


def from_pair(data: FusionData, E: int, a: int, b: int, G: int, f: int) -> list[tuple[int, complex]]:
    """``|E (a b)_f; G> = Σ_e conj(F[E,a,b,G,e,f]) |(E a)_e b; G>`` as ``[(e, coeff)]``."""
    out = []
    for e in data.channels(E, a):
        if data.N(e, b, G):
            c = np.conj(data.f_symbol(E, a, b, G, e, f))
            if c != 0:
                out.append((e, c))
    return out


# ---------------------------------------------------------------------------
# local operations
# ---------------------------------------------------------------------------


class Move:
    """Diagram piece replacing ``k`` strands at ``pos``."""

    pos: int
    k: int

    def kernel(self, data: FusionData, items: tuple[Item, ...], f: int) -> Iterable[tuple[tuple[Item, ...], complex]]:
        raise NotImplementedError

    def out_labels(self, data: FusionData, labels: tuple[int, ...]) -> tuple[int, ...]:
        """Output labels for untagged input; raises when the move does not apply."""
        self._check(labels)
        items = tuple((x, 0) for x in labels[self.pos : self.pos + self.k])
        outs = {tuple(x for x, _ in o) for f in _pair_channels(data, items) for o, _ in self.kernel(data, items, f)}
        if len(outs) != 1:
            raise DiagramError(f"{self!r} does not determine a unique output on {labels}")
        return labels[: self.pos] + outs.pop() + labels[self.pos + self.k :]

    def _check(self, labels):
        if self.pos < 0 or self.pos + self.k > len(labels):
            raise DiagramError(f"{self!r} does not fit on {len(labels)} strands")

    def inverse(self) -> Move:
        raise NotImplementedError(f"{type(self).__name__} has no inverse")


def _pair_channels(data: FusionData, items: tuple[Item, ...]) -> list[int]:
    if len(items) == 0:
        return [data.unit]
    if len(items) == 1:
        return [items[0][0]]
    return data.channels(items[0][0], items[1][0])


def apply_local(data: FusionData, move: Move, items: tuple[Item, ...], path: tuple[int, ...]) -> list[tuple[Key, complex]]:
    p, k = move.pos, move.k
    if p < 0 or p + k > len(items):
        raise DiagramError(f"{move!r} does not fit on {len(items)} strands")
    E, G = path[p], path[p + k]
    sub = items[p : p + k]
    if k == 2:
        chans = to_pair(data, E, sub[0][0], sub[1][0], G, path[p + 1])
    elif k == 1:
        chans = [(sub[0][0], 1.0)]
    else:
        chans = [(data.unit, 1.0)]
    out = []
    for f, c1 in chans:
        for new, c2 in move.kernel(data, sub, f):
            c = c1 * c2
            if c == 0:
                continue
            head = items[:p] + tuple(new) + items[p + k :]
            if len(new) == 2:
                for e, c3 in from_pair(data, E, new[0][0], new[1][0], G, f):
                    out.append(((head, path[: p + 1] + (e,) + path[p + k :]), c * c3))
            elif len(new) == 1:
                if new[0][0] != f:
                    raise DiagramError(f"{move!r} changed the channel of a single strand")
                out.append(((head, path[: p + 1] + path[p + k :]), c))
            else:
                if f != data.unit:
                    continue
                if k == 0:
                    out.append(((head, path), c))
                else:
                    out.append(((head, path[: p + 1] + path[p + k + 1 :]), c))
    return out


def apply_moves(data: FusionData, moves: Sequence[Move], state: State) -> State:
    for mv in moves:
        out: State = {}
        for key, c in state.items():
            if isinstance(mv, Branch):
                for seq in mv.fn(data, key[0]):
                    for k2, c2 in apply_moves(data, seq, {key: c}).items():
                        out[k2] = out.get(k2, 0) + c2
                continue
            for k2, c2 in apply_local(data, mv, key[0], key[1]):
                out[k2] = out.get(k2, 0) + c * c2
        state = {key: v for key, v in out.items() if v != 0}
    return state


@dataclass(frozen=True)
class Branch(Move):
    """Sum of move sequences chosen from the current strand labels.

    ``fn(data, items)`` returns the sequences; each is applied to the state and
    the results are added. Used for composites whose output labels vary, such
    as a multiplication summed over all fusion channels.
    """

    fn: Callable[[FusionData, tuple[Item, ...]], list[Sequence[Move]]]
    name: str = "branch"
    pos: int = 0
    k: int = 0

    def out_labels(self, data, labels):
        raise DiagramError("branching moves have no single output; evaluate them on states")


@dataclass(frozen=True)
class Braid(Move):
    """``σ_{a,b}`` on strands ``(a, b)`` at ``pos``; ``sign=-1`` gives ``σ_{b,a}^{-1}``."""

    pos: int
    sign: int = 1
    k = 2

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DiagramError("braid sign must be +1 or -1")

    def kernel(self, data, items, f):
        (a, s), (b, t) = items
        r = data.r_symbol(a, b, f) if self.sign == 1 else np.conj(data.r_symbol(b, a, f))
        return [(((b, t), (a, s)), r)]

    def inverse(self):
        return Braid(self.pos, -self.sign)


@dataclass(frozen=True)
class LeafScale(Move):
    """Multiply by ``fn(data, label)`` of the strand at ``pos``."""

    pos: int
    fn: Callable[[FusionData, int], complex]
    name: str = "scale"
    k = 1

    def kernel(self, data, items, f):
        return [(items, self.fn(data, items[0][0]))]

    def inverse(self):
        fn = self.fn
        return LeafScale(self.pos, lambda data, x: 1 / fn(data, x), f"{self.name}^-1")


def Twist(pos: int, power: int = 1) -> LeafScale:
    return LeafScale(pos, lambda data, x: data.theta(x) ** power, f"twist^{power}")


def DimScale(pos: int, power: float) -> LeafScale:
    return LeafScale(pos, lambda data, x: data.qdim[x] ** power, f"dim^{power}")


@dataclass(frozen=True)
class Scalar(Move):
    value: complex
    pos: int = 0
    k = 0

    def kernel(self, data, items, f):
        return [((), self.value)]

    def out_labels(self, data, labels):
        return labels


def cup_norm(data: FusionData, x: int, bar: bool) -> complex:
    """Scalar in front of the isometric vertex for ``R_x`` (``bar=False``) or ``R̄_x``."""
    d = data.qdim[x]
    if not bar:
        return np.sqrt(d)
    xb = data.dual[x]
    return np.sqrt(d) / (d * data.f_symbol(xb, x, xb, xb, data.unit, data.unit))


@dataclass(frozen=True)
class Cup(Move):
    """Insert ``R_x`` (strands ``x̄, x``) before strand ``pos``; ``R̄_x`` (``x, x̄``) when ``bar``."""

    pos: int
    x: int
    bar: bool = False
    k = 0

    def pair(self, data):
        xb = data.dual[self.x]
        return (self.x, xb) if self.bar else (xb, self.x)

    def kernel(self, data, items, f):
        a, b = self.pair(data)
        return [(((a, 0), (b, 0)), cup_norm(data, self.x, self.bar))]

    def _check(self, labels):
        if not 0 <= self.pos <= len(labels):
            raise DiagramError(f"{self!r} does not fit on {len(labels)} strands")


@dataclass(frozen=True)
class Cap(Move):
    """Adjoint of :class:`Cup`: contract strands ``(x̄, x)``, or ``(x, x̄)`` when ``bar``."""

    pos: int
    x: int
    bar: bool = False
    k = 2

    def kernel(self, data, items, f):
        want = Cup(self.pos, self.x, self.bar).pair(data)
        if (items[0][0], items[1][0]) != want:
            raise DiagramError(
                f"cap at {self.pos} expects {[data.labels[i] for i in want]}, "
                f"found {[data.labels[i] for i, _ in items]}"
            )
        if f != data.unit:
            return []
        return [((), np.conj(cup_norm(data, self.x, self.bar)))]


@dataclass(frozen=True)
class Fuse(Move):
    """Co-isometric vertex: project strands ``(a, b)`` at ``pos`` onto channel ``c``."""

    pos: int
    c: int
    k = 2

    def kernel(self, data, items, f):
        return [(((self.c, 0),), 1.0)] if f == self.c else []


@dataclass(frozen=True)
class Split(Move):
    """Isometric vertex ``c -> a ⊗ b`` on the strand at ``pos``."""

    pos: int
    a: int
    b: int
    k = 1

    def kernel(self, data, items, f):
        if not data.N(self.a, self.b, f):
            raise DiagramError(
                f"split of {data.labels[f]} into {data.labels[self.a]}⊗{data.labels[self.b]} is not admissible"
            )
        return [(((self.a, 0), (self.b, 0)), 1.0)]


@dataclass(frozen=True)
class Local(Move):
    """Generic local operation from an explicit kernel (used by algebra objects)."""

    pos: int
    k: int
    fn: Kernel
    name: str = "local"

    def kernel(self, data, items, f):
        return self.fn(data, items, f)


def expand(pos: int, labels: Sequence[int], path: Sequence[int]) -> list[Move]:
    """Splits that replace the strand at ``pos`` by the tree ``path`` over ``labels``.

    ``path`` is a left-canonical path (unit first) ending at the replaced label.
    """
    n = len(labels)
    if n == 0:
        raise DiagramError("cannot expand into zero strands; use a cap")
    moves: list[Move] = []
    for j in range(n - 1, 0, -1):
        moves.append(Split(pos, path[j], labels[j]))
    return moves


# ---------------------------------------------------------------------------
# diagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Diagram:
    """A sequence of moves applied left to right, starting from ``source`` strands."""

    source: tuple[int, ...]
    moves: tuple[Move, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(int(x) for x in self.source))
        object.__setattr__(self, "moves", tuple(self.moves))

    def stages(self, data: FusionData) -> list[tuple[int, ...]]:
        out = [self.source]
        for mv in self.moves:
            out.append(mv.out_labels(data, out[-1]))
        return out

    def target(self, data: FusionData) -> tuple[int, ...]:
        return self.stages(data)[-1]

    def then(self, other: Diagram | Iterable[Move]) -> Diagram:
        more = other.moves if isinstance(other, Diagram) else tuple(other)
        return Diagram(self.source, self.moves + more)

    def inverse(self, data: FusionData) -> Diagram:
        return Diagram(self.target(data), tuple(m.inverse() for m in reversed(self.moves)))


def _untagged(labels: Sequence[int]) -> tuple[Item, ...]:
    return tuple((int(x), 0) for x in labels)


def evaluate(
    data: FusionData, diagram: Diagram, basis_in: TreeBasis, basis_out: TreeBasis | None = None
) -> np.ndarray:
    """Matrix of the diagram from ``basis_in`` to ``basis_out`` (same root)."""
    if tuple(basis_in.leaves) != diagram.source:
        raise DiagramError("input basis leaves do not match the diagram source")
    target = diagram.target(data)
    if basis_out is None:
        basis_out = tree_basis(data, target, basis_in.root)
    if tuple(basis_out.leaves) != target:
        raise DiagramError("output basis leaves do not match the diagram target")
    if basis_out.root != basis_in.root:
        raise DiagramError("diagrams preserve the root label")
    idx = basis_out.index()
    mat = np.zeros((basis_out.dim, basis_in.dim), dtype=complex)
    src = _untagged(diagram.source)
    for j, path in enumerate(basis_in.paths):
        out = apply_moves(data, diagram.moves, {(src, path): 1.0})
        for (_, p), c in out.items():
            mat[idx[p], j] += c
    return mat


def evaluate_all(data: FusionData, diagram: Diagram) -> dict[int, np.ndarray]:
    """Matrices for every root reachable from the source strands."""
    return {d: evaluate(data, diagram, tree_basis(data, diagram.source, d)) for d in roots(data, diagram.source)}


def closed_evaluation(data: FusionData, diagram: Diagram) -> complex:
    if diagram.source or diagram.target(data):
        raise DiagramError("closed evaluation needs a diagram with empty boundary")
    out = apply_moves(data, diagram.moves, {((), (data.unit,)): 1.0})
    return complex(out.get(((), (data.unit,)), 0.0))


# ---------------------------------------------------------------------------
# common composites
# ---------------------------------------------------------------------------


def unknot(x: int, twist: int = 0) -> Diagram:
    moves: list[Move] = [Cup(0, x)]
    if twist:
        moves.append(Twist(1, twist))
    moves.append(Cap(0, x))
    return Diagram((), moves)


def snake_left(data: FusionData, x: int) -> Diagram:
    """``(R̄_x† ⊗ id_x)(id_x ⊗ R_x)`` on the strand ``x``."""
    return Diagram((x,), [Cup(1, x), Cap(0, x, bar=True)])


def snake_right(data: FusionData, x: int) -> Diagram:
    """``(R_x† ⊗ id_x̄)(id_x̄ ⊗ R̄_x)`` on the strand ``x̄``."""
    return Diagram((data.dual[x],), [Cup(1, x, bar=True), Cap(0, x)])


def vertex_conjugation_phase(data: FusionData, i: int, j: int, k: int) -> complex:
    """Phase ``c`` with ``conj(v^{ij}_k) = c · v^{j̄ ī}_{k̄}`` under the duality.

    Starting from ``k̄``, create ``R_j`` and then ``R_i`` to its left, fuse
    ``i ⊗ j`` into ``k`` and contract ``k ⊗ k̄`` with ``R̄_k†``.
    """
    kb = data.dual[k]
    diag = Diagram((kb,), [Cup(0, j), Cup(1, i), Fuse(2, k), Cap(2, k, bar=True)])
    mat = evaluate(data, diag, tree_basis(data, (kb,), kb))
    return complex(mat[0, 0]) if mat.size else 0.0
