"""Algebra and module objects in Vect(C), stored fiberwise over the simples.

An algebra object ``A = ⊕_i V_i ⊗ i`` is given by

* ``dims[i] = dim V_i``;
* ``mult[(i, j, k)]``: array of shape ``(dims[k], dims[i], dims[j])``, the
  component ``V_i ⊗ V_j -> V_k`` paired with the co-isometric vertex
  ``i ⊗ j -> k``;
* ``unit``: vector in ``V_unit``;
* ``star[i]``: matrix ``S_i`` of shape ``(dims[dual i], dims[i])``; the
  antilinear map is ``v ↦ S_i conj(v)``.

All checks run through :mod:`diagram_eval` on strands tagged by fiber basis
indices, so F-moves between bracketings are handled by one engine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from . import category_core as cc
from . import diagram_eval as de
from .fusion_data import FusionData
from .reports import ValidationReport

TOL = 1e-8


class AlgebraError(ValueError):
    pass


# ---------------------------------------------------------------------------
# fiber bases of tensor products of fibered objects
# ---------------------------------------------------------------------------


def product_keys(data: FusionData, factors: Sequence[Sequence[int]], root: int) -> list[de.Key]:
    """Basis of ``(A_1 ⊗ ... ⊗ A_n)(root)`` for fiber-dimension vectors ``factors``.

    A key is ``(items, path)`` with one tagged strand per factor and a
    left-canonical path of the strand labels ending at ``root``.
    """
    choices = [[(i, t) for i in range(len(dims)) for t in range(dims[i])] for dims in factors]
    keys = []
    for items in itertools.product(*choices):
        for path in de.tree_paths(data, [i for i, _ in items], root):
            keys.append((tuple(items), path))
    keys.sort()
    return keys


def state_to_vector(state: de.State, index: Mapping[de.Key, int], dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    for key, c in state.items():
        try:
            v[index[key]] += c
        except KeyError:
            raise AlgebraError(f"state component {key} lies outside the target basis") from None
    return v


# ---------------------------------------------------------------------------
# half-braidings
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class HalfBraiding:
    """Components ``σ_U: A ⊗ U -> U ⊗ A`` per simple ``U`` and root ``k``.

    ``comps[(U, k)]`` is a matrix from the basis ``cols[(U, k)]`` of items
    ``(i, a)`` with ``N[i][U][k] = 1`` to the basis ``rows[(U, k)]`` of items
    ``(i', a')`` with ``N[U][i'][k] = 1``.
    """

    comps: dict[tuple[int, int], np.ndarray]
    rows: dict[tuple[int, int], list[de.Item]]
    cols: dict[tuple[int, int], list[de.Item]]

    @cached_property
    def _col_index(self):
        return {key: {it: n for n, it in enumerate(v)} for key, v in self.cols.items()}

    def move(self, pos: int, U: int | None = None) -> de.Local:
        """Local move applying ``σ`` to strands ``(A-strand, U-strand)`` at ``pos``."""
        comps, rows, cidx = self.comps, self.rows, self._col_index

        def kernel(data, items, f):
            (i, a), (u, t) = items
            if (u, f) not in comps:
                raise AlgebraError(f"half-braiding has no component for ({data.labels[u]}, {data.labels[f]})")
            col = cidx[(u, f)][(i, a)]
            mat = comps[(u, f)]
            return [(((u, t), rows[(u, f)][r]), mat[r, col]) for r in np.nonzero(mat[:, col])[0]]

        return de.Local(pos, 2, kernel, "half-braiding")

    @classmethod
    def from_kernel(cls, data: FusionData, dims: Sequence[int], fn: Callable) -> HalfBraiding:
        """Build components from ``fn(U, k, (i, a)) -> state over ((U,0),(i',a'))`` keys."""
        comps, rows, cols = {}, {}, {}
        for U in data.simples:
            for k in data.simples:
                c = [(i, a) for i in data.simples for a in range(dims[i]) if data.N(i, U, k)]
                r = [(i, a) for i in data.simples for a in range(dims[i]) if data.N(U, i, k)]
                if not c and not r:
                    continue
                ridx = {it: n for n, it in enumerate(r)}
                mat = np.zeros((len(r), len(c)), dtype=complex)
                for n, it in enumerate(c):
                    for (items, path), coeff in fn(U, k, it).items():
                        mat[ridx[items[1]], n] += coeff
                comps[(U, k)], rows[(U, k)], cols[(U, k)] = mat, r, c
        return cls(comps, rows, cols)

    @classmethod
    def trivial_braiding(cls, data: FusionData, dims: Sequence[int]) -> HalfBraiding:
        """``σ_U = c_{A,U}`` built from the category braiding on each fiber."""

        def fn(U, k, it):
            key = ((it, (U, 0)), (data.unit, it[0], k))
            return de.apply_moves(data, [de.Braid(0, 1)], {key: 1.0})

        return cls.from_kernel(data, dims, fn)

    @classmethod
    def identity_maps(cls, data: FusionData, dims: Sequence[int]) -> HalfBraiding:
        """Swap the strands with coefficient 1 and no braiding phase."""

        def fn(U, k, it):
            return {(((U, 0), it), (data.unit, U, k)): 1.0}

        return cls.from_kernel(data, dims, fn)


# ---------------------------------------------------------------------------
# algebra objects
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class AlgebraObject:
    data: FusionData
    dims: tuple[int, ...]
    mult: dict[tuple[int, int, int], np.ndarray]
    unit: np.ndarray
    star: dict[int, np.ndarray] | None = None
    half_braiding: HalfBraiding | None = None
    name: str = ""
    basis: dict[int, list] | None = None

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        d = self.data
        if len(self.dims) != d.rank:
            raise AlgebraError("fiber dimension vector has the wrong length")
        for (i, j, k), m in self.mult.items():
            if not d.N(i, j, k):
                raise AlgebraError(f"structure constants on inadmissible channel {(i, j, k)}")
            if m.shape != (self.dims[k], self.dims[i], self.dims[j]):
                raise AlgebraError(f"structure tensor {(i, j, k)} has shape {m.shape}")
        self.unit = np.asarray(self.unit, dtype=complex).reshape(self.dims[d.unit])

    @property
    def obj(self) -> cc.Obj:
        return cc.Obj.from_mult(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def M(self, i: int, j: int, k: int) -> np.ndarray:
        m = self.mult.get((i, j, k))
        if m is None:
            return np.zeros((self.dims[k], self.dims[i], self.dims[j]), dtype=complex)
        return m

    def mult_move(self, pos: int) -> de.Local:
        """Multiply the tagged strands at ``pos, pos+1``."""
        mult = self.mult

        def kernel(data, items, f):
            (i, a), (j, b) = items
            m = mult.get((i, j, f))
            if m is None:
                return []
            col = m[:, a, b]
            return [(((f, int(c)),), col[c]) for c in np.nonzero(col)[0]]

        return de.Local(pos, 2, kernel, "mult")

    def unit_move(self, pos: int) -> de.Local:
        u = self.unit
        unit = self.data.unit

        def kernel(data, items, f):
            return [(((unit, int(s)),), u[s]) for s in np.nonzero(u)[0]]

        return de.Local(pos, 0, kernel, "unit")

    def keys(self, root: int) -> list[de.Key]:
        return product_keys(self.data, [self.dims], root)

    def apply_star(self, i: int, v: np.ndarray) -> np.ndarray:
        if self.star is None:
            raise AlgebraError("algebra has no star structure")
        return self.star[i] @ np.conj(v)

    def product(self, i: int, a: np.ndarray, j: int, b: np.ndarray, k: int) -> np.ndarray:
        return np.einsum("zab,a,b->z", self.M(i, j, k), a, b)

    def left_regular(self, x: np.ndarray) -> np.ndarray:
        """Left multiplication by ``x ∈ V_unit`` on ``V_unit``."""
        u = self.data.unit
        return np.einsum("zab,a->zb", self.M(u, u, u), x)


def unit_algebra(data: FusionData) -> AlgebraObject:
    dims = [0] * data.rank
    dims[data.unit] = 1
    u = data.unit
    return AlgebraObject(
        data,
        tuple(dims),
        {(u, u, u): np.ones((1, 1, 1), dtype=complex)},
        np.ones(1),
        {u: np.ones((1, 1), dtype=complex)},
        HalfBraiding.trivial_braiding(data, dims),
        name="unit",
    )


def matrix_algebra(data: FusionData, n: int) -> AlgebraObject:
    """``M_n(ℂ) ⊗ 1``: the full matrix algebra concentrated in the unit fiber."""
    u = data.unit
    dims = [0] * data.rank
    dims[u] = n * n
    m = np.zeros((n * n, n * n, n * n), dtype=complex)
    for a, b, c in itertools.product(range(n), repeat=3):
        m[a * n + c, a * n + b, b * n + c] = 1.0
    star = np.zeros((n * n, n * n), dtype=complex)
    for a, b in itertools.product(range(n), repeat=2):
        star[b * n + a, a * n + b] = 1.0
    return AlgebraObject(data, tuple(dims), {(u, u, u): m}, np.eye(n).reshape(-1), {u: star}, name=f"M{n}")


def group_algebra(data: FusionData) -> AlgebraObject:
    """``⊕_g g`` over a pointed category with trivial associator; every product is ``1``."""
    if not data.is_pointed:
        raise AlgebraError("the group algebra object needs a pointed category")
    dims = [1] * data.rank
    mult = {}
    for g in data.simples:
        for h in data.simples:
            mult[(g, h, data.channels(g, h)[0])] = np.ones((1, 1, 1), dtype=complex)
    star = {g: np.ones((1, 1), dtype=complex) for g in data.simples}
    return AlgebraObject(data, tuple(dims), mult, np.ones(1), star, name="group")


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def _diff(s1: de.State, s2: de.State) -> float:
    keys = set(s1) | set(s2)
    return max((abs(s1.get(k, 0) - s2.get(k, 0)) for k in keys), default=0.0)


def associativity_residual(A: AlgebraObject) -> float:
    d = A.data
    lhs_moves = [A.mult_move(0), A.mult_move(0)]
    rhs_moves = [A.mult_move(1), A.mult_move(0)]
    worst = 0.0
    support = [i for i in d.simples if A.dims[i]]
    for i, j, l in itertools.product(support, repeat=3):
        for path in de.tree_paths(d, [i, j, l]):
            for a, b, c in itertools.product(range(A.dims[i]), range(A.dims[j]), range(A.dims[l])):
                key = (((i, a), (j, b), (l, c)), path)
                s1 = de.apply_moves(d, lhs_moves, {key: 1.0})
                s2 = de.apply_moves(d, rhs_moves, {key: 1.0})
                worst = max(worst, _diff(s1, s2))
    return worst


def unit_residual(A: AlgebraObject) -> float:
    d = A.data
    worst = 0.0
    for i in d.simples:
        for a in range(A.dims[i]):
            key = (((i, a),), (d.unit, i))
            left = de.apply_moves(d, [A.unit_move(0), A.mult_move(0)], {key: 1.0})
            right = de.apply_moves(d, [A.unit_move(1), A.mult_move(0)], {key: 1.0})
            worst = max(worst, _diff(left, {key: 1.0}), _diff(right, {key: 1.0}))
    return worst


def star_residuals(A: AlgebraObject) -> dict[str, float]:
    """Involutivity and anti-multiplicativity of the fiberwise star.

    ``J_k(M^k_{ij}(a, b)) = c_{ijk} M^{k̄}_{j̄ī}(J_j b, J_i a)`` with ``c_{ijk}``
    the vertex conjugation phase of :func:`diagram_eval.vertex_conjugation_phase`.
    """
    d = A.data
    S = A.star
    inv = 0.0
    for i in d.simples:
        if A.dims[i]:
            ib = d.dual[i]
            inv = max(inv, float(np.max(np.abs(S[ib] @ np.conj(S[i]) - np.eye(A.dims[i])))))
    anti = 0.0
    for (i, j, k), m in A.mult.items():
        ib, jb, kb = d.dual[i], d.dual[j], d.dual[k]
        c = de.vertex_conjugation_phase(d, i, j, k)
        lhs = np.einsum("yz,zab->yab", S[k], np.conj(m))
        rhs = c * np.einsum("ypq,pb,qa->yab", A.M(jb, ib, kb), S[j], S[i])
        anti = max(anti, float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0)
    u = d.unit
    unit_fix = float(np.max(np.abs(S[u] @ np.conj(A.unit) - A.unit))) if A.dims[u] else 0.0
    return {"star_involutive": inv, "star_antimultiplicative": anti, "star_unit": unit_fix}


def positivity_residual(A: AlgebraObject, samples: int = 8, seed: int = 0) -> float:
    """Largest negative part of the spectrum of ``<a, a> = √d_X μ(J a ⊗ a) ∘ R_X``.

    The element lives in ``V_unit`` and must be positive in the ground algebra.
    Basis vectors and random combinations of every fiber are sampled.
    """
    d = A.data
    rng = np.random.default_rng(seed)
    u = d.unit
    worst = 0.0
    for X in d.simples:
        n = A.dims[X]
        if not n:
            continue
        vecs = list(np.eye(n, dtype=complex)) + [rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(samples)]
        Xb = d.dual[X]
        for v in vecs:
            p = np.sqrt(d.qdim[X]) * A.product(Xb, A.apply_star(X, v), X, v, u)
            L = A.left_regular(p)
            scale = max(1.0, float(np.linalg.norm(L, 2)))
            ev = np.linalg.eigvals(L)
            neg = max(0.0, -float(np.min(ev.real))) / scale
            imag = float(np.max(np.abs(ev.imag))) / scale
            herm = float(np.max(np.abs(A.apply_star(u, p) - p))) / scale
            worst = max(worst, neg, imag, herm)
    return worst


def check_cstar_algebra(A: AlgebraObject, tol: float = TOL) -> ValidationReport:
    rep = ValidationReport("internal_algebra.check_cstar_algebra", tol)
    rep.notes["algebra"] = A.name
    rep.notes["fiber_dims"] = {A.data.labels[i]: A.dims[i] for i in A.data.simples}
    rep.add("associativity", associativity_residual(A))
    rep.add("unit", unit_residual(A))
    if A.star is None:
        rep.add("star_missing", 1.0)
        return rep
    for k, v in star_residuals(A).items():
        rep.add(k, v)
    rep.add("positivity", positivity_residual(A))
    return rep


def verify_yd(A: AlgebraObject, sigma: HalfBraiding | None = None, tol: float = TOL) -> ValidationReport:
    """``σ_U (μ ⊗ id_U) = (id_U ⊗ μ)(σ_U ⊗ id_A)(id_A ⊗ σ_U)`` on every channel.

    Also reports unitarity of the components and the tensor coherence
    ``σ_{U⊗V} = (id_U ⊗ σ_V)(σ_U ⊗ id_V)`` split into simple channels.
    """
    sigma = sigma if sigma is not None else A.half_braiding
    if sigma is None:
        raise AlgebraError("no half-braiding supplied")
    d = A.data
    rep = ValidationReport("internal_algebra.verify_yd", tol)
    rep.notes["algebra"] = A.name
    support = [i for i in d.simples if A.dims[i]]
    for i in support:
        for U in d.simples:
            for k in d.channels(i, U):
                if (U, k) not in sigma.comps:
                    raise AlgebraError(f"half-braiding is missing the component for {d.labels[U]} at {d.labels[k]}")
    rep.add(
        "unitarity",
        max((float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[1])))) for m in sigma.comps.values() if m.size), default=0.0),
    )
    lhs_moves = [A.mult_move(0), sigma.move(0)]
    rhs_moves = [sigma.move(1), sigma.move(0), A.mult_move(1)]
    worst = 0.0
    for i, j in itertools.product(support, repeat=2):
        for U in d.simples:
            for path in de.tree_paths(d, [i, j, U]):
                for a, b in itertools.product(range(A.dims[i]), range(A.dims[j])):
                    key = (((i, a), (j, b), (U, 0)), path)
                    worst = max(
                        worst, _diff(de.apply_moves(d, lhs_moves, {key: 1.0}), de.apply_moves(d, rhs_moves, {key: 1.0}))
                    )
    rep.add("yd_equation", worst)
    coh = 0.0
    for i in support:
        for U, V in itertools.product(d.simples, repeat=2):
            for path in de.tree_paths(d, [i, U, V]):
                for a in range(A.dims[i]):
                    key = (((i, a), (U, 0), (V, 0)), path)
                    lhs = de.apply_moves(d, [sigma.move(0), sigma.move(1)], {key: 1.0})
                    rhs: de.State = {}
                    for W in d.channels(U, V):
                        part = de.apply_moves(d, [de.Fuse(1, W), sigma.move(0), de.Split(0, U, V)], {key: 1.0})
                        for kk, c in part.items():
                            rhs[kk] = rhs.get(kk, 0) + c
                    coh = max(coh, _diff(lhs, rhs))
    rep.add("tensor_coherence", coh)
    return rep


# ---------------------------------------------------------------------------
# tensor products of algebras
# ---------------------------------------------------------------------------


def unpack_moves(pos: int, items: Sequence[de.Item], path: Sequence[int]) -> list[de.Move]:
    """Replace an untagged strand at ``pos`` by the tagged tree ``(items, path)``."""
    n = len(items)
    moves: list[de.Move] = []
    for j in range(n - 1, 0, -1):
        left = (path[j], 0) if j > 1 else tuple(items[0])
        right = tuple(items[j])

        def kernel(data, its, f, left=left, right=right):
            return [((left, right), 1.0)]

        moves.append(de.Local(pos, 1, kernel, "unpack"))
    if n == 1:
        it = tuple(items[0])
        moves.append(de.Local(pos, 1, lambda data, its, f, it=it: [((it,), 1.0)], "retag"))
    return moves


def product_state(data: FusionData, x: de.Key, y: de.Key, k: int) -> de.State:
    """Left-canonical state of ``(x ⊗ y)`` composed with the vertex ``|root_x root_y; k>``."""
    (ix, px), (iy, py) = x, y
    U, V = px[-1], py[-1]
    if not data.N(U, V, k):
        return {}
    start = {(((U, 0), (V, 0)), (data.unit, U, k)): 1.0}
    return de.apply_moves(data, unpack_moves(1, iy, py) + unpack_moves(0, ix, px), start)


def pack_moves(pos: int, n: int, index: Mapping[int, Mapping[de.Key, int]] | None = None) -> list[de.Move]:
    """Fuse ``n`` tagged strands starting at ``pos`` into one strand.

    The new strand's tag is the key ``(items, path)`` of the left-canonical
    tree it came from, or its position in ``index[root]`` when given. This
    inverts :func:`unpack_moves`.
    """
    def wrap(data, its, f):
        return [(((f, ((its[0],), (data.unit, f))),), 1.0)]

    def join(data, its, f):
        (a, (items, path)), it = its
        return [(((f, (items + (it,), path + (f,))),), 1.0)]

    moves: list[de.Move] = [de.Local(pos, 1, wrap, "pack")]
    moves += [de.Local(pos, 2, join, "pack") for _ in range(n - 1)]
    if index is not None:
        def lookup(data, its, f):
            return [(((f, index[f][its[0][1]]),), 1.0)]

        moves.append(de.Local(pos, 1, lookup, "pack"))
    return moves


def ordered_product(
    factors: Sequence[AlgebraObject],
    crossing: Callable[[int, int, int], de.Move | Sequence[de.Move]],
    name: str = "",
) -> AlgebraObject:
    """Algebra structure on ``A_1 ⊗ ... ⊗ A_n`` from pairwise crossing maps.

    ``crossing(j, s, pos)`` is a local move (or a list of moves) taking strands ``(x_s, y_j)`` at
    ``pos`` (an element of ``A_s`` followed by one of ``A_j``, ``j < s``) to
    ``(y_j, x_s)``. The product of ``x_1 ... x_n`` and ``y_1 ... y_n`` moves each
    ``y_j`` left past ``x_n, ..., x_{j+1}`` and then multiplies factorwise.
    Each factor embeds as a subalgebra.
    """
    d = factors[0].data
    n = len(factors)
    dims_list = [f.dims for f in factors]
    keys = {k: product_keys(d, dims_list, k) for k in d.simples}
    index = {k: {key: m for m, key in enumerate(ks)} for k, ks in keys.items()}
    tail: list[de.Move] = []
    for j in range(n):
        for s in range(n - 1, j, -1):
            mv = crossing(j, s, j + s)
            tail.extend(mv if isinstance(mv, (list, tuple)) else [mv])
    for s in range(n):
        tail.append(factors[s].mult_move(s))
    tail += pack_moves(0, n, index)

    mult = {}
    for i, j in itertools.product(d.simples, repeat=2):
        if not keys[i] or not keys[j]:
            continue
        for k in d.channels(i, j):
            if not keys[k]:
                continue
            m = np.zeros((len(keys[k]), len(keys[i]), len(keys[j])), dtype=complex)
            for a, x in enumerate(keys[i]):
                for b, y in enumerate(keys[j]):
                    for ((its, _), c) in de.apply_moves(d, tail, product_state(d, x, y, k)).items():
                        m[its[0][1], a, b] += c
            if np.any(m):
                mult[(i, j, k)] = m
    u = d.unit
    unit = np.zeros(len(keys[u]), dtype=complex)
    for tags in itertools.product(*(np.nonzero(f.unit)[0] for f in factors)):
        key = (tuple((u, int(t)) for t in tags), (u,) * (n + 1))
        unit[index[u][key]] += np.prod([f.unit[t] for f, t in zip(factors, tags)])
    P = AlgebraObject(d, tuple(len(keys[k]) for k in d.simples), mult, unit, name=name, basis=keys)
    if all(f.star is not None for f in factors):
        P.star = _product_star(P, factors, keys, index)
    if all(f.half_braiding is not None for f in factors):
        P.half_braiding = _product_half_braiding(P, factors, keys, index)
    return P


def braided_tensor(A: AlgebraObject, B: AlgebraObject) -> AlgebraObject:
    """``A ⊠ B`` with multiplication ``(μ_A ⊗ μ_B)(id ⊗ σ_{B,A} ⊗ id)``.

    Fiber basis of ``(A ⊠ B)(k)``: tagged strand pairs ``((i, a), (j, b))`` with
    the vertex ``|i j; k>``. The star is ``(a ⊗ b)* = b* · a*`` computed in the
    product, and the half-braiding is the tensor product of the factors'
    half-braidings when both are present.
    """
    if B.data is not A.data:
        raise AlgebraError("braided tensor needs both algebras over the same category")
    return ordered_product([A, B], lambda j, s, pos: de.Braid(pos, 1), name=f"{A.name}⊠{B.name}")


def _embed(d: FusionData, factors, index, slot: int, i: int, v: np.ndarray) -> np.ndarray:
    """``v ∈ V_i`` of factor ``slot`` placed in the product, other factors at their units."""
    u = d.unit
    n = len(factors)
    out = np.zeros(len(index[i]), dtype=complex)
    grids = [[None] if s == slot else list(np.nonzero(factors[s].unit)[0]) for s in range(n)]
    path = (u,) * (slot + 1) + (i,) * (n - slot)
    for combo in itertools.product(*grids):
        base = np.prod([factors[s].unit[t] for s, t in enumerate(combo) if s != slot])
        for a in np.nonzero(v)[0]:
            items = tuple((i, int(a)) if s == slot else (u, int(t)) for s, t in enumerate(combo))
            out[index[i][(items, path)]] += base * v[a]
    return out


def _product_star(P: AlgebraObject, factors, keys, index) -> dict[int, np.ndarray]:
    """``(x_1 ⊗ ... ⊗ x_n)* = c · x_n* · (x_1 ⊗ ... ⊗ x_{n-1})*`` recursively.

    Keys are left-canonical trees, so the last factor is split off with the
    vertex conjugation phase of its top vertex.
    """
    d = P.data
    n = len(factors)
    cache: dict = {}

    def star_prefix(items, path) -> tuple[int, np.ndarray]:
        m = len(items)
        memo = cache.get((items, path))
        if memo is not None:
            return memo
        i, a = items[-1]
        ib = d.dual[i]
        last = _embed(d, factors, index, m - 1, ib, factors[m - 1].star[i][:, a])
        if m == 1:
            res = (ib, last)
        else:
            hb, head = star_prefix(items[:-1], path[:-1])
            root = path[-1]
            c = de.vertex_conjugation_phase(d, path[-2], i, root)
            res = (d.dual[root], c * P.product(ib, last, hb, head, d.dual[root]))
        cache[(items, path)] = res
        return res

    out = {}
    for k, ks in keys.items():
        if not ks:
            continue
        kb = d.dual[k]
        S = np.zeros((len(keys[kb]), len(ks)), dtype=complex)
        for col, (items, path) in enumerate(ks):
            _, vec = star_prefix(items, path)
            S[:, col] = vec
        out[k] = S
    return out


def _product_half_braiding(P: AlgebraObject, factors, keys, index) -> HalfBraiding:
    """``σ_U`` on ``A_1 ⊗ ... ⊗ A_n``: pass ``U`` through the factors from the right."""
    d = P.data
    n = len(factors)

    def fn(U, k, it):
        i, a = it
        items, path = keys[i][a]
        moves = unpack_moves(0, items, path)
        for s in range(n - 1, -1, -1):
            moves.append(factors[s].half_braiding.move(s))
        moves += pack_moves(1, n, index)
        return de.apply_moves(d, moves, {(((i, 0), (U, 0)), (d.unit, i, k)): 1.0})

    return HalfBraiding.from_kernel(d, P.dims, fn)


# ---------------------------------------------------------------------------
# modules and relative tensor products
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class ModuleObject:
    """Left or right module over ``algebra``.

    ``act[(i, m, k)]`` (left) or ``act[(m, i, k)]`` (right) has shape
    ``(dims[k], dim A_i, dims[m])`` resp. ``(dims[k], dims[m], dim A_i)``.
    """

    algebra: AlgebraObject
    dims: tuple[int, ...]
    act: dict[tuple[int, int, int], np.ndarray]
    side: str = "left"
    name: str = ""

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise AlgebraError("module side must be 'left' or 'right'")
        self.dims = tuple(int(x) for x in self.dims)

    def act_move(self, pos: int) -> de.Local:
        act = self.act

        def kernel(data, items, f):
            (i, a), (j, b) = items
            m = act.get((i, j, f))
            if m is None:
                return []
            col = m[:, a, b]
            return [(((f, int(c)),), col[c]) for c in np.nonzero(col)[0]]

        return de.Local(pos, 2, kernel, "action")

    @property
    def obj(self) -> cc.Obj:
        return cc.Obj.from_mult(self.dims)


def regular_module(A: AlgebraObject, side: str = "left") -> ModuleObject:
    return ModuleObject(A, A.dims, dict(A.mult), side, name=f"{A.name} ({side} regular)")


def free_module(A: AlgebraObject, W: Sequence[int], side: str = "right") -> ModuleObject:
    """``W ⊗ A`` (right) or ``A ⊗ W`` (left) with the action through ``μ``."""
    d = A.data
    Wd = list(W)
    factors = [Wd, A.dims] if side == "right" else [A.dims, Wd]
    keys = {k: product_keys(d, factors, k) for k in d.simples}
    index = {k: {key: n for n, key in enumerate(ks)} for k, ks in keys.items()}
    dims = tuple(len(keys[k]) for k in d.simples)
    act = {}
    for i, m in itertools.product(d.simples, repeat=2):
        if not A.dims[i] or not dims[m]:
            continue
        for k in (d.channels(m, i) if side == "right" else d.channels(i, m)):
            if not dims[k]:
                continue
            shape = (dims[k], dims[m], A.dims[i]) if side == "right" else (dims[k], A.dims[i], dims[m])
            T = np.zeros(shape, dtype=complex)
            for x, key in enumerate(keys[m]):
                for a in range(A.dims[i]):
                    if side == "right":
                        st = product_state(d, key, (((i, a),), (d.unit, i)), k)
                        st = de.apply_moves(d, [A.mult_move(1)], st)
                        T[:, x, a] = state_to_vector(st, index[k], dims[k])
                    else:
                        st = product_state(d, (((i, a),), (d.unit, i)), key, k)
                        st = de.apply_moves(d, [A.mult_move(0)], st)
                        T[:, a, x] = state_to_vector(st, index[k], dims[k])
            act[(m, i, k) if side == "right" else (i, m, k)] = T
    return ModuleObject(A, dims, act, side, name=f"free {side} module")


def module_residual(Mod: ModuleObject) -> float:
    """Associativity and unit residual of the action."""
    A = Mod.algebra
    d = A.data
    worst = 0.0
    supp_a = [i for i in d.simples if A.dims[i]]
    supp_m = [m for m in d.simples if Mod.dims[m]]
    if Mod.side == "left":
        lhs, rhs = [A.mult_move(0), Mod.act_move(0)], [Mod.act_move(1), Mod.act_move(0)]
        triples = [(i, j, m) for i in supp_a for j in supp_a for m in supp_m]
        dims_of = lambda t: (A.dims[t[0]], A.dims[t[1]], Mod.dims[t[2]])
        unit_moves, unit_pos = [A.unit_move(0), Mod.act_move(0)], None
    else:
        lhs, rhs = [Mod.act_move(0), Mod.act_move(0)], [A.mult_move(1), Mod.act_move(0)]
        triples = [(m, i, j) for m in supp_m for i in supp_a for j in supp_a]
        dims_of = lambda t: (Mod.dims[t[0]], A.dims[t[1]], A.dims[t[2]])
        unit_moves = [A.unit_move(1), Mod.act_move(0)]
    for t in triples:
        for path in de.tree_paths(d, list(t)):
            for tags in itertools.product(*(range(n) for n in dims_of(t))):
                key = (tuple(zip(t, tags)), path)
                worst = max(worst, _diff(de.apply_moves(d, lhs, {key: 1.0}), de.apply_moves(d, rhs, {key: 1.0})))
    for m in supp_m:
        for x in range(Mod.dims[m]):
            key = (((m, x),), (d.unit, m))
            worst = max(worst, _diff(de.apply_moves(d, unit_moves, {key: 1.0}), {key: 1.0}))
    return worst


def relative_tensor(X: ModuleObject, Y: ModuleObject) -> tuple[cc.Obj, cc.Mor]:
    """Coequalizer of ``ρ ⊗ id_Y`` and ``id_X ⊗ λ`` on ``X ⊗ A ⊗ Y -> X ⊗ Y``."""
    if X.side != "right" or Y.side != "left":
        raise AlgebraError("relative_tensor needs a right module and a left module")
    if X.algebra is not Y.algebra:
        raise AlgebraError("modules are over different algebras")
    A = X.algebra
    d = A.data
    src, tgt = {}, {}
    f_blocks, g_blocks = {}, {}
    for k in d.simples:
        tk = product_keys(d, [X.dims, Y.dims], k)
        sk = product_keys(d, [X.dims, A.dims, Y.dims], k)
        src[k], tgt[k] = len(sk), len(tk)
        if not sk or not tk:
            continue
        tidx = {key: n for n, key in enumerate(tk)}
        F = np.zeros((len(tk), len(sk)), dtype=complex)
        G = np.zeros_like(F)
        for n, key in enumerate(sk):
            F[:, n] = state_to_vector(de.apply_moves(d, [X.act_move(0)], {key: 1.0}), tidx, len(tk))
            G[:, n] = state_to_vector(de.apply_moves(d, [Y.act_move(1)], {key: 1.0}), tidx, len(tk))
        f_blocks[k], g_blocks[k] = F, G
    s_obj, t_obj = cc.Obj.from_mult(src), cc.Obj.from_mult(tgt)
    return cc.coequalizer(cc.Mor(s_obj, t_obj, f_blocks), cc.Mor(s_obj, t_obj, g_blocks))


def character_module(A: AlgebraObject, chi: Mapping[int, np.ndarray] | np.ndarray) -> ModuleObject:
    """The unit object as a left ``A``-module through an algebra map ``A -> 1``.

    ``chi`` gives the values of the map on the basis of ``V_unit`` (it vanishes
    on the other fibers).
    """
    d = A.data
    u = d.unit
    vals = np.asarray(chi, dtype=complex).reshape(A.dims[u])
    dims = [0] * d.rank
    dims[u] = 1
    act = {(u, u, u): vals.reshape(1, -1, 1)}
    return ModuleObject(A, tuple(dims), act, "left", name="unit via character")
