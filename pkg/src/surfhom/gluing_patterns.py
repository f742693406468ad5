"""Gluing patterns, punctured-surface algebras ``a_P`` and closed-surface reduction.

A pattern of rank ``n`` places the ``2n`` handle ends ``1, 1', ..., n, n'``
at positions ``1..2n`` on the boundary of a disk. Handle ``i`` is a band
joining positions ``P(i)`` and ``P(i')``.
"""

from __future__ import annotations

import itertools
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import category_core as cc
from . import diagram_eval as de
from . import internal_algebra as ia
from . import reflection_algebra as ra
from .fusion_data import FusionData

DEFAULT_CAP = 10**7
CLASSES = ("L", "L^-1", "N", "N^-1", "U")


class PatternError(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


class ReductionDataRequired(ValueError):
    """No boundary module is shipped for this pattern and category."""


@dataclass(frozen=True)
class GluingPattern:
    """``positions[(i, primed)]`` is the 1-based disk position of that handle end."""

    rank: int
    positions: dict

    def __post_init__(self):
        n = self.rank
        want = {(i, p) for i in range(1, n + 1) for p in (False, True)}
        if set(self.positions) != want:
            raise PatternError(f"pattern of rank {n} must assign exactly the ends {_fmt_ends(want)}")
        if sorted(self.positions.values()) != list(range(1, 2 * n + 1)):
            raise PatternError(f"positions must be a bijection onto 1..{2 * n}")

    def P(self, i: int, primed: bool = False) -> int:
        return self.positions[(i, primed)]

    @cached_property
    def sequence(self) -> tuple[tuple[int, bool], ...]:
        """Handle ends in disk order."""
        inv = {v: k for k, v in self.positions.items()}
        return tuple(inv[p] for p in range(1, 2 * self.rank + 1))

    @property
    def text(self) -> str:
        return " ".join(f"{i}'" if p else str(i) for i, p in self.sequence)

    @cached_property
    def tau_p(self) -> tuple[int, ...]:
        """``tau[k]`` is the end at disk position ``k + 1``, with ``i ↦ 2i - 2`` and ``i' ↦ 2i - 1``."""
        return tuple(2 * (i - 1) + int(p) for i, p in self.sequence)

    @cached_property
    def classification(self) -> dict[tuple[int, int], str]:
        return {(i, j): classify_pair(self, i, j) for i, j in itertools.combinations(range(1, self.rank + 1), 2)}

    @cached_property
    def topology(self) -> tuple[int, int]:
        return topology(self)

    def relabel(self, perm: dict[int, int]) -> GluingPattern:
        """Rename handle ``i`` to ``perm[i]``."""
        return GluingPattern(self.rank, {(perm[i], p): v for (i, p), v in self.positions.items()})


def _fmt_ends(ends) -> str:
    return " ".join(f"{i}'" if p else str(i) for i, p in sorted(ends))


_TOKEN = re.compile(r"^([1-9][0-9]*)(['′’]?)$")


def parse_pattern(text: str) -> GluingPattern:
    """Parse handle-end symbols listed in disk order, e.g. ``"1 2 1' 2'"``."""
    tokens = text.split()
    if len(tokens) % 2:
        raise PatternError(f"pattern has an odd number of tokens ({len(tokens)})")
    n = len(tokens) // 2
    positions = {}
    for pos, tok in enumerate(tokens, start=1):
        m = _TOKEN.match(tok)
        if not m:
            raise PatternError(f"malformed token {tok!r} at position {pos}")
        i, primed = int(m.group(1)), bool(m.group(2))
        if i > n:
            raise PatternError(f"token {tok!r} at position {pos} exceeds the rank {n}")
        if (i, primed) in positions:
            raise PatternError(f"token {tok!r} repeated at positions {positions[(i, primed)]} and {pos}")
        positions[(i, primed)] = pos
    return GluingPattern(n, positions)


def from_positions(rank: int, mapping: dict[str, int]) -> GluingPattern:
    """Build a pattern from ``{"1": P(1), "1'": P(1'), ...}``."""
    positions = {}
    for key, v in mapping.items():
        m = _TOKEN.match(str(key).strip())
        if not m:
            raise PatternError(f"malformed handle end {key!r}")
        positions[(int(m.group(1)), bool(m.group(2)))] = int(v)
    return GluingPattern(rank, positions)


def classify_pair(P: GluingPattern, i: int, j: int) -> str:
    """``L``, ``L^-1``, ``N``, ``N^-1`` or ``U`` for handles ``i < j``."""
    if not 1 <= i < j <= P.rank:
        raise PatternError(f"need 1 <= i < j <= {P.rank}, got ({i}, {j})")
    a, a2 = sorted((P.P(i), P.P(i, True)))
    b, b2 = sorted((P.P(j), P.P(j, True)))
    if a < b < a2 < b2:
        return "L"
    if b < a < b2 < a2:
        return "L^-1"
    if a < b < b2 < a2:
        return "N"
    if b < a < a2 < b2:
        return "N^-1"
    return "U"


def topology(P: GluingPattern) -> tuple[int, int]:
    """``(genus, boundary components)`` from the boundary walk of the disk with bands.

    A boundary arc leaving position ``p`` crosses its band to the partner
    position and continues to the next position around the disk.
    """
    n = P.rank
    if n == 0:
        return (0, 1)
    m = 2 * n
    partner = {}
    for i in range(1, n + 1):
        a, b = P.P(i) - 1, P.P(i, True) - 1
        partner[a], partner[b] = b, a
    seen = [False] * m
    boundary = 0
    for start in range(m):
        if seen[start]:
            continue
        boundary += 1
        p = start
        while not seen[p]:
            seen[p] = True
            p = (partner[p] + 1) % m
    twice_genus = 2 - (1 - n) - boundary
    if twice_genus < 0 or twice_genus % 2:
        raise RuntimeError(f"boundary walk produced {boundary} components for rank {n}")
    return (twice_genus // 2, boundary)


def random_pattern(n: int, rng: np.random.Generator) -> GluingPattern:
    perm = rng.permutation(2 * n) + 1
    ends = [(i, p) for i in range(1, n + 1) for p in (False, True)]
    return GluingPattern(n, {e: int(v) for e, v in zip(ends, perm)})


# ---------------------------------------------------------------------------
# crossing maps between factors
# ---------------------------------------------------------------------------


def crossing_moves(kind: str, pos: int = 0) -> list[de.Move]:
    """Braid moves on ``Ū ⊗ U ⊗ V̄ ⊗ V`` (from ``pos``) giving ``V̄ ⊗ V ⊗ Ū ⊗ U``.

    The move order is ``U×V̄``, ``Ū×V̄``, ``U×V``, ``Ū×V``. Every crossing
    passes ``V̄`` under ``U`` and ``Ū`` over ``V``; this is what keeps the
    product compatible with the half-braiding. ``L`` passes both remaining
    pairs with ``V`` on top. ``N`` is the half-braiding of the right factor.
    ``U`` is the category braiding with ``V̄ ⊗ V`` on top except at the forced
    pair; it agrees with ``L`` (the half-braiding crossing breaks
    associativity once an unlinked pair sits between two linked ones). An
    inverse runs the moves backwards with inverted braids, applied to the
    same strands.
    """
    base = {
        "L": [(1, -1), (0, -1), (2, -1), (1, 1)],
        "N": [(1, -1), (0, 1), (2, -1), (1, 1)],
        "U": [(1, -1), (0, -1), (2, -1), (1, 1)],
    }
    if kind in base:
        seq = base[kind]
    elif kind.endswith("^-1") and kind[:-3] in base:
        seq = [(p, -s) for p, s in reversed(base[kind[:-3]])]
    else:
        raise PatternError(f"unknown crossing {kind!r}; expected one of {CLASSES}")
    return [de.Braid(pos + p, s) for p, s in seq]


def crossing_on_factors(labels: dict[int, list[int]], kind: str, pos: int) -> list[de.Move]:
    """Crossing of two tagged ``F``-strands at ``pos``: open both, braid, fuse back."""
    moves: list[de.Move] = [ra.open_component(labels, pos + 1), ra.open_component(labels, pos)]
    moves += crossing_moves(kind, pos)
    moves += [ra.fuse_component(labels, pos + 2), ra.fuse_component(labels, pos)]
    return moves


# ---------------------------------------------------------------------------
# a_P
# ---------------------------------------------------------------------------


def ground_dimension(P: GluingPattern, data: FusionData) -> int:
    """``Σ_{X_1..X_n}`` multiplicity of the unit in ``X̄_1 ⊗ X_1 ⊗ ... ⊗ X̄_n ⊗ X_n``.

    Uses fusion multiplicities of the multiset of labels, which do not
    depend on the order of the tensor factors.
    """
    n = P.rank
    if n == 0:
        return 1
    N = data.fusion
    # M[a, c] = Σ_X N[a][X̄ ⊗ X → c] as a matrix acting on channel vectors
    M = np.zeros((data.rank, data.rank), dtype=np.int64)
    for X in data.simples:
        Xb = data.dual[X]
        for a, b, c in itertools.product(data.simples, repeat=3):
            M[a, c] += int(N[a, Xb, b]) * int(N[b, X, c])
    v = np.zeros(data.rank, dtype=np.int64)
    v[data.unit] = 1
    for _ in range(n):
        v = v @ M
    return int(v[data.unit])


def fiber_dimensions(P: GluingPattern, data: FusionData) -> tuple[int, ...]:
    """``dim a_P(U)`` for every simple ``U``."""
    F = ra.fiber_labels(data)
    dims = [len(F[U]) for U in data.simples]
    out = []
    for U in data.simples:
        out.append(len(ia.product_keys(data, [dims] * P.rank, U)) if P.rank else int(U == data.unit))
    return tuple(out)


def build_a_p(
    P: GluingPattern,
    data: FusionData,
    cap: int = DEFAULT_CAP,
    F: ra.ReflectionAlgebra | None = None,
) -> ia.AlgebraObject:
    """The algebra ``a_P = F^{⊗n}`` with cross-factor products through the crossing maps.

    Factors embed as copies of ``F``. Moving a factor ``j`` element left past a
    factor ``s > j`` element applies ``C_{js}`` from the pair classification.
    """
    n = P.rank
    if n == 0:
        return ia.unit_algebra(data)
    if data.rank**n > cap:
        raise CapExceeded(f"ground enumeration of {data.rank}^{n} label tuples exceeds the cap {cap}")
    dims = fiber_dimensions(P, data)
    terms = sum(dims[i] * dims[j] * len(data.channels(i, j)) for i in data.simples for j in data.simples)
    if terms > cap:
        raise CapExceeded(f"{terms} channel terms exceed the cap {cap}")
    F = F if F is not None else ra.build_reflection_algebra(data)
    labels = F.fiber_labels
    cls = P.classification

    def crossing(j, s, pos):
        return crossing_on_factors(labels, cls[(j + 1, s + 1)], pos)

    A = ia.ordered_product([F.algebra] * n, crossing, name=f"a_P[{P.text}]")
    return A


def annulus_pattern() -> GluingPattern:
    return parse_pattern("1 1'")


def torus_pattern() -> GluingPattern:
    return parse_pattern("1 2 1' 2'")


def factor_embedding(A: ia.AlgebraObject, F: ra.ReflectionAlgebra, slot: int, n: int, U: int, v: np.ndarray) -> np.ndarray:
    """Image of ``v ∈ F(U)`` in ``a_P(U)`` placed in factor ``slot``."""
    index = {k: {key: m for m, key in enumerate(A.basis[k])} for k in A.basis}
    return ia._embed(F.data, [F.algebra] * n, index, slot, U, v)


def thread_count() -> int:
    """Worker cap from ``SURFHOM_THREADS`` (default: CPU count)."""
    raw = os.environ.get("SURFHOM_THREADS", "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"SURFHOM_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"SURFHOM_THREADS must be a positive integer, got {raw!r}")
    return n


def surface_report(
    P: GluingPattern,
    data: FusionData,
    cap: int = DEFAULT_CAP,
    F: ra.ReflectionAlgebra | None = None,
    check: bool = False,
    tol: float = ia.TOL,
) -> dict:
    """Classification, topology, fiber dimensions and ground table of ``a_P``.

    ``ground_table`` lists the nonzero structure constants of ``a_P(1)`` as
    ``[z, a, b, re, im]``. With ``check`` the C*- and half-braiding batteries
    are run as well.
    """
    genus, boundary = P.topology
    A = build_a_p(P, data, cap=cap, F=F)
    u = data.unit
    M = A.M(u, u, u)
    table = [[int(z), int(a), int(b), float(M[z, a, b].real), float(M[z, a, b].imag)] for z, a, b in zip(*np.nonzero(np.abs(M) > 1e-14))]
    out = {
        "pattern": P.text,
        "rank": P.rank,
        "classification": {f"{i},{j}": c for (i, j), c in sorted(P.classification.items())},
        "genus": genus,
        "boundary": boundary,
        "fiber_dims": {data.labels[X]: A.dims[X] for X in data.simples},
        "ground_dim": A.dims[u],
        "ground_table": table,
    }
    if check:
        out["checks"] = {
            "cstar": ia.check_cstar_algebra(A, tol).to_dict(),
            "yetter_drinfeld": ia.verify_yd(A, tol=tol).to_dict(),
        }
    return out


def survey(
    patterns: Sequence[GluingPattern],
    data: FusionData,
    cap: int = DEFAULT_CAP,
    check: bool = False,
    tol: float = ia.TOL,
    threads: int | None = None,
) -> list[dict]:
    """``surface_report`` for several patterns, in input order, on a thread pool."""
    F = ra.build_reflection_algebra(data)
    workers = max(1, min(threads or thread_count(), len(patterns) or 1))
    if workers == 1:
        return [surface_report(P, data, cap, F, check, tol) for P in patterns]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda P: surface_report(P, data, cap, F, check, tol), patterns))


# ---------------------------------------------------------------------------
# closed surfaces
# ---------------------------------------------------------------------------


def _ground_inverse(A: ia.AlgebraObject, x: np.ndarray) -> np.ndarray:
    L = A.left_regular(x)
    y = np.linalg.solve(L, A.unit)
    if np.max(np.abs(A.left_regular(y) @ x - A.unit)) > 1e-8:
        raise ia.AlgebraError("element is not invertible in the ground algebra")
    return y


def commutator_moment_map(P: GluingPattern, A: ia.AlgebraObject, F: ra.ReflectionAlgebra) -> np.ndarray:
    """``μ(R_X) = R_X^{(1)} R_X^{(2)} (R_X^{(1)})^{-1} (R_X^{(2)})^{-1}`` on the ground fibers.

    Only meaningful when every ``R_X`` is invertible, i.e. for pointed
    categories. Returns the matrix ``F(1) -> a_P(1)`` in the ``e_X`` basis.
    """
    d = F.data
    u = d.unit
    cols = []
    for x, X in enumerate(F.ground_basis):
        r = F.r_vector(X)
        a = factor_embedding(A, F, 0, 2, u, r)
        b = factor_embedding(A, F, 1, 2, u, r)
        prod = A.product(u, a, u, b, u)
        prod = A.product(u, prod, u, _ground_inverse(A, a), u)
        prod = A.product(u, prod, u, _ground_inverse(A, b), u)
        cols.append(prod / F.r_scale[x])
    return np.array(cols).T


def boundary_module(A: ia.AlgebraObject, F: ra.ReflectionAlgebra, mu: np.ndarray) -> ia.ModuleObject:
    """``a_P`` as a right ``F``-module through a ground-fiber map ``μ: F(1) -> a_P(1)``.

    ``F`` must be concentrated in its ground fiber.
    """
    d = F.data
    u = d.unit
    if any(F.algebra.dims[U] for U in d.simples if U != u):
        raise ReductionDataRequired("a ground-fiber moment map needs F concentrated in the unit fiber")
    act = {}
    for m in d.simples:
        if not A.dims[m]:
            continue
        T = np.einsum("zab,bc->zac", A.M(m, u, m), mu)
        act[(m, u, m)] = T
    return ia.ModuleObject(F.algebra, A.dims, act, "right", name="boundary")


@dataclass
class Reduction:
    quotient: cc.Obj
    dimension: int
    module_residual: float
    source: str
    notes: dict = field(default_factory=dict)


def closed_surface_reduction(
    P: GluingPattern,
    data: FusionData,
    boundary_action: ia.ModuleObject | None = None,
    cap: int = DEFAULT_CAP,
    tol: float = 1e-6,
) -> Reduction:
    """``a_P ⊗_F 1`` and its unit-fiber dimension for the surface closed off by a disk.

    ``1`` is a left ``F``-module through the counit. Without an explicit
    ``boundary_action``, generated data exists for rank 0, the annulus
    pattern, the trivial category, and patterns of genus 1 with one
    boundary over pointed categories with trivial braiding.
    """
    F = ra.build_reflection_algebra(data)
    if P.rank == 0:
        return Reduction(cc.Obj.simple(data.unit), 1, 0.0, "disk")
    A = build_a_p(P, data, cap=cap, F=F)
    source = "supplied"
    if boundary_action is None:
        boundary_action, source = _shipped_boundary(P, A, F)
    if boundary_action.side != "right":
        raise ia.AlgebraError("the boundary action must be a right F-module")
    res = ia.module_residual(boundary_action)
    if res >= tol:
        raise ia.AlgebraError(f"boundary module fails associativity (residual {res:.3e})")
    unit_mod = ia.character_module(boundary_action.algebra, F.counit)
    Q, _ = ia.relative_tensor(boundary_action, unit_mod)
    return Reduction(Q, Q.mult(data.unit), res, source, {"a_P_dims": list(A.dims)})


def _trivially_braided(d: FusionData, tol: float = 1e-12) -> bool:
    return all(
        abs(d.r_symbol(a, b, c) - 1) < tol for a in d.simples for b in d.simples for c in d.channels(a, b)
    )


def _shipped_boundary(P: GluingPattern, A: ia.AlgebraObject, F: ra.ReflectionAlgebra):
    d = F.data
    if d.rank == 1:
        return boundary_module(A, F, np.ones((1, 1), dtype=complex)), "trivial category"
    if P.rank == 1:
        return ia.regular_module(F.algebra, "right"), "annulus (identity moment map)"
    if P.rank == 2 and P.topology == (1, 1) and d.is_pointed and _trivially_braided(d):
        # with a trivial braiding the plain commutator is the moment map
        return boundary_module(A, F, commutator_moment_map(P, A, F)), "torus commutator moment map"
    raise ReductionDataRequired(
        f"no boundary F-module is shipped for pattern {P.text!r} over {d.name!r}; supply one explicitly"
    )
