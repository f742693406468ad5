"""The reflection equation algebra ``F = ⊕_X X̄ ⊗ X`` as an algebra object.

The fiber ``F(U)`` has one basis vector ``e_X^U`` for each simple ``X`` with
``U ⊂ X̄ ⊗ X``: the isometric vertex ``U -> X̄ ⊗ X``. On the ground fiber the
elements ``R_X = sqrt(d_X) e_X^1`` are the duality morphisms.

The product of ``e_X^U`` and ``e_Y^V`` is the string diagram on
``X̄ ⊗ X ⊗ Ȳ ⊗ Y`` that braids ``X`` under ``Ȳ``, projects ``X ⊗ Y`` onto
each channel ``Z``, bends the ``X̄ ⊗ Ȳ`` pair into ``Z̄`` with duality maps and
rescales by ``d_Z / (d_X d_Y)``. With this normalization the counit
``ε = Σ_X d_X^{-1} R_X†`` is a character, and the ground algebra is the
fusion ring with ``R_X R_Y = Σ_Z N_{XY}^Z (d_Z / (d_X d_Y)) R_Z``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import diagram_eval as de
from . import internal_algebra as ia
from .fusion_data import FusionData
from .reports import ValidationReport

TOL = 1e-8

SCHEDULES = ("fuse-first", "cup-first")
CANDIDATES = ("component-twist", "pair-twist", "monodromy")


class ReflectionError(ValueError):
    pass


@dataclass(eq=False)
class ReflectionAlgebra:
    """``F`` with its half-braiding, ground basis and counit.

    ``fiber_labels[U]`` lists the simples ``X`` indexing the basis of ``F(U)``
    in order; ``ground_basis = fiber_labels[unit]``. ``counit`` holds
    ``ε(e_X)`` on the ground basis.
    """

    data: FusionData
    algebra: ia.AlgebraObject
    half_braiding: ia.HalfBraiding
    fiber_labels: dict[int, list[int]]
    counit: np.ndarray = field(default=None)

    @property
    def ground_basis(self) -> list[int]:
        return self.fiber_labels[self.data.unit]

    @property
    def r_scale(self) -> np.ndarray:
        """``sqrt(d_X)`` on the ground basis: ``R_X = r_scale[x] e_X``."""
        return np.sqrt([self.data.qdim[X] for X in self.ground_basis])

    def r_vector(self, X: int) -> np.ndarray:
        v = np.zeros(len(self.ground_basis), dtype=complex)
        x = self.ground_basis.index(X)
        v[x] = self.r_scale[x]
        return v


def fiber_labels(data: FusionData) -> dict[int, list[int]]:
    return {U: [X for X in data.simples if data.N(data.dual[X], X, U)] for U in data.simples}


def multiplication_moves(data: FusionData, X: int, Y: int, Z: int, schedule: str = "fuse-first") -> list[de.Move]:
    """Moves taking ``X̄ ⊗ X ⊗ Ȳ ⊗ Y`` to ``Z̄ ⊗ Z`` for the product of the ``X`` and ``Y`` components.

    ``cup-first`` creates the ``Z ⊗ Z̄`` pair before projecting and closes
    the ``Y`` loop before the ``X`` loop; both schedules are the same
    morphism and serve as mutual checks.
    """
    scale = data.qdim[Z] / (data.qdim[X] * data.qdim[Y])
    if schedule == "fuse-first":
        return [
            de.Braid(1, -1),
            de.Fuse(2, Z),
            de.Cup(2, Z, bar=True),
            de.Split(2, X, Y),
            de.Braid(1, 1),
            de.Cap(0, X),
            de.Cap(0, Y),
            de.Scalar(scale),
        ]
    if schedule == "cup-first":
        return [
            de.Braid(1, -1),
            de.Cup(2, Z, bar=True),
            de.Fuse(4, Z),
            de.Split(2, X, Y),
            de.Braid(1, 1),
            de.Cap(2, Y),
            de.Cap(0, X),
            de.Scalar(scale),
        ]
    raise ReflectionError(f"unknown schedule {schedule!r}; expected one of {SCHEDULES}")


def _structure_constants(data: FusionData, labels: dict[int, list[int]], schedule: str) -> dict:
    dims = [len(labels[U]) for U in data.simples]
    mult = {}
    for U, V in itertools.product(data.simples, repeat=2):
        if not dims[U] or not dims[V]:
            continue
        for W in data.channels(U, V):
            if not dims[W]:
                continue
            m = np.zeros((dims[W], dims[U], dims[V]), dtype=complex)
            for (a, X), (b, Y) in itertools.product(enumerate(labels[U]), enumerate(labels[V])):
                start = {(((U, 0), (V, 0)), (data.unit, U, W)): 1.0}
                opened = de.apply_moves(data, [de.Split(1, data.dual[Y], Y), de.Split(0, data.dual[X], X)], start)
                for c, Z in enumerate(labels[W]):
                    if not data.N(X, Y, Z):
                        continue
                    out = de.apply_moves(data, multiplication_moves(data, X, Y, Z, schedule), opened)
                    for (items, path), coeff in out.items():
                        # the result is a multiple of the vertex W -> Z̄ ⊗ Z
                        m[c, a, b] += coeff
            if np.any(np.abs(m) > 1e-14):
                mult[(U, V, W)] = m
    return mult


def star_phase(data: FusionData, X: int, U: int) -> complex:
    """``J(e_X^U) = star_phase · e_X̄^Ū``.

    The vertex conjugation phase of ``U -> X̄ ⊗ X``, normalized by its value
    on the ground channel, times ``R^{X̄X}_1 / R^{X̄X}_U``. On the ground fiber
    this gives ``R_X† = R_X̄``.
    """
    Xb = data.dual[X]
    c = de.vertex_conjugation_phase(data, Xb, X, U)
    c1 = de.vertex_conjugation_phase(data, Xb, X, data.unit)
    return c * np.conj(c1) * data.r_symbol(Xb, X, data.unit) * np.conj(data.r_symbol(Xb, X, U))


def _star(data: FusionData, labels: dict[int, list[int]]) -> dict[int, np.ndarray]:
    out = {}
    for U in data.simples:
        if not labels[U]:
            continue
        Ub = data.dual[U]
        S = np.zeros((len(labels[Ub]), len(labels[U])), dtype=complex)
        for a, X in enumerate(labels[U]):
            S[labels[Ub].index(data.dual[X]), a] = star_phase(data, X, U)
        out[U] = S
    return out


def half_braiding_moves(data: FusionData, X: int) -> list[de.Move]:
    """``τ_U`` on the ``X`` component: ``(σ_{X̄,U} ⊗ id)(id ⊗ σ_{U,X}^{-1})`` on ``X̄ ⊗ X ⊗ U``."""
    return [de.Braid(1, -1), de.Braid(0, 1)]


def fuse_component(labels: dict[int, list[int]], pos: int) -> de.Local:
    """Fuse strands ``X̄ ⊗ X`` at ``pos`` into an ``F``-strand tagged by the component ``X``."""

    def kernel(data, items, f):
        X = items[1][0]
        if X not in labels[f]:
            return []
        return [(((f, labels[f].index(X)),), 1.0)]

    return de.Local(pos, 2, kernel, "fuse-component")


def open_component(labels: dict[int, list[int]], pos: int) -> de.Local:
    """Inverse of :func:`fuse_component`: replace an ``F``-strand by ``X̄ ⊗ X``."""

    def kernel(data, items, f):
        W, x = items[0]
        X = labels[W][x]
        return [(((data.dual[X], 0), (X, 0)), 1.0)]

    return de.Local(pos, 1, kernel, "open-component")


def _half_braiding(data: FusionData, labels: dict[int, list[int]]) -> ia.HalfBraiding:
    dims = [len(labels[U]) for U in data.simples]

    def fn(U, k, it):
        W, x = it
        X = labels[W][x]
        key = ((it, (U, 0)), (data.unit, W, k))
        moves = [open_component(labels, 0)] + half_braiding_moves(data, X) + [fuse_component(labels, 1)]
        return de.apply_moves(data, moves, {key: 1.0})

    return ia.HalfBraiding.from_kernel(data, dims, fn)


def build_reflection_algebra(data: FusionData, schedule: str = "fuse-first") -> ReflectionAlgebra:
    """Construct ``F`` with structure constants evaluated by the diagram engine."""
    labels = fiber_labels(data)
    dims = tuple(len(labels[U]) for U in data.simples)
    mult = _structure_constants(data, labels, schedule)
    unit = np.zeros(dims[data.unit], dtype=complex)
    unit[labels[data.unit].index(data.unit)] = 1.0
    A = ia.AlgebraObject(
        data,
        dims,
        mult,
        unit,
        star=_star(data, labels),
        half_braiding=_half_braiding(data, labels),
        name=f"F({data.name})",
        basis={U: list(labels[U]) for U in data.simples},
    )
    eps = np.array([1.0 / np.sqrt(data.qdim[X]) for X in labels[data.unit]], dtype=complex)
    return ReflectionAlgebra(data, A, A.half_braiding, labels, eps)


# ---------------------------------------------------------------------------
# ground algebra
# ---------------------------------------------------------------------------


def ground_multiplication_table(F: ReflectionAlgebra) -> np.ndarray:
    """``T[x, y, z]`` with ``R_X R_Y = Σ_Z T[x, y, z] R_Z`` over the ground basis."""
    u = F.data.unit
    M = F.algebra.M(u, u, u)
    r = F.r_scale
    return np.einsum("zab,a,b,z->abz", M, r, r, 1.0 / r)


def ground_table_from_schedule(data: FusionData, schedule: str) -> np.ndarray:
    """The ground table recomputed from scratch with the given move schedule."""
    labels = fiber_labels(data)
    u = data.unit
    M = _structure_constants(data, labels, schedule).get((u, u, u))
    r = np.sqrt([data.qdim[X] for X in labels[u]])
    if M is None:
        return np.zeros((len(r),) * 3, dtype=complex)
    return np.einsum("zab,a,b,z->abz", M, r, r, 1.0 / r)


def counit(F: ReflectionAlgebra, v: np.ndarray) -> complex:
    """``ε`` on a ground vector given in the ``e_X`` basis."""
    return complex(F.counit @ np.asarray(v, dtype=complex))


def counit_state_check(F: ReflectionAlgebra, samples: int = 100, seed: int = 0, tol: float = TOL) -> ValidationReport:
    """``ε(R_X) = 1``, multiplicativity, unitality, star compatibility and ``ε(a†a) = |Σ λ_X|²``."""
    rep = ValidationReport("reflection_algebra.counit", tol)
    d = F.data
    u = d.unit
    A = F.algebra
    n = len(F.ground_basis)
    rep.add("counit_on_R", max(abs(counit(F, F.r_vector(X)) - 1) for X in F.ground_basis))
    rep.add("unital", abs(counit(F, A.unit) - 1))
    M = A.M(u, u, u)
    rep.add("multiplicative", float(np.max(np.abs(np.einsum("zab,z->ab", M, F.counit) - np.outer(F.counit, F.counit)))))
    star = max(abs(counit(F, A.apply_star(u, e)) - np.conj(counit(F, e))) for e in np.eye(n, dtype=complex))
    rep.add("star_compatible", star)
    rng = np.random.default_rng(seed)
    worst = 0.0
    R = np.diag(F.r_scale)
    for _ in range(samples):
        lam = rng.normal(size=n) + 1j * rng.normal(size=n)
        a = R @ lam
        val = counit(F, A.product(u, A.apply_star(u, a), u, a, u))
        worst = max(worst, abs(val - abs(lam.sum()) ** 2) / max(1.0, abs(lam.sum()) ** 2))
    rep.add("positivity_identity", worst)
    rep.notes["counit_values"] = {d.labels[X]: _cx(counit(F, F.r_vector(X))) for X in F.ground_basis}
    return rep


def r_norms(F: ReflectionAlgebra) -> dict[int, float]:
    """``‖R_X‖ = sqrt(R_X† R_X)``, the closed unknot evaluated by the diagram engine."""
    return {X: float(np.sqrt(abs(de.closed_evaluation(F.data, de.unknot(X))))) for X in F.ground_basis}


def ground_operator_norms(F: ReflectionAlgebra) -> dict[int, float]:
    """Operator norm of left multiplication by ``R_X`` on the ground algebra.

    The regular representation of the ground algebra on itself, made
    Hilbert by the state ``ω(R_X) = δ_{X,1}``, is faithful; these are the
    C*-norms of the ``R_X`` in the ground algebra.
    """
    T = ground_multiplication_table(F)
    n = T.shape[0]
    # ω(R_X† R_Y) = T[x̄, y, unit], diagonal with entries 1/d_X²
    gram = np.array([[T[F.ground_basis.index(F.data.dual[F.ground_basis[x]]), y, 0] for y in range(n)] for x in range(n)])
    w, V = np.linalg.eigh((gram + gram.conj().T) / 2)
    half = V @ np.diag(np.sqrt(np.clip(w, 0, None))) @ V.conj().T
    inv = V @ np.diag(1 / np.sqrt(np.clip(w, 1e-300, None))) @ V.conj().T
    out = {}
    for x, X in enumerate(F.ground_basis):
        L = T[x].T  # column y maps to Σ_z T[x, y, z] R_z
        out[X] = float(np.linalg.norm(half @ L @ inv, 2))
    return out


def _cx(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


# ---------------------------------------------------------------------------
# Dehn twist candidates
# ---------------------------------------------------------------------------


def _candidate_moves(candidate: str, labels: dict[int, list[int]]) -> list[de.Move]:
    if candidate == "component-twist":
        # twist the fused strand, so the U-component picks up θ_U
        return [fuse_component(labels, 0), de.Twist(0), open_component(labels, 0)]
    if candidate == "balanced-component-twist":
        # the same map through balancing: θ_{X̄ ⊗ X} = monodromy ∘ (θ_X̄ ⊗ θ_X)
        return [de.Twist(0), de.Twist(1), de.Braid(0, 1), de.Braid(0, 1)]
    if candidate == "pair-twist":
        return [de.Twist(0), de.Twist(1)]
    if candidate == "monodromy":
        return [de.Braid(0, 1), de.Braid(0, 1)]
    raise ReflectionError(f"unknown Dehn twist candidate {candidate!r}; expected one of {CANDIDATES}")


def dehn_twist(F: ReflectionAlgebra, candidate: str = "component-twist") -> dict[int, np.ndarray]:
    """Fiberwise matrices of the candidate twist, evaluated on ``X̄ ⊗ X`` by the engine."""
    moves = _candidate_moves(candidate, F.fiber_labels)
    d = F.data
    out = {}
    for U in d.simples:
        labels = F.fiber_labels[U]
        D = np.zeros((len(labels), len(labels)), dtype=complex)
        for a, X in enumerate(labels):
            key = (((d.dual[X], 0), (X, 0)), (d.unit, d.dual[X], U))
            for (items, path), c in de.apply_moves(d, moves, {key: 1.0}).items():
                D[labels.index(items[1][0]), a] += c
        out[U] = D
    return out


def verify_mcg(F: ReflectionAlgebra, candidate: str = "component-twist", tol: float = TOL) -> ValidationReport:
    """Battery for one candidate: fixes every ``R_X``, preserves ``ε``, is a *-automorphism."""
    D = dehn_twist(F, candidate)
    d = F.data
    u = d.unit
    A = F.algebra
    rep = ValidationReport(f"reflection_algebra.verify_mcg[{candidate}]", tol)
    G = D[u]
    rep.add("fixes_R", float(np.max(np.abs(G - np.eye(len(G))))) if G.size else 0.0)
    rep.add("counit_invariance", float(np.max(np.abs(F.counit @ G - F.counit))) if G.size else 0.0)
    auto = 0.0
    for (i, j, k), m in A.mult.items():
        lhs = np.einsum("yz,zab->yab", D[k], m)
        rhs = np.einsum("zpq,pa,qb->zab", m, D[i], D[j])
        auto = max(auto, float(np.max(np.abs(lhs - rhs))))
    rep.add("multiplicative", auto)
    st = 0.0
    for i, S in A.star.items():
        ib = d.dual[i]
        st = max(st, float(np.max(np.abs(D[ib] @ S - S @ np.conj(D[i])))))
    rep.add("star_compatible", st)
    if candidate == "component-twist":
        other = dehn_twist(F, "balanced-component-twist")
        rep.add("balancing_crosscheck", max(float(np.max(np.abs(D[U] - other[U]), initial=0.0)) for U in d.simples))
    rep.notes["candidate"] = candidate
    rep.notes["diagonal"] = {
        d.labels[U]: {d.labels[X]: _cx(D[U][a, a]) for a, X in enumerate(F.fiber_labels[U])}
        for U in d.simples
        if F.fiber_labels[U]
    }
    return rep


def mcg_battery(F: ReflectionAlgebra, tol: float = TOL) -> dict[str, ValidationReport]:
    return {c: verify_mcg(F, c, tol) for c in CANDIDATES}


def check_reflection_algebra(F: ReflectionAlgebra, tol: float = TOL) -> ValidationReport:
    """C*-algebra axioms, the half-braiding equation and the schedule cross-check."""
    rep = ValidationReport("reflection_algebra.check", tol)
    for k, v in ia.check_cstar_algebra(F.algebra, tol).residuals.items():
        rep.add(k, v)
    for k, v in ia.verify_yd(F.algebra, F.half_braiding, tol).residuals.items():
        rep.add(f"yd_{k}", v)
    other = ground_table_from_schedule(F.data, "cup-first")
    rep.add("schedule_crosscheck", float(np.max(np.abs(other - ground_multiplication_table(F)))))
    rep.notes["fiber_dims"] = {F.data.labels[U]: len(F.fiber_labels[U]) for U in F.data.simples}
    return rep
