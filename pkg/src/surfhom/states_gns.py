"""States on ground algebras, GNS representations and finite realizations.

The ground algebra of an algebra object ``A`` is its unit fiber ``A(1)``. A
state is a linear functional on it, stored by its values on the fiber basis.

The realization part works with a concrete bimodule model of a symmetric
pointed category over ``N = ℂ^G``. In that model ``Φ(g)`` is ``ℓ²(G)`` with
right action twisted by ``g``. The realized algebra is
``|A| = ⊕_X Φ(X) ⊗ A(X)``. Restricting an element to its unit summand and
applying ``ω`` gives a conditional expectation onto ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import category_core as cc
from . import internal_algebra as ia
from . import reflection_algebra as ra
from .fusion_data import FusionData
from .reports import ValidationReport

TOL = 1e-8
POSITIVITY_FLOOR = 1e-9


class StateError(ValueError):
    """A functional that is not a state (or not positive where required)."""


class RealizationError(ValueError):
    """Realization data missing or inconsistent with the category."""


# ---------------------------------------------------------------------------
# ground algebras and states
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class GroundAlgebra:
    """Finite-dimensional unital *-algebra ``B`` with basis ``e_0..e_{n-1}``.

    ``mult[z, a, b]`` is the coefficient of ``e_z`` in ``e_a e_b``; the star is
    ``v ↦ star @ conj(v)``.
    """

    labels: list[str]
    mult: np.ndarray
    star: np.ndarray
    unit: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("zab,a,b->z", self.mult, a, b)

    def adjoint(self, a: np.ndarray) -> np.ndarray:
        return self.star @ np.conj(a)

    def left_regular(self, a: np.ndarray) -> np.ndarray:
        return np.einsum("zab,a->zb", self.mult, a)

    def basis(self) -> np.ndarray:
        return np.eye(self.dimension, dtype=complex)


def ground_algebra(A: ia.AlgebraObject | ra.ReflectionAlgebra, labels: Sequence[str] | None = None) -> GroundAlgebra:
    """The unit fiber of ``A`` with its restricted product and star."""
    if isinstance(A, ra.ReflectionAlgebra):
        if labels is None:
            labels = [f"e_{A.data.labels[X]}" for X in A.ground_basis]
        A = A.algebra
    u = A.data.unit
    n = A.dims[u]
    if A.star is None:
        raise ia.AlgebraError("algebra has no star structure")
    if labels is None:
        labels = [f"e{i}" for i in range(n)]
    if len(labels) != n:
        raise ValueError(f"expected {n} basis labels, got {len(labels)}")
    return GroundAlgebra(list(labels), np.array(A.M(u, u, u), dtype=complex), np.array(A.star[u], dtype=complex), A.unit.copy())


@dataclass(eq=False)
class State:
    """Linear functional ``ω(v) = values · v`` on a ground algebra."""

    algebra: GroundAlgebra
    values: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).reshape(-1)
        if self.values.shape[0] != self.algebra.dimension:
            raise StateError(
                f"state has {self.values.shape[0]} values but the algebra has dimension {self.algebra.dimension}"
            )

    def __call__(self, v: np.ndarray) -> complex:
        return complex(self.values @ v)

    def scaled(self, c: float) -> State:
        return State(self.algebra, c * self.values, f"{c}*{self.name}")


def gram_matrix(omega: State) -> np.ndarray:
    """``G[a, b] = ω(e_a† e_b)``."""
    B = omega.algebra
    E = B.basis()
    G = np.empty((B.dimension, B.dimension), dtype=complex)
    for a in range(B.dimension):
        ea = B.adjoint(E[a])
        for b in range(B.dimension):
            G[a, b] = omega(B.product(ea, E[b]))
    return G


def state_report(omega: State, samples: int = 32, seed: int = 0) -> ValidationReport:
    """Normalization, hermiticity and positivity of ``ω``."""
    B = omega.algebra
    rep = ValidationReport("states_gns.state", TOL)
    rep.add("normalized", abs(omega(B.unit) - 1))
    rep.add("hermitian", max(abs(omega(B.adjoint(e)) - np.conj(omega(e))) for e in B.basis()))
    G = gram_matrix(omega)
    rng = np.random.default_rng(seed)
    worst = max(0.0, -float(np.linalg.eigvalsh((G + G.conj().T) / 2).min()))
    for _ in range(samples):
        a = rng.normal(size=B.dimension) + 1j * rng.normal(size=B.dimension)
        worst = max(worst, -omega(B.product(B.adjoint(a), a)).real)
    rep.add("positivity", worst)
    return rep


def counit_state(F: ra.ReflectionAlgebra) -> State:
    return State(ground_algebra(F), F.counit, "counit")


def coefficient_state(B: GroundAlgebra) -> State:
    """``ω(v)`` = coefficient of the unit in the orthogonal decomposition of ``v``."""
    u = B.unit
    return State(B, np.conj(u) / np.vdot(u, u).real, "coefficient")


def trace_state(B: GroundAlgebra) -> State:
    """Normalized trace of the left-regular representation."""
    vals = np.array([np.trace(B.left_regular(e)) for e in B.basis()]) / B.dimension
    return State(B, vals, "trace")


def state_from_spec(B: GroundAlgebra, spec: str | Sequence[complex], F: ra.ReflectionAlgebra | None = None) -> State:
    """Named state (``counit``, ``coefficient``, ``trace``) or explicit basis values."""
    if isinstance(spec, str):
        if spec == "counit":
            if F is None:
                raise StateError("the counit state is only defined on the reflection algebra")
            return counit_state(F)
        if spec == "coefficient":
            return coefficient_state(B)
        if spec == "trace":
            return trace_state(B)
        raise StateError(f"unknown state {spec!r}; expected counit, coefficient, trace or a value vector")
    return State(B, np.asarray(spec, dtype=complex), "explicit")


# ---------------------------------------------------------------------------
# GNS
# ---------------------------------------------------------------------------


def _positive_part(G: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of the Hermitian ``G`` above the rank threshold used for cokernels."""
    H = (G + G.conj().T) / 2
    lam, V = np.linalg.eigh(H)
    scale = max(float(np.abs(lam).max(initial=0.0)), 1.0) if lam.size else 1.0
    if lam.size and lam.min() < -POSITIVITY_FLOOR * scale:
        raise StateError(f"Gram matrix has negative eigenvalue {lam.min():.3e}; the functional is not positive")
    keep = lam > cc.ATOL * scale
    return lam[keep], V[:, keep]


@dataclass
class GNSResult:
    gram: np.ndarray
    kernel_dim: int
    representation: list[np.ndarray]
    cyclic_vector: np.ndarray
    embed: np.ndarray
    lift: np.ndarray
    faithful_state: bool
    injective: bool

    @property
    def rank(self) -> int:
        return self.gram.shape[0] - self.kernel_dim

    @property
    def iff_holds(self) -> bool:
        return self.faithful_state == self.injective


def _gns_from_gram(G: np.ndarray, left_mult: Sequence[np.ndarray], unit: np.ndarray) -> GNSResult:
    lam, V = _positive_part(G)
    W = np.sqrt(lam)[:, None] * V.conj().T  # Λ in coordinates: ⟨Wa, Wb⟩ = a† G b
    Winv = V / np.sqrt(lam)[None, :]
    rep = [W @ L @ Winv for L in left_mult]
    n = G.shape[0]
    if rep and rep[0].size:
        stacked = np.stack([r.reshape(-1) for r in rep], axis=1)
        sv = np.linalg.svd(stacked, compute_uv=False)
        injective = int(np.sum(sv > cc.ATOL * max(sv[0], 1.0))) == n
    else:
        injective = n == 0
    kernel = n - lam.size
    return GNSResult(G, kernel, rep, W @ unit, W, Winv, kernel == 0, injective)


def gns(omega: State) -> GNSResult:
    """GNS representation of the ground algebra of ``omega``.

    The representation space is ``B / N_ω`` with the Gram form; ``π(a)`` acts
    by left multiplication and the cyclic vector is the class of the unit.
    """
    B = omega.algebra
    G = gram_matrix(omega)
    return _gns_from_gram(G, [B.left_regular(e) for e in B.basis()], B.unit)


def gns_report(omega: State, res: GNSResult | None = None) -> ValidationReport:
    """Cyclic-vector identity ``⟨Ω, π(a)Ω⟩ = ω(a)`` and the representation property."""
    B = omega.algebra
    res = res or gns(omega)
    rep = ValidationReport("states_gns.gns", 1e-10)
    Om = res.cyclic_vector
    E = B.basis()
    rep.add("cyclic_identity", max((abs(np.vdot(Om, r @ Om) - omega(e)) for r, e in zip(res.representation, E)), default=0.0))
    worst = 0.0
    for a in range(B.dimension):
        for b in range(B.dimension):
            lhs = sum(c * r for c, r in zip(B.product(E[a], E[b]), res.representation))
            worst = max(worst, float(np.max(np.abs(lhs - res.representation[a] @ res.representation[b]), initial=0.0)))
    rep.add("homomorphism", worst)
    worst = 0.0
    for a in range(B.dimension):
        adj = sum(c * r for c, r in zip(B.adjoint(E[a]), res.representation))
        worst = max(worst, float(np.max(np.abs(adj - res.representation[a].conj().T), initial=0.0)))
    rep.add("star_representation", worst)
    rep.notes.update(
        gram_rank=res.rank, kernel_dim=res.kernel_dim, faithful_state=res.faithful_state,
        injective=res.injective, iff_holds=res.iff_holds,
    )
    return rep


# ---------------------------------------------------------------------------
# finite realization over N = ℂ^G
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class RealizationDatum:
    """Bimodules ``Φ(g) = ℓ²(G)`` over ``N = ℂ^G`` for a pointed category.

    ``shift[X][h]`` is the index of ``h·X``. The left action of ``n ∈ N`` on
    ``Φ(X)`` multiplies by ``n(h)``; the right action by ``n(h·X)``. The
    tensorator ``Φ(X) ⊗_N Φ(Y) → Φ(XY)`` sends ``δ_h ⊗ δ_{hX}`` to ``δ_h``.
    ``trace`` is the normalized counting measure on ``G``.
    """

    data: FusionData
    shift: list[np.ndarray]
    trace: np.ndarray

    @property
    def order(self) -> int:
        return self.trace.shape[0]

    def block_dim(self, X: int) -> int:
        return self.order

    def product_label(self, X: int, Y: int) -> int:
        return self.data.channels(X, Y)[0]

    def conj_matrix(self, X: int) -> np.ndarray:
        """Permutation ``δ_h ↦ δ_{hX}`` underlying the antiunitary ``Φ(X) → Φ(X̄)``."""
        P = np.zeros((self.order, self.order))
        P[self.shift[X], np.arange(self.order)] = 1.0
        return P

    def tensorator(self, X: int, Y: int) -> np.ndarray:
        """Matrix of ``Φ(X) ⊗ Φ(Y) → Φ(XY)`` on the algebraic tensor product."""
        g = self.order
        T = np.zeros((g, g * g))
        for h in range(g):
            T[h, h * g + self.shift[X][h]] = 1.0
        return T


def regular_realization(data: FusionData, tol: float = TOL) -> RealizationDatum:
    """The ``ℂ^G`` bimodule model of a symmetric pointed category with trivial associator."""
    if not data.is_pointed:
        raise RealizationError(f"{data.name or 'category'} is not pointed; no finite realization is shipped")
    for X in data.simples:
        for Y in data.simples:
            Z = data.channels(X, Y)[0]
            if abs(data.r_symbol(X, Y, Z) * data.r_symbol(Y, X, Z) - 1) > tol:
                raise RealizationError(
                    f"braiding is not symmetric on ({data.labels[X]}, {data.labels[Y]}); no finite realization is shipped"
                )
            for W in data.simples:
                ZW = data.channels(Z, W)[0]
                YW = data.channels(Y, W)[0]
                if abs(data.f_symbol(X, Y, W, ZW, Z, YW) - 1) > tol:
                    raise RealizationError(
                        f"nontrivial associator at ({data.labels[X]}, {data.labels[Y]}, {data.labels[W]})"
                    )
    g = data.rank
    shift = [np.array([data.channels(h, X)[0] for h in range(g)]) for X in range(g)]
    return RealizationDatum(data, shift, np.full(g, 1.0 / g))


def realization_report(Phi: RealizationDatum) -> ValidationReport:
    """Consistency of the bimodule model.

    ``Φ(X) ⊗_N Φ(Y)`` is computed as a coequalizer of the two ``N`` actions;
    its dimension must match ``Φ(XY)`` and the tensorator must induce an
    isomorphism from it.
    """
    rep = ValidationReport("states_gns.realization", TOL)
    g = Phi.order
    I = np.eye(g)
    worst_dim = 0
    worst_T = 0.0
    for X in Phi.data.simples:
        for Y in Phi.data.simples:
            # minimal projections p_k of N acting on the right of Φ(X) and the left of Φ(Y)
            cols = []
            for k in range(g):
                right = np.diag((Phi.shift[X] == k).astype(float))
                left = np.diag(I[k])
                cols.append(np.kron(right, I) - np.kron(I, left))
            D = np.hstack(cols)
            q = cc.cokernel_block(D)
            worst_dim = max(worst_dim, abs(q.shape[0] - Phi.block_dim(Phi.product_label(X, Y))))
            T = Phi.tensorator(X, Y)
            worst_T = max(worst_T, float(np.max(np.abs(T @ D))))
            # T factors through q as an isomorphism: rank of T restricted to the cokernel
            sv = np.linalg.svd(T @ q.conj().T, compute_uv=False)
            worst_T = max(worst_T, float(np.max(np.abs(sv - 1.0))) if sv.size else 0.0)
    rep.add("tensor_dimension", worst_dim)
    rep.add("tensorator", worst_T)
    inv = max(
        float(np.max(np.abs(Phi.conj_matrix(Phi.data.dual[X]) @ Phi.conj_matrix(X) - I)))
        for X in Phi.data.simples
    )
    rep.add("conjugation_involutive", inv)
    return rep


def _check_compatible(A: ia.AlgebraObject, Phi: RealizationDatum) -> None:
    if A.data is not Phi.data and A.data.content_hash() != Phi.data.content_hash():
        raise RealizationError("realization datum belongs to a different category")


@dataclass(eq=False)
class RealizedAlgebra:
    """``|A| = ⊕_X Φ(X) ⊗ A(X)`` with elements stored as flat vectors.

    The ``X`` block is a ``|G| × dim A(X)`` matrix ``x[h, a]``, the coefficient
    of ``δ_h ⊗ f_a``.
    """

    A: ia.AlgebraObject
    Phi: RealizationDatum
    offsets: dict[int, int] = field(init=False)
    dimension: int = field(init=False)

    def __post_init__(self):
        _check_compatible(self.A, self.Phi)
        off = 0
        self.offsets = {}
        for X in self.A.data.simples:
            self.offsets[X] = off
            off += self.Phi.block_dim(X) * self.A.dims[X]
        self.dimension = off

    def block(self, x: np.ndarray, X: int) -> np.ndarray:
        g, d = self.Phi.block_dim(X), self.A.dims[X]
        o = self.offsets[X]
        return x[o : o + g * d].reshape(g, d)

    def from_blocks(self, blocks: dict[int, np.ndarray]) -> np.ndarray:
        x = np.zeros(self.dimension, dtype=complex)
        for X, b in blocks.items():
            o = self.offsets[X]
            x[o : o + b.size] = b.reshape(-1)
        return x

    @property
    def unit(self) -> np.ndarray:
        u = self.A.data.unit
        return self.from_blocks({u: np.outer(np.ones(self.Phi.order), self.A.unit)})

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        A, Phi = self.A, self.Phi
        out: dict[int, np.ndarray] = {}
        for X in A.data.simples:
            if not A.dims[X]:
                continue
            bx = self.block(x, X)
            for Y in A.data.simples:
                if not A.dims[Y]:
                    continue
                Z = Phi.product_label(X, Y)
                if not A.dims[Z]:
                    continue
                by = self.block(y, Y)[Phi.shift[X]]  # row h pairs δ_h with δ_{hX}
                term = np.einsum("zab,ha,hb->hz", A.M(X, Y, Z), bx, by)
                out[Z] = out.get(Z, 0) + term
        return self.from_blocks(out)

    def adjoint(self, x: np.ndarray) -> np.ndarray:
        A, Phi = self.A, self.Phi
        out = {}
        for X in A.data.simples:
            if not A.dims[X]:
                continue
            Xb = A.data.dual[X]
            out[Xb] = Phi.conj_matrix(X) @ np.conj(self.block(x, X)) @ A.star[X].T
        return self.from_blocks(out)

    def left_regular(self, x: np.ndarray) -> np.ndarray:
        E = np.eye(self.dimension, dtype=complex)
        return np.stack([self.product(x, e) for e in E], axis=1)

    def base_element(self, n: np.ndarray) -> np.ndarray:
        """``n ⊗ 1_A`` for ``n ∈ N = ℂ^G``."""
        u = self.A.data.unit
        return self.from_blocks({u: np.outer(n, self.A.unit)})

    def expectation(self, x: np.ndarray, omega: State) -> np.ndarray:
        """``E(x) = (id_N ⊗ ω)(x_unit)`` as a function on ``G``."""
        return self.block(x, self.A.data.unit) @ omega.values

    def tau(self, x: np.ndarray, omega: State) -> complex:
        """``τ_ω = (τ_N ⊗ ω)`` on the unit summand."""
        return complex(self.Phi.trace @ self.expectation(x, omega))

    def random(self, rng: np.random.Generator) -> np.ndarray:
        return rng.normal(size=self.dimension) + 1j * rng.normal(size=self.dimension)


def realized_cstar_report(R: RealizedAlgebra, samples: int = 6, seed: int = 0) -> ValidationReport:
    """Associativity, unit and star laws of ``|A|`` on random elements."""
    rep = ValidationReport("states_gns.realized_algebra", TOL)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x, y, z = R.random(rng), R.random(rng), R.random(rng)
        rep.add("associativity", np.max(np.abs(R.product(R.product(x, y), z) - R.product(x, R.product(y, z))), initial=0))
        rep.add("unit", np.max(np.abs(R.product(R.unit, x) - x), initial=0))
        rep.add("unit", np.max(np.abs(R.product(x, R.unit) - x), initial=0))
        rep.add("star_involutive", np.max(np.abs(R.adjoint(R.adjoint(x)) - x), initial=0))
        rep.add(
            "star_antimultiplicative",
            np.max(np.abs(R.adjoint(R.product(x, y)) - R.product(R.adjoint(y), R.adjoint(x))), initial=0),
        )
    return rep


def fiber_gram(A: ia.AlgebraObject, omega: State, X: int) -> np.ndarray:
    """``K_X[a, b] = d_X ω((f_a† f_b)_unit)``: the Hilbert form on the ``X`` fiber."""
    u = A.data.unit
    Xb = A.data.dual[X]
    n = A.dims[X]
    E = np.eye(n, dtype=complex)
    K = np.empty((n, n), dtype=complex)
    for a in range(n):
        fa = A.apply_star(X, E[a])
        for b in range(n):
            K[a, b] = A.data.qdim[X] * omega(A.product(Xb, fa, X, E[b], u))
    return K


def weighted_inner_product(R: RealizedAlgebra, omega: State, x: np.ndarray, y: np.ndarray) -> complex:
    """``⟨Λ(x), Λ(y)⟩ = Σ_X d_X^{-1} ⟨ξ, η⟩_{Φ(X)} K_X(f, g)``.

    ``⟨ξ, η⟩_{Φ(X)}`` is the ``ℓ²`` pairing against the normalized trace.
    """
    total = 0j
    for X in R.A.data.simples:
        if not R.A.dims[X]:
            continue
        K = fiber_gram(R.A, omega, X)
        bx, by = R.block(x, X), R.block(y, X)
        total += np.einsum("h,ha,ab,hb->", R.Phi.trace, np.conj(bx), K, by) / R.A.data.qdim[X]
    return complex(total)


def weighted_inner_identity_check(
    A: ia.AlgebraObject, omega: State, Phi: RealizationDatum, samples: int = 100, seed: int = 0
) -> ValidationReport:
    """``τ_ω(y† x) = ⟨Λ(y), Λ(x)⟩`` on random pairs, plus linearity in ``ω``.

    The left side multiplies inside ``|A|``; the right side uses only the
    Hilbert forms of the summands.
    """
    R = RealizedAlgebra(A, Phi)
    rep = ValidationReport("states_gns.weighted_inner", TOL)
    rng = np.random.default_rng(seed)
    two = omega.scaled(2.0)
    worst = worst_scale = 0.0
    for _ in range(samples):
        x, y = R.random(rng), R.random(rng)
        lhs = R.tau(R.product(R.adjoint(y), x), omega)
        rhs = weighted_inner_product(R, omega, y, x)
        scale = max(1.0, abs(rhs))
        worst = max(worst, abs(lhs - rhs) / scale)
        lhs2 = R.tau(R.product(R.adjoint(y), x), two)
        rhs2 = weighted_inner_product(R, two, y, x)
        worst_scale = max(worst_scale, abs(lhs2 - 2 * lhs) / scale, abs(rhs2 - 2 * rhs) / scale)
    rep.add("inner_identity", worst)
    rep.add("scaling", worst_scale)
    rep.notes["samples"] = samples
    return rep


@dataclass(eq=False)
class Inclusion:
    """``N ⊂ |A|`` with the expectation ``E`` and the GNS data of ``τ_ω``."""

    realized: RealizedAlgebra
    omega: State
    gns: GNSResult
    base: np.ndarray  # columns n_k ⊗ 1 for the minimal projections of N
    report: ValidationReport

    def expectation(self, x: np.ndarray) -> np.ndarray:
        return self.realized.expectation(x, self.omega)


def realize_inclusion(
    A: ia.AlgebraObject, omega: State, Phi: RealizationDatum, samples: int = 24, seed: int = 0
) -> Inclusion:
    """Realize ``A`` over ``N`` and check the conditional expectation ``E``.

    Checks unitality, idempotence and bimodularity of ``E``, Kadison's
    inequality, and the Jones relation ``e π(x) e = π(E(x)) e`` in the GNS
    space of ``τ_ω``. Faithfulness of ``E`` (nullity of ``τ_ω`` on ``|A|``)
    is compared with faithfulness of ``ω`` (nullity of its ground Gram form).
    """
    ground_nullity = gns(omega).kernel_dim  # also rejects non-positive ω
    R = RealizedAlgebra(A, Phi)
    g = Phi.order
    E_basis = np.eye(R.dimension, dtype=complex)
    G = np.array([[R.tau(R.product(R.adjoint(a), b), omega) for b in E_basis] for a in E_basis])
    res = _gns_from_gram(G, [R.left_regular(e) for e in E_basis], R.unit)
    base = np.stack([R.base_element(np.eye(g)[k]) for k in range(g)], axis=1)

    rep = ValidationReport("states_gns.inclusion", TOL)
    rep.add("unital", np.max(np.abs(R.expectation(R.unit, omega) - 1)))
    rep.add("idempotent", np.max(np.abs(np.array([R.expectation(base[:, k], omega) for k in range(g)]) - np.eye(g))))
    rng = np.random.default_rng(seed)
    # Jones projection onto Λ(N) inside the GNS space
    WN = res.embed @ base
    Q, _ = np.linalg.qr(WN) if WN.size else (WN, None)
    e = Q @ Q.conj().T
    for _ in range(samples):
        x = R.random(rng)
        n1 = base @ (rng.normal(size=g) + 1j * rng.normal(size=g))
        n2 = base @ (rng.normal(size=g) + 1j * rng.normal(size=g))
        Ex = R.expectation(x, omega)
        Ex_full = R.base_element(Ex)
        rep.add("idempotent", np.max(np.abs(R.expectation(Ex_full, omega) - Ex)))
        lhs = R.expectation(R.product(R.product(n1, x), n2), omega)
        rhs = R.expectation(n1, omega) * Ex * R.expectation(n2, omega)
        rep.add("bimodular", np.max(np.abs(lhs - rhs)) / max(1.0, np.max(np.abs(rhs))))
        ExX = R.expectation(R.product(R.adjoint(x), x), omega)
        rep.add("positive", max(0.0, float(np.max(np.abs(ExX.imag)))) + max(0.0, -float(ExX.real.min())))
        kad = np.diag(ExX) - np.diag(np.conj(Ex) * Ex)
        rep.add("kadison", max(0.0, -float(np.linalg.eigvalsh((kad + kad.conj().T) / 2).min())))
        if res.representation and e.size:
            pix = res.embed @ R.left_regular(x) @ res.lift
            piE = res.embed @ R.left_regular(Ex_full) @ res.lift
            rep.add("jones_relation", np.max(np.abs(e @ pix @ e - piE @ e)))
    e_nullity = res.kernel_dim
    rep.notes.update(
        ground_nullity=ground_nullity,
        omega_faithful=ground_nullity == 0,
        realized_nullity=e_nullity,
        expectation_faithful=e_nullity == 0,
        iff_holds=(ground_nullity == 0) == (e_nullity == 0),
        realized_dimension=R.dimension,
    )
    return Inclusion(R, omega, res, base, rep)

