"""Finite semisimple C*-categories in skeletal form.

Objects are multiplicity vectors over the simple objects and morphisms are
block-diagonal: one complex matrix per simple in the common support of source
and target.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

ATOL = 1e-9
RTOL = 1e-9


class CompositionError(ValueError):
    """Raised when two morphisms cannot be composed."""


@dataclass(frozen=True)
class Obj:
    """Direct sum of simples, stored as sorted ``(label, multiplicity)`` pairs.

    Zero multiplicities are dropped, so the zero object is ``Obj()``.
    """

    items: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        clean = tuple(sorted((int(a), int(m)) for a, m in self.items if m))
        for a, m in clean:
            if a < 0 or m < 0:
                raise ValueError(f"invalid multiplicity entry ({a}, {m})")
        if len({a for a, _ in clean}) != len(clean):
            raise ValueError("repeated simple label in object")
        object.__setattr__(self, "items", clean)

    @classmethod
    def from_mult(cls, mult: Mapping[int, int] | Iterable[int]) -> Obj:
        if isinstance(mult, Mapping):
            return cls(tuple(mult.items()))
        return cls(tuple(enumerate(mult)))

    @classmethod
    def simple(cls, a: int, m: int = 1) -> Obj:
        return cls(((a, m),))

    def mult(self, a: int) -> int:
        for b, m in self.items:
            if b == a:
                return m
        return 0

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.items)

    @property
    def total_dim(self) -> int:
        return sum(m for _, m in self.items)

    def is_zero(self) -> bool:
        return not self.items

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def __repr__(self) -> str:
        return f"Obj({dict(self.items)})"


def zero_object() -> Obj:
    return Obj()


@dataclass(frozen=True, eq=False)
class Mor:
    """Morphism ``source -> target`` with one block per shared simple.

    The block for simple ``a`` has shape ``(target.mult(a), source.mult(a))``.
    """

    source: Obj
    target: Obj
    blocks: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        full = {}
        for a in set(self.source.support) & set(self.target.support):
            shape = (self.target.mult(a), self.source.mult(a))
            blk = self.blocks.get(a)
            if blk is None:
                blk = np.zeros(shape, dtype=complex)
            blk = np.asarray(blk, dtype=complex)
            if blk.shape != shape:
                raise ValueError(f"block for simple {a} has shape {blk.shape}, expected {shape}")
            full[a] = blk
        extra = set(self.blocks) - set(full)
        for a in extra:
            if np.any(np.asarray(self.blocks[a]) != 0):
                raise ValueError(f"nonzero block for simple {a} outside the common support")
        object.__setattr__(self, "blocks", full)

    def __add__(self, other: Mor) -> Mor:
        _check_parallel(self, other)
        return Mor(self.source, self.target, {a: self.blocks[a] + other.blocks[a] for a in self.blocks})

    def __sub__(self, other: Mor) -> Mor:
        _check_parallel(self, other)
        return Mor(self.source, self.target, {a: self.blocks[a] - other.blocks[a] for a in self.blocks})

    def __mul__(self, scalar: complex) -> Mor:
        return Mor(self.source, self.target, {a: scalar * b for a, b in self.blocks.items()})

    __rmul__ = __mul__

    def allclose(self, other: Mor, atol: float = ATOL) -> bool:
        if self.source != other.source or self.target != other.target:
            return False
        return all(np.allclose(self.blocks[a], other.blocks[a], atol=atol, rtol=0) for a in self.blocks)


def _check_parallel(f: Mor, g: Mor) -> None:
    if f.source != g.source or f.target != g.target:
        raise CompositionError("morphisms are not parallel")


def identity(x: Obj) -> Mor:
    return Mor(x, x, {a: np.eye(m, dtype=complex) for a, m in x.items})


def zero_mor(source: Obj, target: Obj) -> Mor:
    return Mor(source, target, {})


def compose(f: Mor, g: Mor) -> Mor:
    """Return ``f ∘ g`` (apply ``g`` first)."""
    if g.target != f.source:
        for a in set(g.target.support) | set(f.source.support):
            if g.target.mult(a) != f.source.mult(a):
                raise CompositionError(
                    f"cannot compose: at simple {a} the inner object has multiplicity "
                    f"{g.target.mult(a)} vs {f.source.mult(a)}"
                )
    blocks = {}
    for a in set(g.source.support) & set(f.target.support):
        if a in g.blocks and a in f.blocks:
            blocks[a] = f.blocks[a] @ g.blocks[a]
    return Mor(g.source, f.target, blocks)


def dagger(f: Mor) -> Mor:
    return Mor(f.target, f.source, {a: b.conj().T for a, b in f.blocks.items()})


def norm(f: Mor) -> float:
    """Operator norm: largest singular value over all blocks."""
    best = 0.0
    for b in f.blocks.values():
        if b.size:
            best = max(best, float(np.linalg.norm(b, 2)))
    return best


def direct_sum(x: Obj, y: Obj) -> tuple[Obj, Mor, Mor, Mor, Mor]:
    """``x ⊕ y`` with injections ``i1, i2`` and projections ``p1 = i1†, p2 = i2†``.

    The first summand occupies the leading indices of every block.
    """
    labels = set(x.support) | set(y.support)
    s = Obj(tuple((a, x.mult(a) + y.mult(a)) for a in labels))
    i1 = Mor(x, s, {a: np.eye(s.mult(a), x.mult(a)) for a in x.support})
    i2 = Mor(
        y,
        s,
        {a: np.eye(s.mult(a), y.mult(a), k=-x.mult(a)) for a in y.support},
    )
    return s, i1, i2, dagger(i1), dagger(i2)


def cokernel_block(d: np.ndarray) -> np.ndarray:
    """Rows spanning the left null space of ``d`` (a coisometry ``q`` with ``q d ≈ 0``).

    Singular values below ``1e-9 * max(s, 1 if all zero)`` count as zero.
    """
    t, s = d.shape
    if t == 0:
        return np.zeros((0, 0), dtype=complex)
    if s == 0:
        return np.eye(t, dtype=complex)
    u, sv, _ = np.linalg.svd(d, full_matrices=True)
    scale = sv[0] if sv.size and sv[0] > 0 else 1.0
    rank = int(np.sum(sv > ATOL * scale))
    return u[:, rank:].conj().T


def coequalizer(f: Mor, g: Mor) -> tuple[Obj, Mor]:
    """Cokernel ``Q`` of ``f - g`` together with the coisometry ``q: target -> Q``."""
    _check_parallel(f, g)
    qblocks = {}
    mult = {}
    for a, m in f.target.items:
        if a in f.blocks:
            qa = cokernel_block(f.blocks[a] - g.blocks[a])
        else:
            qa = np.eye(m, dtype=complex)
        mult[a] = qa.shape[0]
        qblocks[a] = qa
    qobj = Obj.from_mult(mult)
    return qobj, Mor(f.target, qobj, {a: b for a, b in qblocks.items() if b.shape[0]})


def random_mor(source: Obj, target: Obj, rng: np.random.Generator) -> Mor:
    blocks = {}
    for a in set(source.support) & set(target.support):
        shape = (target.mult(a), source.mult(a))
        blocks[a] = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return Mor(source, target, blocks)
