"""Skeletal data of unitary braided fusion categories.

Conventions
-----------
Simples are indexed ``0..n-1``. Fusion trees are left-canonical and vertices
are isometries, so the F-move reads::

    |(a b)_e c; d> = sum_f F[a,b,c,d,e,f] |a (b c)_f; d>

and the braiding ``σ_{a,b}: a⊗b -> b⊗a`` acts on a vertex as
``σ |a b; c> = R[a,b,c] |b a; c>``. F-matrices with a unit label among
``a, b, c`` are identities. Category documents must be written in this
convention.
"""

from __future__ import annotations

import cmath
import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .reports import ValidationReport

VERIFY_TOL = 1e-8
CROSSCHECK_TOL = 1e-6


class CategoryError(ValueError):
    """Invalid category description."""


class UnsupportedMultiplicity(NotImplementedError):
    """F/R data was requested for a fusion channel with multiplicity > 1."""


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class FusionData:
    labels: tuple[str, ...]
    unit: int
    dual: tuple[int, ...]
    fusion: np.ndarray
    f_symbols: Mapping[tuple[int, ...], complex]
    r_symbols: Mapping[tuple[int, int, int], complex]
    qdim: np.ndarray
    twist: np.ndarray | None
    name: str = ""

    # -- basic queries -------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def simples(self) -> range:
        return range(len(self.labels))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise CategoryError(f"unknown simple label {label!r}") from None

    def N(self, a: int, b: int, c: int) -> int:
        return int(self.fusion[a, b, c])

    def channels(self, a: int, b: int) -> list[int]:
        return [int(c) for c in np.nonzero(self.fusion[a, b])[0]]

    @property
    def multiplicity_free(self) -> bool:
        return bool(np.all(self.fusion <= 1))

    @property
    def is_pointed(self) -> bool:
        return bool(np.all(np.abs(self.qdim - 1.0) < 1e-12))

    @property
    def global_dim(self) -> float:
        return float(np.sum(self.qdim**2))

    def _require_mult_free(self) -> None:
        if not self.multiplicity_free:
            raise UnsupportedMultiplicity(
                f"category {self.name or '?'} has fusion multiplicities > 1; F/R evaluation is unsupported"
            )

    def f_symbol(self, a: int, b: int, c: int, d: int, e: int, f: int) -> complex:
        """``F[a,b,c,d,e,f]``; zero for inadmissible label tuples."""
        self._require_mult_free()
        return self.f_symbols.get((a, b, c, d, e, f), 0.0)

    def r_symbol(self, a: int, b: int, c: int) -> complex:
        self._require_mult_free()
        return self.r_symbols.get((a, b, c), 0.0)

    def f_matrix(self, a: int, b: int, c: int, d: int) -> tuple[list[int], list[int], np.ndarray]:
        """F-matrix for fixed outer labels; rows are (ab)-channels, columns (bc)-channels."""
        es = [e for e in self.channels(a, b) if self.N(e, c, d)]
        fs = [f for f in self.channels(b, c) if self.N(a, f, d)]
        mat = np.array([[self.f_symbol(a, b, c, d, e, f) for f in fs] for e in es], dtype=complex)
        return es, fs, mat.reshape(len(es), len(fs))

    def theta(self, a: int) -> complex:
        if self.twist is None:
            raise UnsupportedMultiplicity("twists are unavailable for this category")
        return complex(self.twist[a])

    # -- serialization --------------------------------------------------
    def to_document(self) -> dict:
        lab = self.labels
        doc = {
            "simples": list(lab),
            "unit": lab[self.unit],
            "dual": {lab[a]: lab[self.dual[a]] for a in self.simples},
            "fusion": [
                [lab[a], lab[b], lab[c], int(self.fusion[a, b, c])]
                for a, b, c in itertools.product(self.simples, repeat=3)
                if self.fusion[a, b, c]
            ],
            "F": [
                [*(lab[i] for i in key), _r(v.real), _r(v.imag)]
                for key, v in sorted(self.f_symbols.items())
            ],
            "R": [[*(lab[i] for i in key), _r(v.real), _r(v.imag)] for key, v in sorted(self.r_symbols.items())],
            "qdim": {lab[a]: _r(self.qdim[a]) for a in self.simples},
        }
        if self.twist is not None:
            doc["twist"] = {lab[a]: [_r(self.twist[a].real), _r(self.twist[a].imag)] for a in self.simples}
        return doc

    def content_hash(self) -> str:
        # coarser than the document precision: values re-derived from a
        # loaded document may move in the twelfth digit
        doc = json.loads(json.dumps(self.to_document()), parse_float=lambda t: float(f"{float(t):.9g}"))
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def __repr__(self) -> str:
        return f"FusionData({self.name or 'unnamed'}, simples={list(self.labels)})"


def _r(x: float) -> float:
    # 12 significant digits keeps serialized documents stable across platforms
    return float(f"{float(x):.12g}")


# ---------------------------------------------------------------------------
# derived data
# ---------------------------------------------------------------------------


def derive_qdims(fusion: np.ndarray, unit: int = 0, max_iter: int = 100_000, tol: float = 1e-15) -> np.ndarray:
    """Perron-Frobenius dimensions from the fusion tensor.

    The common PF eigenvector of all fusion matrices is found by power
    iteration on ``sum_a N_a``, which is primitive because ``N_unit = 1``.
    ``d_a`` is then the eigenvalue of ``N_a`` on that vector.
    """
    n = fusion.shape[0]
    mats = [fusion[a].astype(float) for a in range(n)]
    total = sum(mats)
    v = np.ones(n)
    for _ in range(max_iter):
        w = total @ v
        w /= np.linalg.norm(w)
        if np.linalg.norm(w - v) < tol:
            v = w
            break
        v = w
    else:
        raise ConvergenceError("Perron-Frobenius iteration did not converge")
    # N_a v = d_a v; the unit component of N_a v is v_a, so d = v / v_unit
    return v / v[unit]


def derive_twists(data: FusionData) -> np.ndarray:
    """``θ_a = Σ_c (d_c / d_a) N[a][a][c] R[a,a,c]``."""
    for a in data.simples:
        for c in data.channels(a, a):
            if data.N(a, a, c) > 1:
                raise UnsupportedMultiplicity(f"N[{data.labels[a]}][{data.labels[a]}][{data.labels[c]}] > 1")
    out = np.zeros(data.rank, dtype=complex)
    for a in data.simples:
        acc = 0j
        for c in data.channels(a, a):
            acc +=data.qdim[c] / data.qdim[a] * data.r_symbols[(a, a, c)]
        out[a] = acc
    return out


# ---------------------------------------------------------------------------
# coherence checks
# ---------------------------------------------------------------------------


def pentagon_residual(data: FusionData) -> float:
    F = data.f_symbol
    ch = data.channels
    worst = 0.0
    for a, b, c, d in itertools.product(data.simples, repeat=4):
        for f in ch(a, b):
            for g in ch(f, c):
                for e in ch(g, d):
                    for l in ch(c, d):
                        for k in ch(b, l):
                            if not data.N(a, k, e):
                                continue
                            lhs = F(f, c, d, e, g, l) * F(a, b, l, e, f, k)
                            rhs = sum(
                                F(a, b, c, g, f, h) * F(a, h, d, e, g, k) * F(b, c, d, k, h, l)
                                for h in ch(b, c)
                            )
                            worst = max(worst, abs(lhs - rhs))
    return worst


def hexagon_residuals(data: FusionData) -> tuple[float, float]:
    """Residuals of ``σ_{a,b⊗c}`` and ``σ_{a⊗b,c}`` against their braid expansions.

    The inverse-braiding hexagons follow from these two and unitarity.
    """
    F = data.f_symbol
    R = data.r_symbol
    ch = data.channels
    w1 = w2 = 0.0
    for a, b, c, d in itertools.product(data.simples, repeat=4):
        # σ_{a, b⊗c} on |a (bc)_f; d>, expressed on |(bc)_h a; d>
        fs = [f for f in ch(b, c) if data.N(a, f, d)]
        for f in fs:
            for h in fs:
                val = 0j
                for e in ch(a, b):
                    if not data.N(e, c, d):
                        continue
                    for g in ch(a, c):
                        if not data.N(b, g, d):
                            continue
                        val += np.conj(F(a, b, c, d, e, f)) * R(a, b, e) * F(b, a, c, d, e, g) * R(a, c, g) * np.conj(
                            F(b, c, a, d, h, g)
                        )
                target = R(a, f, d) if h == f else 0.0
                w1 = max(w1, abs(val - target))
        # σ_{a⊗b, c} on |(ab)_e c; d>, expressed on |c (ab)_h; d>
        es = [e for e in ch(a, b) if data.N(e, c, d)]
        for e in es:
            for h in es:
                val = 0j
                for f in ch(b, c):
                    if not data.N(a, f, d):
                        continue
                    for g in ch(a, c):
                        if not data.N(g, b, d):
                            continue
                        val += F(a, b, c, d, e, f) * R(b, c, f) * np.conj(F(a, c, b, d, g, f)) * R(a, c, g) * F(
                            c, a, b, d, g, h
                        )
                target = R(e, c, d) if h == e else 0.0
                w2 = max(w2, abs(val - target))
    return w1, w2


def f_unitarity_residual(data: FusionData) -> float:
    worst = 0.0
    for a, b, c, d in itertools.product(data.simples, repeat=4):
        es, fs, mat = data.f_matrix(a, b, c, d)
        if not es and not fs:
            continue
        if len(es) != len(fs):
            return float("inf")
        worst = max(worst, float(np.max(np.abs(mat @ mat.conj().T - np.eye(len(es))))))
    return worst


def verify(data: FusionData, tol: float = VERIFY_TOL) -> ValidationReport:
    """Pentagon, hexagons, unitarity and ribbon residuals of the category."""
    rep = ValidationReport("fusion_data.verify", tol)
    rep.notes["category"] = data.name
    rep.notes["simples"] = list(data.labels)
    rep.add("fusion_associativity", fusion_associativity_residual(data.fusion))
    d = data.qdim
    rep.add(
        "dimension_homomorphism",
        max(
            abs(d[a] * d[b] - sum(data.N(a, b, c) * d[c] for c in data.simples))
            for a in data.simples
            for b in data.simples
        ),
    )
    if not data.multiplicity_free:
        rep.notes["multiplicity_free"] = False
        return rep
    rep.add("pentagon", pentagon_residual(data))
    h1, h2 = hexagon_residuals(data)
    rep.add("hexagon_1", h1)
    rep.add("hexagon_2", h2)
    rep.add("f_unitarity", f_unitarity_residual(data))
    rep.add("r_unitarity", max((abs(abs(v) - 1) for v in data.r_symbols.values()), default=0.0))
    th = data.twist
    rep.add("twist_modulus", float(np.max(np.abs(np.abs(th) - 1))))
    rep.add("ribbon_dual", max(abs(th[data.dual[a]] - th[a]) for a in data.simples))
    # balancing: R[a,b,c] R[b,a,c] = θ_c / (θ_a θ_b)
    worst = 0.0
    for a, b in itertools.product(data.simples, repeat=2):
        for c in data.channels(a, b):
            worst = max(worst, abs(data.r_symbol(a, b, c) * data.r_symbol(b, a, c) - th[c] / (th[a] * th[b])))
    rep.add("balancing", worst)
    return rep


def fusion_associativity_residual(N: np.ndarray) -> float:
    lhs = np.einsum("abe,ecd->abcd", N, N)
    rhs = np.einsum("bcf,afd->abcd", N, N)
    return float(np.max(np.abs(lhs - rhs)))


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------


def load(document: Mapping[str, Any] | str | Path, name: str = "") -> FusionData:
    """Build :class:`FusionData` from a category document.

    ``document`` may be a mapping, a JSON string, or a path to a JSON file.
    A document carrying ``group`` and ``bichar`` is handed to :func:`pointed`.

    Missing F-symbols default to the identity convention when a unit label
    is involved, and to ``1`` for other F-matrices of size 1. Missing entries
    of larger F-matrices, and missing R-symbols away from the unit, are errors.
    """
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        path = Path(document)
        name = name or path.stem
        document = json.loads(path.read_text(encoding="utf-8"))
    elif isinstance(document, str):
        document = json.loads(document)
    if not isinstance(document, Mapping):
        raise CategoryError("category document must be a JSON object")
    if "group" in document:
        return pointed(document["group"], document.get("bichar", 0), name=name)
    for key in ("simples", "unit", "dual", "fusion"):
        if key not in document:
            raise CategoryError(f"category document is missing field {key!r}")

    labels = document["simples"]
    if not isinstance(labels, list) or not labels or not all(isinstance(s, str) for s in labels):
        raise CategoryError("'simples' must be a nonempty array of strings")
    if len(set(labels)) != len(labels):
        raise CategoryError("'simples' contains repeated labels")
    labels = tuple(labels)
    n = len(labels)
    idx = {s: i for i, s in enumerate(labels)}

    def lookup(lbl, where):
        if lbl not in idx:
            raise CategoryError(f"unknown label {lbl!r} in {where}")
        return idx[lbl]

    unit = lookup(document["unit"], "'unit'")
    dual_doc = document["dual"]
    if not isinstance(dual_doc, Mapping):
        raise CategoryError("'dual' must map labels to labels")
    for s in labels:
        if s not in dual_doc:
            raise CategoryError(f"'dual' has no entry for {s!r}")
    dual = tuple(lookup(dual_doc[s], f"dual({s})") for s in labels)
    for a in range(n):
        if dual[dual[a]] != a:
            raise CategoryError(f"dual map is not an involution at {labels[a]!r}")
    if dual[unit] != unit:
        raise CategoryError("dual(unit) must be the unit")

    N = np.zeros((n, n, n), dtype=int)
    for entry in document["fusion"]:
        if len(entry) != 4:
            raise CategoryError(f"fusion entry {entry!r} must be [a, b, c, multiplicity]")
        a, b, c = (lookup(x, "fusion") for x in entry[:3])
        m = entry[3]
        if not isinstance(m, int) or m < 0:
            raise CategoryError(f"fusion multiplicity for {entry[:3]} must be a non-negative integer")
        N[a, b, c] = m
    _validate_fusion(N, unit, dual, labels)

    mult_free = bool(np.all(N <= 1))
    F: dict[tuple[int, ...], complex] = {}
    R: dict[tuple[int, int, int], complex] = {}
    if mult_free:
        for entry in document.get("F", []):
            if len(entry) != 8:
                raise CategoryError(f"F entry {entry!r} must be [a,b,c,d,e,f,re,im]")
            key = tuple(lookup(x, "F") for x in entry[:6])
            a, b, c, d, e, f = key
            if not (N[a, b, e] and N[e, c, d] and N[b, c, f] and N[a, f, d]):
                raise CategoryError(f"F entry for inadmissible labels {entry[:6]}")
            F[key] = complex(entry[6], entry[7])
        _complete_f(F, N, unit, labels)
        for entry in document.get("R", []):
            if len(entry) != 5:
                raise CategoryError(f"R entry {entry!r} must be [a,b,c,re,im]")
            key = tuple(lookup(x, "R") for x in entry[:3])
            if not N[key]:
                raise CategoryError(f"R entry for inadmissible labels {entry[:3]}")
            R[key] = complex(entry[3], entry[4])
        _complete_r(R, N, unit, labels)

    qdim = derive_qdims(N, unit)
    if "qdim" in document:
        for s, v in document["qdim"].items():
            a = lookup(s, "qdim")
            if abs(float(v) - qdim[a]) > CROSSCHECK_TOL:
                raise CategoryError(f"qdim of {s!r} is {v}, but the fusion rules give {qdim[a]:.12g}")
    for a in range(n):
        if abs(qdim[a] - qdim[dual[a]]) > CROSSCHECK_TOL or qdim[a] < 1 - CROSSCHECK_TOL:
            raise CategoryError(f"inconsistent dimension for {labels[a]!r}")

    data = FusionData(labels, unit, dual, N, F, R, qdim, None, name)
    twist = None
    if mult_free:
        twist = derive_twists(data)
    if "twist" in document:
        given = np.zeros(n, dtype=complex)
        for s, v in document["twist"].items():
            given[lookup(s, "twist")] = complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
        if twist is None:
            twist = given
        else:
            for a in range(n):
                if abs(given[a] - twist[a]) > CROSSCHECK_TOL:
                    raise CategoryError(
                        f"twist of {labels[a]!r} is {given[a]}, but the R-symbols give {twist[a]:.9g}"
                    )
    return FusionData(labels, unit, dual, N, F, R, qdim, twist, name)


def _validate_fusion(N, unit, dual, labels) -> None:
    n = len(labels)
    for a in range(n):
        for c in range(n):
            want = int(a == c)
            if N[a, unit, c] != want or N[unit, a, c] != want:
                raise CategoryError(f"fusion with the unit is not trivial at {labels[a]!r}, {labels[c]!r}")
        for b in range(n):
            if N[a, b, unit] != int(b == dual[a]):
                raise CategoryError(
                    f"rigidity fails: N[{labels[a]}][{labels[b]}][unit] = {N[a, b, unit]}"
                )
    if fusion_associativity_residual(N) != 0:
        raise CategoryError("fusion rules are not associative")


def _complete_f(F, N, unit, labels) -> None:
    n = len(labels)
    for a, b, c, d in itertools.product(range(n), repeat=4):
        es = [e for e in range(n) if N[a, b, e] and N[e, c, d]]
        fs = [f for f in range(n) if N[b, c, f] and N[a, f, d]]
        if not es:
            continue
        if unit in (a, b, c):
            # with a unit label both channel sets are singletons
            key = (a, b, c, d, es[0], fs[0])
            got = F.get(key)
            if got is not None and abs(got - 1) > CROSSCHECK_TOL:
                raise CategoryError(
                    f"F-symbol {[labels[x] for x in key]} must be 1 (unit-label F-matrices are identities)"
                )
            F[key] = 1.0 + 0j
        elif len(es) == 1 and len(fs) == 1:
            F.setdefault((a, b, c, d, es[0], fs[0]), 1.0 + 0j)
        else:
            for e in es:
                for f in fs:
                    if (a, b, c, d, e, f) not in F:
                        raise CategoryError(
                            f"missing F-symbol {[labels[x] for x in (a, b, c, d, e, f)]}"
                        )


def _complete_r(R, N, unit, labels) -> None:
    n = len(labels)
    for a, b in itertools.product(range(n), repeat=2):
        for c in range(n):
            if not N[a, b, c]:
                continue
            if unit in (a, b):
                got = R.get((a, b, c))
                if got is not None and abs(got - 1) > CROSSCHECK_TOL:
                    raise CategoryError(f"R-symbol with a unit label must be 1 at {labels[a]}, {labels[b]}")
                R[(a, b, c)] = 1.0 + 0j
            elif (a, b, c) not in R:
                raise CategoryError(f"missing R-symbol {[labels[a], labels[b], labels[c]]}")


# ---------------------------------------------------------------------------
# builtin fixtures
# ---------------------------------------------------------------------------

_PHI = (1 + math.sqrt(5)) / 2


def trivial() -> FusionData:
    return load({"simples": ["1"], "unit": "1", "dual": {"1": "1"}, "fusion": [["1", "1", "1", 1]]}, name="trivial")


def fibonacci() -> FusionData:
    p = _PHI
    doc = {
        "simples": ["1", "t"],
        "unit": "1",
        "dual": {"1": "1", "t": "t"},
        "fusion": [["1", "1", "1", 1], ["1", "t", "t", 1], ["t", "1", "t", 1], ["t", "t", "1", 1], ["t", "t", "t", 1]],
        "F": [
            ["t", "t", "t", "t", "1", "1", 1 / p, 0],
            ["t", "t", "t", "t", "1", "t", p**-0.5, 0],
            ["t", "t", "t", "t", "t", "1", p**-0.5, 0],
            ["t", "t", "t", "t", "t", "t", -1 / p, 0],
        ],
        "R": [
            ["t", "t", "1", *_c(cmath.exp(-4j * math.pi / 5))],
            ["t", "t", "t", *_c(cmath.exp(3j * math.pi / 5))],
        ],
    }
    return load(doc, name="fib")


def ising() -> FusionData:
    s = 1 / math.sqrt(2)
    doc = {
        "simples": ["1", "psi", "sigma"],
        "unit": "1",
        "dual": {"1": "1", "psi": "psi", "sigma": "sigma"},
        "fusion": [
            ["1", "1", "1", 1],
            ["1", "psi", "psi", 1],
            ["psi", "1", "psi", 1],
            ["1", "sigma", "sigma", 1],
            ["sigma", "1", "sigma", 1],
            ["psi", "psi", "1", 1],
            ["psi", "sigma", "sigma", 1],
            ["sigma", "psi", "sigma", 1],
            ["sigma", "sigma", "1", 1],
            ["sigma", "sigma", "psi", 1],
        ],
        "F": [
            ["sigma", "sigma", "sigma", "sigma", "1", "1", s, 0],
            ["sigma", "sigma", "sigma", "sigma", "1", "psi", s, 0],
            ["sigma", "sigma", "sigma", "sigma", "psi", "1", s, 0],
            ["sigma", "sigma", "sigma", "sigma", "psi", "psi", -s, 0],
            ["psi", "sigma", "psi", "sigma", "sigma", "sigma", -1, 0],
            ["sigma", "psi", "sigma", "psi", "sigma", "sigma", -1, 0],
        ],
        "R": [
            ["sigma", "sigma", "1", *_c(cmath.exp(-1j * math.pi / 8))],
            ["sigma", "sigma", "psi", *_c(cmath.exp(3j * math.pi / 8))],
            ["sigma", "psi", "sigma", 0, -1],
            ["psi", "sigma", "sigma", 0, -1],
            ["psi", "psi", "1", -1, 0],
        ],
    }
    return load(doc, name="ising")


def _c(z: complex) -> list[float]:
    return [z.real, z.imag]


def _parse_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x).limit_denominator(10**6)


def pointed(group: Sequence[int], bichar: Any = 0, name: str = "") -> FusionData:
    """Pointed braided category over ``Z/n_1 × ... × Z/n_r``.

    The associator is trivial and ``c_{g,h} = exp(2πi Σ_jk q_jk g_j h_k)``
    where ``q = bichar`` is an ``r × r`` matrix of rational phases (a scalar
    is accepted when ``r = 1``).
    """
    orders = [int(n) for n in group]
    if not orders or any(n < 1 for n in orders):
        raise CategoryError("group must be a nonempty list of positive cyclic orders")
    r = len(orders)
    q = bichar
    if not isinstance(q, (list, tuple)):
        q = [[q]]
    q = [[_parse_fraction(x) for x in row] for row in q]
    if len(q) != r or any(len(row) != r for row in q):
        raise CategoryError(f"bichar must be a {r}x{r} matrix")
    for j in range(r):
        for k in range(r):
            if (q[j][k] * orders[j]).denominator != 1 or (q[j][k] * orders[k]).denominator != 1:
                raise CategoryError(f"bichar entry q[{j}][{k}] = {q[j][k]} is not well defined on the group")
    elems = list(itertools.product(*(range(n) for n in orders)))
    idx = {g: i for i, g in enumerate(elems)}
    labels = [",".join(map(str, g)) for g in elems]

    def mul(g, h):
        return tuple((x + y) % n for x, y, n in zip(g, h, orders))

    def inv(g):
        return tuple((-x) % n for x, n in zip(g, orders))

    def beta(g, h):
        ph = sum(q[j][k] * g[j] * h[k] for j in range(r) for k in range(r)) % 1
        return cmath.exp(2j * math.pi * float(ph))

    doc = {
        "simples": labels,
        "unit": labels[0],
        "dual": {labels[idx[g]]: labels[idx[inv(g)]] for g in elems},
        "fusion": [[labels[idx[g]], labels[idx[h]], labels[idx[mul(g, h)]], 1] for g in elems for h in elems],
        "R": [[labels[idx[g]], labels[idx[h]], labels[idx[mul(g, h)]], *_c(beta(g, h))] for g in elems for h in elems],
    }
    if not name:
        qs = ";".join(",".join(str(x) for x in row) for row in q)
        name = f"pointed:{'x'.join(map(str, orders))}:{qs}"
    return load(doc, name=name)


def is_symmetric(data: FusionData, tol: float = 1e-12) -> bool:
    """True when every double braiding is trivial."""
    for a, b in itertools.product(data.simples, repeat=2):
        for c in data.channels(a, b):
            if abs(data.r_symbol(a, b, c) * data.r_symbol(b, a, c) - 1) > tol:
                return False
    return True


def builtin(name: str) -> FusionData:
    """``trivial``, ``fib``, ``ising`` or ``pointed:<orders>:<bichar>``.

    Orders are joined by ``x`` (``2x2``); bichar rows are separated by ``;``
    and entries by ``,`` (``0,1/2;0,0``).
    """
    if name == "trivial":
        return trivial()
    if name in ("fib", "fibonacci"):
        return fibonacci()
    if name == "ising":
        return ising()
    if name.startswith("pointed:"):
        parts = name.split(":")
        if len(parts) not in (2, 3):
            raise CategoryError(f"malformed pointed builtin {name!r}")
        try:
            orders = [int(x) for x in parts[1].split("x")]
            qtext = parts[2] if len(parts) == 3 else "0"
            rows = [[Fraction(x) for x in row.split(",")] for row in qtext.split(";")]
        except ValueError as exc:
            raise CategoryError(f"malformed pointed builtin {name!r}: {exc}") from None
        if len(rows) == 1 and len(rows[0]) == 1 and len(orders) > 1 and rows[0][0] == 0:
            rows = [[Fraction(0)] * len(orders) for _ in orders]
        return pointed(orders, rows, name=name)
    raise CategoryError(f"unknown builtin category {name!r}")
