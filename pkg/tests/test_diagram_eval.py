from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfhom import diagram_eval as de
from surfhom import fusion_data as fd

from conftest import BUILTINS, category


def fusion_count(d: fd.FusionData, leaves, root) -> int:
    """Multiplicity of ``root`` in the ordered product of ``leaves`` by iterated fusion."""
    vec = np.zeros(d.rank, dtype=int)
    vec[leaves[0]] = 1
    for x in leaves[1:]:
        vec = vec @ d.fusion[:, x, :]
    return int(vec[root])


def test_tree_basis_trivial():
    d = fd.trivial()
    assert de.tree_basis(d, [0], 0).dim == 1


def test_tree_basis_fib_four_strands():
    d = fd.fibonacci()
    t = d.index("t")
    assert de.tree_basis(d, [t] * 4, d.unit).dim == 2
    assert fusion_count(d, [t] * 4, d.unit) == 2


def test_tree_basis_ising_pair():
    d = fd.ising()
    s, p = d.index("sigma"), d.index("psi")
    assert de.tree_basis(d, [s, s], p).dim == 1
    assert de.tree_basis(d, [s, s], s).dim == 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["fib", "ising", "pointed:3:1/3"]), st.lists(st.integers(0, 2), min_size=1, max_size=5))
def test_tree_dims_match_iterated_fusion(name, raw):
    d = category(name)
    leaves = [x % d.rank for x in raw]
    for root in d.simples:
        assert de.tree_basis(d, leaves, root).dim == fusion_count(d, leaves, root)


def test_empty_diagram_is_identity():
    d = fd.fibonacci()
    t = d.index("t")
    basis = de.tree_basis(d, [t, t, t], t)
    np.testing.assert_allclose(de.evaluate(d, de.Diagram((t, t, t)), basis), np.eye(basis.dim))


@pytest.mark.parametrize("name", BUILTINS + ("semion",))
def test_snake_identities(name):
    d = category(name)
    for x in d.simples:
        for diag in (de.snake_left(d, x), de.snake_right(d, x)):
            mats = de.evaluate_all(d, diag)
            for m in mats.values():
                np.testing.assert_allclose(m, np.eye(m.shape[0]), atol=1e-12)


def test_braid_then_inverse_is_identity():
    d = fd.fibonacci()
    t = d.index("t")
    diag = de.Diagram((t, t), (de.Braid(0, 1), de.Braid(0, -1)))
    for m in de.evaluate_all(d, diag).values():
        np.testing.assert_allclose(m, np.eye(m.shape[0]), atol=1e-10)


def test_diagram_inverse_method():
    d = fd.ising()
    s = d.index("sigma")
    diag = de.Diagram((s, s, s), (de.Braid(0), de.Braid(1, -1), de.Twist(2)))
    both = diag.then(diag.inverse(d))
    for m in de.evaluate_all(d, both).values():
        np.testing.assert_allclose(m, np.eye(m.shape[0]), atol=1e-10)


@pytest.mark.parametrize("name", ["fib", "ising", "semion", "pointed:3:1/3"])
def test_braid_relation(name):
    d = category(name)
    for leaves in itertools.product(d.simples, repeat=3):
        a = de.Diagram(leaves, (de.Braid(0), de.Braid(1), de.Braid(0)))
        b = de.Diagram(leaves, (de.Braid(1), de.Braid(0), de.Braid(1)))
        ma, mb = de.evaluate_all(d, a), de.evaluate_all(d, b)
        for root in ma:
            np.testing.assert_allclose(ma[root], mb[root], atol=1e-10)


@pytest.mark.parametrize("name", ["fib", "ising", "semion"])
def test_balancing_on_fused_pairs(name):
    # double braid followed by the leaf twists equals the twist of the channel
    d = category(name)
    for a, b in itertools.product(d.simples, repeat=2):
        diag = de.Diagram((a, b), (de.Braid(0), de.Braid(0), de.Twist(0), de.Twist(1)))
        for c, m in de.evaluate_all(d, diag).items():
            np.testing.assert_allclose(m, d.theta(c) * np.eye(m.shape[0]), atol=1e-10)


@pytest.mark.parametrize("name", BUILTINS + ("semion",))
def test_unknot_is_dimension(name):
    d = category(name)
    for x in d.simples:
        assert de.closed_evaluation(d, de.unknot(x)) == pytest.approx(d.qdim[x], abs=1e-12)
        assert de.closed_evaluation(d, de.unknot(x, twist=1)) == pytest.approx(d.theta(x) * d.qdim[x], abs=1e-12)


def test_golden_unknot():
    d = fd.fibonacci()
    assert de.closed_evaluation(d, de.unknot(d.index("t"))).real == pytest.approx(1.6180339887, abs=1e-9)
    assert de.closed_evaluation(d, de.unknot(d.unit)) == pytest.approx(1.0)


def test_closed_evaluation_needs_empty_boundary():
    d = fd.fibonacci()
    with pytest.raises(de.DiagramError):
        de.closed_evaluation(d, de.Diagram((1,)))


def test_evaluate_rejects_wrong_basis():
    d = fd.fibonacci()
    with pytest.raises(de.DiagramError):
        de.evaluate(d, de.Diagram((1, 1)), de.tree_basis(d, [1], 1))


@pytest.mark.parametrize("name", BUILTINS + ("semion",))
def test_vertex_conjugation_phases_are_unimodular(name):
    d = category(name)
    for i, j in itertools.product(d.simples, repeat=2):
        for k in d.channels(i, j):
            assert abs(de.vertex_conjugation_phase(d, i, j, k)) == pytest.approx(1.0, abs=1e-12)


def test_f_move_round_trip():
    d = fd.ising()
    s = d.index("sigma")
    # (σσ)_e σ -> σ(σσ)_f and back, on the root σ
    for e in d.channels(s, s):
        out = {}
        for f, c in de.to_pair(d, s, s, s, s, e):
            for e2, c2 in de.from_pair(d, s, s, s, s, f):
                out[e2] = out.get(e2, 0) + c * c2
        for e2, v in out.items():
            assert v == pytest.approx(1.0 if e2 == e else 0.0, abs=1e-12)
