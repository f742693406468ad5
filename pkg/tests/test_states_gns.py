from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfhom import fusion_data as fd
from surfhom import gluing_patterns as gp
from surfhom import internal_algebra as ia
from surfhom import states_gns as sg

from conftest import category, reflection


def complex_numbers():
    return sg.ground_algebra(ia.unit_algebra(fd.trivial()))


def m2():
    return sg.ground_algebra(ia.matrix_algebra(fd.trivial(), 2))


# ---------------------------------------------------------------------------
# ground algebras
# ---------------------------------------------------------------------------


def test_unit_algebra_is_complex_numbers():
    B = complex_numbers()
    assert B.dimension == 1
    np.testing.assert_allclose(B.product(np.ones(1), np.ones(1)), [1.0])


def test_ising_ground_algebra_commutative():
    B = sg.ground_algebra(reflection("ising"))
    assert B.dimension == 3
    assert B.labels == ["e_1", "e_psi", "e_sigma"]
    np.testing.assert_allclose(B.mult, B.mult.transpose(0, 2, 1), atol=1e-12)


def test_torus_over_z2_has_four_dimensional_ground():
    F = reflection("pointed:2:0")
    A = gp.build_a_p(gp.torus_pattern(), F.data, F=F)
    assert sg.ground_algebra(A).dimension == 4


def test_ground_algebra_needs_star():
    A = ia.unit_algebra(fd.trivial())
    A.star = None
    with pytest.raises(ia.AlgebraError):
        sg.ground_algebra(A)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["fib", "ising", "semion", "pointed:3:1/3"])
def test_named_states_are_states(name):
    F = reflection(name)
    B = sg.ground_algebra(F)
    for spec in ("counit", "coefficient", "trace"):
        omega = sg.state_from_spec(B, spec, F)
        assert sg.state_report(omega).passed, (spec, sg.state_report(omega).residuals)


def test_state_errors():
    B = m2()
    with pytest.raises(sg.StateError):
        sg.state_from_spec(B, "counit")
    with pytest.raises(sg.StateError):
        sg.state_from_spec(B, "vacuum")
    with pytest.raises(sg.StateError):
        sg.State(B, [1.0, 0.0])


def test_trace_on_m2():
    omega = sg.trace_state(m2())
    # e_{00} + e_{11} is the unit; each diagonal unit has trace 1/2
    np.testing.assert_allclose(omega.values, [0.5, 0, 0, 0.5], atol=1e-12)


def test_gram_matrix_is_hermitian_psd():
    omega = sg.counit_state(reflection("fib"))
    G = sg.gram_matrix(omega)
    np.testing.assert_allclose(G, G.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(G).min() > -1e-12


# ---------------------------------------------------------------------------
# GNS
# ---------------------------------------------------------------------------


def test_gns_of_complex_numbers():
    res = sg.gns(sg.State(complex_numbers(), [1.0]))
    assert res.rank == 1 and res.kernel_dim == 0
    assert res.faithful_state and res.injective and res.iff_holds


def test_gns_of_m2_trace():
    omega = sg.trace_state(m2())
    res = sg.gns(omega)
    assert res.rank == 4 and res.kernel_dim == 0
    assert res.faithful_state and res.injective and res.iff_holds
    assert sg.gns_report(omega, res).passed


def test_gns_of_m2_vector_state():
    # a pure state has a null space but its irreducible representation is faithful
    omega = sg.State(m2(), [1.0, 0, 0, 0], "vector")
    res = sg.gns(omega)
    assert res.kernel_dim == 2 and res.rank == 2
    assert res.injective
    assert not res.iff_holds
    assert sg.gns_report(omega, res).passed


def test_gns_of_ising_counit():
    omega = sg.counit_state(reflection("ising"))
    res = sg.gns(omega)
    assert res.rank == 1 and res.kernel_dim == 2
    assert not res.faithful_state and not res.injective and res.iff_holds
    rep = sg.gns_report(omega, res)
    assert rep.passed
    assert rep.notes["kernel_dim"] == 2


@pytest.mark.parametrize("name", ["fib", "ising", "semion"])
def test_coefficient_state_is_faithful(name):
    res = sg.gns(sg.coefficient_state(sg.ground_algebra(reflection(name))))
    assert res.kernel_dim == 0 and res.injective


def test_non_positive_functional_rejected():
    B = sg.ground_algebra(reflection("ising"))
    omega = sg.State(B, [1.0, -5.0, 0.0])
    assert not sg.state_report(omega).passed
    with pytest.raises(sg.StateError):
        sg.gns(omega)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["fib", "ising", "pointed:3:1/3"]), st.integers(0, 2**31), st.integers(1, 3))
def test_gns_of_random_positive_functionals(name, seed, terms):
    # ω(x) = Σ_k τ(c_k† x c_k) is positive; its GNS data must be a *-representation
    B = sg.ground_algebra(reflection(name))
    tau = sg.trace_state(B)
    rng = np.random.default_rng(seed)
    cs = [rng.normal(size=B.dimension) + 1j * rng.normal(size=B.dimension) for _ in range(terms)]
    vals = np.array([sum(tau(B.product(B.adjoint(c), B.product(e, c))) for c in cs) for e in B.basis()])
    omega = sg.State(B, vals / (vals @ B.unit))
    res = sg.gns(omega)
    assert sg.gns_report(omega, res).passed
    assert res.rank == np.linalg.matrix_rank(sg.gram_matrix(omega), tol=1e-9 * max(1, np.abs(res.gram).max()))


# ---------------------------------------------------------------------------
# realization
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["trivial", "pointed:2:0", "pointed:2:1/2", "pointed:3:0", "pointed:2x2:0,0;0,0"])
def test_regular_realization(name):
    Phi = sg.regular_realization(category(name))
    assert Phi.order == category(name).rank
    assert sg.realization_report(Phi).passed


@pytest.mark.parametrize("name", ["fib", "ising", "pointed:3:1/3", "semion"])
def test_no_realization_shipped(name):
    with pytest.raises(sg.RealizationError):
        sg.regular_realization(category(name))


@pytest.mark.parametrize("algebra", ["reflection", "group", "torus"])
def test_realized_algebra_is_cstar(algebra):
    d = category("pointed:2:0")
    F = reflection("pointed:2:0")
    A = {"reflection": F.algebra, "group": ia.group_algebra(d),
         "torus": gp.build_a_p(gp.torus_pattern(), d, F=F)}[algebra]
    R = sg.RealizedAlgebra(A, sg.regular_realization(d))
    assert sg.realized_cstar_report(R).passed


def test_unit_algebra_inner_identity_is_trace_pairing():
    d = fd.trivial()
    A = ia.unit_algebra(d)
    omega = sg.State(sg.ground_algebra(A), [1.0])
    R = sg.RealizedAlgebra(A, sg.regular_realization(d))
    rng = np.random.default_rng(3)
    x, y = R.random(rng), R.random(rng)
    assert R.tau(R.product(R.adjoint(y), x), omega) == pytest.approx(np.vdot(y, x))
    assert sg.weighted_inner_product(R, omega, y, x) == pytest.approx(np.vdot(y, x))


@pytest.mark.parametrize("state", ["counit", "coefficient", "trace"])
def test_weighted_inner_identity_on_z2(state):
    F = reflection("pointed:2:0")
    omega = sg.state_from_spec(sg.ground_algebra(F), state, F)
    rep = sg.weighted_inner_identity_check(F.algebra, omega, sg.regular_realization(F.data), samples=100)
    assert rep.passed, rep.residuals
    assert rep.residuals["scaling"] < 1e-12


def test_weighted_inner_identity_on_group_algebra():
    d = category("pointed:3:0")
    A = ia.group_algebra(d)
    omega = sg.State(sg.ground_algebra(A), [1.0])
    rep = sg.weighted_inner_identity_check(A, omega, sg.regular_realization(d), samples=50)
    assert rep.passed, rep.residuals


def test_inclusion_over_unit_algebra():
    d = fd.trivial()
    A = ia.unit_algebra(d)
    inc = sg.realize_inclusion(A, sg.State(sg.ground_algebra(A), [1.0]), sg.regular_realization(d))
    assert inc.report.passed
    assert inc.report.notes["expectation_faithful"]
    x = np.array([2.5 - 1j])
    np.testing.assert_allclose(inc.expectation(x), x)


def test_inclusion_with_counit_is_not_faithful():
    F = reflection("pointed:2:0")
    omega = sg.counit_state(F)
    inc = sg.realize_inclusion(F.algebra, omega, sg.regular_realization(F.data))
    assert inc.report.passed, inc.report.failures()
    notes = inc.report.notes
    assert notes["ground_nullity"] == 1
    assert notes["realized_nullity"] == 2
    assert not notes["expectation_faithful"]
    assert notes["iff_holds"]


@pytest.mark.parametrize("name", ["pointed:2:0", "pointed:2:1/2", "pointed:3:0"])
def test_inclusion_with_faithful_state(name):
    F = reflection(name)
    omega = sg.coefficient_state(sg.ground_algebra(F))
    inc = sg.realize_inclusion(F.algebra, omega, sg.regular_realization(F.data))
    assert inc.report.passed, inc.report.failures()
    assert inc.report.notes["expectation_faithful"]
    assert inc.report.notes["iff_holds"]


def test_inclusion_over_torus_algebra():
    d = category("pointed:2:0")
    F = reflection("pointed:2:0")
    A = gp.build_a_p(gp.torus_pattern(), d, F=F)
    omega = sg.trace_state(sg.ground_algebra(A))
    inc = sg.realize_inclusion(A, omega, sg.regular_realization(d))
    assert inc.report.passed, inc.report.failures()
    for key in ("unital", "idempotent", "bimodular", "kadison", "jones_relation"):
        assert key in inc.report.residuals


def test_fiber_gram_scales_with_dimension():
    F = reflection("fib")
    omega = sg.coefficient_state(sg.ground_algebra(F))
    K = sg.fiber_gram(F.algebra, omega, F.data.unit)
    np.testing.assert_allclose(K, K.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(K).min() > 0
