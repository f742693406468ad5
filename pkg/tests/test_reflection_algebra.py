from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfhom import fusion_data as fd
from surfhom import internal_algebra as ia
from surfhom import reflection_algebra as ra

from conftest import BUILTINS, category, reflection

ALL = BUILTINS + ("semion",)
GOLDEN = (1 + math.sqrt(5)) / 2


def fiber_oracle(d: fd.FusionData) -> tuple[int, ...]:
    return tuple(int(sum(d.fusion[d.dual[X], X, U] for X in d.simples)) for U in d.simples)


@pytest.mark.parametrize("name", ALL)
def test_fiber_dims(name):
    d = category(name)
    F = reflection(name)
    assert F.algebra.dims == fiber_oracle(d)
    assert F.algebra.dims[d.unit] == d.rank


@pytest.mark.parametrize(
    "name,dims", [("trivial", (1,)), ("fib", (2, 1)), ("ising", (3, 1, 0)), ("pointed:3:1/3", (3, 0, 0))]
)
def test_fiber_dims_frozen(name, dims):
    assert reflection(name).algebra.dims == dims


@pytest.mark.parametrize("name", ALL)
def test_reflection_algebra_checks(name):
    rep = ra.check_reflection_algebra(reflection(name))
    assert rep.passed, rep.failures()


@pytest.mark.parametrize("name", ALL)
def test_unit_is_r_of_unit(name):
    F = reflection(name)
    np.testing.assert_allclose(F.algebra.unit, F.r_vector(F.data.unit))


@pytest.mark.parametrize("name", ["fib", "ising", "semion"])
def test_unit_law_in_ground_table(name):
    F = reflection(name)
    T = ra.ground_multiplication_table(F)
    n = len(F.ground_basis)
    np.testing.assert_allclose(T[0], np.eye(n), atol=1e-12)
    np.testing.assert_allclose(T[:, 0, :], np.eye(n), atol=1e-12)


@pytest.mark.parametrize("name", ["fib", "ising", "pointed:3:1/3", "semion"])
def test_ground_table_is_normalized_fusion_ring(name):
    # R_X R_Y = Σ_Z N[X][Y][Z] d_Z / (d_X d_Y) R_Z
    d = category(name)
    F = reflection(name)
    T = ra.ground_multiplication_table(F)
    gb = F.ground_basis
    q = d.qdim
    expected = np.array([[[d.N(X, Y, Z) * q[Z] / (q[X] * q[Y]) for Z in gb] for Y in gb] for X in gb])
    np.testing.assert_allclose(np.abs(T), expected, atol=1e-10)


def test_fib_product_values():
    F = reflection("fib")
    T = ra.ground_multiplication_table(F)
    assert T[1, 1, 0] == pytest.approx(1 / GOLDEN**2, abs=1e-12)
    assert T[1, 1, 1] == pytest.approx(1 / GOLDEN, abs=1e-12)


def test_fib_schedule_oracle():
    d = category("fib")
    a = ra.ground_table_from_schedule(d, "fuse-first")
    b = ra.ground_table_from_schedule(d, "cup-first")
    np.testing.assert_allclose(a, b, atol=1e-8)
    other = ra.build_reflection_algebra(d, schedule="cup-first")
    for key, m in reflection("fib").algebra.mult.items():
        np.testing.assert_allclose(other.algebra.mult[key], m, atol=1e-8)


@pytest.mark.parametrize("name", ["pointed:2:0", "pointed:2:1/2"])
def test_symmetric_z2_ground_table_commutative(name):
    T = ra.ground_multiplication_table(reflection(name))
    assert T.shape == (2, 2, 2)
    np.testing.assert_allclose(T, T.transpose(1, 0, 2), atol=1e-12)


def test_unknown_schedule():
    with pytest.raises(ra.ReflectionError):
        ra.build_reflection_algebra(category("fib"), schedule="sideways")


# ---------------------------------------------------------------------------
# counit
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ALL)
def test_counit_battery(name):
    F = reflection(name)
    rep = ra.counit_state_check(F)
    assert rep.passed, rep.failures()
    for X in F.ground_basis:
        assert ra.counit(F, F.r_vector(X)) == pytest.approx(1.0, abs=1e-12)


def test_counit_formula_on_fib():
    F = reflection("fib")
    np.testing.assert_allclose(F.counit, [1.0, GOLDEN**-0.5], atol=1e-12)


def test_counit_kills_difference_of_rs():
    F = reflection("fib")
    A = F.algebra
    u = F.data.unit
    a = F.r_vector(0) - F.r_vector(1)
    aa = A.product(u, A.apply_star(u, a), u, a, u)
    assert ra.counit(F, aa) == pytest.approx(0.0, abs=1e-12)
    assert np.linalg.norm(a) > 0.5


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["fib", "ising", "semion", "pointed:3:1/3"]), st.integers(0, 2**31))
def test_counit_positivity_identity(name, seed):
    F = reflection(name)
    A = F.algebra
    u = F.data.unit
    rng = np.random.default_rng(seed)
    lam = rng.normal(size=len(F.ground_basis)) + 1j * rng.normal(size=len(F.ground_basis))
    a = sum(c * F.r_vector(X) for c, X in zip(lam, F.ground_basis))
    aa = A.product(u, A.apply_star(u, a), u, a, u)
    assert ra.counit(F, aa) == pytest.approx(abs(lam.sum()) ** 2, rel=1e-9, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["fib", "ising", "semion"]), st.integers(0, 2**31))
def test_star_antimultiplicative_on_ground(name, seed):
    F = reflection(name)
    A = F.algebra
    u = F.data.unit
    rng = np.random.default_rng(seed)
    n = len(F.ground_basis)
    a, b = (rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(2))
    lhs = A.apply_star(u, A.product(u, a, u, b, u))
    rhs = A.product(u, A.apply_star(u, b), u, A.apply_star(u, a), u)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)
    assert ra.counit(F, A.product(u, a, u, b, u)) == pytest.approx(ra.counit(F, a) * ra.counit(F, b), abs=1e-9)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ALL)
def test_norms_square_to_dimensions(name):
    F = reflection(name)
    for X, v in ra.r_norms(F).items():
        assert v**2 == pytest.approx(F.data.qdim[X], abs=1e-12)


def test_norm_values():
    fib, ising = reflection("fib"), reflection("ising")
    assert ra.r_norms(fib)[0] == pytest.approx(1.0)
    assert ra.r_norms(fib)[1] == pytest.approx(1.2720196495, abs=1e-9)
    assert ra.r_norms(ising)[ising.data.index("sigma")] == pytest.approx(2**0.25, abs=1e-12)


@pytest.mark.parametrize("name", ["fib", "ising"])
def test_ground_operator_norms_are_one(name):
    # R_X / (norm) in the dimension-normalized ring: left multiplication has norm 1
    for v in ra.ground_operator_norms(reflection(name)).values():
        assert v == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------------------
# Dehn twist candidates
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ALL)
def test_component_twist_fixes_r(name):
    F = reflection(name)
    rep = ra.verify_mcg(F, "component-twist")
    assert rep.residuals["fixes_R"] < 1e-12
    assert rep.residuals["counit_invariance"] < 1e-12
    G = ra.dehn_twist(F)[F.data.unit]
    np.testing.assert_allclose(F.counit @ G, F.counit, atol=1e-12)


@pytest.mark.parametrize("name", ALL)
def test_component_twist_agrees_with_balancing_route(name):
    rep = ra.verify_mcg(reflection(name))
    assert rep.residuals["fixes_R"] == 0.0
    assert rep.residuals["balancing_crosscheck"] < 1e-12


def test_monodromy_on_fib_is_flagged():
    F = reflection("fib")
    t = F.data.index("t")
    G = ra.dehn_twist(F, "monodromy")[F.data.unit]
    theta = F.data.theta(t)
    assert G[1, 1] == pytest.approx(theta**-2, abs=1e-12)
    battery = ra.mcg_battery(F)
    rep = battery["monodromy"]
    assert "counit_invariance" in rep.failures()
    expected = abs(theta**-2 - 1) / math.sqrt(F.data.qdim[t])
    assert rep.residuals["counit_invariance"] == pytest.approx(expected, abs=1e-12)


def test_trivial_category_candidates_all_pass():
    battery = ra.mcg_battery(reflection("trivial"))
    assert set(battery) == set(ra.CANDIDATES)
    assert all(rep.passed for rep in battery.values())


def test_unknown_candidate():
    with pytest.raises(ra.ReflectionError):
        ra.dehn_twist(reflection("fib"), "flip")


def test_semion_star_uses_phases():
    # the semion has Frobenius-Schur indicator -1, so the star carries a sign
    F = reflection("semion")
    A = F.algebra
    assert ia.star_residuals(A)["star_involutive"] < 1e-12
    assert ia.positivity_residual(A) < 1e-10
