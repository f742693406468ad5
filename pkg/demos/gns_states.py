"""GNS data for the counit and for a faithful state, and the realized conditional expectation."""

from __future__ import annotations

from surfhom import fusion_data as fd
from surfhom import reflection_algebra as ra
from surfhom import states_gns as sg


def describe(label: str, omega: sg.State) -> None:
    res = sg.gns(omega)
    print(f"{label:28s} rank {res.rank}  kernel {res.kernel_dim}  "
          f"faithful {res.faithful_state}  injective {res.injective}")


def main() -> None:
    ising = ra.build_reflection_algebra(fd.ising())
    B = sg.ground_algebra(ising)
    describe("Ising, counit", sg.counit_state(ising))
    describe("Ising, coefficient state", sg.coefficient_state(B))
    describe("Ising, trace", sg.trace_state(B))

    z2 = ra.build_reflection_algebra(fd.builtin("pointed:2:0"))
    Phi = sg.regular_realization(z2.data)
    for spec in ("counit", "coefficient"):
        omega = sg.state_from_spec(sg.ground_algebra(z2), spec, z2)
        inner = sg.weighted_inner_identity_check(z2.algebra, omega, Phi)
        inc = sg.realize_inclusion(z2.algebra, omega, Phi)
        print(f"\nZ/2 with the {spec} state")
        print(f"  inner-product identity residual {inner.residuals['inner_identity']:.2e}")
        for key, value in sorted(inc.report.residuals.items()):
            print(f"  {key:16s} {value:.2e}")
        print(f"  expectation faithful: {inc.report.notes['expectation_faithful']}")


if __name__ == "__main__":
    main()
