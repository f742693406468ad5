"""Ground multiplication, counit, norms and the Dehn-twist battery for the Fibonacci category."""

from __future__ import annotations

from surfhom import fusion_data as fd
from surfhom import reflection_algebra as ra


def main() -> None:
    data = fd.fibonacci()
    F = ra.build_reflection_algebra(data)
    labels = [data.labels[X] for X in F.ground_basis]
    print("fiber dims:", {data.labels[U]: n for U, n in enumerate(F.algebra.dims)})

    T = ra.ground_multiplication_table(F)
    print("\nground products R_X R_Y = sum_Z T[X,Y,Z] R_Z")
    for x, X in enumerate(labels):
        for y, Y in enumerate(labels):
            terms = " + ".join(f"{T[x, y, z].real:.4f} R_{Z}" for z, Z in enumerate(labels) if abs(T[x, y, z]) > 1e-12)
            print(f"  R_{X} R_{Y} = {terms}")

    print("\ncounit and norms")
    norms = ra.r_norms(F)
    for X in F.ground_basis:
        eps = ra.counit(F, F.r_vector(X))
        print(f"  eps(R_{data.labels[X]}) = {eps.real:.6f}   |R|^2 = {norms[X] ** 2:.6f}   d = {data.qdim[X]:.6f}")

    print("\nDehn-twist candidates")
    for name, rep in ra.mcg_battery(F).items():
        flags = rep.failures() or ["none"]
        print(f"  {name:16s} fixes_R={rep.residuals['fixes_R']:.2e}  "
              f"counit={rep.residuals['counit_invariance']:.3e}  flags: {', '.join(flags)}")


if __name__ == "__main__":
    main()
