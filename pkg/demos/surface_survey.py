"""Topology and fiber dimensions of a_P for a handful of gluing patterns."""

from __future__ import annotations

import sys

from surfhom import fusion_data as fd
from surfhom import gluing_patterns as gp

PATTERNS = ["1 1'", "1 2 1' 2'", "1 2 2' 1'", "1 1' 2 2'", "1 2 3 1' 2' 3'"]


def main(name: str = "ising") -> None:
    data = fd.builtin(name)
    print(f"category {name}: simples {list(data.labels)}")
    print(f"{'pattern':18s} {'g':>2s} {'b':>2s}  fiber dims")
    for text in PATTERNS:
        P = gp.parse_pattern(text)
        g, b = P.topology
        dims = dict(zip(data.labels, gp.fiber_dimensions(P, data)))
        print(f"{text:18s} {g:2d} {b:2d}  {dims}")

    torus = gp.torus_pattern()
    for small in ("trivial", "pointed:2:0", "pointed:3:0"):
        red = gp.closed_surface_reduction(torus, fd.builtin(small))
        print(f"closed torus over {small}: reduction dimension {red.dimension}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
