"""Walk through the three-stage computation for d = -43, printing what each
stage produces: the perfect forms with their minimal vectors and polytope
shapes, the facet structure used for the flips, the cell orbits with their
stabilizers, the boundary matrices, and finally the homology of the quotient
complex.

Run:  python demos/voronoi_walkthrough.py [-d D]
"""

import argparse
import time

from voronoilab import (
    QuadField,
    assemble_complex,
    cell_orbits,
    enumerate_perfect_forms,
    polytope_shape,
)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("-d", type=int, default=-43)
    d = parser.parse_args().d

    field = QuadField(d)
    print(f"ring of integers of Q(sqrt({d})): omega has trace "
          f"{field.omega_trace} and norm {field.norm_coeff}")

    t0 = time.time()
    print("\n-- stage 1: enumerate the perfect forms (flip walk) --")
    classes = enumerate_perfect_forms(field)
    print(f"{len(classes)} classes in {time.time() - t0:.1f}s")
    for cls in classes:
        a, c, b1, bw = cls.representative.coords()
        print(f"\n{cls.label}: [[{a}, {b1}+{bw}w], [conj, {c}]]")
        print(f"  {len(cls.min_vectors)} minimal vectors (one per +-pair), "
              f"minimum 1, shape: {polytope_shape(cls)}")
        for facet_index, facet in enumerate(cls.facets):
            neighbor = cls.neighbors[facet_index]
            print(f"  facet {sorted(facet.incident)} -> flip lands in {neighbor}")

    print("\n-- stage 2: group the cells into orbits and build the complex --")
    table = cell_orbits(classes)
    for dim in (3, 2, 1):
        print(f"dimension {dim}: {len(table.orbits[dim])} orbit(s)")
        for orbit in table.orbits[dim]:
            flag = "+" if orbit.orientation_preserved else "dropped (orientation)"
            print(f"  {orbit.orbit_label}: {len(orbit.vertices)} vertices, "
                  f"stabilizer order {orbit.stabilizer_order}, {flag}")
    cx = assemble_complex(table)
    print("\nboundary from 3-cells to 2-faces:")
    for row in cx.d3.rows:
        print("   ", row)
    print("boundary from 2-faces to edges:")
    for row in cx.d2.rows:
        print("   ", row)

    print("\n-- stage 3: homology via Smith normal form --")
    for k in (1, 2, 3):
        print(f"H_{k} = {cx.homology(k)}")
    print(f"\ntotal {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
