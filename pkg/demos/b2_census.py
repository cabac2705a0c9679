"""Census of truncated frame graphs over rings of integers O_d: vertices are
unit-orbits of unimodular vectors with both coordinate norms below a radius,
edges join pairs with unit determinant.

Over the norm-Euclidean rings the truncations stay connected; over the
non-Euclidean principal rings the truncations shatter as the radius grows.
None of this proves anything about the full infinite graph (a truncation can
disconnect a connected graph); it is a way to look at the phenomenon.

Run:  python demos/b2_census.py
"""

from voronoilab import truncated_b2_components

EUCLIDEAN = (-1, -2, -3, -7, -11)
NON_EUCLIDEAN_PIDS = (-19, -43, -67, -163)


def main():
    print(f"{'d':>6} {'radius':>6} {'vertices':>9} {'edges':>6} "
          f"{'components':>11}  sizes")
    for d in EUCLIDEAN:
        census = truncated_b2_components(d, 5)
        print(f"{d:>6} {5:>6} {census.vertex_count:>9} {census.edge_count:>6} "
              f"{census.component_count:>11}  {census.component_sizes[:8]}")
    print()
    for d in NON_EUCLIDEAN_PIDS:
        for radius in (5, 8, 12):
            census = truncated_b2_components(d, radius)
            print(f"{d:>6} {radius:>6} {census.vertex_count:>9} "
                  f"{census.edge_count:>6} {census.component_count:>11}  "
                  f"{census.component_sizes[:8]}")
    print(f"\nnote: {truncated_b2_components(-1, 1).caveat}")


if __name__ == "__main__":
    main()
