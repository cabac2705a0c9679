"""Tour of the combinatorial side: Tits buildings over small finite fields,
their homology concentration, apartment cycles, the span of frame classes,
partial-frame complexes over fields and Z/m, poset homology with functor
coefficients, and the pairing-off expansion of an apartment on 2n lines.

Run:  python demos/buildings_tour.py
"""

from voronoilab import (
    CoefficientFunctor,
    FiniteField,
    PosetData,
    alpha_map_image_rank,
    apartment_class,
    delta_map,
    frame_complex,
    poset_homology_with_functor,
    reduced_homology,
    single_support_decomposition,
    span,
    steinberg_rank,
    tits_building,
)
from voronoilab.homology import FPGroup


def main():
    print("-- buildings and their homology (Solomon-Tits at desk scale) --")
    for n, q in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)]:
        building = tits_building(n, q)
        complex_data = building.order_complex()
        groups = [str(reduced_homology(complex_data, k)) for k in range(-1, n)]
        print(f"n={n}, q={q}: {len(building)} subspaces; reduced homology "
              f"(degrees -1..{n - 1}): {groups}; expected rank q^(n(n-1)/2) "
              f"= {q ** (n * (n - 1) // 2)}")

    print("\n-- an apartment cycle in the building of F_2^3 --")
    f2 = FiniteField(2)
    building = tits_building(3, 2)
    lines = [span(f2, 3, [v]) for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]]
    cycle = apartment_class(building, lines)
    print(f"the coordinate decomposition spans a hexagon: "
          f"{len(cycle.coefficients)} flags, boundary vanishes: {cycle.is_cycle()}")
    odd = apartment_class(building, [lines[1], lines[0], lines[2]])
    print(f"swapping two lines negates the cycle: {odd == cycle.negate()}")

    print("\n-- the span of all frame classes fills the top homology --")
    for n, q in [(2, 2), (2, 3), (3, 2)]:
        print(f"n={n}, q={q}: frame-class span rank {alpha_map_image_rank(n, q)}"
              f" = Steinberg rank {steinberg_rank(n, q)}")

    print("\n-- partial-frame complexes stay connected over fields and Z/m --")
    for ring in [("gf", 2), ("gf", 3), ("gf", 4), ("zmod", 4), ("zmod", 6)]:
        b2 = frame_complex(2, ring)
        print(f"B_2 over {ring}: {len(b2.vertices)} lines, "
              f"{b2.n_simplices(1)} frame edges, H~_0 = {reduced_homology(b2, 0)}")

    print("\n-- poset homology with a height-supported functor --")
    # face poset of a hollow triangle: vertices a, b, c below edges ab, bc, ca
    poset = PosetData(
        ["a", "b", "c", "ab", "bc", "ca"],
        [(0, 3), (1, 3), (1, 4), (2, 4), (0, 5), (2, 5)],
    )
    groups = {i: FPGroup.of_orders(1, [2]) for i in range(3)}
    functor = CoefficientFunctor.height_supported(poset, 0, groups)
    print("coefficients Z + Z/2 on each vertex of a hollow triangle's face poset:")
    for k in range(0, poset.dim() + 1):
        direct = poset_homology_with_functor(poset, functor, k)
        decomposed = single_support_decomposition(poset, functor, 0, k)
        print(f"H_{k}: direct {direct}  ==  decomposition {decomposed}")

    print("\n-- pairing off four lines --")
    for term in delta_map(["L1", "L2", "L3", "L4"]):
        tensor = " (x) ".join(f"[{a},{b}]" for a, b in term.pairs)
        sign = "+" if term.sign > 0 else "-"
        print(f"  {sign} {tensor}")


if __name__ == "__main__":
    main()
