import pytest

from voronoilab.buildings import (
    CENSUS_CAVEAT,
    alpha_map_image_rank,
    apartment_class,
    delta_map,
    frame_complex,
    partial_basis_complex,
    steinberg_rank,
    tits_building,
    truncated_b2_components,
)
from voronoilab.gf import FiniteField, ZModRing, span
from voronoilab.homology import HomologyGroup
from voronoilab.posets import reduced_homology


def test_tits_building_counts():
    b = tits_building(2, 2)
    assert len(b) == 3
    assert not b.pairs()
    b = tits_building(2, 3)
    assert len(b) == 4
    b = tits_building(3, 2)
    assert len(b) == 14
    assert len(b.pairs()) == 21
    with pytest.raises(ValueError):
        tits_building(5, 2)
    with pytest.raises(ValueError):
        tits_building(3, 7)


def test_order_complex_of_building():
    oc = tits_building(3, 2).order_complex()
    assert oc.n_simplices(0) == 14
    assert oc.n_simplices(1) == 21
    assert oc.dim() == 1


@pytest.mark.parametrize(
    "n,q",
    [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)],
)
def test_solomon_tits(n, q):
    oc = tits_building(n, q).order_complex()
    expected_rank = q ** (n * (n - 1) // 2)
    for k in range(-1, n):
        h = reduced_homology(oc, k)
        if k == n - 2:
            assert h == HomologyGroup.of(expected_rank)
        else:
            assert h.is_zero()


def test_frame_complexes_over_fields():
    for q in (2, 3, 4):
        b2 = frame_complex(2, ("gf", q))
        assert len(b2.vertices) == q + 1
        assert reduced_homology(b2, 0).is_zero()
    b1 = frame_complex(1, ("gf", 5))
    assert len(b1.vertices) == 1 and b1.dim() == 0
    b3 = frame_complex(3, ("gf", 2))
    assert reduced_homology(b3, 0).is_zero()
    b3_skel = b3.skeleton(1)
    assert b3_skel.dim() == 1
    assert reduced_homology(b3_skel, 0).is_zero()


def test_frame_complex_over_zmod():
    b = frame_complex(2, ("zmod", 4))
    # lines of (Z/4)^2: primitive vectors up to units {1,3}
    assert len(b.vertices) == 6
    assert reduced_homology(b, 0).is_zero()
    ring = ZModRing(6)
    assert ring.is_partial_basis([(1, 0), (0, 1)])
    assert not ring.is_partial_basis([(2, 1), (0, 3)])
    with pytest.raises(ValueError):
        frame_complex(4, ("gf", 2))


def test_partial_basis_complex():
    pb2 = partial_basis_complex(2, ("gf", 2))
    assert len(pb2.vertices) == 3
    pb2_q3 = partial_basis_complex(2, ("gf", 3))
    assert len(pb2_q3.vertices) == 8  # all nonzero vectors


def test_apartment_class_rank_two():
    f = FiniteField(2)
    b = tits_building(2, 2)
    l1 = span(f, 2, [(1, 0)])
    l2 = span(f, 2, [(0, 1)])
    cls = apartment_class(b, [l1, l2])
    assert cls.is_cycle()
    assert sorted(cls.coefficients.values()) == [-1, 1]
    swapped = apartment_class(b, [l2, l1])
    assert swapped == cls.negate()
    with pytest.raises(ValueError):
        apartment_class(b, [l1, l1])


def test_apartment_class_rank_three():
    f = FiniteField(2)
    b = tits_building(3, 2)
    lines = [
        span(f, 3, [(1, 0, 0)]),
        span(f, 3, [(0, 1, 0)]),
        span(f, 3, [(0, 0, 1)]),
    ]
    cls = apartment_class(b, lines)
    assert len(cls.coefficients) == 6
    assert all(c in (-1, 1) for c in cls.coefficients.values())
    assert cls.is_cycle()
    odd = apartment_class(b, [lines[1], lines[0], lines[2]])
    assert odd == cls.negate()


@pytest.mark.parametrize("n,q,expected", [(2, 2, 2), (2, 3, 3), (3, 2, 8)])
def test_alpha_rank_equals_steinberg_rank(n, q, expected):
    assert alpha_map_image_rank(n, q) == expected
    assert steinberg_rank(n, q) == expected


def test_delta_map_basic():
    terms = delta_map(["a", "b"])
    assert len(terms) == 1
    assert terms[0].sign == 1 and terms[0].pairs == (("a", "b"),)
    terms4 = delta_map([0, 1, 2, 3])
    assert len(terms4) == 6
    assert sum(t.sign for t in terms4) == 2  # signs are not all equal
    for t in terms4:
        assert t.prefixes()[-1] == frozenset({0, 1, 2, 3})
        assert len(t.prefixes()[0]) == 2
    with pytest.raises(ValueError):
        delta_map([0, 1, 2])
    with pytest.raises(ValueError):
        delta_map(list(range(8)))


def test_delta_map_antisymmetry():
    base = delta_map([0, 1, 2, 3])

    def normalized(terms):
        out = []
        for t in terms:
            sign = t.sign
            pairs = []
            for a, b in t.pairs:
                if a > b:
                    a, b = b, a
                    sign = -sign
                pairs.append((a, b))
            out.append((tuple(pairs), sign))
        return sorted(out)

    swapped = delta_map([1, 0, 2, 3])
    assert normalized(swapped) == [(p, -s) for p, s in normalized(base)]
    even = delta_map([1, 0, 3, 2])
    assert normalized(even) == normalized(base)


def test_truncated_census_euclidean_connected():
    census = truncated_b2_components(-1, 5)
    assert census.component_count == 1
    assert census.vertex_count > 0
    assert census.caveat == CENSUS_CAVEAT


def test_truncated_census_reports():
    census = truncated_b2_components(-43, 5)
    assert census.component_count >= 1
    assert sum(census.component_sizes) == census.vertex_count
    degenerate = truncated_b2_components(-43, 0)
    assert degenerate.vertex_count == 0
    assert degenerate.component_count == 0
