import random

import pytest

from voronoilab.homology import FPGroup, HomologyGroup, IntMatrix
from voronoilab.posets import (
    CoefficientFunctor,
    PosetData,
    SimplicialComplexData,
    homology,
    poset_homology_with_functor,
    reduced_homology,
    reduced_homology_with_coefficients,
    single_support_decomposition,
)


def random_poset(rng, nmin=3, nmax=12, p=0.35):
    n = rng.randint(nmin, nmax)
    pairs = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return PosetData(list(range(n)), pairs)


def test_poset_basics():
    p = PosetData("abcd", [(0, 1), (1, 2)])
    assert p.less(0, 2)  # transitive closure
    assert not p.less(2, 0)
    assert p.heights == [0, 1, 2, 0]
    assert p.dim() == 2
    assert len(p.chains(1)) == 3
    above = p.above(0)
    assert [e for e in above.elements] == ["b", "c"]
    with pytest.raises(ValueError):
        PosetData("ab", [(0, 0)])
    with pytest.raises(ValueError):
        PosetData("ab", [(0, 1), (1, 0)])


def test_order_complex_shapes():
    antichain = PosetData(range(5), [])
    oc = antichain.order_complex()
    assert oc.dim() == 0 and oc.n_simplices(0) == 5
    chain = PosetData(range(3), [(0, 1), (1, 2)])
    oc = chain.order_complex()
    assert oc.n_simplices(2) == 1 and oc.n_simplices(1) == 3
    assert reduced_homology(oc, 0).is_zero()


def test_reduced_homology_examples():
    # two points: H~0 = Z
    two = SimplicialComplexData(range(2), [(0,), (1,)])
    assert reduced_homology(two, 0) == HomologyGroup.of(1)
    # hollow triangle: H~1 = Z
    tri = SimplicialComplexData(range(3), [(0, 1), (1, 2), (0, 2)])
    assert reduced_homology(tri, 0).is_zero()
    assert reduced_homology(tri, 1) == HomologyGroup.of(1)
    # full simplex: contractible
    full = SimplicialComplexData(range(4), [(0, 1, 2, 3)])
    for k in range(-1, 4):
        assert reduced_homology(full, k).is_zero()
    # empty complex: H~_{-1} = Z
    empty = SimplicialComplexData([], [])
    assert reduced_homology(empty, -1) == HomologyGroup.of(1)


def test_cone_poset_is_contractible():
    rng = random.Random(20)
    for _ in range(5):
        p = random_poset(rng, 3, 7)
        n = len(p.elements)
        pairs = p.pairs() + [(i, n) for i in range(n)]
        coned = PosetData(list(range(n + 1)), pairs)
        oc = coned.order_complex()
        for k in range(-1, coned.dim() + 1):
            assert reduced_homology(oc, k).is_zero()


def test_constant_functor_matches_realization():
    rng = random.Random(7)
    for _ in range(10):
        p = random_poset(rng, 2, 8, 0.3)
        functor = CoefficientFunctor.constant_z(p)
        oc = p.order_complex()
        for k in range(0, p.dim() + 1):
            assert poset_homology_with_functor(p, functor, k) == homology(oc, k)


def test_zero_functor():
    p = PosetData(range(4), [(0, 1), (0, 2), (1, 3), (2, 3)])
    functor = CoefficientFunctor.zero(p)
    for k in range(0, 3):
        assert poset_homology_with_functor(p, functor, k).is_zero()


def test_functor_validation():
    p = PosetData(range(2), [(0, 1)])
    bad = CoefficientFunctor(
        p,
        [FPGroup.of_orders(0, [2]), FPGroup.free(1)],
        {(0, 1): IntMatrix.from_rows([[1]])},
    )
    # Z/2 -> Z sending the generator to 1 is not well defined
    with pytest.raises(ValueError):
        bad.validate()
    missing = CoefficientFunctor(p, [FPGroup.free(1), FPGroup.free(1)], {})
    with pytest.raises(ValueError):
        missing.validate()


def test_functoriality_check():
    p = PosetData(range(3), [(0, 1), (1, 2), (0, 2)])
    z = FPGroup.free(1)
    maps = {
        (0, 1): IntMatrix.from_rows([[2]]),
        (1, 2): IntMatrix.from_rows([[3]]),
        (0, 2): IntMatrix.from_rows([[5]]),  # should be 6
    }
    with pytest.raises(ValueError, match="functoriality"):
        CoefficientFunctor(p, [z, z, z], maps).validate()


def test_single_support_lemma_small():
    rng = random.Random(13)
    for _ in range(12):
        p = random_poset(rng)
        m = rng.choice(sorted(set(p.heights)))
        groups = {}
        for i in range(len(p.elements)):
            if p.heights[i] == m:
                groups[i] = FPGroup.of_orders(
                    rng.randint(0, 2), rng.sample([2, 3, 4, 6], rng.randint(0, 2))
                )
        functor = CoefficientFunctor.height_supported(p, m, groups)
        for k in range(0, p.dim() + 2):
            lhs = poset_homology_with_functor(p, functor, k)
            rhs = single_support_decomposition(p, functor, m, k)
            assert lhs == rhs


def test_coefficient_homology():
    # hollow triangle with Z/4 coefficients: H~1 = Z/4, H~0 = 0
    tri = SimplicialComplexData(range(3), [(0, 1), (1, 2), (0, 2)])
    g = FPGroup.of_orders(0, [4])
    assert reduced_homology_with_coefficients(tri, g, 1) == HomologyGroup.of(0, [4])
    assert reduced_homology_with_coefficients(tri, g, 0).is_zero()
    # empty complex: H~_{-1} = the group itself
    empty = SimplicialComplexData([], [])
    got = reduced_homology_with_coefficients(empty, FPGroup.of_orders(1, [2]), -1)
    assert got == HomologyGroup.of(1, [2])
    # one point: everything reduced vanishes
    pt = SimplicialComplexData(range(1), [(0,)])
    for k in (-1, 0):
        assert reduced_homology_with_coefficients(pt, g, k).is_zero()
