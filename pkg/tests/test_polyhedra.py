import random
from fractions import Fraction

import pytest

from voronoilab.hermitian import rank_one_coords, vector_from_z
from voronoilab.polyhedra import (
    RationalCone,
    face_lattice,
    facet_data,
    facets_of_cone,
    primitive_vector,
)
from voronoilab.quadarith import QuadField

from golden_d43 import FORM_FACETS, FORM_MINVEC_INDICES, VECTORS

F43 = QuadField(-43)


def golden_cone(k):
    vecs = [vector_from_z(F43, VECTORS[i - 1]) for i in FORM_MINVEC_INDICES[k]]
    return RationalCone.from_vectors([rank_one_coords(v) for v in vecs])


def test_simplicial_cone():
    cone = RationalCone.from_vectors(
        [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    )
    facets = facets_of_cone(cone)
    assert len(facets) == 4
    assert all(len(f.incident) == 3 for f in facets)
    lattice = face_lattice(cone, 1)
    assert len(lattice[3]) == 4
    assert len(lattice[2]) == 6
    assert len(lattice[1]) == 4


def test_facet_sign_convention():
    cone = golden_cone(1)
    for f in facets_of_cone(cone):
        vals = [
            sum(a * b for a, b in zip(f.normal, g)) for g in cone.generators
        ]
        assert all(v >= 0 for v in vals)
        assert {i for i, v in enumerate(vals) if v == 0} == set(f.incident)
        assert primitive_vector(f.normal) == f.normal


def test_phi1_facets_match_golden():
    # form 1's minimal vectors are golden vectors 1..6 in order, so the facet
    # incidence sets can be compared literally (0-based here)
    cone = golden_cone(1)
    facets = facets_of_cone(cone)
    got = {frozenset(i + 1 for i in f.incident) for f in facets}
    assert got == {frozenset(s) for s in FORM_FACETS[1]}


def _incidence_isomorphic(system_a, system_b, n):
    """Whether two facet systems on n points differ by a relabeling."""
    if sorted(len(s) for s in system_a) != sorted(len(s) for s in system_b):
        return False

    def profile(system, x):
        return tuple(sorted(len(s) for s in system if x in s))

    prof_a = {x: profile(system_a, x) for x in range(n)}
    prof_b = {x: profile(system_b, x) for x in range(n)}
    target = {frozenset(s) for s in system_b}

    assignment = {}

    def extend(x):
        if x == n:
            mapped = {frozenset(assignment[i] for i in s) for s in system_a}
            return mapped == target
        for y in range(n):
            if y in assignment.values() or prof_b[y] != prof_a[x]:
                continue
            assignment[x] = y
            # prune: every facet fully assigned so far must embed in some target
            ok = True
            for s in system_a:
                img = {assignment[i] for i in s if i in assignment}
                if img and not any(img <= t for t in target):
                    ok = False
                    break
            if ok and extend(x + 1):
                return True
            del assignment[x]
        return False

    return extend(0)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_other_golden_facets_match_up_to_relabeling(k):
    cone = golden_cone(k)
    facets = facets_of_cone(cone)
    ours = [set(f.incident) for f in facets]
    theirs = [{i - 1 for i in s} for s in FORM_FACETS[k]]
    n = len(FORM_MINVEC_INDICES[k])
    assert len(ours) == len(theirs)
    assert _incidence_isomorphic(ours, theirs, n)


def test_phi4_facet_sizes():
    facets = facets_of_cone(golden_cone(4))
    assert sorted(len(f.incident) for f in facets) == [3, 3, 3, 3, 6, 6, 6, 6]


def test_face_lattice_euler_relation():
    for k in (1, 2, 3, 4):
        cone = golden_cone(k)
        lattice = face_lattice(cone, 1)
        v, e, f = len(lattice[1]), len(lattice[2]), len(lattice[3])
        assert v - e + f == 2
        # rays are exactly the generators
        assert sorted(lattice[1]) == [(i,) for i in range(len(cone.generators))]


def test_invariance_under_permutation_and_scaling():
    rng = random.Random(6)
    cone = golden_cone(2)
    base = {frozenset(f.incident) for f in facets_of_cone(cone)}
    gens = list(cone.generators)
    perm = list(range(len(gens)))
    rng.shuffle(perm)
    factors = [Fraction(rng.randint(1, 5), rng.randint(1, 5)) for _ in perm]
    scaled = [
        tuple(factors[i] * x for x in gens[p]) for i, p in enumerate(perm)
    ]
    cone2 = RationalCone.from_vectors(scaled)
    got = {
        frozenset(perm[i] for i in f.incident) for f in facets_of_cone(cone2)
    }
    assert got == base


def test_double_description_duality():
    # the facet normals of the cone spanned by facet normals are the
    # original extreme rays, up to positive scaling
    cone = golden_cone(1)
    normals = [f.normal for f in facets_of_cone(cone)]
    dual = RationalCone.from_vectors(normals)
    back = facets_of_cone(dual)
    original = {primitive_vector(g) for g in cone.generators}
    assert {f.normal for f in back} == original


def test_lower_dimensional_cone_rejected():
    cone = RationalCone.from_vectors([(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)])
    with pytest.raises(ValueError, match="rank 2"):
        facets_of_cone(cone)


def test_facet_data_in_restricted_span():
    # a square cone of dimension 3 inside Q^4
    gens = [(1, 0, 0, 0), (0, 1, 0, 0), (1, 0, 1, 0), (0, 1, 1, 0)]
    facets, basis = facet_data(gens)
    assert len(basis) == 3
    sizes = sorted(len(inc) for _, inc in facets)
    assert sizes == [2, 2, 2, 2]
    # a generator interior to the cone of the others lies on no facet
    simplicial = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 0)]
    facets2, _ = facet_data(simplicial)
    assert sorted(len(inc) for _, inc in facets2) == [2, 2, 2]
