"""Exact facet and face enumeration for rational polyhedral cones in Q^4.

Facets are computed by the incremental double-description method applied to
the dual cone: the extreme rays of {u : <u, g> >= 0 for all generators g}
are exactly the facet normals of the primal cone.  Generator counts here are
tiny (at most a few dozen), so simplicity wins over asymptotics; everything
is exact over Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


def _dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def rank_of(vectors) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / pr[col]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        r += 1
        if r == len(rows):
            break
    return r


def primitive_vector(vec) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    fracs = [Fraction(x) for x in vec]
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(f * denom) for f in fracs]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


@dataclass(frozen=True)
class RationalCone:
    """A polyhedral cone spanned by finitely many nonzero rational vectors."""

    generators: tuple[tuple, ...]

    def __post_init__(self):
        for g in self.generators:
            if all(x == 0 for x in g):
                raise ValueError("zero generator")

    @classmethod
    def from_vectors(cls, vectors) -> "RationalCone":
        return cls(tuple(tuple(v) for v in vectors))

    @property
    def ambient_dim(self) -> int:
        return len(self.generators[0])

    @property
    def dim(self) -> int:
        return rank_of(self.generators)


@dataclass(frozen=True)
class Facet:
    """A facet of a cone: primitive inner normal and incident generator indices."""

    normal: tuple[int, ...]
    incident: tuple[int, ...]


def independent_subset(vectors, r):
    """Indices of r linearly independent vectors, greedily."""
    chosen = []
    rows = []
    for i, v in enumerate(vectors):
        cand = rows + [[Fraction(x) for x in v]]
        if rank_of(cand) > len(rows):
            chosen.append(i)
            rows = cand
            if len(chosen) == r:
                return chosen
    return None


def _solve_unit_rays(basis_rows):
    """Columns of the inverse of the square matrix with the given rows."""
    n = len(basis_rows)
    aug = [
        [Fraction(x) for x in basis_rows[i]]
        + [Fraction(1) if j == i else Fraction(0) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pr = aug[col]
        inv = 1 / pr[col]
        aug[col] = pr = [x * inv for x in pr]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], pr)]
    # ray j = column j of the inverse
    return [tuple(aug[i][n + j] for i in range(n)) for j in range(n)]


def dual_extreme_rays(inequalities) -> list[tuple[int, ...]]:
    """Extreme rays of {x in Q^r : a . x >= 0 for all a}, primitive integer.

    Requires the inequality normals to span Q^r, so the solution cone is
    pointed.  Incremental double description with the combinatorial
    adjacency test.
    """
    ineqs = [tuple(a) for a in inequalities]
    r = len(ineqs[0])
    if rank_of(ineqs) != r:
        raise ValueError("inequalities do not span; dual cone is not pointed")
    init = independent_subset(ineqs, r)
    processed = [ineqs[i] for i in init]
    rays = [primitive_vector(ray) for ray in _solve_unit_rays(processed)]
    rest = [a for i, a in enumerate(ineqs) if i not in set(init)]

    def zero_sets(current_rays):
        return [
            frozenset(k for k, a in enumerate(processed) if _dot(a, ray) == 0)
            for ray in current_rays
        ]

    for a in rest:
        vals = [_dot(a, ray) for ray in rays]
        if all(v >= 0 for v in vals):
            processed.append(a)
            continue
        zs = zero_sets(rays)
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        new_rays = {}
        for i in pos:
            for j in neg:
                common = zs[i] & zs[j]
                if len(common) < r - 2:
                    continue
                blocked = any(
                    k != i and k != j and common <= zs[k] for k in range(len(rays))
                )
                if blocked:
                    continue
                combo = tuple(
                    vals[i] * rays[j][t] - vals[j] * rays[i][t]
                    for t in range(r)
                )
                new_rays[primitive_vector(combo)] = True
        rays = [rays[i] for i in pos + zero] + list(new_rays)
        processed.append(a)
    return sorted(set(rays))


def facet_data(generators):
    """Facets of the cone spanned by `generators` inside their linear span.

    Returns (facets, basis) where basis is a list of span-coordinates basis
    vectors (each an ambient vector) and each facet is a pair
    (normal_in_span_coords, incident_indices).  The cone must have dim >= 2.
    """
    gens = [tuple(g) for g in generators]
    r = rank_of(gens)
    if r < 2:
        raise ValueError(f"cone of dimension {r} has no facet structure")
    ambient = len(gens[0])
    if r == ambient:
        basis_idx = list(range(ambient))
        basis = [
            tuple(1 if i == j else 0 for j in range(ambient)) for i in range(ambient)
        ]
        restricted = [tuple(Fraction(x) for x in g) for g in gens]
    else:
        idx = independent_subset(gens, r)
        basis = [gens[i] for i in idx]
        restricted = [coords_in_basis(basis, g) for g in gens]
    normals = dual_extreme_rays(restricted)
    facets = []
    for n in normals:
        vals = [_dot(n, g) for g in restricted]
        if any(v < 0 for v in vals):
            n = tuple(-x for x in n)
            vals = [-v for v in vals]
        incident = tuple(i for i, v in enumerate(vals) if v == 0)
        facets.append((n, incident))
    facets.sort(key=lambda f: f[0])
    return facets, basis


def coords_in_basis(basis, vec):
    """Coordinates of vec in the span of basis (raises if not in the span)."""
    n = len(basis)
    ambient = len(vec)
    aug = [
        [Fraction(basis[j][i]) for j in range(n)] + [Fraction(vec[i])]
        for i in range(ambient)
    ]
    coords = [Fraction(0)] * n
    row = 0
    piv_cols = []
    for col in range(n):
        piv = next((i for i in range(row, ambient) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pr = aug[row]
        inv = 1 / pr[col]
        aug[row] = pr = [x * inv for x in pr]
        for i in range(ambient):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], pr)]
        piv_cols.append(col)
        row += 1
    for i in range(row, ambient):
        if aug[i][n] != 0:
            raise ValueError("vector not in span of basis")
    for i, col in enumerate(piv_cols):
        coords[col] = aug[i][n]
    return tuple(coords)


def facets_of_cone(cone: RationalCone) -> list[Facet]:
    """Complete, duplicate-free facet list of a full-dimensional cone,
    canonically ordered by normal; inner points pair positively with normals."""
    r = cone.dim
    if r != cone.ambient_dim:
        raise ValueError(
            f"cone is not full-dimensional: rank {r} in ambient {cone.ambient_dim}"
        )
    raw, _ = facet_data(cone.generators)
    return [Facet(normal=n, incident=inc) for n, inc in raw]


def face_lattice(cone: RationalCone, down_to_dim: int) -> dict[int, list[tuple[int, ...]]]:
    """Proper faces of the cone, keyed by cone dimension (down_to_dim..dim-1).

    A face is reported as the sorted tuple of its incident generator indices;
    faces with the same incident set are the same face.
    """
    facets = facets_of_cone(cone)
    gens = cone.generators
    facet_sets = [frozenset(f.incident) for f in facets]
    all_faces = set(facet_sets)
    frontier = set(facet_sets)
    while frontier:
        new = set()
        for face in frontier:
            for fs in facet_sets:
                cut = face & fs
                if cut and cut not in all_faces:
                    new.add(cut)
        all_faces |= new
        frontier = new
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for face in all_faces:
        d = rank_of([gens[i] for i in face])
        if down_to_dim <= d < cone.dim:
            by_dim.setdefault(d, []).append(tuple(sorted(face)))
    for d in by_dim:
        by_dim[d].sort()
    for d in range(down_to_dim, cone.dim):
        by_dim.setdefault(d, [])
    return by_dim
