"""Tits buildings over finite fields, partial-frame complexes, apartment
classes and the maps built from them, at desk scale.

The building of F_q^n is the poset of proper nonzero subspaces; its order
complex is a wedge of (n-2)-spheres, and the top reduced homology is the
Steinberg module.  A decomposition of the space into lines carves out an
apartment sphere whose fundamental cycle is computed here explicitly, as is
the span of all such cycles (the image of the map from full frames).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

from .gf import (
    FiniteField,
    Subspace,
    make_ring,
    mat_rank,
    span,
    subspaces_of_dim,
    sum_subspaces,
)
from .homology import IntMatrix, smith_normal_form
from .posets import PosetData, SimplicialComplexData, reduced_homology
from .quadarith import QuadField, QuadInt

DESK_N = (2, 3, 4)
DESK_Q = (2, 3, 4, 5)


def tits_building(n: int, q: int) -> PosetData:
    """Poset of proper nonzero subspaces of F_q^n, ordered by inclusion."""
    if n not in DESK_N or q not in DESK_Q:
        raise ValueError(
            f"(n, q) = ({n}, {q}) outside desk scale n in {DESK_N}, q in {DESK_Q}"
        )
    field = FiniteField(q)
    elements: list[Subspace] = []
    for k in range(1, n):
        elements.extend(subspaces_of_dim(field, n, k))
    pairs = []
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            if a.dim < b.dim and b.contains(a):
                pairs.append((i, j))
    return PosetData(elements, pairs)


def order_complex(poset: PosetData) -> SimplicialComplexData:
    return poset.order_complex()


def steinberg_rank(n: int, q: int) -> int:
    """Rank of the top reduced homology of the building (Solomon-Tits)."""
    complex_data = tits_building(n, q).order_complex()
    h = reduced_homology(complex_data, n - 2)
    return h.free_rank


# ---------------------------------------------------------------------------
# partial-frame complexes
# ---------------------------------------------------------------------------


def _primitive_vectors(ring, n: int):
    return [
        v
        for v in product(ring.elements(), repeat=n)
        if ring.is_primitive(v)
    ]


def _line_rep(ring, v):
    return min(ring.scale(u, v) for u in ring.units())


def partial_basis_complex(n: int, ring_spec) -> SimplicialComplexData:
    """The complex whose vertices are primitive vectors and whose simplices
    are partial bases (subsets of a basis)."""
    ring = make_ring(ring_spec)
    if n > 3:
        raise ValueError("partial-basis complexes are desk scale: n <= 3")
    verts = _primitive_vectors(ring, n)
    return _independence_complex(verts, ring, n)


def frame_complex(n: int, ring_spec) -> SimplicialComplexData:
    """The complex of partial frames: vertices are unit-orbits of primitive
    vectors (lines), simplices are sets of lines forming a direct-summand
    decomposition.  The (n-2)-skeleton (frames that do not span) is
    `frame_complex(...).skeleton(n - 2)`."""
    ring = make_ring(ring_spec)
    if n > 3:
        raise ValueError("frame complexes are desk scale: n <= 3")
    lines = sorted({_line_rep(ring, v) for v in _primitive_vectors(ring, n)})
    return _independence_complex(lines, ring, n)


def _independence_complex(verts, ring, n: int) -> SimplicialComplexData:
    simplices = [(i,) for i in range(len(verts))]
    layer = simplices
    for size in range(2, n + 1):
        new_layer = []
        for s in layer:
            for j in range(s[-1] + 1, len(verts)):
                cand = s + (j,)
                if ring.is_partial_basis([verts[i] for i in cand]):
                    new_layer.append(cand)
        simplices.extend(new_layer)
        layer = new_layer
        if not layer:
            break
    return SimplicialComplexData(verts, simplices)


# ---------------------------------------------------------------------------
# apartment classes and the span of frame images
# ---------------------------------------------------------------------------


@dataclass
class SteinbergElement:
    """An integer cycle in degree n-2 of the order complex of the building,
    stored sparsely as simplex -> coefficient."""

    complex: SimplicialComplexData
    degree: int
    coefficients: dict[tuple[int, ...], int]

    def boundary(self) -> dict[tuple[int, ...], int]:
        out: dict[tuple[int, ...], int] = {}
        for s, c in self.coefficients.items():
            if self.degree == 0:
                out[()] = out.get((), 0) + c  # reduced: augmentation
                continue
            for i in range(len(s)):
                f = s[:i] + s[i + 1 :]
                out[f] = out.get(f, 0) + ((-1) ** i) * c
        return {k: v for k, v in out.items() if v}

    def is_cycle(self) -> bool:
        return not self.boundary()

    def negate(self) -> "SteinbergElement":
        return SteinbergElement(
            self.complex,
            self.degree,
            {s: -c for s, c in self.coefficients.items()},
        )

    def __eq__(self, other):
        return (
            isinstance(other, SteinbergElement)
            and self.degree == other.degree
            and self.coefficients == other.coefficients
        )


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def apartment_class(building: PosetData, lines) -> SteinbergElement:
    """The fundamental cycle of the apartment sphere of a line decomposition:
    the alternating sum over orderings of the flags of partial sums.

    Antisymmetric under odd permutations of the lines.
    """
    lines = list(lines)
    n_amb = lines[0].n
    if len(lines) != n_amb:
        raise ValueError("need as many lines as the ambient dimension")
    if any(l.dim != 1 for l in lines):
        raise ValueError("decomposition entries must be lines")
    stacked = [l.basis[0] for l in lines]
    if mat_rank(lines[0].field, stacked) != n_amb:
        raise ValueError("lines do not decompose the ambient space")
    complex_data = building.order_complex()
    vertex_index = {s.key(): i for i, s in enumerate(complex_data.vertices)}
    coeffs: dict[tuple[int, ...], int] = {}
    n = len(lines)
    for perm in permutations(range(n)):
        flag = []
        running = lines[perm[0]]
        flag.append(vertex_index[running.key()])
        for i in range(1, n - 1):
            running = sum_subspaces(running, lines[perm[i]])
            flag.append(vertex_index[running.key()])
        simplex = tuple(flag)  # ascending: dimensions strictly increase
        coeffs[simplex] = coeffs.get(simplex, 0) + _perm_sign(perm)
    coeffs = {s: c for s, c in coeffs.items() if c}
    return SteinbergElement(complex_data, n - 2, coeffs)


def alpha_map_image_rank(n: int, q: int) -> int:
    """Rank of the span of the apartment classes of all full frames inside
    the top reduced homology of the building."""
    building = tits_building(n, q)
    complex_data = building.order_complex()
    top = complex_data.simplices.get(n - 2, [])
    index = {s: i for i, s in enumerate(top)}
    field = FiniteField(q)
    frames_complex = frame_complex(n, ("gf", q))
    full_frames = frames_complex.simplices.get(n - 1, [])
    verts = frames_complex.vertices
    basis_rows: list[list[Fraction]] = []
    rank = 0
    for frm in full_frames:
        lines = [span(field, n, [verts[i]]) for i in frm]
        cls = apartment_class(building, lines)
        vec = [Fraction(0)] * len(top)
        for s, c in cls.coefficients.items():
            vec[index[s]] = Fraction(c)
        rank = _add_to_span(basis_rows, vec, rank)
    return rank


def _add_to_span(rows: list[list[Fraction]], vec: list[Fraction], rank: int) -> int:
    v = list(vec)
    for row in rows:
        piv = next(i for i, x in enumerate(row) if x != 0)
        if v[piv] != 0:
            f = v[piv] / row[piv]
            v = [x - f * y for x, y in zip(v, row)]
    if any(x != 0 for x in v):
        rows.append(v)
        rows.sort(key=lambda r: next(i for i, x in enumerate(r) if x != 0))
        return rank + 1
    return rank


# ---------------------------------------------------------------------------
# the pairing-off map on apartment classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairedTerm:
    """One term of the pairing-off expansion: a sign and the ordered tuple of
    line pairs; prefixes() gives the flag of even-size label sets whose
    successive quotients carry the rank-2 factors."""

    sign: int
    pairs: tuple[tuple[object, object], ...]

    def prefixes(self) -> tuple[frozenset, ...]:
        out = []
        acc: frozenset = frozenset()
        for p in self.pairs:
            acc = acc | frozenset(p)
            out.append(acc)
        return tuple(out)


def delta_map(lines) -> list[PairedTerm]:
    """Expand an apartment class on 2n lines as a signed sum over all ways of
    ordering the lines with each consecutive pair increasing, each term a
    tensor of rank-2 apartment classes in successive even quotients."""
    lines = list(lines)
    m = len(lines)
    if m % 2 != 0:
        raise ValueError("need an even number of lines")
    if m > 6:
        raise ValueError("desk scale: at most 6 lines")
    if len(set(lines)) != m:
        raise ValueError("lines must be distinct")
    terms = []
    for perm in permutations(range(m)):
        if any(perm[2 * i] > perm[2 * i + 1] for i in range(m // 2)):
            continue
        sign = _perm_sign(perm)
        pairs = tuple(
            (lines[perm[2 * i]], lines[perm[2 * i + 1]]) for i in range(m // 2)
        )
        terms.append(PairedTerm(sign=sign, pairs=pairs))
    terms.sort(key=lambda t: tuple(str(p) for p in t.pairs))
    return terms


# ---------------------------------------------------------------------------
# truncated connectivity census for frame graphs over O_d
# ---------------------------------------------------------------------------

CENSUS_CAVEAT = (
    "evidence, not proof: a finite truncation can disconnect a connected graph"
)


@dataclass
class ComponentCensus:
    d: int
    radius: int
    vertex_count: int
    edge_count: int
    component_count: int
    component_sizes: list[int]
    caveat: str = CENSUS_CAVEAT


def _elements_of_norm_up_to(fieldk: QuadField, radius: int) -> list[QuadInt]:
    out = []
    t = fieldk.omega_trace
    n = fieldk.norm_coeff
    bmax = 0
    while (n - Fraction(t * t, 4)) * (bmax + 1) ** 2 <= radius:
        bmax += 1
    for b in range(-bmax, bmax + 1):
        a = 0
        while True:
            candidates = [a, -a] if a else [0]
            hit = False
            for aa in candidates:
                x = fieldk.element(aa, b)
                if x.norm() <= radius:
                    out.append(x)
                    hit = True
            if not hit:
                break
            a += 1
    return out


def _is_unimodular_pair(x: QuadInt, y: QuadInt) -> bool:
    """Whether (x, y) generates the unit ideal: the Z-lattice spanned by
    x, wx, y, wy must be the whole ring of integers."""
    fieldk = x.field
    t, n = fieldk.omega_trace, fieldk.norm_coeff
    rows = []
    for z in (x, y):
        rows.append([z.a, z.b])
        rows.append([-n * z.b, z.a + t * z.b])  # coordinates of omega * z
    _, s, _ = smith_normal_form(IntMatrix.from_rows(rows))
    diag = [s.rows[i][i] for i in range(2)]
    return abs(diag[0]) == 1 and abs(diag[1]) == 1


def truncated_b2_components(d: int, radius: int) -> ComponentCensus:
    """Component census of the graph of unit-orbits of unimodular vectors in
    O_d^2 with both coordinate norms <= radius; edges join pairs whose
    determinant is a unit.  Output is exploratory only (see caveat)."""
    fieldk = QuadField(d)
    elems = _elements_of_norm_up_to(fieldk, radius)
    seen = {}
    for x in elems:
        for y in elems:
            if x.is_zero() and y.is_zero():
                continue
            if not _is_unimodular_pair(x, y):
                continue
            best = None
            for u in fieldk.units():
                key = ((u * x).a, (u * x).b, (u * y).a, (u * y).b)
                if best is None or key > best:
                    best = key
            seen[best] = (x, y)
    verts = sorted(seen)
    index = {v: i for i, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    edge_count = 0
    for i, ka in enumerate(verts):
        xa, ya = seen[ka]
        for j in range(i + 1, len(verts)):
            xb, yb = seen[verts[j]]
            det = xa * yb - ya * xb
            if det.norm() == 1:
                edge_count += 1
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    comps: dict[int, int] = {}
    for i in range(len(verts)):
        r = find(i)
        comps[r] = comps.get(r, 0) + 1
    sizes = sorted(comps.values(), reverse=True)
    return ComponentCensus(
        d=d,
        radius=radius,
        vertex_count=len(verts),
        edge_count=edge_count,
        component_count=len(sizes),
        component_sizes=sizes,
    )
