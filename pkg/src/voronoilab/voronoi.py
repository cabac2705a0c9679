"""Perfect-form enumeration and the Voronoi cell complex for GL2 of an
imaginary quadratic integer ring.

The pipeline has three stages, each independently testable:

1. enumerate the perfect forms (walk the flip graph: across every facet of a
   perfect cone sits a unique contiguous perfect form);
2. group the faces of the perfect cones into GL2-orbits with stabilizer and
   orientation bookkeeping, and assemble the boundary matrices of the
   quotient complex relative to its ideal 0-cells;
3. hand the integer matrices to the Smith normal form engine.

All geometry lives in the 4-dimensional rational coordinate space of
Hermitian forms; a cell is identified with the set of minimal vectors
spanning it, one vector per unit orbit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from math import gcd
from pathlib import Path

from .hermitian import (
    HermitianForm,
    MinimalVectorSet,
    collect_minimal,
    evaluate,
    form_conjugate,
    functional_to_form,
    minimal_vectors,
    rank_one_coords,
    short_vectors,
    span_rank,
)
from .homology import ChainComplex, HomologyGroup, IntMatrix
from .polyhedra import (
    Facet,
    RationalCone,
    coords_in_basis,
    face_lattice,
    facet_data,
    facets_of_cone,
    independent_subset,
    rank_of,
)
from .quadarith import Mat2, QuadField, QuadInt, canonical_unit_rep, vec_conj_det

SCHEMA_VERSION = 1


class InternalConsistencyError(RuntimeError):
    """A structural invariant of the computation failed (sign convention,
    closure, or chain-complex axiom)."""


Vector = tuple[QuadInt, QuadInt]


def _vector_key(v: Vector) -> tuple[int, int, int, int]:
    return (v[0].a, v[0].b, v[1].a, v[1].b)


# ---------------------------------------------------------------------------
# stage 1: walking to and between perfect forms
# ---------------------------------------------------------------------------


def _state_at(form, psi, u, lam):
    """Classify form + lam*psi for the boundary walk.

    Returns one of
      ("done", (new_form, minimizers))  minimum still 1 and a new minimizer
                                        pairs negatively with u
      ("near", None)                    minimum 1, no new minimizer
      ("far", witnesses)                some vector dips below 1
      ("far_pd", None)                  left the positive-definite cone
    """
    candidate = form + psi.scale(lam)
    if not candidate.is_positive_definite():
        return ("far_pd", None)
    found = short_vectors(candidate, 1, stop_below=Fraction(1), stop_count=40)
    below = [v for v, val in found if val < 1]
    if below:
        return ("far", below)
    has_new = any(
        _u_pairing(u, v) < 0 for v, val in found if val == 1
    )
    if has_new:
        return ("done", (candidate, collect_minimal(found)))
    return ("near", None)


def _u_pairing(u, v: Vector) -> int:
    rc = rank_one_coords(v)
    return u[0] * rc[0] + u[1] * rc[1] + u[2] * rc[2] + u[3] * rc[3]


def _pd_boundary_hint(form: HermitianForm, psi: HermitianForm) -> float | None:
    """Approximate smallest lam > 0 where form + lam*psi stops being positive
    definite (only a probe hint; exactness is never assumed)."""

    def detat(lam: Fraction) -> Fraction:
        f = form + psi.scale(lam)
        return f.det()

    c0 = detat(Fraction(0))
    c1 = detat(Fraction(1))
    cm1 = detat(Fraction(-1))
    quad_a = (c1 + cm1) / 2 - c0
    quad_b = (c1 - cm1) / 2
    candidates = []
    try:
        if quad_a == 0:
            if quad_b < 0:
                candidates.append(float(-c0 / quad_b))
        else:
            disc = quad_b * quad_b - 4 * quad_a * c0
            if disc >= 0:
                root = float(disc) ** 0.5
                for sgn in (1, -1):
                    lam = (-float(quad_b) + sgn * root) / (2 * float(quad_a))
                    if lam > 0:
                        candidates.append(lam)
        if psi.a < 0:
            candidates.append(float(-form.a / psi.a))
    except OverflowError:
        return None
    if not candidates:
        return None
    return min(candidates)


def _advance(form: HermitianForm, u) -> tuple[HermitianForm, "MinimalVectorSet"]:
    """Largest lam > 0 with min(form + lam*psi) = 1, where psi is the
    Hermitian form dual to the functional u (which must be >= 0 on the
    current minimal vectors).  Returns the form at that lam together with
    its minimal vectors."""
    fieldk = form.field
    psi = functional_to_form(fieldk, u)
    if psi.is_positive_semidefinite():
        psi = psi.scale(-1)
        u = tuple(-x for x in u)

    witnesses: dict[tuple, Fraction] = {}

    def ratio(v: Vector) -> Fraction:
        pairing = _u_pairing(u, v)
        if pairing >= 0:
            raise InternalConsistencyError("witness with nonnegative pairing")
        return (evaluate(form, v) - 1) / Fraction(-pairing)

    def snap(x: float, lo: Fraction, hi: Fraction | None) -> Fraction:
        lam = Fraction(x).limit_denominator(10**6)
        if lam <= lo or (hi is not None and lam >= hi):
            lam = (lo + hi) / 2 if hi is not None else lo * 2 if lo > 0 else Fraction(1)
        return lam

    hint = _pd_boundary_hint(form, psi)
    lam_lo = Fraction(0)
    lam_hi: Fraction | None = None
    for _ in range(500):
        if witnesses:
            lam = min(witnesses.values())
        elif lam_hi is not None:
            lam = snap((float(lam_lo) + float(lam_hi)) / 2, lam_lo, lam_hi)
        elif hint is not None and hint > float(lam_lo):
            lam = snap(float(lam_lo) + 0.97 * (hint - float(lam_lo)), lam_lo, None)
        elif lam_lo > 0:
            lam = lam_lo * 2
        else:
            lam = Fraction(1)
        kind, payload = _state_at(form, psi, u, lam)
        if kind == "done":
            return payload
        if kind == "near":
            if witnesses:
                raise InternalConsistencyError("witness ratio fell short")
            lam_lo = lam
        elif kind == "far_pd":
            lam_hi = lam
        else:  # far, with witnesses
            for v in payload:
                witnesses[_vector_key(v)] = ratio(v)
    raise InternalConsistencyError("boundary walk did not terminate")


def _nullspace_direction(vectors) -> tuple[int, ...]:
    """A primitive integer functional vanishing on all v v* of the given
    vectors (they must span rank < 4)."""
    rows = [[Fraction(x) for x in rank_one_coords(v)] for v in vectors]
    ncols = 4
    r = 0
    piv_cols = []
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = 1 / pr[col]
        rows[r] = pr = [x * inv for x in pr]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        piv_cols.append(col)
        r += 1
    free = next(c for c in range(ncols) if c not in piv_cols)
    sol = [Fraction(0)] * ncols
    sol[free] = Fraction(1)
    for i, col in enumerate(piv_cols):
        sol[col] = -rows[i][free]
    denom = 1
    for x in sol:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in sol]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


def initial_perfect_form(fieldk: QuadField) -> HermitianForm:
    """A perfect form with minimum 1, found by walking from the identity
    form within null directions of the current minimal-vector span."""
    form = HermitianForm.identity(fieldk)
    mvs = minimal_vectors(form)
    for _ in range(8):
        if mvs.min_value != 1:
            form = form.scale(1 / mvs.min_value)
            mvs = minimal_vectors(form)
        if span_rank(mvs.vectors) == 4:
            return form
        u = _nullspace_direction(mvs.vectors)
        form, mvs = _advance(form, u)
    raise InternalConsistencyError("perfection walk did not terminate")


@dataclass
class PerfectFormClass:
    """A GL2-equivalence class of perfect forms, by a representative with
    minimum 1, together with its Voronoi cone and facet data."""

    label: str
    representative: HermitianForm
    min_vectors: MinimalVectorSet
    cone: RationalCone
    facets: tuple[Facet, ...]
    neighbors: dict[int, str] = dataclass_field(default_factory=dict)

    @classmethod
    def from_form(
        cls, label: str, form: HermitianForm, mvs: MinimalVectorSet | None = None
    ) -> "PerfectFormClass":
        if mvs is None:
            mvs = minimal_vectors(form)
        if mvs.min_value != 1:
            form = form.scale(1 / mvs.min_value)
            mvs = minimal_vectors(form)
        cone = RationalCone.from_vectors(
            [rank_one_coords(v) for v in mvs.vectors]
        )
        if cone.dim != 4:
            raise ValueError(f"form is not perfect (rank {cone.dim})")
        return cls(
            label=label,
            representative=form,
            min_vectors=mvs,
            cone=cone,
            facets=tuple(facets_of_cone(cone)),
        )


def _flip_with_minimizers(
    p: PerfectFormClass, facet: Facet
) -> tuple[HermitianForm, MinimalVectorSet]:
    vals = [_u_pairing(facet.normal, v) for v in p.min_vectors.vectors]
    incident = tuple(i for i, v in enumerate(vals) if v == 0)
    if incident != facet.incident or any(v < 0 for v in vals):
        raise ValueError("facet does not belong to this perfect form")
    neighbor, mvs = _advance(p.representative, facet.normal)
    if span_rank(mvs.vectors) != 4:
        raise InternalConsistencyError("flip produced a non-perfect form")
    return neighbor, mvs


def flip_neighbor(p: PerfectFormClass, facet: Facet) -> HermitianForm:
    """The unique perfect form contiguous to p across the given facet."""
    return _flip_with_minimizers(p, facet)[0]


# ---------------------------------------------------------------------------
# GL2-equivalence of vector configurations (one engine, two uses)
# ---------------------------------------------------------------------------


def _pair_norm(u: Vector, v: Vector) -> int:
    return vec_conj_det(u, v).norm()


def _config_profiles(verts):
    return [
        tuple(sorted(_pair_norm(v, w) for w in verts if w is not v))
        for v in verts
    ]


def config_key(verts) -> tuple:
    """GL2-invariant fingerprint of a configuration of unit-orbit vectors."""
    return (len(verts), tuple(sorted(_config_profiles(verts))))


def _solve_map(src1, src2, dst1, dst2) -> Mat2 | None:
    """g with g*src1 = dst1 and g*src2 = dst2 over the ring, if integral."""
    basis = Mat2.from_columns(src1, src2)
    delta = basis.det()
    numer = Mat2.from_columns(dst1, dst2) * basis.adjugate()
    entries = []
    for row in numer.e:
        out_row = []
        for x in row:
            q = delta.divide_exact(x)
            if q is None:
                return None
            out_row.append(q)
        entries.append(tuple(out_row))
    return Mat2(tuple(entries))


def config_isomorphisms(src, dst, *, first_only=True) -> list[Mat2]:
    """Elements g of GL2(O) with g . {unit orbits of src} = {unit orbits of dst}.

    src and dst are lists of canonical unit-orbit representatives.  Returns
    at most one element when first_only.
    """
    if len(src) != len(dst):
        return []
    fieldk = src[0][0].field
    units = fieldk.units()
    dst_keys = {_vector_key(canonical_unit_rep(v)) for v in dst}
    src_profiles = _config_profiles(src)
    dst_profiles = _config_profiles(dst)
    if sorted(src_profiles) != sorted(dst_profiles):
        return []
    # anchor: the pair of src vectors with the smallest nonzero det norm
    n = len(src)
    anchor = min(
        ((i, j) for i in range(n) for j in range(n) if i != j),
        key=lambda ij: (_pair_norm(src[ij[0]], src[ij[1]]), ij),
    )
    i0, j0 = anchor
    anchor_norm = _pair_norm(src[i0], src[j0])
    found: list[Mat2] = []
    for p in range(n):
        if dst_profiles[p] != src_profiles[i0]:
            continue
        for q in range(n):
            if q == p or dst_profiles[q] != src_profiles[j0]:
                continue
            if _pair_norm(dst[p], dst[q]) != anchor_norm:
                continue
            for u1 in units:
                t1 = (u1 * dst[p][0], u1 * dst[p][1])
                for u2 in units:
                    t2 = (u2 * dst[q][0], u2 * dst[q][1])
                    g = _solve_map(src[i0], src[j0], t1, t2)
                    if g is None or not g.det().is_unit():
                        continue
                    image = {
                        _vector_key(canonical_unit_rep(g.apply(v))) for v in src
                    }
                    if image == dst_keys:
                        found.append(g)
                        if first_only:
                            return found
    return found


def _equivalent_with_minimizers(
    f1: HermitianForm,
    m1: MinimalVectorSet,
    f2: HermitianForm,
    m2: MinimalVectorSet,
) -> Mat2 | None:
    if m1.min_value != 1 or m2.min_value != 1:
        raise ValueError("forms must be normalized to minimum 1")
    if len(m1) != len(m2) or f1.det() != f2.det():
        return None
    matches = config_isomorphisms(list(m2.vectors), list(m1.vectors))
    if not matches:
        return None
    g = matches[0]
    if form_conjugate(f1, g) != f2:
        raise InternalConsistencyError("configuration map is not a form isometry")
    return g


def are_equivalent(f1: HermitianForm, f2: HermitianForm) -> Mat2 | None:
    """A matrix g in GL2(O) with g* f1 g = f2, or None.

    Both forms must be positive definite with minimum 1.
    """
    return _equivalent_with_minimizers(
        f1, minimal_vectors(f1), f2, minimal_vectors(f2)
    )


def enumerate_perfect_forms(fieldk: QuadField) -> list[PerfectFormClass]:
    """All perfect-form classes: breadth-first closure of the flip graph
    modulo GL2(O)-equivalence, labels in discovery order."""
    seed = PerfectFormClass.from_form("pf1", initial_perfect_form(fieldk))
    classes = [seed]
    buckets: dict[tuple, list[int]] = {(len(seed.min_vectors), seed.representative.det()): [0]}
    pending = [0]
    while pending:
        idx = pending.pop(0)
        cls = classes[idx]
        for fi, facet in enumerate(cls.facets):
            form, mvs = _flip_with_minimizers(cls, facet)
            key = (len(mvs), form.det())
            match = None
            for known_idx in buckets.get(key, []):
                known = classes[known_idx]
                if (
                    _equivalent_with_minimizers(
                        known.representative, known.min_vectors, form, mvs
                    )
                    is not None
                ):
                    match = known_idx
                    break
            if match is None:
                candidate = PerfectFormClass.from_form(
                    f"pf{len(classes) + 1}", form, mvs
                )
                classes.append(candidate)
                buckets.setdefault(key, []).append(len(classes) - 1)
                pending.append(len(classes) - 1)
                match = len(classes) - 1
            cls.neighbors[fi] = classes[match].label
    return classes


# ---------------------------------------------------------------------------
# polytope combinatorics
# ---------------------------------------------------------------------------

_SHAPES = {
    (4, 6, 4, (3, 3, 3, 3)): "tetrahedron",
    (5, 8, 5, (3, 3, 3, 3, 4)): "square pyramid",
    (6, 9, 5, (3, 3, 4, 4, 4)): "triangular prism",
    (6, 12, 8, (3,) * 8): "octahedron",
    (9, 15, 8, (3, 3, 3, 3, 4, 4, 4, 6)): "hexagonal cap",
    (12, 18, 8, (3, 3, 3, 3, 6, 6, 6, 6)): "truncated tetrahedron",
    (12, 24, 14, (3,) * 8 + (4,) * 6): "cuboctahedron",
}


def polytope_shape(p: PerfectFormClass) -> str:
    """Combinatorial type of the ideal polytope of a perfect cone, from its
    (vertices, edges, faces) counts and facet-size multiset."""
    lattice = face_lattice(p.cone, 1)
    v = len(lattice[1])
    e = len(lattice[2])
    f = len(lattice[3])
    sizes = tuple(sorted(len(fc.incident) for fc in p.facets))
    return _SHAPES.get((v, e, f, sizes), "other")


# ---------------------------------------------------------------------------
# stage 2: cell orbits and the quotient complex
# ---------------------------------------------------------------------------


@dataclass
class VoronoiCell:
    """A GL2-orbit of cells of the tessellation, by a representative.

    dim is the cell dimension (1..3); the spanning cone has dimension
    dim + 1.  vertices are the minimal vectors on the cell's extreme rays,
    one per unit orbit.
    """

    orbit_label: str
    dim: int
    vertices: tuple[Vector, ...]
    stabilizer_order: int
    orientation_preserved: bool
    basis: tuple[tuple, ...]  # ambient span basis fixing the reference orientation


def _basis_forms(fieldk: QuadField):
    one, zero, omega = fieldk.one(), fieldk.zero(), fieldk.omega()
    return (
        Mat2(((one, zero), (zero, zero))),
        Mat2(((zero, zero), (zero, one))),
        Mat2(((zero, one), (one, zero))),
        Mat2(((zero, omega), (omega.conj(), zero))),
    )


def hermitian_action_matrix(g: Mat2) -> list[list[int]]:
    """The 4x4 integer matrix of A -> g A g* on form coordinates."""
    cols = []
    gstar = g.conj_transpose()
    for e in _basis_forms(g.field):
        x = g * e * gstar
        (p, q), (_, s) = x.e
        if p.b or s.b:
            raise InternalConsistencyError("conjugated form not Hermitian")
        cols.append((p.a, s.a, q.a, q.b))
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def _apply_matrix(m, vec):
    return tuple(sum(m[i][j] * vec[j] for j in range(len(vec))) for i in range(len(m)))


def _span_basis(coords_list):
    """Deterministic ambient basis of the span of the given coordinate vectors."""
    r = rank_of(coords_list)
    if r == len(coords_list[0]):
        n = len(coords_list[0])
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    idx = independent_subset(coords_list, r)
    return tuple(tuple(coords_list[i]) for i in idx)


def _orientation_sign(basis, matrix4, vectors) -> int:
    """Sign of det of the action of matrix4 on span(basis), the images of
    `vectors` (a basis of the span) expressed in `basis` coordinates."""
    cols = []
    for v in vectors:
        img = _apply_matrix(matrix4, v)
        cols.append(coords_in_basis(list(basis), img))
    n = len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]
    d = _fraction_det(rows)
    if d == 0:
        raise InternalConsistencyError("degenerate orientation map")
    return 1 if d > 0 else -1


def _fraction_det(rows):
    n = len(rows)
    rows = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if rows[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        pr = rows[col]
        det *= pr[col]
        inv = 1 / pr[col]
        for i in range(col + 1, n):
            if rows[i][col] != 0:
                f = rows[i][col] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
    return det


class OrbitTable:
    """All GL2-orbits of tessellation cells in dimensions 1..3, with a
    locate() that maps any concrete cell to its orbit and a transporter."""

    def __init__(self):
        self.orbits: dict[int, list[VoronoiCell]] = {1: [], 2: [], 3: []}
        self._buckets: dict[tuple, list[VoronoiCell]] = {}

    def locate(self, dim: int, vertices) -> tuple[VoronoiCell, Mat2]:
        key = (dim, config_key(vertices))
        for orbit in self._buckets.get(key, []):
            maps = config_isomorphisms(list(vertices), list(orbit.vertices))
            if maps:
                return orbit, maps[0]
        raise KeyError("cell does not belong to any known orbit")

    def add_or_locate(self, dim: int, vertices) -> tuple[VoronoiCell, Mat2, bool]:
        key = (dim, config_key(vertices))
        for orbit in self._buckets.get(key, []):
            maps = config_isomorphisms(list(vertices), list(orbit.vertices))
            if maps:
                return orbit, maps[0], False
        stab = config_isomorphisms(list(vertices), list(vertices), first_only=False)
        coords = [rank_one_coords(v) for v in vertices]
        basis = _span_basis(coords)
        span_vecs = [list(b) for b in basis]
        preserved = True
        for g in stab:
            m = hermitian_action_matrix(g)
            if _orientation_sign(basis, m, span_vecs) < 0:
                preserved = False
                break
        label = f"c{dim}.{len(self.orbits[dim])}"
        orbit = VoronoiCell(
            orbit_label=label,
            dim=dim,
            vertices=tuple(vertices),
            stabilizer_order=len(stab),
            orientation_preserved=preserved,
            basis=basis,
        )
        self.orbits[dim].append(orbit)
        self._buckets.setdefault(key, []).append(orbit)
        return orbit, Mat2.identity(vertices[0][0].field), True


def cell_orbits(classes: list[PerfectFormClass]) -> OrbitTable:
    """Group all faces of all perfect cones (cone dims 2..4, cell dims 1..3)
    into GL2-orbits with stabilizer order and orientation bookkeeping."""
    labels = {c.label for c in classes}
    for cls in classes:
        if len(cls.neighbors) != len(cls.facets) or any(
            lbl not in labels for lbl in cls.neighbors.values()
        ):
            raise InternalConsistencyError(
                f"class list is not flip-closed at {cls.label}"
            )
    table = OrbitTable()
    for cls in classes:
        verts = cls.min_vectors.vectors
        _, _, created = table.add_or_locate(3, list(verts))
        if not created:
            raise InternalConsistencyError(
                "distinct perfect-form classes share a top cell orbit"
            )
        lattice = face_lattice(cls.cone, 2)
        for cone_dim in (3, 2):
            for face in lattice[cone_dim]:
                face_verts = [verts[i] for i in face]
                table.add_or_locate(cone_dim - 1, face_verts)
    return table


@dataclass
class VoronoiComplexData:
    """Chain data of the Voronoi complex: orientation-preserving orbits per
    dimension and the two boundary matrices (0-cells are omitted: the
    complex is taken relative to the ideal boundary)."""

    cells: dict[int, list[VoronoiCell]]
    d3: IntMatrix
    d2: IntMatrix

    def chain_complex(self) -> ChainComplex:
        dims = [0, len(self.cells[1]), len(self.cells[2]), len(self.cells[3])]
        return ChainComplex(
            dims,
            {
                1: IntMatrix.zero(0, dims[1]),
                2: self.d2,
                3: self.d3,
            },
        )

    def homology(self, degree: int) -> HomologyGroup:
        return self.chain_complex().homology(degree)


def _boundary_matrix(table: OrbitTable, dim: int) -> IntMatrix:
    """Boundary matrix from orientation-preserving dim-cells to (dim-1)-cells."""
    sources = [c for c in table.orbits[dim] if c.orientation_preserved]
    targets = [c for c in table.orbits[dim - 1] if c.orientation_preserved]
    target_index = {c.orbit_label: i for i, c in enumerate(targets)}
    mat = IntMatrix.zero(len(targets), len(sources))
    for col, cell in enumerate(sources):
        coords = [rank_one_coords(v) for v in cell.vertices]
        restricted = [coords_in_basis(list(cell.basis), c) for c in coords]
        facets, _ = facet_data(restricted)
        for normal, incident in facets:
            face_verts = [cell.vertices[i] for i in incident]
            orbit, h = table.locate(dim - 1, face_verts)
            if not orbit.orientation_preserved:
                continue
            # induced orientation: outward direction first, then a basis of
            # the facet, compared against the source cell's reference basis
            face_coords_r = [restricted[i] for i in incident]
            sub_idx = independent_subset(face_coords_r, len(cell.basis) - 1)
            frame = [tuple(-x for x in normal)] + [face_coords_r[i] for i in sub_idx]
            rows = [
                [Fraction(frame[j][i]) for j in range(len(frame))]
                for i in range(len(cell.basis))
            ]
            s1 = 1 if _fraction_det(rows) > 0 else -1
            # transport the same facet basis to the orbit representative
            m = hermitian_action_matrix(h)
            face_coords_amb = [coords[incident[i]] for i in sub_idx]
            imgs = [
                coords_in_basis(list(orbit.basis), _apply_matrix(m, v))
                for v in face_coords_amb
            ]
            k = len(imgs)
            rows2 = [[Fraction(imgs[j][i]) for j in range(k)] for i in range(k)]
            transported = _fraction_det(rows2)
            if transported == 0:
                raise InternalConsistencyError("degenerate facet transport")
            s2 = 1 if transported > 0 else -1
            mat.rows[target_index[orbit.orbit_label]][col] += s1 * s2
    return mat


def assemble_complex(table: OrbitTable) -> VoronoiComplexData:
    """Boundary matrices over the orientation-preserving orbits; raises if
    the chain-complex axiom fails."""
    d3 = _boundary_matrix(table, 3)
    d2 = _boundary_matrix(table, 2)
    prod = d2 * d3
    if not prod.is_zero():
        raise InternalConsistencyError("d2 . d3 != 0: orientation bookkeeping bug")
    cells = {
        d: [c for c in table.orbits[d] if c.orientation_preserved] for d in (1, 2, 3)
    }
    return VoronoiComplexData(cells=cells, d3=d3, d2=d2)


# ---------------------------------------------------------------------------
# stage 3 + persistence
# ---------------------------------------------------------------------------


@dataclass
class VoronoiReport:
    """End-to-end result for one discriminant, JSON-serializable."""

    d: int
    classes: list[PerfectFormClass]
    shapes: list[str]
    table: OrbitTable | None
    complex_data: VoronoiComplexData | None
    homology: dict[int, HomologyGroup]

    def cell_type_counts(self) -> tuple[int, int, int]:
        return (
            len(self.table.orbits[3]),
            len(self.table.orbits[2]),
            len(self.table.orbits[1]),
        )

    def form_summaries(self) -> list[dict]:
        return [
            {
                "label": cls.label,
                "shape": shape,
                "num_min_vectors": len(cls.min_vectors),
            }
            for cls, shape in zip(self.classes, self.shapes)
        ]

    def to_dict(self) -> dict:
        forms = []
        for cls, shape in zip(self.classes, self.shapes):
            forms.append(
                {
                    "label": cls.label,
                    "coords": [str(x) for x in cls.representative.coords()],
                    "min_value": str(cls.min_vectors.min_value),
                    "min_vectors": [list(_vector_key(v)) for v in cls.min_vectors.vectors],
                    "shape": shape,
                    "facets": [
                        {"normal": list(f.normal), "incident": list(f.incident)}
                        for f in cls.facets
                    ],
                    "neighbors": {str(k): v for k, v in sorted(cls.neighbors.items())},
                }
            )
        orbits = {}
        for dim in (3, 2, 1):
            orbits[str(dim)] = [
                {
                    "label": c.orbit_label,
                    "vertices": [list(_vector_key(v)) for v in c.vertices],
                    "stabilizer_order": c.stabilizer_order,
                    "orientation_preserved": c.orientation_preserved,
                }
                for c in self.table.orbits[dim]
            ]
        return {
            "schema_version": SCHEMA_VERSION,
            "d": self.d,
            "perfect_forms": forms,
            "cell_orbits": orbits,
            "boundaries": {
                "d3": _matrix_dict(self.complex_data.d3),
                "d2": _matrix_dict(self.complex_data.d2),
            },
            "homology": {
                str(k): {"free_rank": h.free_rank, "torsion": list(h.torsion)}
                for k, h in sorted(self.homology.items())
            },
        }


def _matrix_dict(m: IntMatrix) -> dict:
    return {
        "rows": m.nrows,
        "cols": m.ncols,
        "entries": [x for row in m.rows for x in row],
    }


def voronoi_pipeline(d: int, cache_dir=None, threads: int | None = None) -> VoronoiReport:
    """Run (or load from cache) the full three-stage computation for one
    discriminant.  `threads` is accepted for interface stability; the exact
    arithmetic engine is sequential and deterministic."""
    if cache_dir is not None:
        cache_dir = Path(cache_dir)
        cache_file = cache_dir / f"voronoi_{d}.json"
        if cache_file.exists():
            with open(cache_file) as fh:
                return _report_from_dict(json.load(fh))
    fieldk = QuadField(d)
    classes = enumerate_perfect_forms(fieldk)
    shapes = [polytope_shape(c) for c in classes]
    table = cell_orbits(classes)
    complex_data = assemble_complex(table)
    homology = {k: complex_data.homology(k) for k in (1, 2, 3)}
    report = VoronoiReport(
        d=d,
        classes=classes,
        shapes=shapes,
        table=table,
        complex_data=complex_data,
        homology=homology,
    )
    if cache_dir is not None:
        cache_dir.mkdir(parents=True, exist_ok=True)
        with open(cache_dir / f"voronoi_{d}.json", "w") as fh:
            json.dump(report.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
    return report


class _LoadedReport(VoronoiReport):
    """Report reconstructed from cache: carries the serialized dict verbatim
    so cached and cold runs emit byte-identical JSON."""

    def __init__(self, raw: dict):
        self.raw = raw
        self.d = raw["d"]
        self.shapes = [f["shape"] for f in raw["perfect_forms"]]
        self._labels = [f["label"] for f in raw["perfect_forms"]]
        self._orbit_counts = {
            int(k): len(v) for k, v in raw["cell_orbits"].items()
        }
        self.homology = {
            int(k): HomologyGroup(h["free_rank"], tuple(h["torsion"]))
            for k, h in raw["homology"].items()
        }
        self.classes = []
        self.table = None
        self.complex_data = None

    def cell_type_counts(self):
        return (
            self._orbit_counts[3],
            self._orbit_counts[2],
            self._orbit_counts[1],
        )

    def form_summaries(self) -> list[dict]:
        return [
            {
                "label": f["label"],
                "shape": f["shape"],
                "num_min_vectors": len(f["min_vectors"]),
            }
            for f in self.raw["perfect_forms"]
        ]

    def to_dict(self) -> dict:
        return self.raw


def _report_from_dict(raw: dict) -> VoronoiReport:
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported cache schema: {raw.get('schema_version')}")
    return _LoadedReport(raw)
