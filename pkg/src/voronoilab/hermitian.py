"""Rank-2 Hermitian forms over Q(sqrt(d)), minimal vectors, perfection.

A form is the matrix [[a, b], [conj(b), c]] with a, c rational and
b = b1 + bw*omega; the coordinate tuple (a, c, b1, bw) identifies the form
with a point of Q^4.  The value of the form at a column vector v over the
ring of integers is v* A v, a rational number.

Minimal vectors are found by short-vector enumeration against the rank-4
Z-lattice realization of the form (exact rational Cholesky, no floats).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .quadarith import Mat2, QuadField, QuadInt, QuadRat, canonical_unit_rep

Vector = tuple[QuadInt, QuadInt]
Coords = tuple[Fraction, Fraction, Fraction, Fraction]


class HermitianForm:
    """A 2x2 Hermitian matrix over K with rational coordinates (a, c, b1, bw)."""

    __slots__ = ("field", "a", "c", "b1", "bw")

    def __init__(self, field: QuadField, a, c, b1, bw):
        self.field = field
        self.a = Fraction(a)
        self.c = Fraction(c)
        self.b1 = Fraction(b1)
        self.bw = Fraction(bw)

    @classmethod
    def identity(cls, field: QuadField) -> "HermitianForm":
        return cls(field, 1, 1, 0, 0)

    @classmethod
    def from_coords(cls, field: QuadField, coords) -> "HermitianForm":
        a, c, b1, bw = coords
        return cls(field, a, c, b1, bw)

    def coords(self) -> Coords:
        return (self.a, self.c, self.b1, self.bw)

    def off_diagonal(self) -> QuadRat:
        return QuadRat.from_coeffs(self.field, self.b1, self.bw)

    def matrix(self) -> tuple[tuple[QuadRat, QuadRat], tuple[QuadRat, QuadRat]]:
        b = self.off_diagonal()
        aa = QuadRat.from_coeffs(self.field, self.a, Fraction(0))
        cc = QuadRat.from_coeffs(self.field, self.c, Fraction(0))
        return ((aa, b), (b.conj(), cc))

    def det(self) -> Fraction:
        t = self.field.omega_trace
        n = self.field.norm_coeff
        norm_b = self.b1 * self.b1 + t * self.b1 * self.bw + n * self.bw * self.bw
        return self.a * self.c - norm_b

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.det() > 0

    def is_positive_semidefinite(self) -> bool:
        return self.a >= 0 and self.c >= 0 and self.det() >= 0

    def scale(self, s) -> "HermitianForm":
        s = Fraction(s)
        return HermitianForm(
            self.field, self.a * s, self.c * s, self.b1 * s, self.bw * s
        )

    def __add__(self, other: "HermitianForm") -> "HermitianForm":
        if self.field.d != other.field.d:
            raise ValueError("mixed fields")
        return HermitianForm(
            self.field,
            self.a + other.a,
            self.c + other.c,
            self.b1 + other.b1,
            self.bw + other.bw,
        )

    def __eq__(self, other):
        return (
            isinstance(other, HermitianForm)
            and self.field.d == other.field.d
            and self.coords() == other.coords()
        )

    def __hash__(self):
        return hash((self.field.d, self.coords()))

    def __repr__(self):
        return f"HermitianForm(d={self.field.d}, {self.a}, {self.c}, b={self.b1}+{self.bw}w)"


@dataclass(frozen=True)
class MinimalVectorSet:
    """The minimum of a form and its minimizers, one per unit orbit."""

    min_value: Fraction
    vectors: tuple[Vector, ...]

    def __len__(self):
        return len(self.vectors)


# -- K-arithmetic on (x + y*omega) pairs of Fractions -----------------------


def _kmul(field: QuadField, p, q):
    t, n = field.omega_trace, field.norm_coeff
    x1, y1 = p
    x2, y2 = q
    return (x1 * x2 - n * y1 * y2, x1 * y2 + y1 * x2 + t * y1 * y2)


def _kconj(field: QuadField, p):
    x, y = p
    return (x + field.omega_trace * y, -y)


def _ktrace(field: QuadField, p) -> Fraction:
    x, y = p
    return 2 * x + field.omega_trace * y


def evaluate(form: HermitianForm, v: Vector) -> Fraction:
    """The form value v* A v."""
    v1, v2 = v
    if v1.field.d != form.field.d:
        raise ValueError("vector is over a different field")
    w = v1.conj() * v2  # conj(v1) * v2
    cross = _ktrace(
        form.field, _kmul(form.field, (form.b1, form.bw), (Fraction(w.a), Fraction(w.b)))
    )
    return form.a * v1.norm() + form.c * v2.norm() + cross


def hermitian_pair(form: HermitianForm, u: Vector, v: Vector):
    """The sesquilinear pairing u* A v as a coefficient pair (x, y) = x + y*omega."""
    f = form.field
    u1 = (Fraction(u[0].a), Fraction(u[0].b))
    u2 = (Fraction(u[1].a), Fraction(u[1].b))
    v1 = (Fraction(v[0].a), Fraction(v[0].b))
    v2 = (Fraction(v[1].a), Fraction(v[1].b))
    b = (form.b1, form.bw)
    bc = _kconj(f, b)
    terms = [
        _kmul(f, (form.a, Fraction(0)), _kmul(f, _kconj(f, u1), v1)),
        _kmul(f, b, _kmul(f, _kconj(f, u1), v2)),
        _kmul(f, bc, _kmul(f, _kconj(f, u2), v1)),
        _kmul(f, (form.c, Fraction(0)), _kmul(f, _kconj(f, u2), v2)),
    ]
    x = sum(t[0] for t in terms)
    y = sum(t[1] for t in terms)
    return (x, y)


def evaluate_via_matrix(form: HermitianForm, v: Vector) -> Fraction:
    """v* A v computed entrywise in exact field arithmetic (slow path,
    used as an independent check of `evaluate`)."""
    (aa, b), (bc, cc) = form.matrix()
    f = form.field
    v1 = QuadRat(v[0])
    v2 = QuadRat(v[1])
    total = (
        v1.conj() * aa * v1
        + v1.conj() * b * v2
        + v2.conj() * bc * v1
        + v2.conj() * cc * v2
    )
    return total.as_fraction()


def rank_one_coords(v: Vector) -> tuple[int, int, int, int]:
    """Coordinates of the rank-1 Hermitian matrix v v* in the (a, c, b1, bw) basis."""
    v1, v2 = v
    w = v1 * v2.conj()
    return (v1.norm(), v2.norm(), w.a, w.b)


def pairing_gram(field: QuadField) -> list[list[int]]:
    """Gram matrix of the trace pairing <A, B> = Tr(A B) in form coordinates.

    evaluate(A, v) = coords(A)^T * P * rank_one_coords(v).
    """
    t, n = field.omega_trace, field.norm_coeff
    return [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, t], [0, 0, t, 2 * n]]


def functional_to_form(field: QuadField, u) -> HermitianForm:
    """The Hermitian form psi with Tr(psi * v v*) = u . rank_one_coords(v) for all v."""
    t, n = field.omega_trace, field.norm_coeff
    disc = 4 * n - t * t
    u0, u1, u2, u3 = (Fraction(x) for x in u)
    return HermitianForm(
        field,
        u0,
        u1,
        (2 * n * u2 - t * u3) / disc,
        (2 * u3 - t * u2) / disc,
    )


def real_gram(form: HermitianForm) -> list[list[Fraction]]:
    """Gram matrix of the rank-4 Z-lattice (e1, w e1, e2, w e2) under the form.

    For v with integer coordinates z in that basis, z^T G z = evaluate(form, v).
    """
    if not form.is_positive_definite():
        raise ValueError("form is not positive definite")
    f = form.field
    basis = [
        (f.one(), f.zero()),
        (f.omega(), f.zero()),
        (f.zero(), f.one()),
        (f.zero(), f.omega()),
    ]
    vals = [evaluate(form, b) for b in basis]
    g = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(4):
        g[i][i] = vals[i]
        for j in range(i + 1, 4):
            s = (
                basis[i][0] + basis[j][0],
                basis[i][1] + basis[j][1],
            )
            gij = (evaluate(form, s) - vals[i] - vals[j]) / 2
            g[i][j] = g[j][i] = gij
    return g


def vector_from_z(field: QuadField, z) -> Vector:
    return (QuadInt(field, z[0], z[1]), QuadInt(field, z[2], z[3]))


def _ldl(g):
    """g = L D L^T with unit lower-triangular L; returns (d, l) or raises."""
    m = len(g)
    d = [Fraction(0)] * m
    l = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        di = g[i][i] - sum(d[k] * l[i][k] * l[i][k] for k in range(i))
        if di <= 0:
            raise ValueError("form is not positive definite")
        d[i] = di
        l[i][i] = Fraction(1)
        for j in range(i + 1, m):
            l[j][i] = (
                g[j][i] - sum(d[k] * l[i][k] * l[j][k] for k in range(i))
            ) / di
    return d, l


class _EnumAborted(Exception):
    pass


def short_vectors(
    form: HermitianForm,
    bound,
    stop_below=None,
    stop_count: int = 0,
) -> list[tuple[Vector, Fraction]]:
    """All vectors v != 0 with evaluate(form, v) <= bound, one per {v, -v} pair.

    Fincke-Pohst enumeration on the real Gram matrix; exact throughout.
    If stop_below is given, enumeration aborts early once stop_count vectors
    with value < stop_below have been found (the partial list is returned;
    callers use this only to harvest witnesses).
    """
    bound = Fraction(bound)
    if bound < 0:
        return []
    g = real_gram(form)
    d, l = _ldl(g)
    m = 4
    results: list[tuple[tuple[int, ...], Fraction]] = []
    z = [0] * m
    below = 0

    def recurse(i: int, rem: Fraction):
        nonlocal below
        if i < 0:
            if any(z):
                zt = tuple(z)
                if zt > tuple(-x for x in zt):
                    val = bound - rem
                    results.append((zt, val))
                    if stop_below is not None and val < stop_below:
                        below += 1
                        if below >= stop_count:
                            raise _EnumAborted
            return
        # center of the allowed interval for z[i]
        c = Fraction(sum(l[j][i] * z[j] for j in range(i + 1, m)))
        start = _floor_fraction(-c)
        k = start
        while True:
            t = d[i] * (k + c) * (k + c)
            if t > rem:
                break
            z[i] = k
            recurse(i - 1, rem - t)
            k -= 1
        k = start + 1
        while True:
            t = d[i] * (k + c) * (k + c)
            if t > rem:
                break
            z[i] = k
            recurse(i - 1, rem - t)
            k += 1
        z[i] = 0

    try:
        recurse(m - 1, bound)
    except _EnumAborted:
        pass
    field = form.field
    return [(vector_from_z(field, zt), val) for zt, val in results]


def _floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def collect_minimal(found) -> MinimalVectorSet:
    """Filter an exhaustive short-vector list down to the minimizers, one
    canonical representative per unit orbit, deterministically ordered."""
    min_value = min(val for _, val in found)
    reps = {}
    for v, val in found:
        if val != min_value:
            continue
        w = canonical_unit_rep(v)
        reps[(w[0].a, w[0].b, w[1].a, w[1].b)] = w
    ordered = [reps[k] for k in sorted(reps, reverse=True)]
    return MinimalVectorSet(min_value=min_value, vectors=tuple(ordered))


def minimal_vectors(form: HermitianForm) -> MinimalVectorSet:
    """Complete set of minimizers of the form, one per unit orbit, in a
    deterministic order (descending coordinate tuples of canonical reps)."""
    if not form.is_positive_definite():
        raise ValueError("form is not positive definite")
    upper = min(form.a, form.c)  # achieved by a basis vector
    # probe upward from a small bound: empty enumerations are cheap, and the
    # first nonempty bound is within a factor 4 of the true minimum
    probes = [upper]
    while probes[-1] > upper / 4**12:
        probes.append(probes[-1] / 4)
    for bound in reversed(probes):
        found = short_vectors(form, bound)
        if found:
            return collect_minimal(found)
    raise AssertionError("unreachable: the basis-vector bound is achieved")


def _row_reduce_rank(rows) -> int:
    rows = [[Fraction(x) for x in r] for r in rows]
    ncols = len(rows[0]) if rows else 0
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
    return r


def perfection_rank(form: HermitianForm) -> int:
    """Rank of the span of {v v* : v minimal} in the 4-space of Hermitian forms.

    The form is perfect exactly when this is 4.
    """
    mvs = minimal_vectors(form)
    return span_rank(mvs.vectors)


def span_rank(vectors) -> int:
    return _row_reduce_rank([rank_one_coords(v) for v in vectors])


def form_conjugate(form: HermitianForm, g: Mat2) -> HermitianForm:
    """The pullback g* A g, so that evaluate(g* A g, v) = evaluate(A, g v)."""
    f = form.field
    e1 = (f.one(), f.zero())
    e2 = (f.zero(), f.one())
    ge1 = g.apply(e1)
    ge2 = g.apply(e2)
    a = evaluate(form, ge1)
    c = evaluate(form, ge2)
    b1, bw = hermitian_pair(form, ge1, ge2)
    return HermitianForm(f, a, c, b1, bw)


def solve_form_from_vectors(
    field: QuadField, vectors, value=1
) -> HermitianForm:
    """The unique form with evaluate(form, v) = value for all given vectors.

    Raises if the linear conditions are inconsistent or do not pin down the
    form (i.e. the vectors are not a perfect configuration).
    """
    value = Fraction(value)
    p = pairing_gram(field)
    rows = []
    for v in vectors:
        rc = rank_one_coords(v)
        rows.append([sum(p[i][j] * rc[j] for j in range(4)) for i in range(4)])
    # solve rows . coords = value for coords
    aug = [[Fraction(x) for x in r] + [value] for r in rows]
    ncols = 4
    r = 0
    piv_cols = []
    for col in range(ncols):
        piv = next((i for i in range(r, len(aug)) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pr = aug[r]
        inv = 1 / pr[col]
        aug[r] = pr = [x * inv for x in pr]
        for i in range(len(aug)):
            if i != r and aug[i][col] != 0:
                fct = aug[i][col]
                aug[i] = [x - fct * y for x, y in zip(aug[i], pr)]
        piv_cols.append(col)
        r += 1
    if r < 4:
        raise ValueError("vector configuration does not determine a form")
    for i in range(r, len(aug)):
        if aug[i][4] != 0:
            raise ValueError("inconsistent form conditions")
    coords = [Fraction(0)] * 4
    for i, col in enumerate(piv_cols):
        coords[col] = aug[i][4]
    return HermitianForm.from_coords(field, coords)
