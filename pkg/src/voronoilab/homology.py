"""Integer linear algebra: Smith normal form, chain complexes, homology groups.

Everything here is exact over Z (or Q for solving); matrices are dense lists
of Python ints, which is plenty for the matrix sizes this package produces
(at most a few thousand columns).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class IntMatrix:
    """Dense integer matrix with explicit shape (rows may be zero)."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [[0] * ncols for _ in range(nrows)]
        else:
            rows = [list(r) for r in rows]
            if len(rows) != nrows or any(len(r) != ncols for r in rows):
                raise ValueError("shape mismatch")
        self.rows = rows

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            raise ValueError("use IntMatrix(0, ncols) for empty matrices")
        return cls(len(rows), len(rows[0]), rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        m = cls(n, n)
        for i in range(n):
            m.rows[i][i] = 1
        return m

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(nrows, ncols)

    @classmethod
    def from_columns(cls, nrows: int, cols) -> "IntMatrix":
        cols = [list(c) for c in cols]
        m = cls(nrows, len(cols))
        for j, c in enumerate(cols):
            if len(c) != nrows:
                raise ValueError("column length mismatch")
            for i in range(nrows):
                m.rows[i][j] = c[i]
        return m

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.nrows, self.ncols, self.rows)

    def column(self, j: int) -> list[int]:
        return [self.rows[i][j] for i in range(self.nrows)]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.ncols,
            self.nrows,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
        )

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        out = IntMatrix(self.nrows, other.ncols)
        for i in range(self.nrows):
            ri = self.rows[i]
            oi = out.rows[i]
            for k in range(self.ncols):
                a = ri[k]
                if a:
                    rk = other.rows[k]
                    for j in range(other.ncols):
                        oi[j] += a * rk[j]
        return out

    def apply(self, vec: list[int]) -> list[int]:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return [sum(r[j] * vec[j] for j in range(self.ncols)) for r in self.rows]

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in r) for r in self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"IntMatrix({self.nrows}x{self.ncols})"


def smith_normal_form(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with U*m*V = S, U and V unimodular, S diagonal with
    each diagonal entry nonnegative and dividing the next."""
    if not isinstance(m, IntMatrix):
        m = IntMatrix.from_rows(m) if m else IntMatrix(0, 0)
    a = m.copy()
    nr, nc = a.nrows, a.ncols
    u = IntMatrix.identity(nr)
    v = IntMatrix.identity(nc)
    rows, urows, vrows = a.rows, u.rows, v.rows

    def swap_rows(i, j):
        rows[i], rows[j] = rows[j], rows[i]
        urows[i], urows[j] = urows[j], urows[i]

    def swap_cols(i, j):
        for r in rows:
            r[i], r[j] = r[j], r[i]
        for r in vrows:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        rd, rs = rows[dst], rows[src]
        for j in range(nc):
            rd[j] += k * rs[j]
        ud, us = urows[dst], urows[src]
        for j in range(nr):
            ud[j] += k * us[j]

    def add_col(dst, src, k):
        for r in rows:
            r[dst] += k * r[src]
        for r in vrows:
            r[dst] += k * r[src]

    def negate_row(i):
        rows[i] = [-x for x in rows[i]]
        urows[i] = [-x for x in urows[i]]

    t = 0
    limit = min(nr, nc)
    while t < limit:
        # smallest nonzero |entry| in the trailing block as pivot
        piv = None
        for i in range(t, nr):
            ri = rows[i]
            for j in range(t, nc):
                x = ri[j]
                if x and (piv is None or abs(x) < piv[0]):
                    piv = (abs(x), i, j)
        if piv is None:
            break
        _, pi, pj = piv
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        dirty = False
        p = rows[t][t]
        for i in range(t + 1, nr):
            x = rows[i][t]
            if x:
                q = x // p
                add_row(i, t, -q)
                if rows[i][t]:
                    dirty = True
        for j in range(t + 1, nc):
            x = rows[t][j]
            if x:
                q = x // p
                add_col(j, t, -q)
                if rows[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot must divide everything below-right; if not, fold the offending
        # row into column t and restart this step
        p = rows[t][t]
        offender = None
        for i in range(t + 1, nr):
            ri = rows[i]
            for j in range(t + 1, nc):
                if ri[j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        if p < 0:
            negate_row(t)
        t += 1
    return u, a, v


def diagonal_of(s: IntMatrix) -> list[int]:
    return [s.rows[i][i] for i in range(min(s.nrows, s.ncols))]


def invariant_factors(m) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    _, s, _ = smith_normal_form(m)
    return [d for d in diagonal_of(s) if d != 0]


def rank(m) -> int:
    return len(invariant_factors(m))


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of non-square matrix")
    n = m.nrows
    if n == 0:
        return 1
    a = [list(r) for r in m.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def integer_kernel(m: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the saturated lattice {x : m*x = 0}."""
    u, s, v = smith_normal_form(m)
    diag = diagonal_of(s)
    r = len([d for d in diag if d != 0])
    cols = [v.column(j) for j in range(r, m.ncols)]
    return IntMatrix.from_columns(m.ncols, cols)


def lattice_column_basis(m: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the lattice spanned by the columns of m."""
    u, s, v = smith_normal_form(m)
    diag = diagonal_of(s)
    # columns of m*v span the same lattice; the first rank(m) of them are
    # s_i * (u^-1 e_i), the rest vanish
    mv = m * v
    cols = [mv.column(j) for j, d in enumerate(diag) if d != 0]
    return IntMatrix.from_columns(m.nrows, cols)


def solve_integer(m: IntMatrix, b: list[int]) -> list[int] | None:
    """One integer solution x of m*x = b, or None."""
    u, s, v = smith_normal_form(m)
    y = u.apply(b)
    diag = diagonal_of(s)
    x = [0] * m.ncols
    for i in range(m.nrows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if y[i] != 0:
                return None
        else:
            if y[i] % d:
                return None
            x[i] = y[i] // d
    return v.apply(x)


def in_column_lattice(m: IntMatrix, b: list[int]) -> bool:
    return solve_integer(m, b) is not None


def solve_exact(basis: IntMatrix, targets: IntMatrix) -> list[list[Fraction]]:
    """Solve basis * X = targets over Q (basis with full column rank).

    Returns the columns of X as lists of Fractions.  Raises if inconsistent.
    """
    nr, nc = basis.nrows, basis.ncols
    aug = [
        [Fraction(basis.rows[i][j]) for j in range(nc)]
        + [Fraction(targets.rows[i][j]) for j in range(targets.ncols)]
        for i in range(nr)
    ]
    pivots = []
    row = 0
    for col in range(nc):
        piv = next((i for i in range(row, nr) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pr = aug[row]
        inv = 1 / pr[col]
        aug[row] = pr = [x * inv for x in pr]
        for i in range(nr):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], pr)]
        pivots.append(col)
        row += 1
    if len(pivots) != nc:
        raise ValueError("basis does not have full column rank")
    for i in range(row, nr):
        if any(x != 0 for x in aug[i][nc:]):
            raise ValueError("inconsistent system")
    sols = []
    for j in range(targets.ncols):
        x = [Fraction(0)] * nc
        for r, col in enumerate(pivots):
            x[col] = aug[r][nc + j]
        sols.append(x)
    return sols


def _merge_torsion(torsions) -> tuple[int, ...]:
    """Normalize an arbitrary multiset of torsion orders into a divisor chain."""
    primary: dict[int, list[int]] = {}
    for t in torsions:
        t = int(t)
        if t <= 1:
            continue
        k = 2
        while k * k <= t:
            if t % k == 0:
                e = 0
                while t % k == 0:
                    t //= k
                    e += 1
                primary.setdefault(k, []).append(k**e)
            k += 1
        if t > 1:
            primary.setdefault(t, []).append(t)
    if not primary:
        return ()
    for p in primary:
        primary[p].sort(reverse=True)
    depth = max(len(v) for v in primary.values())
    chain = []
    for i in range(depth):
        d = 1
        for p, powers in primary.items():
            if i < len(powers):
                d *= powers[i]
        chain.append(d)
    return tuple(reversed(chain))


@dataclass(frozen=True)
class HomologyGroup:
    """A finitely generated abelian group Z^free_rank + Z/t1 + ... (t_i | t_i+1)."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    @classmethod
    def of(cls, free_rank: int, torsions=()) -> "HomologyGroup":
        return cls(free_rank, _merge_torsion(torsions))

    @classmethod
    def zero(cls) -> "HomologyGroup":
        return cls(0, ())

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def direct_sum(self, other: "HomologyGroup") -> "HomologyGroup":
        return HomologyGroup.of(
            self.free_rank + other.free_rank, self.torsion + other.torsion
        )

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        i = 0
        tor = self.torsion
        while i < len(tor):
            j = i
            while j < len(tor) and tor[j] == tor[i]:
                j += 1
            mult = j - i
            parts.append(f"Z/{tor[i]}" if mult == 1 else f"(Z/{tor[i]})^{mult}")
            i = j
        return " ⊕ ".join(parts) if parts else "0"


def direct_sum(groups) -> HomologyGroup:
    total = HomologyGroup.zero()
    for g in groups:
        total = total.direct_sum(g)
    return total


class ChainComplex:
    """A chain complex of free Z-modules given by its boundary matrices.

    dims[k] is the rank of C_k; boundary(k) maps C_k -> C_{k-1} and is a
    dims[k-1] x dims[k] integer matrix.  The composite of consecutive
    boundaries must vanish.
    """

    def __init__(self, dims: list[int], boundaries: dict[int, IntMatrix]):
        self.dims = list(dims)
        self.boundaries = {}
        top = len(self.dims) - 1
        for k in range(1, top + 1):
            b = boundaries.get(k)
            if b is None:
                b = IntMatrix.zero(self.dims[k - 1], self.dims[k])
            if (b.nrows, b.ncols) != (self.dims[k - 1], self.dims[k]):
                raise ValueError(f"boundary {k} has wrong shape")
            self.boundaries[k] = b
        for k in range(2, top + 1):
            prod = self.boundaries[k - 1] * self.boundaries[k]
            if not prod.is_zero():
                raise ValueError(f"boundary composite d_{k-1} d_{k} != 0")

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def boundary(self, k: int) -> IntMatrix:
        if 1 <= k <= self.top_degree:
            return self.boundaries[k]
        nrows = self.dims[k - 1] if 0 <= k - 1 <= self.top_degree else 0
        ncols = self.dims[k] if 0 <= k <= self.top_degree else 0
        return IntMatrix.zero(nrows, ncols)

    def homology(self, k: int) -> HomologyGroup:
        if k < 0 or k > self.top_degree:
            return HomologyGroup.zero()
        dk = self.boundary(k)
        dk1 = self.boundary(k + 1)
        rank_k = rank(dk)
        factors = invariant_factors(dk1)
        free = self.dims[k] - rank_k - len(factors)
        return HomologyGroup.of(free, (f for f in factors if f > 1))


def homology(complex_data: ChainComplex, k: int) -> HomologyGroup:
    """H_k = ker d_k / im d_{k+1} of an integer chain complex."""
    return complex_data.homology(k)


# ---------------------------------------------------------------------------
# Finitely presented abelian groups and complexes thereof
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FPGroup:
    """Z^ngens modulo the column lattice of `relations` (ngens x nrels)."""

    ngens: int
    relations: IntMatrix

    @classmethod
    def free(cls, n: int) -> "FPGroup":
        return cls(n, IntMatrix.zero(n, 0))

    @classmethod
    def of_orders(cls, free_rank: int, torsion=()) -> "FPGroup":
        torsion = list(torsion)
        n = free_rank + len(torsion)
        cols = []
        for i, t in enumerate(torsion):
            c = [0] * n
            c[free_rank + i] = t
            cols.append(c)
        return cls(n, IntMatrix.from_columns(n, cols) if cols else IntMatrix.zero(n, 0))

    @classmethod
    def trivial(cls) -> "FPGroup":
        return cls.free(0)

    def invariants(self) -> HomologyGroup:
        factors = invariant_factors(self.relations)
        return HomologyGroup.of(
            self.ngens - len(factors), (f for f in factors if f > 1)
        )

    def contains(self, vec: list[int]) -> bool:
        """Whether vec is a relation (i.e. zero in the group)."""
        return in_column_lattice(self.relations, vec)

    def map_well_defined(self, matrix: IntMatrix, target: "FPGroup") -> bool:
        """matrix: Z^ngens -> Z^target.ngens descends to a homomorphism."""
        if matrix.ncols != self.ngens or matrix.nrows != target.ngens:
            return False
        for j in range(self.relations.ncols):
            if not target.contains(matrix.apply(self.relations.column(j))):
                return False
        return True


def fp_homology_at(
    d_out: IntMatrix,
    d_in: IntMatrix,
    group: FPGroup,
    target_group: FPGroup,
) -> HomologyGroup:
    """Homology ker(d_out)/im(d_in) at a spot C' --d_in--> C --d_out--> C''
    in a complex of finitely presented abelian groups.

    `group` presents C, `target_group` presents C''; d_out and d_in are the
    generator-level matrices of the two maps.
    """
    n = group.ngens
    # generator-level preimage of the relation lattice of C''
    rels_out = target_group.relations
    stacked = IntMatrix(
        d_out.nrows,
        d_out.ncols + rels_out.ncols,
        [
            d_out.rows[i] + [-x for x in rels_out.rows[i]]
            for i in range(d_out.nrows)
        ],
    )
    ker = integer_kernel(stacked)
    kernel_cols = [[ker.rows[i][j] for i in range(n)] for j in range(ker.ncols)]
    l1_cols = kernel_cols + group.relations.columns()
    l2_cols = d_in.columns() + group.relations.columns()
    if not l1_cols:
        return HomologyGroup.zero()
    l1 = IntMatrix.from_columns(n, l1_cols)
    basis = lattice_column_basis(l1)
    if basis.ncols == 0:
        return HomologyGroup.zero()
    if l2_cols:
        l2 = IntMatrix.from_columns(n, l2_cols)
        x_cols = solve_exact(basis, l2)
        x_int = []
        for c in x_cols:
            ints = []
            for val in c:
                if val.denominator != 1:
                    raise ValueError("image does not lie in the kernel lattice")
                ints.append(val.numerator)
            x_int.append(ints)
        x = IntMatrix.from_columns(basis.ncols, x_int)
    else:
        x = IntMatrix.zero(basis.ncols, 0)
    factors = invariant_factors(x)
    free = basis.ncols - len(factors)
    return HomologyGroup.of(free, (f for f in factors if f > 1))
