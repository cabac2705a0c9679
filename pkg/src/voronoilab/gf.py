"""Small finite fields, Z/m rings, and linear algebra over them.

Field elements are plain ints 0..q-1 (for prime powers, the int encodes the
base-p digit vector of a polynomial residue); all operations go through
precomputed tables, which is plenty fast at desk scale (q <= 27).
"""

from __future__ import annotations

from itertools import product
from math import gcd

# irreducible polynomials for the prime-power fields we support,
# constant coefficient first
_IRREDUCIBLE = {
    4: (2, (1, 1, 1)),
    8: (2, (1, 1, 0, 1)),
    9: (3, (1, 0, 1)),
    25: (5, (2, 1, 1)),
    27: (3, (1, 2, 0, 1)),
}


def _factor_prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, k
    raise ValueError(f"{q} is not a prime power")


class FiniteField:
    """GF(q) with elements 0..q-1 and table-driven arithmetic."""

    def __init__(self, q: int):
        p, k = _factor_prime_power(q)
        self.q = q
        self.p = p
        self.degree = k
        if k == 1:
            self._add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self._mul = [[(a * b) % p for b in range(p)] for a in range(p)]
        else:
            if q not in _IRREDUCIBLE:
                raise ValueError(f"GF({q}) is not supported at desk scale")
            _, poly = _IRREDUCIBLE[q]
            self._add = [
                [self._encode([(x + y) % p for x, y in zip(self._digits(a), self._digits(b))])
                 for b in range(q)]
                for a in range(q)
            ]
            self._mul = [[self._poly_mul(a, b, poly) for b in range(q)] for a in range(q)]
        self._neg = [self._add[a].index(0) for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            self._inv[a] = self._mul[a].index(1)

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, digits) -> int:
        out = 0
        for d in reversed(digits):
            out = out * self.p + d
        return out

    def _poly_mul(self, a: int, b: int, poly) -> int:
        p = self.p
        k = self.degree
        da, db = self._digits(a), self._digits(b)
        prod_coeffs = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod_coeffs[i + j] = (prod_coeffs[i + j] + x * y) % p
        # reduce modulo the irreducible polynomial (monic of degree k)
        for i in range(2 * k - 2, k - 1, -1):
            c = prod_coeffs[i]
            if c:
                prod_coeffs[i] = 0
                for j in range(k):
                    prod_coeffs[i - k + j] = (prod_coeffs[i - k + j] - c * poly[j]) % p
        return self._encode(prod_coeffs[:k])

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError
        return self._inv[a]

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self):
        return f"GF({self.q})"


def vec_add(field: FiniteField, u, v):
    return tuple(field.add(x, y) for x, y in zip(u, v))


def vec_scale(field: FiniteField, c, v):
    return tuple(field.mul(c, x) for x in v)


def rref(field: FiniteField, rows):
    """Reduced row echelon form over the field; returns (rref_rows, pivots)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][col])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                c = rows[i][col]
                rows[i] = [
                    field.sub(x, field.mul(c, y)) for x, y in zip(rows[i], rows[r])
                ]
        pivots.append(col)
        r += 1
    return [tuple(row) for row in rows[:r]], pivots


def mat_rank(field: FiniteField, rows) -> int:
    return len(rref(field, rows)[0])


class Subspace:
    """A subspace of F_q^n, identified by its reduced-row-echelon basis."""

    __slots__ = ("field", "n", "basis", "_vectors")

    def __init__(self, field: FiniteField, n: int, rows):
        self.field = field
        self.n = n
        basis, _ = rref(field, rows)
        self.basis = tuple(basis)
        self._vectors = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> frozenset:
        """All vectors in the subspace (cached)."""
        if self._vectors is None:
            field = self.field
            vecs = {tuple([0] * self.n)}
            for coeffs in product(field.elements(), repeat=self.dim):
                v = tuple([0] * self.n)
                for c, b in zip(coeffs, self.basis):
                    v = vec_add(field, v, vec_scale(field, c, b))
                vecs.add(v)
            self._vectors = frozenset(vecs)
        return self._vectors

    def contains(self, other: "Subspace") -> bool:
        return all(v in self.vectors() for v in other.basis)

    def key(self):
        return self.basis

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.n == other.n
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.n, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, basis={self.basis})"


def subspaces_of_dim(field: FiniteField, n: int, k: int) -> list[Subspace]:
    """All k-dimensional subspaces of F_q^n, by direct RREF enumeration."""
    if k == 0:
        return [Subspace(field, n, [])]
    out = []
    from itertools import combinations

    for pivots in combinations(range(n), k):
        free_positions = [
            (i, j)
            for i in range(k)
            for j in range(pivots[i] + 1, n)
            if j not in pivots
        ]
        for values in product(field.elements(), repeat=len(free_positions)):
            rows = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), v in zip(free_positions, values):
                rows[i][j] = v
            out.append(Subspace(field, n, rows))
    return out


def sum_subspaces(a: Subspace, b: Subspace) -> Subspace:
    return Subspace(a.field, a.n, list(a.basis) + list(b.basis))


def span(field: FiniteField, n: int, vectors) -> Subspace:
    return Subspace(field, n, list(vectors))


# ---------------------------------------------------------------------------
# rings for the frame complexes: fields and Z/m
# ---------------------------------------------------------------------------


class FieldRing:
    """A finite field viewed through the partial-frame interface."""

    def __init__(self, q: int):
        self.field = FiniteField(q)

    @property
    def name(self) -> str:
        return f"GF({self.field.q})"

    def elements(self):
        return self.field.elements()

    def units(self):
        return range(1, self.field.q)

    def scale(self, c, v):
        return vec_scale(self.field, c, v)

    def is_primitive(self, v) -> bool:
        return any(x != 0 for x in v)

    def is_partial_basis(self, vectors) -> bool:
        return mat_rank(self.field, vectors) == len(vectors)


class ZModRing:
    """Z/m through the partial-frame interface (m a small composite is fine)."""

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("modulus must be >= 2")
        self.m = m
        self.primes = []
        mm = m
        p = 2
        while p * p <= mm:
            if mm % p == 0:
                self.primes.append(p)
                while mm % p == 0:
                    mm //= p
            p += 1
        if mm > 1:
            self.primes.append(mm)
        self._prime_fields = {p: FiniteField(p) for p in self.primes}

    @property
    def name(self) -> str:
        return f"Z/{self.m}"

    def elements(self):
        return range(self.m)

    def units(self):
        return [u for u in range(1, self.m) if gcd(u, self.m) == 1]

    def scale(self, c, v):
        return tuple((c * x) % self.m for x in v)

    def is_primitive(self, v) -> bool:
        g = self.m
        for x in v:
            g = gcd(g, x)
        return g == 1

    def is_partial_basis(self, vectors) -> bool:
        # extendable to a basis of (Z/m)^n iff independent mod every prime
        # dividing m (CRT + Nakayama over each local factor)
        for p in self.primes:
            reduced = [tuple(x % p for x in v) for v in vectors]
            if mat_rank(self._prime_fields[p], reduced) != len(vectors):
                return False
        return True


def make_ring(spec) -> FieldRing | ZModRing:
    """Ring from a spec: ('gf', q) or ('zmod', m), or pass a ring through."""
    if isinstance(spec, (FieldRing, ZModRing)):
        return spec
    kind, arg = spec
    if kind == "gf":
        return FieldRing(arg)
    if kind == "zmod":
        return ZModRing(arg)
    raise ValueError(f"unsupported ring spec: {spec!r}")
