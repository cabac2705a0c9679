import random
from math import gcd

import pytest

from voronoilab.homology import (
    ChainComplex,
    FPGroup,
    HomologyGroup,
    IntMatrix,
    det,
    fp_homology_at,
    integer_kernel,
    lattice_column_basis,
    rank,
    smith_normal_form,
    solve_integer,
)


def determinantal_divisors(rows):
    """gcd of k x k minors for each k, by subset DP (independent oracle)."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    memo = {}

    def minor(rmask, cmask, k):
        if k == 1:
            return rows[rmask.bit_length() - 1][cmask.bit_length() - 1]
        key = (rmask, cmask)
        if key in memo:
            return memo[key]
        r = (rmask & -rmask).bit_length() - 1
        rest = rmask & (rmask - 1)
        total = 0
        sign = 1
        m = cmask
        while m:
            c = (m & -m).bit_length() - 1
            a = rows[r][c]
            if a:
                total += sign * a * minor(rest, cmask & ~(1 << c), k - 1)
            sign = -sign
            m &= m - 1
        memo[key] = total
        return total

    from itertools import combinations

    out = []
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for rs in combinations(range(nr), k):
            rmask = sum(1 << i for i in rs)
            for cs in combinations(range(nc), k):
                cmask = sum(1 << i for i in cs)
                g = gcd(g, abs(minor(rmask, cmask, k)))
        out.append(g)
    return out


def check_snf(rows):
    m = IntMatrix.from_rows(rows) if rows else IntMatrix(0, 0)
    u, s, v = smith_normal_form(m)
    # decomposition
    assert (u * m * v).rows == s.rows
    # diagonal with nonnegative entries, divisibility
    diag = [s.rows[i][i] for i in range(min(s.nrows, s.ncols))]
    for i in range(s.nrows):
        for j in range(s.ncols):
            if i != j:
                assert s.rows[i][j] == 0
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert diag[: len(nz)] == nz
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    # unimodularity
    assert abs(det(u)) == 1
    assert abs(det(v)) == 1
    return diag


def test_snf_examples():
    diag = check_snf([[2, 0], [0, 3]])
    assert [d for d in diag if d] == [1, 6]
    u, s, v = smith_normal_form(IntMatrix.identity(3))
    assert s.rows == IntMatrix.identity(3).rows
    u, s, v = smith_normal_form(IntMatrix.zero(2, 3))
    assert s.rows == IntMatrix.zero(2, 3).rows


def test_snf_against_determinantal_divisors():
    rng = random.Random(3)
    for _ in range(60):
        nr = rng.randint(1, 5)
        nc = rng.randint(1, 5)
        rows = [[rng.randint(-9, 9) for _ in range(nc)] for _ in range(nr)]
        diag = check_snf(rows)
        dd = determinantal_divisors(rows)
        nz = [x for x in diag if x]
        prev = 1
        expected = []
        for k, g in enumerate(dd):
            if g == 0:
                break
            expected.append(g // prev)
            prev = g
        assert nz == expected


def test_kernel_and_solve():
    m = IntMatrix.from_rows([[2, 4, 6], [1, 2, 3]])
    k = integer_kernel(m)
    assert k.ncols == 2
    for j in range(k.ncols):
        assert m.apply(k.column(j)) == [0, 0]
    assert solve_integer(m, [2, 1]) is not None
    assert solve_integer(m, [1, 1]) is None
    basis = lattice_column_basis(IntMatrix.from_rows([[2, 4], [0, 0]]))
    assert basis.ncols == 1 and basis.column(0)[0] in (2, -2)


def test_homology_group_rendering():
    assert str(HomologyGroup.of(0)) == "0"
    assert str(HomologyGroup.of(1)) == "Z"
    assert str(HomologyGroup.of(2, [2])) == "Z^2 ⊕ Z/2"
    assert str(HomologyGroup.of(0, [2, 2, 2])) == "(Z/2)^3"
    # direct sums renormalize into a divisor chain
    assert HomologyGroup.of(0, [2, 3]) == HomologyGroup.of(0, [6])
    assert HomologyGroup.of(0, [4, 6]).torsion == (2, 12)


def test_chain_complex_examples():
    # 0 -> Z --0--> Z -> 0
    c = ChainComplex([1, 1], {1: IntMatrix.zero(1, 1)})
    assert c.homology(0) == HomologyGroup.of(1)
    assert c.homology(1) == HomologyGroup.of(1)
    # circle: two vertices, two edges
    d1 = IntMatrix.from_rows([[-1, -1], [1, 1]])
    c = ChainComplex([2, 2], {1: d1})
    assert c.homology(0) == HomologyGroup.of(1)
    assert c.homology(1) == HomologyGroup.of(1)


def test_chain_complex_rejects_bad_composite():
    d1 = IntMatrix.from_rows([[1, 0], [0, 1]])
    d2 = IntMatrix.from_rows([[1], [0]])
    with pytest.raises(ValueError):
        ChainComplex([2, 2, 1], {1: d1, 2: d2})


def test_rank_nullity_consistency():
    rng = random.Random(5)
    for _ in range(20):
        dims = [rng.randint(1, 5) for _ in range(3)]
        # build a valid complex: d2 = random, d1 = map killing image of d2
        d2 = IntMatrix.from_rows(
            [[rng.randint(-3, 3) for _ in range(dims[2])] for _ in range(dims[1])]
        )
        k = integer_kernel(d2.transpose())  # rows annihilating columns of d2
        d1 = (
            k.transpose()
            if k.ncols
            else IntMatrix.zero(0, dims[1])
        )
        c = ChainComplex([d1.nrows, dims[1], dims[2]], {1: d1, 2: d2})
        h1 = c.homology(1)
        assert h1.free_rank == dims[1] - rank(d1) - rank(d2)


def test_fp_groups():
    g = FPGroup.of_orders(2, [2, 4])
    assert g.invariants() == HomologyGroup.of(2, [2, 4])
    assert g.contains([0, 0, 2, 0])
    assert not g.contains([1, 0, 0, 0])
    # Z --x2--> Z --proj--> Z/2 has homology ker(proj)/im(x2) = 0 at middle
    mid = FPGroup.free(1)
    target = FPGroup.of_orders(0, [2])
    h = fp_homology_at(
        IntMatrix.from_rows([[1]]),
        IntMatrix.from_rows([[2]]),
        mid,
        target,
    )
    assert h.is_zero()
    # Z --x4--> Z --proj--> Z/2: kernel is 2Z, image 4Z, quotient Z/2
    h = fp_homology_at(
        IntMatrix.from_rows([[1]]),
        IntMatrix.from_rows([[4]]),
        mid,
        target,
    )
    assert h == HomologyGroup.of(0, [2])
