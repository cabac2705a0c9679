"""Finite posets, order complexes, and poset homology with functor coefficients.

The height of an element y is the dimension of the part of the poset below
it, i.e. one less than the size of a longest chain with top y.  Chain groups
with coefficients in a functor F are direct sums of F(y0) over chains
y0 < ... < yp; the differential drops chain entries, applying F(y0 -> y1)
when the bottom element is dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .homology import (
    ChainComplex,
    FPGroup,
    HomologyGroup,
    IntMatrix,
    direct_sum,
    fp_homology_at,
)


class PosetData:
    """A finite strict poset on hashable elements.

    The relation is stored transitively closed as index pairs; heights are
    precomputed.
    """

    def __init__(self, elements, pairs):
        self.elements = list(elements)
        n = len(self.elements)
        below = [set() for _ in range(n)]  # below[j] = {i : i < j}
        for i, j in pairs:
            if i == j:
                raise ValueError("relation must be irreflexive")
            below[j].add(i)
        # transitive closure (iterate to a fixed point; posets here are small)
        changed = True
        while changed:
            changed = False
            for j in range(n):
                extra = set()
                for i in below[j]:
                    extra |= below[i]
                if not extra <= below[j]:
                    below[j] |= extra
                    changed = True
        for j in range(n):
            if j in below[j]:
                raise ValueError("relation has a cycle")
        self._below = [frozenset(s) for s in below]
        self.heights = [0] * n
        for j in self._topological_order():
            self.heights[j] = max(
                (self.heights[i] + 1 for i in below[j]), default=0
            )

    def _topological_order(self):
        n = len(self.elements)
        return sorted(range(n), key=lambda j: (len(self._below[j]), j))

    def __len__(self):
        return len(self.elements)

    def less(self, i: int, j: int) -> bool:
        return i in self._below[j]

    def pairs(self):
        return [(i, j) for j in range(len(self.elements)) for i in self._below[j]]

    def dim(self) -> int:
        return max(self.heights, default=-1)

    def chains(self, length: int) -> list[tuple[int, ...]]:
        """All chains with `length` + 1 elements, as index tuples in poset order."""
        n = len(self.elements)
        out = [(j,) for j in range(n)]
        for _ in range(length):
            out = [c + (j,) for c in out for j in range(n) if self.less(c[-1], j)]
        return out

    def above(self, i: int) -> "PosetData":
        """The subposet of elements strictly greater than element i."""
        keep = [j for j in range(len(self.elements)) if self.less(i, j)]
        index = {j: k for k, j in enumerate(keep)}
        pairs = [
            (index[a], index[b])
            for a in keep
            for b in keep
            if self.less(a, b)
        ]
        return PosetData([self.elements[j] for j in keep], pairs)

    def order_complex(self) -> "SimplicialComplexData":
        """Simplicial complex of chains (vertices reindexed so that the poset
        order refines the vertex order)."""
        n = len(self.elements)
        order = sorted(range(n), key=lambda j: (self.heights[j], j))
        new_index = {j: k for k, j in enumerate(order)}
        vertices = [self.elements[j] for j in order]
        chains = []
        frontier = [(j,) for j in range(n)]
        while frontier:
            chains.extend(frontier)
            frontier = [
                c + (j,) for c in frontier for j in range(n) if self.less(c[-1], j)
            ]
        simplices = [tuple(sorted(new_index[j] for j in c)) for c in chains]
        return SimplicialComplexData(vertices, simplices)


class SimplicialComplexData:
    """A finite simplicial complex: vertex labels plus simplices as strictly
    increasing index tuples, closed under taking faces."""

    def __init__(self, vertices, simplices):
        self.vertices = list(vertices)
        by_dim: dict[int, set[tuple[int, ...]]] = {}
        stack = [tuple(s) for s in simplices]
        for s in stack:
            if list(s) != sorted(set(s)):
                raise ValueError(f"simplex {s} is not a strictly increasing tuple")
        seen = set(stack)
        while stack:
            s = stack.pop()
            by_dim.setdefault(len(s) - 1, set()).add(s)
            if len(s) > 1:
                for i in range(len(s)):
                    f = s[:i] + s[i + 1 :]
                    if f not in seen:
                        seen.add(f)
                        stack.append(f)
        self.simplices = {
            d: sorted(by_dim.get(d, ())) for d in range(0, max(by_dim, default=-1) + 1)
        }

    @classmethod
    def from_vertex_sets(cls, vertices, sets) -> "SimplicialComplexData":
        return cls(vertices, [tuple(sorted(s)) for s in sets])

    def dim(self) -> int:
        return max(self.simplices, default=-1)

    def n_simplices(self, d: int) -> int:
        return len(self.simplices.get(d, ()))

    def skeleton(self, k: int) -> "SimplicialComplexData":
        keep = [s for d, ss in self.simplices.items() if d <= k for s in ss]
        return SimplicialComplexData(self.vertices, keep)

    def boundary_matrix(self, k: int) -> IntMatrix:
        """The boundary C_k -> C_{k-1} (standard alternating signs)."""
        rows = self.simplices.get(k - 1, [])
        cols = self.simplices.get(k, [])
        index = {s: i for i, s in enumerate(rows)}
        m = IntMatrix.zero(len(rows), len(cols))
        for j, s in enumerate(cols):
            for i in range(len(s)):
                f = s[:i] + s[i + 1 :]
                m.rows[index[f]][j] += (-1) ** i
        return m

    def chain_complex(self, reduced: bool = True) -> ChainComplex:
        """Chain complex over Z; if reduced, degree k sits at position k + 1
        above an augmentation copy of Z in position 0."""
        top = self.dim()
        if not reduced:
            dims = [self.n_simplices(d) for d in range(top + 1)] or [0]
            bnds = {k: self.boundary_matrix(k) for k in range(1, top + 1)}
            return ChainComplex(dims, bnds)
        dims = [1] + [self.n_simplices(d) for d in range(top + 1)]
        bnds = {}
        if top >= 0:
            bnds[1] = IntMatrix(1, dims[1], [[1] * dims[1]])
        for k in range(1, top + 1):
            bnds[k + 1] = self.boundary_matrix(k)
        return ChainComplex(dims, bnds)


def reduced_homology(complex_data: SimplicialComplexData, k: int) -> HomologyGroup:
    """Reduced simplicial homology over Z (k = -1 handles the empty complex)."""
    return complex_data.chain_complex(reduced=True).homology(k + 1)


def homology(complex_data: SimplicialComplexData, k: int) -> HomologyGroup:
    return complex_data.chain_complex(reduced=False).homology(k)


# ---------------------------------------------------------------------------
# functor coefficients
# ---------------------------------------------------------------------------


@dataclass
class CoefficientFunctor:
    """A functor from a poset to abelian groups: one finitely presented
    group per element, one generator-level matrix per related pair."""

    poset: PosetData
    groups: list[FPGroup]
    maps: dict[tuple[int, int], IntMatrix]

    def validate(self) -> None:
        for (i, j), m in self.maps.items():
            if not self.poset.less(i, j):
                raise ValueError(f"map given for unrelated pair ({i}, {j})")
            if not self.groups[i].map_well_defined(m, self.groups[j]):
                raise ValueError(f"map ({i}, {j}) does not respect relations")
        for i, j in self.poset.pairs():
            if (i, j) not in self.maps:
                raise ValueError(f"missing map for related pair ({i}, {j})")
        # functoriality along composable pairs
        for i, j in self.poset.pairs():
            for k in range(len(self.poset.elements)):
                if self.poset.less(j, k):
                    direct = self.maps[(i, k)]
                    composed = self.maps[(j, k)] * self.maps[(i, j)]
                    diff_cols = [
                        [
                            composed.rows[r][c] - direct.rows[r][c]
                            for r in range(direct.nrows)
                        ]
                        for c in range(direct.ncols)
                    ]
                    for col in diff_cols:
                        if not self.groups[k].contains(col):
                            raise ValueError(
                                f"functoriality fails along {i} < {j} < {k}"
                            )

    @classmethod
    def constant_z(cls, poset: PosetData) -> "CoefficientFunctor":
        z = FPGroup.free(1)
        maps = {
            (i, j): IntMatrix.identity(1)
            for i, j in poset.pairs()
        }
        return cls(poset, [z] * len(poset.elements), maps)

    @classmethod
    def zero(cls, poset: PosetData) -> "CoefficientFunctor":
        t = FPGroup.trivial()
        maps = {(i, j): IntMatrix.zero(0, 0) for i, j in poset.pairs()}
        return cls(poset, [t] * len(poset.elements), maps)

    @classmethod
    def height_supported(
        cls, poset: PosetData, height: int, groups: dict[int, FPGroup]
    ) -> "CoefficientFunctor":
        """The functor equal to groups[i] on height-`height` elements i and
        trivial elsewhere (all structure maps are then forced to zero)."""
        glist = []
        for i in range(len(poset.elements)):
            if poset.heights[i] == height:
                glist.append(groups.get(i, FPGroup.trivial()))
            else:
                glist.append(FPGroup.trivial())
        maps = {
            (i, j): IntMatrix.zero(glist[j].ngens, glist[i].ngens)
            for i, j in poset.pairs()
        }
        return cls(poset, glist, maps)


def _chain_group(functor: CoefficientFunctor, chains) -> FPGroup:
    ngens = sum(functor.groups[c[0]].ngens for c in chains)
    rel_cols = []
    offset = 0
    for c in chains:
        g = functor.groups[c[0]]
        for j in range(g.relations.ncols):
            col = [0] * ngens
            for i in range(g.ngens):
                col[offset + i] = g.relations.rows[i][j]
            rel_cols.append(col)
        offset += g.ngens
    rels = (
        IntMatrix.from_columns(ngens, rel_cols)
        if rel_cols
        else IntMatrix.zero(ngens, 0)
    )
    return FPGroup(ngens, rels)


def _chain_boundary(
    functor: CoefficientFunctor, chains_src, chains_dst
) -> IntMatrix:
    src_offsets = {}
    off = 0
    for c in chains_src:
        src_offsets[c] = off
        off += functor.groups[c[0]].ngens
    dst_offsets = {}
    off2 = 0
    for c in chains_dst:
        dst_offsets[c] = off2
        off2 += functor.groups[c[0]].ngens
    m = IntMatrix.zero(off2, off)
    for c in chains_src:
        src_off = src_offsets[c]
        g_src = functor.groups[c[0]]
        for drop in range(len(c)):
            target = c[:drop] + c[drop + 1 :]
            if target not in dst_offsets:
                continue
            dst_off = dst_offsets[target]
            sign = (-1) ** drop
            if drop == 0:
                block = functor.maps[(c[0], c[1])]
                for i in range(block.nrows):
                    for j in range(block.ncols):
                        if block.rows[i][j]:
                            m.rows[dst_off + i][src_off + j] += sign * block.rows[i][j]
            else:
                for i in range(g_src.ngens):
                    m.rows[dst_off + i][src_off + i] += sign
    return m


def poset_homology_with_functor(
    poset: PosetData, functor: CoefficientFunctor, k: int
) -> HomologyGroup:
    """Homology of the chain complex C_p = (+) over chains y0<...<yp of F(y0)."""
    functor.validate()
    if k < 0 or k > poset.dim():
        return HomologyGroup.zero()
    chains_k = poset.chains(k)
    chains_km1 = poset.chains(k - 1) if k >= 1 else []
    chains_kp1 = poset.chains(k + 1) if k + 1 <= poset.dim() else []
    group_k = _chain_group(functor, chains_k)
    group_km1 = _chain_group(functor, chains_km1)
    d_out = (
        _chain_boundary(functor, chains_k, chains_km1)
        if k >= 1
        else IntMatrix.zero(0, group_k.ngens)
    )
    d_in = (
        _chain_boundary(functor, chains_kp1, chains_k)
        if chains_kp1
        else IntMatrix.zero(group_k.ngens, 0)
    )
    return fp_homology_at(d_out, d_in, group_k, group_km1)


def reduced_homology_with_coefficients(
    complex_data: SimplicialComplexData, group: FPGroup, k: int
) -> HomologyGroup:
    """Reduced homology of a simplicial complex with coefficients in a
    finitely presented abelian group (tensored chain complex); k = -1 gives
    coker of the augmentation, so the empty complex yields the group itself."""
    n = group.ngens

    def tensored(mat: IntMatrix) -> IntMatrix:
        out = IntMatrix.zero(mat.nrows * n, mat.ncols * n)
        for i in range(mat.nrows):
            for j in range(mat.ncols):
                e = mat.rows[i][j]
                if e:
                    for t in range(n):
                        out.rows[i * n + t][j * n + t] = e
        return out

    def level_group(count: int) -> FPGroup:
        ngens = n * count
        cols = []
        for c in range(count):
            for j in range(group.relations.ncols):
                col = [0] * ngens
                for i in range(n):
                    col[c * n + i] = group.relations.rows[i][j]
                cols.append(col)
        rels = (
            IntMatrix.from_columns(ngens, cols) if cols else IntMatrix.zero(ngens, 0)
        )
        return FPGroup(ngens, rels)

    top = complex_data.dim()
    counts = {-1: 1}
    for d in range(top + 1):
        counts[d] = complex_data.n_simplices(d)
    if k < -1 or k > top:
        return HomologyGroup.zero()
    g_k = level_group(counts.get(k, 0))
    g_km1 = level_group(counts.get(k - 1, 0)) if k - 1 >= -1 else FPGroup.trivial()
    if k == -1:
        d_out = IntMatrix.zero(0, g_k.ngens)
    elif k == 0:
        d_out = tensored(IntMatrix(1, counts[0], [[1] * counts[0]]))
    else:
        d_out = tensored(complex_data.boundary_matrix(k))
    if k + 1 > top:
        d_in = IntMatrix.zero(g_k.ngens, 0)
    elif k + 1 == 0:
        d_in = tensored(IntMatrix(1, counts[0], [[1] * counts[0]]))
    else:
        d_in = tensored(complex_data.boundary_matrix(k + 1))
    return fp_homology_at(d_out, d_in, g_k, g_km1)


def single_support_decomposition(
    poset: PosetData, functor: CoefficientFunctor, height: int, k: int
) -> HomologyGroup:
    """The direct-sum side of the single-height lemma: for F supported on
    height-m elements, H_p(Y; F) decomposes as the sum over those elements
    of the reduced (p-1)-homology of the part of the poset above them, with
    coefficients F(y0)."""
    parts = []
    for i in range(len(poset.elements)):
        if poset.heights[i] != height:
            continue
        g = functor.groups[i]
        if g.ngens == 0:
            continue
        sub = poset.above(i)
        parts.append(
            reduced_homology_with_coefficients(sub.order_complex(), g, k - 1)
        )
    return direct_sum(parts)
