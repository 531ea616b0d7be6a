"""K-groups of gauge subquotients and the six-term maps between them.

For a subquotient carried by a vertex set D the presenting matrix B has rows
indexed by all vertices of the restricted graph and columns by its regular
vertices, B[w][v] = mult(v -> w) - delta_{vw}.  K0 is the cokernel with the
vertex classes as distinguished cone generators, K1 the integer kernel.

For a chain of opens U1 <= U2 <= U3 the matrix over D = H3 \\ H1 is block
triangular; the connecting map feeds the off-diagonal block into the ideal's
cokernel, and the exponential direction vanishes because vertex classes lift.
Exactness of the resulting cyclic sequence is recomputed on every call.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ExactnessError, InternalInvariantError
from .graphs import Graph, iter_bits, subquotient_graph
from .intlinalg import (
    FgAbGroup,
    IntMatrix,
    cokernel,
    group_iso_inverse,
    image_lattice,
    kernel_group,
    kernel_lattice,
    lattices_equal,
    maps_equal,
    reduce_map,
    relation_columns,
    solve_exact,
)
from .report import Report
from .spectrum import LocallyClosedSet, SpectrumSpace, locally_closed_sets


@dataclass(frozen=True)
class KData:
    """Ordered K-theory of one subquotient.

    cone_generators[i] is the K0 class of the i-th vertex of the restricted
    graph; unit_class is their sum.  Coordinates follow the invariant factors
    of each group.
    """

    vertices: tuple[str, ...]
    matrix: IntMatrix
    k0: FgAbGroup
    cone_generators: tuple[tuple[int, ...], ...]
    unit_class: tuple[int, ...]
    k1: FgAbGroup

    def factor_summary(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.k0.invariant_factors, self.k1.invariant_factors


def k_matrix(gq: Graph) -> tuple[IntMatrix, list[int]]:
    """Presenting matrix of the restricted graph plus its regular columns."""
    regs = [v for v in range(gq.n) if gq.is_regular(v)]
    rows = [[gq.mult[v][w] - (1 if v == w else 0) for v in regs] for w in range(gq.n)]
    return IntMatrix.from_rows(rows, cols=len(regs)), regs


def k_data(g: Graph, y: LocallyClosedSet) -> KData:
    if not g.row_finite:
        raise ValueError("K-data requires a row-finite graph")
    gq = subquotient_graph(g, y.d, y.h_v)
    b, _ = k_matrix(gq)
    k0 = cokernel(b)
    gens = tuple(
        k0.project_vec([1 if i == v else 0 for i in range(gq.n)]) for v in range(gq.n)
    )
    unit = k0.reduce([sum(c) for c in zip(*gens)]) if gens else (0,) * k0.ncoords
    return KData(gq.vertices, b, k0, gens, unit, kernel_group(b))


@dataclass(frozen=True)
class SixTerm:
    """Maps of the cyclic sequence for a chain of opens u1 <= u2 <= u3.

    sub/mid/quot carry the K-data of u2\\u1, u3\\u1, u3\\u2.  Each map is a
    matrix between canonical coordinates; delta (K0 of the quotient to K1 of
    the ideal) is identically zero.
    """

    u1: int
    u2: int
    u3: int
    sub: KData
    mid: KData
    quot: KData
    iota0: IntMatrix
    pi0: IntMatrix
    delta: IntMatrix
    iota1: IntMatrix
    pi1: IntMatrix
    partial: IntMatrix

    def edges(self):
        """The six maps as (name, matrix, source group, target group)."""
        return (
            ("iota0", self.iota0, self.sub.k0, self.mid.k0),
            ("pi0", self.pi0, self.mid.k0, self.quot.k0),
            ("delta", self.delta, self.quot.k0, self.sub.k1),
            ("iota1", self.iota1, self.sub.k1, self.mid.k1),
            ("pi1", self.pi1, self.mid.k1, self.quot.k1),
            ("partial", self.partial, self.quot.k1, self.sub.k0),
        )


def _presentation(sp: SpectrumSpace, u: int, v: int) -> LocallyClosedSet:
    hu = sp.lattice.pairs[sp.phi(u)].h
    hv = sp.lattice.pairs[sp.phi(v)].h
    return LocallyClosedSet(u & ~v, u, v, hu & ~hv, hu, hv)


def canonical_presentation(sp: SpectrumSpace, pointset: int) -> LocallyClosedSet:
    """The minimal-hull presentation of a locally closed pointset."""
    umin = sp.min_open_containing(pointset)
    vc = umin & ~pointset
    if not sp.is_open(vc):
        raise ValueError(f"{pointset:#b} is not locally closed")
    return _presentation(sp, umin, vc)


def _indicator(rows: list[int], cols: list[int]) -> IntMatrix:
    return IntMatrix.from_rows(
        [[1 if r == c else 0 for c in cols] for r in rows], cols=len(cols)
    )


def _regular_globals(g: Graph, y: LocallyClosedSet) -> list[int]:
    verts = list(iter_bits(y.d))
    _, regs = k_matrix(subquotient_graph(g, y.d, y.h_v))
    return [verts[p] for p in regs]


def _transition(g: Graph, canon_y: LocallyClosedSet, canon_k: KData,
                raw_y: LocallyClosedSet, raw_k: KData):
    """Coordinate change from the canonical presentation into a larger one.

    The canonical carrier sits inside every presentation's carrier and
    saturates to all of it, so zero-extension of representatives and of
    kernel vectors induces isomorphisms on both K-groups.  Returns the pair
    of matrices with their inverses; identity when the carriers agree.
    """
    if canon_y.d == raw_y.d:
        n0 = IntMatrix.identity(canon_k.k0.ncoords)
        n1 = IntMatrix.identity(canon_k.k1.ncoords)
        return n0, n0, n1, n1
    if canon_y.d & ~raw_y.d:
        raise InternalInvariantError("canonical carrier escapes the presentation")
    e_vert = _indicator(list(iter_bits(raw_y.d)), list(iter_bits(canon_y.d)))
    e_reg = _indicator(_regular_globals(g, raw_y), _regular_globals(g, canon_y))
    n0 = reduce_map(raw_k.k0, raw_k.k0.project @ e_vert @ canon_k.k0.lift)
    n1 = reduce_map(raw_k.k1, raw_k.k1.project @ e_reg @ canon_k.k1.lift)
    inv0 = group_iso_inverse(raw_k.k0, n0)
    inv1 = group_iso_inverse(raw_k.k1, n1)
    if inv0 is None or inv1 is None:
        raise InternalInvariantError("presentation change is not a K-isomorphism")
    return n0, inv0, n1, inv1


def six_term(g: Graph, sp: SpectrumSpace, u1: int, u2: int, u3: int) -> SixTerm:
    """Six-term data for the chain, exactness-checked before returning.

    The maps are computed on the chain's own presentations and then pulled
    onto the canonical coordinates of each pointset, so matrices from
    different triples compose.
    """
    for a, b in ((u1, u2), (u2, u3)):
        if a & ~b:
            raise ValueError("opens must form a chain")
    y_s = _presentation(sp, u2, u1)
    y_q = _presentation(sp, u3, u2)
    y_a = _presentation(sp, u3, u1)
    ks, kq, ka = k_data(g, y_s), k_data(g, y_q), k_data(g, y_a)

    verts_s, verts_q, verts_a = (list(iter_bits(y.d)) for y in (y_s, y_q, y_a))
    b_a, regs_a = k_matrix(subquotient_graph(g, y_a.d, y_a.h_v))
    regs_a_global = [verts_a[p] for p in regs_a]
    regs_s_global = [v for v in regs_a_global if y_s.d >> v & 1]
    regs_q_global = [v for v in regs_a_global if y_q.d >> v & 1]

    # sub-block rows hit by quotient columns vanish by hereditarity of H2
    rows_q = [verts_a.index(v) for v in verts_q]
    cols_s = [regs_a_global.index(v) for v in regs_s_global]
    if not b_a.select_rows(rows_q).select_cols(cols_s).is_zero():
        raise InternalInvariantError("ideal columns leak into the quotient block")
    rows_s = [verts_a.index(v) for v in verts_s]
    cols_q = [regs_a_global.index(v) for v in regs_q_global]
    c_block = b_a.select_rows(rows_s).select_cols(cols_q)

    e_vert = _indicator(verts_a, verts_s)
    r_vert = _indicator(verts_q, verts_a)
    e_reg = _indicator(regs_a_global, regs_s_global)
    r_reg = _indicator(regs_q_global, regs_a_global)

    iota0 = reduce_map(ka.k0, ka.k0.project @ e_vert @ ks.k0.lift)
    pi0 = reduce_map(kq.k0, kq.k0.project @ r_vert @ ka.k0.lift)
    iota1 = reduce_map(ka.k1, ka.k1.project @ e_reg @ ks.k1.lift)
    pi1 = reduce_map(kq.k1, kq.k1.project @ r_reg @ ka.k1.lift)
    partial = reduce_map(ks.k0, ks.k0.project @ c_block @ kq.k1.lift)

    cy_s = canonical_presentation(sp, y_s.pointset)
    cy_q = canonical_presentation(sp, y_q.pointset)
    cy_a = canonical_presentation(sp, y_a.pointset)
    cks, ckq, cka = k_data(g, cy_s), k_data(g, cy_q), k_data(g, cy_a)
    s0, s0i, s1, s1i = _transition(g, cy_s, cks, y_s, ks)
    q0, q0i, q1, q1i = _transition(g, cy_q, ckq, y_q, kq)
    a0, a0i, a1, a1i = _transition(g, cy_a, cka, y_a, ka)

    st = SixTerm(
        u1, u2, u3, cks, cka, ckq,
        iota0=reduce_map(cka.k0, a0i @ iota0 @ s0),
        pi0=reduce_map(ckq.k0, q0i @ pi0 @ a0),
        delta=IntMatrix.zero(cks.k1.ncoords, ckq.k0.ncoords),
        iota1=reduce_map(cka.k1, a1i @ iota1 @ s1),
        pi1=reduce_map(ckq.k1, q1i @ pi1 @ a1),
        partial=reduce_map(cks.k0, s0i @ partial @ q1),
    )
    for name, m, src, tgt in st.edges():
        killed = m @ relation_columns(src)
        if not maps_equal(tgt, killed, IntMatrix.zero(killed.rows, killed.cols)):
            raise InternalInvariantError(f"{name} does not kill source relations")
    fails = exactness_failures(st)
    if fails:
        raise ExactnessError("; ".join(fails))
    return st


def exactness_failures(st: SixTerm) -> list[str]:
    """Image-equals-kernel at all six spots, as integer lattice comparisons."""
    edges = st.edges()
    fails = []
    for k in range(6):
        f_name, f, _, mid = edges[k]
        g_name, gm, _, tgt = edges[(k + 1) % 6]
        if not maps_equal(tgt, gm @ f, IntMatrix.zero(gm.rows, f.cols)):
            fails.append(f"{g_name} after {f_name} is nonzero")
            continue
        if mid.ncoords == 0:
            continue
        if not lattices_equal(image_lattice(mid, f), kernel_lattice(tgt, gm)):
            fails.append(f"image of {f_name} differs from kernel of {g_name}")
    return fails


def open_triples(sp: SpectrumSpace):
    for u1, u2, u3 in itertools.combinations_with_replacement(sp.opens, 3):
        if not (u1 & ~u2) and not (u2 & ~u3):
            yield u1, u2, u3


def verify_exactness(g: Graph, sp: SpectrumSpace) -> Report:
    """Run every open triple through the six-term construction."""
    fails = []
    checks = 0
    for u1, u2, u3 in open_triples(sp):
        checks += 6
        try:
            six_term(g, sp, u1, u2, u3)
        except (ExactnessError, InternalInvariantError) as e:
            fails.append(f"triple ({u1:#b},{u2:#b},{u3:#b}): {e}")
    return Report("exactness", checks, tuple(fails))


def verify_well_definedness(g: Graph, sp: SpectrumSpace) -> Report:
    """Presentation independence of each pointset's subquotient data.

    The canonical carrier embeds in the carrier of every other (U, V)
    presentation and the zero-extension of classes is a K-isomorphism; when
    the carriers agree the data must be identical on the nose.  Saturation
    can genuinely enlarge a non-minimal presentation's carrier, so equality
    of carriers is not required in general, only the isomorphism.
    """
    canon = {lc.pointset: lc for lc in locally_closed_sets(sp)}
    kd = (
        {y: k_data(g, lc) for y, lc in canon.items()} if g.row_finite else {}
    )
    fails = []
    checks = 0
    for u, v in itertools.product(sp.opens, repeat=2):
        if v & ~u:
            continue
        alt = _presentation(sp, u, v)
        ref = canon[alt.pointset]
        checks += 1
        if ref.d & ~alt.d:
            fails.append(f"canonical carrier escapes presentation ({u:#b},{v:#b})")
            continue
        if not g.row_finite:
            continue
        if alt.d == ref.d:
            if k_data(g, alt) != kd[alt.pointset]:
                fails.append(f"K-data drifts under presentation ({u:#b},{v:#b})")
            continue
        alt_k = k_data(g, alt)
        want = kd[alt.pointset]
        if (alt_k.k0.invariant_factors != want.k0.invariant_factors
                or alt_k.k1.invariant_factors != want.k1.invariant_factors):
            fails.append(f"K-groups drift under presentation ({u:#b},{v:#b})")
            continue
        try:
            _transition(g, ref, want, alt, alt_k)
        except InternalInvariantError:
            fails.append(f"no canonical K-isomorphism for presentation ({u:#b},{v:#b})")
    return Report("well-definedness", checks, tuple(fails))


def cone_contains(k: KData, x, bound: int = 64) -> tuple[bool, bool]:
    """Whether x is an N-combination of the cone generators.

    Returns (found, conclusive).  Torsion-only generators contribute a full
    subgroup (negatives are reachable by repetition), so only generators with
    free content need the bounded coefficient search; when their free parts
    are nonnegative the search space is finite and a miss is conclusive.
    """
    k0 = k.k0
    x = k0.reduce(x)
    if all(c == 0 for c in x):
        return True, True
    free_idx = [i for i, d in enumerate(k0.invariant_factors) if d == 0]
    gens = [k0.reduce(gv) for gv in k.cone_generators]
    free_g = [g for g in gens if any(g[i] for i in free_idx)]
    tors_g = [g for g in gens if not any(g[i] for i in free_idx)]
    memb = IntMatrix.from_rows(
        [[g[i] for g in tors_g] for i in range(k0.ncoords)], cols=len(tors_g)
    ).hstack(relation_columns(k0))

    def torsion_reachable(t) -> bool:
        return solve_exact(memb, t) is not None

    if not free_g:
        if any(x[i] for i in free_idx):
            return False, True
        return torsion_reachable(x), True

    covered = True
    caps = []
    nonneg = all(g[i] >= 0 for g in free_g for i in free_idx)
    if nonneg and any(x[i] < 0 for i in free_idx):
        return False, True
    for g in free_g:
        if nonneg:
            cap = min(x[i] // g[i] for i in free_idx if g[i] > 0)
        else:
            cap = bound
            covered = False
        if cap > bound:
            cap = bound
            covered = False
        caps.append(cap)
    total = 1
    for cap in caps:
        total *= cap + 1
    while total > 200_000:
        j = caps.index(max(caps))
        caps[j] //= 2
        covered = False
        total = 1
        for cap in caps:
            total *= cap + 1

    for coeffs in itertools.product(*(range(c + 1) for c in caps)):
        resid = list(x)
        for cv, g in zip(coeffs, free_g):
            for i in range(k0.ncoords):
                resid[i] -= cv * g[i]
        resid = list(k0.reduce(resid))
        if any(resid[i] for i in free_idx):
            continue
        if torsion_reachable(resid):
            return True, True
    return False, covered
