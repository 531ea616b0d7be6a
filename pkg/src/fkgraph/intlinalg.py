"""Exact integer matrix algebra.

Smith normal form with tracked unimodular transforms, cokernels and kernels
as finitely generated abelian groups in canonical presentation, and a bounded
enumeration of group isomorphisms.  Everything runs on Python's
arbitrary-precision integers; no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Iterable, Iterator, Sequence


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    # Invariant: r0 = x0*a + y0*b and r1 = x1*a + y1*b throughout.
    r0, x0, y0 = a, 1, 0
    r1, x1, y1 = b, 0, 1
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if r0 < 0:
        r0, x0, y0 = -r0, -x0, -y0
    return r0, x0, y0


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix; `entries` is a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise ValueError("row count mismatch")
        for r in self.entries:
            if len(r) != self.cols:
                raise ValueError("ragged matrix")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count needed for a matrix with no rows")
            cols = len(rows[0])
        return IntMatrix(len(rows), cols, tuple(rows))

    @staticmethod
    def identity(n: int) -> IntMatrix:
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> IntMatrix:
        return IntMatrix(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def column(values: Sequence[int]) -> IntMatrix:
        return IntMatrix(len(values), 1, tuple((int(v),) for v in values))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.entries else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ot = other.transpose().entries
        ent = tuple(
            tuple(sum(a * b for a, b in zip(row, ocol)) for ocol in ot)
            for row in self.entries
        )
        if not self.entries:
            ent = ()
        return IntMatrix(self.rows, other.cols, ent if self.rows else ())

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(a + b for a, b in zip(r1, r2))
                               for r1, r2 in zip(self.entries, other.entries)))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.entries))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.entries)

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix(self.rows, self.cols + other.cols,
                         tuple(r1 + r2 for r1, r2 in zip(self.entries, other.entries)))

    def select_rows(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix(len(idx), self.cols, tuple(self.entries[i] for i in idx))

    def select_cols(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix(self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.entries))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    # Bareiss update: division by the previous pivot is exact.
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1


@dataclass(frozen=True)
class SmithDecomposition:
    """P @ M @ Q = S with P, Q unimodular and S diagonal, d1 | d2 | ... >= 0."""

    S: IntMatrix
    P: IntMatrix
    Q: IntMatrix
    P_inv: IntMatrix
    Q_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        n = min(self.S.rows, self.S.cols)
        return tuple(self.S.entries[i][i] for i in range(n))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_decomposition(M: IntMatrix) -> SmithDecomposition:
    """Diagonalize M over the integers, tracking both transforms and their inverses."""
    m, n = M.rows, M.cols
    D = [list(r) for r in M.entries]
    P = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    Pi = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    Q = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    Qi = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i, j, x, y, z, w):
        # rows (i, j) <- (x*ri + y*rj, z*ri + w*rj); det s = xw - yz must be ±1.
        s = x * w - y * z
        assert abs(s) == 1
        a, b, c, d = w * s, -y * s, -z * s, x * s  # inverse block
        for Mx in (D, P):
            ri, rj = Mx[i], Mx[j]
            Mx[i] = [x * u + y * v for u, v in zip(ri, rj)]
            Mx[j] = [z * u + w * v for u, v in zip(ri, rj)]
        for row in Pi:  # Pi <- Pi @ inv: columns (i, j) mix
            u, v = row[i], row[j]
            row[i] = a * u + c * v
            row[j] = b * u + d * v

    def col_op(i, j, x, y, z, w):
        # cols (i, j) <- (x*ci + y*cj, z*ci + w*cj); det must be ±1.
        # As a right factor this is R = [[x, z], [y, w]] on the (i, j) block.
        s = x * w - y * z
        assert abs(s) == 1
        a, b, c, d = w * s, -z * s, -y * s, x * s
        for Mx in (D, Q):
            for row in Mx:
                u, v = row[i], row[j]
                row[i] = x * u + y * v
                row[j] = z * u + w * v
        ri, rj = Qi[i], Qi[j]  # Qi <- inv @ Qi: rows (i, j) mix
        Qi[i] = [a * u + b * v for u, v in zip(ri, rj)]
        Qi[j] = [c * u + d * v for u, v in zip(ri, rj)]

    def negate_row(i):
        D[i] = [-u for u in D[i]]
        P[i] = [-u for u in P[i]]
        for row in Pi:
            row[i] = -row[i]

    t = 0
    while True:
        # deterministic pivot: smallest |value|, ties by position
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] != 0 and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            row_op(t, pivot[0], 0, 1, 1, 0)
        if pivot[1] != t:
            col_op(t, pivot[1], 0, 1, 1, 0)
        while True:
            for i in range(t + 1, m):
                if D[i][t] == 0:
                    continue
                a, b = D[t][t], D[i][t]
                if b % a == 0:
                    row_op(t, i, 1, 0, -(b // a), 1)
                else:
                    g, x, y = xgcd(a, b)
                    row_op(t, i, x, y, -(b // g), a // g)
            for j in range(t + 1, n):
                if D[t][j] == 0:
                    continue
                a, b = D[t][t], D[t][j]
                if b % a == 0:
                    col_op(t, j, 1, 0, -(b // a), 1)
                else:
                    g, x, y = xgcd(a, b)
                    col_op(t, j, x, y, -(b // g), a // g)
            # column ops can refill column t below the pivot
            if all(D[i][t] == 0 for i in range(t + 1, m)):
                break
        t += 1
    r = t

    # enforce d_i | d_{i+1} by folding each offender into its predecessor
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a, b = D[i][i], D[i + 1][i + 1]
            if b % a != 0:
                changed = True
                row_op(i, i + 1, 1, 1, 0, 1)        # puts b at (i, i+1)
                g, x, y = xgcd(a, b)
                col_op(i, i + 1, x, y, -(b // g), a // g)
                # now D[i][i] = g, D[i+1][i] = y*b; clear it
                row_op(i, i + 1, 1, 0, -(y * (b // g)), 1)
    for i in range(r):
        if D[i][i] < 0:
            negate_row(i)

    dec = SmithDecomposition(
        S=IntMatrix.from_rows(D, cols=n) if m else IntMatrix.zero(0, n),
        P=IntMatrix.from_rows(P, cols=m) if m else IntMatrix.zero(0, 0),
        Q=IntMatrix.from_rows(Q, cols=n) if n else IntMatrix.zero(0, 0),
        P_inv=IntMatrix.from_rows(Pi, cols=m) if m else IntMatrix.zero(0, 0),
        Q_inv=IntMatrix.from_rows(Qi, cols=n) if n else IntMatrix.zero(0, 0),
    )
    _assert_smith(M, dec)
    return dec


def _assert_smith(M: IntMatrix, dec: SmithDecomposition) -> None:
    # recompute the defining identity; cheap at the scales this package runs at
    if (dec.P @ M @ dec.Q).entries != dec.S.entries:
        raise AssertionError("smith decomposition identity failed")
    if (dec.P @ dec.P_inv).entries != IntMatrix.identity(M.rows).entries:
        raise AssertionError("P inverse drifted")
    if (dec.Q_inv @ dec.Q).entries != IntMatrix.identity(M.cols).entries:
        raise AssertionError("Q inverse drifted")
    diag = dec.diagonal
    for i, d in enumerate(diag):
        if d < 0:
            raise AssertionError("negative invariant factor")
        for j in range(M.cols):
            if j != i and dec.S.entries[i][j] != 0:
                raise AssertionError("off-diagonal junk")
    nz = [d for d in diag if d != 0]
    if any(nz[i + 1] % nz[i] != 0 for i in range(len(nz) - 1)):
        raise AssertionError("divisibility chain broken")
    if len(nz) != len(diag) and any(d != 0 for d in diag[len(nz):]):
        raise AssertionError("zero factors must trail")


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (S, P, Q) with P @ M @ Q = S in Smith normal form."""
    dec = smith_decomposition(M)
    return dec.S, dec.P, dec.Q


def solve_exact(A: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution x of A x = b, or None if there is none."""
    if len(b) != A.rows:
        raise ValueError("vector length mismatch")
    dec = smith_decomposition(A)
    y = dec.P.apply(b)
    z = [0] * A.cols
    diag = dec.diagonal
    for i in range(A.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if y[i] != 0:
                return None
        else:
            if y[i] % d != 0:
                return None
            z[i] = y[i] // d
    return dec.Q.apply(z)


@dataclass(frozen=True)
class FgAbGroup:
    """Finitely generated abelian group in canonical presentation.

    `invariant_factors` lists d1 | d2 | ... with unit factors dropped and 0
    (free factor, divisible by everything) at the tail.  `project` maps
    ambient coordinates to canonical ones; `lift` is a section with
    project @ lift = identity modulo the factors.
    """

    invariant_factors: tuple[int, ...]
    project: IntMatrix
    lift: IntMatrix

    def __post_init__(self):
        seen_zero = False
        prev = None
        for d in self.invariant_factors:
            if d == 1 or d < 0:
                raise ValueError("factors must be 0 or >= 2")
            if d == 0:
                seen_zero = True
            else:
                if seen_zero:
                    raise ValueError("free factors must trail")
                if prev is not None and d % prev != 0:
                    raise ValueError("divisibility chain broken")
                prev = d
        if self.project.rows != len(self.invariant_factors):
            raise ValueError("projection shape mismatch")
        if self.lift.cols != len(self.invariant_factors) or self.lift.rows != self.project.cols:
            raise ValueError("lift shape mismatch")

    @property
    def ncoords(self) -> int:
        return len(self.invariant_factors)

    @property
    def ambient_dim(self) -> int:
        return self.project.cols

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d != 0)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> int:
        """Number of elements; only for finite groups."""
        if not self.is_finite:
            raise ValueError("infinite group")
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative: torsion coordinates taken mod their factor."""
        if len(vec) != self.ncoords:
            raise ValueError("coordinate length mismatch")
        return tuple(v % d if d else v for v, d in zip(vec, self.invariant_factors))

    def project_vec(self, ambient: Sequence[int]) -> tuple[int, ...]:
        return self.reduce(self.project.apply(ambient))

    def is_zero(self, vec: Sequence[int]) -> bool:
        return all(v == 0 for v in self.reduce(vec))

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements of a finite group, lexicographic."""
        if not self.is_finite:
            raise ValueError("infinite group")
        yield from product(*(range(d) for d in self.invariant_factors))


def _sign_normalize(rows: list[list[int]], cosign: list[list[int]], free_idx: Iterable[int]) -> None:
    # flip a presentation row (and the matching section column) so its first
    # nonzero entry is positive; composing with an automorphism, so harmless
    for i in free_idx:
        lead = next((x for x in rows[i] if x != 0), 0)
        if lead < 0:
            rows[i] = [-x for x in rows[i]]
            for r in cosign:
                r[i] = -r[i]


def cokernel(M: IntMatrix) -> FgAbGroup:
    """Z^rows / (column space of M) in canonical presentation."""
    dec = smith_decomposition(M)
    diag = dec.diagonal
    factors = []
    keep = []
    for i in range(M.rows):
        d = diag[i] if i < len(diag) else 0
        if d != 1:
            factors.append(d)
            keep.append(i)
    proj = [list(dec.P.entries[i]) for i in keep]
    lift = [[dec.P_inv.entries[i][j] for j in keep] for i in range(M.rows)]
    # canonical entries: torsion rows reduced mod their factor, free rows sign-fixed
    for k, (i, d) in enumerate(zip(keep, factors)):
        if d:
            proj[k] = [x % d for x in proj[k]]
    _sign_normalize(proj, lift, [k for k, d in enumerate(factors) if d == 0])
    return FgAbGroup(
        invariant_factors=tuple(factors),
        project=IntMatrix.from_rows(proj, cols=M.rows),
        lift=IntMatrix.from_rows(lift, cols=len(keep)) if M.rows else IntMatrix.zero(0, len(keep)),
    )


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a basis of the integer kernel lattice {x : M x = 0}."""
    return kernel_group(M).lift


def kernel_group(M: IntMatrix) -> FgAbGroup:
    """The kernel of M as a free group: lift = basis, project = left inverse."""
    dec = smith_decomposition(M)
    r = dec.rank
    idx = list(range(r, M.cols))
    basis = [[dec.Q.entries[i][j] for j in idx] for i in range(M.cols)]
    proj = [list(dec.Q_inv.entries[j]) for j in idx]
    # sign-fix each basis column (column of `basis` = row j of Q transposed)
    for k in range(len(idx)):
        colvals = [basis[i][k] for i in range(M.cols)]
        lead = next((x for x in colvals if x != 0), 0)
        if lead < 0:
            for i in range(M.cols):
                basis[i][k] = -basis[i][k]
            proj[k] = [-x for x in proj[k]]
    return FgAbGroup(
        invariant_factors=(0,) * len(idx),
        project=IntMatrix.from_rows(proj, cols=M.cols),
        lift=IntMatrix.from_rows(basis, cols=len(idx)) if M.cols else IntMatrix.zero(0, len(idx)),
    )


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _det_mod_p(rows: list[list[int]], p: int) -> int:
    n = len(rows)
    m = [[x % p for x in r] for r in rows]
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] % p != 0), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det = (det * m[k][k]) % p
        inv = pow(m[k][k], -1, p)
        for i in range(k + 1, n):
            f = (m[i][k] * inv) % p
            if f:
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[k])]
    return det % p


def _is_torsion_automorphism(T: list[list[int]], tf: Sequence[int]) -> bool:
    # an endomorphism of a finite abelian group is bijective iff it is
    # surjective on every Frattini quotient G/pG, prime by prime
    primes = sorted({p for d in tf for p in _prime_factors(d)})
    for p in primes:
        idx = [i for i, d in enumerate(tf) if d % p == 0]
        sub = [[T[i][j] for j in idx] for i in idx]
        if _det_mod_p(sub, p) == 0:
            return False
    return True


def _torsion_automorphisms(tf: Sequence[int]) -> list[tuple[tuple[int, ...], ...]]:
    """All automorphism matrices of the torsion group Z/tf[0] + ..., identity first."""
    k = len(tf)
    if k == 0:
        return [()]
    # entry (i, j) must be a multiple of tf[i] / gcd(tf[i], tf[j]) for the
    # column map from a generator of order tf[j] to be well defined
    cell_values = [[list(range(0, tf[i], tf[i] // gcd(tf[i], tf[j]))) for j in range(k)] for i in range(k)]
    ident = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
    out = [ident]
    for flat in product(*(cell_values[i][j] for i in range(k) for j in range(k))):
        T = tuple(tuple(flat[i * k + j] for j in range(k)) for i in range(k))
        if T == ident:
            continue
        if _is_torsion_automorphism([list(r) for r in T], tf):
            out.append(T)
    return out


def _unimodular_candidates(f: int, budget: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """GL(f, Z) matrices with |entries| <= budget, identity first, then lexicographic."""
    if f == 0:
        yield ()
        return
    ident = tuple(tuple(1 if i == j else 0 for j in range(f)) for i in range(f))
    yield ident
    vals = range(-budget, budget + 1)
    for flat in product(vals, repeat=f * f):
        F = tuple(tuple(flat[i * f + j] for j in range(f)) for i in range(f))
        if F == ident:
            continue
        if abs(IntMatrix(f, f, F).det()) == 1:
            yield F


def group_isos(G: FgAbGroup, H: FgAbGroup, budget: int = 2) -> Iterator[IntMatrix]:
    """Isomorphisms G -> H as matrices on canonical coordinates.

    Torsion-part automorphisms and free-to-torsion blocks are enumerated
    exactly; free-part blocks have entries bounded by `budget`.  Yields the
    identity first when it qualifies.  Every yield is invertible over the
    factors.  The enumeration is exhaustive iff the free rank is <= 1
    (see `iso_search_complete`).
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if G.invariant_factors != H.invariant_factors:
        return
    f = G.invariant_factors
    tf = G.torsion_factors
    kt, kf = len(tf), G.rank
    t_auts = _torsion_automorphisms(tf)
    x_blocks = list(product(*(range(f[i]) for i in range(kt) for _ in range(kf)))) or [()]
    for F in _unimodular_candidates(kf, budget):
        for T in t_auts:
            for X in x_blocks:
                rows = []
                for i in range(kt):
                    rows.append(tuple(T[i]) + tuple(X[i * kf + j] for j in range(kf)))
                for i in range(kf):
                    rows.append((0,) * kt + tuple(F[i]))
                yield IntMatrix(kt + kf, kt + kf, tuple(rows))


def iso_search_complete(G: FgAbGroup, budget: int = 2) -> bool:
    """True when group_isos(G, G, budget) provably enumerates every isomorphism."""
    return budget >= 1 and G.rank <= 1


def group_iso_inverse(G: FgAbGroup, A: IntMatrix) -> IntMatrix | None:
    """Inverse of A over G's factors, or None when A is not invertible."""
    k = G.ncoords
    if A.rows != k or A.cols != k:
        raise ValueError("shape mismatch")
    relcols = [i for i, d in enumerate(G.invariant_factors) if d != 0]
    slack = IntMatrix(k, len(relcols),
                      tuple(tuple(G.invariant_factors[j] if i == j else 0 for j in relcols)
                            for i in range(k)))
    aug = A.hstack(slack)
    cols = []
    for i in range(k):
        e = [1 if j == i else 0 for j in range(k)]
        sol = solve_exact(aug, e)
        if sol is None:
            return None
        cols.append(sol[:k])
    B = IntMatrix(k, k, tuple(tuple(cols[j][i] for j in range(k)) for i in range(k)))
    B = reduce_map(G, B)
    ident = IntMatrix.identity(k)
    if not (maps_equal(G, A @ B, ident) and maps_equal(G, B @ A, ident)):
        return None
    return B


def reduce_map(target: FgAbGroup, M: IntMatrix) -> IntMatrix:
    """Canonical entries for a map into `target`: row i taken mod its factor."""
    if M.rows != target.ncoords:
        raise ValueError("shape mismatch")
    rows = []
    for i, d in enumerate(target.invariant_factors):
        rows.append(tuple(x % d for x in M.entries[i]) if d else M.entries[i])
    return IntMatrix(M.rows, M.cols, tuple(rows))


def maps_equal(target: FgAbGroup, A: IntMatrix, B: IntMatrix) -> bool:
    """Equality of maps into `target`, i.e. entrywise mod the target factors."""
    return reduce_map(target, A).entries == reduce_map(target, B).entries


def relation_columns(G: FgAbGroup) -> IntMatrix:
    """Columns d_i e_i for the torsion factors of G, in G's coordinates."""
    n = G.ncoords
    tors = [i for i, d in enumerate(G.invariant_factors) if d > 0]
    rows = [[G.invariant_factors[j] if i == j else 0 for j in tors] for i in range(n)]
    return IntMatrix.from_rows(rows, cols=len(tors))


def image_lattice(target: FgAbGroup, M: IntMatrix) -> IntMatrix:
    """Column generators of the subgroup im(M) of `target`, relations included."""
    if M.rows != target.ncoords:
        raise ValueError("map does not land in target coordinates")
    return M.hstack(relation_columns(target))


def kernel_lattice(target: FgAbGroup, M: IntMatrix) -> IntMatrix:
    """Column generators of {x : M x = 0 in target}.

    Solutions are x with M x in the relation lattice; they form the projection
    of the integer kernel of the block [M | relations].
    """
    if M.rows != target.ncoords:
        raise ValueError("map does not land in target coordinates")
    block = M.hstack(relation_columns(target))
    return kernel_basis(block).select_rows(range(M.cols))


def lattice_contains(A: IntMatrix, B: IntMatrix) -> bool:
    """Whether every column of B is an integer combination of columns of A."""
    if A.rows != B.rows:
        raise ValueError("ambient dimension mismatch")
    return all(solve_exact(A, B.col(j)) is not None for j in range(B.cols))


def lattices_equal(A: IntMatrix, B: IntMatrix) -> bool:
    return lattice_contains(A, B) and lattice_contains(B, A)
