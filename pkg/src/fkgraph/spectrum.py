"""Prime points of the pair lattice and their hull-kernel topology.

A proper pair P is prime when meet(I, J) <= P forces I <= P or J <= P.
Closures come from kernels (meets), opens from the sets W(I) of points not
containing I.  Point subsets are bitmasks over the point list; opens are
exactly the W(I), which is verified rather than assumed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property

from .errors import InternalInvariantError
from .graphs import Graph, iter_bits
from .lattice import AdmissiblePair, IdealLattice
from .report import Report


@dataclass(frozen=True)
class SpectrumSpace:
    lattice: IdealLattice
    points: tuple[int, ...]   # lattice indices of the primes, in lattice order
    opens: tuple[int, ...]    # every open point-subset, sorted by (size, mask)

    @property
    def graph(self) -> Graph:
        return self.lattice.graph

    @property
    def npoints(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << self.npoints) - 1

    def pair(self, k: int) -> AdmissiblePair:
        return self.lattice.pairs[self.points[k]]

    def ker(self, tmask: int) -> int:
        """Meet of the points in tmask as a lattice index; ker(empty) is top."""
        return self.lattice.meet_many(self.points[k] for k in iter_bits(tmask))

    def closure(self, tmask: int) -> int:
        kt = self.ker(tmask)
        out = 0
        for k in range(self.npoints):
            if self.lattice.leq(kt, self.points[k]):
                out |= 1 << k
        return out

    def w_set(self, i: int) -> int:
        """Points whose pair does not lie above lattice element i."""
        out = 0
        for k in range(self.npoints):
            if not self.lattice.leq(i, self.points[k]):
                out |= 1 << k
        return out

    def gamma(self, i: int) -> int:
        return self.w_set(i)

    def is_open(self, mask: int) -> bool:
        return mask in self._open_set

    def phi(self, umask: int) -> int:
        if not self.is_open(umask):
            raise ValueError(f"{umask:#b} is not an open set")
        return self.ker(self.full & ~umask)

    def min_open_containing(self, tmask: int) -> int:
        """Intersection of all opens containing tmask; open in a finite space."""
        acc = self.full
        for u in self.opens:
            if tmask & ~u == 0:
                acc &= u
        if not self.is_open(acc):
            raise InternalInvariantError("opens are not closed under intersection")
        return acc

    def specializes(self, j: int, k: int) -> bool:
        """Point j specializes to k when k lies in the closure of {j}."""
        return bool(self._point_closures[j] >> k & 1)

    @cached_property
    def _point_closures(self) -> tuple[int, ...]:
        return tuple(self.closure(1 << k) for k in range(self.npoints))

    @cached_property
    def _open_set(self) -> frozenset[int]:
        return frozenset(self.opens)


def s_primes(lat: IdealLattice) -> SpectrumSpace:
    """All prime points with the topology installed."""
    pts = []
    for p in range(lat.size):
        if p == lat.top:
            continue
        above = [i for i in range(lat.size) if not lat.leq(i, p)]
        if all(not lat.leq(lat.meet[i][j], p)
               for i, j in itertools.combinations_with_replacement(above, 2)):
            pts.append(p)
    points = tuple(pts)

    def w(i: int) -> int:
        out = 0
        for k, p in enumerate(points):
            if not lat.leq(i, p):
                out |= 1 << k
        return out

    opens = sorted({w(i) for i in range(lat.size)}, key=lambda m: (m.bit_count(), m))
    seen = set(opens)
    for a, b in itertools.combinations(opens, 2):
        if (a | b) not in seen or (a & b) not in seen:
            raise InternalInvariantError("opens are not a topology")
    return SpectrumSpace(lat, points, tuple(opens))


@dataclass(frozen=True)
class LocallyClosedSet:
    """A difference U \\ V of opens in canonical form.

    u is the minimal open containing the pointset and v = u minus the
    pointset.  d is the vertex-set difference H_phi(u) minus H_phi(v), the
    carrier of the associated subquotient; h_v is H_phi(v) itself.
    """

    pointset: int
    u: int
    v: int
    d: int
    h_u: int
    h_v: int


def locally_closed_sets(sp: SpectrumSpace) -> tuple[LocallyClosedSet, ...]:
    """Every pointset of the form U \\ V, once each, canonically presented."""
    seen: set[int] = set()
    out = []
    for u, v in itertools.product(sp.opens, repeat=2):
        if v & ~u:
            continue
        y = u & ~v
        if y in seen:
            continue
        seen.add(y)
        umin = sp.min_open_containing(y)
        vc = umin & ~y
        if not sp.is_open(vc):
            raise InternalInvariantError(f"complement of {y:#b} in its hull is not open")
        hu = sp.lattice.pairs[sp.phi(umin)].h
        hv = sp.lattice.pairs[sp.phi(vc)].h
        out.append(LocallyClosedSet(y, umin, vc, hu & ~hv, hu, hv))
    out.sort(key=lambda lc: (lc.pointset.bit_count(), lc.pointset))
    return tuple(out)


def _subset_samples(n: int, exhaustive_cap: int = 6, samples: int = 200):
    if n <= exhaustive_cap:
        return list(range(1 << n))
    rng = random.Random(0)
    full = (1 << n) - 1
    picks = {0, full}
    while len(picks) < samples:
        picks.add(rng.randrange(1 << n))
    return sorted(picks)


def verify_kuratowski(sp: SpectrumSpace) -> Report:
    """Closure axioms: empty set, extensivity, idempotence, union splitting.

    Exhaustive over all point subsets up to 6 points, seeded sampling above.
    """
    fails = []
    checks = 0
    subs = _subset_samples(sp.npoints)
    checks += 1
    if sp.closure(0) != 0:
        fails.append("closure(empty) is nonempty")
    cl = {t: sp.closure(t) for t in subs}
    for t in subs:
        checks += 2
        if t & ~cl[t]:
            fails.append(f"T={t:#b} not inside its closure")
        if sp.closure(cl[t]) != cl[t]:
            fails.append(f"closure not idempotent at T={t:#b}")
    for s, t in itertools.combinations_with_replacement(subs, 2):
        checks += 1
        if sp.closure(s | t) != cl[s] | cl[t]:
            fails.append(f"closure({s:#b} | {t:#b}) != union of closures")
    return Report("kuratowski", checks, tuple(fails))


def verify_open_ideal_iso(sp: SpectrumSpace) -> Report:
    """phi and gamma invert each other and preserve order, meet, and join."""
    lat = sp.lattice
    fails = []
    checks = 0
    for i in range(lat.size):
        checks += 1
        if sp.phi(sp.gamma(i)) != i:
            fails.append(f"phi(gamma({lat.pairs[i]})) drifted")
    for u in sp.opens:
        checks += 1
        if sp.gamma(sp.phi(u)) != u:
            fails.append(f"gamma(phi({u:#b})) drifted")
    for i, j in itertools.product(range(lat.size), repeat=2):
        checks += 3
        if lat.leq(i, j) and sp.gamma(i) & ~sp.gamma(j):
            fails.append(f"gamma not monotone at ({i},{j})")
        if sp.gamma(lat.join[i][j]) != sp.gamma(i) | sp.gamma(j):
            fails.append(f"gamma(join) != union at ({i},{j})")
        if sp.gamma(lat.meet[i][j]) != sp.gamma(i) & sp.gamma(j):
            fails.append(f"gamma(meet) != intersection at ({i},{j})")
    for u, v in itertools.product(sp.opens, repeat=2):
        checks += 1
        if u & ~v == 0 and not lat.leq(sp.phi(u), sp.phi(v)):
            fails.append(f"phi not monotone at ({u:#b},{v:#b})")
    return Report("lattice-iso", checks, tuple(fails))


def verify_kernel_identity(sp: SpectrumSpace) -> Report:
    """Every proper pair is the meet of the points above it."""
    lat = sp.lattice
    fails = []
    checks = 0
    for i in range(lat.size):
        if i == lat.top:
            continue
        checks += 1
        above = [k for k, p in enumerate(sp.points) if lat.leq(i, p)]
        back = lat.meet_many(sp.points[k] for k in above)
        if back != i:
            fails.append(f"{lat.pairs[i]} is not the meet of its points")
    return Report("kernel-identity", checks, tuple(fails))


def verify_t0(sp: SpectrumSpace) -> Report:
    fails = []
    checks = 0
    for j, k in itertools.combinations(range(sp.npoints), 2):
        checks += 1
        if sp._point_closures[j] == sp._point_closures[k]:
            fails.append(f"points {j} and {k} share a closure")
    return Report("t0", checks, tuple(fails))
