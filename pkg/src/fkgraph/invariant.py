"""Whole-graph invariant assembly and bounded isomorphism search.

`assemble` packages the spectrum, the K-data of every locally closed point
set, and every triple's six-term maps into one object.  `compare` decides
whether two such objects can be matched by a homeomorphism of spectra
together with a family of ordered group isomorphisms commuting with all the
maps.  The verdict is three-valued: a mismatch that survives every
homeomorphism is DISTINGUISHED, a fully certified family is COMPATIBLE, and
an exhausted search budget (or an inconclusive cone membership) is UNKNOWN.
Witnesses are plain dicts, deterministic, and replayable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .errors import CapExceeded, InternalInvariantError
from .graphs import Graph
from .intlinalg import (
    IntMatrix,
    group_iso_inverse,
    group_isos,
    iso_search_complete,
    maps_equal,
)
from .ktheory import KData, SixTerm, cone_contains, k_data, open_triples, six_term
from .lattice import enumerate_admissible_pairs
from .report import Report
from .spectrum import LocallyClosedSet, SpectrumSpace, locally_closed_sets, s_primes

DISTINGUISHED = "DISTINGUISHED"
COMPATIBLE = "COMPATIBLE"
UNKNOWN = "UNKNOWN"

DEFAULT_BUDGET = 2
DEFAULT_POINT_CAP = 7

# candidate evaluations per compare call before giving up with UNKNOWN
_NODE_CAP = 500_000


@dataclass(frozen=True)
class FilteredK:
    """Everything `compare` looks at, computed once per graph.

    kmap keys are exactly the locally closed pointsets of the space; triples
    keys are the open chains (U1, U2, U3).  When the graph is not row-finite
    the K layer cannot be built from the data at hand and both mappings are
    empty; k_complete records which case we are in.
    """

    graph: Graph
    space: SpectrumSpace
    lcs: tuple[LocallyClosedSet, ...]
    kmap: Mapping[int, KData]
    triples: Mapping[tuple[int, int, int], SixTerm]
    k_complete: bool

    @property
    def unital(self) -> bool:
        # finitely many vertices: the vertex projections sum to a unit
        return True

    @property
    def unit_class(self):
        if not self.k_complete:
            return None
        return self.kmap[self.space.full].unit_class


@dataclass(frozen=True)
class CompareVerdict:
    outcome: str
    witness: dict


def assemble(g: Graph, point_cap: int = DEFAULT_POINT_CAP,
             vertex_cap: int = 16) -> FilteredK:
    """Spectrum, per-pointset K-data, and all triple maps for one graph."""
    if point_cap < 1:
        raise ValueError("point cap must be >= 1")
    lat = enumerate_admissible_pairs(g, vertex_cap=vertex_cap)
    sp = s_primes(lat)
    if sp.npoints > point_cap:
        raise CapExceeded(f"{sp.npoints} spectrum points exceed cap {point_cap}")
    lcs = locally_closed_sets(sp)
    if not g.row_finite:
        return FilteredK(g, sp, lcs, {}, {}, False)
    kmap = {y.pointset: k_data(g, y) for y in lcs}
    triples = {}
    for u1, u2, u3 in open_triples(sp):
        st = six_term(g, sp, u1, u2, u3)
        for part, mask in ((st.sub, u2 & ~u1), (st.mid, u3 & ~u1),
                           (st.quot, u3 & ~u2)):
            if part != kmap[mask]:
                raise InternalInvariantError("triple groups drift from kmap")
        triples[(u1, u2, u3)] = st
    return FilteredK(g, sp, lcs, kmap, triples, True)


def poset_isomorphisms(a: SpectrumSpace, b: SpectrumSpace):
    """All point bijections preserving specialization both ways.

    Finite T0 spaces are their specialization posets, so these are exactly
    the homeomorphisms.  The identity permutation comes first when it
    qualifies, which keeps self-comparison witnesses canonical.
    """
    n = a.npoints
    if n != b.npoints:
        return
    pairs = [(i, j) for i in range(n) for j in range(n)]
    for perm in itertools.permutations(range(n)):
        if all(a.specializes(i, j) == b.specializes(perm[i], perm[j])
               for i, j in pairs):
            yield perm


def _map_mask(mask: int, perm) -> int:
    out = 0
    k = 0
    while mask:
        if mask & 1:
            out |= 1 << perm[k]
        mask >>= 1
        k += 1
    return out


def _points(mask: int) -> list[int]:
    return [k for k in range(mask.bit_length()) if mask >> k & 1]


_EDGE_SLOTS = (
    # edge name -> (src pointset, src level, tgt pointset, tgt level)
    ("iota0", "sub", 0, "mid", 0),
    ("pi0", "mid", 0, "quot", 0),
    ("delta", "quot", 0, "sub", 1),
    ("iota1", "sub", 1, "mid", 1),
    ("pi1", "mid", 1, "quot", 1),
    ("partial", "quot", 1, "sub", 0),
)


def _triple_parts(key):
    u1, u2, u3 = key
    return {"sub": u2 & ~u1, "mid": u3 & ~u1, "quot": u3 & ~u2}


class _Budget(Exception):
    pass


class _Search:
    """Backtracking over per-slot (K0, K1) isomorphism candidates.

    Order, cone, and unit conditions constrain one slot at a time, so they
    are applied once while building the candidate lists; the recursion then
    only has to check commuting squares between assigned slots.
    """

    def __init__(self, a: FilteredK, b: FilteredK, sigma, unital: bool,
                 budget: int, counter: list[int]):
        self.a, self.b, self.sigma = a, b, sigma
        self.unital = unital
        self.counter = counter
        self.inconclusive = False
        self.slots = [y.pointset for y in a.lcs]
        self.index = {y: k for k, y in enumerate(self.slots)}
        self.alpha0: list[IntMatrix | None] = [None] * len(self.slots)
        self.alpha1: list[IntMatrix | None] = [None] * len(self.slots)
        self.complete = all(
            iso_search_complete(a.kmap[y].k0, budget)
            and iso_search_complete(a.kmap[y].k1, budget)
            for y in self.slots)
        # lazy memoized candidate streams: admissibility (cone, unit,
        # invertibility) is slot-local, so each matrix is vetted at most once
        # no matter how often backtracking revisits the slot
        self._seen0 = [[] for _ in self.slots]
        self._seen1 = [[] for _ in self.slots]
        self._pool0 = []
        self._pool1 = []
        for y in self.slots:
            z = _map_mask(y, sigma)
            ka, kb = a.kmap[y], b.kmap[z]
            self._pool0.append(group_isos(ka.k0, kb.k0, budget))
            self._pool1.append(group_isos(ka.k1, kb.k1, budget))
        self._cone_cache: dict[tuple[int, int, tuple[int, ...]], bool] = {}
        # commutation constraints keyed by the later-assigned endpoint
        self.constraints = [[] for _ in self.slots]
        for key, st_a in a.triples.items():
            b_key = tuple(_map_mask(u, sigma) for u in key)
            st_b = b.triples[b_key]
            parts = _triple_parts(key)
            for name, src, s_lv, tgt, t_lv in _EDGE_SLOTS:
                si, ti = self.index[parts[src]], self.index[parts[tgt]]
                m_a, m_b = getattr(st_a, name), getattr(st_b, name)
                grp = getattr(st_b, tgt).k1 if t_lv else getattr(st_b, tgt).k0
                self.constraints[max(si, ti)].append(
                    (si, s_lv, ti, t_lv, m_a, m_b, grp))

    def _in_cone(self, k: int, forward: bool, kd: KData, x) -> bool:
        key = (k, forward, tuple(x))
        hit = self._cone_cache.get(key)
        if hit is None:
            found, sure = cone_contains(kd, x)
            if not (found or sure):
                self.inconclusive = True
            hit = self._cone_cache[key] = found
        return hit

    def _admissible(self, k: int, ka: KData, kb: KData, m0: IntMatrix) -> bool:
        if self.unital and self.slots[k] == self.a.space.full:
            if kb.k0.reduce(m0.apply(ka.unit_class)) != kb.unit_class:
                return False
        for gen in ka.cone_generators:
            if not self._in_cone(k, True, kb, m0.apply(gen)):
                return False
        inv0 = group_iso_inverse(ka.k0, m0)
        if inv0 is None:
            return False
        for gen in kb.cone_generators:
            if not self._in_cone(k, False, ka, inv0.apply(gen)):
                return False
        return True

    def _cands0(self, k: int):
        yield from self._seen0[k]
        y = self.slots[k]
        z = _map_mask(y, self.sigma)
        ka, kb = self.a.kmap[y], self.b.kmap[z]
        for m0 in self._pool0[k]:
            if self._admissible(k, ka, kb, m0):
                self._seen0[k].append(m0)
                yield m0

    def _cands1(self, k: int):
        yield from self._seen1[k]
        for m1 in self._pool1[k]:
            self._seen1[k].append(m1)
            yield m1

    def _commutes(self, k: int) -> bool:
        for si, s_lv, ti, t_lv, m_a, m_b, grp in self.constraints[k]:
            a_src = (self.alpha1 if s_lv else self.alpha0)[si]
            a_tgt = (self.alpha1 if t_lv else self.alpha0)[ti]
            if a_src is None or a_tgt is None:
                continue  # other endpoint not yet assigned
            if not maps_equal(grp, a_tgt @ m_a, m_b @ a_src):
                return False
        return True

    def run(self) -> list[tuple[IntMatrix, IntMatrix]] | None:
        if self._extend(0):
            return [(self.alpha0[k], self.alpha1[k])
                    for k in range(len(self.slots))]
        return None

    def _extend(self, k: int) -> bool:
        if k == len(self.slots):
            return True
        for m0 in self._cands0(k):
            for m1 in self._cands1(k):
                self.counter[0] += 1
                if self.counter[0] > _NODE_CAP:
                    raise _Budget
                self.alpha0[k], self.alpha1[k] = m0, m1
                if self._commutes(k) and self._extend(k + 1):
                    return True
                self.alpha0[k] = self.alpha1[k] = None
        return False


def _necessary_mismatch(a: FilteredK, b: FilteredK, sigma) -> dict | None:
    for y in (lc.pointset for lc in a.lcs):
        z = _map_mask(y, sigma)
        kb = b.kmap.get(z)
        if kb is None or a.kmap[y].factor_summary() != kb.factor_summary():
            return {
                "kind": "pointwise",
                "homeomorphism": list(sigma),
                "pointset": _points(y),
                "a_factors": [list(f) for f in a.kmap[y].factor_summary()],
                "b_factors": ([list(f) for f in kb.factor_summary()]
                              if kb is not None else None),
            }
    return None


def _family_witness(a: FilteredK, sigma, family, unital: bool) -> dict:
    slots = []
    for lc, (m0, m1) in zip(a.lcs, family):
        slots.append({
            "pointset": _points(lc.pointset),
            "alpha0": [list(r) for r in m0.entries],
            "alpha1": [list(r) for r in m1.entries],
        })
    return {"kind": "family", "homeomorphism": list(sigma),
            "unital": unital, "slots": slots}


def compare(a: FilteredK, b: FilteredK, unital: bool = True,
            budget: int = DEFAULT_BUDGET) -> CompareVerdict:
    """Bounded decision: DISTINGUISHED, COMPATIBLE, or UNKNOWN.

    DISTINGUISHED requires a proof: either no homeomorphism of spectra, or a
    pointwise K-group mismatch under every homeomorphism, or an exhausted
    search whose per-slot enumerations were provably complete.  COMPATIBLE
    carries the certified family.  Everything else is UNKNOWN.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    homeos = list(poset_isomorphisms(a.space, b.space))
    if not homeos:
        return CompareVerdict(DISTINGUISHED, {
            "kind": "no_homeomorphism",
            "a_points": a.space.npoints,
            "b_points": b.space.npoints,
        })
    if not (a.k_complete and b.k_complete):
        # K layer unavailable on at least one side: certify the spectrum
        # match only, and say so in the witness
        return CompareVerdict(COMPATIBLE, {
            "kind": "family", "k_layer": "spectrum_only",
            "homeomorphism": list(homeos[0]), "unital": unital, "slots": [],
        })

    first_failure = None
    counter = [0]
    all_complete = True
    inconclusive = False
    capped = False
    for sigma in homeos:
        mismatch = _necessary_mismatch(a, b, sigma)
        if mismatch is not None:
            if first_failure is None:
                first_failure = mismatch
            continue
        search = _Search(a, b, sigma, unital, budget, counter)
        try:
            family = search.run()
        except _Budget:
            capped = True
            break
        if family is not None:
            return CompareVerdict(
                COMPATIBLE, _family_witness(a, sigma, family, unital))
        all_complete &= search.complete
        inconclusive |= search.inconclusive

    if capped or not all_complete or inconclusive:
        return CompareVerdict(UNKNOWN, {
            "kind": "budget_exhausted",
            "budget": budget,
            "inconclusive_cone": inconclusive,
        })
    if first_failure is not None:
        return CompareVerdict(DISTINGUISHED, first_failure)
    return CompareVerdict(DISTINGUISHED, {"kind": "no_family", "budget": budget})


def verify_compatible_witness(a: FilteredK, b: FilteredK, witness: dict) -> Report:
    """Replay every check behind a COMPATIBLE verdict.

    The homeomorphism is re-verified as an order isomorphism, each slot
    matrix as an invertible map matching the factor lists, cone and unit
    conditions are re-decided, and every commuting square from every triple
    is recomputed from the stored matrices.
    """
    fails = []
    checks = 0
    if witness.get("kind") != "family":
        return Report("witness", 1, ("witness is not a family",))
    sigma = tuple(witness["homeomorphism"])
    n = a.space.npoints
    checks += 1
    if sorted(sigma) != list(range(n)) or b.space.npoints != n:
        return Report("witness", checks, ("homeomorphism is not a bijection",))
    checks += 1
    if not all(a.space.specializes(i, j) == b.space.specializes(sigma[i], sigma[j])
               for i in range(n) for j in range(n)):
        return Report("witness", checks, ("map does not preserve specialization",))
    if witness.get("k_layer") == "spectrum_only":
        checks += 1
        if a.k_complete and b.k_complete:
            fails.append("spectrum_only witness for two complete invariants")
        return Report("witness", checks, tuple(fails))

    slot_sets = [sorted(_points(lc.pointset)) for lc in a.lcs]
    checks += 1
    if [s["pointset"] for s in witness["slots"]] != slot_sets:
        return Report("witness", checks, ("slots do not cover the locally closed sets",))
    alpha = {}
    for lc, slot in zip(a.lcs, witness["slots"]):
        y = lc.pointset
        z = _map_mask(y, sigma)
        ka, kb = a.kmap[y], b.kmap[z]
        m0 = IntMatrix.from_rows(slot["alpha0"], cols=ka.k0.ncoords)
        m1 = IntMatrix.from_rows(slot["alpha1"], cols=ka.k1.ncoords)
        alpha[y] = (m0, m1)
        checks += 1
        if ka.factor_summary() != kb.factor_summary():
            fails.append(f"factor mismatch at {_points(y)}")
            continue
        inv0 = group_iso_inverse(ka.k0, m0)
        inv1 = group_iso_inverse(ka.k1, m1)
        checks += 1
        if inv0 is None or inv1 is None:
            fails.append(f"slot matrix not invertible at {_points(y)}")
            continue
        for gen in ka.cone_generators:
            checks += 1
            if cone_contains(kb, m0.apply(gen)) != (True, True):
                fails.append(f"cone image escapes at {_points(y)}")
        for gen in kb.cone_generators:
            checks += 1
            if cone_contains(ka, inv0.apply(gen)) != (True, True):
                fails.append(f"reverse cone image escapes at {_points(y)}")
        if witness.get("unital") and y == a.space.full:
            checks += 1
            if kb.k0.reduce(m0.apply(ka.unit_class)) != kb.unit_class:
                fails.append("unit class is not preserved")
    for key, st_a in a.triples.items():
        b_key = tuple(_map_mask(u, sigma) for u in key)
        st_b = b.triples[b_key]
        parts = _triple_parts(key)
        for name, src, s_lv, tgt, t_lv in _EDGE_SLOTS:
            a_src = alpha[parts[src]][s_lv]
            a_tgt = alpha[parts[tgt]][t_lv]
            grp = getattr(st_b, tgt).k1 if t_lv else getattr(st_b, tgt).k0
            checks += 1
            if not maps_equal(grp, a_tgt @ getattr(st_a, name),
                              getattr(st_b, name) @ a_src):
                fails.append(f"{name} square fails at triple {key}")
    return Report("witness", checks, tuple(fails))
