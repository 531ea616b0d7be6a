"""Finite directed graphs with edge multiplicities, possibly infinite.

A graph is a vertex tuple (declaration order is the canonical order used by
every bitmask in the package) plus a multiplicity matrix; `mult[i][j]` counts
edges i -> j and may be the INF sentinel for an infinite edge bundle.

Vertex subsets are plain ints used as bitsets over the vertex order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import ParseError


class _InfinityType:
    """Sentinel for an infinite edge multiplicity; a singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"


INF = _InfinityType()

Mult = int | _InfinityType


def mult_add(a, b):
    """Sum of multiplicities; anything plus INF is INF."""
    if a is INF or b is INF:
        return INF
    return a + b


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    mult: tuple[tuple[Mult, ...], ...]

    def __post_init__(self):
        n = len(self.vertices)
        if len(self.mult) != n or any(len(r) != n for r in self.mult):
            raise ValueError("multiplicity matrix shape mismatch")
        for row in self.mult:
            for m in row:
                if m is not INF and (not isinstance(m, int) or m < 0):
                    raise ValueError(f"bad multiplicity {m!r}")

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.vertices)}

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown vertex {name!r}") from None

    def names(self, mask: int) -> tuple[str, ...]:
        return tuple(self.vertices[i] for i in iter_bits(mask))

    def vertex_mask(self, names: Iterable[str]) -> int:
        return mask_of(self.index(v) for v in names)

    def out_total(self, i: int):
        """Total out-multiplicity of vertex i."""
        t = 0
        for m in self.mult[i]:
            t = mult_add(t, m)
        return t

    def is_regular(self, i: int) -> bool:
        """Emits at least one and finitely many edges."""
        t = self.out_total(i)
        return t is not INF and t > 0

    def is_infinite_emitter(self, i: int) -> bool:
        return self.out_total(i) is INF

    @cached_property
    def successors(self) -> tuple[int, ...]:
        """successors[i] = bitmask of j with at least one edge i -> j."""
        out = []
        for i in range(self.n):
            m = 0
            for j, k in enumerate(self.mult[i]):
                if k is INF or k > 0:
                    m |= 1 << j
            out.append(m)
        return tuple(out)

    @cached_property
    def row_finite(self) -> bool:
        """No INF multiplicities anywhere."""
        return all(m is not INF for row in self.mult for m in row)

    @cached_property
    def _reach(self) -> tuple[int, ...]:
        # reach[i] = bitmask of vertices reachable from i by a path of length >= 0
        reach = [(1 << i) | self.successors[i] for i in range(self.n)]
        changed = True
        while changed:
            changed = False
            for i in range(self.n):
                acc = reach[i]
                for j in iter_bits(acc):
                    acc |= reach[j]
                if acc != reach[i]:
                    reach[i] = acc
                    changed = True
        return tuple(reach)


def graph_from_edges(vertices: Iterable[str], edges: Iterable[tuple]) -> Graph:
    """Build a graph from (src, dst) or (src, dst, mult) triples; edges accumulate."""
    verts = tuple(vertices)
    idx = {v: i for i, v in enumerate(verts)}
    if len(idx) != len(verts):
        raise ValueError("duplicate vertex name")
    n = len(verts)
    mat = [[0] * n for _ in range(n)]
    for e in edges:
        src, dst = e[0], e[1]
        k = e[2] if len(e) > 2 else 1
        i, j = idx[src], idx[dst]
        mat[i][j] = mult_add(mat[i][j], k)
    return Graph(verts, tuple(tuple(r) for r in mat))


def parse_graph(text: str) -> Graph:
    """Parse the line format: `vertex NAME` / `edge SRC DST [K|inf]`, # comments."""
    vertices: list[str] = []
    seen: dict[str, int] = {}
    edges: list[tuple[int, int, object]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kw = tokens[0]
        if kw == "vertex":
            if len(tokens) != 2:
                raise ParseError("expected `vertex NAME`", lineno)
            name = tokens[1]
            if name in seen:
                raise ParseError(f"duplicate vertex {name!r}", lineno)
            seen[name] = len(vertices)
            vertices.append(name)
        elif kw == "edge":
            if len(tokens) not in (3, 4):
                raise ParseError("expected `edge SRC DST [COUNT|inf]`", lineno)
            src, dst = tokens[1], tokens[2]
            for v in (src, dst):
                if v not in seen:
                    raise ParseError(f"unknown vertex {v!r}", lineno)
            if len(tokens) == 4:
                if tokens[3] == "inf":
                    k = INF
                else:
                    try:
                        k = int(tokens[3])
                    except ValueError:
                        raise ParseError(f"bad multiplicity {tokens[3]!r}", lineno) from None
                    if k < 0:
                        raise ParseError(f"bad multiplicity {tokens[3]!r}", lineno)
            else:
                k = 1
            edges.append((seen[src], seen[dst], k))
        else:
            raise ParseError(f"unknown directive {kw!r}", lineno)
    n = len(vertices)
    mat = [[0] * n for _ in range(n)]
    for i, j, k in edges:
        mat[i][j] = mult_add(mat[i][j], k)
    return Graph(tuple(vertices), tuple(tuple(r) for r in mat))


def parse_graph_json(text: str) -> Graph:
    """Parse the JSON mirror: {"vertices": [...], "edges": [{src, dst, mult}]}."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"bad JSON: {e}", e.lineno) from None
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise ParseError("expected an object with a `vertices` list")
    verts = obj["vertices"]
    if not isinstance(verts, list) or any(not isinstance(v, str) for v in verts):
        raise ParseError("`vertices` must be a list of strings")
    if len(set(verts)) != len(verts):
        raise ParseError("duplicate vertex name")
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    mat = [[0] * n for _ in range(n)]
    for e in obj.get("edges", []):
        if not isinstance(e, dict) or not {"src", "dst"} <= set(e):
            raise ParseError("each edge needs `src` and `dst`")
        for v in (e["src"], e["dst"]):
            if v not in idx:
                raise ParseError(f"unknown vertex {v!r}")
        m = e.get("mult", 1)
        if m == "inf":
            k = INF
        elif isinstance(m, int) and not isinstance(m, bool) and m >= 0:
            k = m
        else:
            raise ParseError(f"bad multiplicity {m!r}")
        i, j = idx[e["src"]], idx[e["dst"]]
        mat[i][j] = mult_add(mat[i][j], k)
    return Graph(tuple(verts), tuple(tuple(r) for r in mat))


def parse_graph_auto(text: str) -> Graph:
    """Dispatch on the first non-blank byte: `{` means the JSON mirror."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_graph_json(text)
    return parse_graph(text)


def graph_to_json_dict(g: Graph) -> dict:
    edges = []
    for i in range(g.n):
        for j in range(g.n):
            m = g.mult[i][j]
            if m is INF:
                edges.append({"src": g.vertices[i], "dst": g.vertices[j], "mult": "inf"})
            elif m > 0:
                edges.append({"src": g.vertices[i], "dst": g.vertices[j], "mult": m})
    return {"vertices": list(g.vertices), "edges": edges}


# ------------------------------------------------------------ reachability


def reaches(g: Graph, v: str, w: str) -> bool:
    """True iff there is a path (possibly empty) from v to w."""
    return bool(g._reach[g.index(v)] >> g.index(w) & 1)


def reachable_set(g: Graph, i: int) -> int:
    return g._reach[i]


# ------------------------------------------- hereditary / saturated sets


def is_hereditary(g: Graph, h: int) -> bool:
    """Closed under moving forward along edges."""
    for i in iter_bits(h):
        if g.successors[i] & ~h:
            return False
    return True


def is_saturated(g: Graph, h: int) -> bool:
    """Every regular vertex feeding only into h lies in h."""
    for i in range(g.n):
        if h >> i & 1:
            continue
        if g.is_regular(i) and not (g.successors[i] & ~h):
            return False
    return True


def saturated_hereditary_closure(g: Graph, x: int) -> int:
    """Smallest hereditary and saturated superset of x."""
    h = x
    changed = True
    while changed:
        changed = False
        for i in iter_bits(h):
            add = g.successors[i] & ~h
            if add:
                h |= add
                changed = True
        for i in range(g.n):
            if not (h >> i & 1) and g.is_regular(i) and not (g.successors[i] & ~h):
                h |= 1 << i
                changed = True
    return h


def breaking_vertices(g: Graph, h: int) -> int:
    """Infinite emitters outside h with finitely many, but some, edges avoiding h."""
    out = 0
    for i in range(g.n):
        if h >> i & 1 or not g.is_infinite_emitter(i):
            continue
        into_rest = 0
        for j in range(g.n):
            if not (h >> j & 1):
                into_rest = mult_add(into_rest, g.mult[i][j])
        if into_rest is not INF and into_rest > 0:
            out |= 1 << i
    return out


# ---------------------------------------------------------- condition (K)


def _sat2(x) -> int:
    if x is INF:
        return 2
    return min(2, x)


def return_path_count(g: Graph, base: int) -> int:
    """Number of return paths at `base` (no intermediate visit), saturated at 2.

    An INF multiplicity on a return path counts as two parallel edges, which
    already saturates the count.  DFS colors detect a cycle avoiding the base
    inside the can-return region, which means infinitely many return paths.
    """
    can_return = mask_of(i for i in range(g.n) if i != base and (g._reach[i] >> base & 1))
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * g.n
    memo = [0] * g.n

    def visit(w: int) -> int:
        # saturated count of paths w -> base avoiding base internally
        if color[w] == GRAY:
            return -1  # cycle marker, caller saturates
        if color[w] == BLACK:
            return memo[w]
        color[w] = GRAY
        count = _sat2(g.mult[w][base])
        for u in iter_bits(g.successors[w] & can_return):
            sub = visit(u)
            if sub < 0:
                count = 2
                break
            count = min(2, count + _sat2(g.mult[w][u]) * sub)
            if count >= 2:
                break
        color[w] = BLACK
        memo[w] = count
        return count

    total = _sat2(g.mult[base][base])
    for w in iter_bits(g.successors[base] & can_return):
        if total >= 2:
            break
        sub = visit(w)
        total = 2 if sub < 0 else min(2, total + _sat2(g.mult[base][w]) * sub)
    return total


def satisfies_condition_K(g: Graph) -> bool:
    """No vertex has exactly one return path."""
    return all(return_path_count(g, i) != 1 for i in range(g.n))


# --------------------------------------------------- quotients and pieces


def quotient(g: Graph, h: int, s: int = 0) -> Graph:
    """Quotient by the ideal at (h, {}): delete h, keep everything else.

    Only for row-finite graphs, where every admissible pair has empty S.
    """
    if not g.row_finite:
        raise ValueError("quotient requires a row-finite graph")
    if s:
        raise ValueError("quotient requires an empty breaking-vertex set")
    if not is_hereditary(g, h) or not is_saturated(g, h):
        raise ValueError("h must be hereditary and saturated")
    keep = [i for i in range(g.n) if not (h >> i & 1)]
    return Graph(
        tuple(g.vertices[i] for i in keep),
        tuple(tuple(g.mult[i][j] for j in keep) for i in keep),
    )


def subquotient_graph(g: Graph, d: int, v_ideal: int) -> Graph:
    """Restriction of g to the vertex set d, where d = H \\ v_ideal for some
    hereditary saturated H containing the hereditary saturated v_ideal."""
    if not g.row_finite:
        raise ValueError("subquotients require a row-finite graph")
    if d & v_ideal:
        raise ValueError("d and v_ideal must be disjoint")
    if not is_hereditary(g, v_ideal) or not is_saturated(g, v_ideal):
        raise ValueError("v_ideal must be hereditary and saturated")
    hu = d | v_ideal
    if not is_hereditary(g, hu) or not is_saturated(g, hu):
        raise ValueError("d | v_ideal must be hereditary and saturated")
    keep = [i for i in range(g.n) if d >> i & 1]
    return Graph(
        tuple(g.vertices[i] for i in keep),
        tuple(tuple(g.mult[i][j] for j in keep) for i in keep),
    )
