"""Command line front end.

Subcommands: spectrum, lattice, k, compare, check.  Outputs are deterministic
in all three forms (text, json, dot); JSON payloads match the schemas under
docs/schemas/.  Exit codes: 0 success, 1 parse or validation failure, 2 a
cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import CapExceeded, ParseError
from .graphs import Graph, iter_bits, parse_graph_auto
from .intlinalg import kernel_basis
from .invariant import (
    DEFAULT_BUDGET,
    DEFAULT_POINT_CAP,
    assemble,
    compare,
    verify_compatible_witness,
)
from .ktheory import verify_exactness, verify_well_definedness
from .lattice import enumerate_admissible_pairs
from .spectrum import (
    s_primes,
    verify_kernel_identity,
    verify_kuratowski,
    verify_open_ideal_iso,
    verify_t0,
)

BUDGET_ENV = "FK_GRAPH_BUDGET"


def _names(g: Graph, mask: int) -> list[str]:
    return [g.vertices[i] for i in iter_bits(mask)]


def _points(mask: int) -> list[int]:
    return [k for k in range(mask.bit_length()) if mask >> k & 1]


def _load(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph_auto(fh.read())


def _covers(n: int, leq) -> list[tuple[int, int]]:
    out = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq(i, j):
                continue
            if not any(k != i and k != j and leq(i, k) and leq(k, j)
                       for k in range(n)):
                out.append((i, j))
    return out


def _emit(payload: dict, text: str, dot: str | None, cfg) -> None:
    if getattr(cfg, "dot", False):
        sys.stdout.write(dot)
    elif cfg.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(text)


# -- spectrum ---------------------------------------------------------------

def _run_spectrum(cfg) -> int:
    g = _load(cfg.graph)
    sp = s_primes(enumerate_admissible_pairs(g, vertex_cap=cfg.vertex_cap))
    if sp.npoints > cfg.point_cap:
        raise CapExceeded(f"{sp.npoints} spectrum points exceed cap {cfg.point_cap}")
    points = [{"index": k, "h": _names(g, sp.pair(k).h),
               "s": _names(g, sp.pair(k).s)} for k in range(sp.npoints)]
    spec = [[i, j] for i in range(sp.npoints) for j in range(sp.npoints)
            if i != j and sp.specializes(i, j)]
    opens = [_points(u) for u in sp.opens]
    payload = {"points": points, "specialization": spec, "opens": opens}

    lines = [f"points: {sp.npoints}"]
    for p in points:
        lines.append(f"p{p['index']}: H={{{','.join(p['h'])}}}"
                     f" S={{{','.join(p['s'])}}}")
    lines.append("specializations: "
                 + (" ".join(f"p{i}->p{j}" for i, j in spec) or "none"))
    lines.append(f"opens: {len(opens)}")
    for u in opens:
        lines.append("  {" + ",".join(f"p{k}" for k in u) + "}")
    text = "\n".join(lines) + "\n"

    cov = _covers(sp.npoints, sp.specializes)
    dot_lines = ["digraph spectrum {", "  rankdir=BT;"]
    for p in points:
        label = f"p{p['index']}: {{{','.join(p['h'])}}}"
        dot_lines.append(f'  p{p["index"]} [label="{label}"];')
    for i, j in cov:
        dot_lines.append(f"  p{i} -> p{j};")
    dot_lines.append("}")
    _emit(payload, text, "\n".join(dot_lines) + "\n", cfg)
    return 0


# -- lattice ----------------------------------------------------------------

def _run_lattice(cfg) -> int:
    g = _load(cfg.graph)
    lat = enumerate_admissible_pairs(g, vertex_cap=cfg.vertex_cap)
    pairs = [{"index": i, "h": _names(g, p.h), "s": _names(g, p.s)}
             for i, p in enumerate(lat.pairs)]
    cov = _covers(lat.size, lat.leq)
    payload = {"pairs": pairs, "covers": [[i, j] for i, j in cov],
               "bottom": lat.bottom, "top": lat.top}

    lines = [f"pairs: {lat.size}"]
    for p in pairs:
        lines.append(f"i{p['index']}: H={{{','.join(p['h'])}}}"
                     f" S={{{','.join(p['s'])}}}")
    lines.append("covers: " + (" ".join(f"i{i}<i{j}" for i, j in cov) or "none"))
    text = "\n".join(lines) + "\n"

    dot_lines = ["digraph lattice {", "  rankdir=BT;"]
    for p in pairs:
        label = f"H={{{','.join(p['h'])}}} S={{{','.join(p['s'])}}}"
        dot_lines.append(f'  i{p["index"]} [label="{label}"];')
    for i, j in cov:
        dot_lines.append(f"  i{i} -> i{j};")
    dot_lines.append("}")
    _emit(payload, text, "\n".join(dot_lines) + "\n", cfg)
    return 0


# -- k ----------------------------------------------------------------------

def _parse_pointset(arg: str, npoints: int) -> int:
    if arg == "-":
        return 0
    mask = 0
    for part in arg.split(","):
        k = int(part)
        if not 0 <= k < npoints:
            raise ParseError(f"point index {k} out of range")
        mask |= 1 << k
    return mask


def _k_entry(fk, y) -> dict:
    kd = fk.kmap[y.pointset]
    basis = kernel_basis(kd.matrix)
    return {
        "pointset": _points(y.pointset),
        "vertices": list(kd.vertices),
        "k0": {
            "invariant_factors": list(kd.k0.invariant_factors),
            "cone_generators": [list(v) for v in kd.cone_generators],
            "unit_class": list(kd.unit_class),
        },
        "k1": {
            "invariant_factors": list(kd.k1.invariant_factors),
            "kernel_basis": [list(basis.col(j)) for j in range(basis.cols)],
        },
    }


def _run_k(cfg) -> int:
    g = _load(cfg.graph)
    if not g.row_finite:
        raise ParseError("K-data needs a row-finite graph")
    fk = assemble(g, point_cap=cfg.point_cap, vertex_cap=cfg.vertex_cap)
    by_mask = {y.pointset: y for y in fk.lcs}
    if cfg.all:
        chosen = list(fk.lcs)
    else:
        mask = (fk.space.full if cfg.subquotient is None
                else _parse_pointset(cfg.subquotient, fk.space.npoints))
        if mask not in by_mask:
            raise ParseError("pointset is not locally closed")
        chosen = [by_mask[mask]]
    entries = [_k_entry(fk, y) for y in chosen]
    payload = {"subquotients": entries}

    lines = []
    for e in entries:
        pts = ",".join(f"p{k}" for k in e["pointset"])
        lines.append(f"subquotient {{{pts}}}: vertices "
                     + (",".join(e["vertices"]) or "none"))
        lines.append("  K0 factors: "
                     + (",".join(map(str, e["k0"]["invariant_factors"])) or "-"))
        for v, gen in zip(e["vertices"], e["k0"]["cone_generators"]):
            lines.append(f"  [{v}] = {tuple(gen)}")
        lines.append(f"  unit = {tuple(e['k0']['unit_class'])}")
        lines.append("  K1 factors: "
                     + (",".join(map(str, e["k1"]["invariant_factors"])) or "-"))
    text = "\n".join(lines) + "\n"
    _emit(payload, text, None, cfg)
    return 0


# -- compare ----------------------------------------------------------------

def _run_compare(cfg) -> int:
    a = assemble(_load(cfg.graph_a), point_cap=cfg.point_cap,
                 vertex_cap=cfg.vertex_cap)
    b = assemble(_load(cfg.graph_b), point_cap=cfg.point_cap,
                 vertex_cap=cfg.vertex_cap)
    unital = not cfg.no_unit
    verdict = compare(a, b, unital=unital, budget=cfg.budget)
    replay = None
    if verdict.outcome == "COMPATIBLE":
        replay = verify_compatible_witness(a, b, verdict.witness).passed
    payload = {"outcome": verdict.outcome, "unital": unital,
               "budget": cfg.budget, "witness": verdict.witness,
               "replay_passed": replay}
    lines = [f"outcome: {verdict.outcome}",
             f"witness: {verdict.witness.get('kind')}"]
    if replay is not None:
        lines.append(f"replay: {'ok' if replay else 'FAILED'}")
    text = "\n".join(lines) + "\n"
    _emit(payload, text, None, cfg)
    return 0


# -- check ------------------------------------------------------------------

def _run_check(cfg) -> int:
    g = _load(cfg.graph)
    sp = s_primes(enumerate_admissible_pairs(g, vertex_cap=cfg.vertex_cap))
    if sp.npoints > cfg.point_cap:
        raise CapExceeded(f"{sp.npoints} spectrum points exceed cap {cfg.point_cap}")
    suites = [
        ("kuratowski", verify_kuratowski(sp), False),
        ("lattice-iso", verify_open_ideal_iso(sp), False),
        ("kernel-identity", verify_kernel_identity(sp), False),
        ("t0", verify_t0(sp), False),
        ("well-definedness", verify_well_definedness(g, sp), False),
    ]
    if g.row_finite:
        suites.append(("exactness", verify_exactness(g, sp), False))
    else:
        suites.append(("exactness", None, True))
    entries = []
    ok = True
    lines = []
    for name, rep, skipped in suites:
        if skipped:
            entries.append({"name": name, "skipped": True, "passed": None,
                            "checks": 0, "failures": []})
            lines.append(f"SKIP {name} (graph not row-finite)")
            continue
        ok &= rep.passed
        entries.append({"name": name, "skipped": False, "passed": rep.passed,
                        "checks": rep.checks,
                        "failures": list(rep.failures)})
        lines.append(f"{'PASS' if rep.passed else 'FAIL'} {name}"
                     f" ({rep.checks} checks)")
    payload = {"suites": entries, "ok": ok}
    lines.append("ok" if ok else "FAILED")
    _emit(payload, "\n".join(lines) + "\n", None, cfg)
    return 0 if ok else 1


# -- plumbing ---------------------------------------------------------------

def _budget_default() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{BUDGET_ENV} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="fk-graph")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, dot=False):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--vertex-cap", dest="vertex_cap", type=int, default=16)
        p.add_argument("--point-cap", dest="point_cap", type=int,
                       default=DEFAULT_POINT_CAP)
        if dot:
            p.add_argument("--dot", action="store_true")

    p = sub.add_parser("spectrum", help="prime points, order, and opens")
    p.add_argument("graph")
    common(p, dot=True)

    p = sub.add_parser("lattice", help="admissible pair lattice with covers")
    p.add_argument("graph")
    common(p, dot=True)

    p = sub.add_parser("k", help="K-data of gauge subquotients")
    p.add_argument("graph")
    p.add_argument("--subquotient", metavar="POINTS",
                   help="comma separated point indices, '-' for empty")
    p.add_argument("--all", action="store_true",
                   help="every locally closed pointset")
    common(p)

    p = sub.add_parser("compare", help="decide invariant compatibility")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.add_argument("--no-unit", dest="no_unit", action="store_true")
    p.add_argument("--budget", type=int, default=None)
    common(p)

    p = sub.add_parser("check", help="run the property suites on one graph")
    p.add_argument("graph")
    common(p)
    return top


_RUNNERS = {
    "spectrum": _run_spectrum,
    "lattice": _run_lattice,
    "k": _run_k,
    "compare": _run_compare,
    "check": _run_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        cfg = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code else 0
    try:
        if getattr(cfg, "dot", False) and cfg.format == "json":
            raise ParseError("--dot and --format json are mutually exclusive")
        if cfg.vertex_cap < 1 or cfg.point_cap < 1:
            raise ParseError("caps must be positive")
        if cfg.command == "compare":
            if cfg.budget is None:
                cfg.budget = _budget_default()
            if cfg.budget < 1:
                raise ParseError("budget must be >= 1")
        return _RUNNERS[cfg.command](cfg)
    except CapExceeded as e:
        print(f"fk-graph: cap exceeded: {e}", file=sys.stderr)
        return 2
    except (ParseError, ValueError, OSError) as e:
        print(f"fk-graph: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
