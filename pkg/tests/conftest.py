from __future__ import annotations

from pathlib import Path

import pytest

from fkgraph.graphs import Graph, parse_graph

GRAPH_DIR = Path(__file__).resolve().parent.parent / "graphs"


def load_corpus() -> dict[str, Graph]:
    out = {}
    for path in sorted(GRAPH_DIR.glob("*.graph")):
        out[path.stem] = parse_graph(path.read_text())
    return out


CORPUS = load_corpus()
ROW_FINITE = {name: g for name, g in CORPUS.items() if g.row_finite}


@pytest.fixture(scope="session")
def corpus() -> dict[str, Graph]:
    return CORPUS


@pytest.fixture(scope="session")
def row_finite_corpus() -> dict[str, Graph]:
    return ROW_FINITE


@pytest.fixture(scope="session")
def graph_dir() -> Path:
    return GRAPH_DIR
