#!/usr/bin/env python3
"""
Tests for edge-list reading and writing.

Usage:
    pytest test_graph_io.py
"""

import logging

import pytest

from src.core import EdgeListFormatError
from src.graph_core import BipartiteGraph, build_graph
from src.graph_io import format_edge_list, load_edge_list, parse_edge_list, write_edge_list

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('test_graph_io')


def test_parse_with_comments_and_blank_lines():
    text = "# a path\n3 2\n\n0 1  # first\n2   1\n"
    G = parse_edge_list(text)
    assert G.n == 3
    assert G.edges == ((0, 1), (1, 2))


def test_canonical_text_is_stable():
    text = "4 3\n0 1\n1 2\n0 3\n"
    canonical = format_edge_list(parse_edge_list(text))
    assert canonical == "4 3\n0 1\n0 3\n1 2\n"
    assert format_edge_list(parse_edge_list(canonical)) == canonical


def test_bipartite_header_and_local_columns():
    B = parse_edge_list("2 3 2\n0 2\n1 0\n", bipartite=True)
    assert isinstance(B, BipartiteGraph)
    assert (B.n1, B.n2) == (2, 3)
    assert B.local_edges() == [(0, 2), (1, 0)]
    assert format_edge_list(B) == "2 3 2\n0 2\n1 0\n"


@pytest.mark.parametrize("text", [
    "",
    "# only a comment\n",
    "3\n0 1\n",
    "3 2\n0 1\n",
    "3 1\n0 1 2\n",
    "3 1\nzero one\n",
    "3 2\n0 1\n0 1\n",
    "3 2\n0 1\n1 0\n",
])
def test_malformed_input(text):
    with pytest.raises(EdgeListFormatError):
        parse_edge_list(text)


def test_repeated_edge_lines():
    with pytest.raises(EdgeListFormatError, match="repeats line 2"):
        parse_edge_list("2 2 2\n0 1\n0 1\n", bipartite=True)
    # (0, 1) and (1, 0) are different edges across the two sides
    B = parse_edge_list("2 2 2\n0 1\n1 0\n", bipartite=True)
    assert B.num_edges == 2


def test_write_then_load(tmp_path):
    G = build_graph(5, [(3, 4), (0, 2), (1, 2)])
    path = write_edge_list(G, tmp_path / "nested" / "g.txt")
    assert load_edge_list(path).edges == G.edges

    again = tmp_path / "again.txt"
    write_edge_list(load_edge_list(path), again)
    assert again.read_bytes() == path.read_bytes()


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_edge_list(tmp_path / "absent.txt")
