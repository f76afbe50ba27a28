"""
Edge-list loading and writing for the sparse-graph rank toolkit

Text format:
- header line ``n m`` (graph) or ``n1 n2 m`` (bipartite)
- then ``m`` lines ``u v``, 0-indexed, whitespace separated
- ``#`` starts a comment anywhere on a line

For bipartite files ``u`` indexes V1 and ``v`` indexes V2 locally.
Writing is canonical (sorted edges, single spaces), so a written file
re-read and re-written is byte-identical.
"""

import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

from .core import BaseProcessor, EdgeListFormatError
from .graph_core import BipartiteGraph, Graph, build_bipartite_graph, build_graph


def _strip_comments(text: str) -> List[List[str]]:
    rows = []
    for line in text.splitlines():
        content = line.split('#', 1)[0].strip()
        if content:
            rows.append(content.split())
    return rows


def _parse_int(token: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise EdgeListFormatError(f"line {line_no}: expected an integer, got {token!r}")


def parse_edge_list(text: str, bipartite: bool = False) -> Union[Graph, BipartiteGraph]:
    """
    Parse edge-list text into a Graph or BipartiteGraph.

    Raises
    ------
    EdgeListFormatError
        Malformed header, wrong field counts, a repeated edge or an edge
        count that does not match the header
    """
    rows = _strip_comments(text)
    if not rows:
        raise EdgeListFormatError("empty edge list")

    header = [_parse_int(tok, 1) for tok in rows[0]]
    expected_header = 3 if bipartite else 2
    if len(header) != expected_header:
        raise EdgeListFormatError(
            f"header must have {expected_header} fields, got {len(header)}"
        )

    edges: List[Tuple[int, int]] = []
    seen: Dict[Tuple[int, int], int] = {}
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise EdgeListFormatError(f"line {line_no}: expected 'u v', got {' '.join(row)!r}")
        u, v = _parse_int(row[0], line_no), _parse_int(row[1], line_no)
        # bipartite pairs are ordered (V1, V2); plain pairs are unordered
        key = (u, v) if bipartite else (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListFormatError(f"line {line_no}: edge {u} {v} repeats line {seen[key]}")
        seen[key] = line_no
        edges.append((u, v))

    m = header[-1]
    if m != len(edges):
        raise EdgeListFormatError(f"header declares {m} edges but {len(edges)} were given")

    if bipartite:
        return build_bipartite_graph(header[0], header[1], edges)
    return build_graph(header[0], edges)


def format_edge_list(G: Union[Graph, BipartiteGraph]) -> str:
    """Canonical edge-list text for a graph"""
    if isinstance(G, BipartiteGraph):
        lines = [f"{G.n1} {G.n2} {G.num_edges}"]
        lines.extend(f"{u} {w}" for u, w in G.local_edges())
    else:
        lines = [f"{G.n} {G.num_edges}"]
        lines.extend(f"{u} {v}" for u, v in G.edges)
    return "\n".join(lines) + "\n"


class EdgeListLoader(BaseProcessor):
    """
    Loads edge-list files into graphs.
    """

    def process(self, data: Union[str, Path]) -> Union[Graph, BipartiteGraph]:
        """
        Load one edge-list file.

        Parameters
        ----------
        data : str or Path
            Path of the edge-list file

        Returns
        -------
        Graph or BipartiteGraph
            Bipartite when the loader was created with ``bipartite=True``
        """
        path = Path(data)
        if not path.exists():
            raise FileNotFoundError(f"Edge list not found: {path}")

        bipartite = self.params.get('bipartite', False)
        graph = parse_edge_list(path.read_text(encoding='utf-8'), bipartite=bipartite)
        self.logger.debug(f"Loaded {graph!r} from {path}")
        return graph


def load_edge_list(path: Union[str, Path], bipartite: bool = False) -> Union[Graph, BipartiteGraph]:
    """
    Convenience function to load an edge-list file.
    """
    return EdgeListLoader(bipartite=bipartite).process(path)


def write_edge_list(G: Union[Graph, BipartiteGraph], path: Union[str, Path]) -> Path:
    """Write ``G`` in canonical edge-list format, creating parent directories"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_edge_list(G), encoding='utf-8')
    logging.getLogger('ksrank').debug(f"Wrote {G!r} to {path}")
    return path
