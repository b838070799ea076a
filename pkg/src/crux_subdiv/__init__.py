"""Large clique subdivisions via sublinear robust expanders, with verified certificates."""

from ._accel import backend_name
from .graph import Graph, GraphError, ParseError, Subgraph, average_degree, parse_graph, serialize_graph
from .generators import generate

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphError",
    "ParseError",
    "Subgraph",
    "average_degree",
    "backend_name",
    "generate",
    "parse_graph",
    "serialize_graph",
]
