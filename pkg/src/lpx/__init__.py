"""L^p-expander analysis of finite regular and biregular graphs."""
from .graph import Graph, classify, directed_edges, parse_edge_list
from .laurent import LaurentPoly
from .words import OperatorWord

__all__ = ["Graph", "LaurentPoly", "OperatorWord", "classify", "directed_edges", "parse_edge_list"]
__version__ = "0.1.0"
