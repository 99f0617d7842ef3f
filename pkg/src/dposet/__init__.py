"""Finite, executable checks on the partial orders of digraphs under induced
substructure and embeddability."""
from .catalog import Catalog, build_catalog, enumerate_level, export, get_catalog, load_cache, save_cache
from .digraph import (
    Digraph, canonical_form, canonical_labeling, complement, disjoint_union, induced, is_IO,
    loop_exchange, loop_free_degree, loop_part, one_vertex_deletions, read_dgf, reverse,
    substructure_types, unary_transform, wccs,
)
from .errors import DposetError
from .families import (
    AttachSpec, SupportSpec, arrow_link, attach, circles, default_support_spec, edge_support,
    family, l_arrow, male, male_pair, named,
)
from .logic import Universe, defined_set, evaluate, parse, to_text
from .matching import is_embeddable, is_isomorphic, is_substructure

__version__ = "0.1.0"

__all__ = [
    "AttachSpec", "Catalog", "Digraph", "DposetError", "SupportSpec", "Universe", "arrow_link",
    "attach", "build_catalog", "canonical_form", "canonical_labeling", "circles", "complement",
    "default_support_spec", "defined_set", "disjoint_union", "edge_support", "enumerate_level",
    "evaluate", "export", "family", "get_catalog", "induced", "is_IO", "is_embeddable",
    "is_isomorphic", "is_substructure", "l_arrow", "load_cache", "loop_exchange",
    "loop_free_degree", "loop_part", "male", "male_pair", "named", "one_vertex_deletions",
    "parse", "read_dgf", "reverse", "save_cache", "substructure_types", "to_text",
    "unary_transform", "wccs",
]
