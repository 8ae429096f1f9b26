"""Compact polyhedra whose vertex links are finite projective planes."""

__version__ = "0.1.0"

from .gf import FieldElement, FieldTower, make_tower, minimal_poly, tower_for_order, trace, frobenius
from .plane import Plane, build_pg2, dualize, incidence_graph, validate_plane, line_through, meet
from .pointline import (
    PointLineBijection,
    induced_permutation,
    search_bijection,
    trace_bijection,
    verify_properties,
    verify_trace_uniqueness,
)
from .triples import TripleSet, complete_pair, enumerate_triples, verify_crucial_lemma
from .presentation import (
    Presentation,
    build_euclidean,
    build_hyperbolic,
    sign,
    validate_word,
    verify_presentation,
)
from .complex import analyze, assemble, check_link_isomorphism, classify_curvature, link, stats
from .graphs import Graph, check_generalized_m_gon
