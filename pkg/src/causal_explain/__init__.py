"""Complete causal explanations of independence facts, with background knowledge."""

from .chordal import count_extensions, witness_extensions
from .discovery import build_skeleton, orient_colliders, phase1
from .graph import (
    CiStatement,
    Dag,
    Pdag,
    d_separated,
    format_graph,
    markov_equivalent,
    parse_graph,
    pattern_of,
)
from .indep import DependencyModel, from_dag, parse_ci
from .orientation import (
    BackgroundKnowledge,
    NoExplanation,
    common_orientations,
    explain,
    extend_to_dag,
    incorporate_background,
    max_orient,
    verify_explanation,
)

__version__ = "0.1.0"
