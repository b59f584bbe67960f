"""Cyclic causal structures with interventions: induced functions, fixed
points, and exhaustive checks that the grandfather and information
antinomies occur together."""

from .antinomy import (
    DEFAULT_CAP,
    Classification,
    FixedPointSet,
    Verdict,
    VerificationReport,
    classify,
    enumerate_interventions,
    fixed_points,
    verify_corollary4,
    verify_equivalence,
    verify_lemma3,
    verify_theorem1,
    verify_transitivity,
    witness_lemma1,
    witness_search,
)
from .census import CensusReport, SpaceSpec, enumerate_functions, run_census
from .core import (
    CausalStructure,
    Graph,
    MechanismTable,
    ValidationReport,
    cut_graph,
    decode_tuple,
    encode_tuple,
    topological_order,
    validate,
)
from .dsl import ParseError, StructureValidationError, load, parse, parse_omega, parse_structure, serialize
from .induction import (
    InducedFunction,
    Intervention,
    dependence_set,
    find_nonconstancy,
    induce,
    is_constant_component,
    reduce,
)

__version__ = "0.1.0"
