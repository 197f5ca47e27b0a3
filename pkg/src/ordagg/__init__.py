"""Aggregation on ordinal scales.

Exact tools for working with aggregation functions whose inputs and
outputs carry only order: orbit patterns of tuples under order
automorphisms, lattice polynomial functions in canonical form, discrete
representatives on finite chains, and structural classifiers (with
replayable witnesses) for invariance under shared transformations and for
comparison meaningfulness on shared or independent scales.
"""

__version__ = "0.1.0"

from .chains import (
    Chain,
    ChainEmbedding,
    ChainMismatchError,
    DiscreteTable,
    GridError,
    RepresentationError,
    TablePredicates,
    canonical_embedding,
    discrete_representative,
    enumerate_embeddings,
    is_nondecreasing,
    is_smooth,
    nondecreasing_violation,
    smoothness_violation,
    table_predicates,
    tabulate_function,
)
from .classify import (
    DEFAULT_SEED,
    CMIndependentForm,
    CMSingleForm,
    Decomposition,
    GClass,
    NotInFamilyError,
    NotNondecreasingError,
    OrbitAssignment,
    OrderInvariantForm,
    Witness,
    check_cm_independent,
    check_cm_single,
    check_order_invariant,
    cm_pattern_violation,
    cm_range_form,
    decompose_nondecreasing,
    falsify_cm,
    falsify_invariance,
    generate_cm_family,
    generate_order_invariant,
    monotonicity_witness,
    oracle_generate_and_match,
    rank_pattern,
    rank_strong_pattern,
    smoothness_witness,
)
from .domain import (
    CLOSED,
    LEFT_CLOSED,
    OPEN,
    RIGHT_CLOSED,
    SHAPES,
    IntervalSpec,
    PLBijection,
    Point,
    PointError,
    make_interval,
    random_pl_bijection,
)
from .lattice import (
    ConstantPolynomialError,
    LatticePolynomial,
    SetFunction,
    canonicalize,
    constant_bottom,
    constant_top,
    enumerate_cn,
    median,
    mode,
    order_statistic,
    projection,
)
from .orbits import (
    ENUMERATION_CAP,
    Level,
    Orbit,
    SizeCapError,
    StrongOrbit,
    enumerate_orbits,
    enumerate_strong_orbits,
    level_of,
    orbit_leq,
    pattern_of,
    strong_orbit_of,
    strong_pattern_of,
)
