"""Partition polynomials, root-dilogarithm phase diagrams, and zero attractors.

The package follows the pipeline of the underlying theory: exact partition
polynomials for a family of allowed part sizes, dilogarithm-based phase
functions attached to roots of unity, traced phase boundaries, polynomial
zeros at scale, and a harness comparing the zeros against the predicted
attractor set.
"""

from .errors import (
    AttractorlabError,
    BranchError,
    ConvergenceError,
    DomainError,
    EmptySelection,
    GcdError,
    NoSignChange,
    PrecisionError,
    ResourceError,
    SingularError,
    StepFailure,
    UnsupportedFamily,
)
from .precision import DEFAULT_POLICY, PrecisionPolicy
from .dilog import catalan, clausen2, dilog, re_sqrt, root_dilog
from .partitions import (
    ExponentSequence,
    PartitionPolynomial,
    evaluate,
    generate,
    generate_single,
    tail_series,
)
from .phases import (
    PhaseFunction,
    PhaseVerdict,
    asymptotic_estimate,
    candidates,
    classify,
    phase_function,
)
from .curves import (
    AttractorSet,
    CurvePolyline,
    TraceControls,
    attractor_set,
    find_beta,
    seed_on_circle,
    trace,
    triple_point,
)
from .roots import RootSet, find_roots, initial_guesses, residuals
from .harness import (
    ConvergenceReport,
    asymptotic_report,
    directed_distance_profile,
    phase_grid,
    point_to_set_distance,
)

__version__ = "0.1.0"
