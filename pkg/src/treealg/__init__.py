"""Free algebra of complete binary trees over a finite alphabet.

Trees, their shape/leaf-word decomposition, leaf graftings and word
substitutions, bounded congruence closure, congruence-preservation
evidence, and polynomial synthesis from generator values.
"""

from .congruence import (
    Relatedness,
    TreePartition,
    bounded_closure,
    principal_related,
    related,
)
from .errors import (
    AlphabetTooSmall,
    EmptyWordImage,
    EvaluationFailure,
    HypothesesViolated,
    LengthMismatch,
    MalformedSkeleton,
    MalformedTable,
    MalformedTree,
    NotCP,
    PairOutOfUniverse,
    TreeAlgebraError,
    UniverseTooLarge,
    UnknownLetter,
)
from .morphisms import (
    Grafting,
    Projection,
    SHAPE_PROJECTION,
    WordSubstitution,
    commute_check,
    graft,
    is_idempotent,
    kernel_related,
    letter_projection,
    project,
    recolor,
    substitute,
)
from .polynomials import (
    CandidateFunction,
    EvidenceReport,
    EvidenceTest,
    HypothesisCheck,
    check_hypotheses,
    compile_poly,
    constant_function,
    cp_evidence,
    cp_to_polynomial,
    eval_poly,
    function_from_spec,
    identity_function,
    iter_polynomials,
    mirror_function,
    poly_function,
    recolor_function,
    synthesize,
    table_function,
    unused_letter_count,
)
from .trees import (
    Alphabet,
    DEFAULT_ALPHABET,
    DEFAULT_UNIVERSE_CAP,
    Tree,
    VARIABLE,
    catalan,
    encode,
    enumerate_universe,
    foliage,
    is_leaf,
    is_skeleton,
    iter_universe,
    leaf_count,
    mirror,
    parse_tree,
    random_tree,
    rebuild,
    skeleton,
    star,
    universe_size,
)
from .words import (
    WordHypothesisCheck,
    check_word_hypotheses,
    eval_word_poly,
    synthesize_word,
)

__version__ = "0.1.0"
