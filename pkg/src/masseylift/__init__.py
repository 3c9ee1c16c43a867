"""Exact Massey product computations for pro-p presentations.

Massey products are decided through unipotent representations: a defining
system is a homomorphism to the upper unitriangular group with its corner
dropped, and the product vanishes when one of them lifts.
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    FoldTooLarge,
    GeneratorIndexError,
    HeightCapExceeded,
    InternalBasisError,
    MasseyError,
    NotANorm,
    NotDefined,
    NotInS2,
    WordSyntaxError,
)
from .galois_q import (
    GaloisReport,
    SplittingPoint,
    SquareClass,
    TrivialVanishing,
    cup_vanishes,
    galois_triple_check,
    hilbert_symbol,
    norm_solve,
    splitting_point,
)
from .magnus import (
    CanonicalDecomposition,
    TruncatedSeries,
    canonical_decompose,
    compose_canonical,
    magnus_image,
    zassenhaus_level,
)
from .massey import (
    Character,
    MasseyReport,
    ObstructionWitness,
    cup_trace,
    massey_check,
    obstruction_scan,
    parse_character,
    trace_of_value,
)
from .unipotent import (
    BarUnipotent,
    RepAssignment,
    UnipotentMatrix,
    enumerate_defining_reps,
    evaluate_word,
    lift_exists,
    mat_commutator,
    mat_invert,
    mat_multiply,
    separating_rep,
)
from .words import (
    FreeWord,
    PresentationSpec,
    commutator,
    load_presentation,
    parse_presentation,
    parse_word,
)

__all__ = [
    "__version__",
    "BudgetExceeded",
    "DimensionMismatch",
    "FoldTooLarge",
    "GeneratorIndexError",
    "HeightCapExceeded",
    "InternalBasisError",
    "MasseyError",
    "NotANorm",
    "NotDefined",
    "NotInS2",
    "WordSyntaxError",
    "GaloisReport",
    "SplittingPoint",
    "SquareClass",
    "TrivialVanishing",
    "cup_vanishes",
    "galois_triple_check",
    "hilbert_symbol",
    "norm_solve",
    "splitting_point",
    "CanonicalDecomposition",
    "TruncatedSeries",
    "canonical_decompose",
    "compose_canonical",
    "magnus_image",
    "zassenhaus_level",
    "Character",
    "MasseyReport",
    "ObstructionWitness",
    "cup_trace",
    "massey_check",
    "obstruction_scan",
    "parse_character",
    "trace_of_value",
    "BarUnipotent",
    "RepAssignment",
    "UnipotentMatrix",
    "enumerate_defining_reps",
    "evaluate_word",
    "lift_exists",
    "mat_commutator",
    "mat_invert",
    "mat_multiply",
    "separating_rep",
    "FreeWord",
    "PresentationSpec",
    "commutator",
    "load_presentation",
    "parse_presentation",
    "parse_word",
]
