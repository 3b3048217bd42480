"""Numerical laboratory for gap-series identities on holomorphic Cantor families.

Evaluates the complexified boundary-length identity for rank-2 Schottky
groups and the signed gap identity for quadratic Julia sets, classifies
absolute convergence through thermodynamic-formalism dimension estimators,
tracks per-term monodromy along parameter loops, and traces the
dimension-one locus outside the Mandelbrot set.
"""

from .errors import (BasmajianError, BranchAmbiguity, DegenerateConfiguration,
                     Diverging, LostTrack, NoConvergence, NonLoxodromic,
                     NoSignChange, ParabolicOrElliptic)
from .holoifs import (ContinuationResult, QuadraticIFS, SimilarityIFS,
                      continue_in_c, gap_image, gap_level_sums,
                      julia_fixed_points, julia_identity, similarity_identity,
                      swapped_identity)
from .moebius import (INFINITY, FixedPair, MoebiusMap, complex_length,
                      cross_ratio, fixed_points)
from .report import SeriesReport
from .schottky import (LoopSpec, MarkedRep, TrackedTerm, continue_along,
                       evaluate_identity, preset, preset_loop, term)
from .symbolic import (Alphabet, Automaton, FULL_SHIFT_2, LanguageSpec,
                       RANK2_REDUCED_CODING, ShiftCoding, TORUS_SPEC,
                       compile_spec, enumerate_words, shift_words, swap_labels,
                       words_of_length)
from .thermo import (DimEstimate, GapSequence, PressureCurve, bowen_dimension,
                     cutout_bounds, level_lambda1, periodic_points, pressure,
                     pressure_curve)

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "Automaton", "BasmajianError", "BranchAmbiguity",
    "ContinuationResult", "DegenerateConfiguration", "DimEstimate",
    "Diverging", "FULL_SHIFT_2", "FixedPair", "GapSequence", "INFINITY",
    "LanguageSpec", "LoopSpec", "LostTrack", "MarkedRep", "MoebiusMap",
    "NoConvergence", "NonLoxodromic", "NoSignChange", "ParabolicOrElliptic",
    "PressureCurve", "QuadraticIFS", "RANK2_REDUCED_CODING", "SeriesReport",
    "ShiftCoding", "SimilarityIFS", "TORUS_SPEC", "TrackedTerm",
    "bowen_dimension", "complex_length", "compile_spec", "continue_along",
    "continue_in_c", "cross_ratio", "cutout_bounds", "enumerate_words",
    "evaluate_identity", "fixed_points", "gap_image", "gap_level_sums",
    "julia_fixed_points", "julia_identity", "level_lambda1",
    "periodic_points", "preset", "preset_loop", "pressure", "pressure_curve",
    "shift_words", "similarity_identity", "swap_labels", "swapped_identity",
    "term", "words_of_length",
]
