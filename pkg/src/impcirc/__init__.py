"""Graded string diagrams for exact probabilistic circuits.

The package stacks up in layers: `grading` (injections between grade
objects), `stoch` (exact sub-stochastic matrices), `terms` (the graded
diagram syntax), `semantics` (evaluation and equality), `normalform`
(knight-first factorization), `lang` (the surface language) and `laws`
(randomized checks of the algebra).
"""

from .errors import (
    EvalLimitError,
    GradingError,
    ImpCircError,
    LangError,
    NotComparable,
    ParseError,
    TermError,
    TypingError,
    WiringError,
)
from .grading import Injection, embed, enumerate_injections, symmetry
from .semantics import GradedMorphism, equal, equal_up_to_regrading, evaluate
from .stoch import StochMatrix, generator_matrix, kron, matmul, swap_matrix
from .terms import (
    Gen,
    GradedTerm,
    Id0,
    Id1,
    Par,
    Profile,
    Regrade,
    Seq,
    Swap,
    format_term,
    infer_profile,
    parse_term,
    validate,
)
from .normalform import Factorization, factorize, injection_circuit, reassemble
from .lang import RunResult, compile_program, parse_program, run, typecheck

__version__ = "0.1.0"

__all__ = [
    "EvalLimitError",
    "Factorization",
    "Gen",
    "GradedMorphism",
    "GradedTerm",
    "GradingError",
    "Id0",
    "Id1",
    "ImpCircError",
    "Injection",
    "LangError",
    "NotComparable",
    "Par",
    "ParseError",
    "Profile",
    "Regrade",
    "RunResult",
    "Seq",
    "StochMatrix",
    "Swap",
    "TermError",
    "TypingError",
    "WiringError",
    "compile_program",
    "embed",
    "enumerate_injections",
    "equal",
    "equal_up_to_regrading",
    "evaluate",
    "factorize",
    "format_term",
    "generator_matrix",
    "infer_profile",
    "injection_circuit",
    "kron",
    "matmul",
    "parse_program",
    "parse_term",
    "reassemble",
    "run",
    "swap_matrix",
    "symmetry",
    "typecheck",
    "validate",
]
