"""Group-labelled star expressions over prefix codes: syntax, semantics and synthesis."""
from .ast import (
    EMPTY,
    EPS,
    Concat,
    Empty,
    ExprError,
    Letter,
    Omega,
    SdExpr,
    Star,
    StarCoset,
    Union,
    concat,
    letter,
    omega,
    star,
    star_coset,
    union,
)
from .compile import Compiler, compile_finite, compile_finite_part, compile_omega, validate
from .sexp import format_expr, parse_expr
from .synth import (
    NotRecognizable,
    OmegaNormalForm,
    SynthesisError,
    coset_expr,
    lift_group,
    sigma_preimage,
    synthesize_all,
    synthesize_finite,
    synthesize_omega,
)
