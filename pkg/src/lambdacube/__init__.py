"""Typing, reduction, marked terms and eta-long normal forms for the lambda cube."""

from .errors import (
    CubeError, ErrorKind, FuelExhausted, NotAType, PreconditionError, ShiftUnderflow,
    TypingError, UnknownSystem,
)
from .terms import (
    PROP, TYPE, Abs, App, Context, Decl, LabeledTerm, Prod, Sort, Term, Var, arrow,
    free_indices, shift, size, strict_subterms, subst,
)
from .reduction import (
    DEFAULT_FUEL, Fuel, ReductionKind, beta_normalize, convertible, is_normal, normalize,
    reducts, step, whnf,
)
from .typecheck import ALL_SYSTEMS, CC, SystemSpec, check, infer, named_system, wf_context
from .marked import (
    MAbs, MApp, MarkedContext, MDecl, MProd, MVar, contents, contents_context,
    is_marked_normal, marked_check, marked_infer, marked_normalize, marked_reducts,
)
from .translate import circ_context, encode_circ, lift_translate, star_context, star_translate
from .etalong import (
    Descent, Measurer, descend, eta_long, eta_long_marked, measure_marked, measure_unmarked,
    plus_translate, predecessors, predecessors_prime,
)
from .surface import (
    ParseError, SourceSpan, parse_context, parse_marked, parse_marked_context, parse_term,
    print_context, print_marked, print_marked_context, print_term,
)

__version__ = "0.1.0"
