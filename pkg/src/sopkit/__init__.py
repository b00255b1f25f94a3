"""Exact Sum-Over-Paths terms: rewriting, ZH translation, dyadic fragments
and circuit verification."""

from .cyclo import CycloNumber, SopMatrix
from .errors import *  # noqa: F401,F403
from .polyalg import BoolPoly, IntPoly, PhasePoly, hat_lift
from .rewrite import (
    RewriteStep, Strategy, apply_rule, is_identity_form, normal_form, reduce, replay,
)
from .term import (
    SopTerm, alpha_equal, canonicalize, compose, dagger, fragment_of, hadamard, identity,
    interp, interp_equal, make_term, tensor, toffoli,
)

__version__ = "0.1.0"
