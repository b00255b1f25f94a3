"""ZH diagrams and their translations to and from SOP terms."""

from .diagram import (
    And, Cap, Compose, Copy, Cup, Dagger, Diagram, ExactPhase, ExactReal, Float, H, HParam,
    Id, MINUS_ONE, Not, ONE, Perm, Scalar, Swap, Tensor, Xor, Z, ZERO, INV_SQRT2, HALF,
    compose, dagger, diagram_from_json, diagram_to_json, expand_macros, expand_node,
    param, tensor, to_dot, zh_interp, zh_interp_float, zh_th_membership,
)
from .translate import h_decompose, h_gadget, phase_param, sop_to_zh, zh_network, zh_to_sop
from .axioms import Axiom, axiom_family, axioms
