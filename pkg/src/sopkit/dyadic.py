"""Moving terms between the dyadic fragments SOP[1/2^n].

``ascend(t, k)`` encodes a level k+1 term (even scalar exponent) as a level
k term acting on one extra wire, ``descend`` undoes it, and ``psi_k`` is the
matching map on matrices: an entry ``a + w b`` with ``w = exp(i pi/2^k)``
becomes the block ``a I + b X_k``.  The extra wire is always the last one,
so it is the least significant bit of the row and column indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclo import CycloNumber, SopMatrix
from .errors import ArityTooSmall, NotPrimedFragment, WrongLevel, WrongRing
from .polyalg import BoolPoly, PhasePoly, mono_key
from .rewrite import Strategy, reduce
from .term import SopTerm, compose, compose_all, identity, make_term, tensor

SQRT2_GADGET = make_term(-1, [0], {frozenset(): Fraction(1, 8), frozenset([0]): Fraction(3, 4)})

_GLUE = Strategy(rules=("HH",), ketbra=False)


@dataclass(frozen=True)
class MonomialFactor:
    kind: str  # "out", "diag" or "in"
    term: SopTerm
    mono: frozenset = frozenset()
    coeff: Fraction = Fraction(0)


def monomial_decompose(t: SopTerm) -> list[MonomialFactor]:
    """Factors ``out, diag_r, ..., diag_1, in`` whose composite reduces to t.

    The wires between factors carry the variables of ``t`` in order.  Phase
    monomials appear in canonical order, the first one applied first.
    """
    vs = list(t.vars)
    wires = [BoolPoly.var(v) for v in vs]
    out = make_term(t.halfpow, vs, None, t.outputs, wires)
    inp = make_term(0, vs, None, wires, t.inputs)
    diags = []
    for mono, c in sorted(t.phase.items(), key=lambda x: mono_key(x[0])):
        d = make_term(0, vs, PhasePoly({mono: c}), wires, wires)
        diags.append(MonomialFactor("diag", d, mono, c))
    return (
        [MonomialFactor("out", out)]
        + diags[::-1]
        + [MonomialFactor("in", inp)]
    )


def recompose(factors: list[MonomialFactor], glue: bool = True) -> SopTerm:
    t = compose_all(*[f.term for f in factors])
    return reduce(t, _GLUE)[0] if glue else t


def _check_primed(t: SopTerm, k: int) -> None:
    if k < 1:
        raise ValueError("k must be at least 1")
    if t.halfpow % 2:
        raise NotPrimedFragment(f"scalar exponent {t.halfpow} is odd; use ensure_primed first")
    lvl = t.phase.level()
    if lvl > k + 1:
        raise WrongLevel(f"phase level {lvl} exceeds {k + 1}")


def _ascend_factor(f: MonomialFactor, k: int) -> SopTerm:
    t = f.term
    if f.kind != "diag":
        return tensor(t, identity(1))
    ell = f.coeff * (1 << (k + 1))
    assert ell.denominator == 1
    ell = int(ell)
    if ell % 2 == 0:
        return tensor(t, identity(1))
    y = t.fresh_var()
    mono = BoolPoly([f.mono])
    scale = Fraction(1, 1 << k)
    phase = PhasePoly({f.mono: scale * ((ell - 1) // 2), f.mono | {y}: scale})
    yb = BoolPoly.var(y)
    return SopTerm(
        t.halfpow,
        t.vars + (y,),
        phase,
        t.outputs + (yb,),
        t.inputs + (yb ^ mono,),
    )


def ascend(t: SopTerm, k: int, glue: bool = True) -> SopTerm:
    """The functor from SOP[1/2^(k+1)]' to SOP[1/2^k]'.

    Each factor of ``monomial_decompose(t)`` is ascended and the results are
    composed; with ``glue`` the composition variables are then removed by
    (HH), which does not change the semantics.
    """
    _check_primed(t, k)
    parts = [_ascend_factor(f, k) for f in monomial_decompose(t)]
    out = compose_all(*parts)
    return reduce(out, _GLUE)[0] if glue else out


def ascend_iter(t: SopTerm, k: int) -> SopTerm:
    """Apply ascend at k, k-1, ..., 1: a level k+1 term becomes a level 1 one."""
    for j in range(k, 0, -1):
        t = ascend(t, j)
    return t


def phase_state(k: int) -> SopTerm:
    """sum_y exp(2 i pi y / 2^(k+1)) |y>."""
    return make_term(0, [0], {frozenset([0]): Fraction(1, 1 << (k + 1))}, [0], [])


def descend(t: SopTerm, k: int) -> SopTerm:
    """(id_m (x) <0|) o t o (id_n (x) phase_state(k)), built literally."""
    if t.n_inputs < 1 or t.n_outputs < 1:
        raise ArityTooSmall("descend needs at least one input and one output")
    m, n = t.n_outputs - 1, t.n_inputs - 1
    bra0 = make_term(0, [], None, [], ["0"])
    post = tensor(identity(m), bra0)
    pre = tensor(identity(n), phase_state(k))
    return compose(post, compose(t, pre))


def ensure_primed(t: SopTerm) -> SopTerm:
    """Tensor with the unit-valued sqrt(2) gadget when the scalar exponent is odd."""
    if t.halfpow % 2 == 0:
        return t
    return tensor(t, SQRT2_GADGET)


# ------------------------------------------------------------ psi_k


def x_block(k: int) -> SopMatrix:
    """X_k = [[0, 1], [exp(i pi/2^(k-1)), 0]] over level k-1."""
    return SopMatrix.from_entries(2, 2, {(0, 1): 1, (1, 0): CycloNumber.root(k - 1, 1)}, level=k - 1)


def psi_split(M: SopMatrix, k: int) -> tuple[SopMatrix, SopMatrix]:
    """The unique (A, B) over level k-1 with M = A + exp(i pi/2^k) B."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if M.level > k:
        try:
            M = M.lower(k)
        except WrongRing:
            raise WrongRing(f"entries need level {M.min_level()}, more than {k}") from None
    M = M.lift(k)
    a = np.ascontiguousarray(M.data[:, :, 0::2])
    b = np.ascontiguousarray(M.data[:, :, 1::2])
    return SopMatrix(k - 1, a, M.e), SopMatrix(k - 1, b, M.e)


def psi_join(A: SopMatrix, B: SopMatrix, k: int) -> SopMatrix:
    """A + exp(i pi/2^k) B, the inverse of psi_split."""
    return A.lift(k) + B.lift(k).scale(CycloNumber.root(k, 1))


def psi_k(M: SopMatrix, k: int) -> SopMatrix:
    A, B = psi_split(M, k)
    ident = SopMatrix.identity(2, k - 1)
    return A.kron(ident) + B.kron(x_block(k))
