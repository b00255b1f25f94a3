"""Translations between ZH diagrams and SOP terms."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Sequence

from ..errors import DomainError, UnsupportedScalar
from ..polyalg import BoolPoly, PhasePoly, denom_log
from ..term import SopTerm, compose, cup, cap, dagger, identity, make_term, swap, tensor, zero_term
from .diagram import (
    And,
    Cap,
    Compose,
    Copy,
    Cup,
    Dagger,
    Diagram,
    ExactPhase,
    ExactReal,
    Float,
    H,
    HParam,
    Id,
    MINUS_ONE,
    Not,
    Perm,
    Scalar,
    Swap,
    Tensor,
    Xor,
    Z,
    expand_node,
    param,
    tensor as dtensor,
)

HALF = Fraction(1, 2)


# ------------------------------------------------------------ ZH -> SOP


def _h_term(n: int, m: int, p: HParam) -> SopTerm:
    k = n + m
    ins = [BoolPoly.var(i) for i in range(n)]
    outs = [BoolPoly.var(n + j) for j in range(m)]
    mono = frozenset(range(k))
    if isinstance(p, ExactPhase):
        phase = PhasePoly({mono: Fraction(p.num, 2 << p.log)})
        return SopTerm(0, tuple(range(k)), phase, tuple(outs), tuple(ins))
    if isinstance(p, ExactReal) and p.num == 0:
        # 0^(x1...yk) = 1 - x1...yk = (1/2) sum_z (-1)^(z x1...yk)
        z = k
        phase = PhasePoly({mono | {z}: HALF})
        return SopTerm(-2, tuple(range(k + 1)), phase, tuple(outs), tuple(ins))
    raise UnsupportedScalar(
        f"H-spider parameter {p} needs the floating point decomposition; not exact"
    )


def _scalar_term(p: HParam) -> SopTerm:
    if isinstance(p, ExactPhase):
        return SopTerm(0, (), PhasePoly({frozenset(): Fraction(p.num, 2 << p.log)}), (), ())
    if isinstance(p, ExactReal):
        if p.num == 0:
            return zero_term(0, 0)
        if p.num in (1, -1):
            phase = PhasePoly({frozenset(): HALF}) if p.num < 0 else PhasePoly()
            return SopTerm(p.halfpow, (), phase, (), ())
    raise UnsupportedScalar(f"scalar {p} is not of the form +-2^(p/2) or an exact phase")


def _macro_term(d: Diagram) -> SopTerm:
    if isinstance(d, And):
        xs = [BoolPoly.var(i) for i in range(d.s)]
        prod = BoolPoly([frozenset(range(d.s))])
        return SopTerm(0, tuple(range(d.s)), PhasePoly(), (prod,), tuple(xs))
    if isinstance(d, Xor):
        xs = [BoolPoly.var(i) for i in range(d.s)]
        total = BoolPoly([frozenset([i]) for i in range(d.s)])
        return SopTerm(0, tuple(range(d.s)), PhasePoly(), (total,), tuple(xs))
    if isinstance(d, Copy):
        return zh_to_sop(Z(1, d.s))
    if isinstance(d, Not):
        return make_term(0, [0], None, ["1 + y0"], ["y0"])
    if isinstance(d, Perm):
        xs = [BoolPoly.var(i) for i in range(len(d.perm))]
        return SopTerm(0, tuple(range(len(xs))), PhasePoly(), tuple(xs[i] for i in d.perm), tuple(xs))
    raise TypeError(d)


def zh_to_sop(d: Diagram, expand_macros: bool = False) -> SopTerm:
    """The functor [.]^sop.

    Derived nodes translate to their defining terms unless ``expand_macros``
    is set, in which case their generator expansion is translated instead.
    """
    if isinstance(d, Z):
        y = BoolPoly.var(0)
        return SopTerm(0, (0,), PhasePoly(), (y,) * d.m, (y,) * d.n)
    if isinstance(d, H):
        return _h_term(d.n, d.m, d.param)
    if isinstance(d, Scalar):
        return _scalar_term(d.param)
    if isinstance(d, Id):
        return identity(d.n)
    if isinstance(d, Swap):
        return swap(d.n, d.m)
    if isinstance(d, Cup):
        return cup(d.n)
    if isinstance(d, Cap):
        return cap(d.n)
    if isinstance(d, Compose):
        return compose(zh_to_sop(d.f, expand_macros), zh_to_sop(d.g, expand_macros))
    if isinstance(d, Tensor):
        return tensor(zh_to_sop(d.a, expand_macros), zh_to_sop(d.b, expand_macros))
    if isinstance(d, Dagger):
        return dagger(zh_to_sop(d.d, expand_macros))
    if isinstance(d, (And, Xor, Copy, Not, Perm)):
        if expand_macros:
            return zh_to_sop(expand_node(d), True)
        return _macro_term(d)
    raise TypeError(f"unknown diagram node {d!r}")


# ------------------------------------------------------------ SOP -> ZH


def _poly_block(monos: Sequence[frozenset]) -> Diagram:
    ands = dtensor(*[And(len(m)) for m in monos]) if monos else Id(0)
    return Compose(Xor(len(monos)), ands)


def zh_network(
    k: int,
    phase_terms: Sequence[tuple],
    outputs: Sequence[Sequence],
    inputs: Sequence[Sequence],
    scalar: HParam | None = None,
) -> Diagram:
    """Normal-form style diagram over variables ``0..k-1``.

    ``phase_terms`` is a list of ``(variables, H parameter)``; each becomes an
    H-spider effect on the copies of its variables.  ``outputs`` and
    ``inputs`` list, per wire, the monomials (iterables of variables) whose
    XOR sits on that wire.  The layers are: one Z-spider per variable with one
    leg per use, a permutation to the consumers, the H effects together with
    the And/Xor blocks, and finally caps joining the input blocks with the
    diagram's input wires.
    """
    phase_terms = [(tuple(sorted(vs)), param(p)) for vs, p in phase_terms]
    outputs = [[tuple(sorted(m)) for m in row] for row in outputs]
    inputs = [[tuple(sorted(m)) for m in row] for row in inputs]
    n, m = len(inputs), len(outputs)

    consumers: list[int] = []
    for vs, _ in phase_terms:
        consumers.extend(vs)
    for row in outputs + inputs:
        for mono in row:
            consumers.extend(mono)
    uses = [0] * k
    for v in consumers:
        uses[v] += 1
    offset = [0] * k
    for v in range(1, k):
        offset[v] = offset[v - 1] + uses[v - 1]
    total = sum(uses)
    seen = [0] * k
    perm = []
    for v in consumers:
        perm.append(offset[v] + seen[v])
        seen[v] += 1
    perm.extend(range(total, total + n))

    copies = dtensor(*[Z(0, u) for u in uses], Id(n))
    effects = [H(len(vs), 0, p) for vs, p in phase_terms]
    blocks = [_poly_block(row) for row in outputs + inputs]
    middle = dtensor(*effects, *blocks, Id(n))
    interleave = [0] * (2 * n)
    for j in range(n):
        interleave[2 * j] = j
        interleave[2 * j + 1] = n + j
    close = Compose(
        dtensor(Id(m), *[Cap(1) for _ in range(n)]),
        dtensor(Id(m), Perm(tuple(interleave))),
    )
    body = Compose(close, Compose(middle, Compose(Perm(tuple(perm)), copies)))
    if scalar is not None:
        body = Tensor(Scalar(scalar), body)
    return body


def phase_param(c: Fraction) -> ExactPhase:
    """H parameter exp(2 i pi c) for a dyadic c."""
    c = Fraction(c) % 1
    lg = denom_log(c)
    if lg == 0:
        return ExactPhase(0, 0)
    return ExactPhase(c.numerator, lg - 1)


def sop_to_zh(t: SopTerm) -> Diagram:
    """The functor [.]^ZH; semantics: zh_interp(sop_to_zh(t)) == interp(t)."""
    idx = {v: i for i, v in enumerate(t.vars)}

    def remap(mono):
        return tuple(idx[v] for v in mono)

    phase_terms = [(remap(mono), phase_param(c)) for mono, c in t.phase.items()]
    outputs = [[remap(mono) for mono in p.sorted_monomials()] for p in t.outputs]
    inputs = [[remap(mono) for mono in p.sorted_monomials()] for p in t.inputs]
    scalar = ExactReal(1, 0, t.halfpow) if t.halfpow else None
    return zh_network(len(t.vars), phase_terms, outputs, inputs, scalar)


# ------------------------------------------------------------ generic H-spiders


def h_decompose(r: complex) -> tuple[complex, float, float]:
    """(s, alpha, beta) with H(r) = H(-1) fed by s * Z(2,1)((H o H(e^{i alpha})) x H(e^{i beta})).

    The gadget state is (1/2)(1 + r, 1 - r).  Using ``|q|`` for
    ``q = (1 - r)/(1 + r)`` inside the arctangent keeps the construction valid
    when ``q`` is not a positive real.
    """
    r = complex(r)
    if abs(r) in (0.0, 1.0) or math.isclose(abs(r), 1.0, rel_tol=0, abs_tol=1e-15) or abs(r) < 1e-15:
        raise DomainError(f"|r| must not be 0 or 1, got r = {r}")
    q = (1 - r) / (1 + r)
    alpha = 2 * math.atan(abs(q))
    beta = cmath.phase(q) + math.pi / 2
    s = (1 + r) / (4 * cmath.exp(1j * alpha / 2) * math.cos(alpha / 2))
    return s, alpha, beta


def h_gadget(n: int, m: int, r: complex) -> Diagram:
    """Floating point diagram equal to H(n, m, r) built from phase spiders."""
    s, alpha, beta = h_decompose(r)
    state = Tensor(
        Scalar(Float(s)),
        Compose(
            Z(2, 1),
            Tensor(
                Compose(H(1, 1), H(0, 1, Float(cmath.exp(1j * alpha)))),
                H(0, 1, Float(cmath.exp(1j * beta))),
            ),
        ),
    )
    return Compose(H(n + 1, m, MINUS_ONE), Tensor(Id(n), state))
