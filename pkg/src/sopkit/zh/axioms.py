"""The ZH_TH equational theory as concrete diagram pairs.

The rules are pictures in the literature; each pair below is one instance
fixed by its semantics and by the SOP terms its two sides translate to.
Spider arities are parameters where the rule is a family.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import (
    Compose,
    Dagger,
    Diagram,
    ExactReal,
    H,
    HALF,
    INV_SQRT2,
    Id,
    MINUS_ONE,
    Perm,
    Scalar,
    Tensor,
    Xor,
    Z,
    compose,
    tensor,
)
from .translate import zh_network


@dataclass(frozen=True)
class Axiom:
    name: str
    lhs: Diagram
    rhs: Diagram


def xspider(n: int, m: int) -> Diagram:
    """Unnormalised X-spider: |y><x| whenever the parities of x and y agree."""
    return Compose(Dagger(Xor(m)), Xor(n))


def zero_scalar() -> Diagram:
    """The scalar 0, as an H effect on a Z state: (1, -1).(1, 1)."""
    return Compose(H(1, 0), Z(0, 1))


def graph_like(k: int, boxes, outputs, inputs, halfpow: int = 0) -> Diagram:
    """Z-spiders ``0..k-1`` joined by H(-1) boxes.

    ``outputs``/``inputs`` name the spider on each boundary wire; an entry
    may also be a list of monomials whose XOR sits on that wire.
    """

    def row(x):
        return [(x,)] if isinstance(x, int) else [tuple(m) for m in x]

    scalar = ExactReal(1, 0, halfpow) if halfpow else None
    return zh_network(
        k,
        [(tuple(b), MINUS_ONE) for b in boxes],
        [row(o) for o in outputs],
        [row(i) for i in inputs],
        scalar,
    )


def _transpose_perm(rows: int, cols: int) -> Perm:
    # wires grouped by row -> grouped by column
    return Perm(tuple(r * cols + c for c in range(cols) for r in range(rows)))


def zs1(n: int = 2, m: int = 3) -> Axiom:
    return Axiom("ZS1", Compose(Z(1, m), Z(n, 1)), Z(n, m))


def zs2() -> Axiom:
    return Axiom("ZS2", Z(1, 1), Id(1))


def hs1(a: int = 2, b: int = 1, m: int = 1) -> Axiom:
    # two H-boxes joined through a Hadamard fuse into one
    lhs = Tensor(
        Scalar(HALF),
        Compose(H(a + 1, m), Tensor(Id(a), compose(H(1, 1), H(b, 1)))),
    )
    return Axiom("HS1", lhs, H(a + b, m))


def hs2() -> Axiom:
    return Axiom("HS2", Tensor(Scalar(HALF), Compose(H(1, 1), H(1, 1))), Id(1))


def ba1(n: int = 2, m: int = 2) -> Axiom:
    # Z(m,1) then X(1,n)  ==  X(1,n) on each input, regrouped, Z(m,1) on each output
    rhs = Compose(xspider(1, n), Z(m, 1))
    lhs = compose(
        tensor(*[Z(m, 1) for _ in range(n)]),
        _transpose_perm(m, n),
        tensor(*[xspider(1, n) for _ in range(m)]),
    )
    return Axiom("BA1", lhs, rhs)


def ba2(n: int = 2, m: int = 2) -> Axiom:
    # an H-box fed by an XOR splits into one H-box per summand
    rhs = Compose(H(1, m), Xor(n))
    lhs = compose(
        tensor(*[Z(n, 1) for _ in range(m)]),
        _transpose_perm(n, m),
        tensor(*[H(1, m) for _ in range(n)]),
    )
    return Axiom("BA2", lhs, rhs)


def m_rule(n: int = 1, m: int = 1) -> Axiom:
    # (-1) * (-1) = 1: two H effects on one spider cancel
    lhs = Compose(Tensor(Id(m), Tensor(H(1, 0), H(1, 0))), Z(n, m + 2))
    return Axiom("M", lhs, Z(n, m))


def o_rule() -> Axiom:
    lhs = graph_like(4, [(0, 2, 3), (0, 3), (1, 2, 3)], [0, 1], [2], halfpow=2)
    rhs = graph_like(5, [(0, 1), (2, 3, 4), (0, 1, 4)], [0, 3], [4])
    return Axiom("O", lhs, rhs)


def and_rule() -> Axiom:
    lhs = Compose(H(1, 1), H(2, 1))
    # spiders 0..6 stand for y0 y1 y2 y3 y4 y7 y8; the inputs are negated
    rhs = graph_like(
        7,
        [(0,), (6, 1, 5), (1,), (1, 3, 4), (0, 1, 2), (0, 2)],
        [0],
        [[(), (4,)], [(), (5,)]],
        halfpow=-4,
    )
    return Axiom("&", lhs, rhs)


def iv_rule() -> Axiom:
    return Axiom("IV", Tensor(Scalar(HALF), Z(0, 0)), Id(0))


def z_rule() -> Axiom:
    return Axiom("Z", Tensor(Scalar(INV_SQRT2), zero_scalar()), zero_scalar())


def axioms() -> list[Axiom]:
    """Default instance of every rule."""
    return [
        zs1(), zs2(), hs1(), hs2(), ba1(), ba2(), m_rule(),
        o_rule(), and_rule(), iv_rule(), z_rule(),
    ]


def axiom_family() -> list[Axiom]:
    """Several arities of the parametric rules, plus the fixed ones."""
    out = []
    for n, m in [(1, 1), (2, 3), (3, 2), (0, 2), (2, 0)]:
        out.append(zs1(n, m))
    for a, b, m in [(1, 1, 1), (2, 1, 1), (1, 2, 0), (0, 1, 2)]:
        out.append(hs1(a, b, m))
    for n, m in [(1, 1), (2, 2), (3, 2), (2, 3)]:
        out.append(ba1(n, m))
        out.append(ba2(n, m))
    for n, m in [(1, 1), (0, 2), (2, 0)]:
        out.append(m_rule(n, m))
    out += [zs2(), hs2(), o_rule(), and_rule(), iv_rule(), z_rule()]
    return out
