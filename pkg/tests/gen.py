"""Random term generators shared by the test modules."""

import random
from fractions import Fraction

from sopkit.polyalg import BoolPoly, PhasePoly
from sopkit.term import make_term
from sopkit.zh import (
    MINUS_ONE, And, Cap, Copy, Cup, ExactPhase, ExactReal, H, Id, Not, Scalar, Swap, Xor, Z,
    compose as dcompose, tensor as dtensor,
)

_COEFFS = [Fraction(1, 2)] * 6 + [Fraction(1, 4), Fraction(3, 4), Fraction(1, 8), Fraction(5, 8)]


def rand_mono(rng, vs, max_deg=3):
    k = rng.randint(0, min(max_deg, len(vs)))
    return frozenset(rng.sample(vs, k))


def rand_bool(rng, vs, max_monos=2):
    if rng.random() < 0.5 and vs:
        p = BoolPoly.var(rng.choice(vs))
        if rng.random() < 0.4:
            p = p ^ BoolPoly([rand_mono(rng, vs, 2)])
        return p
    return BoolPoly(rand_mono(rng, vs, 2) for _ in range(rng.randint(0, max_monos)))


def rand_phase(rng, vs, level=3, max_monos=6):
    coeffs = [c for c in _COEFFS if c.denominator <= 1 << level]
    items = [(rand_mono(rng, vs), rng.choice(coeffs)) for _ in range(rng.randint(0, max_monos))]
    return PhasePoly(items)


def rand_term(rng, max_vars=8, max_io=2, level=3, halfpow=None):
    k = rng.randint(1, max_vars)
    vs = list(range(k))
    m = rng.randint(0, max_io)
    n = rng.randint(0, max_io)
    hp = rng.randint(-4, 2) if halfpow is None else halfpow
    return make_term(
        hp,
        vs,
        rand_phase(rng, vs, level),
        [rand_bool(rng, vs) for _ in range(m)],
        [rand_bool(rng, vs) for _ in range(n)],
    )


def rng_for(seed):
    return random.Random(seed)


def rand_rule_term(rng, max_vars=8, max_io=2, level=3):
    """Like rand_term, but often plants the shape some rule looks for on a
    fresh internal variable, so every rule gets exercised."""
    k = rng.randint(1, max_vars - 1)
    vs = list(range(k))
    y = k
    t = rand_term(rng, max_vars=k, max_io=max_io, level=level)
    t = make_term(t.halfpow, range(k), t.phase, t.outputs, t.inputs)
    shape = rng.choice(["none", "hh", "hh", "hh1", "omega", "sqrt2", "z", "elim"])
    extra = []
    if shape in ("hh", "hh1"):
        q = rand_bool(rng, vs, 3)
        if shape == "hh1":
            q = q ^ BoolPoly.one()
        extra = [(m | {y}, Fraction(1, 2)) for m in q.monomials]
    elif shape == "omega":
        c = rng.choice([Fraction(1, 4), Fraction(3, 4)])
        q = rand_bool(rng, vs, 2)
        extra = [(frozenset([y]), c)] + [(m | {y}, Fraction(1, 2)) for m in q.monomials if m]
    elif shape == "sqrt2":
        extra = [(frozenset([y]), Fraction(3, 4))]
    elif shape == "z":
        extra = [(frozenset([y]), Fraction(1, 2))]
    if shape in ("omega", "sqrt2") and level < 2:
        extra = []
    phase = t.phase + PhasePoly(extra)
    return make_term(t.halfpow, range(k + 1), phase, t.outputs, t.inputs)


def _h_param(rng):
    r = rng.random()
    if r < 0.6:
        return MINUS_ONE
    if r < 0.9:
        return ExactPhase(rng.randint(1, 7), rng.randint(0, 2))
    return ExactReal(0)


def _generator(rng, room):
    """A random generator with at most ``room`` inputs."""
    while True:
        kind = rng.choice("ZZZHHHIISCNAXKUP")
        if kind == "Z":
            g = Z(rng.randint(0, 2), rng.randint(0, 2))
        elif kind == "H":
            g = H(rng.randint(0, 2), rng.randint(0, 2), _h_param(rng))
        elif kind == "I":
            g = Id(1)
        elif kind == "S":
            g = Swap(1, 1)
        elif kind == "C":
            g = Cap(1)
        elif kind == "U":
            g = Cup(1)
        elif kind == "N":
            g = Not()
        elif kind == "A":
            g = And(rng.randint(0, 2))
        elif kind == "X":
            g = Xor(rng.randint(0, 2))
        elif kind == "K":
            g = Copy(rng.randint(0, 2))
        else:
            g = Scalar(rng.choice([ExactReal(1, 0, rng.randint(-2, 1)), ExactReal(-1), ExactPhase(1, 1)]))
        if g.n_in <= room:
            return g


def rand_diagram(rng, depth=3, max_width=4):
    """Layers of generators placed side by side, composed in sequence."""
    width = rng.randint(0, 2)
    inputs = width
    layers = []
    for _ in range(depth):
        parts, left, out = [], width, 0
        while left > 0 or (not parts and rng.random() < 0.3):
            g = _generator(rng, left)
            if out + g.n_out > max_width and g.n_in == 0:
                continue
            parts.append(g)
            left -= g.n_in
            out += g.n_out
        if out > max_width:
            continue
        layers.append(dtensor(*parts) if parts else Id(0))
        width = out
    if not layers:
        return Id(inputs)
    return dcompose(*reversed(layers))
