"""SOP terms: construction, categorical operations and exact interpretation.

A term ``s * sum_y exp(2 i pi P(y)) |O(y)><I(y)|`` is stored with
``s = 2**(halfpow/2)``.  Basis ordering is big-endian: the first output
(resp. input) polynomial is the most significant bit of the row (resp.
column) index.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .cyclo import CycloNumber, SopMatrix
from .errors import ArityMismatch, LevelTooSmall, TooManyVariables, UnboundVariable
from .polyalg import BoolPoly, PhasePoly, half_poly

DEFAULT_VAR_CAP = 22


@dataclass(frozen=True)
class SopTerm:
    halfpow: int
    vars: tuple
    phase: PhasePoly
    outputs: tuple
    inputs: tuple

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    def boundary_vars(self) -> frozenset:
        out: set = set()
        for p in self.outputs + self.inputs:
            out |= p.vars()
        return frozenset(out)

    def is_internal(self, v: int) -> bool:
        return all(v not in p.vars() for p in self.outputs + self.inputs)

    def fresh_var(self) -> int:
        return max(self.vars, default=-1) + 1

    def rename(self, mapping: Mapping[int, int]) -> "SopTerm":
        return SopTerm(
            self.halfpow,
            tuple(mapping[v] for v in self.vars),
            self.phase.rename(mapping),
            tuple(p.rename(mapping) for p in self.outputs),
            tuple(p.rename(mapping) for p in self.inputs),
        )

    def __str__(self) -> str:
        return term_str(self)

    def to_json(self) -> dict:
        return term_to_json(self)


@dataclass(frozen=True)
class FragmentInfo:
    level: int
    primed: bool


def _as_bool(p) -> BoolPoly:
    if isinstance(p, BoolPoly):
        return p
    if isinstance(p, str):
        return BoolPoly.parse(p)
    if isinstance(p, int):
        return BoolPoly.var(p)
    return BoolPoly(p)


def _as_phase(p) -> PhasePoly:
    if isinstance(p, PhasePoly):
        return p
    if p is None:
        return PhasePoly()
    if isinstance(p, str):
        return PhasePoly.parse(p)
    return PhasePoly(p)


def make_term(halfpow: int, vars: Iterable[int], phase=None, outputs=(), inputs=()) -> SopTerm:
    """Validated constructor.

    ``outputs``/``inputs`` entries may be BoolPoly, textual polynomials or a
    bare variable id; ``phase`` may be a PhasePoly, a mapping from monomials
    to coefficients, or its textual form.
    """
    vs = tuple(int(v) for v in vars)
    if len(set(vs)) != len(vs):
        raise ValueError(f"duplicate variable in {vs}")
    ph = _as_phase(phase)
    outs = tuple(_as_bool(p) for p in outputs)
    ins = tuple(_as_bool(p) for p in inputs)
    known = set(vs)
    used = set(ph.vars())
    for p in outs + ins:
        used |= p.vars()
    missing = used - known
    if missing:
        raise UnboundVariable(f"variables {sorted(missing)} not declared in {list(vs)}")
    return SopTerm(int(halfpow), vs, ph, outs, ins)


def zero_term(m: int, n: int, var: int = 0) -> SopTerm:
    """The canonical zero term produced by rule (Z)."""
    return SopTerm(
        0,
        (var,),
        PhasePoly({frozenset([var]): Fraction(1, 2)}),
        tuple(BoolPoly.zero() for _ in range(m)),
        tuple(BoolPoly.zero() for _ in range(n)),
    )


# ------------------------------------------------------------ structural


def identity(n: int) -> SopTerm:
    ys = tuple(BoolPoly.var(i) for i in range(n))
    return SopTerm(0, tuple(range(n)), PhasePoly(), ys, ys)


def swap(n: int, m: int) -> SopTerm:
    """sigma_{n,m}: |x, y> -> |y, x> with |x| = n, |y| = m."""
    ys = [BoolPoly.var(i) for i in range(n + m)]
    return SopTerm(0, tuple(range(n + m)), PhasePoly(), tuple(ys[n:] + ys[:n]), tuple(ys))


def cup(n: int) -> SopTerm:
    """eta_n = sum_y |y, y>."""
    ys = tuple(BoolPoly.var(i) for i in range(n))
    return SopTerm(0, tuple(range(n)), PhasePoly(), ys + ys, ())


def cap(n: int) -> SopTerm:
    """epsilon_n = sum_y <y, y|."""
    return dagger(cup(n))


def structural(kind: str, *args: int) -> SopTerm:
    table = {"identity": identity, "id": identity, "swap": swap, "cup": cup, "cap": cap}
    try:
        return table[kind](*args)
    except KeyError:
        raise ValueError(f"unknown structural morphism {kind!r}") from None


def hadamard() -> SopTerm:
    return make_term(-1, [0, 1], {(0, 1): Fraction(1, 2)}, [1], [0])


def toffoli() -> SopTerm:
    return make_term(0, [0, 1, 2], None, ["y0", "y1", "y2 + y0*y1"], ["y0", "y1", "y2"])


# ------------------------------------------------------------ operations


def _relabel(t: SopTerm, start: int) -> tuple[SopTerm, int]:
    mapping = {v: start + i for i, v in enumerate(t.vars)}
    return t.rename(mapping), start + len(t.vars)


def compose(f: SopTerm, g: SopTerm) -> SopTerm:
    """``f o g``: g is applied first.

    Variables are renamed apart (g's first, then f's, then the glue
    variables) so that the result is deterministic.
    """
    m = g.n_outputs
    if f.n_inputs != m:
        raise ArityMismatch(f"cannot compose: f has {f.n_inputs} inputs, g has {m} outputs")
    g2, nxt = _relabel(g, 0)
    f2, nxt = _relabel(f, nxt)
    glue = list(range(nxt, nxt + m))
    phase = g2.phase + f2.phase
    for i, y in enumerate(glue):
        phase = phase + half_poly(g2.outputs[i] ^ f2.inputs[i]).times_var(y)
    return SopTerm(
        f.halfpow + g.halfpow - 2 * m,
        g2.vars + f2.vars + tuple(glue),
        phase,
        f2.outputs,
        g2.inputs,
    )


def compose_all(*terms: SopTerm) -> SopTerm:
    """Right-to-left composite ``t0 o t1 o ... o tn``."""
    acc = terms[-1]
    for t in reversed(terms[:-1]):
        acc = compose(t, acc)
    return acc


def tensor(f: SopTerm, g: SopTerm) -> SopTerm:
    f2, nxt = _relabel(f, 0)
    g2, _ = _relabel(g, nxt)
    return SopTerm(
        f.halfpow + g.halfpow,
        f2.vars + g2.vars,
        f2.phase + g2.phase,
        f2.outputs + g2.outputs,
        f2.inputs + g2.inputs,
    )


def tensor_all(*terms: SopTerm) -> SopTerm:
    acc = SopTerm(0, (), PhasePoly(), (), ())
    for t in terms:
        acc = tensor(acc, t)
    return acc


def dagger(f: SopTerm) -> SopTerm:
    return SopTerm(f.halfpow, f.vars, -f.phase, f.inputs, f.outputs)


def fragment_of(t: SopTerm) -> FragmentInfo:
    return FragmentInfo(level=t.phase.level(), primed=t.halfpow % 2 == 0)


# ------------------------------------------------------------ canonical form


def _occurrences(t: SopTerm):
    """Per variable, the list of places it occurs: (tag, data, monomial)."""
    occ: dict = {v: [] for v in t.vars}
    for i, p in enumerate(t.outputs):
        for m in p.monomials:
            for v in m:
                occ[v].append(("o", i, m))
    for j, p in enumerate(t.inputs):
        for m in p.monomials:
            for v in m:
                occ[v].append(("i", j, m))
    for m, c in t.phase.terms.items():
        for v in m:
            occ[v].append(("p", c, m))
    return occ


def _refine(colors: dict, occ: dict) -> dict:
    while True:
        sigs = {}
        for v, places in occ.items():
            others = sorted(
                (tag, str(data), len(m), tuple(sorted(colors[u] for u in m if u != v)))
                for tag, data, m in places
            )
            sigs[v] = (colors[v], tuple(others))
        ranks = {s: r for r, s in enumerate(sorted(set(sigs.values())))}
        new = {v: ranks[s] for v, s in sigs.items()}
        if len(ranks) == len(set(colors.values())):
            return new
        colors = new


def _key(t: SopTerm, sigma: Mapping[int, int]):
    def mono(m):
        return tuple(sorted(sigma[v] for v in m))

    def bpoly(p):
        return tuple(sorted((mono(m) for m in p.monomials), key=lambda x: (len(x), x)))

    return (
        tuple(bpoly(p) for p in t.outputs),
        tuple(bpoly(p) for p in t.inputs),
        tuple(sorted(((mono(m), c) for m, c in t.phase.terms.items()), key=lambda x: (len(x[0]), x))),
    )


def canonicalize(t: SopTerm, leaf_limit: int = 256) -> SopTerm:
    """Alpha-canonical relabelling of ``t`` onto variables ``0..k-1``.

    Colour refinement on the occurrence structure followed by an
    individualisation search; the lexicographically least serialization over
    the explored leaves wins.  If the search exceeds ``leaf_limit`` leaves the
    best leaf found so far is used, which is deterministic but may fail to
    identify some highly symmetric alpha-variants.
    """
    out = t.rename(canonical_relabeling(t, leaf_limit))
    return SopTerm(out.halfpow, tuple(sorted(out.vars)), out.phase, out.outputs, out.inputs)


def canonical_order(t: SopTerm, leaf_limit: int = 256) -> list:
    """Variables of ``t`` sorted by their canonical index."""
    sigma = canonical_relabeling(t, leaf_limit)
    return sorted(t.vars, key=sigma.__getitem__)


def canonical_relabeling(t: SopTerm, leaf_limit: int = 256) -> dict:
    occ = _occurrences(t)
    used = [v for v in t.vars if occ[v]]
    unused = [v for v in t.vars if not occ[v]]
    occ = {v: occ[v] for v in used}
    best = None
    leaves = 0

    def search(colors):
        nonlocal best, leaves
        colors = _refine(colors, occ)
        cells: dict = {}
        for v, c in colors.items():
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = c
                break
        if target is None:
            leaves += 1
            sigma = {v: colors[v] for v in used}
            k = _key(t, sigma)
            if best is None or k < best[0]:
                best = (k, sigma)
            return
        for v in sorted(cells[target]):
            if leaves >= leaf_limit:
                return
            nc = {u: 2 * c + (0 if u == v else 1) for u, c in colors.items()}
            search(nc)

    if used:
        search({v: 0 for v in used})
        sigma = dict(best[1])
    else:
        sigma = {}
    for i, v in enumerate(unused):
        sigma[v] = len(used) + i
    return sigma


def alpha_equal(a: SopTerm, b: SopTerm) -> bool:
    if (a.halfpow, len(a.vars), a.n_outputs, a.n_inputs) != (b.halfpow, len(b.vars), b.n_outputs, b.n_inputs):
        return False
    return canonicalize(a) == canonicalize(b)


# ------------------------------------------------------------ interpretation


def required_level(t: SopTerm) -> int:
    """Smallest K such that interp(t) lives over exp(i pi / 2**K)."""
    lvl = max(t.phase.level() - 1, 0)
    if t.halfpow % 2:
        lvl = max(lvl, 2)
    return lvl


def var_cap() -> int:
    return int(os.environ.get("SOP_VAR_CAP", DEFAULT_VAR_CAP))


def interp(t: SopTerm, K: int | None = None, max_vars: int | None = None) -> SopMatrix:
    """Exact matrix of ``t`` over Z[1/2][w], w = exp(i pi / 2**K)."""
    need = required_level(t)
    if K is None:
        K = need
    elif K < need:
        raise LevelTooSmall(f"term needs level {need}, got {K}")
    cap_ = var_cap() if max_vars is None else max_vars
    k = len(t.vars)
    if k > cap_:
        raise TooManyVariables(f"{k} variables exceeds the cap of {cap_}")
    n_lvl = 1 << K
    m, n = t.n_outputs, t.n_inputs
    rows, cols = 1 << m, 1 << n

    pos = {v: i for i, v in enumerate(t.vars)}
    a = np.arange(1 << k, dtype=np.int64)

    def indicator(mono):
        mask = 0
        for v in mono:
            mask |= 1 << pos[v]
        return (a & mask) == mask

    def bpoly(p):
        bit = np.zeros(a.shape, dtype=np.int64)
        for mono in p.monomials:
            bit ^= indicator(mono)
        return bit

    # phase exponent in units of 1/2**L, mapped to powers of w (w**(2N) = 1)
    L = t.phase.level()
    expo = np.zeros(a.shape, dtype=np.int64)
    for mono, c in t.phase.terms.items():
        units = int(c * (1 << L))
        expo += units * indicator(mono)
    power = (expo % (1 << L)) << (K + 1 - L) if L <= K + 1 else None
    if power is None:
        raise LevelTooSmall(f"term needs level {need}, got {K}")
    sign = np.where(power < n_lvl, 1, -1)
    slot = power % n_lvl

    row = np.zeros(a.shape, dtype=np.int64)
    for i, p in enumerate(t.outputs):
        row |= bpoly(p) << (m - 1 - i)
    col = np.zeros(a.shape, dtype=np.int64)
    for j, p in enumerate(t.inputs):
        col |= bpoly(p) << (n - 1 - j)

    flat = (row * cols + col) * n_lvl + slot
    size = rows * cols * n_lvl
    pos_counts = np.bincount(flat[sign > 0], minlength=size)
    neg_counts = np.bincount(flat[sign < 0], minlength=size)
    data = (pos_counts - neg_counts).astype(np.int64).reshape(rows, cols, n_lvl)
    mat = SopMatrix(K, data)
    if t.halfpow:
        mat = mat.scale(CycloNumber.pow_sqrt2(t.halfpow, K))
    return mat.lift(K) if mat.level <= K else mat


def interp_equal(a: SopTerm, b: SopTerm) -> bool:
    K = max(required_level(a), required_level(b))
    return interp(a, K) == interp(b, K)


# ------------------------------------------------------------ text & json


def term_str(t: SopTerm) -> str:
    scalar = "" if t.halfpow == 0 else f"2^({t.halfpow}/2) "
    vs = ",".join(f"y{v}" for v in t.vars)
    outs = ", ".join(str(p) for p in t.outputs)
    ins = ", ".join(str(p) for p in t.inputs)
    ph = "" if not t.phase else f" e^(2i*pi*({t.phase}))"
    return f"{scalar}sum[{vs}]{ph} |{outs}><{ins}|"


def term_to_json(t: SopTerm) -> dict:
    return {
        "halfpow": t.halfpow,
        "vars": list(t.vars),
        "phase": t.phase.to_json(),
        "outputs": [p.to_json() for p in t.outputs],
        "inputs": [p.to_json() for p in t.inputs],
    }


def term_from_json(data: Mapping) -> SopTerm:
    return make_term(
        data["halfpow"],
        data["vars"],
        PhasePoly.from_json(data.get("phase", [])),
        [BoolPoly.from_json(p) for p in data.get("outputs", [])],
        [BoolPoly.from_json(p) for p in data.get("inputs", [])],
    )


def dumps(t: SopTerm) -> str:
    return json.dumps(term_to_json(t), sort_keys=True)


def loads(text: str) -> SopTerm:
    return term_from_json(json.loads(text))
