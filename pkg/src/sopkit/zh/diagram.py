"""ZH diagrams as composition trees, with exact and floating point semantics.

Wires are ordered; ``Compose(f, g)`` means ``f o g`` (g first) and
``Tensor(a, b)`` places ``a`` on the first wires.  Basis ordering is
big-endian as in :mod:`sopkit.term`.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Union

import numpy as np

from ..cyclo import CycloNumber, SopMatrix
from ..errors import ArityMismatch, LevelTooSmall, WrongRing

# ------------------------------------------------------------ parameters


@dataclass(frozen=True)
class ExactPhase:
    """exp(i pi num / 2**log)."""

    num: int
    log: int = 0

    def __post_init__(self):
        num, log = self.num % (2 << self.log), self.log
        while log > 0 and num % 2 == 0:
            num //= 2
            log -= 1
        object.__setattr__(self, "num", num % (2 << log))
        object.__setattr__(self, "log", log)

    @property
    def turns(self) -> Fraction:
        """The phase as a fraction of a full turn."""
        return Fraction(self.num, 2 << self.log) % 1

    def level(self) -> int:
        return self.log

    def to_cyclo(self, level: int | None = None) -> CycloNumber:
        lvl = self.log if level is None else level
        if lvl < self.log:
            raise WrongRing(f"phase needs level {self.log}")
        return CycloNumber.root(lvl, self.num << (lvl - self.log))

    def to_complex(self) -> complex:
        return cmath.exp(1j * cmath.pi * self.num / (1 << self.log))

    def conj(self) -> "ExactPhase":
        return ExactPhase(-self.num, self.log)


@dataclass(frozen=True)
class ExactReal:
    """(num / 2**log) * 2**(halfpow/2)."""

    num: int
    log: int = 0
    halfpow: int = 0

    def __post_init__(self):
        num, log, hp = self.num, self.log, self.halfpow
        if num == 0:
            log, hp = 0, 0
        while num and num % 2 == 0:
            num //= 2
            hp += 2
        hp -= 2 * log
        log = 0
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "log", log)
        object.__setattr__(self, "halfpow", hp)

    def level(self) -> int:
        return 2 if self.halfpow % 2 else 0

    def to_cyclo(self, level: int | None = None) -> CycloNumber:
        lvl = self.level() if level is None else level
        if lvl < self.level():
            raise WrongRing("sqrt(2) needs level 2")
        return CycloNumber.pow_sqrt2(self.halfpow, lvl) * self.num

    def to_complex(self) -> complex:
        return complex(self.num * 2 ** (self.halfpow / 2))

    def conj(self) -> "ExactReal":
        return self

    @property
    def sign(self) -> int:
        return (self.num > 0) - (self.num < 0)


@dataclass(frozen=True)
class Float:
    value: complex

    def level(self) -> int:
        raise WrongRing("floating point parameter has no exact level")

    def to_cyclo(self, level=None):
        raise WrongRing("floating point parameter cannot be interpreted exactly")

    def to_complex(self) -> complex:
        return complex(self.value)

    def conj(self) -> "Float":
        return Float(complex(self.value).conjugate())


HParam = Union[ExactPhase, ExactReal, Float]

MINUS_ONE = ExactPhase(1, 0)
ONE = ExactPhase(0, 0)
ZERO = ExactReal(0)
INV_SQRT2 = ExactReal(1, 0, -1)
HALF = ExactReal(1, 1)


def param(value) -> HParam:
    """Coerce ints, Fractions, complex numbers and strings such as ``"-1"``."""
    if isinstance(value, ExactReal) and value.halfpow == 0 and value.num in (1, -1):
        return ExactPhase(0 if value.num == 1 else 1, 0)
    if isinstance(value, (ExactPhase, ExactReal, Float)):
        return value
    if isinstance(value, str):
        v = value.strip().replace(" ", "")
        named = {"-1": MINUS_ONE, "1": ONE, "0": ZERO, "i": ExactPhase(1, 1), "-i": ExactPhase(3, 1),
                 "1/sqrt2": INV_SQRT2, "sqrt2": ExactReal(1, 0, 1), "1/2": HALF}
        if v in named:
            return named[v]
        return param(complex(v.replace("i", "j")))
    if isinstance(value, (int, Fraction)):
        f = Fraction(value)
        d = f.denominator
        if d & (d - 1) == 0:
            return param(ExactReal(f.numerator, d.bit_length() - 1))
        return Float(complex(float(f)))
    return Float(complex(value))


def param_to_json(p: HParam) -> dict:
    if isinstance(p, ExactPhase):
        return {"kind": "phase", "num": p.num, "log": p.log}
    if isinstance(p, ExactReal):
        return {"kind": "real", "num": p.num, "halfpow": p.halfpow}
    return {"kind": "float", "re": p.value.real, "im": p.value.imag}


def param_from_json(d: dict) -> HParam:
    kind = d["kind"]
    if kind == "phase":
        return ExactPhase(d["num"], d.get("log", 0))
    if kind == "real":
        return ExactReal(d["num"], d.get("log", 0), d.get("halfpow", 0))
    if kind == "float":
        return Float(complex(d["re"], d.get("im", 0.0)))
    raise ValueError(f"unknown parameter kind {kind!r}")


# ------------------------------------------------------------ nodes


class Diagram:
    """Base class; subclasses define ``n_in`` and ``n_out``."""

    n_in: int
    n_out: int

    def __matmul__(self, other: "Diagram") -> "Diagram":
        return Compose(self, other)

    def __mul__(self, other: "Diagram") -> "Diagram":
        return Tensor(self, other)


@dataclass(frozen=True, eq=True)
class Z(Diagram):
    n: int
    m: int

    @property
    def n_in(self):
        return self.n

    @property
    def n_out(self):
        return self.m


@dataclass(frozen=True)
class H(Diagram):
    n: int
    m: int
    param: HParam = MINUS_ONE

    def __post_init__(self):
        object.__setattr__(self, "param", param(self.param))

    @property
    def n_in(self):
        return self.n

    @property
    def n_out(self):
        return self.m


@dataclass(frozen=True)
class Swap(Diagram):
    """|x, y> -> |y, x> with |x| = n and |y| = m."""

    n: int = 1
    m: int = 1

    @property
    def n_in(self):
        return self.n + self.m

    @property
    def n_out(self):
        return self.n + self.m


@dataclass(frozen=True)
class Cup(Diagram):
    n: int = 1

    @property
    def n_in(self):
        return 0

    @property
    def n_out(self):
        return 2 * self.n


@dataclass(frozen=True)
class Cap(Diagram):
    n: int = 1

    @property
    def n_in(self):
        return 2 * self.n

    @property
    def n_out(self):
        return 0


@dataclass(frozen=True)
class Id(Diagram):
    n: int = 1

    @property
    def n_in(self):
        return self.n

    @property
    def n_out(self):
        return self.n


@dataclass(frozen=True)
class Scalar(Diagram):
    param: HParam = ONE

    def __post_init__(self):
        object.__setattr__(self, "param", param(self.param))

    n_in = 0
    n_out = 0


@dataclass(frozen=True)
class Compose(Diagram):
    f: Diagram
    g: Diagram

    def __post_init__(self):
        if self.f.n_in != self.g.n_out:
            raise ArityMismatch(f"cannot compose: {self.f.n_in} inputs vs {self.g.n_out} outputs")

    @property
    def n_in(self):
        return self.g.n_in

    @property
    def n_out(self):
        return self.f.n_out


@dataclass(frozen=True)
class Tensor(Diagram):
    a: Diagram
    b: Diagram

    @property
    def n_in(self):
        return self.a.n_in + self.b.n_in

    @property
    def n_out(self):
        return self.a.n_out + self.b.n_out


@dataclass(frozen=True)
class Dagger(Diagram):
    d: Diagram

    @property
    def n_in(self):
        return self.d.n_out

    @property
    def n_out(self):
        return self.d.n_in


# derived nodes, expanded on demand


@dataclass(frozen=True)
class And(Diagram):
    """|x1..xs> -> |x1 * ... * xs>; And(0) is the constant |1>."""

    s: int

    @property
    def n_in(self):
        return self.s

    n_out = 1


@dataclass(frozen=True)
class Xor(Diagram):
    """|x1..xs> -> |x1 + ... + xs mod 2>; Xor(0) is |0>."""

    s: int

    @property
    def n_in(self):
        return self.s

    n_out = 1


@dataclass(frozen=True)
class Copy(Diagram):
    """|x> -> |x, ..., x> (s copies)."""

    s: int

    n_in = 1

    @property
    def n_out(self):
        return self.s


@dataclass(frozen=True)
class Not(Diagram):
    n_in = 1
    n_out = 1


@dataclass(frozen=True)
class Perm(Diagram):
    """Wire permutation: output wire j carries input wire ``perm[j]``."""

    perm: tuple

    def __post_init__(self):
        p = tuple(int(i) for i in self.perm)
        if sorted(p) != list(range(len(p))):
            raise ValueError(f"{p} is not a permutation")
        object.__setattr__(self, "perm", p)

    @property
    def n_in(self):
        return len(self.perm)

    @property
    def n_out(self):
        return len(self.perm)


MACROS = (And, Xor, Copy, Not, Perm)


def compose(*ds: Diagram) -> Diagram:
    """``ds[0] o ds[1] o ... o ds[-1]``."""
    acc = ds[-1]
    for d in reversed(ds[:-1]):
        acc = Compose(d, acc)
    return acc


def tensor(*ds: Diagram) -> Diagram:
    ds = [d for d in ds if not (isinstance(d, Id) and d.n == 0)]
    if not ds:
        return Id(0)
    acc = ds[0]
    for d in ds[1:]:
        acc = Tensor(acc, d)
    return acc


def dagger(d: Diagram) -> Diagram:
    if isinstance(d, Z):
        return Z(d.m, d.n)
    if isinstance(d, H):
        return H(d.m, d.n, d.param.conj())
    if isinstance(d, Swap):
        return Swap(d.m, d.n)
    if isinstance(d, Cup):
        return Cap(d.n)
    if isinstance(d, Cap):
        return Cup(d.n)
    if isinstance(d, Id):
        return d
    if isinstance(d, Scalar):
        return Scalar(d.param.conj())
    if isinstance(d, Compose):
        return Compose(dagger(d.g), dagger(d.f))
    if isinstance(d, Tensor):
        return Tensor(dagger(d.a), dagger(d.b))
    if isinstance(d, Dagger):
        return d.d
    if isinstance(d, Perm):
        inv = [0] * len(d.perm)
        for j, i in enumerate(d.perm):
            inv[i] = j
        return Perm(tuple(inv))
    if isinstance(d, Copy):
        return Z(d.s, 1)
    return Dagger(d)


# ------------------------------------------------------------ macro expansion


def _perm_as_swaps(perm: tuple) -> Diagram:
    """Adjacent transpositions (bubble sort) realising ``perm``."""
    n = len(perm)
    cur = list(range(n))  # cur[j] = input wire currently on wire j
    layers = []
    target = list(perm)
    for j in range(n):
        k = cur.index(target[j])
        while k > j:
            layers.append(tensor(Id(k - 1), Swap(1, 1), Id(n - k - 1)))
            cur[k - 1], cur[k] = cur[k], cur[k - 1]
            k -= 1
    if not layers:
        return Id(n)
    return compose(*reversed(layers))


def expand_node(d: Diagram) -> Diagram:
    """One-level expansion of a derived node into ZH generators."""
    if isinstance(d, Xor):
        hs = tensor(*[H(1, 1) for _ in range(d.s)]) if d.s else Id(0)
        return Tensor(Scalar(HALF), compose(H(1, 1), Z(d.s, 1), hs))
    if isinstance(d, And):
        return Tensor(
            Scalar(HALF),
            compose(H(1, 1), Tensor(H(d.s + 1, 0), Id(1)), Tensor(Id(d.s), Z(0, 2))),
        )
    if isinstance(d, Copy):
        return Z(1, d.s)
    if isinstance(d, Not):
        return Compose(Xor(2), Tensor(Id(1), And(0)))
    if isinstance(d, Perm):
        return _perm_as_swaps(d.perm)
    return d


def expand_macros(d: Diagram) -> Diagram:
    """Recursively replace every derived node by generators."""
    if isinstance(d, MACROS):
        return expand_macros(expand_node(d))
    if isinstance(d, Compose):
        return Compose(expand_macros(d.f), expand_macros(d.g))
    if isinstance(d, Tensor):
        return Tensor(expand_macros(d.a), expand_macros(d.b))
    if isinstance(d, Dagger):
        return dagger(expand_macros(d.d))
    return d


def iter_nodes(d: Diagram):
    """Leaves of the composition tree, left to right."""
    stack = [d]
    while stack:
        x = stack.pop()
        if isinstance(x, Compose):
            stack.extend([x.g, x.f])
        elif isinstance(x, Tensor):
            stack.extend([x.b, x.a])
        elif isinstance(x, Dagger):
            stack.append(x.d)
        else:
            yield x


def zh_th_membership(d: Diagram) -> bool:
    """Whether ``d`` (after macro expansion) only uses Z, H(-1) and 1/sqrt2 scalars."""
    for x in iter_nodes(expand_macros(d)):
        if isinstance(x, H) and x.param != MINUS_ONE:
            return False
        if isinstance(x, Scalar):
            p = x.param
            # (1/sqrt2)**k for k >= 0, the scalar family generated by 1/sqrt2
            if not (isinstance(p, ExactReal) and p.num == 1 and p.halfpow <= 0):
                return False
    return True


# ------------------------------------------------------------ semantics


class _Engine:
    """Sparse evaluator: applies a diagram to one basis state at a time."""

    def __init__(self, lift, one):
        self.lift = lift  # HParam -> number
        self.one = one
        self.memo: dict = {}
        self._keep: list = []

    def act(self, d: Diagram, x: tuple) -> dict:
        key = (id(d), x)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self._keep.append(d)
        out = self._act(d, x)
        self.memo[key] = out
        return out

    def _act(self, d, x):
        one = self.one
        if isinstance(d, Z):
            if d.n == 0:
                if d.m == 0:
                    return {(): one + one}
                return {(0,) * d.m: one, (1,) * d.m: one}
            if all(b == x[0] for b in x):
                return {(x[0],) * d.m: one}
            return {}
        if isinstance(d, H):
            r = self.lift(d.param)
            allx = all(x)
            out = {}
            for ys in product((0, 1), repeat=d.m):
                out[ys] = r if allx and all(ys) else one
            return out
        if isinstance(d, Id):
            return {x: one}
        if isinstance(d, Swap):
            return {x[d.n:] + x[: d.n]: one}
        if isinstance(d, Perm):
            return {tuple(x[i] for i in d.perm): one}
        if isinstance(d, Cup):
            return {ys + ys: one for ys in product((0, 1), repeat=d.n)}
        if isinstance(d, Cap):
            return {(): one} if x[: d.n] == x[d.n:] else {}
        if isinstance(d, Scalar):
            return {(): self.lift(d.param)}
        if isinstance(d, And):
            return {(int(all(x)),): one}
        if isinstance(d, Xor):
            return {(sum(x) % 2,): one}
        if isinstance(d, Copy):
            return {(x[0],) * d.s: one}
        if isinstance(d, Not):
            return {(1 - x[0],): one}
        if isinstance(d, Tensor):
            na = d.a.n_in
            left = self.act(d.a, x[:na])
            if not left:
                return {}
            right = self.act(d.b, x[na:])
            return {ya + yb: ca * cb for ya, ca in left.items() for yb, cb in right.items()}
        if isinstance(d, Compose):
            acc: dict = {}
            for y, c in self.act(d.g, x).items():
                for z, c2 in self.act(d.f, y).items():
                    v = c * c2
                    acc[z] = acc[z] + v if z in acc else v
            return {z: v for z, v in acc.items() if not _is_zero(v)}
        if isinstance(d, Dagger):
            # <y|D^dag|x> = conj(<x|D|y>)
            out = {}
            for y in product((0, 1), repeat=d.d.n_in):
                v = self.act(d.d, y).get(x)
                if v is not None and not _is_zero(v):
                    out[y] = v.conjugate()
            return out
        raise TypeError(f"unknown diagram node {d!r}")


def _is_zero(v) -> bool:
    if isinstance(v, CycloNumber):
        return v.is_zero()
    return v == 0


def required_level(d: Diagram) -> int:
    lvl = 0
    for x in iter_nodes(d):
        if isinstance(x, (H, Scalar)):
            lvl = max(lvl, x.param.level())
    return lvl


def _columns(d: Diagram, engine: _Engine):
    for c, x in enumerate(product((0, 1), repeat=d.n_in)):
        yield c, engine.act(d, x)


def _row_index(bits: tuple) -> int:
    r = 0
    for b in bits:
        r = (r << 1) | b
    return r


def zh_interp(d: Diagram, K: int | None = None) -> SopMatrix:
    """Exact standard interpretation over Z[1/2][exp(i pi / 2**K)]."""
    need = required_level(d)
    if K is None:
        K = need
    elif K < need:
        raise LevelTooSmall(f"diagram needs level {need}, got {K}")
    engine = _Engine(lambda p: p.to_cyclo(K), CycloNumber.one(K))
    entries = {}
    for c, col in _columns(d, engine):
        for bits, v in col.items():
            if not v.is_zero():
                entries[(_row_index(bits), c)] = v
    return SopMatrix.from_entries(1 << d.n_out, 1 << d.n_in, entries, level=K).lift(K)


def zh_interp_float(d: Diagram) -> np.ndarray:
    engine = _Engine(lambda p: p.to_complex(), 1 + 0j)
    out = np.zeros((1 << d.n_out, 1 << d.n_in), dtype=complex)
    for c, col in _columns(d, engine):
        for bits, v in col.items():
            out[_row_index(bits), c] += v
    return out


# ------------------------------------------------------------ serialization


def diagram_to_json(d: Diagram) -> dict:
    if isinstance(d, Z):
        return {"type": "Z", "n": d.n, "m": d.m}
    if isinstance(d, H):
        return {"type": "H", "n": d.n, "m": d.m, "param": param_to_json(d.param)}
    if isinstance(d, Swap):
        return {"type": "swap", "n": d.n, "m": d.m}
    if isinstance(d, (Cup, Cap, Id)):
        return {"type": type(d).__name__.lower(), "n": d.n}
    if isinstance(d, Scalar):
        return {"type": "scalar", "param": param_to_json(d.param)}
    if isinstance(d, Compose):
        return {"type": "compose", "f": diagram_to_json(d.f), "g": diagram_to_json(d.g)}
    if isinstance(d, Tensor):
        return {"type": "tensor", "a": diagram_to_json(d.a), "b": diagram_to_json(d.b)}
    if isinstance(d, Dagger):
        return {"type": "dagger", "d": diagram_to_json(d.d)}
    if isinstance(d, (And, Xor, Copy)):
        return {"type": type(d).__name__.lower(), "s": d.s}
    if isinstance(d, Not):
        return {"type": "not"}
    if isinstance(d, Perm):
        return {"type": "perm", "perm": list(d.perm)}
    raise TypeError(f"unknown diagram node {d!r}")


def diagram_from_json(j: dict) -> Diagram:
    t = j["type"]
    if t == "Z":
        return Z(j["n"], j["m"])
    if t == "H":
        p = param_from_json(j["param"]) if "param" in j else MINUS_ONE
        return H(j["n"], j["m"], p)
    if t == "swap":
        return Swap(j.get("n", 1), j.get("m", 1))
    if t in ("cup", "cap", "id"):
        return {"cup": Cup, "cap": Cap, "id": Id}[t](j.get("n", 1))
    if t == "scalar":
        return Scalar(param_from_json(j["param"]))
    if t == "compose":
        if "parts" in j:
            return compose(*[diagram_from_json(p) for p in j["parts"]])
        return Compose(diagram_from_json(j["f"]), diagram_from_json(j["g"]))
    if t == "tensor":
        if "parts" in j:
            return tensor(*[diagram_from_json(p) for p in j["parts"]])
        return Tensor(diagram_from_json(j["a"]), diagram_from_json(j["b"]))
    if t == "dagger":
        return Dagger(diagram_from_json(j["d"]))
    if t in ("and", "xor", "copy"):
        return {"and": And, "xor": Xor, "copy": Copy}[t](j["s"])
    if t == "not":
        return Not()
    if t == "perm":
        return Perm(tuple(j["perm"]))
    raise ValueError(f"unknown diagram node type {t!r}")


def dumps(d: Diagram) -> str:
    return json.dumps(diagram_to_json(d))


def loads(text: str) -> Diagram:
    return diagram_from_json(json.loads(text))


# ------------------------------------------------------------ DOT export


def _label(x: Diagram) -> tuple[str, str]:
    if isinstance(x, Z):
        return "", 'shape=circle, style=filled, fillcolor=white, width=0.25'
    if isinstance(x, H):
        lab = "" if x.param == MINUS_ONE else _param_text(x.param)
        return lab, "shape=square, style=filled, fillcolor=yellow, width=0.25"
    if isinstance(x, Scalar):
        return _param_text(x.param), "shape=square, style=filled, fillcolor=yellow"
    if isinstance(x, (And, Xor)):
        return type(x).__name__, "shape=triangle"
    return type(x).__name__, "shape=box"


def _param_text(p: HParam) -> str:
    if isinstance(p, ExactPhase):
        return f"e^(i*pi*{p.num}/2^{p.log})"
    if isinstance(p, ExactReal):
        return f"{p.num}*2^({p.halfpow}/2)"
    return f"{p.value:.4g}"


def to_dot(d: Diagram) -> str:
    """Render the wiring of ``d`` as a Graphviz graph (identities, swaps and
    permutations become plain wires)."""
    parent: dict = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    counter = [0]
    ends: dict = {}  # wire id -> list of node ids attached
    nodes: list = []

    def wire():
        counter[0] += 1
        return counter[0]

    def build(x):
        if isinstance(x, Compose):
            gi, go = build(x.g)
            fi, fo = build(x.f)
            for a, b in zip(fi, go):
                union(a, b)
            return gi, fo
        if isinstance(x, Tensor):
            ai, ao = build(x.a)
            bi, bo = build(x.b)
            return ai + bi, ao + bo
        if isinstance(x, Id):
            ws = [wire() for _ in range(x.n)]
            return ws, list(ws)
        if isinstance(x, (Swap, Perm)):
            ws = [wire() for _ in range(x.n_in)]
            perm = x.perm if isinstance(x, Perm) else tuple(range(x.n, x.n + x.m)) + tuple(range(x.n))
            return ws, [ws[i] for i in perm]
        nid = f"n{len(nodes)}"
        nodes.append((nid, x))
        ins = [wire() for _ in range(x.n_in)]
        outs = [wire() for _ in range(x.n_out)]
        for w in ins + outs:
            ends.setdefault(w, []).append(nid)
        return ins, outs

    ins, outs = build(d)
    lines = ["graph zh {", "  rankdir=TB;"]
    for i, w in enumerate(ins):
        lines.append(f'  in{i} [label="in{i}", shape=plaintext];')
        ends.setdefault(w, []).append(f"in{i}")
    for j, w in enumerate(outs):
        lines.append(f'  out{j} [label="out{j}", shape=plaintext];')
        ends.setdefault(w, []).append(f"out{j}")
    for nid, x in nodes:
        lab, style = _label(x)
        lines.append(f'  {nid} [label="{lab}", {style}];')
    classes: dict = {}
    for w, attached in ends.items():
        classes.setdefault(find(w), []).extend(attached)
    for attached in classes.values():
        for a, b in zip(attached, attached[1:]):
            lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
