"""A small circuit language, its SOP semantics and equivalence checking.

The format is line oriented::

    qubits 3          # header
    h 0
    tof 0 1 2
    rz 1 3 0          # phase p*pi/2^k on qubit q: rz p k q

Qubit 0 is the most significant bit of a basis index, as for terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cyclo import CycloNumber, SopMatrix
from .errors import CircuitSyntaxError, IndexOutOfRange, StepLimitExceeded, WidthMismatch
from .polyalg import BoolPoly, PhasePoly
from .rewrite import RewriteStep, Strategy, is_identity_form, reduce
from .term import SopTerm, compose, dagger, identity

# name -> (number of qubits, number of integer parameters)
GATES = {
    "h": (1, 0), "x": (1, 0), "z": (1, 0), "s": (1, 0), "sdg": (1, 0),
    "t": (1, 0), "tdg": (1, 0), "cz": (2, 0), "cnot": (2, 0), "ccz": (3, 0),
    "tof": (3, 0), "swap": (2, 0), "rz": (1, 2),
}
_ALIASES = {"cx": "cnot", "ccx": "tof", "toffoli": "tof"}

# diagonal single-qubit phases as turns (the exponent of e^(2 i pi .))
_PHASES = {"z": Fraction(1, 2), "s": Fraction(1, 4), "sdg": Fraction(3, 4),
           "t": Fraction(1, 8), "tdg": Fraction(7, 8)}

DEFAULT_ORACLE_CAP = 10


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple
    params: tuple = ()

    def __str__(self) -> str:
        return " ".join([self.name, *map(str, self.params), *map(str, self.qubits)])

    def turns(self) -> Fraction | None:
        """Phase of the |1> component in turns for diagonal one-qubit gates."""
        if self.name in _PHASES:
            return _PHASES[self.name]
        if self.name == "rz":
            p, k = self.params
            return Fraction(p, 1 << (k + 1)) % 1
        return None


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple = field(default=())

    def __str__(self) -> str:
        return print_circuit(self)


def gate(name: str, *args: int) -> Gate:
    name = _ALIASES.get(name, name)
    nq, npar = GATES[name]
    if len(args) != nq + npar:
        raise ValueError(f"{name} takes {nq + npar} arguments")
    return Gate(name, tuple(args[npar:]), tuple(args[:npar]))


def parse_circuit(text: str) -> Circuit:
    """Parse the DSL.  Without a ``qubits`` header the width is inferred."""
    width = None
    gates = []
    header_line = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        words = []
        col = 0
        for w in line.split():
            col = line.index(w, col)
            words.append((w, col + 1))
            col += len(w)
        if not words:
            continue
        head, hcol = words[0]
        head = head.lower()
        if head == "qubits":
            if width is not None or gates:
                raise CircuitSyntaxError("the qubits header must come first, once", lineno, hcol)
            if len(words) != 2:
                raise CircuitSyntaxError("expected: qubits N", lineno, hcol)
            width = _int(words[1], lineno)
            if width < 0:
                raise CircuitSyntaxError("negative width", lineno, words[1][1])
            header_line = lineno
            continue
        name = _ALIASES.get(head, head)
        if name not in GATES:
            raise CircuitSyntaxError(f"unknown gate {head!r}", lineno, hcol)
        nq, npar = GATES[name]
        args = words[1:]
        if len(args) != nq + npar:
            raise CircuitSyntaxError(
                f"{name} takes {nq + npar} arguments, got {len(args)}", lineno, hcol
            )
        vals = [_int(a, lineno) for a in args]
        params, qubits = vals[:npar], vals[npar:]
        if name == "rz" and params[1] < 0:
            raise CircuitSyntaxError("rz level must be >= 0", lineno, args[1][1])
        for q, (_, c) in zip(qubits, args[npar:]):
            if q < 0:
                raise IndexOutOfRange(f"negative qubit index {q}", lineno, c)
            if width is not None and q >= width:
                raise IndexOutOfRange(f"qubit {q} out of range for width {width}", lineno, c)
        if len(set(qubits)) != len(qubits):
            raise CircuitSyntaxError("repeated qubit in one gate", lineno, hcol)
        gates.append(Gate(name, tuple(qubits), tuple(params)))
    if width is None:
        width = 1 + max((q for g in gates for q in g.qubits), default=-1)
    del header_line
    return Circuit(width, tuple(gates))


def _int(word, lineno) -> int:
    w, col = word
    try:
        return int(w)
    except ValueError:
        raise CircuitSyntaxError(f"expected an integer, got {w!r}", lineno, col) from None


def print_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.width}"] + [str(g) for g in c.gates]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ SOP semantics


def gate_term(g: Gate, width: int) -> SopTerm:
    """The gate acting on ``width`` wires; wire i carries variable i."""
    ys = [BoolPoly.var(i) for i in range(width)]
    outs = list(ys)
    vs = list(range(width))
    phase = PhasePoly()
    halfpow = 0
    q = g.qubits
    name = g.name
    if name == "h":
        y = width
        vs.append(y)
        phase = PhasePoly({frozenset([q[0], y]): Fraction(1, 2)})
        outs[q[0]] = BoolPoly.var(y)
        halfpow = -1
    elif name == "x":
        outs[q[0]] = ys[q[0]] ^ BoolPoly.one()
    elif name in ("cnot",):
        outs[q[1]] = ys[q[1]] ^ ys[q[0]]
    elif name == "tof":
        outs[q[2]] = ys[q[2]] ^ (ys[q[0]] * ys[q[1]])
    elif name == "swap":
        outs[q[0]], outs[q[1]] = ys[q[1]], ys[q[0]]
    elif name in ("cz", "ccz"):
        phase = PhasePoly({frozenset(q): Fraction(1, 2)})
    else:
        phase = PhasePoly({frozenset([q[0]]): g.turns()})
    return SopTerm(halfpow, tuple(vs), phase, tuple(outs), tuple(ys))


def circuit_to_sop(c: Circuit | str) -> SopTerm:
    if isinstance(c, str):
        c = parse_circuit(c)
    acc = identity(c.width)
    if not c.gates:
        return acc
    acc = gate_term(c.gates[0], c.width)
    for g in c.gates[1:]:
        acc = compose(gate_term(g, c.width), acc)
    return acc


# ------------------------------------------------------------ matrix oracle


def _circuit_level(c: Circuit) -> int:
    lvl = 0
    for g in c.gates:
        t = g.turns()
        if t:
            lvl = max(lvl, t.denominator.bit_length() - 2)
    return lvl


def _rotate(a: np.ndarray, j: int) -> np.ndarray:
    # multiply by w**j on the last axis, w**N = -1
    n = a.shape[-1]
    j %= 2 * n
    sign = 1
    if j >= n:
        j -= n
        sign = -1
    if j == 0:
        return sign * a
    return sign * np.concatenate([-a[..., n - j:], a[..., : n - j]], axis=-1)


def circuit_matrix(c: Circuit | str, level: int | None = None) -> SopMatrix:
    """Exact unitary by applying each gate to the rows of the identity."""
    if isinstance(c, str):
        c = parse_circuit(c)
    n = c.width
    K = _circuit_level(c) if level is None else level
    N = 1 << K
    dim = 1 << n
    data = np.zeros((dim, dim, N), dtype=np.int64)
    data[np.arange(dim), np.arange(dim), 0] = 1
    hs = 0
    rows = np.arange(dim)

    def bit(q):
        return (rows >> (n - 1 - q)) & 1

    for g in c.gates:
        q = g.qubits
        name = g.name
        if name == "h":
            m = 1 << (n - 1 - q[0])
            lo = rows[bit(q[0]) == 0]
            a, b = data[lo], data[lo | m]
            data[lo], data[lo | m] = a + b, a - b
            hs += 1
            if np.abs(data).max() > 1 << 60:
                # regain headroom; the matrix comes out exactly halved
                if (data % 2).any():
                    data = data.astype(object)
                else:
                    data //= 2
                    hs -= 2
        elif name in ("x", "cnot", "tof", "swap"):
            src = rows.copy()
            if name == "x":
                src ^= 1 << (n - 1 - q[0])
            elif name == "cnot":
                src ^= bit(q[0]) << (n - 1 - q[1])
            elif name == "tof":
                src ^= (bit(q[0]) & bit(q[1])) << (n - 1 - q[2])
            else:
                a, b = bit(q[0]), bit(q[1])
                src ^= ((a ^ b) << (n - 1 - q[0])) | ((a ^ b) << (n - 1 - q[1]))
            data = data[src]
        else:
            if name in ("cz", "ccz"):
                hit = np.ones(dim, dtype=bool)
                for x in q:
                    hit &= bit(x) == 1
                turns = Fraction(1, 2)
            else:
                hit = bit(q[0]) == 1
                turns = g.turns()
            j = turns * 2 * N
            assert j.denominator == 1, "level too small for the circuit"
            data[hit] = _rotate(data[hit], int(j))
    mat = SopMatrix(K, data)
    if hs:
        mat = mat.scale(CycloNumber.pow_sqrt2(-hs, max(K, 2) if hs % 2 else K))
    return mat


# ------------------------------------------------------------ verification


VERIFIED_BY_REWRITE = "verified-by-rewrite"
VERIFIED_BY_ORACLE = "verified-by-oracle"
REFUTED_BY_ORACLE = "refuted-by-oracle"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Witness:
    row: int
    col: int
    left: CycloNumber
    right: CycloNumber

    def __str__(self) -> str:
        return (
            f"<{self.row}|C1|{self.col}> = {complex(self.left):.6g}, "
            f"<{self.row}|C2|{self.col}> = {complex(self.right):.6g}"
        )


@dataclass
class Verdict:
    status: str
    witness: Witness | None = None
    reduced: SopTerm | None = None
    trace: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.status in (VERIFIED_BY_REWRITE, VERIFIED_BY_ORACLE)

    @property
    def exit_code(self) -> int:
        if self.verified:
            return 0
        return 1 if self.status == REFUTED_BY_ORACLE else 2


def miter(c1: Circuit, c2: Circuit) -> SopTerm:
    """dagger(C2) o C1, which is the identity iff the circuits agree."""
    if c1.width != c2.width:
        raise WidthMismatch(f"widths differ: {c1.width} vs {c2.width}")
    return compose(dagger(circuit_to_sop(c2)), circuit_to_sop(c1))


def verify(
    c1: Circuit | str,
    c2: Circuit | str,
    strategy: Strategy | None = None,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> Verdict:
    if isinstance(c1, str):
        c1 = parse_circuit(c1)
    if isinstance(c2, str):
        c2 = parse_circuit(c2)
    t = miter(c1, c2)
    try:
        red, steps = reduce(t, strategy)
    except StepLimitExceeded as exc:
        red, steps = exc.term, exc.trace
    summary = [str(s) for s in steps]
    if is_identity_form(red):
        return Verdict(VERIFIED_BY_REWRITE, None, red, summary)
    if c1.width > oracle_cap:
        return Verdict(INCONCLUSIVE, None, red, summary)
    K = max(_circuit_level(c1), _circuit_level(c2))
    m1, m2 = circuit_matrix(c1, K), circuit_matrix(c2, K)
    for r, c in m1.differences(m2):
        return Verdict(REFUTED_BY_ORACLE, Witness(r, c, m1[r, c], m2[r, c]), red, summary)
    return Verdict(VERIFIED_BY_ORACLE, None, red, summary)


def trace_json(steps: list[RewriteStep]) -> list:
    return [s.to_json() for s in steps]
