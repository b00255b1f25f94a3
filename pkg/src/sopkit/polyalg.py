"""Boolean multilinear polynomials over F2 and dyadic phase polynomials.

Variables are plain non-negative integers; ``y3`` in textual form is the
variable ``3``.  A monomial is a ``frozenset`` of variables, the empty set
being the constant monomial ``1``.  Every class here is immutable.

Phase coefficients are :class:`fractions.Fraction` values with a power of two
denominator, always kept in ``[0, 1)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Monomial = frozenset

ONE_MONO: frozenset = frozenset()


def mono_key(m: frozenset) -> tuple:
    """Graded lexicographic sort key on sorted variable ids."""
    return (len(m), tuple(sorted(m)))


def format_mono(m: frozenset) -> str:
    if not m:
        return "1"
    return "*".join(f"y{v}" for v in sorted(m))


def parse_mono(text: str) -> frozenset:
    text = text.strip()
    if text == "1":
        return ONE_MONO
    vs = []
    for factor in text.split("*"):
        factor = factor.strip()
        if not re.fullmatch(r"y\d+", factor):
            raise ValueError(f"bad monomial factor {factor!r}")
        vs.append(int(factor[1:]))
    return frozenset(vs)


def is_dyadic(c: Fraction) -> bool:
    d = c.denominator
    return d & (d - 1) == 0


def denom_log(c: Fraction) -> int:
    """Exponent n such that the reduced denominator of ``c`` is 2**n."""
    if not is_dyadic(c):
        raise ValueError(f"{c} is not dyadic")
    return c.denominator.bit_length() - 1


def dyadic(num: int, log: int = 0) -> Fraction:
    """The value ``num / 2**log`` reduced into [0, 1)."""
    return Fraction(num, 1 << log) % 1


# ---------------------------------------------------------------- BoolPoly


class BoolPoly:
    """XOR-sum of monomials, kept canonical (duplicate monomials cancel)."""

    __slots__ = ("_monos", "_hash")

    def __init__(self, monomials: Iterable[Iterable[int]] = ()):
        acc: set = set()
        for m in monomials:
            acc ^= {frozenset(m)}
        self._monos = frozenset(acc)
        self._hash = None

    @classmethod
    def _raw(cls, monos: frozenset) -> "BoolPoly":
        p = cls.__new__(cls)
        p._monos = monos
        p._hash = None
        return p

    @classmethod
    def var(cls, v: int) -> "BoolPoly":
        return cls._raw(frozenset([frozenset([v])]))

    @classmethod
    def one(cls) -> "BoolPoly":
        return cls._raw(frozenset([ONE_MONO]))

    @classmethod
    def zero(cls) -> "BoolPoly":
        return cls._raw(frozenset())

    @classmethod
    def const(cls, bit: int) -> "BoolPoly":
        return cls.one() if bit & 1 else cls.zero()

    @property
    def monomials(self) -> frozenset:
        return self._monos

    def sorted_monomials(self) -> list:
        return sorted(self._monos, key=mono_key)

    def is_zero(self) -> bool:
        return not self._monos

    def is_var(self) -> bool:
        if len(self._monos) != 1:
            return False
        (m,) = self._monos
        return len(m) == 1

    def as_var(self):
        """The variable if this polynomial is a single bare variable, else None."""
        if self.is_var():
            (m,) = self._monos
            (v,) = m
            return v
        return None

    def vars(self) -> frozenset:
        out: set = set()
        for m in self._monos:
            out |= m
        return frozenset(out)

    def __contains__(self, mono) -> bool:
        return frozenset(mono) in self._monos

    def __len__(self) -> int:
        return len(self._monos)

    def __iter__(self) -> Iterator[frozenset]:
        return iter(self.sorted_monomials())

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == BoolPoly.const(other) if other in (0, 1) else False
        return isinstance(other, BoolPoly) and self._monos == other._monos

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._monos)
        return self._hash

    def __xor__(self, other: "BoolPoly") -> "BoolPoly":
        return BoolPoly._raw(self._monos ^ other._monos)

    __add__ = __xor__

    def __mul__(self, other: "BoolPoly") -> "BoolPoly":
        acc: set = set()
        for a in self._monos:
            for b in other._monos:
                acc ^= {a | b}
        return BoolPoly._raw(frozenset(acc))

    def subst(self, v: int, r: "BoolPoly") -> "BoolPoly":
        """Replace every occurrence of ``v`` by ``r`` (simultaneously)."""
        keep: set = set()
        hit: set = set()
        for m in self._monos:
            if v in m:
                hit ^= {m - {v}}
            else:
                keep ^= {m}
        if not hit:
            return self
        return BoolPoly._raw(frozenset(keep)) ^ (BoolPoly._raw(frozenset(hit)) * r)

    def rename(self, mapping: Mapping[int, int]) -> "BoolPoly":
        return BoolPoly._raw(
            frozenset(frozenset(mapping[v] for v in m) for m in self._monos)
        )

    def evaluate(self, assignment: Mapping[int, int]) -> int:
        bit = 0
        for m in self._monos:
            if all(assignment[v] for v in m):
                bit ^= 1
        return bit

    def __str__(self) -> str:
        if not self._monos:
            return "0"
        return " + ".join(format_mono(m) for m in self.sorted_monomials())

    def __repr__(self) -> str:
        return f"BoolPoly({self})"

    @classmethod
    def parse(cls, text: str) -> "BoolPoly":
        text = text.strip()
        if text == "0":
            return cls.zero()
        return cls(parse_mono(part) for part in text.split("+"))

    def to_json(self) -> list:
        return [sorted(m) for m in self.sorted_monomials()]

    @classmethod
    def from_json(cls, data) -> "BoolPoly":
        return cls(data)


def bool_xor(a: BoolPoly, b: BoolPoly) -> BoolPoly:
    return a ^ b


def bool_mul(a: BoolPoly, b: BoolPoly) -> BoolPoly:
    return a * b


def bool_subst(p: BoolPoly, v: int, r: BoolPoly) -> BoolPoly:
    return p.subst(v, r)


# ---------------------------------------------------------------- IntPoly


class IntPoly:
    """Multilinear polynomial with signed integer coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for m, c in items:
            m = frozenset(m)
            acc[m] = acc.get(m, 0) + c
        self._terms = {m: c for m, c in acc.items() if c}

    @classmethod
    def _raw(cls, terms: dict) -> "IntPoly":
        p = cls.__new__(cls)
        p._terms = terms
        return p

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: mono_key(kv[0]))

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "IntPoly") -> "IntPoly":
        acc = dict(self._terms)
        for m, c in other._terms.items():
            s = acc.get(m, 0) + c
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        return IntPoly._raw(acc)

    def __neg__(self) -> "IntPoly":
        return IntPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly._raw({m: c * other for m, c in self._terms.items()} if other else {})
        acc: dict = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                m = a | b
                acc[m] = acc.get(m, 0) + ca * cb
        return IntPoly._raw({m: c for m, c in acc.items() if c})

    __rmul__ = __mul__

    def evaluate(self, assignment: Mapping[int, int]) -> int:
        return sum(c for m, c in self._terms.items() if all(assignment[v] for v in m))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items():
            parts.append(f"{c}" if not m else f"{c}*{format_mono(m)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"IntPoly({self})"


def hat_lift(q: BoolPoly, mod_log: int | None = None) -> IntPoly:
    """Lift a boolean polynomial to an integer one agreeing on 0/1 inputs.

    Uses ``hat(a + b) = hat(a) + hat(b) - 2 hat(a) hat(b)``.  When
    ``mod_log`` is given the result is only correct modulo ``2**mod_log``;
    products of more than ``mod_log`` XOR-ed monomials carry a factor
    ``2**mod_log`` and are skipped, which keeps the lift polynomial in size.
    """
    monos = q.sorted_monomials()
    if mod_log is None:
        acc: dict = {}
        for m in monos:
            # acc <- acc + m - 2 * acc * m
            new = dict(acc)
            new[m] = new.get(m, 0) + 1
            for a, c in acc.items():
                u = a | m
                new[u] = new.get(u, 0) - 2 * c
            acc = {k: c for k, c in new.items() if c}
        return IntPoly._raw(acc)
    if mod_log <= 0:
        return IntPoly()
    modulus = 1 << mod_log
    # keep subset products grouped by subset size
    layers: list[dict] = [dict() for _ in range(mod_log)]
    for m in monos:
        for size in range(mod_log - 1, 0, -1):
            src = layers[size - 1]
            if not src:
                continue
            dst = layers[size]
            for a, c in src.items():
                u = a | m
                dst[u] = dst.get(u, 0) + c
        layers[0][m] = layers[0].get(m, 0) + 1
    acc = {}
    for size, layer in enumerate(layers):
        weight = (-2) ** size
        for m, c in layer.items():
            acc[m] = acc.get(m, 0) + weight * c
    return IntPoly._raw({m: c % modulus for m, c in acc.items() if c % modulus})


# ---------------------------------------------------------------- PhasePoly


class PhasePoly:
    """Multilinear polynomial with dyadic coefficients taken modulo 1."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for m, c in items:
            c = Fraction(c)
            if not is_dyadic(c):
                raise ValueError(f"phase coefficient {c} is not dyadic")
            m = frozenset(m)
            acc[m] = (acc.get(m, 0) + c) % 1
        self._terms = {m: c for m, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "PhasePoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def get(self, mono, default=0):
        return self._terms.get(frozenset(mono), default)

    def items(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: mono_key(kv[0]))

    def monomials(self) -> list:
        return sorted(self._terms, key=mono_key)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def vars(self) -> frozenset:
        out: set = set()
        for m in self._terms:
            out |= m
        return frozenset(out)

    def level(self) -> int:
        """Smallest n with every coefficient a multiple of 1/2**n."""
        return max((denom_log(c) for c in self._terms.values()), default=0)

    def __eq__(self, other) -> bool:
        return isinstance(other, PhasePoly) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "PhasePoly") -> "PhasePoly":
        acc = dict(self._terms)
        for m, c in other._terms.items():
            s = (acc.get(m, 0) + c) % 1
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        return PhasePoly._raw(acc)

    def __neg__(self) -> "PhasePoly":
        return PhasePoly._raw({m: (-c) % 1 for m, c in self._terms.items()})

    def __sub__(self, other: "PhasePoly") -> "PhasePoly":
        return self + (-other)

    def split(self, v: int) -> tuple["PhasePoly", "PhasePoly"]:
        """Return ``(cof, rest)`` with ``self == v*cof + rest``, ``v`` absent from both."""
        cof: dict = {}
        rest: dict = {}
        for m, c in self._terms.items():
            if v in m:
                cof[m - {v}] = c
            else:
                rest[m] = c
        return PhasePoly._raw(cof), PhasePoly._raw(rest)

    def times_var(self, v: int) -> "PhasePoly":
        acc: dict = {}
        for m, c in self._terms.items():
            u = m | {v}
            s = (acc.get(u, 0) + c) % 1
            if s:
                acc[u] = s
            else:
                acc.pop(u, None)
        return PhasePoly._raw(acc)

    def subst(self, v: int, r: BoolPoly) -> "PhasePoly":
        return phase_subst(self, v, r)

    def rename(self, mapping: Mapping[int, int]) -> "PhasePoly":
        return PhasePoly._raw(
            {frozenset(mapping[x] for x in m): c for m, c in self._terms.items()}
        )

    def evaluate(self, assignment: Mapping[int, int]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            if all(assignment[x] for x in m):
                total += c
        return total % 1

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items():
            parts.append(f"{c.numerator}/2^{denom_log(c)} * {format_mono(m)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PhasePoly({self})"

    @classmethod
    def parse(cls, text: str) -> "PhasePoly":
        text = text.strip()
        if text == "0":
            return cls()
        items = []
        for part in text.split("+"):
            coef, _, mono = part.partition("*")
            coef = coef.strip()
            m = parse_mono(mono) if mono.strip() else frozenset()
            if "/2^" in coef:
                num, _, den = coef.partition("/2^")
                items.append((m, Fraction(int(num), 1 << int(den))))
            else:
                items.append((m, Fraction(coef)))
        return cls(items)

    def to_json(self) -> list:
        return [
            {"mono": sorted(m), "num": c.numerator, "denomLog": denom_log(c)}
            for m, c in self.items()
        ]

    @classmethod
    def from_json(cls, data) -> "PhasePoly":
        return cls((d["mono"], Fraction(d["num"], 1 << d["denomLog"])) for d in data)


def phase_scale_reduce(c, p: IntPoly) -> PhasePoly:
    """Multiply ``p`` by the dyadic ``c`` and reduce every coefficient mod 1."""
    c = Fraction(c)
    if not is_dyadic(c):
        raise ValueError(f"scale {c} is not dyadic")
    if not c:
        return PhasePoly()
    return PhasePoly._raw(
        {m: v for m, k in p._terms.items() if (v := (c * k) % 1)}
    )


def phase_subst(p: PhasePoly, v: int, r: BoolPoly) -> PhasePoly:
    """Substitute the boolean polynomial ``r`` for ``v`` inside a phase."""
    cof, rest = p.split(v)
    if not cof:
        return p
    if r.as_var() == v:
        return p
    lifted = hat_lift(r, mod_log=cof.level())
    out = rest
    for m, c in cof._terms.items():
        # exact integer expansion of m * hat(r) before the mod-1 reduction
        shifted = IntPoly((u | m, k) for u, k in lifted._terms.items())
        out = out + phase_scale_reduce(c, shifted)
    return out


def phase_add(a: PhasePoly, b: PhasePoly) -> PhasePoly:
    return a + b


def phase_negate(a: PhasePoly) -> PhasePoly:
    return -a


def half_poly(q: BoolPoly) -> PhasePoly:
    """The phase ``hat(q)/2``, i.e. coefficient 1/2 on every monomial of ``q``."""
    half = Fraction(1, 2)
    return PhasePoly._raw({m: half for m in q.monomials})
