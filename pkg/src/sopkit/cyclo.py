"""Exact arithmetic in Z[1/2][w] with w = exp(i*pi/2**K), and matrices over it.

An element is stored as an integer coefficient vector ``c`` of length
``N = 2**K`` together with a denominator exponent ``e``:

    value = (c[0] + c[1] w + ... + c[N-1] w**(N-1)) / 2**e,    w**N = -1.

Products are negacyclic convolutions.  Values at different levels compare
equal when they agree after lifting to the larger level (``w_K = w_{K+1}**2``).
"""

from __future__ import annotations

import cmath
from fractions import Fraction

import numpy as np

from .errors import WrongRing

_INT64_SAFE = 1 << 62


def _normalize(coeffs, e):
    coeffs = list(coeffs)
    if not any(coeffs):
        return tuple(coeffs), 0
    while e > 0 and all(c % 2 == 0 for c in coeffs):
        coeffs = [c // 2 for c in coeffs]
        e -= 1
    return tuple(coeffs), e


class CycloNumber:
    """Immutable element of Z[1/2, exp(i*pi/2**level)]."""

    __slots__ = ("level", "coeffs", "e")

    def __init__(self, level: int, coeffs, e: int = 0):
        n = 1 << level
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != n:
            raise ValueError(f"expected {n} coefficients, got {len(coeffs)}")
        self.level = level
        self.coeffs, self.e = _normalize(coeffs, e)

    # -- constructors
    @classmethod
    def zero(cls, level: int = 0) -> "CycloNumber":
        return cls(level, [0] * (1 << level))

    @classmethod
    def one(cls, level: int = 0) -> "CycloNumber":
        return cls.from_dyadic(1, level)

    @classmethod
    def from_dyadic(cls, value, level: int = 0) -> "CycloNumber":
        value = Fraction(value)
        d = value.denominator
        if d & (d - 1):
            raise ValueError(f"{value} is not dyadic")
        c = [0] * (1 << level)
        c[0] = value.numerator
        return cls(level, c, d.bit_length() - 1)

    @classmethod
    def root(cls, level: int, power: int) -> "CycloNumber":
        """``w**power`` for ``w = exp(i*pi/2**level)``."""
        n = 1 << level
        power %= 2 * n
        c = [0] * n
        if power < n:
            c[power] = 1
        else:
            c[power - n] = -1
        return cls(level, c)

    @classmethod
    def phase(cls, frac, level: int) -> "CycloNumber":
        """``exp(2*i*pi*frac)`` for a dyadic ``frac``; needs level >= log2(denominator) - 1."""
        frac = Fraction(frac) % 1
        power = frac * (2 << level)
        if power.denominator != 1:
            raise WrongRing(f"exp(2i*pi*{frac}) is not in level {level}")
        return cls.root(level, int(power))

    @classmethod
    def sqrt2(cls, level: int = 2) -> "CycloNumber":
        if level < 2:
            raise WrongRing("sqrt(2) needs level >= 2")
        n = 1 << level
        # sqrt2 = w**(N/4) + w**(-N/4) = w**(N/4) - w**(3N/4)
        c = [0] * n
        c[n // 4] += 1
        c[3 * n // 4] -= 1
        return cls(level, c)

    @classmethod
    def pow_sqrt2(cls, halfpow: int, level: int = 0) -> "CycloNumber":
        """``2**(halfpow/2)``."""
        whole, odd = divmod(halfpow, 2)
        base = cls.sqrt2(max(level, 2)) if odd else cls.one(level)
        if whole >= 0:
            return base * cls.from_dyadic(1 << whole, base.level)
        return base * cls.from_dyadic(Fraction(1, 1 << -whole), base.level)

    # -- level handling
    def lift(self, level: int) -> "CycloNumber":
        if level == self.level:
            return self
        if level < self.level:
            return self.lower(level)
        step = 1 << (level - self.level)
        c = [0] * (1 << level)
        for j, v in enumerate(self.coeffs):
            c[j * step] = v
        return CycloNumber(level, c, self.e)

    def lower(self, level: int) -> "CycloNumber":
        if level >= self.level:
            return self.lift(level)
        step = 1 << (self.level - level)
        if any(v for j, v in enumerate(self.coeffs) if j % step):
            raise WrongRing(f"value does not lie in level {level}")
        return CycloNumber(level, self.coeffs[::step], self.e)

    def min_level(self) -> int:
        lvl = self.level
        x = self
        while lvl > 0:
            try:
                x = x.lower(lvl - 1)
            except WrongRing:
                break
            lvl -= 1
        return lvl

    def _align(self, other):
        if not isinstance(other, CycloNumber):
            other = CycloNumber.from_dyadic(other, self.level)
        level = max(self.level, other.level)
        a, b = self.lift(level), other.lift(level)
        e = max(a.e, b.e)
        ca = [v << (e - a.e) for v in a.coeffs]
        cb = [v << (e - b.e) for v in b.coeffs]
        return level, e, ca, cb

    # -- arithmetic
    def __add__(self, other) -> "CycloNumber":
        level, e, ca, cb = self._align(other)
        return CycloNumber(level, [x + y for x, y in zip(ca, cb)], e)

    __radd__ = __add__

    def __neg__(self) -> "CycloNumber":
        return CycloNumber(self.level, [-v for v in self.coeffs], self.e)

    def __sub__(self, other) -> "CycloNumber":
        return self + (-other if isinstance(other, CycloNumber) else -Fraction(other))

    def __mul__(self, other) -> "CycloNumber":
        if not isinstance(other, CycloNumber):
            other = CycloNumber.from_dyadic(other, self.level)
        level = max(self.level, other.level)
        a, b = self.lift(level), other.lift(level)
        n = 1 << level
        c = [0] * n
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if not y:
                    continue
                k = i + j
                if k < n:
                    c[k] += x * y
                else:
                    c[k - n] -= x * y
        return CycloNumber(level, c, a.e + b.e)

    __rmul__ = __mul__

    def conjugate(self) -> "CycloNumber":
        n = 1 << self.level
        c = [0] * n
        c[0] = self.coeffs[0]
        for j in range(1, n):
            c[n - j] -= self.coeffs[j]
        return CycloNumber(self.level, c, self.e)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.from_dyadic(other, self.level)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        _, _, ca, cb = self._align(other)
        return ca == cb

    def __hash__(self) -> int:
        x = self.lift(self.level)
        lvl = x.min_level()
        y = x.lower(lvl)
        return hash((y.coeffs, y.e))

    def __complex__(self) -> complex:
        n = 1 << self.level
        w = cmath.exp(1j * cmath.pi / n)
        return sum(c * w**j for j, c in enumerate(self.coeffs)) / (1 << self.e)

    def __repr__(self) -> str:
        terms = [f"{c}*w^{j}" for j, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) or "0"
        return f"CycloNumber(K={self.level}, ({body})/2^{self.e})"


def _fold_sign(n):
    """For each pair of exponents (a, b): target index and sign of w**(a+b)."""
    idx = np.empty((n, n), dtype=np.int64)
    sgn = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            k = a + b
            idx[a, b], sgn[a, b] = (k, 1) if k < n else (k - n, -1)
    return idx, sgn


class SopMatrix:
    """Dense matrix with entries in Z[1/2][w], w = exp(i*pi/2**level).

    ``data[r, c, j]`` is the integer coefficient of ``w**j`` in entry (r, c);
    every entry shares the denominator ``2**e``.
    """

    __slots__ = ("level", "data", "e")

    def __init__(self, level: int, data, e: int = 0):
        data = np.asarray(data)
        if data.ndim != 3 or data.shape[2] != 1 << level:
            raise ValueError("data must have shape (rows, cols, 2**level)")
        if data.dtype != object and data.dtype != np.int64:
            data = data.astype(np.int64)
        self.level = level
        self.data, self.e = self._normalized(data, e)

    @staticmethod
    def _normalized(data, e):
        if e > 0 and data.size:
            if not data.any():
                return data, 0
            flat = data.ravel()
            nz = flat[flat != 0]
            shift = 0
            while shift < e and ((nz % (2 << shift)) == 0).all():
                shift += 1
            if shift:
                data = data // (1 << shift)
                e -= shift
        return data, e

    @classmethod
    def zeros(cls, rows: int, cols: int, level: int = 0) -> "SopMatrix":
        return cls(level, np.zeros((rows, cols, 1 << level), dtype=np.int64))

    @classmethod
    def identity(cls, dim: int, level: int = 0) -> "SopMatrix":
        d = np.zeros((dim, dim, 1 << level), dtype=np.int64)
        d[np.arange(dim), np.arange(dim), 0] = 1
        return cls(level, d)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries, level: int | None = None) -> "SopMatrix":
        """Build from a mapping ``(r, c) -> CycloNumber`` (or int/Fraction)."""
        vals = {
            k: v if isinstance(v, CycloNumber) else CycloNumber.from_dyadic(v)
            for k, v in dict(entries).items()
        }
        lvl = max([v.level for v in vals.values()] + [level or 0])
        e = max([v.e for v in vals.values()] + [0])
        data = np.zeros((rows, cols, 1 << lvl), dtype=object)
        data[...] = 0
        for (r, c), v in vals.items():
            v = v.lift(lvl)
            for j, x in enumerate(v.coeffs):
                data[r, c, j] = int(x) << (e - v.e)
        return cls(lvl, _shrink(data), e)

    @classmethod
    def from_rows(cls, rows) -> "SopMatrix":
        rows = [list(r) for r in rows]
        entries = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)}
        return cls.from_entries(len(rows), len(rows[0]) if rows else 0, entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    def __getitem__(self, key) -> CycloNumber:
        r, c = key
        return CycloNumber(self.level, [int(v) for v in self.data[r, c]], self.e)

    def entries(self):
        """Yield ``((r, c), CycloNumber)`` for every non-zero entry."""
        nz = np.argwhere(self.data.any(axis=2))
        for r, c in nz:
            yield (int(r), int(c)), self[int(r), int(c)]

    # -- level / denominator alignment
    def lift(self, level: int) -> "SopMatrix":
        if level == self.level:
            return self
        if level < self.level:
            return self.lower(level)
        step = 1 << (level - self.level)
        rows, cols = self.shape
        d = np.zeros((rows, cols, 1 << level), dtype=self.data.dtype)
        d[:, :, ::step] = self.data
        return SopMatrix(level, d, self.e)

    def lower(self, level: int) -> "SopMatrix":
        if level >= self.level:
            return self.lift(level)
        step = 1 << (self.level - level)
        mask = np.ones(1 << self.level, dtype=bool)
        mask[::step] = False
        if self.data[:, :, mask].any():
            raise WrongRing(f"matrix entries do not lie in level {level}")
        return SopMatrix(level, self.data[:, :, ::step].copy(), self.e)

    def min_level(self) -> int:
        lvl = self.level
        while lvl > 0:
            step = 2
            mask = np.ones(1 << lvl, dtype=bool)
            mask[::step] = False
            if self.lift(lvl).data[:, :, mask].any():
                break
            lvl -= 1
        return lvl

    def _scaled(self, e: int):
        d = self.data
        if e == self.e:
            return d
        return _safe_shift(d, e - self.e)

    def _aligned(self, other: "SopMatrix"):
        level = max(self.level, other.level)
        a, b = self.lift(level), other.lift(level)
        e = max(a.e, b.e)
        return level, e, a._scaled(e), b._scaled(e)

    # -- algebra
    def __add__(self, other: "SopMatrix") -> "SopMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        level, e, a, b = self._aligned(other)
        return SopMatrix(level, _safe_add(a, b), e)

    def __neg__(self) -> "SopMatrix":
        return SopMatrix(self.level, -self.data, self.e)

    def __sub__(self, other: "SopMatrix") -> "SopMatrix":
        return self + (-other)

    def __matmul__(self, other: "SopMatrix") -> "SopMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        level = max(self.level, other.level)
        a, b = self.lift(level).data, other.lift(level).data
        a, b = _common_dtype(a, b, self.shape[1] << level)
        n = 1 << level
        out = np.zeros((self.shape[0], other.shape[1], n), dtype=a.dtype)
        idx, sgn = _fold_sign(n)
        for i in range(n):
            ai = a[:, :, i]
            if not ai.any():
                continue
            for j in range(n):
                bj = b[:, :, j]
                if not bj.any():
                    continue
                out[:, :, idx[i, j]] += sgn[i, j] * (ai @ bj)
        return SopMatrix(level, out, self.e + other.e)

    def kron(self, other: "SopMatrix") -> "SopMatrix":
        level = max(self.level, other.level)
        a, b = self.lift(level).data, other.lift(level).data
        a, b = _common_dtype(a, b, 1 << level)
        n = 1 << level
        r1, c1 = self.shape
        r2, c2 = other.shape
        out = np.zeros((r1 * r2, c1 * c2, n), dtype=a.dtype)
        idx, sgn = _fold_sign(n)
        for i in range(n):
            ai = a[:, :, i]
            if not ai.any():
                continue
            for j in range(n):
                bj = b[:, :, j]
                if not bj.any():
                    continue
                out[:, :, idx[i, j]] += sgn[i, j] * np.kron(ai, bj)
        return SopMatrix(level, out, self.e + other.e)

    def scale(self, x: CycloNumber) -> "SopMatrix":
        if not isinstance(x, CycloNumber):
            x = CycloNumber.from_dyadic(x)
        level = max(self.level, x.level)
        a = self.lift(level).data
        xv = x.lift(level)
        n = 1 << level
        a, _ = _common_dtype(a, a, max(abs(c) for c in xv.coeffs) * n + 1)
        out = np.zeros_like(a)
        for j, c in enumerate(xv.coeffs):
            if not c:
                continue
            # multiplying by w**j rotates the coefficient axis negacyclically
            rolled = np.concatenate([-a[:, :, n - j:], a[:, :, : n - j]], axis=2)
            out = out + c * rolled
        return SopMatrix(level, out, self.e + xv.e)

    def conj_transpose(self) -> "SopMatrix":
        n = 1 << self.level
        d = self.data.transpose(1, 0, 2)
        out = np.zeros_like(d)
        out[:, :, 0] = d[:, :, 0]
        if n > 1:
            out[:, :, 1:] = -d[:, :, :0:-1]
        return SopMatrix(self.level, out, self.e)

    def is_zero(self) -> bool:
        return not self.data.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SopMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        _, _, a, b = self._aligned(other)
        return bool(np.array_equal(a, b))

    __hash__ = None

    def differences(self, other: "SopMatrix"):
        """Yield the positions ``(r, c)`` where the two matrices disagree."""
        _, _, a, b = self._aligned(other)
        for r, c in np.argwhere((a != b).any(axis=2)):
            yield int(r), int(c)

    def to_complex(self) -> np.ndarray:
        n = 1 << self.level
        w = np.exp(1j * np.pi * np.arange(n) / n)
        return (self.data.astype(float) @ w) / float(1 << self.e)

    def __repr__(self) -> str:
        return f"SopMatrix(shape={self.shape}, level={self.level}, e={self.e})"


def _shrink(data):
    """Convert an object array to int64 when every value fits."""
    if data.dtype == object:
        if data.size == 0:
            return data.astype(np.int64)
        m = max(abs(int(v)) for v in data.ravel())
        if m < _INT64_SAFE:
            return data.astype(np.int64)
    return data


def _maxabs(a) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(v)) for v in a.ravel())
    return int(np.abs(a).max())


def _common_dtype(a, b, factor):
    if a.dtype == object or b.dtype == object or _maxabs(a) * _maxabs(b) * factor >= _INT64_SAFE:
        return a.astype(object), b.astype(object)
    return a, b


def _safe_shift(d, k):
    if d.dtype != object and _maxabs(d) << k < _INT64_SAFE:
        return d << k
    return d.astype(object) * (1 << k)


def _safe_add(a, b):
    if a.dtype != object and b.dtype != object and _maxabs(a) + _maxabs(b) < _INT64_SAFE:
        return a + b
    return a.astype(object) + b.astype(object)
