"""The TH / TH' rewrite rules on SOP terms and a deterministic reducer."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import StepLimitExceeded
from .polyalg import BoolPoly, PhasePoly, hat_lift, phase_scale_reduce, phase_subst
from .term import SopTerm, canonical_order, canonicalize, zero_term

HALF = Fraction(1, 2)

TH_RULES = ("Z", "Elim", "HH", "HHgen", "HHnl")
TH_PRIME_RULES = TH_RULES + ("omega", "sqrt2")
BOUNDARY_RULES = ("ket", "bra")
ALL_RULES = TH_PRIME_RULES + BOUNDARY_RULES

# accepted spellings in configs and traces
_ALIASES = {"√2": "sqrt2", "ω": "omega", "w": "omega", "elim": "Elim", "z": "Z", "hh": "HH",
            "hhgen": "HHgen", "hhnl": "HHnl"}

DEFAULT_STEP_LIMIT = 10**6
SCANS = ("canonical", "ascending", "descending")


def rule_name(name: str) -> str:
    return _ALIASES.get(name, _ALIASES.get(name.lower(), name))


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    pivots: tuple
    substitution: str = ""
    halfpow_delta: int = 0

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "pivots": list(self.pivots),
            "substitution": self.substitution,
            "halfpowDelta": self.halfpow_delta,
        }

    @classmethod
    def from_json(cls, d) -> "RewriteStep":
        return cls(d["rule"], tuple(d["pivots"]), d.get("substitution", ""), d.get("halfpowDelta", 0))

    def __str__(self) -> str:
        piv = ",".join(map(str, self.pivots))
        sub = f" [{self.substitution}]" if self.substitution else ""
        return f"{self.rule}({piv}){sub}"


# ------------------------------------------------------------ helpers


def half_cofactor(t: SopTerm, y0: int) -> BoolPoly | None:
    """B such that the y0-part of the phase is (y0/2)*hat(B), if it exists."""
    cof, _ = t.phase.split(y0)
    if any(c != HALF for c in cof.terms.values()):
        return None
    return BoolPoly(cof.terms.keys())


def _subst(t: SopTerm, v: int, r: BoolPoly, phase: PhasePoly | None = None) -> tuple:
    phase = t.phase if phase is None else phase
    return (
        phase_subst(phase, v, r),
        tuple(p.subst(v, r) for p in t.outputs),
        tuple(p.subst(v, r) for p in t.inputs),
    )


def _drop(vars_: tuple, *gone: int) -> tuple:
    return tuple(v for v in vars_ if v not in gone)


def _var(v: int) -> str:
    return f"y{v}"


# ------------------------------------------------------------ rules
# each matcher returns (new_term, substitution_text) or None


def _elim(t: SopTerm, y0: int):
    if y0 not in t.vars or y0 in t.phase.vars() or not t.is_internal(y0):
        return None
    return SopTerm(t.halfpow + 2, _drop(t.vars, y0), t.phase, t.outputs, t.inputs), ""


def _hh(t: SopTerm, y0: int, yi: int):
    if y0 not in t.vars or not t.is_internal(y0):
        return None
    b = half_cofactor(t, y0)
    if b is None or frozenset([yi]) not in b.monomials:
        return None
    q = b ^ BoolPoly.var(yi)
    if yi in q.vars():
        return None
    _, rest = t.phase.split(y0)
    phase, outs, ins = _subst(t, yi, q, rest)
    out = SopTerm(t.halfpow + 2, _drop(t.vars, y0, yi), phase, outs, ins)
    return out, f"{_var(yi)} <- {q}"


def _weight(t: SopTerm, v: int) -> int:
    # number of monomials mentioning v, over the phase and the boundary
    n = sum(1 for m in t.phase.terms if v in m)
    for p in t.outputs + t.inputs:
        n += sum(1 for m in p.monomials if v in m)
    return n


def _hh_targets(t: SopTerm, y0: int) -> list:
    b = half_cofactor(t, y0)
    if b is None:
        return []
    found = []
    for m in b.monomials:
        if len(m) == 1:
            (v,) = m
            if v not in (b ^ BoolPoly.var(v)).vars():
                found.append(v)
    return found


def _hhgen(t: SopTerm, y0: int, yi: int):
    if y0 not in t.vars or yi == y0 or not t.is_internal(y0):
        return None
    b = half_cofactor(t, y0)
    if b is None:
        return None
    rest_b = b ^ BoolPoly.one()
    q = BoolPoly(m - {yi} for m in rest_b.monomials if yi in m)
    qp = BoolPoly(m for m in rest_b.monomials if yi not in m)
    if q.is_zero() or q * qp != qp:
        return None
    r = BoolPoly.one() ^ qp
    phase, outs, ins = _subst(t, yi, r)
    return SopTerm(t.halfpow, _drop(t.vars, yi), phase, outs, ins), f"{_var(yi)} <- {r}"


def _hhnl(t: SopTerm, y0: int, y1: int):
    if y0 == y1 or y0 not in t.vars or y1 not in t.vars:
        return None
    if not (t.is_internal(y0) and t.is_internal(y1)):
        return None
    b0, b1 = half_cofactor(t, y0), half_cofactor(t, y1)
    if b0 is None or b1 is None or y0 in b1.vars() or y1 in b0.vars():
        return None
    r = BoolPoly.var(y0) ^ (BoolPoly.var(y0) * b0)
    phase = phase_subst(t.phase, y1, r)
    out = SopTerm(t.halfpow + 2, _drop(t.vars, y1), phase, t.outputs, t.inputs)
    return out, f"{_var(y1)} <- {r}"


def _ket(t: SopTerm, i: int, y0: int):
    if not 0 <= i < t.n_outputs:
        return None
    oi = t.outputs[i]
    if frozenset([y0]) not in oi.monomials:
        return None
    rest = oi ^ BoolPoly.var(y0)
    if rest.is_zero() or y0 in rest.vars():
        return None
    if any(y0 in p.vars() for p in t.outputs[:i]):
        return None
    r = BoolPoly.var(y0) ^ rest
    phase, outs, ins = _subst(t, y0, r)
    return SopTerm(t.halfpow, t.vars, phase, outs, ins), f"{_var(y0)} <- {r}"


def _bra(t: SopTerm, i: int, y0: int):
    if not 0 <= i < t.n_inputs:
        return None
    ii = t.inputs[i]
    if frozenset([y0]) not in ii.monomials:
        return None
    rest = ii ^ BoolPoly.var(y0)
    if rest.is_zero() or y0 in rest.vars():
        return None
    if any(y0 in p.vars() for p in t.outputs + t.inputs[:i]):
        return None
    r = BoolPoly.var(y0) ^ rest
    phase, outs, ins = _subst(t, y0, r)
    return SopTerm(t.halfpow, t.vars, phase, outs, ins), f"{_var(y0)} <- {r}"


def _is_zero_form(t: SopTerm) -> bool:
    return (
        t.halfpow == 0
        and len(t.vars) == 1
        and t.phase == PhasePoly({frozenset(t.vars): HALF})
        and all(p.is_zero() for p in t.outputs + t.inputs)
    )


def _z(t: SopTerm, y0: int):
    if y0 not in t.vars or not t.is_internal(y0):
        return None
    if half_cofactor(t, y0) != BoolPoly.one():
        return None
    if _is_zero_form(t):
        return None
    return zero_term(t.n_outputs, t.n_inputs, y0), ""


def _omega(t: SopTerm, y0: int):
    if y0 not in t.vars or not t.is_internal(y0):
        return None
    cof, rest = t.phase.split(y0)
    c0 = cof.get(frozenset())
    if c0 not in (Fraction(1, 4), Fraction(3, 4)):
        return None
    others = [m for m in cof.terms if m]
    if any(cof.get(m) != HALF for m in others):
        return None
    q = BoolPoly(others)
    if c0 == Fraction(3, 4):
        q = q ^ BoolPoly.one()
    phase = rest + PhasePoly({frozenset(): Fraction(1, 8)}) + phase_scale_reduce(
        Fraction(-1, 4), hat_lift(q, mod_log=2)
    )
    return SopTerm(t.halfpow + 1, _drop(t.vars, y0), phase, t.outputs, t.inputs), f"Q = {q}"


def _sqrt2(t: SopTerm, y0: int):
    if y0 not in t.vars or not t.is_internal(y0):
        return None
    cof, rest = t.phase.split(y0)
    if cof != PhasePoly({frozenset(): Fraction(3, 4)}):
        return None
    phase = rest + PhasePoly({frozenset(): Fraction(-1, 8)})
    return SopTerm(t.halfpow + 1, _drop(t.vars, y0), phase, t.outputs, t.inputs), ""


_APPLIERS: dict[str, Callable] = {
    "Elim": _elim,
    "HH": _hh,
    "HHgen": _hhgen,
    "HHnl": _hhnl,
    "ket": _ket,
    "bra": _bra,
    "Z": _z,
    "omega": _omega,
    "sqrt2": _sqrt2,
}


def apply_rule(t: SopTerm, rule: str, *pivots: int):
    """Apply one rule at the given pivots; returns ``(term, step)`` or None."""
    rule = rule_name(rule)
    res = _APPLIERS[rule](t, *pivots)
    if res is None:
        return None
    out, sub = res
    return out, RewriteStep(rule, tuple(pivots), sub, out.halfpow - t.halfpow)


def _public(rule):
    def fn(t, *pivots):
        res = apply_rule(t, rule, *pivots)
        return None if res is None else res[0]

    fn.__name__ = f"rule_{rule.lower()}"
    fn.__doc__ = f"Apply ({rule}) at the given pivots, or return None."
    return fn


rule_elim = _public("Elim")
rule_hh = _public("HH")
rule_hhgen = _public("HHgen")
rule_hhnl = _public("HHnl")
rule_ket = _public("ket")
rule_bra = _public("bra")
rule_z = _public("Z")
rule_omega = _public("omega")
rule_sqrt2 = _public("sqrt2")


def candidates(t: SopTerm, rule: str, order: Sequence[int] | None = None) -> Iterable[tuple]:
    """Pivot tuples worth trying for ``rule``, in scan order."""
    rule = rule_name(rule)
    order = list(t.vars) if order is None else list(order)
    rank = {v: i for i, v in enumerate(order)}
    if rule in ("Elim", "Z", "omega", "sqrt2"):
        for v in order:
            yield (v,)
    elif rule == "HH":
        for v in order:
            if not t.is_internal(v):
                continue
            # boundary targets first, then the least used, then the latest in
            # scan order (the glue variables of a composition, for id order)
            key = lambda u: (not t.is_internal(u), -_weight(t, u), rank[u])
            for u in sorted(set(_hh_targets(t, v)), key=key, reverse=True):
                yield (v, u)
    elif rule == "HHgen":
        for v in order:
            if not t.is_internal(v):
                continue
            b = half_cofactor(t, v)
            if b is None:
                continue
            bv = b.vars()
            for u in order:
                if u in bv:
                    yield (v, u)
    elif rule == "HHnl":
        cands = [v for v in order if t.is_internal(v) and half_cofactor(t, v) is not None]
        for v in cands:
            for u in cands:
                if u != v:
                    yield (v, u)
    elif rule == "ket":
        for i, p in enumerate(t.outputs):
            for v in order:
                if frozenset([v]) in p.monomials:
                    yield (i, v)
    elif rule == "bra":
        for i, p in enumerate(t.inputs):
            for v in order:
                if frozenset([v]) in p.monomials:
                    yield (i, v)
    else:
        raise ValueError(f"unknown rule {rule!r}")


def find_match(t: SopTerm, rules: Sequence[str], order=None):
    """First applicable ``(term, step)`` following rule priority then scan order."""
    for rule in rules:
        for piv in candidates(t, rule, order):
            res = apply_rule(t, rule, *piv)
            if res is not None:
                return res
    return None


# ------------------------------------------------------------ strategy & reduce


def _env_step_limit() -> int:
    raw = os.environ.get("SOP_STEP_LIMIT")
    return int(raw) if raw else DEFAULT_STEP_LIMIT


@dataclass(frozen=True)
class Strategy:
    rules: tuple = TH_PRIME_RULES
    scan: str = "canonical"
    ketbra: bool = True
    step_limit: int | None = None
    script: tuple = field(default=())

    @classmethod
    def th(cls, **kw) -> "Strategy":
        return cls(rules=TH_RULES, **kw)

    @classmethod
    def from_config(cls, cfg: dict) -> "Strategy":
        kw: dict = {}
        if "rules" in cfg:
            kw["rules"] = tuple(rule_name(r) for r in cfg["rules"])
        if "scan" in cfg:
            kw["scan"] = cfg["scan"]
        if "ketbra" in cfg:
            kw["ketbra"] = bool(cfg["ketbra"])
        if "step_limit" in cfg:
            kw["step_limit"] = int(cfg["step_limit"])
        if "script" in cfg:
            kw["script"] = tuple(
                (rule_name(s["rule"]), tuple(s["pivots"])) if isinstance(s, dict) else (rule_name(s[0]), tuple(s[1]))
                for s in cfg["script"]
            )
        for r in kw.get("rules", ()):
            if r not in _APPLIERS:
                raise ValueError(f"unknown rule {r!r}")
        if kw.get("scan", "canonical") not in SCANS:
            raise ValueError(f"scan must be one of {SCANS}")
        return cls(**kw)

    def limit(self) -> int:
        return self.step_limit if self.step_limit is not None else _env_step_limit()

    def order(self, t: SopTerm) -> list:
        if self.scan == "canonical":
            return canonical_order(t)
        vs = sorted(t.vars)
        return vs if self.scan == "ascending" else vs[::-1]


class _Run:
    def __init__(self, t: SopTerm, strategy: Strategy):
        self.t = t
        self.s = strategy
        self.steps: list[RewriteStep] = []
        self.limit = strategy.limit()
        # rules only ever remove variables, so the order of the input term,
        # restricted to what is left, stays alpha-invariant
        self._order = strategy.order(t)

    def order(self) -> list:
        live = set(self.t.vars)
        return [v for v in self._order if v in live]

    def record(self, out, step):
        if len(self.steps) >= self.limit:
            raise StepLimitExceeded(
                f"step limit {self.limit} reached", term=self.t, trace=list(self.steps)
            )
        self.t = out
        self.steps.append(step)

    def saturate(self):
        while True:
            res = find_match(self.t, self.s.rules, self.order())
            if res is None:
                return
            self.record(*res)

    def boundary_pass(self) -> bool:
        hit = False
        t = self.t
        for rule, n in (("ket", t.n_outputs), ("bra", t.n_inputs)):
            for i in range(n):
                for v in self.order():
                    res = apply_rule(self.t, rule, i, v)
                    if res is not None:
                        self.record(*res)
                        hit = True
                        break
        return hit


def reduce(t: SopTerm, strategy: Strategy | None = None) -> tuple[SopTerm, list[RewriteStep]]:
    """Rewrite ``t`` to a normal form under ``strategy``.

    Scripted steps run first and must all apply.  Afterwards the rules are
    tried in priority order; ket/bra run in at most ``m + n`` bounded passes
    once nothing else applies.
    """
    strategy = strategy or Strategy()
    run = _Run(t, strategy)
    for rule, piv in strategy.script:
        res = apply_rule(run.t, rule, *piv)
        if res is None:
            raise ValueError(f"scripted step {rule}{tuple(piv)} does not apply")
        run.record(*res)
    run.saturate()
    if strategy.ketbra:
        for _ in range(run.t.n_outputs + run.t.n_inputs):
            if not run.boundary_pass():
                break
            run.saturate()
    return run.t, run.steps


def replay(t: SopTerm, steps: Iterable[RewriteStep]) -> SopTerm:
    for st in steps:
        res = apply_rule(t, st.rule, *st.pivots)
        if res is None:
            raise ValueError(f"step {st} does not apply")
        t = res[0]
    return t


def is_identity_form(t: SopTerm) -> bool:
    if t.halfpow != 0 or t.phase or t.n_outputs != t.n_inputs:
        return False
    outs = [p.as_var() for p in t.outputs]
    ins = [p.as_var() for p in t.inputs]
    if None in outs or outs != ins:
        return False
    return len(set(outs)) == len(outs) == len(t.vars)


def normal_form(t: SopTerm, strategy: Strategy | None = None) -> SopTerm:
    """Reduced and alpha-canonicalized ``t``."""
    return canonicalize(reduce(t, strategy)[0])
