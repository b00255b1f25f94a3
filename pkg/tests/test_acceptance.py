"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line; conftest.py prints them at the end of
the run.
"""

import random
import time
from collections import Counter
from fractions import Fraction

import pytest

from gen import rand_diagram, rand_rule_term, rand_term, rng_for
from golden import TRACES, check
from sopkit.circuits import REFUTED_BY_ORACLE, circuit_matrix, verify
from sopkit.cyclo import CycloNumber, SopMatrix
from sopkit.dyadic import SQRT2_GADGET, ascend, descend, ensure_primed, psi_k
from sopkit.rewrite import ALL_RULES, Strategy, apply_rule, candidates, reduce
from sopkit.term import (
    alpha_equal,
    canonicalize,
    hadamard,
    interp,
    interp_equal,
    make_term,
    required_level,
)
from sopkit.zh import axiom_family, sop_to_zh, zh_interp, zh_to_sop

RESULTS = []


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS.append(line)
    print(line)
    return ok


# 1 ------------------------------------------------------------ soundness


def test_rule_soundness():
    t0 = time.time()
    rng = rng_for(1)
    used = Counter()
    bad = []
    for i in range(1000):
        t = rand_rule_term(rng) if i % 2 else rand_term(rng)
        assert len(t.vars) <= 8 and t.n_outputs <= 2 and t.n_inputs <= 2
        assert t.phase.level() <= 3
        before = {}
        for rule in ALL_RULES:
            for piv in candidates(t, rule):
                res = apply_rule(t, rule, *piv)
                if res is None:
                    continue
                K = max(required_level(t), required_level(res[0]))
                if K not in before:
                    before[K] = interp(t, K)
                used[rule] += 1
                if interp(res[0], K) != before[K]:
                    bad.append((str(t), rule, piv))
    took = time.time() - t0
    ok = not bad and all(used[r] > 0 for r in ALL_RULES) and took < 60
    record(1, ok, f"{sum(used.values())} rule applications on 1000 terms, {len(bad)} unsound, {took:.1f}s")
    assert not bad
    assert all(used[r] > 0 for r in ALL_RULES), used
    assert took < 60


# 2 ------------------------------------------------------------ worked example


def test_worked_example():
    t = make_term(0, range(5), "1/2 * y0*y1*y2 + 1/2 * y2 + 1/2 * y2*y3*y4", ["y4"], ["y0"])
    want = make_term(2, [0, 2, 4], "1/2 * y0*y2 + 1/2 * y2 + 1/2 * y2*y4 + 1/2 * y0*y2*y4", ["y4"], ["y0"])
    out, steps = reduce(t)
    rules = [s.rule for s in steps]
    ok = rules == ["HHnl", "HHgen"] and canonicalize(out) == canonicalize(want)
    record(2, ok, f"trace {' -> '.join(map(str, steps))}")
    assert rules == ["HHnl", "HHgen"]
    assert steps[0].substitution == "y3 <- y1 + y0*y1*y2"
    assert steps[1].substitution == "y1 <- 1"
    assert canonicalize(out) == canonicalize(want)


# 3 ------------------------------------------------------------ non-confluence


def test_non_confluence():
    t = make_term(0, [0, 4, 5, 6, 8, 9, 12], "1/2 * y0*y6 + 1/2 * y8*y9*y6 + 1/2 * y4*y5*y6 + 1/2 * y8*y9*y12", ["y0"], [])
    expected = [
        make_term(2, [4, 5, 8, 9, 12], "1/2 * y8*y9*y12", ["y4*y5 + y8*y9"], []),
        make_term(4, [4, 5, 9, 12], "1/2 * y9*y12*y4", ["y9*y12*y4*y5 + y9*y4 + y9*y4*y5 + y4*y5"], []),
        make_term(2, [4, 5, 6, 8, 9], "1/2 * y8*y9*y6", ["y4*y5 + y8*y9 + y4*y5*y8*y9"], []),
    ]
    scripts = [
        [("HH", (6, 0))],
        [("HHnl", (4, 8)), ("HH", (6, 0))],
        [("HHnl", (6, 12)), ("HHgen", (6, 0))],
    ]
    outs = []
    for script in scripts:
        out, _ = reduce(t, Strategy(script=tuple(script)))
        outs.append(out)
    match = [canonicalize(o) == canonicalize(e) for o, e in zip(outs, expected)]
    # irreducible: nothing else applies
    stuck = [reduce(o)[1] == [] for o in outs]
    distinct = all(not alpha_equal(outs[i], outs[j]) for i in range(3) for j in range(i + 1, 3))
    same = all(interp_equal(outs[0], o) for o in outs[1:])
    ok = all(match) and all(stuck) and distinct and same
    record(3, ok, f"matches {match}, irreducible {stuck}, distinct {distinct}, interp-equal {same}")
    assert ok


# 4 ------------------------------------------------------------ blow-up


def t_k(k):
    ph = {}
    for i in range(k + 1):
        a = 3 * i
        ph[frozenset([a, a + 1])] = Fraction(1, 2)
        ph[frozenset([a, a + 2])] = Fraction(1, 2)
        ph[frozenset([a])] = Fraction(1, 2)
    return make_term(0, range(3 * k + 3), ph)


def test_blowup():
    sizes = []
    for k in range(1, 9):
        t = t_k(k)
        before = len(t.phase.terms)
        for i in range(1, k + 1):
            t = apply_rule(t, "HHnl", 0, 3 * i)[0]
        sizes.append((k, before, len(t.phase.terms)))
    ok = all(b == 3 * (k + 1) and a == 2 ** (k + 1) + 1 for k, b, a in sizes)
    record(4, ok, "monomials before/after: " + ", ".join(f"k={k}: {b}->{a}" for k, b, a in sizes))
    assert ok
    # the small cases are still interp-equal to where they started
    for k in (1, 2, 3):
        t = t_k(k)
        u = t
        for i in range(1, k + 1):
            u = apply_rule(u, "HHnl", 0, 3 * i)[0]
        assert interp_equal(t, u)


# 5 ------------------------------------------------------------ ZH axioms


def test_zh_axioms_and_traces():
    axs = axiom_family()
    sound = [ax.name for ax in axs if zh_interp(ax.lhs) != zh_interp(ax.rhs)]
    failed = {f"{tr.name}-{tr.side}": check(tr) for tr in TRACES}
    failed = {k: v for k, v in failed.items() if v}
    names = sorted({tr.name for tr in TRACES})
    ok = not sound and not failed
    record(5, ok, f"{len(axs)} axiom instances sound; traces {', '.join(names)} replayed"
           + (f"; failures {failed} {sound}" if not ok else ""))
    assert not sound
    assert not failed


# 6 ------------------------------------------------------------ translations


def test_translation_coherence():
    rng = rng_for(6)
    a = b = c = 0
    for _ in range(200):
        d = rand_diagram(rng)
        a += interp(zh_to_sop(d)) == zh_interp(d)
    for _ in range(200):
        t = rand_term(rng)
        b += zh_interp(sop_to_zh(t)) == interp(t)
        c += interp_equal(reduce(zh_to_sop(sop_to_zh(t)))[0], t)
    ok = a == b == c == 200
    record(6, ok, f"zh->sop {a}/200, sop->zh {b}/200, reduced round trip {c}/200")
    assert ok


# 7 ------------------------------------------------------------ dyadic functors


def _primed(rng, k):
    return rand_term(rng, max_vars=6, level=k + 1, halfpow=2 * rng.randint(-2, 1))


def _rand_matrix(rng, dim, k):
    n = 1 << k
    entries = {
        (i, j): CycloNumber(k, [rng.randint(-3, 3) for _ in range(n)], rng.randint(0, 2))
        for i in range(dim)
        for j in range(dim)
    }
    return SopMatrix.from_entries(dim, dim, entries, level=k)


def test_dyadic_functors():
    rng = rng_for(7)
    n = 300
    psi_ok = back_interp = back_canon = 0
    misses = []
    for i in range(n):
        k = (1, 2, 3)[i % 3]
        t = _primed(rng, k)
        a = ascend(t, k)
        psi_ok += interp(a) == psi_k(interp(t), k)
        back = reduce(descend(a, k))[0]
        back_interp += interp_equal(back, t)
        if canonicalize(back) == canonicalize(reduce(t)[0]):
            back_canon += 1
        else:
            misses.append(t)
    mrng = random.Random(77)
    hom = 0
    for i in range(60):
        k = (1, 2, 3)[i % 3]
        x, y = _rand_matrix(mrng, 2, k), _rand_matrix(mrng, 2, k)
        hom += psi_k(x @ y, k) == psi_k(x, k) @ psi_k(y, k) and psi_k(x + y, k) == psi_k(x, k) + psi_k(y, k)
    ok = psi_ok == back_interp == back_canon == n and hom == 60
    record(
        7, ok,
        f"interp(ascend) = psi_k {psi_ok}/{n}; descend(ascend) interp-equal {back_interp}/{n}, "
        f"canonical-form-equal after reduce {back_canon}/{n}; psi_k homomorphism {hom}/60",
    )
    assert psi_ok == n and back_interp == n and hom == 60
    if back_canon != n:
        # rewriting is not confluent: the round trip can end in a different
        # irreducible term with the same matrix (see the decision log)
        pytest.xfail(f"{n - back_canon} round trips end in another irreducible form")


# 8 ------------------------------------------------------------ circuits

TOF7 = """qubits 3
h 2
cnot 1 2
tdg 2
cnot 0 2
t 2
cnot 1 2
tdg 2
cnot 0 2
t 1
t 2
h 2
cnot 0 1
t 0
tdg 1
cnot 0 1
"""


def test_circuit_suite():
    cases = {
        "H^2 = I": ("qubits 1\nh 0\nh 0", "qubits 1"),
        "Tof^2 = I": ("qubits 3\ntof 0 1 2\ntof 0 1 2", "qubits 3"),
        "CCZ = H Tof H": ("qubits 3\nccz 0 1 2", "qubits 3\nh 2\ntof 0 1 2\nh 2"),
        "7-T Toffoli": (TOF7, "qubits 3\ntof 0 1 2"),
    }
    got = {}
    for name, (c1, c2) in cases.items():
        v = verify(c1, c2)
        got[name] = v.status
        # the exact oracle must agree in any case
        assert circuit_matrix(c1) == circuit_matrix(c2), name
    neg = verify("qubits 1\nh 0", "qubits 1\nx 0")
    w = neg.witness
    witness_ok = (
        neg.status == REFUTED_BY_ORACLE
        and w is not None
        and circuit_matrix("qubits 1\nh 0")[w.row, w.col] == w.left
        and circuit_matrix("qubits 1\nx 0")[w.row, w.col] == w.right
        and w.left != w.right
    )
    ok = all(s.startswith("verified") for s in got.values()) and witness_ok
    record(8, ok, "; ".join(f"{k}: {v}" for k, v in got.items()) + f"; h vs x: {neg.status} at {w.row, w.col}")
    assert ok


# 9 ------------------------------------------------------------ sqrt(2) gadget


def test_sqrt2_gadget():
    one = interp(SQRT2_GADGET) == SopMatrix.identity(1)
    g = ensure_primed(hadamard())
    y = g.vars[-1]
    res = apply_rule(g, "sqrt2", y)
    back = res is not None and alpha_equal(res[0], hadamard())
    only = reduce(SQRT2_GADGET, Strategy(rules=("sqrt2",)))[0]
    gone = only.vars == () and only.halfpow == 0 and not only.phase
    ok = one and back and gone
    record(9, ok, f"interp = 1: {one}; (sqrt2) removes the gadget: {back and gone}")
    assert ok
