import pytest

from gen import rand_rule_term, rand_term, rng_for
from sopkit.errors import StepLimitExceeded
from sopkit.rewrite import (
    ALL_RULES,
    RewriteStep,
    Strategy,
    apply_rule,
    candidates,
    half_cofactor,
    is_identity_form,
    normal_form,
    reduce,
    replay,
    rule_elim,
    rule_hh,
    rule_z,
)
from sopkit.term import (
    alpha_equal,
    canonicalize,
    compose,
    hadamard,
    interp,
    interp_equal,
    make_term,
    required_level,
)


def test_elim():
    t = make_term(0, [0, 1], None, ["y1"], ["y1"])
    out = rule_elim(t, 0)
    assert out.halfpow == 2 and out.vars == (1,)
    assert rule_elim(t, 1) is None  # boundary variable


def test_hh_on_double_hadamard():
    t = compose(hadamard(), hadamard())
    out, steps = reduce(t)
    assert is_identity_form(out)
    assert [s.rule for s in steps] == ["HH", "HH"]


def test_hh_requires_bare_target():
    # y0/2 * (y1*y2): no linear target
    t = make_term(0, [0, 1, 2], "1/2^1 * y0*y1*y2", ["y1"], ["y2"])
    assert not any(rule_hh(t, 0, u) for u in (1, 2))
    assert half_cofactor(t, 0) is not None


def test_z_rule():
    t = make_term(0, [0, 1], "1/2^1 * y0", ["y1"], ["y1"])
    z = rule_z(t, 0)
    assert interp(z).is_zero() and interp(t).is_zero()
    # already in the zero shape: no loop
    assert rule_z(z, z.vars[0]) is None


def test_omega_and_sqrt2():
    t = make_term(0, [0, 1], "1/2^2 * y0 + 1/2^1 * y0*y1", ["y1"], ["y1"])
    out = apply_rule(t, "omega", 0)[0]
    assert interp_equal(t, out) and len(out.vars) == 1
    g = make_term(-1, [0], "1/2^3 * 1 + 3/2^2 * y0")
    assert apply_rule(g, "sqrt2", 0)[0].vars == ()


def test_soundness_sample():
    # the full sweep lives in the acceptance suite
    rng = rng_for(100)
    for _ in range(150):
        t = rand_rule_term(rng, max_vars=6)
        for rule in ALL_RULES:
            for piv in candidates(t, rule):
                res = apply_rule(t, rule, *piv)
                if res is None:
                    continue
                K = max(required_level(t), required_level(res[0]))
                assert interp(t, K) == interp(res[0], K), (rule, piv, str(t))


def test_contextuality():
    # a one-step rewrite inside A o t o B keeps the semantics
    rng = rng_for(5)
    done = 0
    while done < 40:
        t = rand_rule_term(rng, max_vars=5, max_io=1)
        if t.n_inputs != 1 or t.n_outputs != 1:
            continue
        hit = next(
            (r for rule in ALL_RULES for piv in candidates(t, rule) if (r := apply_rule(t, rule, *piv))),
            None,
        )
        if hit is None:
            continue
        a = hadamard() if rng.random() < 0.5 else make_term(0, [0], "1/2^2 * y0", ["y0"], ["y0"])
        b = make_term(0, [0], None, ["1 + y0"], ["y0"])
        assert interp_equal(compose(a, compose(t, b)), compose(a, compose(hit[0], b)))
        done += 1


def test_termination_measure():
    rng = rng_for(6)
    for _ in range(100):
        t = rand_rule_term(rng)
        out, steps = reduce(t)
        cur = t
        for s in steps:
            nxt = apply_rule(cur, s.rule, *s.pivots)[0]
            if s.rule in ("ket", "bra"):
                assert len(nxt.vars) == len(cur.vars)
            else:
                assert len(nxt.vars) < len(cur.vars) or s.rule == "Z"
            cur = nxt
        assert len(steps) <= len(t.vars) + 2 * (t.n_outputs + t.n_inputs) ** 2 + 1


def test_replay_reproduces_output():
    rng = rng_for(8)
    for _ in range(100):
        t = rand_term(rng)
        out, steps = reduce(t)
        again = replay(t, [RewriteStep.from_json(s.to_json()) for s in steps])
        assert canonicalize(again) == canonicalize(out)
        assert interp_equal(t, out)


def test_step_limit():
    t = compose(hadamard(), compose(hadamard(), compose(hadamard(), hadamard())))
    with pytest.raises(StepLimitExceeded) as err:
        reduce(t, Strategy(step_limit=1))
    assert len(err.value.trace) == 1
    assert interp_equal(err.value.term, t)
    # exactly enough steps is fine
    n = len(reduce(t)[1])
    reduce(t, Strategy(step_limit=n))


def test_step_limit_env(monkeypatch):
    t = compose(hadamard(), hadamard())
    monkeypatch.setenv("SOP_STEP_LIMIT", "0")
    with pytest.raises(StepLimitExceeded):
        reduce(t)


def test_strategy_config():
    s = Strategy.from_config({"rules": ["z", "hh", "ω"], "scan": "descending", "ketbra": False})
    assert s.rules == ("Z", "HH", "omega")
    with pytest.raises(ValueError):
        Strategy.from_config({"rules": ["nope"]})
    with pytest.raises(ValueError):
        Strategy.from_config({"scan": "sideways"})
    with pytest.raises(ValueError):
        reduce(hadamard(), Strategy(script=(("HH", (0, 1)),)))


def test_normal_form_alpha_invariant():
    rng = rng_for(21)
    for _ in range(150):
        t = rand_rule_term(rng)
        perm = list(t.vars)
        rng.shuffle(perm)
        u = t.rename({v: 3 * p + 1 for v, p in zip(t.vars, perm)})
        assert normal_form(t) == normal_form(u)


@pytest.mark.parametrize("scan", ["ascending", "descending"])
def test_other_scans_sound(scan):
    rng = rng_for(31)
    for _ in range(60):
        t = rand_term(rng)
        assert interp_equal(reduce(t, Strategy(scan=scan))[0], t)


def test_ketbra_guard():
    # ket may not fire when the pivot shows up in an earlier output
    t = make_term(0, [0, 1], None, ["y0", "y0 + y1"], [])
    assert apply_rule(t, "ket", 1, 0) is None
    out = apply_rule(t, "ket", 1, 1)[0]
    assert out.outputs[1].as_var() == 1
    assert alpha_equal(reduce(out)[0], reduce(t)[0])


def test_half_cofactor():
    t = make_term(0, [0, 1, 2], "1/2^1 * y0*y1 + 1/2^1 * y0 + 1/2^2 * y2")
    assert str(half_cofactor(t, 0)) in ("1 + y1", "y1 + 1")
    t2 = make_term(0, [0, 1], "1/2^2 * y0*y1")
    assert half_cofactor(t2, 0) is None
