import numpy as np
import pytest

from gen import rand_term, rng_for
from sopkit.cyclo import CycloNumber, SopMatrix
from sopkit.errors import ArityMismatch, LevelTooSmall, TooManyVariables, UnboundVariable
from sopkit.term import (
    alpha_equal,
    canonicalize,
    cap,
    compose,
    cup,
    dagger,
    dumps,
    fragment_of,
    hadamard,
    identity,
    interp,
    interp_equal,
    loads,
    make_term,
    swap,
    tensor,
    toffoli,
)


def shaped(rng, m, n, **kw):
    while True:
        t = rand_term(rng, max_vars=5, max_io=3, **kw)
        if t.n_outputs == m and t.n_inputs == n:
            return t


def test_hadamard_matrix():
    s = CycloNumber.pow_sqrt2(-1, 2)
    expect = SopMatrix.from_rows([[s, s], [s, -s]])
    assert interp(hadamard()) == expect


def test_toffoli_is_permutation():
    m = interp(toffoli()).to_complex()
    perm = np.eye(8)
    perm[[6, 7]] = perm[[7, 6]]
    assert np.allclose(m, perm)


def test_structural():
    assert interp(identity(2)) == SopMatrix.identity(4)
    sw = interp(swap(1, 1)).to_complex()
    assert np.allclose(sw, np.eye(4)[[0, 2, 1, 3]])
    # snake equation
    snake = compose(tensor(cap(1), identity(1)), tensor(identity(1), cup(1)))
    assert interp(snake) == SopMatrix.identity(2)


def test_operations_match_matrices():
    rng = rng_for(3)
    for _ in range(40):
        f = shaped(rng, rng.randint(0, 2), 1)
        g = shaped(rng, 1, rng.randint(0, 2))
        K = 2
        fm, gm = interp(f, K), interp(g, K)
        assert interp(compose(f, g), K) == fm @ gm
        assert interp(tensor(f, g), K) == fm.kron(gm)
        assert interp(dagger(f), K) == fm.conj_transpose()


def test_compose_glue_order():
    h = hadamard()
    t = compose(h, h)
    # g's variables, then f's, then one glue variable
    assert t.vars == (0, 1, 2, 3, 4)
    assert t.halfpow == -4
    assert interp(t) == SopMatrix.identity(2)


def test_canonicalize_alpha_invariant():
    rng = rng_for(9)
    for _ in range(200):
        t = rand_term(rng)
        perm = list(t.vars)
        rng.shuffle(perm)
        offset = rng.randint(0, 30)
        u = t.rename({v: p + offset for v, p in zip(t.vars, perm)})
        assert canonicalize(t) == canonicalize(u)
        assert alpha_equal(t, u)
        assert interp(canonicalize(t)) == interp(t)


def test_canonicalize_separates():
    a = make_term(0, [0, 1], "1/2^1 * y0*y1", ["y0"], [])
    b = make_term(0, [0, 1], "1/2^2 * y0*y1", ["y0"], [])
    assert not alpha_equal(a, b)


def test_fragment_and_levels():
    t = make_term(-1, [0], "1/2^3 * y0", ["y0"], ["y0"])
    f = fragment_of(t)
    assert f.level == 3 and not f.primed
    with pytest.raises(LevelTooSmall):
        interp(t, 1)
    assert interp(t, 3) == interp(t)


def test_errors():
    with pytest.raises(UnboundVariable):
        make_term(0, [0], None, ["y1"], [])
    with pytest.raises(ArityMismatch):
        compose(hadamard(), toffoli())
    big = make_term(0, range(30), None, [], [])
    with pytest.raises(TooManyVariables):
        interp(big)


def test_json_round_trip():
    rng = rng_for(4)
    for _ in range(50):
        t = rand_term(rng)
        assert loads(dumps(t)) == t


def test_interp_equal_across_scalars():
    # 2 * sum_y |><| over one variable equals 4
    a = make_term(2, [0], None, [], [])
    b = make_term(4, [], None, [], [])
    assert interp_equal(a, b)
    assert not interp_equal(a, make_term(3, [], None, [], []))
