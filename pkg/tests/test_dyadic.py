import random

import pytest

from gen import rand_term, rng_for
from sopkit.cyclo import CycloNumber, SopMatrix
from sopkit.dyadic import (
    SQRT2_GADGET,
    ascend,
    ascend_iter,
    descend,
    ensure_primed,
    monomial_decompose,
    phase_state,
    psi_join,
    psi_k,
    psi_split,
    recompose,
    x_block,
)
from sopkit.errors import ArityTooSmall, NotPrimedFragment, WrongLevel, WrongRing
from sopkit.rewrite import reduce
from sopkit.term import fragment_of, hadamard, interp, interp_equal, make_term


def primed(rng, k, max_vars=6):
    return rand_term(rng, max_vars=max_vars, level=k + 1, halfpow=2 * rng.randint(-2, 1))


def rand_matrix(rng, dim, level):
    n = 1 << level
    entries = {
        (i, j): CycloNumber(level, [rng.randint(-3, 3) for _ in range(n)], rng.randint(0, 2))
        for i in range(dim)
        for j in range(dim)
    }
    return SopMatrix.from_entries(dim, dim, entries, level=level)


def test_decomposition_recomposes():
    rng = rng_for(50)
    for _ in range(60):
        t = rand_term(rng, max_vars=5)
        fs = monomial_decompose(t)
        assert fs[0].kind == "out" and fs[-1].kind == "in"
        assert len(fs) == len(t.phase.terms) + 2
        assert interp_equal(recompose(fs), t)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_ascend_matches_psi(k):
    rng = rng_for(60 + k)
    for _ in range(40):
        t = primed(rng, k)
        a = ascend(t, k)
        assert fragment_of(a).level <= k
        assert a.n_inputs == t.n_inputs + 1 and a.n_outputs == t.n_outputs + 1
        assert interp(a) == psi_k(interp(t), k)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_descend_reverses_semantically(k):
    rng = rng_for(70 + k)
    for _ in range(40):
        t = primed(rng, k)
        back = reduce(descend(ascend(t, k), k))[0]
        assert interp_equal(back, t)


def test_single_t_gate():
    # diag(1, e^{i pi/4}) drops from level 3 to level 2 on one more wire
    t = make_term(0, [0], "1/2^3 * y0", ["y0"], ["y0"])
    a = ascend(t, 2)
    assert fragment_of(a).level == 2
    assert interp(a) == psi_k(interp(t), 2)


def test_ascend_iter_reaches_level_one():
    rng = rng_for(80)
    t = primed(rng, 2, max_vars=4)
    a = ascend_iter(t, 2)
    assert fragment_of(a).level <= 1
    assert a.n_inputs == t.n_inputs + 2


def test_phase_state():
    m = interp(phase_state(2)).to_complex().ravel()
    assert abs(m[0] - 1) < 1e-12 and abs(m[1] - complex(0.5**0.5, 0.5**0.5)) < 1e-12


def test_errors():
    odd = hadamard()
    with pytest.raises(NotPrimedFragment):
        ascend(odd, 1)
    deep = make_term(0, [0], "1/2^4 * y0", ["y0"], ["y0"])
    with pytest.raises(WrongLevel):
        ascend(deep, 1)
    with pytest.raises(ValueError):
        ascend(deep, 0)
    with pytest.raises(ArityTooSmall):
        descend(make_term(0, [0], None, ["y0"], []), 1)


def test_sqrt2_gadget():
    assert interp(SQRT2_GADGET) == SopMatrix.identity(1)
    p = ensure_primed(hadamard())
    assert fragment_of(p).primed and interp_equal(p, hadamard())
    assert ensure_primed(p) is p


@pytest.mark.parametrize("k", [1, 2, 3])
def test_psi_homomorphism(k):
    rng = random.Random(90 + k)
    for _ in range(20):
        a, b = rand_matrix(rng, 2, k), rand_matrix(rng, 2, k)
        assert psi_k(a @ b, k) == psi_k(a, k) @ psi_k(b, k)
        assert psi_k(a + b, k) == psi_k(a, k) + psi_k(b, k)
        A, B = psi_split(a, k)
        assert psi_join(A, B, k) == a
    one = SopMatrix.identity(2, k)
    assert psi_k(one, k) == SopMatrix.identity(4, k - 1)


def test_x_block_squares_to_root():
    # X_k^2 = w_{k-1} I, mirroring (e^{i pi/2^k})^2
    for k in (1, 2, 3):
        x = x_block(k)
        assert x @ x == SopMatrix.identity(2, k - 1).scale(CycloNumber.root(k - 1, 1))


def test_psi_wrong_ring():
    m = SopMatrix.from_rows([[CycloNumber.root(3, 1)]])
    with pytest.raises(WrongRing):
        psi_k(m, 2)
