import pytest

from golden import TRACES, check, reduction_path
from sopkit.term import canonicalize
from sopkit.zh import zh_interp, zh_to_sop


@pytest.mark.parametrize("tr", TRACES, ids=lambda tr: f"{tr.name}-{tr.side}")
def test_trace(tr):
    assert check(tr) == []


@pytest.mark.parametrize("tr", TRACES, ids=lambda tr: f"{tr.name}-{tr.side}")
def test_axiom_semantics(tr):
    assert zh_interp(tr.axiom.lhs) == zh_interp(tr.axiom.rhs)


def test_and_rhs_differs_under_ascending_scan():
    # scanning by plain id order takes another route through the &-rhs
    tr = next(t for t in TRACES if t.name == "&" and t.side == "rhs")
    path = reduction_path(zh_to_sop(tr.axiom.rhs), scan="ascending")
    assert canonicalize(tr.via) not in path
