import pytest

from torvan.core.errors import ChainBlocked, InvalidInput, NotTorsionFree
from torvan.services.construction_service import (
    compare_quasi_liftings,
    over_stage,
    pushforward,
    pushforward_chain,
    quasi_lifting,
)
from torvan.services.module_service import cyclic_module, dim_length, free_module, hilbert_equal
from torvan.services.resolution_service import serre_check, status_flags, tor_module

from .conftest import ci_ring


def test_pushforward_of_line(node_modules):
    pf = pushforward(node_modules["X"])
    assert pf.nu == 1
    assert pf.certificate["injective"]
    assert pf.certificate["exact_hilbert"]
    # R/(x) sits in R as (y); the cokernel is R/(y) up to a twist
    assert pf.M1.ngens == 1
    assert dim_length(pf.M1).dim == 1
    assert status_flags(pf.M1).is_mcm


def test_pushforward_of_free_module_is_zero(node_modules):
    pf = pushforward(node_modules["R"])
    assert pf.nu == 1
    assert pf.M1.is_zero
    assert pf.certificate["exact_hilbert"]


def test_pushforward_rejects_torsion(node_modules):
    with pytest.raises(NotTorsionFree) as err:
        pushforward(node_modules["k"])
    assert err.value.field == "M"


def test_chain_keeps_lines(node_modules):
    chain = pushforward_chain(node_modules["X"], 4)
    assert [M.ngens for M in chain.modules] == [1, 1, 1, 1, 1]
    assert len(chain.steps) == 4
    assert all(step.certificate["exact_hilbert"] for step in chain.steps)


def test_chain_of_length_zero(node_modules):
    chain = pushforward_chain(node_modules["X"], 0)
    assert len(chain.modules) == 1 and chain.steps == ()


def test_chain_blocked_by_torsion(node_modules):
    with pytest.raises(ChainBlocked) as err:
        pushforward_chain(node_modules["k"], 2)
    assert err.value.stage == 0
    assert err.value.to_dict()["code"] == "chain_blocked"


def test_chain_rejects_negative_length(node_modules):
    with pytest.raises(InvalidInput):
        pushforward_chain(node_modules["X"], -1)


def test_quasi_lifting_over_the_plane(node, node_modules):
    ql = quasi_lifting(node_modules["X"])
    assert ql.S.dim == 2 and ql.S.is_regular
    assert ql.nu == 1
    assert ql.certificate["stage"] == 0
    assert ql.certificate["relation"] == "x*y"
    assert ql.certificate["exact_hilbert"]
    # (y, xy) = (y) is free over the plane
    assert ql.E.ngens == 1
    assert ql.E.relations.ncols == 0


def test_quasi_lifting_needs_a_hypersurface_step(plane):
    with pytest.raises(InvalidInput) as err:
        quasi_lifting(free_module(plane))
    assert err.value.field == "tower"


@pytest.mark.parametrize("label", ["R", "X", "Y"])
def test_pushforward_shifts_serre_conditions(node_modules, label):
    M = node_modules[label]
    M1 = pushforward(M).M1
    for n in range(4):
        assert serre_check(M, n + 1).holds == serre_check(M1, n).holds
    if status_flags(M).is_mcm:
        assert M1.is_zero or status_flags(M1).is_mcm


def test_chain_blocked_by_torsion_in_r_mod_x_squared(node_modules):
    with pytest.raises(ChainBlocked) as err:
        pushforward_chain(node_modules["X2"], 1)
    assert err.value.stage == 0


# --- change of rings through quasi-liftings ---

def test_over_stage_adds_the_relation(node_modules):
    X = node_modules["X"]
    q = quasi_lifting(X)
    S = q.S
    assert S.codim == 0
    assert hilbert_equal(over_stage(X, q), cyclic_module(S, [S.parse("x")]))


def test_quasi_lifting_tor_is_taken_over_the_stage(node_modules):
    X = node_modules["X"]
    # over R the resolution of R/(x) is periodic, so Tor^R_3 is k
    assert not tor_module(X, X, 3).is_zero
    comparison = compare_quasi_liftings(X, X)
    assert comparison.e == 2
    assert list(comparison.tor) == [2, 3, 4, 5, 6]
    assert comparison.tor_equal
    assert all(v["length"] == 0 for v in comparison.tor.values())


@pytest.mark.parametrize("pair", [("X", "X"), ("X", "Y"), ("R", "X")])
def test_eta_identity_over_node(node_modules, pair):
    M, N = (node_modules[k] for k in pair)
    comparison = compare_quasi_liftings(M, N, e=2)
    assert comparison.tor_equal
    assert comparison.eta_check == {"lhs": "0", "rhs": "0", "factor": 4, "holds": True}
    assert comparison.eta_identity


def test_eta_identity_needs_e_at_least_two(node_modules):
    with pytest.raises(InvalidInput) as err:
        compare_quasi_liftings(node_modules["X"], node_modules["X"], e=1)
    assert err.value.field == "e"


def test_comparison_rejects_torsion(node_modules):
    with pytest.raises(NotTorsionFree):
        compare_quasi_liftings(node_modules["X"], node_modules["X2"])


@pytest.mark.slow
def test_quasi_lifting_tor_in_codimension_two():
    R = ci_ring(101, "xyzw", ["x*y", "z*w"], name="two_nodes")
    M = cyclic_module(R, [R.parse("x")], name="R/(x)")
    comparison = compare_quasi_liftings(M, M, top=4)
    assert comparison.S.codim == 1
    assert comparison.tor_equal
    # Tor^R(R/x, R/x) has a one-dimensional tail, so eta is not defined here
    assert comparison.eta_check["skipped"] == "tail_not_finite_length"
