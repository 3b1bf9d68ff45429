import pytest

from torvan.core.errors import InvalidInput, RingMismatch
from torvan.services.module_service import free_module, residue_field
from torvan.services.oracle_service import GradedPieces, oracle_hilbert, oracle_tor
from torvan.services.resolution_service import tor_profile

from .conftest import ci_ring


def nonzero(dims):
    return {d: v for d, v in dims.items() if v}


def test_graded_pieces_of_node(node):
    pieces = GradedPieces(node)
    assert [pieces.piece(d).dim for d in range(5)] == [1, 2, 2, 2, 2]
    assert set(pieces.basis(2)) == {(2, 0), (0, 2)}


def test_hilbert_function(node, xx_yy):
    assert oracle_hilbert(free_module(node), 4) == {0: 1, 1: 2, 2: 2, 3: 2, 4: 2}
    assert oracle_hilbert(free_module(xx_yy), 3) == {0: 1, 1: 2, 2: 1, 3: 0}
    assert nonzero(oracle_hilbert(residue_field(node), 3)) == {0: 1}


def test_tor_by_degree(node_modules):
    out = oracle_tor(node_modules["X"], node_modules["X2"], max_index=5, degree_bound=8)
    assert [sum(out[i].values()) for i in range(1, 6)] == [1, 0, 1, 0, 1]
    # Tor_{2j+1} sits in internal degree 2j + 2
    assert nonzero(out[1]) == {2: 1}
    assert nonzero(out[3]) == {4: 1}


def test_oracle_agrees_with_resolutions(node_modules):
    out = oracle_tor(node_modules["k"], node_modules["k"], max_index=4, degree_bound=8)
    lengths = [sum(out[i].values()) for i in range(1, 5)]
    assert lengths == tor_profile(node_modules["k"], node_modules["k"], 4).lengths()
    assert lengths == [2, 2, 2, 2]


def test_oracle_across_rings_rejected(node, xx_yy):
    with pytest.raises(RingMismatch):
        oracle_tor(free_module(node), free_module(xx_yy))


def test_oracle_needs_small_prime():
    R = ci_ring(2147483647, "xy", ["x*y"], [["x"], ["y"]])
    with pytest.raises(InvalidInput) as err:
        GradedPieces(R)
    assert err.value.field == "p"
