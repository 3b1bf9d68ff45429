import pytest

from torvan.algebra.polyalg import PolyRing
from torvan.core.errors import InhomogeneousRelation, InvalidInput, NotRegularSequence
from torvan.services.ring_service import hypersurface_tower, make_ci_ring, polynomial_ring

from .conftest import ci_ring


def test_node_invariants(node):
    assert node.dim == 1
    assert node.codim == 1
    assert node.is_hypersurface
    assert not node.is_regular
    assert node.prefix_dims == (2, 1)
    assert node.contains(node.parse("x^2*y"))
    assert not node.contains(node.parse("x^2"))


def test_codimension_two(xx_yy):
    assert (xx_yy.dim, xx_yy.codim) == (0, 2)
    assert not xx_yy.is_hypersurface


def test_linear_relation_does_not_count_towards_codimension():
    R = ci_ring(101, "xyz", ["x", "y*z"])
    assert R.dim == 1
    assert R.codim == 1


def test_regular_sequence_is_enforced():
    with pytest.raises(NotRegularSequence) as err:
        ci_ring(101, "xyz", ["x*y", "x*z"])
    assert err.value.field == "relations"
    assert err.value.details["prefix"] == 2


def test_inhomogeneous_relation_rejected():
    with pytest.raises(InhomogeneousRelation):
        ci_ring(101, "xy", ["x^2 + y"])


def test_constant_relation_rejected():
    with pytest.raises(InvalidInput):
        ci_ring(101, "xy", ["3"])


def test_min_primes_are_validated():
    with pytest.raises(InvalidInput) as err:
        ci_ring(101, "xy", ["x*y"], [["x + y"]])
    assert err.value.field == "min_primes"
    with pytest.raises(InvalidInput):
        # (x, y) has the wrong dimension to be minimal over the node
        ci_ring(101, "xy", ["x*y"], [["x", "y"]])


def test_polynomial_ring_is_regular():
    S = polynomial_ring(PolyRing(7, ("a", "b")))
    assert S.dim == 2 and S.codim == 0 and S.is_regular


def test_hypersurface_tower_steps_down_one_dimension(xx_yy):
    tower = hypersurface_tower(xx_yy)
    assert len(tower) == 3
    assert tower.top == xx_yy
    assert [s.dim for s in tower.stages] == [2, 1, 0]
    assert all(c["drop"] == 1 for c in tower.certificates())


def test_relations_from_another_ring_rejected():
    Q = PolyRing(101, ("x", "y"))
    other = PolyRing(101, ("u", "v"))
    with pytest.raises(InvalidInput):
        make_ci_ring(Q, [other.parse("u*v")])
