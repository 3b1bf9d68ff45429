import numpy as np
import pytest

from torvan.algebra.linalg import extend_basis, nullspace_modp, rank_modp, rref_modp
from torvan.algebra.matrix import Matrix, kronecker
from torvan.algebra.polyalg import PolyRing, monomial_cmp, poly_arith
from torvan.core.errors import InvalidInput


@pytest.fixture(scope="module")
def Q():
    return PolyRing(101, ("x", "y", "z"))


def test_parse_reduces_coefficients(Q):
    f = Q.parse("103*x^2 - y*z")
    assert f.coefficient((2, 0, 0)).value == 2
    assert f.coefficient((0, 1, 1)).value == 100
    assert f.to_text() == "2*x^2 - y*z"
    assert f.to_text(pretty=False) == "2*x^2 + 100*y*z"


def test_text_round_trips(Q):
    for text in ["x^3 - 2*x*y*z + z^3", "-x", "0", "5", "x*y - z^2"]:
        f = Q.parse(text)
        assert Q.parse(f.to_text()) == f
        assert Q.parse(f.to_text(pretty=False)) == f


def test_parse_rejects_unknown_variables(Q):
    with pytest.raises(InvalidInput) as err:
        Q.parse("x + w")
    assert err.value.field == "polynomial"


def test_parse_rejects_garbage(Q):
    with pytest.raises(InvalidInput):
        Q.parse("x + * y")


def test_ring_rejects_composite_modulus():
    with pytest.raises(InvalidInput) as err:
        PolyRing(100, ("x",))
    assert err.value.field == "p"


def test_grevlex_order(Q):
    order = Q.order
    assert monomial_cmp(order, (2, 0, 0), (1, 1, 0)) == 1
    assert monomial_cmp(order, (1, 1, 0), (0, 2, 0)) == 1
    # the smaller power of the last variable wins in degree ties
    assert monomial_cmp(order, (1, 2, 0), (2, 0, 1)) == 1
    # degree first
    assert monomial_cmp(order, (0, 0, 2), (1, 0, 0)) == 1


def test_order_is_antisymmetric_and_multiplicative(Q):
    order = Q.order
    grid = [m for d in range(4) for m in Q.monomials_of_degree(d)]
    for a in grid:
        for b in grid:
            assert monomial_cmp(order, a, b) == -monomial_cmp(order, b, a)
            assert (monomial_cmp(order, a, b) == 0) == (a == b)
            for c in ((1, 0, 0), (0, 2, 1), (1, 1, 1)):
                ac = tuple(i + j for i, j in zip(a, c))
                bc = tuple(i + j for i, j in zip(b, c))
                assert monomial_cmp(order, ac, bc) == monomial_cmp(order, a, b)


def test_arithmetic_mod_p(Q):
    x, y = Q.var("x"), Q.var("y")
    assert (x + y) * (x - y) == x**2 - y**2
    assert (x + y) ** 2 == Q.parse("x^2 + 2*x*y + y^2")
    assert (x * 101).is_zero()
    assert Q.parse("3*x + y").monic() == Q.parse("x + 34*y")


def test_homogeneity_and_degree(Q):
    assert Q.parse("x^2 + y*z").is_homogeneous()
    assert not Q.parse("x^2 + y").is_homogeneous()
    assert Q.parse("x^2*y + z^3").degree() == 3
    assert Q.zero().degree() is None


def test_weighted_degree():
    W = PolyRing(7, ("a", "b"), (1, 2))
    assert W.parse("a^2 + b").is_homogeneous()
    assert W.parse("a*b").degree() == 3
    assert len(W.monomials_of_degree(4)) == 3  # a^4, a^2 b, b^2


def test_monomials_of_degree(Q):
    assert len(Q.monomials_of_degree(2)) == 6
    assert Q.monomials_of_degree(-1) == ()


def test_rref_and_rank():
    A = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    R, pivots = rref_modp(A, 5)
    assert pivots == [0, 1]
    assert rank_modp(A, 5) == 2
    assert rank_modp(np.zeros((0, 3), dtype=np.int64), 5) == 0


def test_nullspace_is_annihilated():
    A = np.array([[1, 1, 0, 2], [0, 1, 1, 1]], dtype=np.int64)
    K = nullspace_modp(A, 7)
    assert K.shape == (4, 2)
    assert not ((A @ K) % 7).any()


def test_extend_basis_skips_dependent_columns():
    span = np.array([[1], [0], [0]], dtype=np.int64)
    cand = np.array([[2, 0, 1], [0, 1, 1], [0, 0, 0]], dtype=np.int64)
    assert extend_basis(span, cand, 11) == [1]


def test_matrix_degrees_and_kronecker(Q):
    x, y = Q.var("x"), Q.var("y")
    A = Matrix.from_columns(Q, (0,), [(x,), (y * y,)])
    assert A.source == (1, 2)
    B = kronecker(A, Matrix.identity(Q, (0, 1)))
    assert B.nrows == 2 and B.ncols == 4
    with pytest.raises(InvalidInput):
        Matrix.from_columns(Q, (0,), [(x + y * y,)])


def test_poly_arith(Q):
    x, y = Q.parse("x"), Q.parse("y")
    assert poly_arith(x + y, x - y, "mul") == Q.parse("x^2 - y^2")
    assert poly_arith(x, Q.parse("0"), "mul").is_zero()
    assert poly_arith(x, 102, "scalar") == x
    with pytest.raises(InvalidInput) as err:
        poly_arith(x, y, "div")
    assert err.value.field == "op"
    with pytest.raises(InvalidInput):
        poly_arith(x, PolyRing(7, ("x",)).parse("x"), "add")
