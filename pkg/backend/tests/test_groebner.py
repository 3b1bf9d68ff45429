import random

import pytest

from torvan.algebra.groebner import (
    NEG_INF,
    FreeModule,
    groebner_basis,
    hilbert_numerator,
    ideal_basis,
    ideal_contains,
    ideal_dimension,
    lt_dimension_hilbert,
    matrix_basis,
    normal_form,
    radical_contains,
    syzygies,
)
from torvan.algebra.linalg import rank_modp
from torvan.algebra.matrix import Matrix
from torvan.algebra.polyalg import PolyRing
from torvan.core.errors import InvalidInput
from torvan.services.module_service import cyclic_module
from torvan.services.oracle_service import GradedPieces, free_dim, map_in_degree, oracle_hilbert
from torvan.services.ring_service import polynomial_ring


@pytest.fixture(scope="module")
def Q():
    return PolyRing(101, ("x", "y", "z"))


def polys(Q, *texts):
    return [Q.parse(t) for t in texts]


def test_basis_contains_its_generators(Q):
    gens = polys(Q, "x*z - y^2", "y*z - x*z", "x*y - x^2")
    G = ideal_basis(gens, Q)
    for f in gens:
        assert G.contains((f,))
    assert all(len(c) == 1 for c in G.columns())
    assert not G.is_unit()


def test_membership(Q):
    gens = polys(Q, "x^2", "y^2")
    assert ideal_contains(gens, Q.parse("x^2*z + 3*y^3"))
    assert not ideal_contains(gens, Q.parse("x*y"))


def test_normal_form_is_reduced(Q):
    G = ideal_basis(polys(Q, "x - y"), Q)
    (r,) = normal_form((Q.parse("x^2"),), G)
    assert r == Q.parse("y^2")


def test_dimension_of_quotients(Q):
    assert ideal_dimension(polys(Q, "x*y"), Q) == 2
    assert ideal_dimension(polys(Q, "x", "y"), Q) == 1
    assert ideal_dimension(polys(Q, "x", "y", "z"), Q) == 0
    assert ideal_dimension([Q.one()], Q) == NEG_INF


def test_hilbert_numerator_of_monomial_ideals():
    w = (1, 1)
    assert hilbert_numerator([], w) == {0: 1}
    assert hilbert_numerator([(2, 0), (0, 2)], w) == {0: 1, 2: -2, 4: 1}
    # Q/(xy): 1 - t^2
    assert hilbert_numerator([(1, 1)], w) == {0: 1, 2: -1}
    assert hilbert_numerator([(0, 0)], w) == {}


def test_hilbert_function_of_node():
    Q = PolyRing(101, ("x", "y"))
    H = lt_dimension_hilbert(ideal_basis([Q.parse("x*y")], Q))
    assert H.dimension == 1
    assert [H.value(d) for d in range(5)] == [1, 2, 2, 2, 2]
    assert H.length() is None


def test_finite_length_quotient():
    Q = PolyRing(101, ("x", "y"))
    H = lt_dimension_hilbert(ideal_basis(polys(Q, "x^2", "y^2"), Q))
    assert H.dimension == 0
    assert H.length() == 4


def test_module_basis_contains_combinations(Q):
    x, y, z = Q.gens()
    F = FreeModule(Q, (0, 0))
    G = groebner_basis([(x, y), (y, z)], F)
    combo = (x * z + y * y, y * z + z * z)
    assert G.contains(combo)
    assert not G.contains((x, Q.zero()))


def test_inhomogeneous_generators_rejected(Q):
    with pytest.raises(InvalidInput):
        ideal_basis(polys(Q, "x^2 + y"), Q)


def test_syzygies_of_koszul_row(Q):
    x, y, z = Q.gens()
    A = Matrix.from_columns(Q, (0,), [(x,), (y,), (z,)])
    S = syzygies(A)
    assert S.nrows == 3
    assert S.ncols >= 3
    assert set(S.source) == {2}
    assert A.compose(S).is_zero()


def test_syzygies_span_is_complete(Q):
    x, y, _ = Q.gens()
    A = Matrix.from_columns(Q, (0,), [(x * x,), (x * y,)])
    S = syzygies(A)
    assert S.ncols == 1
    G = matrix_basis(S)
    assert G.contains((y, -x))


def test_radical_membership(Q):
    gens = polys(Q, "x^3", "y^2*z")
    assert radical_contains(gens, Q.parse("x"))
    assert radical_contains(gens, Q.parse("y*z"))
    assert not radical_contains(gens, Q.parse("y"))


# --- dense cross-checks ---

def random_row(Q, rng):
    cols = []
    for _ in range(rng.randint(2, 4)):
        f = Q.zero()
        while f.is_zero():
            f = Q.random_homogeneous(rng.randint(1, 2), rng, density=0.3)
        cols.append((Q.monomial(f.lead()[0]),))
    return Matrix.from_columns(Q, (0,), cols)


@pytest.mark.parametrize("trial", range(6))
def test_syzygies_match_dense_kernel(Q, trial):
    rng = random.Random(trial)
    A = random_row(Q, rng)
    S = syzygies(A)
    assert A.compose(S).is_zero()
    pieces = GradedPieces(polynomial_ring(Q))
    for d in range(7):
        kernel = free_dim(pieces, A.source, d) - rank_modp(map_in_degree(pieces, A, d), Q.p)
        assert rank_modp(map_in_degree(pieces, S, d), Q.p) == kernel, d


@pytest.mark.parametrize("trial", range(6))
def test_hilbert_of_leading_terms_matches_dense_count(Q, trial):
    rng = random.Random(trial)
    gens = [Q.random_homogeneous(rng.randint(1, 3), rng) for _ in range(rng.randint(1, 3))]
    gens = [f for f in gens if not f.is_zero()] or [Q.parse("x*y")]
    H = lt_dimension_hilbert(ideal_basis(gens, Q))
    dense = oracle_hilbert(cyclic_module(polynomial_ring(Q), gens), 6)
    assert {d: H.value(d) for d in range(7)} == dense
