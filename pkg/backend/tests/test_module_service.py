import random

import pytest

from torvan.algebra.groebner import NEG_INF
from torvan.algebra.matrix import Matrix
from torvan.core.errors import CompositionNotZero, InvalidInput, RingMismatch
from torvan.services.module_service import (
    annihilator_of_ideal,
    direct_sum,
    dim_length,
    dual_and_kappa,
    fitting_ideal,
    free_module,
    hilbert_equal,
    iso_evidence,
    kappa_cokernel,
    kappa_kernel,
    make_ideal,
    make_map,
    make_module,
    minimalize,
    random_module,
    shift,
    subquotient,
    support_contained,
    tensor,
    tensor_power,
    zero_map,
    zero_module,
)

from .conftest import cyclic


def col(R, *texts):
    return tuple(R.parse(t) for t in texts)


def test_minimalize_drops_unit_relations(node):
    M = make_module(node, (1, 0), [col(node, "1", "x")])
    Mm = minimalize(M)
    assert Mm.ngens == 1
    assert Mm.gens == (0,)
    assert Mm.relations.ncols == 0


def test_presentation_shape_checked(node):
    with pytest.raises(InvalidInput):
        make_module(node, (0, 0), [col(node, "x")])


def test_relations_reduced_modulo_ring(node):
    M = make_module(node, (0,), [col(node, "x*y")])
    assert M.relations.ncols == 0
    assert not M.is_zero


def test_tensor_of_lines_is_residue_field(node, node_modules):
    T = tensor(node_modules["X"], node_modules["Y"])
    dl = dim_length(T)
    assert (dl.dim, dl.length) == (0, 1)


def test_tensor_power_of_cyclic_is_itself(node_modules):
    X = node_modules["X"]
    T = tensor_power(X, 3)
    assert T.ngens == 1
    assert iso_evidence(T, X)["hilbert_equal"]
    with pytest.raises(InvalidInput):
        tensor_power(X, 0)


def test_tensor_across_rings_rejected(node, xx_yy):
    with pytest.raises(RingMismatch):
        tensor(free_module(node), free_module(xx_yy))


def test_dual_of_line_and_reflexivity(node_modules):
    d = dual_and_kappa(node_modules["X"])
    assert d.nu == 1
    W = kappa_kernel(d)
    assert all(d.M.contains_relation(c) for c in W.columns)
    assert kappa_cokernel(d).is_zero


def test_residue_field_is_torsion(node_modules):
    k = node_modules["k"]
    d = dual_and_kappa(k)
    assert d.nu == 0
    W = kappa_kernel(d)
    assert not all(k.contains_relation(c) for c in W.columns)


def test_fitting_ideals(node, node_modules):
    X = node_modules["X"]
    F0 = fitting_ideal(X, 0)
    assert F0.contains(node.parse("x"))
    assert not F0.contains(node.parse("y"))
    assert fitting_ideal(X, 1).is_unit()
    assert fitting_ideal(X, -1).is_zero()


def test_annihilator_of_ideal(node):
    J = make_ideal(node, [node.parse("x")])
    ann = annihilator_of_ideal(J)
    assert ann.contains(node.parse("y"))
    assert not ann.contains(node.parse("x"))
    assert ann.height == 0


def test_dim_and_length(node, node_modules):
    assert dim_length(node_modules["k"]).length == 1
    X = dim_length(node_modules["X"])
    assert X.dim == 1 and X.length == float("inf")
    Z = dim_length(zero_module(node))
    assert Z.dim == NEG_INF and Z.length == 0


def test_support_containment(node_modules):
    assert support_contained(node_modules["k"], node_modules["X"])
    assert not support_contained(node_modules["X"], node_modules["Y"])
    assert support_contained(node_modules["X"], node_modules["R"])


def test_iso_evidence_sees_hilbert_series_only(node_modules):
    ev = iso_evidence(node_modules["X"], node_modules["Y"])
    assert ev["hilbert_equal"] and ev["generator_degrees_equal"]
    assert not iso_evidence(node_modules["X"], node_modules["X2"])["hilbert_equal"]


def test_direct_sum_and_shift(node, node_modules):
    S = direct_sum(node_modules["X"], node_modules["Y"])
    assert S.ngens == 2
    assert dim_length(S).dim == 1
    assert shift(node_modules["X"], 2).gens == (2,)


def test_subquotient_of_multiplication_maps(node):
    Q = node.ambient
    x, y = Q.var("x"), Q.var("y")
    by_y = make_map(free_module(node, (1,)), free_module(node, (0,)), Matrix.from_columns(Q, (0,), [(y,)]))
    by_x = make_map(free_module(node, (2,)), free_module(node, (1,)), Matrix.from_columns(Q, (1,), [(x,)]))
    # ker(y) = (x) = im(x) over the node
    assert subquotient(by_y, by_x).is_zero
    H = subquotient(by_y, zero_map(free_module(node, (2,)), free_module(node, (1,))))
    assert H.ngens == 1
    assert dim_length(H).dim == 1


def test_subquotient_needs_a_complex(node):
    Q = node.ambient
    y = Q.var("y")
    g = make_map(free_module(node, (1,)), free_module(node, (0,)), Matrix.from_columns(Q, (0,), [(y,)]))
    f = make_map(free_module(node, (2,)), free_module(node, (1,)), Matrix.from_columns(Q, (1,), [(y,)]))
    with pytest.raises(CompositionNotZero):
        subquotient(g, f)


def test_random_modules_are_seeded(node):
    a = random_module(node, random.Random(7))
    b = random_module(node, random.Random(7))
    assert a.gens == b.gens
    assert a.relations.to_columns_text() == b.relations.to_columns_text()


def test_cyclic_helper_matches_file_form(node):
    M = cyclic(node, "x", "y")
    assert dim_length(M).length == 1


@pytest.mark.parametrize("seed", range(4))
def test_fitting_ideals_increase(node, seed):
    M = random_module(node, random.Random(seed))
    for r in range(4):
        lower, upper = fitting_ideal(M, r), fitting_ideal(M, r + 1)
        assert all(upper.contains(f) for f in lower.gens), r


def test_tensor_is_symmetric(node, node_modules, a1):
    assert hilbert_equal(tensor(node_modules["X"], node_modules["X2"]), tensor(node_modules["X2"], node_modules["X"]))
    assert hilbert_equal(tensor(node_modules["XY"], node_modules["k"]), tensor(node_modules["k"], node_modules["XY"]))
    rng = random.Random(11)
    for R in (node, a1):
        M, N = random_module(R, rng), random_module(R, rng)
        assert hilbert_equal(tensor(M, N), tensor(N, M))
