from collections import OrderedDict

import pytest

from torvan.core.config import settings
from torvan.core.errors import InvalidInput, MissingMinPrimes, RingMismatch
from torvan.services import resolution_service
from torvan.services.module_service import dim_length, direct_sum, free_module, minimalize, random_module, residue_field
from torvan.services.resolution_service import (
    betti,
    depth,
    ext_profile,
    free_locus_height,
    gorenstein_probe,
    pd,
    rank_of,
    resolve,
    ring_depth,
    serre_check,
    status_flags,
    syzygy_module,
    tor_module,
    tor_profile,
    torsion_parts,
)

from .conftest import ci_ring, cyclic


def test_betti_of_line_over_node(node_modules):
    table = betti(node_modules["X"], 4)
    assert table.totals() == [1, 1, 1, 1, 1]
    assert table.as_rows() == {0: {0: 1}, 1: {1: 1}, 2: {2: 1}, 3: {3: 1}, 4: {4: 1}}


def test_betti_of_residue_field(node, xx_yy):
    assert betti(residue_field(node), 4).totals() == [1, 2, 2, 2, 2]
    assert betti(residue_field(xx_yy), 4).totals() == [1, 2, 3, 4, 5]


def test_resolution_is_a_complex(node_modules):
    res = resolve(node_modules["k"], 4)
    R = node_modules["k"].ring
    for i in range(1, 4):
        dd = res.d(i).compose(res.d(i + 1))
        assert all(R.contains(f) for c in dd.columns for f in c)


def test_default_bound_follows_settings(node_modules):
    res = resolve(node_modules["X"])
    assert res.bound == 1 + settings.EXTRA_BOUND


def test_negative_bound_rejected(node_modules):
    with pytest.raises(InvalidInput):
        resolve(node_modules["X"], -1)


def test_tor_of_node_lines(node_modules):
    profile = tor_profile(node_modules["X"], node_modules["X2"], 8)
    assert profile.lengths() == [1, 0, 1, 0, 1, 0, 1, 0]
    assert profile.finite_length_from == 1
    assert profile.periodic == {"from": 2, "even": 0, "odd": 1, "window": [2, 8]}


def test_tor_is_balanced(node_modules):
    a = tor_profile(node_modules["X"], node_modules["Y"], 5).lengths()
    b = tor_profile(node_modules["Y"], node_modules["X"], 5).lengths()
    assert a == b == [0, 1, 0, 1, 0]


def test_tor_zero_is_tensor(node_modules):
    T = tor_module(node_modules["X"], node_modules["Y"], 0)
    assert dim_length(T).length == 1


def test_tor_against_free_vanishes(node_modules):
    profile = tor_profile(node_modules["k"], node_modules["R"], 3)
    assert profile.zero_indices() == [1, 2, 3]
    assert profile.vanishes_on(1, 3)


def test_tor_across_rings_rejected(node, xx_yy):
    with pytest.raises(RingMismatch):
        tor_profile(free_module(node), free_module(xx_yy), 2)


def test_ext_profile_kind(node_modules):
    profile = ext_profile(node_modules["k"], node_modules["R"], 2)
    assert profile.kind == "ext"
    # R is Gorenstein of dimension one: Ext^1(k, R) = k
    assert profile.lengths() == [1, 0]


def test_depth_and_pd(node_modules):
    assert depth(node_modules["k"]) == 0
    assert depth(node_modules["X"]) == 1
    assert depth(node_modules["XY"]) == 0
    assert pd(node_modules["R"]) == 0
    assert pd(node_modules["XY"]) == 1
    assert pd(node_modules["X"]) == float("inf")


def test_status_flags(node_modules):
    flags = status_flags(node_modules["X"])
    assert flags.is_torsionfree and flags.is_reflexive and flags.is_mcm
    flags = status_flags(node_modules["k"])
    assert not flags.is_torsionfree and not flags.is_mcm


def test_torsion_parts_split_off_the_residue_field(node_modules):
    parts = torsion_parts(direct_sum(node_modules["X"], node_modules["k"]))
    assert dim_length(parts.torsion).length == 1
    assert parts.torsion_free.ngens == 1
    assert status_flags(parts.torsion_free).is_torsionfree


def test_serre_conditions(node_modules):
    assert serre_check(node_modules["X"], 4).holds
    assert serre_check(node_modules["k"], 0).holds
    assert not serre_check(node_modules["k"], 1).holds


def test_syzygy_of_residue_field(node_modules):
    m = syzygy_module(node_modules["k"], 1)
    assert m.gens == (1, 1)
    assert syzygy_module(node_modules["k"], 0).ngens == 1


def test_free_locus_height(node_modules):
    assert free_locus_height(node_modules["R"]) == 2
    assert free_locus_height(node_modules["X"]) == 1


def test_rank(node_modules):
    assert rank_of(node_modules["R"]) == 1
    assert rank_of(node_modules["XY"]) == 0
    # R/(x) has rank 1 at (y) and 0 at (x)
    assert rank_of(node_modules["X"]) is None


def test_rank_needs_min_primes():
    R = ci_ring(101, "xy", ["x*y"])
    with pytest.raises(MissingMinPrimes):
        rank_of(cyclic(R, "x"))


def test_gorenstein_probe(node, xx_yy):
    assert gorenstein_probe(node) == [0, 1]
    assert gorenstein_probe(xx_yy) == [1]


def test_resolution_cache_is_bounded(monkeypatch, node_modules):
    monkeypatch.setattr(resolution_service, "_resolution_cache", OrderedDict())
    monkeypatch.setattr(settings, "RESOLUTION_CACHE_SIZE", 2)
    for key in ("X", "Y", "X2"):
        resolve(node_modules[key], 3)
    assert len(resolution_service._resolution_cache) <= 2
    assert minimalize(node_modules["X2"]) in resolution_service._resolution_cache
    assert minimalize(node_modules["X"]) not in resolution_service._resolution_cache


def test_auslander_buchsbaum(node_modules, plane, rng):
    finite = [node_modules["R"], node_modules["XY"], residue_field(plane)]
    finite += [M for M in (random_module(plane, rng) for _ in range(6)) if not minimalize(M).is_zero]
    for M in finite:
        assert pd(M) != float("inf")
        assert depth(M) + pd(M) == ring_depth(M.ring), M.describe()


@pytest.mark.parametrize("key", ["R", "k", "X", "Y", "X2", "XY"])
def test_serre_conditions_match_status_flags(node_modules, key):
    M = node_modules[key]
    flags = status_flags(M)
    assert serre_check(M, 1).holds == flags.is_torsionfree
    assert serre_check(M, 2).holds == flags.is_reflexive
