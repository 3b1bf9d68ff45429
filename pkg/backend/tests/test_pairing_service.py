import itertools
from fractions import Fraction

import pytest

from torvan.algebra.groebner import NEG_INF
from torvan.core.errors import (
    Divergent,
    FitFailed,
    InvalidInput,
    NotHypersurface,
    NotStabilized,
    TailNotFiniteLength,
    TorvanError,
)
from torvan.services.module_service import residue_field
from torvan.services.pairing_service import eta, eta_from_profile, theta, theta_from_profile
from torvan.services.resolution_service import TorEntry, TorProfile

from .conftest import cyclic


def profile_of(M, lengths, finite_from=1, dims=None):
    """Tor profile with the given lengths at indices 1..B; Tor_0 is left of positive dimension."""
    entries = [TorEntry(0, 1, float("inf"), ())]
    for i, length in enumerate(lengths, start=1):
        if dims is not None:
            d = dims[i - 1]
        else:
            d = 0 if length else NEG_INF
        entries.append(TorEntry(i, d, length, ()))
    return TorProfile(M, M, len(lengths), tuple(entries), finite_from)


# --- theta ---

def test_theta_of_node_lines(node_modules):
    assert theta(node_modules["X"], node_modules["X2"], 8).value == -1
    assert theta(node_modules["X"], node_modules["X"], 8).value == -1
    assert theta(node_modules["Y"], node_modules["X"], 8).value == 1


def test_theta_against_free_module_is_zero(node_modules):
    assert theta(node_modules["R"], node_modules["X"], 8).value == 0


def test_theta_certificate(node_modules):
    result = theta(node_modules["X"], node_modules["X2"], 8)
    assert result.kind == "theta"
    assert result.certificate["window"] == [5, 8]
    assert result.certificate["even_length"] == 0
    assert result.certificate["odd_length"] == 1
    assert not result.divergent


def test_theta_over_a1(a1):
    M = cyclic(a1, "x", "z")
    # Tor_1 has positive dimension; the tail is 1, 1, 1, ...
    assert theta(M, M, 6).value == 0


def test_theta_needs_a_hypersurface(xx_yy):
    k = residue_field(xx_yy)
    with pytest.raises(NotHypersurface):
        theta(k, k, 6)


def test_theta_needs_a_stable_window(node_modules):
    X = node_modules["X"]
    with pytest.raises(NotStabilized):
        theta_from_profile(profile_of(X, [1, 0, 1, 0, 1, 0, 2, 0]))


def test_theta_needs_finite_length_window(node_modules):
    X = node_modules["X"]
    with pytest.raises(TailNotFiniteLength):
        theta_from_profile(profile_of(X, [1, 0, 1, 0, 1, 0, 1, 0], dims=[0, -1, 0, -1, 1, -1, 0, -1]))


def test_theta_needs_bound_four(node_modules):
    with pytest.raises(InvalidInput):
        theta_from_profile(profile_of(node_modules["X"], [1, 0, 1]))


# --- eta ---

def test_eta_one_of_node_lines(node_modules):
    result = eta(node_modules["X"], node_modules["X2"], 1, bound=8)
    assert result.value == Fraction(-1, 2)
    assert result.e == 1
    assert result.certificate["fit_window"] == [2, 6]
    assert result.certificate["validation_indices"] == [7, 8]


def test_eta_above_codimension_vanishes(node_modules):
    assert eta(node_modules["X"], node_modules["X2"], 2, bound=8).value == 0


def test_eta_two_of_residue_field_in_codimension_two(xx_yy):
    k = residue_field(xx_yy)
    assert eta(k, k, 2, bound=10).value == 0


def test_eta_of_constant_lengths(node_modules):
    result = eta_from_profile(profile_of(node_modules["X"], [3] * 8), 1)
    assert result.value == 0
    assert result.certificate["fit_polynomials"] == {"even": ["3"], "odd": ["3"]}


def test_eta_divergence(xx_yy):
    k = residue_field(xx_yy)
    profile = profile_of(k, [i + 1 for i in range(1, 11)])
    with pytest.raises(Divergent) as err:
        eta_from_profile(profile, 1)
    assert err.value.field == "e"
    result = eta_from_profile(profile, 1, allow_divergent=True)
    assert result.value is None and result.divergent
    assert eta_from_profile(profile, 2).value == 0


def test_eta_fit_must_validate(node_modules):
    profile = profile_of(node_modules["X"], [1, 0, 1, 0, 1, 0, 1, 5])
    with pytest.raises(FitFailed) as err:
        eta_from_profile(profile, 1)
    assert err.value.details["index"] == 8


def test_eta_needs_finite_length_tail(node_modules):
    profile = profile_of(node_modules["X"], [1, 0, 1, 0, 1, 0, 1, 0], finite_from=None)
    with pytest.raises(TailNotFiniteLength):
        eta_from_profile(profile, 1)


def test_eta_rejects_bad_parameters(node_modules):
    profile = profile_of(node_modules["X"], [1, 0, 1, 0, 1, 0, 1, 0])
    with pytest.raises(InvalidInput):
        eta_from_profile(profile, 0)
    with pytest.raises(InvalidInput) as err:
        eta_from_profile(profile_of(node_modules["X"], [1, 0, 1, 0, 1, 0, 1, 0], finite_from=2), 1, start=1)
    assert err.value.field == "start"


def test_eta_ignores_a_finite_prefix(node_modules):
    full = eta(node_modules["X"], node_modules["X2"], 1, bound=10)
    late = eta(node_modules["X"], node_modules["X2"], 1, bound=10, start=5)
    assert late.certificate["start"] == 5
    assert late.value == full.value


def test_eta_one_is_half_of_theta_on_the_node(node_modules):
    compared = 0
    for a, b in itertools.product(sorted(node_modules), repeat=2):
        M, N = node_modules[a], node_modules[b]
        try:
            t = theta(M, N, bound=10)
            e1 = eta(M, N, 1, bound=10)
        except TorvanError:
            continue
        assert e1.value == t.value / 2, (a, b)
        compared += 1
    assert compared > 0
