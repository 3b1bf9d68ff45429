import random
import sys
from pathlib import Path

import pytest

SRC_DIR = Path(__file__).resolve().parent.parent / "src"
sys.path.insert(0, str(SRC_DIR))

from torvan.algebra.polyalg import PolyRing  # noqa: E402
from torvan.core.config import settings  # noqa: E402
from torvan.services.module_service import cyclic_module, free_module, residue_field  # noqa: E402
from torvan.services.ring_service import make_ci_ring  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale examples, opt-in with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


# --- rings ---

def ci_ring(p, names, relations, primes=None, name=None):
    Q = PolyRing(p, tuple(names))
    rels = [Q.parse(f) for f in relations]
    min_primes = [[Q.parse(f) for f in P] for P in primes] if primes is not None else None
    return make_ci_ring(Q, rels, min_primes=min_primes, name=name)


@pytest.fixture(scope="module")
def node():
    """F_101[x,y]/(xy)."""
    return ci_ring(101, "xy", ["x*y"], [["x"], ["y"]], name="node")


@pytest.fixture(scope="module")
def xx_yy():
    """F_101[x,y]/(x^2, y^2): codimension two, dimension zero."""
    return ci_ring(101, "xy", ["x^2", "y^2"], [["x", "y"]], name="xx_yy")


@pytest.fixture(scope="module")
def a1():
    return ci_ring(101, "xyz", ["x*y - z^2"], [["x*y - z^2"]], name="a1")


@pytest.fixture(scope="module")
def plane():
    """F_101[x,y], the regular ring."""
    return ci_ring(101, "xy", [], name="plane")


# --- modules over the node ---

def cyclic(R, *gens, twist=0, name=None):
    return cyclic_module(R, [R.parse(g) for g in gens], twist, name=name)


@pytest.fixture(scope="module")
def node_modules(node):
    return {
        "R": free_module(node, name="R"),
        "k": residue_field(node),
        "X": cyclic(node, "x", name="R/(x)"),
        "Y": cyclic(node, "y", name="R/(y)"),
        "X2": cyclic(node, "x^2", name="R/(x^2)"),
        "XY": cyclic(node, "x + y", name="R/(x+y)"),
    }


@pytest.fixture
def rng():
    return random.Random(settings.RANDOM_SEED)
