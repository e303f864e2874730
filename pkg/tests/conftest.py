from __future__ import annotations

import pytest

from kapparec.intersect import IntersectionOracle
from kapparec.toprec import Engine, build_curve, required_order


@pytest.fixture(scope="session")
def oracle() -> IntersectionOracle:
    return IntersectionOracle()


@pytest.fixture(scope="session")
def kw_engine() -> Engine:
    return Engine(build_curve("kw", required_order(4, 2)))


@pytest.fixture(scope="session")
def k_engine() -> Engine:
    return Engine(build_curve("k", required_order(4, 2)))


@pytest.fixture(scope="session")
def j_engine() -> Engine:
    # deep enough for the one-point chain up to genus 7
    return Engine(build_curve("j", required_order(7, 1)))


@pytest.fixture(scope="session")
def bgw_engine() -> Engine:
    return Engine(build_curve("bgw", required_order(4, 2)))


@pytest.fixture(scope="session")
def weak_k_engine() -> Engine:
    return Engine(build_curve("weak-k", required_order(3, 1), n_h=7, h_weight_cap=7))


@pytest.fixture(scope="session")
def weak_j_engine() -> Engine:
    return Engine(build_curve("weak-j", required_order(3, 1), n_h=7, h_weight_cap=7))


@pytest.fixture(scope="session")
def kstar_engine() -> Engine:
    return Engine(build_curve("kstar", required_order(2, 5)))
