from fractions import Fraction

import pytest

from src.floyd.automorphism import SIGMA, AutWord, FinitaryPortrait, LocalPermutation, conjugate
from src.floyd.floyd_metric import FloydFunction, MetricSpec
from src.floyd.tree_core import TreeConfig
from src.utils.settings import reset_settings, update_setting


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path):
    reset_settings()
    update_setting("log_dir", str(tmp_path / "log"))
    yield
    reset_settings()


@pytest.fixture
def t3() -> TreeConfig:
    return TreeConfig(3)


@pytest.fixture
def geo_half() -> FloydFunction:
    return FloydFunction.geometric(1, Fraction(1, 2))


@pytest.fixture
def power2() -> FloydFunction:
    return FloydFunction.power(2)


@pytest.fixture
def subgeo_half() -> FloydFunction:
    return FloydFunction.subgeometric(1, Fraction(1, 2))


@pytest.fixture
def geo_spec(t3, geo_half) -> MetricSpec:
    return MetricSpec(t3, geo_half)


def portrait(tree: TreeConfig, perms: dict, depth: int = 1) -> AutWord:
    """One-generator word; perms maps letter tuples to image tuples."""
    table = {tree.vertex(*address): LocalPermutation(images) for address, images in perms.items()}
    return AutWord(tree, (FinitaryPortrait(tree, table, depth),))


@pytest.fixture
def sigma(t3) -> AutWord:
    return AutWord(t3, (SIGMA,))


@pytest.fixture
def off_axis_translation(t3, sigma) -> AutWord:
    """A unitary translation whose axis passes at distance 1 from the root."""
    swap_12 = portrait(t3, {(): (0, 2, 1)})
    mover = conjugate(sigma, swap_12)
    return conjugate(sigma, mover)
