from itertools import permutations

import pytest
from sympy import QQ

from conftest import model_path
from cli.model_file import load_model
from errors import UsageError
from graded.algebra import Algebra, AlgebraMorphism, Generator, tensor_algebra
from semifree.base_module import UNIT, JoinGenerator, is_minimal
from semifree.extensions import base_change
from semifree.joins import iterated_join
from secat.path_fibration import path_fibration_model

HALF = QQ(1, 2)


@pytest.fixture(scope="module")
def example_path(example_free):
    return path_fibration_model(example_free, 12)


@pytest.fixture(scope="module")
def example_module(example_path, example_algebra):
    return example_path.over(tensor_algebra(example_algebra))


def test_bar_differentials_of_the_example(example_path):
    P = example_path.path_algebra
    g = P.gen
    assert example_path.bar_names == {"a": "abar", "b": "bbar", "u": "ubar"}
    assert example_path.bar_differential("a") == g("a'") - g("a")
    assert example_path.bar_differential("b") == g("b'") - g("b")
    expected = (
        g("u'") - g("u")
        - ((g("b") + g("b'")) * g("abar")).scale(HALF)
        + ((g("a") + g("a'")) * g("bbar")).scale(HALF)
    )
    assert example_path.bar_differential("u") == expected


def test_bar_differential_of_the_even_sphere():
    model = load_model(model_path("even_sphere"))
    path = path_fibration_model(model.free_algebra(10), 10)
    g = path.path_algebra.gen
    assert path.bar_differential("y") == g("y'") - g("y") - (g("e") + g("e'")) * g("ebar")


def test_zeta_is_an_odd_derivation(example_path):
    g = example_path.path_algebra.gen
    assert example_path.zeta(g("a")) == g("abar")
    assert example_path.zeta(g("a'")) == g("abar")
    assert example_path.zeta(g("abar")).is_zero()
    assert example_path.zeta(g("a") * g("b")) == g("abar") * g("b") - g("a") * g("bbar")


def test_module_is_minimal_with_d_squared_zero(example_path, example_module):
    assert example_path.extension.check_d_squared(10) is None
    assert example_module.check_d_squared(10) is None
    assert is_minimal(example_module, 10)
    assert [str(x) for x in example_module.generators_of_degree(2)] == ["abar", "bbar"]


def test_two_fold_join_kills_z(example_path, example_module):
    """The alternating sum over orderings of (abar, bbar, ubar) bounds -6z."""
    base = example_module.base
    g = base.gen
    joined = iterated_join(example_module, 2)
    bars = [example_path.bar_label(name) for name in ("a", "b", "u")]
    assert sum(x.degree for x in bars) + 2 == 10

    combination = joined.zero()
    for order in permutations(range(3)):
        inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if order[i] > order[j])
        label = JoinGenerator(2, tuple(bars[i] for i in order))
        combination = combination + joined.generator_element(label, base.scalar(-1 if inversions % 2 else 1))

    z = (g("a'") - g("a")) * (g("b'") - g("b")) * (g("u'") - g("u"))
    assert not z.is_zero()
    assert joined.apply_d(combination) == joined.generator_element(UNIT, z.scale(-6))


def test_augmentation_leaves_no_constant_terms_on_two_fold_join(example_module):
    joined = iterated_join(example_module, 2)
    changed = base_change(joined, AlgebraMorphism.augmentation(example_module.base))
    labels = changed.generators_up_to(10)
    assert labels
    assert all(label.order == 2 for label in labels)
    for label in labels:
        d0, dplus = changed.decompose_differential(label)
        assert d0.is_zero()
        assert all(coefficient.is_zero() for coefficient, _ in dplus)


def test_degree_one_generator_is_rejected():
    algebra = Algebra([Generator("t", 1)]).with_differential({})
    with pytest.raises(UsageError):
        path_fibration_model(algebra, 6)


def test_quotient_algebra_is_rejected(example_algebra):
    with pytest.raises(UsageError):
        path_fibration_model(example_algebra, 12)
