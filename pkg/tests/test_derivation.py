import pytest

from conftest import model_path
from cli.model_file import load_model, parse_model
from dga.derivation import Derivation, check_d_squared, check_ideal_stable, differential_of
from errors import UsageError
from graded.algebra import Algebra, Generator, tensor_algebra


def test_zeta_on_a_product_of_odd_generators():
    algebra = Algebra([Generator("a", 3), Generator("b", 3), Generator("abar", 2), Generator("bbar", 2)])
    a, b, abar, bbar = (algebra.gen(n) for n in ("a", "b", "abar", "bbar"))
    zeta = Derivation(algebra, -1, {"a": abar, "b": bbar, "abar": algebra.zero(), "bbar": algebra.zero()})
    assert zeta(a * b) == abar * b - a * bbar


def test_leibniz_with_odd_factor(example_free):
    tensor = tensor_algebra(example_free)
    d = differential_of(tensor)
    a, a_, b, b_, u, u_ = (tensor.gen(n) for n in ("a", "a'", "b", "b'", "u", "u'"))
    assert d(u * u_) == a * b * u_ - u * a_ * b_


def test_derivation_without_value_is_usage_error():
    algebra = Algebra([Generator("a", 3)])
    with pytest.raises(UsageError):
        Derivation(algebra, 1, {})(algebra.gen("a"))


def test_derivation_value_degree_is_checked():
    algebra = Algebra([Generator("a", 3), Generator("b", 3)])
    with pytest.raises(UsageError):
        Derivation(algebra, 1, {"a": algebra.gen("b")})


def test_d_squared_passes_on_example(example_free):
    assert check_d_squared(example_free, 12) is None


def test_d_squared_reports_first_failure():
    model = load_model(model_path("broken"))
    algebra = model.free_algebra(12)
    name, residual = check_d_squared(algebra, 12)
    assert name == "u"
    assert residual == algebra.gen("e")


def test_ideal_stability():
    stable = parse_model("generator e 2\ngenerator y 3\nd y = e^2\nrelation e^2\nrelation y\n")
    assert check_ideal_stable(stable.quotient_algebra(12), 13) is None

    unstable = parse_model("generator e 2\ngenerator y 3\nd y = e^2\nrelation y\n")
    relation, residual = check_ideal_stable(unstable.quotient_algebra(12), 13)
    assert str(relation) == "y"
    assert str(residual) == "e^2"


def test_d_squared_respects_a_smaller_bound():
    algebra = load_model(model_path("broken")).free_algebra(12)
    assert check_d_squared(algebra, 3) is None
    assert check_d_squared(algebra, 4)[0] == "u"
