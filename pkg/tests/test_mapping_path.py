import pytest

from conftest import model_path
from cli.model_file import load_model
from graded.algebra import Algebra, Generator, tensor_algebra
from secat.path_fibration import path_fibration_model
from semifree.base_module import UNIT, FormalGenerator
from semifree.extensions import TableExtension
from semifree.mapping_path import (
    MappingPathLabel,
    MappingPathModule,
    MappingPathQModule,
    mapping_path_constructions,
    mapping_path_factorization,
)

BOUND = 7


def _odd_base():
    return Algebra([Generator("a", 3)]).with_differential({})


def _killing_a():
    algebra = _odd_base()
    return TableExtension(algebra, [FormalGenerator("x", 2)], {"x": algebra.gen("a")}, name="M")


def _killing_e_squared():
    algebra = Algebra([Generator("e", 2)]).with_differential({})
    return TableExtension(algebra, [FormalGenerator("x", 3)], {"x": algebra.gen("e") ** 2}, name="M")


def _unit_coefficient():
    algebra = _odd_base()
    return TableExtension(
        algebra,
        [FormalGenerator("x", 2), FormalGenerator("y", 1)],
        dplus={"y": [(algebra.one(), "x")]},
        name="M",
    )


def _odd_sphere_path_module():
    model = load_model(model_path("odd_sphere"))
    free = model.free_algebra(BOUND + 2)
    return path_fibration_model(free, BOUND + 2).over(tensor_algebra(model.quotient_algebra(BOUND + 2)))


INSTANCES = [
    (_killing_a(), _killing_a()),
    (_killing_e_squared(), _killing_e_squared()),
    (_unit_coefficient(), _killing_a()),
    (_odd_sphere_path_module(), _odd_sphere_path_module()),
]


@pytest.mark.parametrize("left, right", INSTANCES)
def test_constructions_verify(left, right):
    constructions = mapping_path_constructions(left, right).verify(BOUND)
    assert constructions.checked_up_to == BOUND
    assert constructions.betti_numbers["J"] == constructions.betti_numbers["join"]
    assert constructions.betti_numbers["N"] == constructions.betti_numbers["Q"]


@pytest.mark.parametrize("left, right", INSTANCES)
def test_factorization_through_q_verifies(left, right):
    factorization = mapping_path_factorization(left, right).verify(BOUND)
    assert factorization.checked_up_to == BOUND
    assert factorization.betti_numbers["N"] == factorization.betti_numbers["Q"]
    assert factorization.Q.check_d_squared(BOUND) is None


def test_j_composed_with_f_is_the_inclusion():
    module = _killing_a()
    constructions = mapping_path_constructions(module, module)
    a = module.base.gen("a")
    assert constructions.f(constructions.j(a)) == constructions.join.generator_element(UNIT, a)


def test_suspension_sign_rule():
    module = _killing_a()
    J = MappingPathModule(module, module)
    x = module.generator("x")
    a = module.base.gen("a")
    label = MappingPathLabel("s", x=x)
    assert label.degree == 3
    assert J.suspended(a, x=x) == J.generator_element(label, -a)
    assert J.suspended(a * a + module.base.one(), x=x) == J.generator_element(label, module.base.one())


def test_J_differential_on_suspended_pairs():
    module = _killing_a()
    J = MappingPathModule(module, module)
    x = module.generator("x")
    # D s^-1(x⊗1) = -s^-1(d0x) = -(-1)^{|a|} a s^-1 1 = a s^-1 1
    expected = J.generator_element(MappingPathLabel("s"), module.base.gen("a"))
    assert J.differential(MappingPathLabel("s", x=x)) == expected
    assert J.check_d_squared(BOUND) is None


def test_q_differential_on_tensor_and_n_generators():
    module = _killing_a()
    Q = MappingPathQModule(module, module)
    x, a, one = module.generator("x"), module.base.gen("a"), module.base.one()
    # D(x⊗1) = d0x·(1⊗1) + s^-1(x⊗1)
    assert Q.differential(MappingPathLabel("T", x=x)) == Q.element({
        MappingPathLabel("T"): a,
        MappingPathLabel("s", x=x): one,
    })
    # D(y_N) = d0y·1_N + s^-1(1⊗y)
    assert Q.differential(MappingPathLabel("N", y=x)) == Q.element({
        MappingPathLabel("N"): a,
        MappingPathLabel("s", y=x): one,
    })
    assert [str(label) for label in Q.generators_of_degree(0)] == ["1_T", "1_N"]


def test_i_and_projection_compose_to_nu():
    module = _killing_a()
    factorization = mapping_path_factorization(module, module)
    x, a = module.generator("x"), module.base.gen("a")
    n = module.element({x: a, UNIT: module.base.one()})
    image = factorization.i(n)
    assert image == factorization.Q.element({
        MappingPathLabel("T", y=x): a,
        MappingPathLabel("N", y=x): -a,
        MappingPathLabel("T"): module.base.one(),
        MappingPathLabel("N"): -module.base.one(),
    })
    assert factorization.pi(image) == factorization.nu(n)
    assert factorization.nu(n) == factorization.tensor.element({UNIT: module.base.one(), MappingPathLabel("T", y=x): a})
