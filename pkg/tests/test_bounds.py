import pytest

from conftest import model_path
from cli.model_file import load_model, parse_model
from graded.algebra import Algebra, Generator, tensor_algebra
from semifree.base_module import FormalGenerator
from semifree.extensions import TableExtension
from secat.bounds import (
    LOWER_H_INJECTIVITY,
    LOWER_RETRACTION,
    UPPER_RETRACTION,
    BoundCertificate,
    msecat_lower_via_H,
    nil_ker_mu_ideal,
    retraction_problem,
    retraction_search,
)
from secat.path_fibration import path_fibration_model


def _path_module(name: str, max_degree: int):
    model = load_model(model_path(name))
    tensor = tensor_algebra(model.quotient_algebra(max_degree))
    module = path_fibration_model(model.free_algebra(max_degree), max_degree).over(tensor)
    return tensor, module


class TestNilKerMu:

    def test_example_is_three(self, example_algebra):
        verdict = nil_ker_mu_ideal(example_algebra, 4, 12)
        assert verdict.exact
        assert verdict.value == 3
        assert verdict.witness == ("a", "b", "u")

    def test_odd_sphere_is_one(self):
        algebra = load_model(model_path("odd_sphere")).quotient_algebra(10)
        assert nil_ker_mu_ideal(algebra, 3, 10).value == 1

    def test_even_sphere_is_two(self):
        algebra = load_model(model_path("even_sphere")).quotient_algebra(10)
        assert nil_ker_mu_ideal(algebra, 3, 10).value == 2

    def test_search_cap_gives_lower_bound(self, example_algebra):
        verdict = nil_ker_mu_ideal(example_algebra, 1, 12)
        assert not verdict.exact
        assert verdict.lower == 2
        assert str(verdict) == ">= 2"

    def test_no_generators(self):
        assert nil_ker_mu_ideal(Algebra([]), 3, 6).value == 0


@pytest.fixture(scope="module")
def example_levels():
    tensor, module = _path_module("nonformal_wedge", 12)
    return msecat_lower_via_H(tensor, module, 2, 12)


class TestHLower:

    def test_failures_at_every_order_below_three(self, example_levels):
        assert [level.injective for level in example_levels.levels] == [False, False, False]
        assert [level.degree for level in example_levels.levels] == [3, 6, 11]
        assert example_levels.largest_failing == 2

    def test_certificate(self, example_levels):
        certificate = example_levels.certificate
        assert certificate.kind == LOWER_H_INJECTIVITY
        assert certificate.value == 3
        assert certificate.is_lower
        assert certificate.n == 2
        assert certificate.degree == 11

    def test_witness_is_killed_by_primitive(self, example_levels):
        level = example_levels.levels[0]
        assert level.witness.degree == 3
        joined = level.primitive.module
        assert joined.apply_d(level.primitive).unit_part() == level.witness

    def test_odd_sphere_fails_only_at_order_zero(self):
        tensor, module = _path_module("odd_sphere", 8)
        result = msecat_lower_via_H(tensor, module, 1, 8)
        assert [level.injective for level in result.levels] == [False, True]
        assert result.certificate.value == 1

    def test_even_sphere_fails_at_order_one(self):
        tensor, module = _path_module("even_sphere", 10)
        result = msecat_lower_via_H(tensor, module, 1, 10)
        assert [(level.n, level.injective, level.degree) for level in result.levels] == [(0, False, 2), (1, False, 4)]
        assert result.certificate.value == 2
        assert result.certificate.n == 1


class TestRetraction:

    def test_trivial_module_retracts_at_order_zero(self):
        base = Algebra([Generator("a", 3)]).with_differential({})
        module = TableExtension(base, [], name="A")
        result = retraction_search(retraction_problem(base, module, 0, 6))
        assert result.feasible
        assert result.conclusive
        assert result.certificate.kind == UPPER_RETRACTION
        assert result.certificate.value == 0

    def test_odd_sphere_retracts_at_order_one(self):
        tensor, module = _path_module("odd_sphere", 8)
        result = retraction_search(retraction_problem(tensor, module, 1, 8))
        assert result.feasible
        assert result.conclusive
        assert result.certificate.value == 1

    def test_odd_sphere_has_no_section(self):
        tensor, module = _path_module("odd_sphere", 8)
        result = retraction_search(retraction_problem(tensor, module, 0, 8))
        assert not result.feasible
        assert result.first_failing_degree == 3
        certificate = result.certificate
        assert certificate.kind == LOWER_RETRACTION
        assert certificate.value == 1
        assert set(certificate.witness) == {"unknowns", "equations", "rank", "augmented_rank", "sha256"}
        assert int(certificate.witness["augmented_rank"]) == int(certificate.witness["rank"]) + 1

    def test_feasible_below_top_degree_is_evidence_only(self):
        tensor, module = _path_module("odd_sphere", 8)
        result = retraction_search(retraction_problem(tensor, module, 1, 4))
        assert result.feasible
        assert not result.conclusive
        assert "evidence up to degree 4" in result.certificate.summary()

    def test_example_has_no_retraction_at_order_two(self, example_levels):
        tensor, module = _path_module("nonformal_wedge", 12)
        result = retraction_search(retraction_problem(tensor, module, 2, 12))
        assert not result.feasible
        assert result.first_failing_degree == 11
        assert result.certificate.kind == LOWER_RETRACTION
        assert result.certificate.value == 3
        level = example_levels.levels[2]
        assert not level.injective
        assert level.degree == result.first_failing_degree

    def test_unit_dplus_coefficient_reaching_the_degree_bound(self):
        base = Algebra([Generator("e", 2)]).with_differential({})
        module = TableExtension(
            base,
            [FormalGenerator("x", 2), FormalGenerator("y", 1)],
            dplus={"y": [(base.one(), "x")]},
            name="M",
        )
        result = retraction_search(retraction_problem(base, module, 0, 2))
        assert result.feasible
        assert not result.conclusive
        assert result.certificate.kind == UPPER_RETRACTION


@pytest.mark.parametrize("name, n_max, low, high", [
    ("odd_sphere", 1, 5, 8),
    ("even_sphere", 1, 6, 9),
    ("nonformal_wedge", 1, 8, 10),
])
def test_lower_certificate_survives_a_larger_degree_bound(name, n_max, low, high):
    certificates = []
    for bound in (low, high):
        tensor, module = _path_module(name, bound)
        certificates.append(msecat_lower_via_H(tensor, module, n_max, bound).certificate)
    coarse, fine = certificates
    assert coarse is not None
    assert (fine.value, fine.n, fine.degree) == (coarse.value, coarse.n, coarse.degree)


@pytest.mark.parametrize("orders, n, bound", [
    (("generator a 3\ngenerator c 5\n", "generator c 5\ngenerator a 3\n"), 0, 9),
    (("generator a 3\ngenerator c 5\n", "generator c 5\ngenerator a 3\n"), 1, 9),
    ((
        "generator a 3\ngenerator b 3\ngenerator u 5\nd u = a*b\ntruncate 9\n",
        "generator b 3\ngenerator a 3\ngenerator u 5\nd u = a*b\ntruncate 9\n",
    ), 0, 8),
])
def test_retraction_feasibility_ignores_generator_order(orders, n, bound):
    outcomes = set()
    for text in orders:
        model = parse_model(text)
        tensor = tensor_algebra(model.quotient_algebra(bound))
        module = path_fibration_model(model.free_algebra(bound), bound).over(tensor)
        result = retraction_search(retraction_problem(tensor, module, n, bound))
        outcomes.add((result.feasible, result.first_failing_degree))
    assert len(outcomes) == 1


def test_certificate_summary():
    certificate = BoundCertificate(
        kind=LOWER_H_INJECTIVITY, value=3, validity_degree=12, n=2, degree=11, witness={"witness": "z"},
    )
    assert certificate.summary() == "MTC >= 3 via lower(H-injectivity): n=2, deg 11, witness=z"
