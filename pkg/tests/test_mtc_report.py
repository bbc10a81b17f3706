import pytest

from conftest import model_path
from cli.model_file import load_model, parse_polynomial
from errors import IntegrityError
from dga.cohomology import NilVerdict
from secat.bounds import (
    LOWER_H_INJECTIVITY,
    LOWER_NIL_KER_CUP,
    UPPER_NIL_KER_MU,
    UPPER_RETRACTION,
    BoundCertificate,
)
from mtc_report import MtcReport, _check_consistency, check_model_algebra, mtc_report


@pytest.fixture(scope="module")
def example_report(nonformal_wedge):
    return mtc_report(nonformal_wedge, n_max=3, max_degree=12)


def test_example_is_exactly_three(example_report):
    assert example_report.lower == 3
    assert example_report.upper == 3
    assert example_report.exact
    assert str(example_report.nil_ker_cup) == "2"
    assert str(example_report.nil_ker_mu) == "3"


def test_example_headline(example_report):
    headline = example_report.headline()
    assert headline.startswith("MTC = 3 (lower: H-failure n=2 deg 11, witness ")
    assert headline.endswith("upper: nil ker μ = 3)")


def test_example_level_table(example_report):
    rows = example_report.table()
    assert [row["n"] for row in rows] == [0, 1, 2]
    assert [row["failing_degree"] for row in rows] == [3, 6, 11]
    assert all(row["retraction"] == "skipped" for row in rows)


@pytest.mark.parametrize("name, expected", [
    ("even_sphere", 2),
    ("even_sphere_formal", 2),
    ("odd_sphere", 1),
])
def test_small_models(name, expected):
    report = mtc_report(load_model(model_path(name)), n_max=3, max_degree=10)
    assert report.exact
    assert report.lower == expected
    assert report.headline().startswith(f"MTC = {expected} ")


def test_formal_model_runs_module_bounds():
    report = mtc_report(load_model(model_path("even_sphere_formal")), n_max=3, max_degree=10)
    assert report.formal
    assert [(level.n, level.injective, level.degree) for level in report.h_levels] == [(0, False, 2), (1, False, 4)]
    h_lower = [c for c in report.certificates if c.kind == LOWER_H_INJECTIVITY]
    assert [c.value for c in h_lower] == [2]
    assert report.nil_ker_mu.exact and report.nil_ker_mu.value == 2
    assert report.exact and report.lower == 2


def test_broken_model_is_rejected():
    model = load_model(model_path("broken"))
    with pytest.raises(IntegrityError):
        check_model_algebra(model, 8)
    with pytest.raises(IntegrityError):
        mtc_report(model, n_max=2, max_degree=8)


def test_open_interval_headline():
    report = MtcReport("m", 8, 2, False, NilVerdict(value=1), NilVerdict(at_least=3))
    report.certificates.append(BoundCertificate(LOWER_NIL_KER_CUP, 1, 8))
    report.certificates.append(BoundCertificate(UPPER_RETRACTION, 2, 8, conclusive=False, n=2))
    assert report.upper is None
    assert not report.exact
    assert report.headline() == "1 <= MTC <= ? (lower: nil ker ∪ = 1; upper: none)"


def test_contradicting_certificates_raise():
    report = MtcReport("m", 8, 2, False, NilVerdict(value=3), NilVerdict(value=1))
    report.certificates.append(BoundCertificate(LOWER_NIL_KER_CUP, 3, 8))
    report.certificates.append(BoundCertificate(UPPER_NIL_KER_MU, 1, 8))
    with pytest.raises(IntegrityError):
        _check_consistency(report)


def test_witness_prints_reparseably(example_report):
    witness = example_report.h_levels[2].witness
    assert parse_polynomial(str(witness), witness.algebra) == witness
