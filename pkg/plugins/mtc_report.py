"""
MTC Report Orchestrator

Runs every bound producer on one model and combines their certificates into
an interval [lower, upper] for MTC.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional
import sys
import os

# Add paths
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.config import MAX_DEGREE, MAX_N
from errors import IntegrityError
from graded.algebra import Algebra, tensor_algebra
from dga.cohomology import NilVerdict, cohomology_ring, nil_ker_mult
from dga.derivation import check_d_squared, check_ideal_stable
from secat.bounds import (
    LOWER_NIL_KER_CUP,
    UPPER_NIL_KER_MU,
    BoundCertificate,
    HLevel,
    RetractionResult,
    msecat_lower_via_H,
    nil_ker_mu_ideal,
    retraction_problem,
    retraction_search,
)
from secat.path_fibration import path_fibration_model
from cli.model_file import ModelFile

logger = logging.getLogger(__name__)


@dataclass
class MtcReport:
    """All certificates for one model, with the combined interval."""
    model_name: str
    max_degree: int
    n_max: int
    formal: bool
    nil_ker_cup: NilVerdict
    nil_ker_mu: NilVerdict
    certificates: List[BoundCertificate] = field(default_factory=list)
    h_levels: List[HLevel] = field(default_factory=list)
    retractions: Dict[int, RetractionResult] = field(default_factory=dict)

    @property
    def lower(self) -> int:
        return max((c.value for c in self.certificates if c.is_lower), default=0)

    @property
    def upper(self) -> Optional[int]:
        values = [c.value for c in self.certificates if not c.is_lower and c.conclusive]
        return min(values) if values else None

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper

    def best(self, lower: bool) -> Optional[BoundCertificate]:
        if lower:
            candidates = [c for c in self.certificates if c.is_lower and c.value == self.lower]
        else:
            candidates = [c for c in self.certificates if not c.is_lower and c.conclusive and c.value == self.upper]
        return candidates[0] if candidates else None

    def headline(self) -> str:
        lower = self.best(True)
        upper = self.best(False)
        lower_text = _describe(lower) if lower else "none"
        upper_text = _describe(upper) if upper else "none"
        if self.exact:
            return f"MTC = {self.lower} (lower: {lower_text}; upper: {upper_text})"
        bound = "?" if self.upper is None else str(self.upper)
        return f"{self.lower} <= MTC <= {bound} (lower: {lower_text}; upper: {upper_text})"

    def table(self) -> List[Dict]:
        """One row per join order examined."""
        rows = []
        for level in self.h_levels:
            retraction = self.retractions.get(level.n)
            rows.append({
                "n": level.n,
                "h_injective": level.injective,
                "failing_degree": level.degree,
                "witness": None if level.witness is None else str(level.witness),
                "retraction": _retraction_status(retraction),
            })
        return rows


def _describe(certificate: BoundCertificate) -> str:
    if certificate.kind == UPPER_NIL_KER_MU:
        return f"nil ker μ = {certificate.value}"
    if certificate.kind == LOWER_NIL_KER_CUP:
        return f"nil ker ∪ = {certificate.value}"
    if certificate.witness.get("witness"):
        return f"H-failure n={certificate.n} deg {certificate.degree}, witness {certificate.witness['witness']}"
    if certificate.is_lower:
        return f"no retraction at n={certificate.n} (first obstruction deg {certificate.degree})"
    return f"retraction at n={certificate.n}"


def _retraction_status(result: Optional[RetractionResult]) -> str:
    if result is None:
        return "skipped"
    if not result.feasible:
        return "infeasible"
    return "feasible" if result.conclusive else "evidence"


def check_model_algebra(model: ModelFile, max_degree: int) -> Algebra:
    """
    The quotient algebra of a model, after checking d^2 = 0 on the free
    algebra and d-stability of the relations.

    Raises:
        IntegrityError: either check fails.
    """
    free = model.free_algebra(max_degree)
    failure = check_d_squared(free, max_degree)
    if failure is not None:
        name, residual = failure
        raise IntegrityError(f"d^2({name}) = {residual}")
    algebra = model.quotient_algebra(max_degree)
    unstable = check_ideal_stable(algebra, algebra.max_degree)
    if unstable is not None:
        relation, residual = unstable
        raise IntegrityError(f"ideal is not d-stable: d({relation}) = {residual} mod I")
    return algebra


def mtc_report(model: ModelFile, n_max: int = MAX_N, max_degree: int = MAX_DEGREE) -> MtcReport:
    """
    Bound MTC of the space modelled by the file.

    nil ker μ is computed first so the join search can stop at its value.
    The path-fibration module of (ΛV, d) is base-changed onto A⊗A, tested for
    H-injectivity at every order below the upper bound and for retractions
    where cohomology alone is not enough. A formal model has d = 0 on ΛV and
    A = ΛV/I, so the same construction applies.

    Raises:
        IntegrityError: the model fails its checks or two certificates contradict.
    """
    logger.info("mtc report for %r (n_max=%d, max_degree=%d)", model.name, n_max, max_degree)
    algebra = check_model_algebra(model, max_degree)

    mu = nil_ker_mu_ideal(algebra, n_max, max_degree)
    cup = nil_ker_mult(cohomology_ring(algebra, max_degree), n_max, max_degree)
    report = MtcReport(model.name, max_degree, n_max, model.formal, cup, mu)

    report.certificates.append(BoundCertificate(
        kind=LOWER_NIL_KER_CUP,
        value=cup.lower,
        validity_degree=max_degree,
        witness={"classes": " ".join(str(i) for i in cup.witness)} if cup.witness else {},
    ))
    if mu.exact:
        report.certificates.append(BoundCertificate(
            kind=UPPER_NIL_KER_MU,
            value=mu.value,
            validity_degree=max_degree,
            witness={"generators": " ".join(mu.witness)} if mu.witness else {},
        ))

    _module_bounds(report, model, algebra, n_max, max_degree)

    _check_consistency(report)
    logger.info("%s: %s", model.name, report.headline())
    return report


def _module_bounds(report: MtcReport, model: ModelFile, algebra: Algebra, n_max: int, max_degree: int) -> None:
    tensor = tensor_algebra(algebra)
    path_model = path_fibration_model(model.free_algebra(max_degree), max_degree)
    module = path_model.over(tensor)

    stop = n_max
    if report.nil_ker_mu.exact:
        stop = min(n_max, report.nil_ker_mu.value - 1)
    if stop < 0:
        return

    h_lower = msecat_lower_via_H(tensor, module, stop, max_degree)
    report.h_levels = h_lower.levels
    if h_lower.certificate is not None:
        report.certificates.append(h_lower.certificate)

    for level in h_lower.levels:
        if not level.injective:
            continue
        result = retraction_search(retraction_problem(tensor, module, level.n, max_degree))
        report.retractions[level.n] = result
        report.certificates.append(result.certificate)
        if result.feasible and result.conclusive:
            break


def _check_consistency(report: MtcReport) -> None:
    uppers = [c for c in report.certificates if not c.is_lower and c.conclusive]
    for lower in (c for c in report.certificates if c.is_lower):
        for upper in uppers:
            if lower.value > upper.value:
                raise IntegrityError(
                    f"inconsistent certificates: {lower.summary()} contradicts {upper.summary()}"
                )
