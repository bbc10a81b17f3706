"""
Bound Machinery

Certified bounds for Msecat of the path fibration (hence MTC):

- lower bounds from non-injectivity of H(A) -> H(*^n M),
- lower bounds from infeasibility (and upper evidence from feasibility) of
  the linear system for a module retraction *^n M -> A,
- upper bounds from the nilpotency of ker(μ: A⊗A -> A), computed on the
  generators w'-w modulo the tensor ideal.
"""
import hashlib
import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, NamedTuple, Optional, Tuple
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from graded.algebra import Algebra, Element, tensor_algebra
from graded.linalg import nullspace, pivot_columns, rank, solve
from dga.cohomology import NilVerdict, algebra_complex, build_complex, cohomology
from semifree.base_module import UNIT, ModuleElement, SemifreeExtension
from semifree.joins import iterated_join

logger = logging.getLogger(__name__)


LOWER_H_INJECTIVITY = "lower(H-injectivity)"
LOWER_RETRACTION = "lower(retraction)"
LOWER_NIL_KER_CUP = "lower(nil ker cup)"
UPPER_NIL_KER_MU = "upper(nil ker mu)"
UPPER_RETRACTION = "upper(retraction)"


@dataclass
class BoundCertificate:
    """
    A bound claim with the data needed to re-check it.

    Lower bounds are unconditional. Upper bounds are conclusive only when the
    computation covered every degree that matters; otherwise they are
    evidence valid up to validity_degree.
    """
    kind: str
    value: int
    validity_degree: int
    conclusive: bool = True
    n: Optional[int] = None
    degree: Optional[int] = None
    witness: Dict[str, str] = field(default_factory=dict)

    @property
    def is_lower(self) -> bool:
        return self.kind.startswith("lower")

    def summary(self) -> str:
        relation = ">=" if self.is_lower else "<="
        details = [f"{key}={value}" for key, value in self.witness.items()]
        if self.n is not None:
            details.insert(0, f"n={self.n}")
        if self.degree is not None:
            details.insert(1 if self.n is not None else 0, f"deg {self.degree}")
        status = "" if self.conclusive else f" (evidence up to degree {self.validity_degree})"
        return f"MTC {relation} {self.value} via {self.kind}{status}: " + ", ".join(details)


# =============================================================================
# Lower bounds from cohomology
# =============================================================================

@dataclass
class HLevel:
    n: int
    injective: bool
    degree: Optional[int] = None
    witness: Optional[Element] = None
    primitive: Optional[ModuleElement] = None


class HLowerResult(NamedTuple):
    largest_failing: Optional[int]
    certificate: Optional[BoundCertificate]
    levels: List[HLevel]


def find_primitive(module: SemifreeExtension, element: Element, degree: int) -> Optional[ModuleElement]:
    """A module element p of degree-1 with D p = element (seen in the A summand), if one exists."""
    (lower,) = build_complex(module.basis_of_degree, module.differential_of_basis, range(degree - 1, degree))
    target = module.basis_of_degree(degree)
    position = {key: i for i, key in enumerate(target)}
    rhs = {position[(UNIT, m)]: c for m, c in element.terms.items()}
    solution = solve(lower.columns, len(target), rhs)
    if solution is None:
        return None
    return module.from_coordinates(lower.basis, solution)


def _injectivity_failure(algebra: Algebra, module: SemifreeExtension, report, degree: int):
    """(witness cocycle, primitive) when H^degree(A) -> H^degree(module) has a kernel."""
    entry = report.per_degree[degree]
    (lower,) = build_complex(module.basis_of_degree, module.differential_of_basis, range(degree - 1, degree))
    target = module.basis_of_degree(degree)
    position = {key: i for i, key in enumerate(target)}
    reps = [
        {position[(UNIT, entry.basis[j])]: c for j, c in rep.items()}
        for rep in entry.representatives
    ]
    coboundaries = [lower.columns[j] for j in pivot_columns(lower.columns, len(target))]
    if rank(coboundaries + reps, len(target)) == len(coboundaries) + len(reps):
        return None
    for vector in nullspace(coboundaries + reps, len(target)):
        weights = {j - len(coboundaries): c for j, c in vector.items() if j >= len(coboundaries)}
        if not weights:
            continue
        witness = algebra.zero()
        for j, weight in weights.items():
            witness = witness + algebra.element(
                {entry.basis[i]: c for i, c in entry.representatives[j].items()}
            ).scale(weight)
        primitive = find_primitive(module, witness, degree)
        return witness, primitive
    return None


def msecat_lower_via_H(
    algebra: Algebra,
    module: SemifreeExtension,
    n_max: int,
    max_degree: int,
) -> HLowerResult:
    """
    For n = 0..n_max test injectivity of H(A) -> H(*^n M) degreewise up to
    max_degree. A failure at level n certifies Msecat >= n + 1.
    """
    report = cohomology(algebra_complex(algebra, max_degree))
    degrees = [k for k in sorted(report.per_degree) if k > 0 and report.per_degree[k].betti]
    levels: List[HLevel] = []
    best: Optional[BoundCertificate] = None
    largest: Optional[int] = None
    for n in range(0, n_max + 1):
        joined = iterated_join(module, n)
        level = HLevel(n, injective=True)
        for degree in degrees:
            failure = _injectivity_failure(algebra, joined, report, degree)
            if failure is not None:
                witness, primitive = failure
                level = HLevel(n, False, degree, witness, primitive)
                break
        levels.append(level)
        logger.info("H-injectivity at n=%d: %s", n, "holds" if level.injective else f"fails in degree {level.degree}")
        if not level.injective:
            largest = n
            best = BoundCertificate(
                kind=LOWER_H_INJECTIVITY,
                value=n + 1,
                validity_degree=max_degree,
                n=n,
                degree=level.degree,
                witness={"witness": str(level.witness), "primitive": str(level.primitive)},
            )
    return HLowerResult(largest, best, levels)


# =============================================================================
# Retractions
# =============================================================================

@dataclass
class RetractionProblem:
    """Find ρ on the generators of *^n M with r(1) = 1 and r∘d = d∘r."""
    base: Algebra
    module: SemifreeExtension
    max_degree: int
    n: int = 0

    def unknowns(self) -> List[Tuple[Hashable, Tuple[int, ...]]]:
        columns = []
        for label in self.module.generators_up_to(self.max_degree):
            columns.extend((label, m) for m in self.base.basis_of_degree(label.degree))
        return columns

    def constraints(self, up_to: int):
        """Columns (one per unknown), the row count and the right-hand side for |g| + 1 <= up_to."""
        # targets of dplus may sit in degree up_to
        unknowns = [u for u in self.unknowns() if u[0].degree <= up_to]
        position = {u: i for i, u in enumerate(unknowns)}
        rows: Dict[Tuple[Hashable, Tuple[int, ...]], int] = {}
        columns: List[Dict[int, object]] = [{} for _ in unknowns]
        rhs: Dict[int, object] = {}
        d = self.module.base_differential

        def row(label, monomial):
            key = (label, monomial)
            if key not in rows:
                rows[key] = len(rows)
            return rows[key]

        def add(column: int, label, element: Element):
            for monomial, c in element.terms.items():
                i = row(label, monomial)
                updated = columns[column].get(i, 0) + c
                if updated:
                    columns[column][i] = updated
                else:
                    columns[column].pop(i, None)

        for label in self.module.generators_up_to(up_to - 1):
            d0, dplus = self.module.decompose_differential(label)
            for monomial in self.base.basis_of_degree(label.degree):
                add(position[(label, monomial)], label, d(self.base.monomial_element(monomial)))
            for coefficient, target in dplus:
                for monomial in self.base.basis_of_degree(target.degree):
                    add(position[(target, monomial)], label, -(coefficient * self.base.monomial_element(monomial)))
            for monomial, c in d0.terms.items():
                rhs[row(label, monomial)] = c
        return unknowns, columns, len(rows), rhs


@dataclass
class RetractionResult:
    feasible: bool
    conclusive: bool
    max_degree: int
    rho: Dict[Hashable, Element] = field(default_factory=dict)
    first_failing_degree: Optional[int] = None
    certificate: Optional[BoundCertificate] = None


def _fingerprint(columns, nrows: int, rhs) -> Dict[str, str]:
    digest = hashlib.sha256()
    for j, column in enumerate(columns):
        digest.update(repr((j, sorted((i, str(v)) for i, v in column.items()))).encode())
    digest.update(repr(sorted((i, str(v)) for i, v in rhs.items())).encode())
    return {
        "unknowns": str(len(columns)),
        "equations": str(nrows),
        "rank": str(rank(columns, nrows)),
        "augmented_rank": str(rank(list(columns) + [rhs], nrows)),
        "sha256": digest.hexdigest()[:16],
    }


def retraction_search(problem: RetractionProblem) -> RetractionResult:
    """
    Solve the retraction system exactly. Infeasible truncations refute
    Msecat <= n unconditionally; a feasible solution is conclusive only when
    the base vanishes above max_degree.
    """
    base, bound = problem.base, problem.max_degree
    unknowns, columns, nrows, rhs = problem.constraints(bound)
    solution = solve(columns, nrows, rhs)
    if solution is None:
        first = bound
        for degree in range(1, bound):
            _, cols, rows, partial_rhs = problem.constraints(degree)
            if solve(cols, rows, partial_rhs) is None:
                first = degree
                break
        certificate = BoundCertificate(
            kind=LOWER_RETRACTION,
            value=problem.n + 1,
            validity_degree=bound,
            n=problem.n,
            degree=first,
            witness=_fingerprint(columns, nrows, rhs),
        )
        logger.info("no retraction at n=%d (first obstruction in degree %d)", problem.n, first)
        return RetractionResult(False, True, bound, first_failing_degree=first, certificate=certificate)

    rho: Dict[Hashable, Dict] = {}
    for j, value in solution.items():
        label, monomial = unknowns[j]
        rho.setdefault(label, {})[monomial] = value
    top = base.top_degree()
    conclusive = top is not None and top <= bound
    certificate = BoundCertificate(
        kind=UPPER_RETRACTION,
        value=problem.n,
        validity_degree=bound,
        conclusive=conclusive,
        n=problem.n,
        witness={"rho_nonzero": str(len(rho)), "unknowns": str(len(unknowns))},
    )
    logger.info("retraction found at n=%d (%s)", problem.n, "conclusive" if conclusive else "evidence")
    return RetractionResult(
        True, conclusive, bound,
        rho={label: base.element(terms) for label, terms in rho.items()},
        certificate=certificate,
    )


def retraction_problem(base: Algebra, module: SemifreeExtension, n: int, max_degree: int) -> RetractionProblem:
    return RetractionProblem(base, iterated_join(module, n), max_degree, n)


# =============================================================================
# Upper bounds from nil ker μ
# =============================================================================

def nil_ker_mu_ideal(algebra: Algebra, n_max: int, max_degree: int) -> NilVerdict:
    """
    Least n <= n_max with (w0'-w0)···(wn'-wn) ≡ 0 mod J for all generator
    tuples, J = I⊗ΛW' + ΛW⊗I'. Products above max_degree are unverifiable
    when the ideal has relations.
    """
    tensor = tensor_algebra(algebra.with_max_degree(max_degree))
    generators = algebra.generators
    if not generators:
        return NilVerdict(value=0, valid_up_to=max_degree)
    has_relations = bool(algebra.ideal.relations)
    factors = []
    for i, g in enumerate(generators):
        primed = tensor.generators[2 * i + 1].name
        factors.append((g, tensor.gen(primed) - tensor.gen(g.name)))

    def extend(value: Optional[Element], degree: int, i: int):
        g, factor = factors[i]
        new_degree = degree + g.degree
        if value is None or (has_relations and new_degree > max_degree):
            return None, new_degree
        return value * factor, new_degree

    level: Dict[Tuple[int, ...], Tuple[Optional[Element], int]] = {
        (i,): (factor, g.degree) for i, (g, factor) in enumerate(factors)
        if not (has_relations and g.degree > max_degree)
    }
    level = {k: v for k, v in level.items() if v[0] is None or not v[0].is_zero()}
    if not level:
        return NilVerdict(value=0, valid_up_to=max_degree)
    for n in range(1, n_max + 1):
        next_level = {}
        for tuple_, (value, degree) in level.items():
            for i in range(tuple_[-1], len(factors)):
                if i == tuple_[-1] and generators[i].is_odd:
                    continue
                product, new_degree = extend(value, degree, i)
                if product is None or not product.is_zero():
                    next_level[tuple_ + (i,)] = (product, new_degree)
        nonzero = [t for t, (v, _) in next_level.items() if v is not None]
        unknown = [t for t, (v, _) in next_level.items() if v is None]
        logger.debug("nil ker mu: %d nonzero, %d unverifiable %d-fold products", len(nonzero), len(unknown), n + 1)
        if not nonzero and not unknown:
            witness = next((t for t, (v, _) in level.items() if v is not None), ())
            return NilVerdict(
                value=n, valid_up_to=max_degree,
                witness=tuple(generators[i].name for i in witness),
            )
        if not nonzero:
            return NilVerdict(at_least=n, valid_up_to=max_degree)
        level = next_level
    return NilVerdict(at_least=n_max + 1, valid_up_to=max_degree)
