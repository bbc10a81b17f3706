"""
Cohomology Module

Degreewise cochain complexes, exact Betti numbers, cocycle representatives,
cohomology rings with structure constants, and the nilpotency of the kernel
of the cup product H ⊗ H -> H.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from config.config import RANDOM_SEED
from errors import IntegrityError, UsageError
from graded.algebra import Algebra, Element
from graded.linalg import Vector, nullspace, pivot_columns, solve
from dga.derivation import differential_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CochainSlice:
    """One degree of a cochain complex: a basis and d as columns over the next basis."""
    degree: int
    basis: Tuple[Hashable, ...]
    columns: Tuple[Vector, ...]
    target_size: int


def build_complex(
    basis_of: Callable[[int], Sequence[Hashable]],
    differential: Callable[[Hashable], Mapping[Hashable, object]],
    degrees: range,
) -> List[CochainSlice]:
    """
    Assemble slices from a basis function and the differential of a basis key.

    differential(key) returns coordinates keyed by basis keys of the next degree.
    """
    slices = []
    next_basis = list(basis_of(degrees.start))
    for degree in degrees:
        basis = next_basis
        next_basis = list(basis_of(degree + 1))
        position = {key: i for i, key in enumerate(next_basis)}
        columns = []
        for key in basis:
            column: Vector = {}
            for target, coeff in differential(key).items():
                if target not in position:
                    raise IntegrityError(f"d({key}) leaves the basis of degree {degree + 1}: {target}")
                column[position[target]] = coeff
            columns.append(column)
        slices.append(CochainSlice(degree, tuple(basis), tuple(columns), len(next_basis)))
        logger.debug("slice %d: %d basis elements", degree, len(basis))
    return slices


def algebra_complex(algebra: Algebra, max_degree: int) -> List[CochainSlice]:
    """The algebra's own cochain complex in degrees 0..max_degree."""
    if algebra.max_degree <= max_degree:
        algebra = algebra.with_max_degree(max_degree + 1)
    d = differential_of(algebra)
    return build_complex(
        algebra.basis_of_degree,
        lambda monomial: d(algebra.monomial_element(monomial)).terms,
        range(0, max_degree + 1),
    )


def _apply(columns: Sequence[Vector], vector: Vector) -> Vector:
    out: Vector = {}
    for j, coeff in vector.items():
        for i, value in columns[j].items():
            updated = out.get(i, 0) + coeff * value
            if updated:
                out[i] = updated
            else:
                out.pop(i, None)
    return out


def check_composition(slices: Sequence[CochainSlice]) -> None:
    """Raise IntegrityError unless consecutive slices compose to zero."""
    for lower, upper in zip(slices, slices[1:]):
        if upper.degree != lower.degree + 1:
            raise UsageError("cochain slices must have consecutive degrees")
        for j, column in enumerate(lower.columns):
            if _apply(upper.columns, column):
                raise IntegrityError(
                    f"d^2 != 0 on basis element {lower.basis[j]} of degree {lower.degree}"
                )


@dataclass
class DegreeCohomology:
    degree: int
    basis: Tuple[Hashable, ...]
    betti: int
    kernel_dimension: int
    coboundary_rank: int
    representatives: List[Vector]
    coboundaries: List[Vector]


@dataclass
class CohomologyReport:
    per_degree: Dict[int, DegreeCohomology] = field(default_factory=dict)

    def betti_numbers(self) -> List[int]:
        return [self.per_degree[k].betti for k in sorted(self.per_degree)]

    def betti(self, degree: int) -> int:
        return self.per_degree[degree].betti


def cohomology(slices: Sequence[CochainSlice]) -> CohomologyReport:
    """Exact Betti numbers and cocycle representatives of every slice."""
    check_composition(slices)
    report = CohomologyReport()
    incoming: List[Vector] = []
    for current in slices:
        size = len(current.basis)
        cycles = nullspace(current.columns, current.target_size) if size else []
        coboundary_pivots = pivot_columns(incoming, size)
        coboundaries = [incoming[j] for j in coboundary_pivots]
        combined = coboundaries + cycles
        chosen = [j for j in pivot_columns(combined, size) if j >= len(coboundaries)]
        representatives = [combined[j] for j in chosen]
        report.per_degree[current.degree] = DegreeCohomology(
            degree=current.degree,
            basis=current.basis,
            betti=len(cycles) - len(coboundaries),
            kernel_dimension=len(cycles),
            coboundary_rank=len(coboundaries),
            representatives=representatives,
            coboundaries=coboundaries,
        )
        incoming = list(current.columns)
    return report


# =============================================================================
# Cohomology rings
# =============================================================================

@dataclass
class CohomologyRing:
    """
    Chosen cocycle representatives of a basis of H^*(A) and the structure
    constants of their products, within a degree bound.

    Classes are indexed globally in order of degree; class 0 is the unit when
    the algebra is connected.
    """
    algebra: Algebra
    max_degree: int
    degrees: List[int]
    representatives: List[Element]
    structure: Dict[Tuple[int, int], Dict[int, object]]
    top_degree: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.representatives)

    def classes_of_degree(self, degree: int) -> List[int]:
        return [i for i, k in enumerate(self.degrees) if k == degree]

    def product(self, i: int, j: int) -> Optional[Dict[int, object]]:
        """Coordinates of [x_i][x_j]; None when the product degree is beyond the bound."""
        degree = self.degrees[i] + self.degrees[j]
        if degree > self.max_degree:
            if self.top_degree is not None and degree > self.top_degree:
                return {}
            return None
        return self.structure[(i, j)]


def cohomology_ring(algebra: Algebra, max_degree: int, shift_seed: Optional[int] = None) -> CohomologyRing:
    """
    Compute representatives and structure constants of H^*(A) up to max_degree.

    With shift_seed set, every representative is moved by a random coboundary;
    the structure constants must not change.
    """
    if algebra.max_degree <= max_degree:
        algebra = algebra.with_max_degree(max_degree + 1)
    report = cohomology(algebra_complex(algebra, max_degree))
    rng = random.Random(shift_seed if shift_seed is not None else RANDOM_SEED)

    degrees: List[int] = []
    representatives: List[Element] = []
    coordinates: Dict[int, Tuple[List[Vector], List[Vector]]] = {}
    for degree in sorted(report.per_degree):
        entry = report.per_degree[degree]
        reps = list(entry.representatives)
        if shift_seed is not None and entry.coboundaries:
            reps = [_shift(rep, entry.coboundaries, rng) for rep in reps]
        coordinates[degree] = (reps, entry.coboundaries)
        for rep in reps:
            degrees.append(degree)
            representatives.append(
                algebra.element({entry.basis[j]: c for j, c in rep.items()})
            )

    structure: Dict[Tuple[int, int], Dict[int, object]] = {}
    for i, left in enumerate(representatives):
        for j, right in enumerate(representatives):
            degree = degrees[i] + degrees[j]
            if degree > max_degree:
                continue
            entry = report.per_degree[degree]
            structure[(i, j)] = _class_coordinates(
                left * right, entry, coordinates[degree], degrees.index(degree) if degree in degrees else 0
            )

    ring = CohomologyRing(algebra, max_degree, degrees, representatives, structure, _cohomology_top(report, algebra))
    logger.info("cohomology ring: %d classes up to degree %d", ring.size, max_degree)
    return ring


def _shift(rep: Vector, coboundaries: List[Vector], rng: random.Random) -> Vector:
    shifted = dict(rep)
    for coboundary in coboundaries:
        weight = rng.randint(-3, 3)
        if not weight:
            continue
        for i, value in coboundary.items():
            updated = shifted.get(i, 0) + weight * value
            if updated:
                shifted[i] = updated
            else:
                shifted.pop(i, None)
    return shifted


def _class_coordinates(product: Element, entry: DegreeCohomology, basis_vectors, first_index: int) -> Dict[int, object]:
    reps, coboundaries = basis_vectors
    if product.is_zero():
        return {}
    position = {monomial: i for i, monomial in enumerate(entry.basis)}
    rhs = {position[m]: c for m, c in product.terms.items()}
    solution = solve(list(reps) + list(coboundaries), len(entry.basis), rhs)
    if solution is None:
        raise IntegrityError(f"product {product} is not a cocycle")
    return {first_index + j: c for j, c in solution.items() if j < len(reps) and c}


def report_bound(report: CohomologyReport) -> int:
    return max(report.per_degree) if report.per_degree else 0


def _cohomology_top(report: CohomologyReport, algebra: Algebra) -> Optional[int]:
    """Degree above which cohomology vanishes, when the algebra is finite within the bound."""
    top = algebra.top_degree()
    if top is None or top > report_bound(report):
        return None
    nonzero = [k for k, entry in report.per_degree.items() if entry.betti]
    return max(nonzero) if nonzero else 0


# =============================================================================
# nil ker of the cup product
# =============================================================================

@dataclass(frozen=True)
class NilVerdict:
    """
    A nilpotency verdict: an exact value, or a lower bound when the search hit
    max_n or the degree bound.
    """
    value: Optional[int] = None
    at_least: Optional[int] = None
    valid_up_to: Optional[int] = None
    witness: Tuple = ()

    @property
    def exact(self) -> bool:
        return self.value is not None

    @property
    def lower(self) -> int:
        return self.value if self.value is not None else self.at_least

    def __str__(self):
        if self.value is not None:
            return str(self.value)
        return f">= {self.at_least}"


TensorElement = Dict[Tuple[int, int], object]


def _tensor_product(ring: CohomologyRing, x: TensorElement, y: TensorElement) -> Optional[TensorElement]:
    """(i⊗j)(k⊗l) = (-1)^{|j||k|} x_i x_k ⊗ x_j x_l; None when a factor product is unknown."""
    out: TensorElement = {}
    for (i, j), a in x.items():
        for (k, l), b in y.items():
            left = ring.product(i, k)
            right = ring.product(j, l)
            if left is None or right is None:
                return None
            if not left or not right:
                continue
            sign = -1 if (ring.degrees[j] * ring.degrees[k]) % 2 else 1
            for p, c in left.items():
                for q, e in right.items():
                    value = out.get((p, q), 0) + sign * a * b * c * e
                    if value:
                        out[(p, q)] = value
                    else:
                        out.pop((p, q), None)
    return out


def nil_ker_mult(ring: CohomologyRing, max_n: int, max_degree: int) -> NilVerdict:
    """
    Least n such that every (n+1)-fold product in ker(H ⊗ H -> H) vanishes.

    The kernel is the ideal generated by ξ⊗1 - 1⊗ξ over positive-degree basis
    classes ξ, so it suffices to multiply those generators.
    """
    units = ring.classes_of_degree(0)
    if not units:
        raise UsageError("cohomology ring has no unit class")
    unit = units[0]
    generators = [i for i, k in enumerate(ring.degrees) if 0 < k <= max_degree]
    if not generators:
        return NilVerdict(value=0, valid_up_to=max_degree)

    kernel = {i: {(i, unit): 1, (unit, i): -1} for i in generators}
    level: Dict[Tuple[int, ...], Optional[TensorElement]] = {(i,): kernel[i] for i in generators}
    for n in range(1, max_n + 1):
        next_level: Dict[Tuple[int, ...], Optional[TensorElement]] = {}
        for factors, value in level.items():
            for i in generators:
                if i < factors[-1]:
                    continue
                product = None if value is None else _tensor_product(ring, value, kernel[i])
                if product is None or product:
                    next_level[factors + (i,)] = product
        nonzero = [f for f, v in next_level.items() if v]
        unknown = [f for f, v in next_level.items() if v is None]
        logger.debug("nil ker cup: %d nonzero and %d unverifiable %d-fold products", len(nonzero), len(unknown), n + 1)
        if not nonzero and not unknown:
            witness = next(iter(level))
            return NilVerdict(value=n, valid_up_to=max_degree, witness=witness)
        if not nonzero:
            return NilVerdict(at_least=n, valid_up_to=max_degree)
        level = next_level
    return NilVerdict(at_least=max_n + 1, valid_up_to=max_degree)
