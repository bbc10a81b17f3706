"""
Fiber joins of semifree extensions.

The binary join A ⊕ A⊗s^{-1}X⊗Y has

    d(s^{-1}x⊗y) = (-1)^{|x|} d0x·d0y
                   + Σ_i (-1)^{|a_i|+1} a_i ⊗ s^{-1}x_i⊗y
                   + Σ_j (-1)^{(|x|+1)(|b_j|+1)} b_j ⊗ s^{-1}x⊗y_j

for dplus x = Σ a_i⊗x_i and dplus y = Σ b_j⊗y_j. The n-fold join uses the
closed form of the iterated differential; folding binary joins is its oracle.
"""
import logging
from typing import Dict, Hashable, Iterator, List, Optional, Tuple
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import IntegrityError, UsageError
from semifree.base_module import JoinGenerator, SemifreeExtension

logger = logging.getLogger(__name__)


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


class BinaryJoin(SemifreeExtension):
    """(M,d) *_(A,d) (N,d)."""

    def __init__(self, left: SemifreeExtension, right: SemifreeExtension):
        if not left.base.compatible(right.base):
            raise UsageError("join needs extensions of the same base algebra")
        super().__init__(left.base, name=f"{left.name}*{right.name}")
        self.left = left
        self.right = right
        self._generators: Dict[int, List[JoinGenerator]] = {}

    @property
    def lowest_generator_degree(self) -> int:
        return self.left.lowest_generator_degree + self.right.lowest_generator_degree + 1

    def generators_of_degree(self, degree: int) -> List[JoinGenerator]:
        if degree not in self._generators:
            labels = []
            for left_degree in range(self.left.lowest_generator_degree, degree):
                right_degree = degree - 1 - left_degree
                if right_degree < self.right.lowest_generator_degree:
                    break
                right_generators = self.right.generators_of_degree(right_degree)
                for x in self.left.generators_of_degree(left_degree):
                    labels.extend(JoinGenerator(1, (x, y)) for y in right_generators)
            self._generators[degree] = labels
        return self._generators[degree]

    def _compute_decomposition(self, label: JoinGenerator):
        x, y = label.factors
        d0x, dplus_x = self.left.decompose_differential(x)
        d0y, dplus_y = self.right.decompose_differential(y)

        constant = (d0x * d0y).scale(_sign(x.degree))
        terms = []
        for a, target in dplus_x:
            degree_a = x.degree + 1 - target.degree
            terms.append((a.scale(_sign(degree_a + 1)), JoinGenerator(1, (target, y))))
        for b, target in dplus_y:
            degree_b = y.degree + 1 - target.degree
            terms.append((b.scale(_sign((x.degree + 1) * (degree_b + 1))), JoinGenerator(1, (x, target))))
        return constant, terms


class IteratedJoin(SemifreeExtension):
    """
    *^n_(A,d)(M,d) = A ⊕ A⊗s^{-n}X^{⊗(n+1)} with the closed-form differential.

    The constant term of d(s^{-n}x0⊗...⊗xn) is
    (-1)^{Σ_{k=1..n} (k|x_{n-k}| + k - 1)} d0x0···d0xn, and a term a⊗x_i' of
    dplus x_i contributes (-1)^{(|a|+1)(|x0|+...+|x_{i-1}|+n)} a ⊗ s^{-n}(...x_i'...).
    """

    def __init__(self, module: SemifreeExtension, n: int):
        if n < 1:
            raise UsageError("IteratedJoin needs n >= 1; the 0-fold join is the module itself")
        super().__init__(module.base, name=f"*^{n}{module.name}")
        self.module = module
        self.n = n
        self._generators: Dict[int, List[JoinGenerator]] = {}

    @property
    def lowest_generator_degree(self) -> int:
        return (self.n + 1) * self.module.lowest_generator_degree + self.n

    def _tuples(self, total: int, count: int) -> Iterator[Tuple[Hashable, ...]]:
        if count == 0:
            if total == 0:
                yield ()
            return
        lowest = self.module.lowest_generator_degree
        for first_degree in range(lowest, total - (count - 1) * lowest + 1):
            tails = list(self._tuples(total - first_degree, count - 1))
            if not tails:
                continue
            for x in self.module.generators_of_degree(first_degree):
                for tail in tails:
                    yield (x,) + tail

    def generators_of_degree(self, degree: int) -> List[JoinGenerator]:
        if degree not in self._generators:
            self._generators[degree] = [
                JoinGenerator(self.n, factors)
                for factors in self._tuples(degree - self.n, self.n + 1)
            ]
        return self._generators[degree]

    def _compute_decomposition(self, label: JoinGenerator):
        factors = label.factors
        n = self.n
        decompositions = [self.module.decompose_differential(x) for x in factors]

        exponent = sum(k * factors[n - k].degree + k - 1 for k in range(1, n + 1))
        constant = self.base.scalar(_sign(exponent))
        for d0, _ in decompositions:
            constant = constant * d0
            if constant.is_zero():
                break

        terms = []
        preceding = 0
        for i, (x, (_, dplus)) in enumerate(zip(factors, decompositions)):
            for a, target in dplus:
                degree_a = x.degree + 1 - target.degree
                replaced = factors[:i] + (target,) + factors[i + 1:]
                terms.append((a.scale(_sign((degree_a + 1) * (preceding + n))), JoinGenerator(n, replaced)))
            preceding += x.degree
        return constant, terms


def _verify(module: SemifreeExtension, verify_up_to: Optional[int]) -> SemifreeExtension:
    if verify_up_to is not None:
        failure = module.check_d_squared(verify_up_to)
        if failure is not None:
            label, residual = failure
            raise IntegrityError(f"d^2({label}) = {residual} in {module!r}")
    return module


def join(left: SemifreeExtension, right: SemifreeExtension, verify_up_to: Optional[int] = None) -> SemifreeExtension:
    """Binary fiber join; verifies d^2 = 0 on generators up to verify_up_to when given."""
    return _verify(BinaryJoin(left, right), verify_up_to)


def iterated_join(module: SemifreeExtension, n: int, verify_up_to: Optional[int] = None) -> SemifreeExtension:
    """The n-fold join; n = 0 returns the module itself."""
    if n < 0:
        raise UsageError("join order must be non-negative")
    if n == 0:
        return module
    logger.debug("building %d-fold join of %r", n, module)
    return _verify(IteratedJoin(module, n), verify_up_to)


def folded_join(module: SemifreeExtension, n: int) -> SemifreeExtension:
    """*^n built as ((M * M) * M) * ...; generators are nested JoinGenerators."""
    result = module
    for _ in range(n):
        result = BinaryJoin(result, module)
    return result
