"""
Derivations

Graded derivations given on generators and extended by the Leibniz rule
θ(xy) = θ(x)y + (-1)^{deg(θ)|x|} xθ(y). Differentials (degree +1) and the
path-space contraction ζ (degree -1) are both instances.
"""
import logging
from typing import Dict, List, Mapping, Optional, Tuple
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import UsageError
from graded.algebra import Algebra, Element, Monomial, normal_form

logger = logging.getLogger(__name__)


class Derivation:
    """A graded derivation of fixed degree on one algebra."""

    def __init__(self, algebra: Algebra, degree: int, values: Mapping[str, Element]):
        self.algebra = algebra
        self.degree = degree
        self.values: Dict[str, Element] = {}
        for name, value in values.items():
            generator = algebra.generator(name)
            if not value.algebra.compatible(algebra):
                raise UsageError(f"value on {name} is not an element of {algebra!r}")
            if not value.is_zero() and value.degree != generator.degree + degree:
                raise UsageError(
                    f"value on {name} has degree {value.degree}, expected {generator.degree + degree}"
                )
            self.values[name] = value
        self._cache: Dict[Monomial, Element] = {}

    def __repr__(self):
        return f"Derivation(degree={self.degree}, on={sorted(self.values)})"

    def _on_monomial(self, monomial: Monomial) -> Element:
        if monomial in self._cache:
            return self._cache[monomial]
        algebra = self.algebra
        result = algebra.zero()
        n = len(monomial)
        for i, exp in enumerate(monomial):
            if not exp:
                continue
            generator = algebra.generators[i]
            value = self.values.get(generator.name)
            if value is None:
                raise UsageError(f"derivation has no value on generator {generator.name}")
            if value.is_zero():
                continue
            prefix = tuple(monomial[:i]) + (0,) * (n - i)
            lowered = tuple(exp - 1 if j == i else 0 for j in range(n))
            suffix = (0,) * (i + 1) + tuple(monomial[i + 1:])
            sign = -1 if (self.degree * algebra.monomial_degree(prefix)) % 2 else 1
            term = algebra.monomial_element(prefix) * (algebra.monomial_element(lowered) * value).scale(exp)
            result = result + (term * algebra.monomial_element(suffix)).scale(sign)
        self._cache[monomial] = result
        return result

    def apply(self, x: Element) -> Element:
        if not x.algebra.compatible(self.algebra):
            raise UsageError(f"{x!r} is not an element of {self.algebra!r}")
        result = self.algebra.zero()
        for monomial, coeff in x.terms.items():
            result = result + self._on_monomial(monomial).scale(coeff)
        return result

    __call__ = apply


def apply_derivation(theta: Derivation, x: Element) -> Element:
    return theta.apply(x)


def differential_of(algebra: Algebra) -> Derivation:
    """The differential the algebra carries, as a degree +1 derivation."""
    return Derivation(algebra, 1, algebra.differential_values())


def check_d_squared(algebra: Algebra, max_degree: int) -> Optional[Tuple[str, Element]]:
    """
    Verify d(d(g)) = 0 on every generator g with |g| + 2 <= max_degree.

    Returns:
        None on success, otherwise (first failing generator, d(d(g))).
    """
    d = differential_of(algebra)
    for generator in algebra.generators:
        if generator.degree + 2 > max_degree:
            continue
        residual = d(d(algebra.gen(generator.name)))
        if not residual.is_zero():
            logger.info("d^2(%s) = %s", generator.name, residual)
            return generator.name, residual
    return None


def check_ideal_stable(algebra: Algebra, max_degree: int) -> Optional[Tuple[Element, Element]]:
    """
    Verify that d maps every relation into the ideal.

    Returns:
        None on success, otherwise (relation, normal form of its differential).
    """
    free = algebra.without_ideal()
    d_free = differential_of(free)
    failures: List[Tuple[Element, Element]] = []
    for relation in algebra.relations():
        degree = relation.degree
        if degree is None or degree + 1 > max_degree:
            continue
        residual = normal_form(d_free(relation), algebra, max_degree)
        if not residual.is_zero():
            failures.append((relation, residual))
    return failures[0] if failures else None
