"""
Path Fibration Model

Builds the semifree model of the free-path fibration over Λ(V⊕V'):
the algebra Λ(V⊕V'⊕V̄) with ζ(v) = ζ(v') = v̄, ζ(v̄) = 0 and

    d(v̄) = v' - v - Σ_{i>=1} (ζd)^i(v) / i!

read as a semifree Λ(V⊕V')-module on X = Λ⁺V̄.
"""
import logging
from dataclasses import dataclass
from math import factorial
from typing import Dict, List, Tuple
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from sympy import QQ

from config.config import BAR_SUFFIX, PRIME_SUFFIX, ZETA_CAP_FACTOR
from errors import IntegrityError, UsageError
from graded.algebra import Algebra, AlgebraMorphism, Element, Generator, IdealSpec, Monomial, tensor_algebra
from dga.derivation import Derivation
from semifree.base_module import FormalGenerator, SemifreeExtension
from semifree.extensions import base_change

logger = logging.getLogger(__name__)


class PathFibrationExtension(SemifreeExtension):
    """Λ(V⊕V') ⊕ Λ(V⊕V')⊗Λ⁺V̄ with the differential read off d on Λ(V⊕V'⊕V̄)."""

    def __init__(self, base: Algebra, path_algebra: Algebra, differential: Derivation, bar_names: List[str]):
        super().__init__(base, name="Λ⁺V̄")
        self.path_algebra = path_algebra
        self.path_differential = differential
        self.bar_algebra = Algebra([path_algebra.generator(n) for n in bar_names], max_degree=path_algebra.max_degree)
        self._offset = len(base.generators)
        self._generators: Dict[int, List[FormalGenerator]] = {}
        self._monomials: Dict[FormalGenerator, Monomial] = {}

    @property
    def lowest_generator_degree(self) -> int:
        return min((g.degree for g in self.bar_algebra.generators), default=1)

    def generators_of_degree(self, degree: int) -> List[FormalGenerator]:
        if degree not in self._generators:
            labels = []
            if degree > 0:
                for monomial in self.bar_algebra.free_monomials(degree):
                    label = FormalGenerator(self.bar_algebra.format_monomial(monomial), degree)
                    self._monomials[label] = monomial
                    labels.append(label)
            self._generators[degree] = labels
        return self._generators[degree]

    def label_of(self, bar_monomial: Monomial) -> FormalGenerator:
        degree = self.bar_algebra.monomial_degree(bar_monomial)
        for label in self.generators_of_degree(degree):
            if self._monomials[label] == bar_monomial:
                return label
        raise UsageError(f"no generator for bar monomial {bar_monomial}")

    def path_element(self, label: FormalGenerator) -> Element:
        """The generator as an element of Λ(V⊕V'⊕V̄)."""
        monomial = (0,) * self._offset + self._monomials[label]
        return self.path_algebra.monomial_element(monomial)

    def _compute_decomposition(self, label: FormalGenerator):
        image = self.path_differential(self.path_element(label))
        constant: Dict[Monomial, object] = {}
        by_label: Dict[Monomial, Dict[Monomial, object]] = {}
        for monomial, coeff in image.terms.items():
            base_part, bar_part = monomial[:self._offset], monomial[self._offset:]
            if any(bar_part):
                by_label.setdefault(bar_part, {})[base_part] = coeff
            else:
                constant[base_part] = coeff
        terms = [
            (self.base.element(coefficients), self.label_of(bar_part))
            for bar_part, coefficients in sorted(by_label.items(), key=lambda item: self.bar_algebra.sort_key(item[0]))
        ]
        return self.base.element(constant), terms


@dataclass
class PathFibrationModel:
    """The free-path fibration model over the tensor algebra of a free CDGA."""
    source: Algebra
    base: Algebra
    path_algebra: Algebra
    zeta: Derivation
    differential: Derivation
    extension: PathFibrationExtension
    bar_names: Dict[str, str]

    def bar_differential(self, name: str) -> Element:
        """d(v̄) in Λ(V⊕V'⊕V̄)."""
        return self.differential(self.path_algebra.gen(self.bar_names[name]))

    def bar_label(self, name: str) -> FormalGenerator:
        return FormalGenerator(self.bar_names[name], self.path_algebra.generator(self.bar_names[name]).degree)

    def over(self, target: Algebra) -> SemifreeExtension:
        """Base change along Λ(V⊕V') -> target, matching generators by name."""
        return base_change(self.extension, AlgebraMorphism.by_name(self.base, target))


def path_fibration_model(
    algebra: Algebra,
    max_degree: int,
    prime_suffix: str = PRIME_SUFFIX,
    bar_suffix: str = BAR_SUFFIX,
) -> PathFibrationModel:
    """
    Build the path-fibration model of a free CDGA (ΛV, d).

    Raises:
        UsageError: the algebra is not free or has a generator of degree 1.
        IntegrityError: the ζ-series does not terminate within the cap, or d^2 != 0.
    """
    if algebra.ideal.kind != "none":
        raise UsageError("path_fibration_model needs a free algebra; base-change the result instead")
    base = tensor_algebra(algebra, prime_suffix)
    names = {g.name for g in base.generators}

    bar_names: Dict[str, str] = {}
    bar_generators = []
    for generator in algebra.generators:
        if generator.degree < 2:
            raise UsageError(f"generator {generator.name} has degree 1; the model needs simply connected inputs")
        bar = generator.name + bar_suffix
        if bar in names:
            raise UsageError(f"bar name {bar!r} collides with an existing generator")
        bar_names[generator.name] = bar
        bar_generators.append(Generator(bar, generator.degree - 1))

    path_algebra = Algebra(list(base.generators) + bar_generators, IdealSpec(), max_degree=max_degree, name="Λ(V⊕V'⊕V̄)")
    include = AlgebraMorphism.by_name(base, path_algebra)

    zeta_values: Dict[str, Element] = {}
    for generator in algebra.generators:
        bar = path_algebra.gen(bar_names[generator.name])
        zeta_values[generator.name] = bar
        zeta_values[generator.name + prime_suffix] = bar
        zeta_values[bar_names[generator.name]] = path_algebra.zero()
    zeta = Derivation(path_algebra, -1, zeta_values)

    d_values: Dict[str, Element] = {
        name: include(value) for name, value in base.differential_values().items()
    }
    cap = ZETA_CAP_FACTOR * max_degree
    order = sorted(range(len(algebra.generators)), key=lambda i: (algebra.generators[i].degree, i))
    for i in order:
        generator = algebra.generators[i]
        partial = Derivation(path_algebra, 1, d_values)
        v = path_algebra.gen(generator.name)
        series = path_algebra.zero()
        term = v
        steps = 0
        while True:
            try:
                term = zeta(partial(term))
            except UsageError as error:
                raise UsageError(f"d({bar_names[generator.name]}) depends on a later generator: {error}") from error
            if term.is_zero():
                break
            steps += 1
            if steps > cap:
                raise IntegrityError(
                    f"zeta-series for {generator.name} did not terminate within {cap} steps"
                )
            series = series + term.scale(QQ(1, factorial(steps)))
        d_values[bar_names[generator.name]] = (
            path_algebra.gen(generator.name + prime_suffix) - v - series
        )
        logger.debug("d(%s) = %s", bar_names[generator.name], d_values[bar_names[generator.name]])

    differential = Derivation(path_algebra, 1, d_values)
    for bar in bar_names.values():
        residual = differential(differential(path_algebra.gen(bar)))
        if not residual.is_zero():
            raise IntegrityError(f"d^2({bar}) = {residual} in the path-fibration model")

    extension = PathFibrationExtension(base, path_algebra, differential, list(bar_names.values()))
    logger.info("path-fibration model built on %d generators", len(algebra.generators))
    return PathFibrationModel(algebra, base, path_algebra, zeta, differential, extension, bar_names)
