"""
Base Module

Abstract base class and common utilities for semifree extensions
(A ⊕ A⊗X, d) of a base algebra A. Concrete extensions only enumerate their
generators per degree and compute the (d0, dplus) decomposition of one
generator; everything else (module elements, the full differential, cochain
slices, d^2 checks) lives here.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import UsageError
from graded.algebra import Algebra, Element, Monomial, format_terms
from dga.derivation import Derivation, differential_of
from dga.cohomology import CochainSlice, build_complex

logger = logging.getLogger(__name__)


# =============================================================================
# Generator labels
# =============================================================================

class _Unit:
    """Label of the distinguished summand A = A⊗1."""

    degree = 0

    def __repr__(self):
        return "1"


UNIT = _Unit()


@dataclass(frozen=True)
class FormalGenerator:
    """A named module generator."""
    name: str
    degree: int

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class JoinGenerator:
    """
    s^{-n} x0⊗...⊗xn. The suspension raises degree: |s^{-n}w| = |w| + n.
    """
    order: int
    factors: Tuple[Hashable, ...]

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.factors) + self.order

    def __str__(self):
        inner = "|".join(str(f) for f in self.factors)
        return f"s{-self.order}[{inner}]"


Label = Union[_Unit, FormalGenerator, JoinGenerator, Hashable]
DplusTerm = Tuple[Element, Hashable]


def flatten_label(label):
    """Identify s^{-1}(s^{-k}x0⊗...⊗xk)⊗y with s^{-(k+1)}x0⊗...⊗xk⊗y."""
    if isinstance(label, JoinGenerator) and label.order == 1 and isinstance(label.factors[0], JoinGenerator):
        inner = flatten_label(label.factors[0])
        return JoinGenerator(inner.order + 1, inner.factors + label.factors[1:])
    return label


# =============================================================================
# Module elements
# =============================================================================

class ModuleElement:
    """A finite sum Σ c_e ⊗ e with c_e in the base algebra and e a label (UNIT for A)."""

    __slots__ = ("module", "terms")

    def __init__(self, module: "SemifreeExtension", terms: Optional[Dict[Hashable, Element]] = None):
        self.module = module
        self.terms: Dict[Hashable, Element] = {
            label: coeff for label, coeff in (terms or {}).items() if not coeff.is_zero()
        }

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def component(self, label) -> Element:
        return self.terms.get(label, self.module.base.zero())

    def unit_part(self) -> Element:
        return self.component(UNIT)

    def generator_part(self) -> "ModuleElement":
        return ModuleElement(self.module, {k: v for k, v in self.terms.items() if k is not UNIT})

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        terms = dict(self.terms)
        for label, coeff in other.terms.items():
            terms[label] = terms[label] + coeff if label in terms else coeff
        return ModuleElement(self.module, terms)

    def __neg__(self):
        return ModuleElement(self.module, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return self + (-other)

    def scale(self, value) -> "ModuleElement":
        return ModuleElement(self.module, {k: v.scale(value) for k, v in self.terms.items()})

    def __rmul__(self, other):
        """Left action: an algebra element or a scalar times the module element."""
        if isinstance(other, Element):
            return ModuleElement(self.module, {k: other * v for k, v in self.terms.items()})
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, ModuleElement):
            return self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def coordinates(self) -> Dict[Tuple[Hashable, Monomial], object]:
        return {
            (label, monomial): c
            for label, coeff in self.terms.items()
            for monomial, c in coeff.terms.items()
        }

    def __repr__(self):
        algebra = self.module.base
        pieces = []
        labels = sorted(self.terms, key=self.module.label_sort_key)
        for label in labels:
            for monomial, coeff in self.terms[label].sorted_terms():
                factors = [] if monomial == algebra.unit_monomial else [algebra.format_monomial(monomial)]
                if label is not UNIT:
                    factors.append(str(label))
                text = "*".join(factors) if factors else "1"
                pieces.append((text, coeff, not factors))
        return format_terms(pieces)

    __str__ = __repr__


# =============================================================================
# Semifree extensions
# =============================================================================

class SemifreeExtension(ABC):
    """
    Abstract semifree extension (A ⊕ A⊗X, d) of a base algebra.

    Subclasses provide the generators of each degree and the decomposition
    d(x) = d0(x) + dplus(x) with d0(x) in A and dplus(x) = Σ a_i ⊗ x_i.
    """

    def __init__(self, base: Algebra, name: str = ""):
        self.base = base
        self.name = name
        self._decompositions: Dict[Hashable, Tuple[Element, List[DplusTerm]]] = {}
        self._base_d: Optional[Derivation] = None

    @abstractmethod
    def generators_of_degree(self, degree: int) -> List[Hashable]:
        """Module generators of exactly this degree, in canonical order."""
        pass

    @abstractmethod
    def _compute_decomposition(self, label) -> Tuple[Element, List[DplusTerm]]:
        """(d0 x, [(a_i, x_i), ...]) for one generator."""
        pass

    @property
    def lowest_generator_degree(self) -> int:
        return 1

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"

    # -- generators -----------------------------------------------------------
    def generators_up_to(self, max_degree: int) -> List[Hashable]:
        labels = []
        for degree in range(self.lowest_generator_degree, max_degree + 1):
            labels.extend(self.generators_of_degree(degree))
        return labels

    def has_generator(self, label) -> bool:
        degree = getattr(label, "degree", None)
        return degree is not None and label is not UNIT and label in self.generators_of_degree(degree)

    def label_sort_key(self, label):
        if label is UNIT:
            return (-1, 0)
        degree = label.degree
        generators = self.generators_of_degree(degree)
        return (degree, generators.index(label) if label in generators else len(generators))

    # -- differential ---------------------------------------------------------
    @property
    def base_differential(self) -> Derivation:
        if self._base_d is None:
            self._base_d = differential_of(self.base)
        return self._base_d

    def decompose_differential(self, label) -> Tuple[Element, List[DplusTerm]]:
        if label not in self._decompositions:
            if not self.has_generator(label):
                raise UsageError(f"{label} is not a generator of {self!r}")
            self._decompositions[label] = self._compute_decomposition(label)
        return self._decompositions[label]

    def element(self, terms: Dict[Hashable, Element]) -> ModuleElement:
        return ModuleElement(self, terms)

    def generator_element(self, label, coefficient: Optional[Element] = None) -> ModuleElement:
        return ModuleElement(self, {label: coefficient if coefficient is not None else self.base.one()})

    def zero(self) -> ModuleElement:
        return ModuleElement(self, {})

    def differential(self, label) -> ModuleElement:
        """d(1⊗x) = d0 x + Σ a_i⊗x_i."""
        if label is UNIT:
            return self.zero()
        d0, dplus = self.decompose_differential(label)
        terms: Dict[Hashable, Element] = {UNIT: d0}
        for coefficient, target in dplus:
            terms[target] = terms[target] + coefficient if target in terms else coefficient
        return ModuleElement(self, terms)

    def apply_d(self, x: ModuleElement) -> ModuleElement:
        """D(c⊗e) = dc⊗e + (-1)^{|c|} c·d(e)."""
        d = self.base_differential
        result = self.zero()
        for label, coeff in x.terms.items():
            result = result + ModuleElement(self, {label: d(coeff)})
            if label is UNIT:
                continue
            signed = self.base.zero()
            for degree, part in coeff.homogeneous_parts().items():
                signed = signed + (part if degree % 2 == 0 else -part)
            result = result + signed * self.differential(label)
        return result

    def check_d_squared(self, max_degree: int) -> Optional[Tuple[Hashable, ModuleElement]]:
        """First generator of degree <= max_degree with d(d(x)) != 0, if any."""
        for label in self.generators_up_to(max_degree):
            residual = self.apply_d(self.differential(label))
            if not residual.is_zero():
                return label, residual
        return None

    # -- degreewise linear algebra --------------------------------------------
    def basis_of_degree(self, degree: int) -> List[Tuple[Hashable, Monomial]]:
        basis = [(UNIT, m) for m in self.base.basis_of_degree(degree)] if degree >= 0 else []
        for generator_degree in range(self.lowest_generator_degree, degree + 1):
            monomials = self.base.basis_of_degree(degree - generator_degree)
            if not monomials:
                continue
            for label in self.generators_of_degree(generator_degree):
                basis.extend((label, m) for m in monomials)
        return basis

    def differential_of_basis(self, key: Tuple[Hashable, Monomial]) -> Dict[Tuple[Hashable, Monomial], object]:
        label, monomial = key
        return self.apply_d(ModuleElement(self, {label: self.base.monomial_element(monomial)})).coordinates()

    def complex(self, max_degree: int, min_degree: int = 0) -> List[CochainSlice]:
        return build_complex(self.basis_of_degree, self.differential_of_basis, range(min_degree, max_degree + 1))

    def from_coordinates(self, basis: Sequence[Tuple[Hashable, Monomial]], vector: Dict[int, object]) -> ModuleElement:
        terms: Dict[Hashable, Dict[Monomial, object]] = {}
        for j, c in vector.items():
            label, monomial = basis[j]
            terms.setdefault(label, {})[monomial] = c
        return ModuleElement(self, {label: self.base.element(t) for label, t in terms.items()})


def decompose_differential(module: SemifreeExtension, label) -> Tuple[Element, List[DplusTerm]]:
    return module.decompose_differential(label)


def is_minimal(module: SemifreeExtension, max_degree: int) -> bool:
    """True iff every d0 value and dplus coefficient up to max_degree lies in the augmentation ideal."""
    for label in module.generators_up_to(max_degree):
        d0, dplus = module.decompose_differential(label)
        if d0.constant_term():
            return False
        for coefficient, target in dplus:
            if coefficient.constant_term():
                logger.info("%s is not minimal: d(%s) has unit coefficient on %s", module, label, target)
                return False
    return True
