"""
Concrete semifree extensions: explicitly tabulated ones and base changes.
"""
import logging
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import UsageError
from graded.algebra import Algebra, AlgebraMorphism, Element
from dga.derivation import differential_of
from semifree.base_module import DplusTerm, FormalGenerator, SemifreeExtension

logger = logging.getLogger(__name__)


class TableExtension(SemifreeExtension):
    """
    A finitely generated extension given by explicit d0/dplus tables.

    dplus may only refer to generators declared earlier, which gives the
    filtration a semifree extension needs.
    """

    def __init__(
        self,
        base: Algebra,
        generators: Sequence[FormalGenerator],
        d0: Optional[Mapping[str, Element]] = None,
        dplus: Optional[Mapping[str, Sequence[Tuple[Element, str]]]] = None,
        name: str = "",
    ):
        super().__init__(base, name)
        self.generators: Tuple[FormalGenerator, ...] = tuple(generators)
        d0 = d0 or {}
        dplus = dplus or {}
        by_name = {}
        for generator in self.generators:
            if generator.name in by_name:
                raise UsageError(f"duplicate module generator {generator.name}")
            if generator.degree < 1:
                raise UsageError(f"module generator {generator.name} must have positive degree")
            by_name[generator.name] = generator

        self._table: Dict[FormalGenerator, Tuple[Element, List[DplusTerm]]] = {}
        seen = set()
        for generator in self.generators:
            constant = d0.get(generator.name, base.zero())
            if not constant.is_zero() and constant.degree != generator.degree + 1:
                raise UsageError(f"d0({generator.name}) must have degree {generator.degree + 1}")
            terms = []
            for coefficient, target_name in dplus.get(generator.name, ()):
                if target_name not in seen:
                    raise UsageError(f"d({generator.name}) refers to {target_name}, which is not declared before it")
                target = by_name[target_name]
                if not coefficient.is_zero() and coefficient.degree != generator.degree + 1 - target.degree:
                    raise UsageError(f"coefficient of {target_name} in d({generator.name}) has the wrong degree")
                if not coefficient.is_zero():
                    terms.append((coefficient, target))
            self._table[generator] = (constant, terms)
            seen.add(generator.name)

        self._by_degree: Dict[int, List[FormalGenerator]] = {}
        for generator in self.generators:
            self._by_degree.setdefault(generator.degree, []).append(generator)

    def generator(self, name: str) -> FormalGenerator:
        for generator in self.generators:
            if generator.name == name:
                return generator
        raise UsageError(f"unknown module generator {name}")

    def generators_of_degree(self, degree: int) -> List[FormalGenerator]:
        return self._by_degree.get(degree, [])

    def _compute_decomposition(self, label):
        return self._table[label]


class BaseChangedExtension(SemifreeExtension):
    """(B,d) ⊗_(A,d) M along an algebra morphism φ: A -> B."""

    def __init__(self, module: SemifreeExtension, phi: AlgebraMorphism):
        super().__init__(phi.target, name=module.name)
        self.module = module
        self.phi = phi

    @property
    def lowest_generator_degree(self) -> int:
        return self.module.lowest_generator_degree

    def generators_of_degree(self, degree: int) -> List[Hashable]:
        return self.module.generators_of_degree(degree)

    def has_generator(self, label) -> bool:
        return self.module.has_generator(label)

    def _compute_decomposition(self, label):
        d0, dplus = self.module.decompose_differential(label)
        terms = []
        for coefficient, target in dplus:
            image = self.phi(coefficient)
            if not image.is_zero():
                terms.append((image, target))
        return self.phi(d0), terms


def check_chain_map(phi: AlgebraMorphism) -> Optional[str]:
    """Name of the first generator g with φ(dg) != d(φg), or None."""
    d_source = differential_of(phi.source)
    d_target = differential_of(phi.target)
    for generator in phi.source.generators:
        x = phi.source.gen(generator.name)
        if phi(d_source(x)) != d_target(phi(x)):
            return generator.name
    return None


def base_change(module: SemifreeExtension, phi: AlgebraMorphism) -> SemifreeExtension:
    """Push every d0/dplus coefficient of the module through φ."""
    if not phi.source.compatible(module.base):
        raise UsageError("base change morphism does not start at the module's base algebra")
    failing = check_chain_map(phi)
    if failing is not None:
        raise UsageError(f"base change morphism does not commute with d on {failing}")
    return BaseChangedExtension(module, phi)
