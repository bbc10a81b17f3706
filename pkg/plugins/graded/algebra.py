"""
Graded Algebra Module

Free graded-commutative algebras over QQ, optionally quotiented by a graded
ideal (per-factor degree truncations and/or homogeneous relations), with
normalized elements, Koszul signs and degreewise monomial bases.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from sympy import QQ

from config.config import MAX_DEGREE, PRIME_SUFFIX
from errors import UsageError
from graded.linalg import RowReducer

logger = logging.getLogger(__name__)

# Exponent vector in the algebra's generator order
Monomial = Tuple[int, ...]

# Element stored by generator names: ((("a", 1), ("b", 1)), coeff), ...
NamedTerms = Tuple[Tuple[Tuple[Tuple[str, int], ...], object], ...]


def to_rational(value):
    """Convert an int or rational to a QQ element."""
    return QQ.convert(value)


def is_scalar(value) -> bool:
    """True for ints, Fractions and QQ elements; bool counts as int."""
    return isinstance(value, (int, Fraction)) or QQ.of_type(value)


@dataclass(frozen=True)
class Generator:
    """A generator of a free graded-commutative algebra."""
    name: str
    degree: int

    @property
    def parity(self) -> int:
        return self.degree % 2

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1


@dataclass(frozen=True)
class IdealSpec:
    """
    A graded ideal of a free algebra.

    truncations: (generator names, N) pairs; a monomial lies in the ideal when
        the part of it built from those generators has degree >= N.
    relations: homogeneous ideal generators, stored by generator names.
    """
    truncations: Tuple[Tuple[FrozenSet[str], int], ...] = ()
    relations: Tuple[NamedTerms, ...] = ()

    @property
    def kind(self) -> str:
        if self.relations:
            return "generated"
        if self.truncations:
            return "truncation"
        return "none"

    def renamed(self, mapping: Mapping[str, str]) -> "IdealSpec":
        truncations = tuple(
            (frozenset(mapping[name] for name in names), bound)
            for names, bound in self.truncations
        )
        relations = tuple(
            tuple(
                (tuple((mapping[name], exp) for name, exp in factors), coeff)
                for factors, coeff in relation
            )
            for relation in self.relations
        )
        return IdealSpec(truncations, relations)

    def __add__(self, other: "IdealSpec") -> "IdealSpec":
        return IdealSpec(self.truncations + other.truncations, self.relations + other.relations)


class Algebra:
    """
    (ΛV / I, d): a free graded-commutative algebra on ordered generators,
    an ideal, an optional differential and a degree bound for relation
    reduction.

    Generator order is declaration order and fixes normal forms and signs.
    """

    def __init__(
        self,
        generators: Sequence[Generator],
        ideal: IdealSpec = IdealSpec(),
        differential: Optional[Mapping[str, NamedTerms]] = None,
        max_degree: int = MAX_DEGREE,
        name: str = "",
    ):
        self.generators: Tuple[Generator, ...] = tuple(generators)
        self.ideal = ideal
        self.max_degree = max_degree
        self.name = name
        self._differential = dict(differential) if differential is not None else None

        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate generator names in {names}")
        for generator in self.generators:
            if generator.degree < 1:
                raise UsageError(f"generator {generator.name} has degree {generator.degree} < 1")

        self._index = {g.name: i for i, g in enumerate(self.generators)}
        self._odd = tuple(g.is_odd for g in self.generators)
        self._degrees = tuple(g.degree for g in self.generators)
        self._truncation_groups = []
        for group, bound in ideal.truncations:
            unknown = set(group) - set(self._index)
            if unknown:
                raise UsageError(f"truncation refers to unknown generators {sorted(unknown)}")
            self._truncation_groups.append((tuple(sorted(self._index[n] for n in group)), bound))

        self._monomial_cache: Dict[int, List[Monomial]] = {}
        self._reducer_cache: Dict[int, Optional[RowReducer]] = {}
        self._relations = [self._raw_from_named(rel) for rel in ideal.relations]
        self._relation_degrees = []
        for relation in self._relations:
            degrees = {self.monomial_degree(m) for m in relation}
            if len(degrees) > 1:
                raise UsageError("ideal generators must be homogeneous")
            self._relation_degrees.append(degrees.pop() if degrees else None)

    # -------------------------------------------------------------------------
    # Identity
    # -------------------------------------------------------------------------
    @property
    def signature(self):
        return (self.generators, self.ideal)

    def compatible(self, other: "Algebra") -> bool:
        return self is other or self.signature == other.signature

    @property
    def truncation_degree(self) -> Optional[int]:
        """N when the ideal is the plain truncation (ΛV)^{>=N}."""
        all_names = frozenset(g.name for g in self.generators)
        for group, bound in self.ideal.truncations:
            if group == all_names:
                return bound
        return None

    @property
    def has_differential(self) -> bool:
        return self._differential is not None

    def __repr__(self):
        gens = ", ".join(f"{g.name}_{g.degree}" for g in self.generators)
        return f"Algebra({self.name or 'Λ'}[{gens}], ideal={self.ideal.kind})"

    # -------------------------------------------------------------------------
    # Generators and elements
    # -------------------------------------------------------------------------
    def index(self, name: str) -> int:
        if name not in self._index:
            raise UsageError(f"unknown generator {name!r}")
        return self._index[name]

    def generator(self, name: str) -> Generator:
        return self.generators[self.index(name)]

    def has_generator(self, name: str) -> bool:
        return name in self._index

    def gen(self, name: str) -> "Element":
        exponents = [0] * len(self.generators)
        exponents[self.index(name)] = 1
        return self.element({tuple(exponents): 1})

    def one(self) -> "Element":
        return self.element({self.unit_monomial: 1})

    def zero(self) -> "Element":
        return Element(self, {})

    def scalar(self, value) -> "Element":
        return self.element({self.unit_monomial: value})

    @property
    def unit_monomial(self) -> Monomial:
        return (0,) * len(self.generators)

    def monomial_degree(self, monomial: Monomial) -> int:
        return sum(e * d for e, d in zip(monomial, self._degrees))

    def monomial_element(self, monomial: Monomial) -> "Element":
        return self.element({monomial: 1})

    def element(self, terms: Mapping[Monomial, object]) -> "Element":
        """Build a normalized element from raw monomial terms."""
        raw: Dict[Monomial, object] = {}
        for monomial, coeff in terms.items():
            if len(monomial) != len(self.generators):
                raise UsageError(f"monomial {monomial} does not match {self!r}")
            if any(e > 1 and odd for e, odd in zip(monomial, self._odd)):
                continue
            if self._is_truncated(monomial):
                continue
            value = raw.get(monomial, 0) + to_rational(coeff)
            if value:
                raw[monomial] = value
            else:
                raw.pop(monomial, None)
        return Element(self, self._reduce_relations(raw))

    # -------------------------------------------------------------------------
    # Differential
    # -------------------------------------------------------------------------
    def with_differential(self, values: Mapping[str, "Element"]) -> "Algebra":
        """Same algebra carrying d(g) = values[g]; unspecified generators are cocycles."""
        stored = {}
        for generator in self.generators:
            value = values.get(generator.name)
            if value is None:
                stored[generator.name] = ()
                continue
            if not value.algebra.compatible(self):
                raise UsageError(f"d({generator.name}) is not an element of {self!r}")
            if not value.is_zero() and value.degree != generator.degree + 1:
                raise UsageError(f"d({generator.name}) must have degree {generator.degree + 1}")
            stored[generator.name] = self.named_terms(value)
        return Algebra(self.generators, self.ideal, stored, self.max_degree, self.name)

    def differential_values(self) -> Dict[str, "Element"]:
        if self._differential is None:
            raise UsageError(f"{self!r} carries no differential")
        return {
            g.name: self.element(self._raw_from_named(self._differential.get(g.name, ())))
            for g in self.generators
        }

    def relations(self) -> List["Element"]:
        """The ideal generators as elements of the free algebra on the same generators."""
        free = self.without_ideal()
        return [Element(free, dict(raw)) for raw in self._relations]

    def without_ideal(self) -> "Algebra":
        return Algebra(self.generators, IdealSpec(), self._differential, self.max_degree, self.name)

    def with_max_degree(self, max_degree: int) -> "Algebra":
        return Algebra(self.generators, self.ideal, self._differential, max_degree, self.name)

    # -------------------------------------------------------------------------
    # Monomial arithmetic
    # -------------------------------------------------------------------------
    def _is_truncated(self, monomial: Monomial) -> bool:
        for positions, bound in self._truncation_groups:
            if sum(monomial[i] * self._degrees[i] for i in positions) >= bound:
                return True
        return False

    def raw_product(self, left: Monomial, right: Monomial) -> Optional[Tuple[int, Monomial]]:
        """Sign and normalized monomial of left*right, or None if it vanishes (no relation reduction)."""
        n = len(self.generators)
        inversions = 0
        for j in range(n):
            if right[j] and self._odd[j]:
                if left[j]:
                    return None
                inversions += sum(1 for i in range(j + 1, n) if left[i] and self._odd[i])
        product = tuple(a + b for a, b in zip(left, right))
        if self._is_truncated(product):
            return None
        return (-1 if inversions % 2 else 1), product

    def _raw_from_named(self, named: NamedTerms) -> Dict[Monomial, object]:
        """Raw (relation-unreduced) terms of an element stored by names."""
        out: Dict[Monomial, object] = {}
        for factors, coeff in named:
            sign, monomial = 1, self.unit_monomial
            for name, exp in factors:
                exponents = [0] * len(self.generators)
                exponents[self.index(name)] = 1
                for _ in range(exp):
                    step = self.raw_product(monomial, tuple(exponents))
                    if step is None:
                        monomial = None
                        break
                    sign *= step[0]
                    monomial = step[1]
                if monomial is None:
                    break
            if monomial is None:
                continue
            value = out.get(monomial, 0) + sign * to_rational(coeff)
            if value:
                out[monomial] = value
            else:
                out.pop(monomial, None)
        return out

    def named_terms(self, x: "Element") -> NamedTerms:
        return tuple(
            (tuple((g.name, e) for g, e in zip(self.generators, m) if e), coeff)
            for m, coeff in x.sorted_terms()
        )

    def sort_key(self, monomial: Monomial):
        return (self.monomial_degree(monomial), tuple(-e for e in monomial))

    # -------------------------------------------------------------------------
    # Degreewise bases
    # -------------------------------------------------------------------------
    def _enumerate(self, degree: int, index: int) -> Iterator[Monomial]:
        if index == len(self.generators):
            if degree == 0:
                yield ()
            return
        step = self._degrees[index]
        top = min(1, degree // step) if self._odd[index] else degree // step
        for exp in range(top, -1, -1):
            for tail in self._enumerate(degree - exp * step, index + 1):
                yield (exp,) + tail

    def free_monomials(self, degree: int) -> List[Monomial]:
        """Monomials of the given degree surviving truncation, in canonical order."""
        if degree < 0:
            return []
        if degree not in self._monomial_cache:
            monomials = [m for m in self._enumerate(degree, 0) if not self._is_truncated(m)]
            monomials.sort(key=self.sort_key)
            self._monomial_cache[degree] = monomials
        return self._monomial_cache[degree]

    def ideal_span(self, degree: int) -> List[Dict[Monomial, object]]:
        """Raw spanning set {r*m : r relation, m monomial} of the ideal in one degree."""
        span = []
        for relation, rdeg in zip(self._relations, self._relation_degrees):
            if rdeg is None or rdeg > degree:
                continue
            for monomial in self.free_monomials(degree - rdeg):
                product: Dict[Monomial, object] = {}
                for rm, coeff in relation.items():
                    step = self.raw_product(rm, monomial)
                    if step is None:
                        continue
                    value = product.get(step[1], 0) + step[0] * coeff
                    if value:
                        product[step[1]] = value
                    else:
                        product.pop(step[1], None)
                if product:
                    span.append(product)
        return span

    def _reducer(self, degree: int) -> Optional[RowReducer]:
        if not self._relations:
            return None
        if degree > self.max_degree:
            raise UsageError(
                f"degree {degree} exceeds the degree bound {self.max_degree}; ideal span not enumerated"
            )
        if degree not in self._reducer_cache:
            columns = {m: j for j, m in enumerate(self.free_monomials(degree))}
            rows = [
                {columns[m]: c for m, c in product.items()}
                for product in self.ideal_span(degree)
            ]
            reducer = RowReducer(rows, len(columns)) if rows else None
            logger.debug("ideal span in degree %d has rank %d", degree, reducer.rank if reducer else 0)
            self._reducer_cache[degree] = reducer
        return self._reducer_cache[degree]

    def _reduce_relations(self, raw: Dict[Monomial, object]) -> Dict[Monomial, object]:
        if not self._relations or not raw:
            return raw
        by_degree: Dict[int, Dict[Monomial, object]] = {}
        for monomial, coeff in raw.items():
            by_degree.setdefault(self.monomial_degree(monomial), {})[monomial] = coeff
        out: Dict[Monomial, object] = {}
        for degree, part in by_degree.items():
            reducer = self._reducer(degree)
            if reducer is None:
                out.update(part)
                continue
            monomials = self.free_monomials(degree)
            columns = {m: j for j, m in enumerate(monomials)}
            residual = reducer.reduce({columns[m]: c for m, c in part.items()})
            out.update({monomials[j]: c for j, c in residual.items()})
        return out

    def basis_of_degree(self, degree: int) -> List[Monomial]:
        monomials = self.free_monomials(degree)
        reducer = self._reducer(degree) if monomials else None
        if reducer is None:
            return list(monomials)
        pivots = set(reducer.pivots)
        return [m for j, m in enumerate(monomials) if j not in pivots]

    def top_degree(self) -> Optional[int]:
        """
        Largest nonzero degree when the algebra is finite dimensional; None
        otherwise. With relations the scan stops at the degree bound.
        """
        if not self.generators:
            return 0
        window = max(self._degrees)
        limit = self.max_degree
        if not self._relations:
            covered = {i for positions, _ in self._truncation_groups for i in positions}
            free = [i for i in range(len(self.generators)) if i not in covered]
            if any(not self._odd[i] for i in free):
                return None
            limit = (
                sum(bound - 1 for _, bound in self._truncation_groups)
                + sum(self._degrees[i] for i in free)
                + window
            )
        last_nonzero, empty_run = 0, 0
        for degree in range(1, limit + 1):
            if self.basis_of_degree(degree):
                last_nonzero, empty_run = degree, 0
            else:
                empty_run += 1
                if empty_run >= window:
                    return last_nonzero
        return None

    # -------------------------------------------------------------------------
    # Printing
    # -------------------------------------------------------------------------
    def format_monomial(self, monomial: Monomial) -> str:
        factors = []
        for generator, exp in zip(self.generators, monomial):
            if exp == 1:
                factors.append(generator.name)
            elif exp > 1:
                factors.append(f"{generator.name}^{exp}")
        return "*".join(factors) if factors else "1"

    def format(self, x: "Element") -> str:
        return format_terms(
            [(self.format_monomial(m), c, m == self.unit_monomial) for m, c in x.sorted_terms()]
        )


def format_coefficient(coeff, is_unit: bool) -> Tuple[str, str]:
    """Split a coefficient into sign and the printed magnitude prefix."""
    sign = "-" if coeff < 0 else "+"
    magnitude = -coeff if coeff < 0 else coeff
    if is_unit:
        return sign, str(magnitude)
    if magnitude == 1:
        return sign, ""
    return sign, f"{magnitude}*"


def format_terms(terms: Sequence[Tuple[str, object, bool]]) -> str:
    """Render (label, coefficient, label-is-unit) triples as a re-parseable sum."""
    if not terms:
        return "0"
    pieces = []
    for position, (label, coeff, is_unit) in enumerate(terms):
        sign, prefix = format_coefficient(coeff, is_unit)
        body = prefix if is_unit else f"{prefix}{label}"
        if position == 0:
            pieces.append(f"-{body}" if sign == "-" else body)
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


class Element:
    """A normalized finite QQ-combination of monomials of one algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Algebra, terms: Dict[Monomial, object]):
        self.algebra = algebra
        self.terms = terms

    # -- structure ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> Optional[int]:
        """Common degree of all terms; None for zero or inhomogeneous elements."""
        degrees = {self.algebra.monomial_degree(m) for m in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def is_homogeneous(self) -> bool:
        return self.is_zero() or self.degree is not None

    def homogeneous_parts(self) -> Dict[int, "Element"]:
        parts: Dict[int, Dict[Monomial, object]] = {}
        for monomial, coeff in self.terms.items():
            parts.setdefault(self.algebra.monomial_degree(monomial), {})[monomial] = coeff
        return {k: Element(self.algebra, v) for k, v in parts.items()}

    def coefficient(self, monomial: Monomial):
        return self.terms.get(monomial, QQ(0))

    def constant_term(self):
        return self.coefficient(self.algebra.unit_monomial)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: self.algebra.sort_key(item[0]))

    # -- arithmetic -----------------------------------------------------------
    def _check(self, other: "Element"):
        if not self.algebra.compatible(other.algebra):
            raise UsageError(f"operands live in different algebras: {self.algebra!r} and {other.algebra!r}")

    def __add__(self, other):
        if not isinstance(other, Element):
            other = self.algebra.scalar(other)
        self._check(other)
        terms = dict(self.terms)
        for monomial, coeff in other.terms.items():
            value = terms.get(monomial, 0) + coeff
            if value:
                terms[monomial] = value
            else:
                terms.pop(monomial, None)
        return Element(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Element):
            other = self.algebra.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value) -> "Element":
        value = to_rational(value)
        if not value:
            return self.algebra.zero()
        return Element(self.algebra, {m: c * value for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        if is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int):
        result = self.algebra.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra.compatible(other.algebra) and self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return self.algebra.format(self)

    __str__ = __repr__


# =============================================================================
# Operations
# =============================================================================

def multiply(x: Element, y: Element, algebra: Optional[Algebra] = None) -> Element:
    """Graded-commutative product of x and y reduced modulo the ideal."""
    algebra = algebra or x.algebra
    if not (algebra.compatible(x.algebra) and algebra.compatible(y.algebra)):
        raise UsageError("multiply called with operands from different algebras")
    raw: Dict[Monomial, object] = {}
    for left, a in x.terms.items():
        for right, b in y.terms.items():
            step = algebra.raw_product(left, right)
            if step is None:
                continue
            sign, monomial = step
            value = raw.get(monomial, 0) + sign * a * b
            if value:
                raw[monomial] = value
            else:
                raw.pop(monomial, None)
    return Element(algebra, algebra._reduce_relations(raw))


def basis_of_degree(algebra: Algebra, degree: int) -> List[Monomial]:
    """Canonical monomial basis of the algebra in one degree; degree 0 is {1}."""
    if degree < 0:
        raise UsageError("degree must be non-negative")
    return algebra.basis_of_degree(degree)


def normal_form(x: Element, algebra: Algebra, max_degree: int) -> Element:
    """
    Canonical representative of x modulo the ideal of the algebra.

    x may come from any algebra on the same generators (typically the free
    one); its terms are reduced by truncation and by projection against the
    degreewise span of the relations.
    """
    if x.algebra.generators != algebra.generators:
        raise UsageError("normal_form needs an element on the same generators")
    for degree in x.homogeneous_parts():
        if degree > max_degree:
            raise UsageError(f"degree {degree} exceeds max_degree {max_degree}")
    return algebra.element(x.terms)


def tensor_algebra(algebra: Algebra, prime_suffix: str = PRIME_SUFFIX) -> Algebra:
    """
    A ⊗ A' as Λ(V ⊕ V') / (I ⊗ ΛV' + ΛV ⊗ I').

    Every generator is followed by its primed copy; the differential, when
    present, is copied onto the primed generators.
    """
    names = {g.name for g in algebra.generators}
    rename = {}
    for generator in algebra.generators:
        primed = generator.name + prime_suffix
        if primed in names:
            raise UsageError(f"primed name {primed!r} collides with an existing generator")
        rename[generator.name] = primed

    generators = []
    for generator in algebra.generators:
        generators.append(generator)
        generators.append(Generator(rename[generator.name], generator.degree))

    ideal = algebra.ideal + algebra.ideal.renamed(rename)
    differential = None
    if algebra.has_differential:
        differential = {}
        for name, named in algebra._differential.items():
            differential[name] = named
            differential[rename[name]] = tuple(
                (tuple((rename[n], e) for n, e in factors), coeff) for factors, coeff in named
            )
    name = f"{algebra.name}⊗{algebra.name}" if algebra.name else ""
    return Algebra(generators, ideal, differential, algebra.max_degree, name)


class AlgebraMorphism:
    """A degree-preserving algebra map determined by its values on generators."""

    def __init__(self, source: Algebra, target: Algebra, images: Mapping[str, Element]):
        self.source = source
        self.target = target
        self.images: Dict[str, Element] = {}
        for generator in source.generators:
            image = images.get(generator.name, target.zero())
            if not image.algebra.compatible(target):
                raise UsageError(f"image of {generator.name} is not an element of {target!r}")
            if not image.is_zero() and image.degree != generator.degree:
                raise UsageError(f"image of {generator.name} must have degree {generator.degree}")
            self.images[generator.name] = image

    @classmethod
    def identity(cls, algebra: Algebra) -> "AlgebraMorphism":
        return cls(algebra, algebra, {g.name: algebra.gen(g.name) for g in algebra.generators})

    @classmethod
    def augmentation(cls, algebra: Algebra) -> "AlgebraMorphism":
        """The map to QQ killing every generator."""
        ground = Algebra([], max_degree=algebra.max_degree, name="QQ").with_differential({})
        return cls(algebra, ground, {})

    @classmethod
    def by_name(cls, source: Algebra, target: Algebra) -> "AlgebraMorphism":
        """Send each generator to the generator of the same name (or 0 if absent)."""
        return cls(source, target, {
            g.name: target.gen(g.name) if target.has_generator(g.name) else target.zero()
            for g in source.generators
        })

    def apply(self, x: Element) -> Element:
        if not x.algebra.compatible(self.source):
            raise UsageError("element is not in the source algebra")
        result = self.target.zero()
        for monomial, coeff in x.terms.items():
            term = self.target.scalar(coeff)
            for generator, exp in zip(self.source.generators, monomial):
                for _ in range(exp):
                    term = term * self.images[generator.name]
                    if term.is_zero():
                        break
                if term.is_zero():
                    break
            result = result + term
        return result

    __call__ = apply
