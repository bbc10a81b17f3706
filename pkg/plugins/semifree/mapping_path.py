"""
Mapping-path constructions for a binary join.

For extensions M = A ⊕ A⊗X and N = A ⊕ A⊗Y this builds the factorization
of ν: N -> M⊗_A N, n -> 1⊗n, through

    (Q, D) = (M⊗_A N ⊕ N ⊕ s^{-1} M⊗_A N, D)

with i(n) = ν(n) - n and the projection π, then the pullback module

    (J, D) = (M ⊕ N ⊕ s^{-1} M⊗_A N, D)
    Dm = dm + s^{-1}m,  Dn = dn + s^{-1}n,  D s^{-1}w = -s^{-1}dw

with a·s^{-1}w = (-1)^{|a|} s^{-1}(aw), the comparison map f: J -> M*N, the
map g: R ⊕ s^{-1}R -> J from the acyclic complex on R = A ⊕ A⊗X ⊕ A⊗Y, and
the checks that together make f a quasi-isomorphism within a degree bound.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Tuple
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from sympy import QQ

from errors import IntegrityError, UsageError
from graded.algebra import Element, Monomial
from graded.linalg import rank
from dga.cohomology import cohomology
from semifree.base_module import UNIT, JoinGenerator, ModuleElement, SemifreeExtension
from semifree.joins import BinaryJoin

logger = logging.getLogger(__name__)

HALF = QQ(1, 2)


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


@dataclass(frozen=True)
class MappingPathLabel:
    """
    A generator of J or Q: part "M" (1_M or x_M), part "N" (1_N or y_N), part
    "T" (x⊗y in M⊗_A N) or part "s" (s^{-1}u for u in {1, x, y, x⊗y}).
    Missing factors stand for 1.
    """
    part: str
    x: Optional[Hashable] = None
    y: Optional[Hashable] = None

    @property
    def degree(self) -> int:
        degree = (self.x.degree if self.x is not None else 0) + (self.y.degree if self.y is not None else 0)
        return degree + 1 if self.part == "s" else degree

    def __str__(self):
        factors = [str(f) for f in (self.x, self.y) if f is not None]
        inner = "|".join(factors) if factors else "1"
        if self.part == "s":
            return f"s-1[{inner}]"
        return f"{inner}_{self.part}"


TensorTerm = Tuple[Element, Tuple[Optional[Hashable], Optional[Hashable]]]


def _units_or(module: SemifreeExtension, degree: int) -> List[Optional[Hashable]]:
    if degree == 0:
        return [None]
    if degree < module.lowest_generator_degree:
        return []
    return list(module.generators_of_degree(degree))


def _pairs(left: SemifreeExtension, right: SemifreeExtension, degree: int, part: str) -> List[MappingPathLabel]:
    """Labels of the given part for every x⊗y with |x| + |y| = degree, units included."""
    labels = []
    for x_degree in range(0, degree + 1):
        for x in _units_or(left, x_degree):
            for y in _units_or(right, degree - x_degree):
                labels.append(MappingPathLabel(part, x=x, y=y))
    return labels


def tensor_differential(left: SemifreeExtension, right: SemifreeExtension, x, y) -> List[TensorTerm]:
    """d(x⊗y) in M⊗_A N as [(coefficient, (x', y'))], None meaning the unit."""
    terms: List[TensorTerm] = []
    if x is not None:
        d0x, dplus_x = left.decompose_differential(x)
        terms.append((d0x, (None, y)))
        terms.extend((a, (target, y)) for a, target in dplus_x)
    if y is not None:
        d0y, dplus_y = right.decompose_differential(y)
        x_degree = x.degree if x is not None else 0
        terms.append((d0y.scale(_sign(x_degree * y.degree)), (x, None)))
        for b, target in dplus_y:
            b_degree = y.degree + 1 - target.degree
            terms.append((b.scale(_sign(x_degree * (b_degree + 1))), (x, target)))
    return [(c, u) for c, u in terms if not c.is_zero()]


class MappingPathModule(SemifreeExtension):
    """(J, D) for two extensions of a common base; it has no distinguished unit summand."""

    def __init__(self, left: SemifreeExtension, right: SemifreeExtension):
        if not left.base.compatible(right.base):
            raise UsageError("mapping-path module needs extensions of the same base algebra")
        super().__init__(left.base, name=f"J({left.name},{right.name})")
        self.left = left
        self.right = right
        self._generators: Dict[int, List[MappingPathLabel]] = {}

    @property
    def lowest_generator_degree(self) -> int:
        return 0

    def generators_of_degree(self, degree: int) -> List[MappingPathLabel]:
        if degree not in self._generators:
            labels = [MappingPathLabel("M", x=x) for x in _units_or(self.left, degree)]
            labels.extend(MappingPathLabel("N", y=y) for y in _units_or(self.right, degree))
            labels.extend(_pairs(self.left, self.right, degree - 1, "s"))
            self._generators[degree] = labels
        return self._generators[degree]

    def has_generator(self, label) -> bool:
        return isinstance(label, MappingPathLabel) and label in self.generators_of_degree(label.degree)

    def _compute_decomposition(self, label: MappingPathLabel):
        terms = []
        if label.part == "M":
            for coefficient, (x, _) in tensor_differential(self.left, self.right, label.x, None):
                terms.append((coefficient, MappingPathLabel("M", x=x)))
            terms.append((self.base.one(), MappingPathLabel("s", x=label.x)))
        elif label.part == "N":
            for coefficient, (_, y) in tensor_differential(self.left, self.right, None, label.y):
                terms.append((coefficient, MappingPathLabel("N", y=y)))
            terms.append((self.base.one(), MappingPathLabel("s", y=label.y)))
        else:
            source_degree = label.degree - 1
            for coefficient, (x, y) in tensor_differential(self.left, self.right, label.x, label.y):
                target = MappingPathLabel("s", x=x, y=y)
                c_degree = source_degree + 1 - (target.degree - 1)
                terms.append((coefficient.scale(-_sign(c_degree)), target))
        return self.base.zero(), terms

    def basis_of_degree(self, degree: int):
        return [key for key in super().basis_of_degree(degree) if key[0] is not UNIT]

    def suspended(self, coefficient: Element, x=None, y=None) -> ModuleElement:
        """s^{-1}(c·u) = (-1)^{|c|} c·s^{-1}u for homogeneous c."""
        label = MappingPathLabel("s", x=x, y=y)
        result = self.zero()
        for degree, part in coefficient.homogeneous_parts().items():
            result = result + self.generator_element(label, part.scale(_sign(degree)))
        return result


class TensorProductModule(SemifreeExtension):
    """M⊗_A N as a semifree extension on the labels x|y_T; 1⊗1 is the unit summand."""

    def __init__(self, left: SemifreeExtension, right: SemifreeExtension):
        if not left.base.compatible(right.base):
            raise UsageError("tensor product needs extensions of the same base algebra")
        super().__init__(left.base, name=f"{left.name}⊗{right.name}")
        self.left = left
        self.right = right
        self._generators: Dict[int, List[MappingPathLabel]] = {}

    @property
    def lowest_generator_degree(self) -> int:
        return min(self.left.lowest_generator_degree, self.right.lowest_generator_degree)

    def label(self, x=None, y=None):
        return UNIT if x is None and y is None else MappingPathLabel("T", x=x, y=y)

    def generators_of_degree(self, degree: int) -> List[MappingPathLabel]:
        if degree not in self._generators:
            self._generators[degree] = [
                label for label in _pairs(self.left, self.right, degree, "T")
                if label.x is not None or label.y is not None
            ]
        return self._generators[degree]

    def _compute_decomposition(self, label: MappingPathLabel):
        d0 = self.base.zero()
        dplus = []
        for coefficient, (x, y) in tensor_differential(self.left, self.right, label.x, label.y):
            if x is None and y is None:
                d0 = d0 + coefficient
            else:
                dplus.append((coefficient, MappingPathLabel("T", x=x, y=y)))
        return d0, dplus


class MappingPathQModule(MappingPathModule):
    """
    (Q, D) = (M⊗_A N ⊕ N ⊕ s^{-1} M⊗_A N, D) factoring ν: N -> M⊗_A N, with

        D(m⊗n) = d(m⊗n) + s^{-1}(m⊗n),  Dn = dn + s^{-1}ν(n),  D s^{-1}w = -s^{-1}dw

    The M⊗_A N summand uses part "T"; its unit 1⊗1 is the label with no factors.
    """

    def __init__(self, left: SemifreeExtension, right: SemifreeExtension):
        super().__init__(left, right)
        self.name = f"Q({left.name},{right.name})"

    def generators_of_degree(self, degree: int) -> List[MappingPathLabel]:
        if degree not in self._generators:
            labels = _pairs(self.left, self.right, degree, "T")
            labels.extend(MappingPathLabel("N", y=y) for y in _units_or(self.right, degree))
            labels.extend(_pairs(self.left, self.right, degree - 1, "s"))
            self._generators[degree] = labels
        return self._generators[degree]

    def _compute_decomposition(self, label: MappingPathLabel):
        if label.part != "T":
            return super()._compute_decomposition(label)
        terms = [
            (coefficient, MappingPathLabel("T", x=x, y=y))
            for coefficient, (x, y) in tensor_differential(self.left, self.right, label.x, label.y)
        ]
        terms.append((self.base.one(), MappingPathLabel("s", x=label.x, y=label.y)))
        return self.base.zero(), terms


# =============================================================================
# The acyclic complex R ⊕ s^{-1}R
# =============================================================================

# (summand, u, monomial): summand "R" for r = c⊗u, "sR" for s^{-1}(c⊗u)
RKey = Tuple[str, Optional[Hashable], Monomial]


class AcyclicComplex:
    """(R ⊕ s^{-1}R, D) with Dr = dr + s^{-1}r and D s^{-1}r = -s^{-1}dr."""

    def __init__(self, left: SemifreeExtension, right: SemifreeExtension):
        self.left = left
        self.right = right
        self.base = left.base

    def _r_basis(self, degree: int) -> List[Tuple[Optional[Hashable], Monomial]]:
        basis = [(None, m) for m in self.base.basis_of_degree(degree)] if degree >= 0 else []
        for side, module in ((True, self.left), (False, self.right)):
            for label_degree in range(module.lowest_generator_degree, degree + 1):
                monomials = self.base.basis_of_degree(degree - label_degree)
                for label in module.generators_of_degree(label_degree):
                    basis.extend(((side, label), m) for m in monomials)
        return basis

    def basis_of_degree(self, degree: int) -> List[RKey]:
        return [("R", u, m) for u, m in self._r_basis(degree)] + [("sR", u, m) for u, m in self._r_basis(degree - 1)]

    def _module_of(self, u):
        return self.left if u[0] else self.right

    def _d_r(self, u, monomial: Monomial) -> Dict[Tuple[Optional[Hashable], Monomial], object]:
        """Differential inside R of c⊗u."""
        d = self.left.base_differential
        c = self.base.monomial_element(monomial)
        out: Dict = {}

        def add(target, element: Element):
            for m, value in element.terms.items():
                key = (target, m)
                updated = out.get(key, 0) + value
                if updated:
                    out[key] = updated
                else:
                    out.pop(key, None)

        add(u, d(c))
        if u is not None:
            module = self._module_of(u)
            d0, dplus = module.decompose_differential(u[1])
            sign = _sign(self.base.monomial_degree(monomial))
            add(None, (c * d0).scale(sign))
            for a, target in dplus:
                add((u[0], target), (c * a).scale(sign))
        return out

    def differential(self, key: RKey) -> Dict[RKey, object]:
        summand, u, monomial = key
        out: Dict[RKey, object] = {}
        for (target, m), value in self._d_r(u, monomial).items():
            new_key = ("R", target, m) if summand == "R" else ("sR", target, m)
            out[new_key] = value if summand == "R" else -value
        if summand == "R":
            out[("sR", u, monomial)] = out.get(("sR", u, monomial), 0) + 1
        return {k: v for k, v in out.items() if v}


# =============================================================================
# ν = π∘i through (Q, D)
# =============================================================================

@dataclass
class JoinMapFactorization:
    """N --i--> Q --π--> M⊗_A N with i(n) = ν(n) - n and π the projection."""
    tensor: TensorProductModule
    Q: MappingPathQModule
    checked_up_to: Optional[int] = None
    betti_numbers: Dict[str, List[int]] = field(default_factory=dict)

    @property
    def right(self) -> SemifreeExtension:
        return self.Q.right

    def nu(self, n: ModuleElement) -> ModuleElement:
        """ν(n) = 1⊗n."""
        return self.tensor.element({
            self.tensor.label(y=None if label is UNIT else label): c for label, c in n.terms.items()
        })

    def i(self, n: ModuleElement) -> ModuleElement:
        terms: Dict[MappingPathLabel, Element] = {}
        for label, coefficient in n.terms.items():
            y = None if label is UNIT else label
            terms[MappingPathLabel("T", y=y)] = coefficient
            terms[MappingPathLabel("N", y=y)] = -coefficient
        return self.Q.element(terms)

    def pi(self, q: ModuleElement) -> ModuleElement:
        return self.tensor.element({
            self.tensor.label(label.x, label.y): c for label, c in q.terms.items() if label.part == "T"
        })

    def verify(self, max_degree: int) -> "JoinMapFactorization":
        """
        Check D^2 = 0 on Q and on M⊗_A N, that i and π are chain maps with
        π∘i = ν, and equal Betti numbers of N and Q up to max_degree.
        """
        Q, tensor, right = self.Q, self.tensor, self.right
        for module in (Q, tensor):
            failure = module.check_d_squared(max_degree)
            if failure is not None:
                raise IntegrityError(f"D^2({failure[0]}) = {failure[1]} in {module.name}")

        base = Q.base
        for degree in range(0, max_degree + 1):
            for label, monomial in right.basis_of_degree(degree):
                n = right.generator_element(label, base.monomial_element(monomial))
                if Q.apply_d(self.i(n)) != self.i(right.apply_d(n)):
                    raise IntegrityError(f"i does not commute with D on {n}")
                if self.pi(self.i(n)) != self.nu(n):
                    raise IntegrityError(f"π(i({n})) != ν({n})")
            for label, monomial in Q.basis_of_degree(degree):
                q = Q.generator_element(label, base.monomial_element(monomial))
                if self.pi(Q.apply_d(q)) != tensor.apply_d(self.pi(q)):
                    raise IntegrityError(f"π does not commute with D on {q}")

        N_betti = cohomology(right.complex(max_degree)).betti_numbers()
        Q_betti = cohomology(Q.complex(max_degree)).betti_numbers()
        if N_betti != Q_betti:
            raise IntegrityError(f"i is not a quasi-isomorphism: N {N_betti}, Q {Q_betti}")
        self.betti_numbers = {"N": N_betti, "Q": Q_betti}
        self.checked_up_to = max_degree
        logger.debug("factorization through %s verified up to degree %d", Q.name, max_degree)
        return self


def mapping_path_factorization(left: SemifreeExtension, right: SemifreeExtension) -> JoinMapFactorization:
    return JoinMapFactorization(TensorProductModule(left, right), MappingPathQModule(left, right))


# =============================================================================
# f, g, j and their checks
# =============================================================================

@dataclass
class MappingPathConstructions:
    join: BinaryJoin
    J: MappingPathModule
    acyclic: AcyclicComplex
    factorization: JoinMapFactorization
    checked_up_to: Optional[int] = None
    betti_numbers: Dict[str, List[int]] = field(default_factory=dict)

    @property
    def base(self):
        return self.J.base

    # -- f --------------------------------------------------------------------
    def f_label(self, label: MappingPathLabel) -> ModuleElement:
        base = self.base
        if label.part == "M":
            return self.join.generator_element(UNIT, base.scalar(HALF)) if label.x is None else self.join.zero()
        if label.part == "N":
            return self.join.generator_element(UNIT, base.scalar(-HALF)) if label.y is None else self.join.zero()
        if label.x is None and label.y is None:
            return self.join.zero()
        if label.y is None:
            d0x, _ = self.J.left.decompose_differential(label.x)
            return self.join.generator_element(UNIT, d0x.scale(-HALF))
        if label.x is None:
            d0y, _ = self.J.right.decompose_differential(label.y)
            return self.join.generator_element(UNIT, d0y.scale(HALF))
        return self.join.generator_element(JoinGenerator(1, (label.x, label.y)))

    def f(self, element: ModuleElement) -> ModuleElement:
        """The A-linear map J -> M*N."""
        result = self.join.zero()
        for label, coefficient in element.terms.items():
            result = result + coefficient * self.f_label(label)
        return result

    def j(self, a: Element) -> ModuleElement:
        """j(a) = a_M - a_N."""
        return self.J.element({MappingPathLabel("M"): a, MappingPathLabel("N"): -a})

    # -- g --------------------------------------------------------------------
    def g(self, key: RKey) -> ModuleElement:
        summand, u, monomial = key
        J = self.J
        a = self.base.monomial_element(monomial)
        sign = _sign(self.base.monomial_degree(monomial))
        if summand == "R":
            if u is None:
                return J.element({MappingPathLabel("M"): a.scale(HALF), MappingPathLabel("N"): a.scale(HALF)})
            side, generator = u
            label = MappingPathLabel("M", x=generator) if side else MappingPathLabel("N", y=generator)
            return J.generator_element(label, a)
        if u is None:
            return J.suspended(a)
        side, generator = u
        module = J.left if side else J.right
        d0, _ = module.decompose_differential(generator)
        correction = (a * d0).scale(HALF * sign)
        if side:
            suspended = J.suspended(a, x=generator)
            return suspended + J.element({MappingPathLabel("M"): correction, MappingPathLabel("N"): -correction})
        suspended = J.suspended(a, y=generator)
        return suspended + J.element({MappingPathLabel("M"): -correction, MappingPathLabel("N"): correction})

    def g_vector(self, vector: Dict[RKey, object]) -> ModuleElement:
        result = self.J.zero()
        for key, value in vector.items():
            result = result + self.g(key).scale(value)
        return result

    # -- checks ---------------------------------------------------------------
    def verify(self, max_degree: int) -> "MappingPathConstructions":
        """
        Check the factorization of ν through Q, then D^2 = 0 on J, that f and
        g are chain maps, f∘j = 1, f∘g = 0, rank g = dim ker f and equal Betti
        numbers of J and M*N in every degree up to max_degree. Raises
        IntegrityError on the first failure.
        """
        self.factorization.verify(max_degree)
        J, join = self.J, self.join
        failure = J.check_d_squared(max_degree)
        if failure is not None:
            raise IntegrityError(f"D^2({failure[0]}) = {failure[1]} in J")

        for label in J.generators_up_to(max_degree):
            lhs = self.f(J.differential(label))
            rhs = join.apply_d(self.f_label(label))
            if lhs != rhs:
                raise IntegrityError(f"f does not commute with D on {label}: {lhs} != {rhs}")

        for degree in range(0, max_degree + 1):
            for monomial in self.base.basis_of_degree(degree):
                a = self.base.monomial_element(monomial)
                if self.f(self.j(a)) != join.generator_element(UNIT, a):
                    raise IntegrityError(f"f(j({a})) != {a}")

            f_columns, J_basis = self._f_matrix(degree)
            g_columns = []
            J_position = {key: i for i, key in enumerate(J_basis)}
            acyclic_basis = self.acyclic.basis_of_degree(degree)
            for key in acyclic_basis:
                image = self.g(key)
                if not self.f(image).is_zero():
                    raise IntegrityError(f"f(g({key})) != 0")
                lhs = self.g_vector(self.acyclic.differential(key))
                rhs = J.apply_d(image)
                if lhs != rhs:
                    raise IntegrityError(f"g does not commute with D on {key}")
                g_columns.append({J_position[k]: v for k, v in image.coordinates().items()})
            kernel_dimension = len(J_basis) - rank(f_columns, len(join.basis_of_degree(degree)))
            g_rank = rank(g_columns, len(J_basis))
            if g_rank != len(acyclic_basis) or g_rank != kernel_dimension:
                raise IntegrityError(f"g is not an isomorphism onto ker f in degree {degree}")

        J_betti = cohomology(J.complex(max_degree)).betti_numbers()
        join_betti = cohomology(join.complex(max_degree)).betti_numbers()
        if J_betti != join_betti:
            raise IntegrityError(f"Betti numbers differ: J {J_betti}, join {join_betti}")
        self.betti_numbers = {"J": J_betti, "join": join_betti, **self.factorization.betti_numbers}
        self.checked_up_to = max_degree
        logger.info("mapping-path constructions verified up to degree %d", max_degree)
        return self

    def _f_matrix(self, degree: int):
        J_basis = self.J.basis_of_degree(degree)
        join_position = {key: i for i, key in enumerate(self.join.basis_of_degree(degree))}
        columns = []
        for label, monomial in J_basis:
            image = self.f(self.J.generator_element(label, self.base.monomial_element(monomial)))
            columns.append({join_position[k]: v for k, v in image.coordinates().items()})
        return columns, J_basis


def mapping_path_constructions(left: SemifreeExtension, right: SemifreeExtension) -> MappingPathConstructions:
    """Build (Q, D), (J, D), f and g for the join of two extensions over a common base."""
    return MappingPathConstructions(
        BinaryJoin(left, right),
        MappingPathModule(left, right),
        AcyclicComplex(left, right),
        mapping_path_factorization(left, right),
    )
