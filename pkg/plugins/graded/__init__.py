# Graded-commutative algebra package
from graded.algebra import (
    Generator,
    IdealSpec,
    Algebra,
    Element,
    AlgebraMorphism,
    multiply,
    basis_of_degree,
    tensor_algebra,
    normal_form,
)

__all__ = [
    'Generator', 'IdealSpec', 'Algebra', 'Element', 'AlgebraMorphism',
    'multiply', 'basis_of_degree', 'tensor_algebra', 'normal_form',
]
