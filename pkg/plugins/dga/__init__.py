# Differential graded algebra package
from dga.derivation import (
    Derivation,
    apply_derivation,
    differential_of,
    check_d_squared,
    check_ideal_stable,
)
from dga.cohomology import (
    CochainSlice,
    CohomologyReport,
    CohomologyRing,
    NilVerdict,
    build_complex,
    algebra_complex,
    cohomology,
    cohomology_ring,
    nil_ker_mult,
)

__all__ = [
    'Derivation', 'apply_derivation', 'differential_of', 'check_d_squared', 'check_ideal_stable',
    'CochainSlice', 'CohomologyReport', 'CohomologyRing', 'NilVerdict',
    'build_complex', 'algebra_complex', 'cohomology', 'cohomology_ring', 'nil_ker_mult',
]
