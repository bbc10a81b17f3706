# Msecat / MTC bound machinery
from secat.path_fibration import PathFibrationExtension, PathFibrationModel, path_fibration_model
from secat.bounds import (
    BoundCertificate,
    HLevel,
    HLowerResult,
    RetractionProblem,
    RetractionResult,
    find_primitive,
    msecat_lower_via_H,
    retraction_problem,
    retraction_search,
    nil_ker_mu_ideal,
)

__all__ = [
    'PathFibrationExtension', 'PathFibrationModel', 'path_fibration_model',
    'BoundCertificate', 'HLevel', 'HLowerResult', 'RetractionProblem', 'RetractionResult',
    'find_primitive', 'msecat_lower_via_H', 'retraction_problem', 'retraction_search', 'nil_ker_mu_ideal',
]
