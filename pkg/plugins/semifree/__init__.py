# Semifree extensions, fiber joins and mapping-path constructions
from semifree.base_module import (
    UNIT,
    FormalGenerator,
    JoinGenerator,
    ModuleElement,
    SemifreeExtension,
    decompose_differential,
    flatten_label,
    is_minimal,
)
from semifree.extensions import TableExtension, BaseChangedExtension, base_change
from semifree.joins import BinaryJoin, IteratedJoin, join, iterated_join, folded_join
from semifree.mapping_path import (
    JoinMapFactorization,
    MappingPathLabel,
    MappingPathModule,
    MappingPathQModule,
    MappingPathConstructions,
    TensorProductModule,
    mapping_path_constructions,
    mapping_path_factorization,
)

__all__ = [
    'UNIT', 'FormalGenerator', 'JoinGenerator', 'ModuleElement', 'SemifreeExtension',
    'decompose_differential', 'flatten_label', 'is_minimal',
    'TableExtension', 'BaseChangedExtension', 'base_change',
    'BinaryJoin', 'IteratedJoin', 'join', 'iterated_join', 'folded_join',
    'JoinMapFactorization', 'MappingPathLabel', 'MappingPathModule', 'MappingPathQModule',
    'MappingPathConstructions', 'TensorProductModule', 'mapping_path_constructions', 'mapping_path_factorization',
]
