"""
Packing model: cylinders in a ball, validity, density, generators
"""

from .base_generator import BaseGenerator
from .density import ball_volume, contained_mask, contains_in_ball, density, restrict
from .factory import GeneratorFactory
from .hexagonal_generator import EPS_GAP, HexagonalGenerator, gen_hexagonal_parallel, lattice_density
from .index import AxisIndex
from .laminate_generator import LaminateGenerator, gen_laminated_perturbed
from .models import BOUND_PARAMS, BoundParams, CylinderSpec, Packing, cylinder_volume
from .montecarlo import Box, MCResult, mc_volume
from .nesting import nest_capped, nesting_volume_ratio
from .protected import ends_near, protected_restriction, sample_protected_points
from .random_generator import RandomBundleGenerator, gen_random_bundle
from .storage import dump_packing, load_packing, packing_from_payload, save_packing
from .validation import ValidationReport, is_valid_packing

__all__ = [
    'BaseGenerator', 'GeneratorFactory', 'HexagonalGenerator', 'LaminateGenerator',
    'RandomBundleGenerator', 'gen_hexagonal_parallel', 'gen_laminated_perturbed',
    'gen_random_bundle', 'lattice_density', 'EPS_GAP',
    'BOUND_PARAMS', 'BoundParams', 'CylinderSpec', 'Packing', 'cylinder_volume',
    'ball_volume', 'contained_mask', 'contains_in_ball', 'density', 'restrict',
    'AxisIndex', 'Box', 'MCResult', 'mc_volume', 'nest_capped', 'nesting_volume_ratio',
    'ends_near', 'protected_restriction', 'sample_protected_points',
    'dump_packing', 'load_packing', 'packing_from_payload', 'save_packing',
    'ValidationReport', 'is_valid_packing',
]
