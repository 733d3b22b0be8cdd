"""Troubled cell identification and reconstruction limiting."""

from .detect import *
from .reconstruct import *
from .system import *

__all__ = (
    'REASON_EXPANSION',
    'REASON_MINMOD',
    'REASON_NONE',
    'TVB_FACTOR',
    'Limiter',
    'LimiterWeights',
    'MidpointExpansion',
    'ReconstructionStencil',
    'TroubleFlags',
    'build_stencil',
    'constrained_fit',
    'detect_troubled',
    'limit_scalar',
    'limit_system',
    'midpoint_expansion',
    'minmod',
    'minmod_tvb',
    'smoothness_indicator',
    'smoothness_matrix',
    'tvb_threshold',
)
