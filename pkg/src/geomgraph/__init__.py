"""Random annulus graphs, geometric block models and triangle-count recovery."""

from .errors import DimensionError, DomainError, InconsistencyError, ModelError
from .generators import (
    GeometricInstance,
    gen_gbm,
    gen_gbm_t,
    gen_rag,
    gen_vrg,
    gen_vrg_union,
    naive_oracle,
    scaled_radius,
)
from .graph import Graph
from .recovery import (
    RecoveryOutcome,
    compute_thresholds,
    min_a_for_recovery,
    recover_gbm_1d,
    recover_gbm_highdim,
    recover_with_locations,
)

__version__ = "0.1.0"

__all__ = [
    "DimensionError", "DomainError", "InconsistencyError", "ModelError",
    "GeometricInstance", "Graph", "RecoveryOutcome",
    "gen_gbm", "gen_gbm_t", "gen_rag", "gen_vrg", "gen_vrg_union", "naive_oracle", "scaled_radius",
    "compute_thresholds", "min_a_for_recovery",
    "recover_gbm_1d", "recover_gbm_highdim", "recover_with_locations",
]
