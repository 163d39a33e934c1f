# Package models
from src.models.vector_model import (
    ExtendedFloat,
    InnerProductNormSpec,
    LpNormSpec,
    NormSpec,
    Tolerance,
    Vector,
    WeightedLpNormSpec,
)
from src.models.hh_model import HHValues
from src.models.orthogonality_model import OrthoVerdict, RelationId
