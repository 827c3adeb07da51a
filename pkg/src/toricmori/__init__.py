"""Exact computations on the cone of curves of smooth complete toric varieties."""
from .errors import (
    DomainError,
    InputError,
    InvalidFanError,
    NotContractibleError,
    NotProjectiveError,
    ToricError,
)
from .fan import Fan, GeneralFan, Wall, parse_fan, serialize_fan, validate
from .cycles import CycleClass, PrimitiveRelation

__all__ = [
    "CycleClass", "DomainError", "Fan", "GeneralFan", "InputError", "InvalidFanError",
    "NotContractibleError", "NotProjectiveError", "PrimitiveRelation", "ToricError", "Wall",
    "parse_fan", "serialize_fan", "validate",
]
