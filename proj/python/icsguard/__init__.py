"""Minimum-cost disruption analysis for AND/OR dependency models."""

from ._core import (
    InvalidModel,
    Model,
    ParseError,
    RatingOutOfRange,
    TargetIndestructible,
    TooLarge,
    analyze,
    brute_force,
    export_dot,
    export_wcnf,
    generate,
    load_model,
    measure_cost_from_ratings,
    parse_model,
    validate,
    write_model,
)

__all__ = [
    "InvalidModel",
    "Model",
    "ParseError",
    "RatingOutOfRange",
    "TargetIndestructible",
    "TooLarge",
    "analyze",
    "brute_force",
    "export_dot",
    "export_wcnf",
    "generate",
    "load_model",
    "measure_cost_from_ratings",
    "parse_model",
    "validate",
    "write_model",
]
