from src.projection.operators import (
    SupportEnumeration,
    SupportSet,
    box_derivative,
    box_derivative_array,
    enumerate_supports,
    project_box,
    project_sparse,
    select_support,
    support_scores,
)

__all__ = [
    "SupportEnumeration",
    "SupportSet",
    "box_derivative",
    "box_derivative_array",
    "enumerate_supports",
    "project_box",
    "project_sparse",
    "select_support",
    "support_scores",
]
