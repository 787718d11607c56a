from src.jacobian.generalized import (
    IndexClassification,
    JacobianBlocks,
    apply_D_sparse,
    apply_W,
    assemble_D_dense,
    assemble_G,
    classify_indices,
    smallest_singular_value,
)

__all__ = [
    "IndexClassification",
    "JacobianBlocks",
    "apply_D_sparse",
    "apply_W",
    "assemble_D_dense",
    "assemble_G",
    "classify_indices",
    "smallest_singular_value",
]
