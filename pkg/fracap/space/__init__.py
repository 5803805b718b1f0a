"""Exponents, grids and grid functions."""

from .exponents import ExponentBounds, ExponentField, eval_p, eval_q, exponent_bounds
from .expression import Expression, parse_expression
from .functions import (
    GridFunction,
    absolute_value,
    negative_part,
    pointwise_max,
    pointwise_min,
    pointwise_product,
    positive_part,
    scale_and_combine,
    shifted_positive_part,
    truncate,
)
from .grid import (
    DomainSpec,
    Grid,
    SetMask,
    boundary_mask,
    build_grid,
    measure,
    open_neighborhood,
    remove_cells,
    transfer_mask,
)
from .regularity import check_bb_condition, check_log_holder

__all__ = [
    # Exponents
    "ExponentBounds",
    "ExponentField",
    "Expression",
    "eval_p",
    "eval_q",
    "exponent_bounds",
    "parse_expression",
    "check_bb_condition",
    "check_log_holder",
    # Grids and masks
    "DomainSpec",
    "Grid",
    "SetMask",
    "boundary_mask",
    "build_grid",
    "measure",
    "open_neighborhood",
    "remove_cells",
    "transfer_mask",
    # Grid functions
    "GridFunction",
    "absolute_value",
    "negative_part",
    "pointwise_max",
    "pointwise_min",
    "pointwise_product",
    "positive_part",
    "scale_and_combine",
    "shifted_positive_part",
    "truncate",
]
