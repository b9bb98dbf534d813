"""
Módulo numerics: tensores float64 com diferenciação reversa por fita.
"""

from src.numerics.gradcheck import finite_diff_check
from src.numerics.ops import (
    add,
    as_tensor,
    clamp,
    concat,
    detach,
    einsum,
    exp,
    expm1,
    l2_normalize,
    log_softmax,
    logsumexp,
    matmul,
    mean,
    mul,
    neg,
    relu,
    reshape,
    scale,
    sub,
    take_along,
    temporal_conv,
)
from src.numerics.ops import sum as reduce_sum
from src.numerics.tensor import Tape, TapeNode, Tensor, active_tape, backward, no_grad

__all__ = [
    "Tensor",
    "Tape",
    "TapeNode",
    "active_tape",
    "backward",
    "no_grad",
    "finite_diff_check",
    "add",
    "as_tensor",
    "clamp",
    "concat",
    "detach",
    "einsum",
    "exp",
    "expm1",
    "l2_normalize",
    "log_softmax",
    "logsumexp",
    "matmul",
    "mean",
    "mul",
    "neg",
    "reduce_sum",
    "relu",
    "reshape",
    "scale",
    "sub",
    "take_along",
    "temporal_conv",
]
