"""
Verificação de gradientes por diferenças centrais.
"""

from collections.abc import Callable, Sequence
from typing import Union

import numpy as np

from src.core.exceptions import ContractError
from src.numerics.tensor import Tape, Tensor, backward, no_grad

Inputs = Union[Tensor, Sequence[Tensor]]


def _evaluate(f: Callable[[Inputs], Tensor], x: Inputs) -> float:
    with no_grad():
        return f(x).item()


def finite_diff_check(
    f: Callable[[Inputs], Tensor],
    x: Inputs,
    h: float = 1e-5,
) -> float:
    """
    Compara o gradiente analítico com diferenças centrais.

    Args:
        f: Função escalar; recebe `x` exatamente como passado
        x: Tensor ou sequência de tensores a perturbar
        h: Passo da diferença central

    Returns:
        max |analítico − numérico| / max(1, |analítico|) sobre todas as coordenadas
    """
    if h <= 0:
        raise ContractError("Passo h deve ser positivo", details={"h": h})

    tensors = [x] if isinstance(x, Tensor) else list(x)
    flags = [t.requires_grad for t in tensors]
    for t in tensors:
        t.requires_grad = True
        t.zero_grad()

    try:
        with Tape() as tape:
            loss = f(x)
        if tape.produced(loss):
            backward(tape, loss)
        analytic = [
            t.grad.copy() if t.grad is not None else np.zeros(t.shape)
            for t in tensors
        ]

        worst = 0.0
        for t, grad in zip(tensors, analytic):
            original = t.data
            for i in range(original.size):
                plus = original.copy()
                plus.flat[i] += h
                t.data = plus
                f_plus = _evaluate(f, x)

                minus = original.copy()
                minus.flat[i] -= h
                t.data = minus
                f_minus = _evaluate(f, x)

                t.data = original
                numeric = (f_plus - f_minus) / (2.0 * h)
                err = abs(grad.flat[i] - numeric) / max(1.0, abs(grad.flat[i]))
                worst = max(worst, err)
        return worst
    finally:
        for t, flag in zip(tensors, flags):
            t.requires_grad = flag
