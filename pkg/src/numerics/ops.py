"""
Operações diferenciáveis sobre Tensor.

Cada operação calcula a saída em numpy, valida finitude e, se houver fita
ativa e alguma entrada exigir gradiente, grava a regra de backward.
"""

from collections.abc import Sequence
from typing import Any, Optional, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.core.exceptions import (
    ContractError,
    DegenerateInputError,
    DimensionError,
    NonFiniteError,
)
from src.numerics.tensor import BackwardFn, Tensor, active_tape

Axis = Optional[Union[int, tuple[int, ...]]]


def as_tensor(value: Any) -> Tensor:
    """Converte escalares/arrays em Tensor constante."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def _emit(
    op: str,
    inputs: tuple[Tensor, ...],
    out: np.ndarray,
    backward_fn: BackwardFn,
) -> Tensor:
    if not np.all(np.isfinite(out)):
        raise NonFiniteError(operation=op)
    tape = active_tape()
    tracked = tape is not None and any(t.requires_grad for t in inputs)
    result = Tensor(out, requires_grad=tracked, copy=False)
    if tracked:
        tape.record(op, inputs, result, backward_fn)
    return result


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _broadcast_shape(op: str, a: Tensor, b: Tensor) -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError as e:
        raise DimensionError(
            f"Formas incompatíveis em {op}", expected=a.shape, got=b.shape, cause=e
        ) from e


# =============================================================================
# ÁLGEBRA LINEAR
# =============================================================================

def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Produto matricial [m×k]·[k×n]."""
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError("matmul exige [m×k]·[k×n]", expected=a.shape, got=b.shape)
    ad, bd = a.data, b.data

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return g @ bd.T, ad.T @ g

    return _emit("matmul", (a, b), ad @ bd, backward)


def einsum(subscripts: str, a: Tensor, b: Tensor) -> Tensor:
    """
    Contração de dois operandos, ex.: "oc,bctn->botn".
    Nenhum índice pode se repetir dentro de um operando e todo índice de um
    operando precisa aparecer na saída ou no outro operando.
    """
    a, b = as_tensor(a), as_tensor(b)
    try:
        lhs, out_idx = subscripts.replace(" ", "").split("->")
        a_idx, b_idx = lhs.split(",")
    except ValueError as e:
        raise ContractError("einsum exige a forma 'ab,bc->ac'", cause=e) from e
    for idx, other in ((a_idx, b_idx), (b_idx, a_idx)):
        if len(set(idx)) != len(idx) or not set(idx) <= set(out_idx) | set(other):
            raise ContractError(
                "Índices de einsum não suportados", details={"subscripts": subscripts}
            )
    ad, bd = a.data, b.data
    try:
        out = np.einsum(subscripts, ad, bd, optimize=True)
    except ValueError as e:
        raise DimensionError("Formas incompatíveis em einsum", expected=a.shape, got=b.shape) from e

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ga = np.einsum(f"{out_idx},{b_idx}->{a_idx}", g, bd, optimize=True)
        gb = np.einsum(f"{out_idx},{a_idx}->{b_idx}", g, ad, optimize=True)
        return ga, gb

    return _emit("einsum", (a, b), out, backward)


def temporal_conv(x: Tensor, weight: Tensor, stride: int = 1) -> Tensor:
    """
    Convolução ao longo do tempo com padding "same" de zeros.

    x: [B, C, T, N]; weight: [O, C, K] com K ímpar. Saída [B, O, T', N] com
    T' = ceil(T / stride).
    """
    x, weight = as_tensor(x), as_tensor(weight)
    if x.ndim != 4 or weight.ndim != 3 or weight.shape[1] != x.shape[1]:
        raise DimensionError(
            "temporal_conv exige x[B,C,T,N] e w[O,C,K]", expected=x.shape, got=weight.shape
        )
    kernel = weight.shape[2]
    if kernel % 2 == 0 or stride < 1:
        raise ContractError(
            "Kernel temporal deve ser ímpar e stride ≥ 1",
            details={"kernel": kernel, "stride": stride},
        )

    pad = (kernel - 1) // 2
    frames = x.shape[2]
    xd, wd = x.data, weight.data
    padded = np.pad(xd, ((0, 0), (0, 0), (pad, pad), (0, 0)))
    windows = sliding_window_view(padded, kernel, axis=2)[:, :, ::stride]
    out_frames = windows.shape[2]
    out = np.tensordot(windows, wd, axes=([1, 4], [1, 2])).transpose(0, 3, 1, 2)

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        gw = np.tensordot(g, windows, axes=([0, 2, 3], [0, 2, 3]))
        gwin = np.tensordot(g, wd, axes=([1], [0])).transpose(0, 3, 1, 2, 4)
        gpad = np.zeros_like(padded)
        for k in range(kernel):
            gpad[:, :, k : k + stride * out_frames : stride, :] += gwin[..., k]
        return gpad[:, :, pad : pad + frames, :], gw

    return _emit("temporal_conv", (x, weight), np.ascontiguousarray(out), backward)


# =============================================================================
# ELEMENTO A ELEMENTO
# =============================================================================

def add(a: Any, b: Any) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("add", a, b)
    sa, sb = a.shape, b.shape

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _unbroadcast(g, sa), _unbroadcast(g, sb)

    return _emit("add", (a, b), a.data + b.data, backward)


def sub(a: Any, b: Any) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("sub", a, b)
    sa, sb = a.shape, b.shape

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _unbroadcast(g, sa), -_unbroadcast(g, sb)

    return _emit("sub", (a, b), a.data - b.data, backward)


def mul(a: Any, b: Any) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("mul", a, b)
    ad, bd = a.data, b.data

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _unbroadcast(g * bd, ad.shape), _unbroadcast(g * ad, bd.shape)

    return _emit("mul", (a, b), ad * bd, backward)


def scale(a: Tensor, factor: float) -> Tensor:
    """Multiplicação por constante."""
    a = as_tensor(a)
    c = float(factor)

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g * c,)

    return _emit("scale", (a,), a.data * c, backward)


def neg(a: Tensor) -> Tensor:
    return scale(a, -1.0)


def exp(a: Tensor) -> Tensor:
    a = as_tensor(a)
    with np.errstate(over="ignore"):
        out = np.exp(a.data)

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g * out,)

    return _emit("exp", (a,), out, backward)


def expm1(a: Tensor) -> Tensor:
    """exp(x) − 1 preciso perto de zero."""
    a = as_tensor(a)
    with np.errstate(over="ignore"):
        out = np.expm1(a.data)

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g * (out + 1.0),)

    return _emit("expm1", (a,), out, backward)


def relu(a: Tensor) -> Tensor:
    """max(0, x); subgradiente 0 em x == 0."""
    a = as_tensor(a)
    mask = a.data > 0

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g * mask,)

    return _emit("relu", (a,), np.where(mask, a.data, 0.0), backward)


def clamp(a: Tensor, low: float, high: float) -> Tensor:
    """Recorte em [low, high]; gradiente nulo fora do intervalo."""
    a = as_tensor(a)
    inside = (a.data >= low) & (a.data <= high)

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g * inside,)

    return _emit("clamp", (a,), np.clip(a.data, low, high), backward)


# =============================================================================
# REDUÇÕES E FORMA
# =============================================================================

def _normalize_axes(axis: Axis, ndim: int) -> tuple[int, ...]:
    if axis is None:
        return tuple(range(ndim))
    axes = (axis,) if isinstance(axis, int) else axis
    return tuple(sorted(ax % ndim for ax in axes))


def sum(a: Tensor, axis: Axis = None, keepdims: bool = False) -> Tensor:  # noqa: A001
    a = as_tensor(a)
    axes = _normalize_axes(axis, a.ndim)
    shape = a.shape

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        expanded = g if keepdims else np.expand_dims(g, axes)
        return (np.broadcast_to(expanded, shape).copy(),)

    return _emit("sum", (a,), np.sum(a.data, axis=axes, keepdims=keepdims), backward)


def mean(a: Tensor, axis: Axis = None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)
    axes = _normalize_axes(axis, a.ndim)
    count = int(np.prod([a.shape[ax] for ax in axes])) if axes else 1
    return scale(sum(a, axis=axes, keepdims=keepdims), 1.0 / count)


def reshape(a: Tensor, shape: Sequence[int]) -> Tensor:
    a = as_tensor(a)
    original = a.shape
    try:
        out = a.data.reshape(tuple(shape))
    except ValueError as e:
        raise DimensionError("reshape incompatível", expected=original, got=tuple(shape)) from e

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g.reshape(original),)

    return _emit("reshape", (a,), out, backward)


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    parts = tuple(as_tensor(t) for t in tensors)
    try:
        out = np.concatenate([p.data for p in parts], axis=axis)
    except ValueError as e:
        raise DimensionError("concat com formas incompatíveis", got=[p.shape for p in parts]) from e
    bounds = np.cumsum([p.shape[axis] for p in parts])[:-1]

    def backward(g: np.ndarray) -> list[np.ndarray]:
        return np.split(g, bounds, axis=axis)

    return _emit("concat", parts, out, backward)


def take_along(a: Tensor, indices: Sequence[int]) -> Tensor:
    """out[b] = a[b, indices[b]] para a: [B, K]."""
    a = as_tensor(a)
    idx = np.asarray(indices, dtype=np.int64)
    if a.ndim != 2 or idx.shape != (a.shape[0],):
        raise DimensionError(
            "take_along exige a[B,K] e índices [B]", expected=(a.shape[0],), got=idx.shape
        )
    if np.any(idx < 0) or np.any(idx >= a.shape[1]):
        raise ContractError("Índice fora do intervalo", details={"columns": a.shape[1]})
    rows = np.arange(a.shape[0])
    shape = a.shape

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        grad = np.zeros(shape)
        grad[rows, idx] = g
        return (grad,)

    return _emit("take_along", (a,), a.data[rows, idx], backward)


def detach(a: Tensor) -> Tensor:
    """Stop-gradient."""
    return as_tensor(a).detach()


# =============================================================================
# NORMALIZAÇÃO E SOFTMAX
# =============================================================================

def l2_normalize(v: Tensor, axis: int = -1) -> Tensor:
    """v / ‖v‖₂ ao longo de `axis`."""
    v = as_tensor(v)
    norm = np.sqrt(np.sum(v.data * v.data, axis=axis, keepdims=True))
    if np.any(norm == 0.0):
        raise DegenerateInputError("Não é possível normalizar vetor nulo")
    out = v.data / norm

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return ((g - out * np.sum(g * out, axis=axis, keepdims=True)) / norm,)

    return _emit("l2_normalize", (v,), out, backward)


def logsumexp(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """logsumexp com subtração do máximo (numpy puro, sem fita)."""
    peak = np.max(values, axis=axis, keepdims=True)
    return peak + np.log(np.sum(np.exp(values - peak), axis=axis, keepdims=True))


def log_softmax(v: Tensor, axis: int = -1) -> Tensor:
    """vᵢ − logsumexp(v), estável por subtração do máximo."""
    v = as_tensor(v)
    out = v.data - logsumexp(v.data, axis=axis)

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g - np.exp(out) * np.sum(g, axis=axis, keepdims=True),)

    return _emit("log_softmax", (v,), out, backward)
