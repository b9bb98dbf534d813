"""
Tensor denso e fita de diferenciação reversa.

Um Tensor guarda um array float64 e, opcionalmente, o gradiente acumulado.
As operações executadas com uma Tape ativa (context manager) são gravadas
em ordem topológica; `backward` percorre a fita ao contrário uma única vez.
Fora de uma fita as operações não são gravadas (modo inferência).
"""

import threading
from collections.abc import Callable, Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from src.core.exceptions import ContractError, NonFiniteError

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class Tensor:
    """
    Array n-dimensional de float64 participante da fita.

    Imutável após a criação, exceto durante o backward (campo `grad`) e
    pela troca explícita de `data` feita pelo otimizador.
    """

    __slots__ = ("data", "requires_grad", "grad", "name")

    def __init__(
        self,
        data: Any,
        requires_grad: bool = False,
        name: Optional[str] = None,
        *,
        copy: bool = True,
    ):
        array = np.array(data, dtype=np.float64) if copy else np.asarray(data, dtype=np.float64)
        if not np.all(np.isfinite(array)):
            raise NonFiniteError("Tensor com valores não finitos", operation=name or "tensor")
        self.data: np.ndarray = array
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        """Valor de um tensor escalar."""
        if self.data.size != 1:
            raise ContractError("item() exige tensor escalar", details={"shape": self.shape})
        return float(self.data.reshape(()))

    def numpy(self) -> np.ndarray:
        """Cópia dos dados."""
        return self.data.copy()

    def zero_grad(self) -> None:
        self.grad = None

    def detach(self) -> "Tensor":
        """Mesmos dados, sem participação na fita."""
        return Tensor(self.data, requires_grad=False, name=self.name, copy=False)

    def __repr__(self) -> str:
        label = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}{label})"

    # Operadores delegam para src.numerics.ops

    def __add__(self, other: Any) -> "Tensor":
        from src.numerics import ops
        return ops.add(self, other)

    def __radd__(self, other: Any) -> "Tensor":
        from src.numerics import ops
        return ops.add(other, self)

    def __sub__(self, other: Any) -> "Tensor":
        from src.numerics import ops
        return ops.sub(self, other)

    def __rsub__(self, other: Any) -> "Tensor":
        from src.numerics import ops
        return ops.sub(other, self)

    def __mul__(self, other: Any) -> "Tensor":
        from src.numerics import ops
        return ops.mul(self, other)

    def __rmul__(self, other: Any) -> "Tensor":
        from src.numerics import ops
        return ops.mul(other, self)

    def __truediv__(self, other: float) -> "Tensor":
        from src.numerics import ops
        return ops.scale(self, 1.0 / float(other))

    def __neg__(self) -> "Tensor":
        from src.numerics import ops
        return ops.neg(self)

    def __matmul__(self, other: "Tensor") -> "Tensor":
        from src.numerics import ops
        return ops.matmul(self, other)


@dataclass(frozen=True)
class TapeNode:
    """Operação gravada: entradas, saída e regra de backward."""

    op: str
    inputs: tuple[Tensor, ...]
    output: Tensor
    backward: BackwardFn


class Tape:
    """
    Lista ordenada de operações gravadas.
    Confinada à thread que a criou.
    """

    def __init__(self) -> None:
        self.nodes: list[TapeNode] = []
        self._output_ids: set[int] = set()

    def __enter__(self) -> "Tape":
        _tape_stack().append(self)
        return self

    def __exit__(self, *exc_info: Any) -> None:
        _tape_stack().pop()

    def __len__(self) -> int:
        return len(self.nodes)

    def record(
        self,
        op: str,
        inputs: tuple[Tensor, ...],
        output: Tensor,
        backward_fn: BackwardFn,
    ) -> None:
        self.nodes.append(TapeNode(op, inputs, output, backward_fn))
        self._output_ids.add(id(output))

    def produced(self, tensor: Tensor) -> bool:
        """Indica se o tensor é saída de alguma operação desta fita."""
        return id(tensor) in self._output_ids

    def backward(self, loss: Tensor) -> None:
        backward(self, loss)


_local = threading.local()


def _tape_stack() -> list[Optional[Tape]]:
    if not hasattr(_local, "stack"):
        _local.stack = []
    return _local.stack


def active_tape() -> Optional[Tape]:
    """Fita ativa na thread corrente, ou None."""
    stack = _tape_stack()
    return stack[-1] if stack else None


@contextmanager
def no_grad() -> Iterator[None]:
    """Suspende a gravação mesmo dentro de uma fita ativa."""
    stack = _tape_stack()
    stack.append(None)
    try:
        yield
    finally:
        stack.pop()


def backward(tape: Tape, loss: Tensor) -> None:
    """
    Propaga gradientes a partir de uma perda escalar.

    Todo tensor com requires_grad alcançável a partir da perda recebe `grad`.
    Gradientes de folhas (parâmetros, entradas) são somados ao `grad`
    existente; intermediários recebem o gradiente desta passagem.
    """
    if loss.data.size != 1:
        raise ContractError("Perda deve ser escalar", details={"shape": loss.shape})
    if not tape.produced(loss):
        raise ContractError("Perda não foi produzida nesta fita")

    pending: dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
    leaves: dict[int, Tensor] = {}

    for node in reversed(tape.nodes):
        grad = pending.pop(id(node.output), None)
        if grad is None:
            continue
        node.output.grad = grad
        input_grads = node.backward(grad)
        for tensor, input_grad in zip(node.inputs, input_grads):
            if input_grad is None or not tensor.requires_grad:
                continue
            key = id(tensor)
            if key in pending:
                pending[key] = pending[key] + input_grad
            else:
                pending[key] = np.array(input_grad, dtype=np.float64)
            if not tape.produced(tensor):
                leaves[key] = tensor

    for key, tensor in leaves.items():
        grad = pending[key]
        tensor.grad = grad if tensor.grad is None else tensor.grad + grad
