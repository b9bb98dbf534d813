"""
AdamW com decaimento de peso desacoplado e taxa por época.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from config.logging_config import LoggerMixin
from src.core.constants import ADAM_BETA1, ADAM_BETA2, ADAM_EPS
from src.core.exceptions import DimensionError, NonFiniteError
from src.core.models import Schedule
from src.numerics import Tensor


@dataclass
class AdamWState:
    """Momentos por parâmetro (pelo nome), contador de passos e hiperparâmetros."""

    lr: float
    weight_decay: float = 0.0
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    eps: float = ADAM_EPS
    step: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)

    def state_arrays(self) -> dict[str, np.ndarray]:
        """Estado serializável: `step`, `m.<nome>` e `v.<nome>`."""
        arrays: dict[str, np.ndarray] = {"step": np.array([float(self.step)])}
        arrays.update({f"m.{name}": value.copy() for name, value in self.m.items()})
        arrays.update({f"v.{name}": value.copy() for name, value in self.v.items()})
        return arrays

    @classmethod
    def from_state(
        cls, arrays: Mapping[str, np.ndarray], lr: float, weight_decay: float
    ) -> "AdamWState":
        state = cls(lr=lr, weight_decay=weight_decay, step=int(arrays["step"].reshape(-1)[0]))
        for name, value in arrays.items():
            if name.startswith("m."):
                state.m[name[2:]] = value.copy()
            elif name.startswith("v."):
                state.v[name[2:]] = value.copy()
        return state


def adamw_step(
    params: Mapping[str, Tensor],
    grads: Mapping[str, Optional[np.ndarray]],
    state: AdamWState,
) -> None:
    """
    Um passo AdamW: param ← param·(1 − lr·λ) − lr·m̂/(√v̂ + eps).

    Gradiente ausente conta como zero. Toda a validação acontece antes de
    qualquer mutação: um passo abortado deixa parâmetros e estado intactos.

    Raises:
        DimensionError: Gradiente com forma diferente do parâmetro
        NonFiniteError: Gradiente com NaN/Inf
    """
    resolved: dict[str, np.ndarray] = {}
    for name, param in params.items():
        grad = grads.get(name)
        grad = np.zeros(param.shape) if grad is None else np.asarray(grad, dtype=np.float64)
        if grad.shape != param.shape:
            raise DimensionError(
                f"Gradiente de {name} com forma errada", expected=param.shape, got=grad.shape
            )
        if not np.all(np.isfinite(grad)):
            raise NonFiniteError(
                f"Gradiente não finito em {name}",
                operation="adamw_step",
                details={"param": name, "step": state.step},
            )
        resolved[name] = grad

    state.step += 1
    t = state.step
    correction1 = 1.0 - state.beta1**t
    correction2 = 1.0 - state.beta2**t
    shrink = 1.0 - state.lr * state.weight_decay

    for name, param in params.items():
        grad = resolved[name]
        zeros = np.zeros(param.shape)
        m = state.beta1 * state.m.get(name, zeros) + (1.0 - state.beta1) * grad
        v = state.beta2 * state.v.get(name, zeros) + (1.0 - state.beta2) * grad * grad
        state.m[name] = m
        state.v[name] = v
        update = (m / correction1) / (np.sqrt(v / correction2) + state.eps)
        param.data = param.data * shrink - state.lr * update


class AdamW(LoggerMixin):
    """
    Otimizador sobre um conjunto fixo de parâmetros.

    A taxa vem do Schedule e é atualizada no início de cada época.
    """

    def __init__(
        self,
        params: Mapping[str, Tensor],
        schedule: Schedule,
        weight_decay: float = 0.0,
        state: Optional[AdamWState] = None,
    ):
        self.params = params
        self.schedule = schedule
        self.state = state or AdamWState(lr=schedule.base_lr, weight_decay=weight_decay)

    def set_epoch(self, epoch: int) -> float:
        self.state.lr = self.schedule.lr_at(epoch)
        return self.state.lr

    def step(self) -> None:
        """Aplica os `.grad` acumulados e zera os gradientes."""
        adamw_step(self.params, {name: p.grad for name, p in self.params.items()}, self.state)
        self.zero_grad()

    def zero_grad(self) -> None:
        for param in self.params.values():
            param.zero_grad()
