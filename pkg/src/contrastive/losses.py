"""
Objetivo contrastivo variacional: InfoNCE sobre latentes normalizados e
regularizador KL para a prior normal padrão.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from src.core.constants import UNIT_NORM_TOLERANCE
from src.core.exceptions import ContractError, DegenerateInputError, DimensionError
from src.numerics import (
    Tensor,
    add,
    concat,
    detach,
    expm1,
    l2_normalize,
    log_softmax,
    matmul,
    mean,
    mul,
    neg,
    reduce_sum,
    reshape,
    scale,
    sub,
    take_along,
)


def _rows(t: Tensor) -> Tensor:
    return reshape(t, (1, t.shape[0])) if t.ndim == 1 else t


def _negative_matrix(negatives: Union[Tensor, np.ndarray], dim: int) -> np.ndarray:
    """Negativos constantes [J, d] normalizados (stop-gradient)."""
    if isinstance(negatives, Tensor):
        array = negatives.data
    else:
        array = np.asarray(negatives, dtype=np.float64)
    array = array.reshape(-1, dim) if array.size else np.zeros((0, dim))
    if array.shape[1] != dim:
        raise DimensionError("Negativos com dimensão diferente de z", expected=dim, got=array.shape)
    if array.shape[0] == 0:
        return array
    norms = np.linalg.norm(array, axis=1, keepdims=True)
    if np.any(norms == 0.0):
        raise DegenerateInputError("Negativo nulo não pode ser normalizado")
    if np.all(np.abs(norms - 1.0) <= UNIT_NORM_TOLERANCE):
        return array
    return array / norms


def infonce_loss(
    z_q: Tensor,
    z_k: Tensor,
    negatives: Union[Tensor, np.ndarray],
    temperature: float,
) -> Tensor:
    """
    −log_softmax([z_q·z_k, z_q·n₁, …, z_q·n_J] / τ)[0], média sobre o lote.

    Aceita vetores [d] ou lotes [B, d]; as linhas de z_q e z_k passam
    sempre por l2_normalize. Os negativos nunca recebem gradiente.

    Raises:
        ContractError: τ ≤ 0
        DimensionError: Formas incompatíveis
    """
    if temperature <= 0:
        raise ContractError("Temperatura deve ser positiva", details={"temperature": temperature})
    q, k = _rows(z_q), _rows(z_k)
    if q.shape != k.shape:
        raise DimensionError("z_q e z_k devem ter a mesma forma", expected=q.shape, got=k.shape)
    q, k = l2_normalize(q, axis=-1), l2_normalize(k, axis=-1)
    negs = _negative_matrix(negatives, q.shape[1])

    positive = reduce_sum(mul(q, k), axis=1, keepdims=True)
    negative = matmul(q, Tensor(negs.T))
    logits = scale(concat([positive, negative], axis=1), 1.0 / temperature)
    log_probs = log_softmax(logits, axis=1)
    picked = take_along(log_probs, np.zeros(q.shape[0], dtype=np.int64))
    return neg(mean(picked))


def kl_loss(mu: Tensor, logvar: Tensor) -> Tensor:
    """
    Σᵢ −½(1 + log σ²ᵢ − σ²ᵢ − μᵢ²): soma nas coordenadas, média no lote.

    Raises:
        DimensionError: μ e log σ² com formas diferentes
    """
    if mu.shape != logvar.shape:
        raise DimensionError(
            "μ e log σ² devem ter a mesma forma", expected=mu.shape, got=logvar.shape
        )
    # log σ² − (σ² − 1) ≤ 0 exatamente com expm1
    inner = sub(sub(logvar, expm1(logvar)), mul(mu, mu))
    per_row = scale(reduce_sum(_rows(inner), axis=1), -0.5)
    return mean(per_row)


@dataclass(frozen=True)
class LossBreakdown:
    """Perda total e componentes (KL ausentes na variante determinística)."""

    total: Tensor
    infonce: float
    kl_q: Optional[float] = None
    kl_k: Optional[float] = None


def vcl_objective(
    z_q: Tensor,
    z_k: Tensor,
    negatives: Union[Tensor, np.ndarray],
    temperature: float,
    mu_q: Optional[Tensor] = None,
    logvar_q: Optional[Tensor] = None,
    mu_k: Optional[Tensor] = None,
    logvar_k: Optional[Tensor] = None,
) -> LossBreakdown:
    """
    InfoNCE + KL(query) + KL(key); o KL do ramo key entra com
    stop-gradient. Sem (μ, log σ²) apenas o InfoNCE é usado.
    """
    contrastive = infonce_loss(z_q, z_k, negatives, temperature)
    if mu_q is None or logvar_q is None or mu_k is None or logvar_k is None:
        return LossBreakdown(total=contrastive, infonce=contrastive.item())

    kl_q = kl_loss(mu_q, logvar_q)
    kl_k = kl_loss(detach(mu_k), detach(logvar_k))
    total = add(add(contrastive, kl_q), kl_k)
    return LossBreakdown(
        total=total, infonce=contrastive.item(), kl_q=kl_q.item(), kl_k=kl_k.item()
    )


def total_loss(
    z_q: Tensor,
    z_k: Tensor,
    negatives: Union[Tensor, np.ndarray],
    temperature: float,
    mu_q: Tensor,
    logvar_q: Tensor,
    mu_k: Tensor,
    logvar_k: Tensor,
) -> Tensor:
    """Perda total do pretexto (escalar)."""
    return vcl_objective(z_q, z_k, negatives, temperature, mu_q, logvar_q, mu_k, logvar_k).total
