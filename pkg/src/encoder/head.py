"""
Cabeça gaussiana, projeção determinística e reparametrização.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from src.core.constants import LOGVAR_MAX, LOGVAR_MIN
from src.core.exceptions import ContractError, DimensionError
from src.encoder.params import ParamSet
from src.encoder.stgcn import uniform_init
from src.numerics import Tensor, add, clamp, exp, matmul, mul, reshape, scale


def affine(x: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    """x·W + b, com x [F] ou [B, F] e W [F, d]."""
    single = x.ndim == 1
    rows = reshape(x, (1, x.shape[0])) if single else x
    if rows.ndim != 2 or rows.shape[1] != weight.shape[0]:
        raise DimensionError(
            "Entrada incompatível com a projeção", expected=weight.shape[0], got=x.shape
        )
    out = add(matmul(rows, weight), bias)
    return reshape(out, (weight.shape[1],)) if single else out


@dataclass(frozen=True)
class GaussianHead:
    """
    Duas projeções afins feature_dim -> d (μ e log σ²).

    Sem `logvar_*` a cabeça vira a projeção direta da variante
    determinística (z = μ).
    """

    mu_weight: Tensor
    mu_bias: Tensor
    logvar_weight: Optional[Tensor] = None
    logvar_bias: Optional[Tensor] = None

    @property
    def variational(self) -> bool:
        return self.logvar_weight is not None

    @property
    def embed_dim(self) -> int:
        return self.mu_weight.shape[1]

    @classmethod
    def from_params(cls, params: ParamSet, prefix: str = "head") -> "GaussianHead":
        if f"{prefix}.logvar.weight" in params:
            return cls(
                params[f"{prefix}.mu.weight"],
                params[f"{prefix}.mu.bias"],
                params[f"{prefix}.logvar.weight"],
                params[f"{prefix}.logvar.bias"],
            )
        return cls(params[f"{prefix}.mu.weight"], params[f"{prefix}.mu.bias"])


def init_head_params(
    feature_dim: int,
    embed_dim: int,
    rng: np.random.Generator,
    variational: bool = True,
    prefix: str = "head",
) -> ParamSet:
    """Pesos [F, d] uniformes em ±√(1/F), vieses zerados."""
    params = ParamSet()
    branches = ("mu", "logvar") if variational else ("mu",)
    for branch in branches:
        params.add(
            f"{prefix}.{branch}.weight",
            Tensor(uniform_init(rng, (feature_dim, embed_dim), feature_dim), requires_grad=True),
        )
        params.add(f"{prefix}.{branch}.bias", Tensor(np.zeros(embed_dim), requires_grad=True))
    return params


def gaussian_head_forward(h: Tensor, head: GaussianHead) -> tuple[Tensor, Tensor]:
    """
    (μ, log σ²) com log σ² recortado em [−10, 10].

    Raises:
        ContractError: Cabeça sem ramo de variância
    """
    if not head.variational:
        raise ContractError("Cabeça determinística não produz log σ²")
    mu = affine(h, head.mu_weight, head.mu_bias)
    logvar = clamp(affine(h, head.logvar_weight, head.logvar_bias), LOGVAR_MIN, LOGVAR_MAX)
    return mu, logvar


def head_forward(h: Tensor, head: GaussianHead) -> tuple[Tensor, Optional[Tensor]]:
    """μ e, na variante variacional, log σ²."""
    if head.variational:
        return gaussian_head_forward(h, head)
    return affine(h, head.mu_weight, head.mu_bias), None


def reparameterize(mu: Tensor, logvar: Tensor, xi: Union[Tensor, np.ndarray]) -> Tensor:
    """
    z = μ + exp(log σ² / 2) ⊙ ξ; ξ entra como constante.

    Raises:
        DimensionError: Formas diferentes
    """
    noise = Tensor(xi.data if isinstance(xi, Tensor) else xi)
    if mu.shape != logvar.shape or mu.shape != noise.shape:
        raise DimensionError(
            "μ, log σ² e ξ devem ter a mesma forma", expected=mu.shape, got=noise.shape
        )
    return add(mu, mul(exp(scale(logvar, 0.5)), noise))
