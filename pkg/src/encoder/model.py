"""
Encoder completo: backbone ST-GCN mais cabeça gaussiana (ou projeção).
"""

from typing import Optional, Union

import numpy as np

from src.core.models import STGCNConfig
from src.core.types import StreamPurpose
from src.data.rng import stream
from src.encoder.graph import GraphAdjacency
from src.encoder.head import GaussianHead, head_forward, init_head_params
from src.encoder.params import ParamSet
from src.encoder.stgcn import init_stgcn_params, stgcn_forward
from src.numerics import Tensor, no_grad


class SkeletonEncoder:
    """
    Parâmetros nomeados `blocks.*` e `head.*` com a arquitetura que os lê.

    Os tensores pertencem a `params`; otimizador e atualização por
    momentum alteram `params` diretamente.
    """

    def __init__(
        self,
        config: STGCNConfig,
        adjacency: GraphAdjacency,
        params: ParamSet,
        variational: bool = True,
    ):
        self.config = config
        self.adjacency = adjacency
        self.params = params
        self.variational = variational

    @classmethod
    def initialize(
        cls,
        config: STGCNConfig,
        adjacency: GraphAdjacency,
        seed: int,
        variational: bool = True,
    ) -> "SkeletonEncoder":
        """Inicialização uniforme ±√(1/fan_in) a partir do fluxo INIT da seed."""
        rng = stream(seed, StreamPurpose.INIT, 0)
        params = init_stgcn_params(config, rng)
        params = params.merged(
            init_head_params(config.feature_dim, config.embed_dim, rng, variational)
        )
        return cls(config, adjacency, params, variational)

    @property
    def head(self) -> GaussianHead:
        return GaussianHead.from_params(self.params)

    @property
    def embed_dim(self) -> int:
        return self.config.embed_dim

    def clone(self, requires_grad: bool = False) -> "SkeletonEncoder":
        """Mesma arquitetura com cópia dos parâmetros."""
        return SkeletonEncoder(
            self.config, self.adjacency, self.params.clone(requires_grad), self.variational
        )

    def features(
        self, x: Union[Tensor, np.ndarray], capture: Optional[dict[str, Tensor]] = None
    ) -> Tensor:
        """Saída do backbone após o pooling."""
        x = x if isinstance(x, Tensor) else Tensor(x)
        return stgcn_forward(x, self.params, self.adjacency, self.config, capture)

    def embed(
        self,
        x: Union[Tensor, np.ndarray],
        capture: Optional[dict[str, Tensor]] = None,
    ) -> tuple[Tensor, Optional[Tensor]]:
        """(μ, log σ²); log σ² é None na variante determinística."""
        return head_forward(self.features(x, capture), self.head)

    def embed_mean(self, batch: np.ndarray, batch_size: int = 64) -> np.ndarray:
        """μ de um lote [B, C, T, N] fora da fita, em fatias."""
        rows = []
        with no_grad():
            for start in range(0, batch.shape[0], batch_size):
                mu, _ = self.embed(batch[start : start + batch_size])
                rows.append(mu.data)
        if not rows:
            return np.zeros((0, self.embed_dim))
        return np.concatenate(rows, axis=0)
