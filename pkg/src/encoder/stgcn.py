"""
Encoder ST-GCN reduzido.

Cada bloco aplica convolução espacial de grafo (mistura de canais seguida
de mistura de juntas pela adjacência normalizada), convolução temporal
com padding "same" e stride, e ReLU. O pooling médio global sobre (T, N)
produz o vetor de features.
"""

from typing import Optional

import numpy as np

from src.core.exceptions import DimensionError
from src.core.models import STGCNConfig
from src.encoder.graph import GraphAdjacency
from src.encoder.params import ParamSet
from src.numerics import Tensor, einsum, mean, relu, reshape, temporal_conv

# Chave de captura da ativação espacial de um bloco
SPATIAL_CAPTURE = "blocks.{index}.spatial"


def uniform_init(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int) -> np.ndarray:
    """U[−√(1/fan_in), √(1/fan_in)]."""
    bound = np.sqrt(1.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape)


def init_stgcn_params(config: STGCNConfig, rng: np.random.Generator) -> ParamSet:
    """
    Pesos dos blocos (vieses zerados), na ordem de execução.

    Formas: spatial.weight [O, C_in], temporal.weight [O, O, K].
    """
    params = ParamSet()
    channels = config.in_channels
    for index, width in enumerate(config.widths):
        prefix = f"blocks.{index}"
        params.add(
            f"{prefix}.spatial.weight",
            Tensor(uniform_init(rng, (width, channels), channels), requires_grad=True),
        )
        params.add(f"{prefix}.spatial.bias", Tensor(np.zeros(width), requires_grad=True))
        fan_in = width * config.kernel
        params.add(
            f"{prefix}.temporal.weight",
            Tensor(uniform_init(rng, (width, width, config.kernel), fan_in), requires_grad=True),
        )
        params.add(f"{prefix}.temporal.bias", Tensor(np.zeros(width), requires_grad=True))
        channels = width
    return params


def stgcn_forward(
    x: Tensor,
    params: ParamSet,
    adjacency: GraphAdjacency,
    config: STGCNConfig,
    capture: Optional[dict[str, Tensor]] = None,
) -> Tensor:
    """
    Features do encoder.

    Args:
        x: [C, T, N] ou lote [B, C, T, N]
        params: Parâmetros dos blocos
        adjacency: Adjacência normalizada N×N
        config: Arquitetura
        capture: Se dado, recebe a saída espacial de cada bloco

    Returns:
        [feature_dim] ou [B, feature_dim]

    Raises:
        DimensionError: Forma de x incompatível com a configuração
    """
    single = x.ndim == 3
    if single:
        x = reshape(x, (1, *x.shape))
    if x.ndim != 4 or x.shape[1] != config.in_channels or x.shape[3] != adjacency.n_joints:
        raise DimensionError(
            "Entrada do encoder incompatível",
            expected=f"[B, {config.in_channels}, T, {adjacency.n_joints}]",
            got=x.shape,
        )

    adj = Tensor(adjacency.matrix, copy=False)
    h = x
    for index, (width, stride) in enumerate(zip(config.widths, config.strides)):
        prefix = f"blocks.{index}"
        h = einsum("oc,bctn->botn", params[f"{prefix}.spatial.weight"], h)
        h = einsum("botn,nm->botm", h, adj)
        h = h + reshape(params[f"{prefix}.spatial.bias"], (width, 1, 1))
        if capture is not None:
            capture[SPATIAL_CAPTURE.format(index=index)] = h
        h = temporal_conv(h, params[f"{prefix}.temporal.weight"], stride)
        h = relu(h + reshape(params[f"{prefix}.temporal.bias"], (width, 1, 1)))

    features = mean(h, axis=(2, 3))
    return reshape(features, (config.feature_dim,)) if single else features


def last_spatial_key(config: STGCNConfig) -> str:
    """Chave de captura do último bloco (alvo da saliência)."""
    return SPATIAL_CAPTURE.format(index=len(config.widths) - 1)
