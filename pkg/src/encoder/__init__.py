"""
Módulo encoder: adjacência, ST-GCN e cabeça gaussiana.
"""

from src.encoder.graph import GraphAdjacency, build_adjacency
from src.encoder.head import (
    GaussianHead,
    affine,
    gaussian_head_forward,
    head_forward,
    init_head_params,
    reparameterize,
)
from src.encoder.model import SkeletonEncoder
from src.encoder.params import ParamSet
from src.encoder.stgcn import init_stgcn_params, last_spatial_key, stgcn_forward

__all__ = [
    "GaussianHead",
    "GraphAdjacency",
    "ParamSet",
    "SkeletonEncoder",
    "affine",
    "build_adjacency",
    "gaussian_head_forward",
    "head_forward",
    "init_head_params",
    "init_stgcn_params",
    "last_spatial_key",
    "reparameterize",
    "stgcn_forward",
]
