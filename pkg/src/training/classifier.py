"""
Classificador linear sobre μ.
"""

from typing import Union

import numpy as np

from src.core.types import StreamPurpose
from src.data.rng import stream
from src.encoder.head import affine
from src.encoder.params import ParamSet
from src.encoder.stgcn import uniform_init
from src.numerics import Tensor

CLASSIFIER_PREFIX = "classifier"


class LinearClassifier:
    """Pesos `classifier.weight` [d, K] e `classifier.bias` [K]."""

    def __init__(self, params: ParamSet):
        self.params = params

    @classmethod
    def initialize(cls, embed_dim: int, n_classes: int, seed: int) -> "LinearClassifier":
        rng = stream(seed, StreamPurpose.INIT, 1)
        params = ParamSet()
        params.add(
            f"{CLASSIFIER_PREFIX}.weight",
            Tensor(uniform_init(rng, (embed_dim, n_classes), embed_dim), requires_grad=True),
        )
        params.add(f"{CLASSIFIER_PREFIX}.bias", Tensor(np.zeros(n_classes), requires_grad=True))
        return cls(params)

    @property
    def weight(self) -> Tensor:
        return self.params[f"{CLASSIFIER_PREFIX}.weight"]

    @property
    def bias(self) -> Tensor:
        return self.params[f"{CLASSIFIER_PREFIX}.bias"]

    @property
    def n_classes(self) -> int:
        return self.weight.shape[1]

    def logits(self, mu: Union[Tensor, np.ndarray]) -> Tensor:
        return affine(mu if isinstance(mu, Tensor) else Tensor(mu), self.weight, self.bias)
