"""
Subamostragem rotulada e partição entre treino e teste.
"""

import math
from dataclasses import dataclass

import numpy as np

from src.core.constants import TEST_SUBJECT_MODULUS
from src.core.exceptions import ContractError, InsufficientLabelsError
from src.data.skeleton import Dataset


@dataclass(frozen=True)
class DataSplit:
    """Par treino/teste derivado do mesmo dataset."""

    train: Dataset
    test: Dataset


def balanced_target(fraction: float, count: int) -> int:
    """round(fraction × count), com meio arredondado para cima."""
    return int(math.floor(fraction * count + 0.5))


def category_balanced_subset(
    dataset: Dataset, fraction: float, rng: np.random.Generator
) -> Dataset:
    """
    Sorteia round(fraction × n_c) amostras sem reposição de cada classe.

    Raises:
        ContractError: fraction fora de (0, 1]
        InsufficientLabelsError: Alguma classe ficaria vazia
    """
    if not 0.0 < fraction <= 1.0:
        raise ContractError("Fração deve estar em (0, 1]", details={"fraction": fraction})

    labels = dataset.labels
    chosen: list[int] = []
    for class_index in range(dataset.n_classes):
        members = np.flatnonzero(labels == class_index)
        target = balanced_target(fraction, members.size)
        if target == 0:
            raise InsufficientLabelsError(
                f"Classe {class_index} sem amostras após arredondamento",
                class_index=class_index,
                details={"fraction": fraction, "available": int(members.size)},
            )
        chosen.extend(int(i) for i in rng.choice(members, size=target, replace=False))
    return dataset.subset(chosen)


def split_by_subject(dataset: Dataset, modulus: int = TEST_SUBJECT_MODULUS) -> DataSplit:
    """
    Partição entre sujeitos: id % modulus == modulus − 1 vai para o teste.

    Raises:
        ContractError: Alguma das partições ficaria vazia
    """
    if modulus < 2:
        raise ContractError("Módulo de sujeitos deve ser ≥ 2", details={"modulus": modulus})
    is_test = dataset.subjects % modulus == modulus - 1
    train_idx = np.flatnonzero(~is_test)
    test_idx = np.flatnonzero(is_test)
    if train_idx.size == 0 or test_idx.size == 0:
        raise ContractError(
            "Partição por sujeito deixou treino ou teste vazio",
            details={"train": int(train_idx.size), "test": int(test_idx.size), "modulus": modulus},
        )
    return DataSplit(dataset.subset(train_idx.tolist()), dataset.subset(test_idx.tolist()))
