"""
Adjacência normalizada do grafo de juntas.
"""

from dataclasses import dataclass

import numpy as np

from src.core.exceptions import ContractError
from src.data.skeleton import SkeletonTopology


@dataclass(frozen=True)
class GraphAdjacency:
    """D^{−1/2}(A + I)D^{−1/2}: simétrica, entradas em [0, 1]."""

    matrix: np.ndarray

    @property
    def n_joints(self) -> int:
        return self.matrix.shape[0]


def build_adjacency(topology: SkeletonTopology) -> GraphAdjacency:
    """
    Adjacência simétrica normalizada com autoconexões.

    Raises:
        ContractError: Grafo desconexo
    """
    a_hat = topology.binary_adjacency() + np.eye(topology.n_joints)

    # Componente da raiz via fecho transitivo
    reached = np.zeros(topology.n_joints, dtype=bool)
    reached[topology.root] = True
    for _ in range(topology.n_joints):
        grown = (a_hat[reached].sum(axis=0) > 0) | reached
        if np.array_equal(grown, reached):
            break
        reached = grown
    if not reached.all():
        raise ContractError(
            "Topologia desconexa",
            details={"unreached": np.flatnonzero(~reached).tolist()},
        )

    inv_sqrt = 1.0 / np.sqrt(a_hat.sum(axis=1))
    matrix = a_hat * np.outer(inv_sqrt, inv_sqrt)
    matrix.setflags(write=False)
    return GraphAdjacency(matrix)
