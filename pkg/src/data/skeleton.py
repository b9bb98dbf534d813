"""
Tipos de domínio dos dados de esqueleto: sequência, topologia e dataset.
"""

from collections import deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from src.core.constants import CHANNELS
from src.core.exceptions import ContractError, DataFormatError, DimensionError


@dataclass(frozen=True)
class SkeletonSequence:
    """
    Sequência de coordenadas [C, T, N] com rótulo e sujeito.

    O array é copiado e marcado como somente leitura na criação.
    """

    coords: np.ndarray
    label: int = 0
    subject_id: int = 0

    def __post_init__(self) -> None:
        array = np.array(self.coords, dtype=np.float64)
        if array.ndim != 3 or array.shape[0] != CHANNELS:
            raise DimensionError(
                "Sequência deve ter forma [3, T, N]",
                expected=f"({CHANNELS}, T, N)",
                got=array.shape,
            )
        if array.shape[1] < 2 or array.shape[2] < 2:
            raise ContractError("Sequência exige T ≥ 2 e N ≥ 2", details={"shape": array.shape})
        if not np.all(np.isfinite(array)):
            raise ContractError("Coordenadas não finitas")
        if self.label < 0 or self.subject_id < 0:
            raise ContractError("Rótulo e sujeito devem ser não negativos")
        array.setflags(write=False)
        object.__setattr__(self, "coords", array)

    @property
    def frames(self) -> int:
        return self.coords.shape[1]

    @property
    def joints(self) -> int:
        return self.coords.shape[2]

    def with_coords(self, coords: np.ndarray) -> "SkeletonSequence":
        """Nova sequência com o mesmo rótulo e sujeito."""
        return SkeletonSequence(coords, label=self.label, subject_id=self.subject_id)


@dataclass(frozen=True)
class SkeletonTopology:
    """
    Árvore de juntas: arestas (pai, filho) conectando todas as N juntas.

    Raises:
        ContractError: Arestas não formam uma árvore enraizada em `root`
    """

    n_joints: int
    edges: tuple[tuple[int, int], ...]
    root: int = 0

    def __post_init__(self) -> None:
        edges = tuple((int(p), int(c)) for p, c in self.edges)
        object.__setattr__(self, "edges", edges)
        n = self.n_joints

        if n < 1 or not 0 <= self.root < n:
            raise ContractError(
                "Topologia exige N ≥ 1 e raiz válida", details={"n_joints": n, "root": self.root}
            )
        if len(edges) != n - 1:
            raise ContractError(
                "Árvore com N juntas exige N − 1 arestas",
                details={"n_joints": n, "edges": len(edges)},
            )
        children = [c for _, c in edges]
        if len(set(children)) != len(children):
            raise ContractError("Cada filho deve aparecer em exatamente uma aresta")
        for p, c in edges:
            if not (0 <= p < n and 0 <= c < n) or p == c:
                raise ContractError("Aresta inválida", details={"edge": (p, c)})
        if self.root in children:
            raise ContractError("Raiz não pode ser filha", details={"root": self.root})

        # Com N − 1 arestas e filhos distintos, conexo implica acíclico
        reached = self._reachable()
        if len(reached) != n:
            raise ContractError(
                "Topologia desconexa",
                details={"unreached": sorted(set(range(n)) - reached)},
            )

    def _reachable(self) -> set[int]:
        adjacency = self.neighbors()
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            joint = queue.popleft()
            for nxt in adjacency[joint]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return seen

    def neighbors(self) -> list[list[int]]:
        """Lista de vizinhos não direcionada."""
        adjacency: list[list[int]] = [[] for _ in range(self.n_joints)]
        for p, c in self.edges:
            adjacency[p].append(c)
            adjacency[c].append(p)
        return adjacency

    @property
    def parents(self) -> dict[int, int]:
        """filho -> pai."""
        return {c: p for p, c in self.edges}

    def path_to_root(self, joint: int) -> list[int]:
        """Juntas de `joint` até a raiz, inclusive."""
        parents = self.parents
        path = [joint]
        while path[-1] != self.root:
            path.append(parents[path[-1]])
        return path

    def binary_adjacency(self) -> np.ndarray:
        """Matriz A simétrica 0/1 sem autoconexões."""
        a = np.zeros((self.n_joints, self.n_joints))
        for p, c in self.edges:
            a[p, c] = a[c, p] = 1.0
        return a

    def relabel(self, permutation: Sequence[int]) -> "SkeletonTopology":
        """Topologia com a junta j renomeada para permutation[j]."""
        perm = list(permutation)
        return SkeletonTopology(
            n_joints=self.n_joints,
            edges=tuple((perm[p], perm[c]) for p, c in self.edges),
            root=perm[self.root],
        )


def parse_topology(text: str, source: str = "<texto>") -> SkeletonTopology:
    """
    Lê o manifesto de topologia: cabeçalhos `joints N` e `root R`, depois
    uma aresta `pai filho` por linha; `#` inicia comentário.
    """
    n_joints: Optional[int] = None
    root = 0
    edges: list[tuple[int, int]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if fields[0] == "joints":
                n_joints = int(fields[1])
            elif fields[0] == "root":
                root = int(fields[1])
            elif len(fields) == 2:
                edges.append((int(fields[0]), int(fields[1])))
            else:
                raise ValueError(line)
        except (ValueError, IndexError) as e:
            raise DataFormatError(
                f"Linha {number} inválida no manifesto", path=source, cause=e
            ) from e
    if n_joints is None:
        n_joints = len(edges) + 1
    return SkeletonTopology(n_joints=n_joints, edges=tuple(edges), root=root)


def load_topology(name: str) -> SkeletonTopology:
    """
    Carrega um manifesto distribuído em config/topologies (default17, ntu25).

    Raises:
        ContractError: Topologia desconhecida
    """
    resource = resources.files("config") / "topologies" / f"{name}.txt"
    if not resource.is_file():
        raise ContractError(f"Topologia desconhecida: {name}", details={"name": name})
    return parse_topology(resource.read_text(encoding="utf-8"), source=name)


@dataclass
class Dataset:
    """
    Coleção rotulada de sequências com topologia comum.

    Todas as amostras compartilham (C, N); rótulos < número de classes.
    Tratado como somente leitura após a construção.
    """

    samples: list[SkeletonSequence]
    topology: SkeletonTopology
    class_names: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.samples = list(self.samples)
        self.class_names = list(self.class_names)
        for index, sample in enumerate(self.samples):
            if sample.joints != self.topology.n_joints:
                raise DimensionError(
                    f"Amostra {index} não casa com a topologia",
                    expected=self.topology.n_joints,
                    got=sample.joints,
                )
            if sample.label >= len(self.class_names):
                raise ContractError(
                    f"Amostra {index} com rótulo fora do intervalo",
                    details={"label": sample.label, "classes": len(self.class_names)},
                )

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[SkeletonSequence]:
        return iter(self.samples)

    def __getitem__(self, index: int) -> SkeletonSequence:
        return self.samples[index]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    @property
    def labels(self) -> np.ndarray:
        return np.array([s.label for s in self.samples], dtype=np.int64)

    @property
    def subjects(self) -> np.ndarray:
        return np.array([s.subject_id for s in self.samples], dtype=np.int64)

    def class_histogram(self) -> np.ndarray:
        """Contagem de amostras por classe."""
        return np.bincount(self.labels, minlength=self.n_classes)

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """Dataset com as amostras indicadas, na ordem dada."""
        return Dataset([self.samples[i] for i in indices], self.topology, self.class_names)

    def replace_samples(self, samples: Sequence[SkeletonSequence]) -> "Dataset":
        """Mesma topologia e classes, outras amostras."""
        return Dataset(list(samples), self.topology, self.class_names)

    def stack(self) -> np.ndarray:
        """Coordenadas empilhadas [B, C, T, N] (exige T uniforme)."""
        frames = {s.frames for s in self.samples}
        if len(frames) > 1:
            raise ContractError("Amostras com T diferentes", details={"frames": sorted(frames)})
        return np.stack([s.coords for s in self.samples])
