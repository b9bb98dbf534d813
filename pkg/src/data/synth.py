"""
Gerador de dados sintéticos de esqueleto.

Cada classe é um molde procedural: um subconjunto de juntas oscila com
assinatura senoidal própria (amplitude, frequência, fase) em torno de uma
pose de repouso. Cada amostra aplica perturbações: escala corporal do
sujeito, velocidade, rotação global em torno do eixo vertical e ruído
gaussiano.
"""

from dataclasses import dataclass

import numpy as np

from config.logging_config import LoggerMixin
from src.core.constants import SALIENCY_TARGET_JOINTS, SYNTH_SUBJECTS
from src.core.exceptions import ContractError
from src.core.types import StreamPurpose
from src.data.rng import stream
from src.data.skeleton import Dataset, SkeletonSequence, SkeletonTopology

# Faixas das perturbações por amostra
MAX_ROTATION = np.pi / 8
SPEED_RANGE = (0.8, 1.2)
SUBJECT_SCALE_RANGE = (0.9, 1.1)

# Faixas dos moldes de classe
AMPLITUDE_RANGE = (0.15, 0.35)
FREQUENCY_RANGE = (0.5, 2.0)
ACTIVE_JOINTS_RANGE = (3, 5)
BONE_LENGTH = 0.25


@dataclass(frozen=True)
class ClassTemplate:
    """Assinatura de movimento de uma classe."""

    joints: tuple[int, ...]
    amplitudes: np.ndarray  # [len(joints), 3]
    frequency: float
    phases: np.ndarray  # [len(joints)]


@dataclass(frozen=True)
class Nuisance:
    """Perturbações de uma amostra (sem o ruído)."""

    rotation: float = 0.0
    speed: float = 1.0
    subject_scale: float = 1.0


def class_name(index: int) -> str:
    return f"action_{index:02d}"


class SyntheticSkeletonGenerator(LoggerMixin):
    """
    Gera datasets sintéticos determinísticos na seed.

    Args:
        topology: Topologia das juntas
        frames: Quadros por sequência
        jitter: Desvio-padrão do ruído gaussiano por coordenada
        seed: Semente do gerador
        nuisance: Se False, amostras não recebem rotação/velocidade/escala
    """

    def __init__(
        self,
        topology: SkeletonTopology,
        frames: int = 50,
        jitter: float = 0.02,
        seed: int = 0,
        nuisance: bool = True,
    ):
        if frames < 2:
            raise ContractError("Sequências sintéticas exigem T ≥ 2", details={"frames": frames})
        if topology.n_joints < 2:
            raise ContractError("Topologia sintética exige N ≥ 2")
        if jitter < 0:
            raise ContractError("Jitter deve ser ≥ 0", details={"jitter": jitter})
        self.topology = topology
        self.frames = frames
        self.jitter = jitter
        self.seed = seed
        self.nuisance = nuisance
        self.rest_pose = self._rest_pose()

    def _rest_pose(self) -> np.ndarray:
        """Pose [3, N]: cada filho a BONE_LENGTH do pai, raiz na origem."""
        rng = stream(self.seed, StreamPurpose.SYNTH, 0)
        pose = np.zeros((3, self.topology.n_joints))
        parents = self.topology.parents
        order = sorted(
            range(self.topology.n_joints), key=lambda j: len(self.topology.path_to_root(j))
        )
        for joint in order:
            if joint == self.topology.root:
                continue
            direction = rng.normal(size=3)
            direction /= np.linalg.norm(direction)
            pose[:, joint] = pose[:, parents[joint]] + BONE_LENGTH * direction
        return pose

    def template(self, class_index: int) -> ClassTemplate:
        """Molde da classe; a classe 0 anima apenas as juntas-alvo."""
        rng = stream(self.seed, StreamPurpose.SYNTH, 1, class_index)
        targets = tuple(j for j in SALIENCY_TARGET_JOINTS if j < self.topology.n_joints)
        if class_index == 0 and targets:
            joints = targets
        else:
            # As juntas-alvo ficam exclusivas da classe 0
            root = self.topology.root
            candidates = np.array(
                [j for j in range(self.topology.n_joints) if j != root and j not in targets]
            )
            if candidates.size == 0:
                candidates = np.array([j for j in range(self.topology.n_joints) if j != root])
            low, high = ACTIVE_JOINTS_RANGE
            count = min(int(rng.integers(low, high + 1)), candidates.size)
            joints = tuple(
                sorted(int(j) for j in rng.choice(candidates, size=count, replace=False))
            )

        directions = rng.normal(size=(len(joints), 3))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        magnitudes = rng.uniform(*AMPLITUDE_RANGE, size=(len(joints), 1))
        return ClassTemplate(
            joints=joints,
            amplitudes=directions * magnitudes,
            frequency=float(rng.uniform(*FREQUENCY_RANGE)),
            phases=rng.uniform(0.0, 2.0 * np.pi, size=len(joints)),
        )

    def subject_scale(self, subject_id: int) -> float:
        """Escala corporal fixa por sujeito."""
        low, high = SUBJECT_SCALE_RANGE
        return low + (high - low) * (subject_id % SYNTH_SUBJECTS) / (SYNTH_SUBJECTS - 1)

    def draw_nuisance(self, rng: np.random.Generator, subject_id: int) -> Nuisance:
        if not self.nuisance:
            return Nuisance()
        return Nuisance(
            rotation=float(rng.uniform(-MAX_ROTATION, MAX_ROTATION)),
            speed=float(rng.uniform(*SPEED_RANGE)),
            subject_scale=self.subject_scale(subject_id),
        )

    def render(self, template: ClassTemplate, nuisance: Nuisance) -> np.ndarray:
        """Coordenadas [3, T, N] sem ruído de um molde sob as perturbações."""
        t = np.arange(self.frames) / self.frames
        coords = np.repeat(self.rest_pose[:, None, :], self.frames, axis=1)
        angle = 2.0 * np.pi * template.frequency * nuisance.speed * t
        for k, joint in enumerate(template.joints):
            wave = np.sin(angle + template.phases[k])
            coords[:, :, joint] += template.amplitudes[k][:, None] * wave[None, :]

        c, s = np.cos(nuisance.rotation), np.sin(nuisance.rotation)
        rotation = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
        return np.einsum("ij,jtn->itn", rotation, nuisance.subject_scale * coords)

    def sample(
        self, class_index: int, sample_index: int, global_index: int
    ) -> tuple[SkeletonSequence, Nuisance]:
        """Amostra `sample_index` da classe, com as perturbações sorteadas."""
        rng = stream(self.seed, StreamPurpose.SYNTH, 2, global_index)
        subject_id = sample_index % SYNTH_SUBJECTS
        nuisance = self.draw_nuisance(rng, subject_id)
        coords = self.render(self.template(class_index), nuisance)
        if self.jitter > 0:
            coords = coords + rng.normal(0.0, self.jitter, size=coords.shape)
        return SkeletonSequence(coords, label=class_index, subject_id=subject_id), nuisance

    def generate(self, n_classes: int, per_class: int) -> Dataset:
        """
        Dataset com `per_class` amostras de cada classe, em ordem de classe.

        Raises:
            ContractError: n_classes < 2 ou per_class < 2
        """
        if n_classes < 2 or per_class < 2:
            raise ContractError(
                "Geração exige n_classes ≥ 2 e per_class ≥ 2",
                details={"n_classes": n_classes, "per_class": per_class},
            )
        samples = []
        for c in range(n_classes):
            for i in range(per_class):
                sequence, _ = self.sample(c, i, c * per_class + i)
                samples.append(sequence)

        self.logger.info(
            "Dataset sintético gerado",
            classes=n_classes,
            per_class=per_class,
            frames=self.frames,
            joints=self.topology.n_joints,
            seed=self.seed,
        )
        return Dataset(samples, self.topology, [class_name(c) for c in range(n_classes)])


def synth_generate(
    n_classes: int,
    per_class: int,
    topology: SkeletonTopology,
    frames: int,
    seed: int,
    jitter: float = 0.02,
    nuisance: bool = True,
) -> Dataset:
    """Atalho funcional para SyntheticSkeletonGenerator.generate."""
    generator = SyntheticSkeletonGenerator(
        topology, frames=frames, jitter=jitter, seed=seed, nuisance=nuisance
    )
    return generator.generate(n_classes, per_class)
