"""
Arquivo de dataset SKL1 (binário little-endian, round trip bit a bit).

Layout: magic "SKL1", u32 versão, u32 n_samples, u32 C, u32 T, u32 N,
u32 n_classes, u32 n_joints_topology, N_top − 1 arestas (u32 pai, u32
filho); depois, por amostra: u32 rótulo, u32 sujeito e C·T·N float64.
"""

from pathlib import Path
from typing import Optional

from src.core.constants import CHANNELS, DATASET_MAGIC, DATASET_VERSION
from src.core.exceptions import ContractError, DataFormatError
from src.data.skeleton import Dataset, SkeletonSequence, SkeletonTopology, parse_topology
from src.data.synth import class_name
from src.storage.base import BaseStore, StorageType
from src.storage.binary import BinaryReader, BinaryWriter


class DatasetStore(BaseStore):
    """Serialização de Dataset no formato SKL1."""

    @property
    def storage_type(self) -> StorageType:
        return StorageType.DATASET

    def encode(self, dataset: Dataset) -> bytes:
        """
        Raises:
            ContractError: Amostras com número de quadros diferente
        """
        frames = {s.frames for s in dataset.samples}
        if len(frames) > 1:
            raise ContractError("SKL1 exige T uniforme", details={"frames": sorted(frames)})
        n_frames = frames.pop() if frames else 0
        topology = dataset.topology

        writer = BinaryWriter()
        writer.raw(DATASET_MAGIC)
        writer.u32(DATASET_VERSION)
        writer.u32(len(dataset))
        writer.u32(CHANNELS)
        writer.u32(n_frames)
        writer.u32(topology.n_joints)
        writer.u32(dataset.n_classes)
        writer.u32(topology.n_joints)
        for parent, child in topology.edges:
            writer.u32(parent)
            writer.u32(child)
        for sample in dataset.samples:
            writer.u32(sample.label)
            writer.u32(sample.subject_id)
            writer.f64_array(sample.coords)
        return writer.getvalue()

    def decode(
        self,
        data: bytes,
        path: Optional[str] = None,
        class_names: Optional[list[str]] = None,
    ) -> Dataset:
        """
        Raises:
            DataFormatError: Magic, versão, forma ou payload inválidos
        """
        reader = BinaryReader(data, path)
        if reader.take(len(DATASET_MAGIC), "magic") != DATASET_MAGIC:
            raise reader.error("Magic inválido (esperado SKL1)", offset=0)

        version_at = reader.offset
        if reader.u32("versão") != DATASET_VERSION:
            raise reader.error("Versão de dataset não suportada", offset=version_at)

        n_samples = reader.u32("n_samples")
        header: dict[str, tuple[int, int]] = {}
        for name in ("C", "T", "N", "n_classes", "n_joints_topology"):
            header[name] = (reader.offset, reader.u32(name))

        (c_at, channels), (t_at, frames), (n_at, joints) = header["C"], header["T"], header["N"]
        k_at, n_classes = header["n_classes"]
        top_at, topo_joints = header["n_joints_topology"]
        if channels != CHANNELS:
            raise reader.error(f"C = {channels}, esperado {CHANNELS}", offset=c_at)
        if n_samples and frames < 2:
            raise reader.error("T deve ser ≥ 2", offset=t_at)
        if joints < 2:
            raise reader.error("N deve ser ≥ 2", offset=n_at)
        if n_classes < 1:
            raise reader.error("n_classes deve ser ≥ 1", offset=k_at)
        if topo_joints != joints:
            raise reader.error("Topologia não casa com N", offset=top_at)

        edges_at = reader.offset
        edges = tuple((reader.u32("aresta"), reader.u32("aresta")) for _ in range(topo_joints - 1))
        children = {c for _, c in edges}
        roots = [j for j in range(topo_joints) if j not in children]
        try:
            topology = SkeletonTopology(topo_joints, edges, root=roots[0] if roots else 0)
        except ContractError as e:
            raise reader.error(
                f"Arestas não formam uma árvore: {e.message}", offset=edges_at
            ) from e

        samples = []
        for index in range(n_samples):
            label_at = reader.offset
            label = reader.u32(f"rótulo da amostra {index}")
            subject = reader.u32(f"sujeito da amostra {index}")
            if label >= n_classes:
                raise reader.error(
                    f"Rótulo {label} ≥ n_classes na amostra {index}", offset=label_at
                )
            coords_at = reader.offset
            coords = reader.f64_array((channels, frames, joints), f"coordenadas da amostra {index}")
            try:
                samples.append(SkeletonSequence(coords, label=label, subject_id=subject))
            except ContractError as e:
                raise reader.error(
                    f"Amostra {index} inválida: {e.message}", offset=coords_at
                ) from e
        reader.expect_end()

        names = class_names or [class_name(i) for i in range(n_classes)]
        if len(names) != n_classes:
            raise DataFormatError("Manifesto com número de classes diferente do arquivo", path=path)
        return Dataset(samples, topology, names)

    def save(self, dataset: Dataset, path: Path) -> Path:
        written = self._write_bytes(path, self.encode(dataset))
        self.logger.info("Dataset salvo", path=str(written), samples=len(dataset))
        return written

    def load(self, path: Path, manifest: Optional[Path] = None) -> Dataset:
        path = Path(path)
        names = read_manifest(manifest)[1] if manifest is not None else None
        dataset = self.decode(self._read_bytes(path), str(path), names)
        self.logger.info("Dataset carregado", path=str(path), samples=len(dataset))
        return dataset


def save_dataset(dataset: Dataset, path: Path) -> Path:
    return DatasetStore().save(dataset, path)


def load_dataset(path: Path, manifest: Optional[Path] = None) -> Dataset:
    return DatasetStore().load(path, manifest)


# =============================================================================
# MANIFESTO TEXTUAL
# =============================================================================

def export_manifest(dataset: Dataset, path: Path) -> Path:
    """
    Manifesto legível: `joints N`, `root R`, uma aresta `pai filho` por
    linha e depois `class <nome>` por classe.
    """
    topology = dataset.topology
    lines = [f"joints {topology.n_joints}", f"root {topology.root}"]
    lines += [f"{p} {c}" for p, c in topology.edges]
    lines += [f"class {name}" for name in dataset.class_names]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_manifest(path: Path) -> tuple[SkeletonTopology, list[str]]:
    """Inverso de export_manifest."""
    topology_lines: list[str] = []
    names: list[str] = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DataFormatError("Manifesto ilegível", path=str(path), cause=e) from e
    for line in text.splitlines():
        if line.startswith("class "):
            names.append(line[len("class ") :].strip())
        else:
            topology_lines.append(line)
    return parse_topology("\n".join(topology_lines), source=str(path)), names
