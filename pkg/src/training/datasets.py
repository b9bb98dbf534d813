"""
Resolução dos dados de uma execução: arquivo SKL1 ou geração sintética,
pré-processamento e partição por sujeito.
"""

from src.core.models import RunConfig
from src.core.types import Stream
from src.data.sampling import DataSplit, split_by_subject
from src.data.skeleton import Dataset, load_topology
from src.data.synth import synth_generate
from src.data.transforms import derive_stream, prepare_dataset
from src.storage.dataset_store import load_dataset


def load_run_dataset(config: RunConfig) -> Dataset:
    """Dataset bruto: `data.path` se houver, senão o sintético da seed da execução."""
    section = config.data
    if section.path is not None:
        return load_dataset(section.path)
    return synth_generate(
        n_classes=section.classes,
        per_class=section.per_class,
        topology=load_topology(section.topology),
        frames=section.frames,
        seed=config.seed,
        jitter=section.jitter,
    )


def run_split(config: RunConfig, dataset: Dataset) -> DataSplit:
    """Reamostra para `data.frames`, centraliza e separa treino/teste por sujeito."""
    prepared = prepare_dataset(dataset, config.data.frames)
    return split_by_subject(prepared, config.data.test_subject_modulus)


def stream_split(split: DataSplit, stream: Stream) -> DataSplit:
    """A mesma partição na modalidade pedida."""
    return DataSplit(derive_stream(split.train, stream), derive_stream(split.test, stream))
