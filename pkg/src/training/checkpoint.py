"""
Montagem e leitura de checkpoints: metadados de arquitetura, encoder e
classificador.

Nomes gravados:
    meta.*                arquitetura, modalidade, época, T, adjacência
    query.<param>         encoder treinado (o usado nos protocolos downstream)
    key.<param>           ramo key do pré-treino
    classifier.*          classificador linear (protocolos downstream)
    optim.*, queue.*      estado do otimizador e da fila (pré-treino)
    rng.state             [seed, época, passo]
"""

from src.core.exceptions import ContractError
from src.core.models import STGCNConfig
from src.core.types import Stream
from src.encoder.graph import GraphAdjacency
from src.encoder.model import SkeletonEncoder
from src.encoder.params import ParamSet
from src.storage.checkpoint_store import CheckpointBundle
from src.training.classifier import CLASSIFIER_PREFIX, LinearClassifier

QUERY_PREFIX = "query"
KEY_PREFIX = "key"


def put_encoder_meta(
    bundle: CheckpointBundle,
    encoder: SkeletonEncoder,
    stream: Stream,
    epoch: int,
    frames: int,
) -> None:
    """Grava os metadados que permitem reconstruir o encoder só pelo checkpoint."""
    config = encoder.config
    bundle.put("meta.widths", config.widths)
    bundle.put("meta.strides", config.strides)
    bundle.put("meta.kernel", [config.kernel])
    bundle.put("meta.embed_dim", [config.embed_dim])
    bundle.put("meta.variational", [1.0 if encoder.variational else 0.0])
    bundle.put("meta.stream", [stream.code])
    bundle.put("meta.epoch", [epoch])
    bundle.put("meta.frames", [frames])
    bundle.put("meta.adjacency", encoder.adjacency.matrix)


def config_from_bundle(bundle: CheckpointBundle) -> STGCNConfig:
    return STGCNConfig(
        widths=bundle.integers("meta.widths"),
        strides=bundle.integers("meta.strides"),
        kernel=bundle.integers("meta.kernel")[0],
        embed_dim=bundle.integers("meta.embed_dim")[0],
    )


def bundle_stream(bundle: CheckpointBundle) -> Stream:
    return Stream.from_code(bundle.integers("meta.stream")[0])


def bundle_epoch(bundle: CheckpointBundle) -> int:
    return bundle.integers("meta.epoch")[0]


def bundle_frames(bundle: CheckpointBundle) -> int:
    return bundle.integers("meta.frames")[0]


def encoder_from_bundle(
    bundle: CheckpointBundle,
    prefix: str = QUERY_PREFIX,
    requires_grad: bool = False,
) -> SkeletonEncoder:
    """
    Reconstrói um encoder a partir dos tensores `<prefix>.*`.

    Raises:
        ContractError: Metadados ou parâmetros ausentes
    """
    arrays = bundle.group(prefix)
    if not arrays:
        raise ContractError(f"Checkpoint sem parâmetros '{prefix}'", details={"prefix": prefix})
    adjacency_matrix = bundle.get("meta.adjacency").copy()
    adjacency_matrix.setflags(write=False)
    return SkeletonEncoder(
        config=config_from_bundle(bundle),
        adjacency=GraphAdjacency(adjacency_matrix),
        params=ParamSet.from_arrays(arrays, requires_grad=requires_grad),
        variational=bool(bundle.integers("meta.variational")[0]),
    )


def classifier_from_bundle(
    bundle: CheckpointBundle, requires_grad: bool = False
) -> LinearClassifier:
    """
    Raises:
        ContractError: Checkpoint sem classificador treinado
    """
    if not bundle.has_group(CLASSIFIER_PREFIX):
        raise ContractError("Checkpoint sem classificador treinado (rode um protocolo downstream)")
    group = bundle.group(CLASSIFIER_PREFIX)
    arrays = {f"{CLASSIFIER_PREFIX}.{name}": value for name, value in group.items()}
    return LinearClassifier(ParamSet.from_arrays(arrays, requires_grad=requires_grad))


def downstream_bundle(
    config_hash: int,
    encoder: SkeletonEncoder,
    classifier: LinearClassifier,
    stream: Stream,
    epoch: int,
    frames: int,
) -> CheckpointBundle:
    """Checkpoint de um protocolo downstream: encoder (query) e classificador."""
    bundle = CheckpointBundle(config_hash=config_hash)
    put_encoder_meta(bundle, encoder, stream, epoch, frames)
    bundle.put("meta.classes", [classifier.n_classes])
    bundle.put_group(QUERY_PREFIX, encoder.params.to_arrays())
    for name, value in classifier.params.to_arrays().items():
        bundle.put(name, value)
    return bundle
