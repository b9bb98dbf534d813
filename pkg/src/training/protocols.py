"""
Protocolos de treino: pré-treino contrastivo variacional e os protocolos
downstream (avaliação linear, semi-supervisionado e fine-tuning).

Toda aleatoriedade vem de fluxos contador (seed, finalidade, época,
amostra, vista); a mesma configuração reproduz checkpoints e métricas
bit a bit, inclusive ao retomar de um checkpoint.
"""

import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from config.logging_config import LoggerMixin
from config.presets import encoder_config
from config.run_config import config_hash
from src.contrastive import EncoderPair, LossBreakdown, MemoryQueue, momentum_update, vcl_objective
from src.core.exceptions import CheckpointMismatchError, ContractError
from src.core.models import MetricsRecord, RunConfig
from src.core.types import Protocol, Split, Stream, StreamPurpose
from src.data.augment import augment_batch
from src.data.rng import epoch_permutation, noise_stream, stream
from src.data.sampling import DataSplit, category_balanced_subset, split_by_subject
from src.data.skeleton import Dataset
from src.data.transforms import encoder_batch
from src.encoder import ParamSet, SkeletonEncoder, build_adjacency, reparameterize
from src.numerics import Tape, Tensor, backward, l2_normalize, no_grad
from src.storage.checkpoint_store import CheckpointBundle
from src.training.checkpoint import (
    KEY_PREFIX,
    QUERY_PREFIX,
    bundle_epoch,
    bundle_frames,
    bundle_stream,
    downstream_bundle,
    encoder_from_bundle,
    put_encoder_meta,
)
from src.training.classifier import LinearClassifier
from src.training.metrics import cross_entropy, predict, top1_accuracy
from src.training.optimizer import AdamW, AdamWState

OnRecord = Callable[[MetricsRecord], None]

OPTIM_PREFIX = "optim"
QUEUE_PREFIX = "queue"

# Vista 0 alimenta o ramo query, vista 1 o ramo key
QUERY_VIEW = 0
KEY_VIEW = 1


def _mean(values: Sequence[float]) -> Optional[float]:
    return float(np.mean(values)) if values else None


# =============================================================================
# PRÉ-TREINO
# =============================================================================

@dataclass
class PretrainState:
    """Estado mutável do pré-treino (tudo o que vai para o checkpoint)."""

    pair: EncoderPair
    query: SkeletonEncoder
    key: SkeletonEncoder
    optimizer: AdamW
    queue: MemoryQueue
    epoch: int = 0
    step: int = 0


class ContrastivePretrainer(LoggerMixin):
    """
    Pré-treino query/key com fila de negativos.

    Por lote: duas augmentações independentes → forward query (na fita) e
    key (fora dela) → cabeças gaussianas → reparametrização → InfoNCE + KL
    → backward só no ramo query → AdamW → momentum → fila recebe z_k.
    """

    def __init__(
        self,
        dataset: Dataset,
        config: RunConfig,
        stream_kind: Stream = Stream.JOINT,
        on_record: Optional[OnRecord] = None,
    ):
        if len(dataset) == 0:
            raise ContractError("Pré-treino exige ao menos uma amostra")
        self.dataset = dataset
        self.config = config
        self.stream_kind = stream_kind
        self.on_record = on_record
        self.encoder_config = encoder_config(config.encoder.preset, config.encoder.embed_dim)
        self.adjacency = build_adjacency(dataset.topology)
        self.augmentation = config.augment.to_config(config.seed)
        self.config_hash = config_hash(config)
        self.records: list[MetricsRecord] = []

    # Estado

    def initial_state(self) -> PretrainState:
        query = SkeletonEncoder.initialize(
            self.encoder_config, self.adjacency, self.config.seed, self.config.variational
        )
        pair = EncoderPair.from_query(query.params, self.config.contrastive.momentum)
        key = SkeletonEncoder(self.encoder_config, self.adjacency, pair.key, query.variational)
        optimizer = AdamW(
            query.params, self.config.train.schedule(), self.config.train.weight_decay
        )
        queue = MemoryQueue.random(
            self.config.contrastive.queue_size,
            self.encoder_config.embed_dim,
            stream(self.config.seed, StreamPurpose.QUEUE, 0),
        )
        return PretrainState(pair=pair, query=query, key=key, optimizer=optimizer, queue=queue)

    def restore_state(self, bundle: CheckpointBundle) -> PretrainState:
        """
        Raises:
            CheckpointMismatchError: Checkpoint de outra configuração
        """
        if bundle.config_hash != self.config_hash:
            raise CheckpointMismatchError(
                expected_hash=self.config_hash, found_hash=bundle.config_hash
            )
        query = encoder_from_bundle(bundle, QUERY_PREFIX, requires_grad=True)
        key_params = ParamSet.from_arrays(bundle.group(KEY_PREFIX), requires_grad=False)
        pair = EncoderPair(query.params, key_params, self.config.contrastive.momentum)
        key = SkeletonEncoder(query.config, query.adjacency, key_params, query.variational)
        schedule = self.config.train.schedule()
        optim_state = AdamWState.from_state(
            bundle.group(OPTIM_PREFIX),
            lr=schedule.base_lr,
            weight_decay=self.config.train.weight_decay,
        )
        optimizer = AdamW(query.params, schedule, state=optim_state)
        queue = MemoryQueue.from_state(bundle.get("queue.entries"), bundle.get("queue.counters"))
        _, epoch, step = bundle.integers("rng.state")
        self.logger.info("Pré-treino retomado", epoch=epoch, step=step)
        return PretrainState(
            pair=pair,
            query=query,
            key=key,
            optimizer=optimizer,
            queue=queue,
            epoch=epoch,
            step=step,
        )

    def to_bundle(self, state: PretrainState) -> CheckpointBundle:
        bundle = CheckpointBundle(config_hash=self.config_hash)
        put_encoder_meta(bundle, state.query, self.stream_kind, state.epoch, self.dataset[0].frames)
        bundle.put_group(QUERY_PREFIX, state.query.params.to_arrays())
        bundle.put_group(KEY_PREFIX, state.key.params.to_arrays())
        bundle.put_group(OPTIM_PREFIX, state.optimizer.state.state_arrays())
        bundle.put_group(QUEUE_PREFIX, state.queue.state_arrays())
        bundle.put("rng.state", [self.config.seed, state.epoch, state.step])
        return bundle

    # Passos

    def _views(self, indices: list[int], epoch: int) -> tuple[np.ndarray, np.ndarray]:
        coords = [self.dataset[i].coords for i in indices]
        workers = self.config.workers
        query_view = augment_batch(coords, indices, self.augmentation, epoch, QUERY_VIEW, workers)
        key_view = augment_batch(coords, indices, self.augmentation, epoch, KEY_VIEW, workers)
        return encoder_batch(query_view), encoder_batch(key_view)

    def _latent(
        self,
        encoder: SkeletonEncoder,
        x: np.ndarray,
        indices: list[int],
        epoch: int,
        view: int,
    ) -> tuple[Tensor, Optional[Tensor], Tensor]:
        """(μ, log σ², z normalizado); sem cabeça gaussiana z = μ/‖μ‖."""
        mu, logvar = encoder.embed(x)
        if logvar is None:
            return mu, None, l2_normalize(mu, axis=-1)
        xi = np.stack(
            [
                noise_stream(self.config.seed, epoch, i, view).standard_normal(encoder.embed_dim)
                for i in indices
            ]
        )
        return mu, logvar, l2_normalize(reparameterize(mu, logvar, xi), axis=-1)

    def train_step(self, state: PretrainState, indices: list[int], epoch: int) -> LossBreakdown:
        x_q, x_k = self._views(indices, epoch)
        with Tape() as tape:
            mu_q, logvar_q, z_q = self._latent(state.query, x_q, indices, epoch, QUERY_VIEW)
            with no_grad():
                mu_k, logvar_k, z_k = self._latent(state.key, x_k, indices, epoch, KEY_VIEW)
            breakdown = vcl_objective(
                z_q,
                z_k,
                state.queue.negatives(),
                self.config.contrastive.temperature,
                mu_q,
                logvar_q,
                mu_k,
                logvar_k,
            )
        backward(tape, breakdown.total)
        state.optimizer.step()
        momentum_update(state.pair)
        state.queue.push(z_k.data)
        state.step += 1
        self.logger.debug("Passo concluído", step=state.step, loss=breakdown.total.item())
        return breakdown

    def train_epoch(self, state: PretrainState, epoch: int) -> MetricsRecord:
        started = time.perf_counter()
        lr = state.optimizer.set_epoch(epoch)
        order = epoch_permutation(self.config.seed, epoch, len(self.dataset))
        batch_size = self.config.train.batch_size

        totals: list[float] = []
        infonce: list[float] = []
        kl_q: list[float] = []
        kl_k: list[float] = []
        for start in range(0, order.size, batch_size):
            indices = [int(i) for i in order[start : start + batch_size]]
            breakdown = self.train_step(state, indices, epoch)
            totals.append(breakdown.total.item())
            infonce.append(breakdown.infonce)
            if breakdown.kl_q is not None and breakdown.kl_k is not None:
                kl_q.append(breakdown.kl_q)
                kl_k.append(breakdown.kl_k)

        state.epoch = epoch + 1
        record = MetricsRecord(
            epoch=epoch,
            split=Split.TRAIN.value,
            protocol=Protocol.PRETRAIN.value,
            loss_total=_mean(totals),
            loss_infonce=_mean(infonce),
            loss_kl_q=_mean(kl_q),
            loss_kl_k=_mean(kl_k),
            seconds=time.perf_counter() - started,
        )
        self.logger.info(
            "Época de pré-treino concluída",
            stream=self.stream_kind.value,
            epoch=epoch,
            lr=lr,
            loss=record.loss_total,
            steps=state.step,
        )
        return record

    def run(self, resume: Optional[CheckpointBundle] = None) -> CheckpointBundle:
        """
        Treina até `train.epochs` épocas (a partir da época gravada, se houver
        checkpoint de retomada) e devolve o checkpoint final.
        """
        state = self.restore_state(resume) if resume is not None else self.initial_state()
        log = self.log_operation(
            "pretrain", stream=self.stream_kind.value, samples=len(self.dataset)
        )
        log.info("Pré-treino iniciado", start_epoch=state.epoch, epochs=self.config.train.epochs)

        for epoch in range(state.epoch, self.config.train.epochs):
            record = self.train_epoch(state, epoch)
            self.records.append(record)
            if self.on_record is not None:
                self.on_record(record)

        log.info("Pré-treino concluído", epoch=state.epoch, steps=state.step)
        return self.to_bundle(state)


def pretrain(
    dataset: Dataset,
    config: RunConfig,
    stream_kind: Stream = Stream.JOINT,
    on_record: Optional[OnRecord] = None,
    resume: Optional[CheckpointBundle] = None,
) -> CheckpointBundle:
    """Pré-treino contrastivo (rótulos ignorados)."""
    return ContrastivePretrainer(dataset, config, stream_kind, on_record).run(resume)


# =============================================================================
# DOWNSTREAM
# =============================================================================

class ClassifierTrainer(LoggerMixin):
    """
    Laço de treino com entropia cruzada comum aos protocolos downstream.

    Emite um MetricsRecord por época (split "test"): `ce_loss` é a média
    de treino da época e `top1` a acurácia de teste ao final dela.
    """

    def __init__(self, config: RunConfig, protocol: Protocol, on_record: Optional[OnRecord] = None):
        self.config = config
        self.protocol = protocol
        self.on_record = on_record

    def _emit(self, record: MetricsRecord, records: list[MetricsRecord]) -> None:
        records.append(record)
        if self.on_record is not None:
            self.on_record(record)

    def fit(
        self,
        classifier: LinearClassifier,
        trainable: ParamSet,
        batch_mu: Callable[[np.ndarray], Tensor],
        train_labels: np.ndarray,
        test_logits: Callable[[], np.ndarray],
        test_labels: np.ndarray,
    ) -> list[MetricsRecord]:
        """
        Args:
            classifier: Classificador a treinar
            trainable: Parâmetros atualizados pelo otimizador
            batch_mu: μ (na fita) das amostras de treino indicadas
            train_labels: Rótulos de treino
            test_logits: Logits do conjunto de teste com o estado atual
            test_labels: Rótulos de teste
        """
        settings = self.config.eval
        optimizer = AdamW(trainable, settings.schedule(), self.config.train.weight_decay)
        records: list[MetricsRecord] = []
        log = self.log_operation(self.protocol.value, samples=int(train_labels.size))

        if settings.epochs == 0:
            started = time.perf_counter()
            top1 = top1_accuracy(predict(test_logits()), test_labels)
            record = MetricsRecord(
                epoch=0,
                split=Split.TEST.value,
                protocol=self.protocol.value,
                top1=top1,
                seconds=time.perf_counter() - started,
            )
            self._emit(record, records)
            log.info("Avaliação sem treino", top1=top1)
            return records

        for epoch in range(settings.epochs):
            started = time.perf_counter()
            lr = optimizer.set_epoch(epoch)
            order = epoch_permutation(self.config.seed, epoch, train_labels.size, phase=1)
            losses: list[float] = []
            for start in range(0, order.size, settings.batch_size):
                batch = order[start : start + settings.batch_size]
                with Tape() as tape:
                    loss = cross_entropy(classifier.logits(batch_mu(batch)), train_labels[batch])
                backward(tape, loss)
                optimizer.step()
                losses.append(loss.item())

            top1 = top1_accuracy(predict(test_logits()), test_labels)
            record = MetricsRecord(
                epoch=epoch,
                split=Split.TEST.value,
                protocol=self.protocol.value,
                ce_loss=_mean(losses),
                top1=top1,
                seconds=time.perf_counter() - started,
            )
            self._emit(record, records)
            log.info("Época concluída", epoch=epoch, lr=lr, ce_loss=record.ce_loss, top1=top1)
        return records


def fit_linear_classifier(
    train_features: np.ndarray,
    train_labels: Sequence[int],
    test_features: np.ndarray,
    test_labels: Sequence[int],
    n_classes: int,
    config: RunConfig,
) -> tuple[LinearClassifier, list[MetricsRecord]]:
    """Classificador afim treinado sobre features fixas."""
    train_features = np.asarray(train_features, dtype=np.float64)
    test_features = np.asarray(test_features, dtype=np.float64)
    classifier = LinearClassifier.initialize(train_features.shape[1], n_classes, config.seed)

    def test_logits() -> np.ndarray:
        with no_grad():
            return classifier.logits(Tensor(test_features)).data

    records = ClassifierTrainer(config, Protocol.LINEAR).fit(
        classifier,
        classifier.params,
        lambda batch: Tensor(train_features[batch]),
        np.asarray(train_labels, dtype=np.int64),
        test_logits,
        np.asarray(test_labels, dtype=np.int64),
    )
    return classifier, records


@dataclass
class DownstreamResult:
    """Resultado de um protocolo downstream."""

    records: list[MetricsRecord]
    bundle: CheckpointBundle
    test_logits: np.ndarray

    @property
    def record(self) -> MetricsRecord:
        """Registro final (o resultado do protocolo)."""
        return self.records[-1]


class DownstreamTrainer(LoggerMixin):
    """
    Encoder (ramo query do checkpoint) mais classificador linear sobre μ.

    linear: encoder congelado, features pré-computadas fora da fita;
    semi: subconjunto balanceado por classe, treino ponta a ponta;
    finetune: semi com fração 1.0.
    """

    def __init__(
        self,
        checkpoint: CheckpointBundle,
        data: Union[Dataset, DataSplit],
        config: RunConfig,
        protocol: Protocol,
        fraction: Optional[float] = None,
        on_record: Optional[OnRecord] = None,
    ):
        if not protocol.is_downstream:
            raise ContractError("Protocolo não é downstream", details={"protocol": protocol.value})
        if isinstance(data, DataSplit):
            split = data
        else:
            split = split_by_subject(data, config.data.test_subject_modulus)
        if split.train.class_names != split.test.class_names:
            raise ContractError(
                "Treino e teste com classes diferentes",
                details={"train": split.train.n_classes, "test": split.test.n_classes},
            )
        self.checkpoint = checkpoint
        self.split = split
        self.config = config
        self.protocol = protocol
        self.fraction = fraction
        self.on_record = on_record

    def training_set(self) -> Dataset:
        if self.protocol is Protocol.LINEAR:
            return self.split.train
        if self.protocol is Protocol.FINETUNE:
            fraction = 1.0
        else:
            fraction = self.fraction or self.config.eval.fraction
        rng = stream(self.config.seed, StreamPurpose.SUBSET, 0)
        return category_balanced_subset(self.split.train, fraction, rng)

    def run(self) -> DownstreamResult:
        frozen = self.protocol is Protocol.LINEAR
        encoder = encoder_from_bundle(self.checkpoint, QUERY_PREFIX, requires_grad=not frozen)
        n_classes = self.split.train.n_classes
        classifier = LinearClassifier.initialize(encoder.embed_dim, n_classes, self.config.seed)

        train_set = self.training_set()
        x_train = encoder_batch([s.coords for s in train_set])
        x_test = encoder_batch([s.coords for s in self.split.test])
        test_labels = self.split.test.labels

        if frozen:
            features = encoder.embed_mean(x_train)
            trainable = classifier.params

            def batch_mu(batch: np.ndarray) -> Tensor:
                return Tensor(features[batch])

        else:
            trainable = encoder.params.merged(classifier.params)

            def batch_mu(batch: np.ndarray) -> Tensor:
                mu, _ = encoder.embed(x_train[batch])
                return mu

        def test_logits() -> np.ndarray:
            with no_grad():
                return classifier.logits(Tensor(encoder.embed_mean(x_test))).data

        self.logger.info(
            "Protocolo downstream iniciado",
            protocol=self.protocol.value,
            train=len(train_set),
            test=len(self.split.test),
            classes=n_classes,
        )
        records = ClassifierTrainer(self.config, self.protocol, self.on_record).fit(
            classifier, trainable, batch_mu, train_set.labels, test_logits, test_labels
        )
        bundle = downstream_bundle(
            config_hash(self.config),
            encoder,
            classifier,
            bundle_stream(self.checkpoint),
            bundle_epoch(self.checkpoint),
            bundle_frames(self.checkpoint),
        )
        return DownstreamResult(records=records, bundle=bundle, test_logits=test_logits())


def linear_eval(
    checkpoint: CheckpointBundle,
    data: Union[Dataset, DataSplit],
    config: RunConfig,
    on_record: Optional[OnRecord] = None,
) -> MetricsRecord:
    """Classificador linear sobre o encoder congelado; devolve o top-1 de teste."""
    trainer = DownstreamTrainer(checkpoint, data, config, Protocol.LINEAR, on_record=on_record)
    return trainer.run().record


def semi_supervised(
    checkpoint: CheckpointBundle,
    data: Union[Dataset, DataSplit],
    fraction: float,
    config: RunConfig,
    on_record: Optional[OnRecord] = None,
) -> MetricsRecord:
    """Treino ponta a ponta numa fração rotulada balanceada por classe."""
    trainer = DownstreamTrainer(checkpoint, data, config, Protocol.SEMI, fraction, on_record)
    return trainer.run().record


def finetune(
    checkpoint: CheckpointBundle,
    data: Union[Dataset, DataSplit],
    config: RunConfig,
    on_record: Optional[OnRecord] = None,
) -> MetricsRecord:
    """Encoder e classificador treinados com todos os rótulos."""
    trainer = DownstreamTrainer(checkpoint, data, config, Protocol.FINETUNE, on_record=on_record)
    return trainer.run().record
