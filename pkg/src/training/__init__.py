"""
Módulo training: otimizador, protocolos, métricas, fusão e saliência.
"""

from src.training.ablation import ablation_summary, run_ablation
from src.training.checkpoint import classifier_from_bundle, downstream_bundle, encoder_from_bundle
from src.training.classifier import LinearClassifier
from src.training.datasets import load_run_dataset, run_split, stream_split
from src.training.embeddings import classify_dataset, embed_dataset, embedding_dump
from src.training.fusion import fuse_batch, fuse_predictions
from src.training.metrics import cross_entropy, predict, top1_accuracy
from src.training.optimizer import AdamW, AdamWState, adamw_step
from src.training.protocols import (
    ClassifierTrainer,
    ContrastivePretrainer,
    DownstreamResult,
    DownstreamTrainer,
    finetune,
    fit_linear_classifier,
    linear_eval,
    pretrain,
    semi_supervised,
)
from src.training.saliency import grad_cam_map, joint_saliency

__all__ = [
    "AdamW",
    "AdamWState",
    "ClassifierTrainer",
    "ContrastivePretrainer",
    "DownstreamResult",
    "DownstreamTrainer",
    "LinearClassifier",
    "ablation_summary",
    "adamw_step",
    "classifier_from_bundle",
    "classify_dataset",
    "cross_entropy",
    "downstream_bundle",
    "embed_dataset",
    "embedding_dump",
    "encoder_from_bundle",
    "finetune",
    "fit_linear_classifier",
    "fuse_batch",
    "fuse_predictions",
    "grad_cam_map",
    "joint_saliency",
    "linear_eval",
    "load_run_dataset",
    "pretrain",
    "predict",
    "run_split",
    "semi_supervised",
    "stream_split",
    "top1_accuracy",
]
