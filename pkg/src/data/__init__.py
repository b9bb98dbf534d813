"""
Módulo data: sequências de esqueleto, modalidades, augmentações,
dados sintéticos e amostragem.
"""

from src.data.augment import (
    augment_batch,
    augment_view,
    shear_augment,
    temporal_crop_augment,
)
from src.data.rng import augment_stream, epoch_permutation, noise_stream, stream
from src.data.sampling import DataSplit, category_balanced_subset, split_by_subject
from src.data.skeleton import (
    Dataset,
    SkeletonSequence,
    SkeletonTopology,
    load_topology,
    parse_topology,
)
from src.data.synth import SyntheticSkeletonGenerator, synth_generate
from src.data.transforms import (
    center_on_root,
    derive_bone_stream,
    derive_motion_stream,
    derive_stream,
    encoder_batch,
    interpolate_to_length,
    prepare_dataset,
    standardize,
)

__all__ = [
    "Dataset",
    "DataSplit",
    "SkeletonSequence",
    "SkeletonTopology",
    "SyntheticSkeletonGenerator",
    "augment_batch",
    "augment_stream",
    "augment_view",
    "category_balanced_subset",
    "center_on_root",
    "derive_bone_stream",
    "derive_motion_stream",
    "derive_stream",
    "encoder_batch",
    "epoch_permutation",
    "interpolate_to_length",
    "load_topology",
    "noise_stream",
    "parse_topology",
    "prepare_dataset",
    "shear_augment",
    "split_by_subject",
    "standardize",
    "stream",
    "synth_generate",
    "temporal_crop_augment",
]
