"""Texture features from gray-level co-occurrence, reduced by a PCA+LDA
projection and modeled by per-class self-organizing maps."""

from .csom import (
    CsomModel,
    classify,
    classify_dataset,
    split_by_class,
    train_csom,
    transform_append,
    transform_replace,
)
from .data import UNLABELED, Dataset, dataset_from_csv, dataset_to_csv, read_dataset, write_dataset
from .errors import (
    DataError,
    EmptyForegroundError,
    Error,
    FormatError,
    IntegrityError,
    ShapeError,
    TruncationError,
)
from .evaluation import (
    CLASSIFIERS,
    EVAL_MODES,
    HOLDOUT_FRACTION,
    PIPELINES,
    EvaluationReport,
    ExperimentConfig,
    FoldModels,
    GaussianNbModel,
    fit_fold,
    gnb_fit,
    gnb_fit_predict,
    holdout_split,
    kfold_split,
    knn_predict,
    predict_fold,
    run_experiment,
)
from .fisher import FisherProjection, fisher_criteria, fit_fisher, project, project_dataset
from .imaging import Image, PreprocessConfig, load_pgm, preprocess, quantize, save_pgm
from .model_io import SavedModel, fnv1a64, load_model, parse_model, save_model, serialize_model
from .roi import (
    RegionMask,
    RoiConfig,
    blockwise_partition,
    mask_from_rle,
    mask_to_rle,
    pixelwise_segments,
    select_regions,
)
from .som import (
    SomMap,
    TrainingSchedule,
    append_prototypes,
    bmu,
    default_schedule,
    derive_schedule,
    init_map,
    neighborhood,
    quantization_error,
    replace_with_prototypes,
    train,
    train_step,
)
from .texture import (
    DEFAULT_OFFSETS,
    Glcm,
    TextureConfig,
    cooccurrence,
    extract_features,
    feature_length,
    haralick4,
)

__version__ = "0.1.0"

__all__ = [
    "CLASSIFIERS",
    "CsomModel",
    "DataError",
    "Dataset",
    "DEFAULT_OFFSETS",
    "EVAL_MODES",
    "EmptyForegroundError",
    "Error",
    "EvaluationReport",
    "ExperimentConfig",
    "FisherProjection",
    "FoldModels",
    "FormatError",
    "GaussianNbModel",
    "Glcm",
    "HOLDOUT_FRACTION",
    "Image",
    "IntegrityError",
    "PIPELINES",
    "PreprocessConfig",
    "RegionMask",
    "RoiConfig",
    "SavedModel",
    "ShapeError",
    "SomMap",
    "TextureConfig",
    "TrainingSchedule",
    "TruncationError",
    "UNLABELED",
    "append_prototypes",
    "blockwise_partition",
    "bmu",
    "classify",
    "classify_dataset",
    "cooccurrence",
    "dataset_from_csv",
    "dataset_to_csv",
    "default_schedule",
    "derive_schedule",
    "extract_features",
    "feature_length",
    "fisher_criteria",
    "fit_fisher",
    "fit_fold",
    "fnv1a64",
    "gnb_fit",
    "gnb_fit_predict",
    "haralick4",
    "holdout_split",
    "init_map",
    "kfold_split",
    "knn_predict",
    "load_model",
    "load_pgm",
    "mask_from_rle",
    "mask_to_rle",
    "neighborhood",
    "parse_model",
    "pixelwise_segments",
    "predict_fold",
    "preprocess",
    "project",
    "project_dataset",
    "quantization_error",
    "quantize",
    "read_dataset",
    "replace_with_prototypes",
    "run_experiment",
    "save_model",
    "save_pgm",
    "select_regions",
    "serialize_model",
    "split_by_class",
    "train",
    "train_csom",
    "train_step",
    "transform_append",
    "transform_replace",
    "write_dataset",
]
