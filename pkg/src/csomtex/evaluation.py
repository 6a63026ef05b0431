"""Cross-validated comparison of feature pipelines with reference classifiers.

Every fold fits its own Fisher projection and map(s) on the training split
only, transforms both splits, then scores a 1-NN or Gaussian naive Bayes
classifier on the test split.  Test rows are transformed without their
labels, mirroring how unseen data would flow through the model.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .csom import CsomModel, train_csom, transform_append, transform_replace
from .data import Dataset, require_labels
from .errors import DataError
from .fisher import FisherProjection, fit_fisher, project_dataset
from .som import (
    SomMap,
    TrainingSchedule,
    append_prototypes,
    init_map,
    quantization_error,
    replace_with_prototypes,
    train,
)

PIPELINES = ("raw", "som-replace", "som-append", "csom-replace", "csom-append")
CLASSIFIERS = ("knn", "gnb")
EVAL_MODES = ("cv", "holdout")

HOLDOUT_FRACTION = 0.22


@dataclass
class ExperimentConfig:
    """Knobs for one pipeline/classifier run."""

    pipeline: str = "csom-replace"
    classifier: str = "knn"
    knn_k: int = 1
    map_rows: int = 5
    map_cols: int = 5
    fisher_dim: int | None = None  # None: n_classes - 1
    folds: int = 10
    seed: int = 0
    steps_per_sample: int = 100
    alpha0: float = 0.5
    alpha_final: float = 0.01
    sigma0: float | None = None  # None: max(rows, cols) / 2
    sigma_final: float = 0.5
    eval_mode: str = "cv"
    holdout_counts: dict | None = None
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.pipeline not in PIPELINES:
            raise ValueError(f"pipeline must be one of {PIPELINES}, got {self.pipeline!r}")
        if self.classifier not in CLASSIFIERS:
            raise ValueError(f"classifier must be one of {CLASSIFIERS}, got {self.classifier!r}")
        if self.eval_mode not in EVAL_MODES:
            raise ValueError(f"eval_mode must be one of {EVAL_MODES}, got {self.eval_mode!r}")
        if self.knn_k < 1:
            raise ValueError("knn_k must be >= 1")
        if self.map_rows < 1 or self.map_cols < 1:
            raise ValueError("map grid dimensions must be >= 1")
        if self.folds < 2:
            raise ValueError("folds must be >= 2")
        if self.steps_per_sample < 1:
            raise ValueError("steps_per_sample must be >= 1")

    def schedule(self, n_samples: int) -> TrainingSchedule:
        sigma0 = self.sigma0
        if sigma0 is None:
            sigma0 = max(max(self.map_rows, self.map_cols) / 2.0, self.sigma_final)
        return TrainingSchedule(
            iterations=max(1, self.steps_per_sample * n_samples),
            alpha0=self.alpha0,
            alpha_final=self.alpha_final,
            sigma0=sigma0,
            sigma_final=self.sigma_final,
            seed=self.seed,
        )


@dataclass(eq=False)
class EvaluationReport:
    pipeline: str
    classifier: str
    eval_mode: str
    class_ids: np.ndarray
    fold_accuracies: list
    confusion: np.ndarray  # rows: true class, cols: predicted class
    config: dict = field(default_factory=dict)

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracies))


def kfold_split(data: Dataset, k: int, seed: int = 0) -> list[tuple[Dataset, Dataset]]:
    """Stratified k-fold: per class, shuffle rows and deal them round-robin.

    The deal position carries over between classes so every fold receives a
    test share whenever k <= n.  Test folds are disjoint and union to the
    whole dataset.
    """
    labels = require_labels(data)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > data.n:
        raise ValueError(f"cannot make {k} folds from {data.n} rows")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(data.n, dtype=np.int64)
    start = 0
    for cid in np.unique(labels):
        idx = np.flatnonzero(labels == cid)
        idx = idx[rng.permutation(idx.size)]
        for j, row in enumerate(idx):
            fold_of[row] = (start + j) % k
        start = (start + idx.size) % k
    splits = []
    for f in range(k):
        test_idx = np.flatnonzero(fold_of == f)
        train_idx = np.flatnonzero(fold_of != f)
        splits.append((data.subset(train_idx), data.subset(test_idx)))
    return splits


def holdout_split(
    data: Dataset, counts: dict | None = None, seed: int = 0
) -> tuple[Dataset, Dataset]:
    """Per-class holdout: reserve ``counts[class]`` rows of each class for
    testing (default: 22% of the class, at least one row)."""
    labels = require_labels(data)
    rng = np.random.default_rng(seed)
    test_rows = []
    for cid in np.unique(labels):
        idx = np.flatnonzero(labels == cid)
        if counts is not None:
            want = int(counts.get(int(cid), 0))
        else:
            want = max(1, round(HOLDOUT_FRACTION * idx.size))
        if want < 0 or want >= idx.size:
            raise ValueError(
                f"holdout count {want} for class {cid} must leave at least one "
                f"training row of {idx.size}"
            )
        idx = idx[rng.permutation(idx.size)]
        test_rows.extend(idx[:want].tolist())
    test_idx = np.array(sorted(test_rows), dtype=np.int64)
    train_mask = np.ones(data.n, dtype=bool)
    train_mask[test_idx] = False
    return data.subset(np.flatnonzero(train_mask)), data.subset(test_idx)


def knn_predict(train: Dataset, x, k: int = 1) -> int:
    """Majority label among the k nearest training rows.

    Distance ties resolve by lower row index; vote ties by lowest class id.
    """
    labels = require_labels(train)
    if train.n == 0:
        raise ValueError("training set must be non-empty")
    if not 1 <= k <= train.n:
        raise ValueError(f"k must lie in [1, {train.n}], got {k}")
    x = np.asarray(x, dtype=np.float64)
    d = np.linalg.norm(train.X - x, axis=1)
    nearest = np.argsort(d, kind="stable")[:k]
    votes, counts = np.unique(labels[nearest], return_counts=True)
    return int(votes[int(np.argmax(counts))])


@dataclass(eq=False)
class GaussianNbModel:
    class_ids: np.ndarray
    log_priors: np.ndarray
    means: np.ndarray  # (n_classes, dim)
    variances: np.ndarray  # (n_classes, dim), floored

    def predict(self, x) -> int:
        x = np.asarray(x, dtype=np.float64)
        ll = self.log_priors + (
            -0.5 * (np.log(2.0 * np.pi * self.variances) + (x - self.means) ** 2 / self.variances)
        ).sum(axis=1)
        return int(self.class_ids[int(np.argmax(ll))])


def gnb_fit(train: Dataset) -> GaussianNbModel:
    """Per-class, per-dimension Gaussian fit with a relative variance floor."""
    labels = require_labels(train)
    classes, counts = np.unique(labels, return_counts=True)
    if counts.min() < 2:
        raise DataError("Gaussian naive Bayes needs at least two rows per class")
    global_var = train.X.var(axis=0)
    floor = np.maximum(1e-9 * global_var, 1e-12)
    means = np.empty((classes.size, train.dim))
    variances = np.empty((classes.size, train.dim))
    for i, cid in enumerate(classes):
        rows = train.X[labels == cid]
        means[i] = rows.mean(axis=0)
        variances[i] = np.maximum(rows.var(axis=0), floor)
    log_priors = np.log(counts / train.n)
    return GaussianNbModel(classes, log_priors, means, variances)


def gnb_fit_predict(train: Dataset, x) -> int:
    """Fit on the training rows and classify one vector.

    Ties in the posterior resolve to the lowest class id (argmax keeps the
    first of equal scores over the ascending class order).
    """
    return gnb_fit(train).predict(x)


@dataclass(eq=False)
class FoldModels:
    """Everything fitted on one training split."""

    fisher: FisherProjection
    csom: CsomModel | None
    som: SomMap | None
    train_features: Dataset  # transformed training split (classifier input)
    gnb: GaussianNbModel | None


def _transform(cfg: ExperimentConfig, models: FoldModels, data: Dataset) -> Dataset:
    z = project_dataset(models.fisher, data)
    if cfg.pipeline == "raw":
        return z
    if cfg.pipeline.startswith("som"):
        fn = replace_with_prototypes if cfg.pipeline.endswith("replace") else append_prototypes
        return fn(models.som, z)
    fn = transform_replace if cfg.pipeline.endswith("replace") else transform_append
    return fn(models.csom, z)


def fit_fold(train_split: Dataset, cfg: ExperimentConfig) -> FoldModels:
    """Fit Fisher, the configured map(s), and the classifier on one split."""
    proj = fit_fisher(train_split, cfg.fisher_dim)
    z = project_dataset(proj, train_split)
    csom_model = None
    som_model = None
    if cfg.pipeline.startswith("csom"):
        csom_model = train_csom(z, cfg.map_rows, cfg.map_cols, cfg.schedule(z.n), jobs=cfg.jobs)
    elif cfg.pipeline.startswith("som"):
        som_model = init_map(cfg.map_rows, cfg.map_cols, z.dim, seed=cfg.seed, data=z)
        som_model = train(som_model, z, cfg.schedule(z.n))
    models = FoldModels(proj, csom_model, som_model, z, None)
    models.train_features = _transform(cfg, models, train_split)
    if cfg.classifier == "gnb":
        models.gnb = gnb_fit(models.train_features)
    return models


def predict_fold(models: FoldModels, test_split: Dataset, cfg: ExperimentConfig) -> np.ndarray:
    """Predict test labels; the transform never sees them."""
    feats = _transform(cfg, models, test_split.without_labels())
    if cfg.classifier == "knn":
        return np.array(
            [knn_predict(models.train_features, x, cfg.knn_k) for x in feats.X],
            dtype=np.int64,
        )
    return np.array([models.gnb.predict(x) for x in feats.X], dtype=np.int64)


def _score(
    class_ids: np.ndarray, truth: np.ndarray, preds: np.ndarray, confusion: np.ndarray
) -> float:
    pos = {int(c): i for i, c in enumerate(class_ids)}
    for t, p in zip(truth, preds):
        confusion[pos[int(t)], pos[int(p)]] += 1
    return float((truth == preds).mean())


def run_experiment(data: Dataset, cfg: ExperimentConfig) -> EvaluationReport:
    """Evaluate one pipeline/classifier combination on a labeled dataset.

    ``cv`` mode runs stratified k-fold cross-validation; ``holdout`` mode
    reserves per-class counts (HOLDOUT_FRACTION by default) for a single
    train/test split.  Deterministic given the config.
    """
    require_labels(data)
    class_ids = data.class_ids
    confusion = np.zeros((class_ids.size, class_ids.size), dtype=np.int64)
    if cfg.eval_mode == "holdout":
        splits = [holdout_split(data, cfg.holdout_counts, seed=cfg.seed)]
    else:
        splits = kfold_split(data, cfg.folds, seed=cfg.seed)
    accuracies = []
    for fold_i, (train_split, test_split) in enumerate(splits):
        if test_split.n == 0:
            raise DataError(f"fold {fold_i} has an empty test split")
        try:
            models = fit_fold(train_split, cfg)
            preds = predict_fold(models, test_split, cfg)
        except (DataError, ValueError) as exc:
            raise DataError(f"fold {fold_i}: {exc}") from exc
        accuracies.append(_score(class_ids, test_split.labels, preds, confusion))
    return EvaluationReport(
        pipeline=cfg.pipeline,
        classifier=cfg.classifier,
        eval_mode=cfg.eval_mode,
        class_ids=class_ids,
        fold_accuracies=accuracies,
        confusion=confusion,
        config=asdict(cfg),
    )
