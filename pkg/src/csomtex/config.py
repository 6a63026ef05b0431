"""JSON tool configuration shared by the command-line entry points.

Every setting has a default, so ``{}`` is a valid config.  Unknown keys
raise ValueError: silent typos in an experiment file are worse than a
hard stop.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DataError
from .evaluation import CLASSIFIERS, EVAL_MODES, PIPELINES, ExperimentConfig
from .imaging import PreprocessConfig
from .roi import RoiConfig
from .texture import TextureConfig

DEFAULT_PIPELINES = PIPELINES
DEFAULT_CLASSIFIERS = CLASSIFIERS


@dataclass(frozen=True)
class EvalColumn:
    """One column of the comparison table: a pipeline at a map size."""

    pipeline: str
    rows: int
    cols: int
    label: str

    def __post_init__(self) -> None:
        if self.pipeline not in PIPELINES:
            raise ValueError(
                f"unknown pipeline {self.pipeline!r}; valid names: {', '.join(PIPELINES)}"
            )
        if self.rows < 1 or self.cols < 1:
            raise ValueError("map grid dimensions must be >= 1")
        if not self.label:
            raise ValueError("column label must be non-empty")


@dataclass
class ToolConfig:
    seed: int = 0
    jobs: int = 1
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    roi: RoiConfig = field(default_factory=RoiConfig)
    texture: TextureConfig = field(default_factory=TextureConfig)
    fisher_dim: int | None = None
    map_rows: int = 5
    map_cols: int = 5
    steps_per_sample: int = 100
    alpha0: float = 0.5
    alpha_final: float = 0.01
    sigma0: float | None = None
    sigma_final: float = 0.5
    classifier: str = "knn"
    knn_k: int = 1
    folds: int = 10
    columns: tuple | None = None  # None: every pipeline at the config map size
    classifiers: tuple = DEFAULT_CLASSIFIERS
    eval_seeds: tuple = (0,)
    eval_mode: str = "cv"
    holdout_counts: dict | None = None

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.map_rows < 1 or self.map_cols < 1:
            raise ValueError("map grid dimensions must be >= 1")
        if self.classifier not in CLASSIFIERS:
            raise ValueError(f"classifier must be one of {CLASSIFIERS}")
        if self.eval_mode not in EVAL_MODES:
            raise ValueError(f"eval_mode must be one of {EVAL_MODES}")
        if self.columns is None:
            self.columns = tuple(
                EvalColumn(p, self.map_rows, self.map_cols, p) for p in DEFAULT_PIPELINES
            )
        labels = [c.label for c in self.columns]
        if len(set(labels)) != len(labels):
            raise ValueError("evaluate column labels must be unique")
        for c in self.classifiers:
            if c not in CLASSIFIERS:
                raise ValueError(
                    f"unknown classifier {c!r}; valid names: {', '.join(CLASSIFIERS)}"
                )
        if not self.columns or not self.classifiers or not self.eval_seeds:
            raise ValueError("columns, classifiers and eval_seeds must be non-empty")

    def experiment(self, column: EvalColumn, classifier: str, seed: int) -> ExperimentConfig:
        return ExperimentConfig(
            pipeline=column.pipeline,
            classifier=classifier,
            knn_k=self.knn_k,
            map_rows=column.rows,
            map_cols=column.cols,
            fisher_dim=self.fisher_dim,
            folds=self.folds,
            seed=seed,
            steps_per_sample=self.steps_per_sample,
            alpha0=self.alpha0,
            alpha_final=self.alpha_final,
            sigma0=self.sigma0,
            sigma_final=self.sigma_final,
            eval_mode=self.eval_mode,
            holdout_counts=self.holdout_counts,
            jobs=self.jobs,
        )


def _check_keys(section: str, given: dict, allowed: tuple) -> None:
    unknown = sorted(set(given) - set(allowed))
    if unknown:
        raise ValueError(f"unknown {section} config keys: {', '.join(unknown)}")


def _opt_int(d: dict, key: str, default):
    v = d.get(key, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"config key {key!r} must be an integer")
    return v


def _opt_num(d: dict, key: str, default):
    v = d.get(key, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"config key {key!r} must be a number")
    return float(v)


def _opt_bool(d: dict, key: str, default: bool) -> bool:
    v = d.get(key, default)
    if not isinstance(v, bool):
        raise ValueError(f"config key {key!r} must be a boolean")
    return v


def _opt_str(d: dict, key: str, default: str) -> str:
    v = d.get(key, default)
    if not isinstance(v, str):
        raise ValueError(f"config key {key!r} must be a string")
    return v


def _str_list(d: dict, key: str, default: tuple) -> tuple:
    v = d.get(key)
    if v is None:
        return default
    if not isinstance(v, list) or not all(isinstance(s, str) for s in v):
        raise ValueError(f"config key {key!r} must be a list of strings")
    return tuple(v)


def config_from_dict(raw: dict) -> ToolConfig:
    if not isinstance(raw, dict):
        raise ValueError("config root must be a JSON object")
    _check_keys(
        "top-level",
        raw,
        (
            "seed",
            "jobs",
            "preprocess",
            "roi",
            "texture",
            "fisher_dim",
            "map",
            "schedule",
            "classifier",
            "knn_k",
            "folds",
            "evaluate",
        ),
    )
    pre_raw = raw.get("preprocess", {})
    _check_keys("preprocess", pre_raw, ("crop", "threshold", "rescale"))
    preprocess = PreprocessConfig(
        crop=_opt_bool(pre_raw, "crop", True),
        threshold=_opt_int(pre_raw, "threshold", 0),
        rescale=_opt_bool(pre_raw, "rescale", True),
    )
    roi_raw = raw.get("roi", {})
    _check_keys("roi", roi_raw, ("mode", "sn", "block_size", "min_region_pixels"))
    roi = RoiConfig(
        mode=_opt_str(roi_raw, "mode", "pixelwise"),
        sn=_opt_int(roi_raw, "sn", 6),
        block_size=_opt_int(roi_raw, "block_size", 8),
        min_region_pixels=_opt_int(roi_raw, "min_region_pixels", 4),
    )
    tex_raw = raw.get("texture", {})
    _check_keys("texture", tex_raw, ("levels", "offsets", "symmetric"))
    offsets = tex_raw.get("offsets")
    if offsets is not None:
        if not isinstance(offsets, list) or not all(
            isinstance(o, list) and len(o) == 2 and all(isinstance(d, int) for d in o)
            for o in offsets
        ):
            raise ValueError("texture offsets must be a list of [dr, dc] integer pairs")
        offsets = tuple(tuple(o) for o in offsets)
    texture = TextureConfig(
        levels=_opt_int(tex_raw, "levels", 3),
        offsets=offsets if offsets is not None else TextureConfig().offsets,
        symmetric=_opt_bool(tex_raw, "symmetric", False),
    )
    map_raw = raw.get("map", {})
    _check_keys("map", map_raw, ("rows", "cols"))
    sched_raw = raw.get("schedule", {})
    _check_keys(
        "schedule",
        sched_raw,
        ("steps_per_sample", "alpha0", "alpha_final", "sigma0", "sigma_final"),
    )
    eval_raw = raw.get("evaluate", {})
    _check_keys(
        "evaluate",
        eval_raw,
        ("pipelines", "columns", "classifiers", "seeds", "mode", "holdout_counts"),
    )
    map_rows = _opt_int(map_raw, "rows", 5)
    map_cols = _opt_int(map_raw, "cols", 5)
    if "pipelines" in eval_raw and "columns" in eval_raw:
        raise ValueError("evaluate takes either pipelines or columns, not both")
    columns = None
    if "pipelines" in eval_raw:
        names = _str_list(eval_raw, "pipelines", ())
        columns = tuple(EvalColumn(p, map_rows, map_cols, p) for p in names)
    elif "columns" in eval_raw:
        cols_raw = eval_raw["columns"]
        if not isinstance(cols_raw, list) or not all(isinstance(c, dict) for c in cols_raw):
            raise ValueError("evaluate columns must be a list of objects")
        parsed = []
        for c in cols_raw:
            _check_keys("evaluate column", c, ("pipeline", "rows", "cols", "label"))
            pipeline = _opt_str(c, "pipeline", "")
            rows = _opt_int(c, "rows", map_rows)
            cols = _opt_int(c, "cols", map_cols)
            label = _opt_str(c, "label", f"{pipeline}@{rows}x{cols}")
            parsed.append(EvalColumn(pipeline, rows, cols, label))
        columns = tuple(parsed)
    seeds = eval_raw.get("seeds")
    if seeds is None:
        seeds = (0,)
    elif isinstance(seeds, list) and all(
        isinstance(s, int) and not isinstance(s, bool) for s in seeds
    ):
        seeds = tuple(seeds)
    else:
        raise ValueError("evaluate seeds must be a list of integers")
    holdout_counts = eval_raw.get("holdout_counts")
    if holdout_counts is not None:
        if not isinstance(holdout_counts, dict):
            raise ValueError("holdout_counts must map class ids to counts")
        try:
            holdout_counts = {int(k): int(v) for k, v in holdout_counts.items()}
        except (TypeError, ValueError) as exc:
            raise ValueError(f"holdout_counts must map class ids to counts: {exc}") from exc
    return ToolConfig(
        seed=_opt_int(raw, "seed", 0),
        jobs=_opt_int(raw, "jobs", 1),
        preprocess=preprocess,
        roi=roi,
        texture=texture,
        fisher_dim=_opt_int(raw, "fisher_dim", None),
        map_rows=map_rows,
        map_cols=map_cols,
        steps_per_sample=_opt_int(sched_raw, "steps_per_sample", 100),
        alpha0=_opt_num(sched_raw, "alpha0", 0.5),
        alpha_final=_opt_num(sched_raw, "alpha_final", 0.01),
        sigma0=_opt_num(sched_raw, "sigma0", None),
        sigma_final=_opt_num(sched_raw, "sigma_final", 0.5),
        classifier=_opt_str(raw, "classifier", "knn"),
        knn_k=_opt_int(raw, "knn_k", 1),
        folds=_opt_int(raw, "folds", 10),
        columns=columns,
        classifiers=_str_list(eval_raw, "classifiers", DEFAULT_CLASSIFIERS),
        eval_seeds=seeds,
        eval_mode=_opt_str(eval_raw, "mode", "cv"),
        holdout_counts=holdout_counts,
    )


def load_config(path) -> ToolConfig:
    """Read a JSON config file.  Malformed JSON is a data problem; invalid
    settings are usage problems (ValueError)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"config {path}: invalid JSON: {exc}") from exc
    try:
        return config_from_dict(raw)
    except ValueError as exc:
        raise ValueError(f"config {path}: {exc}") from exc
