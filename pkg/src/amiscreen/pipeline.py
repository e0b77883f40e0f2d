"""End-to-end training and prediction on top of the library pieces.

The default run reenacts the production protocol: stratified 80:20 split,
the shipped 20-item voted feature mask, scalers fitted on training rows,
exhaustive grid search with stratified 5-fold CV, and a refit of the best
configuration on the full training split, bundled into an artifact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .artifact import ModelArtifact
from .classifiers import ClassifierSpec
from .data import Dataset, encode_cell, stratified_split
from .errors import SchemaError
from .model_selection import (
    PRESET_GRIDS,
    ParamGrid,
    SearchResult,
    fit_fold_pipeline,
    grid_search,
    make_folds,
)
from .preprocessing import apply_scalers
from .schema import FeatureSpec, schema_hash
from .selection import DEFAULT_FEATURE_MASK

DEFAULT_KS = (10, 15, 20, 25, 30)


@dataclass(frozen=True)
class PipelineConfig:
    ks: tuple[int, ...] = DEFAULT_KS
    vote_threshold: int | None = None  # None = unanimous
    family: str = "SVM"
    grid: str | None = None  # preset name; None = family preset
    n_folds: int = 5
    test_fraction: float = 0.2
    seed: int = 0
    mask: tuple[str, ...] | str = "default"  # "default" | "all" | explicit codes
    metric: str = "accuracy"
    stratify_folds: bool = True
    extra_metadata: dict = field(default_factory=dict)


def resolve_mask(config: PipelineConfig, schema) -> tuple[str, ...]:
    codes = [s.code for s in schema]
    if config.mask == "all":
        return tuple(codes)
    if config.mask == "default":
        if all(code in codes for code in DEFAULT_FEATURE_MASK):
            return tuple(c for c in codes if c in DEFAULT_FEATURE_MASK)
        return tuple(codes)
    mask = tuple(config.mask)
    unknown = [c for c in mask if c not in codes]
    if unknown:
        raise SchemaError(f"mask codes not in schema: {unknown}")
    return mask


def train_pipeline(
    data: Dataset, config: PipelineConfig
) -> tuple[ModelArtifact, SearchResult, Dataset, Dataset]:
    """Split, mask, search, refit; returns (artifact, search, train, test)."""
    train, test = stratified_split(data, config.test_fraction, config.seed)
    mask = resolve_mask(config, data.schema)
    masked = train.select_columns(list(mask))
    plan = make_folds(masked.y, config.n_folds, config.seed, stratify=config.stratify_folds)

    grid_name = config.grid or config.family
    grid: ParamGrid = PRESET_GRIDS[grid_name]
    if grid.candidates() == [{}]:
        # Nothing to tune: direct fit, zero search candidates.
        spec = ClassifierSpec(config.family, {}, config.seed)
        scalers, model = fit_fold_pipeline(spec, masked.X, masked.y)
        search = SearchResult(
            family=config.family, candidates=[], best_index=-1, best_spec=spec,
            best_mean_score=float("nan"), best_model=model, refit_scalers=scalers,
        )
    else:
        search = grid_search(
            grid, masked.X, masked.y, plan, metric=config.metric, seed=config.seed
        )

    metadata = {
        "seed": config.seed,
        "n_folds": config.n_folds,
        "test_fraction": config.test_fraction,
        "grid_preset": grid_name,
        "cv_score": None if np.isnan(search.best_mean_score) else search.best_mean_score,
        **config.extra_metadata,
    }
    artifact = ModelArtifact(
        schema_hash=schema_hash(data.schema),
        scalers=search.refit_scalers,
        mask=mask,
        spec=search.best_spec,
        model=search.best_model,
        metadata=metadata,
    )
    return artifact, search, train, test


def refit_only(data: Dataset, config: PipelineConfig, spec: ClassifierSpec) -> ModelArtifact:
    """Fit one fixed spec on all rows of ``data`` (no search, no split)."""
    mask = resolve_mask(config, data.schema)
    masked = data.select_columns(list(mask))
    scalers, model = fit_fold_pipeline(spec, masked.X, masked.y)
    return ModelArtifact(
        schema_hash=schema_hash(data.schema),
        scalers=scalers,
        mask=mask,
        spec=spec,
        model=model,
        metadata={"seed": config.seed, "grid_preset": None, "cv_score": None},
    )


def encode_answer_rows(
    rows: list[dict], mask: tuple[str, ...], schema
) -> np.ndarray:
    """Encode raw answer maps (code -> value) into mask order.

    Values may be vocabulary strings or already-numeric encodings. Missing
    or unknown codes raise SchemaError naming them.
    """
    spec_of: dict[str, FeatureSpec] = {s.code: s for s in schema}
    unknown_mask = [c for c in mask if c not in spec_of]
    if unknown_mask:
        raise SchemaError(f"mask codes not in schema: {unknown_mask}")

    out = np.empty((len(rows), len(mask)), dtype=float)
    for r, row in enumerate(rows):
        missing = [c for c in mask if c not in row]
        if missing:
            raise SchemaError(f"row {r} is missing answers for: {missing}")
        extra = [c for c in row if c not in mask]
        if extra:
            raise SchemaError(f"row {r} has answers for unknown codes: {sorted(extra)}")
        for c, code in enumerate(mask):
            value = row[code]
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                out[r, c] = float(value)
            else:
                out[r, c] = encode_cell(str(value), spec_of[code], row=r)
    return out


def evaluate_artifact(artifact: ModelArtifact, d: Dataset, phase: str):
    """EvaluationReport of an artifact on a dataset slice (mask applied)."""
    from .evaluation import evaluate

    masked = d.select_columns(list(artifact.mask))
    scaled = apply_scalers(masked.X, artifact.scalers)
    return evaluate(artifact.model, scaled, masked.y, phase)
