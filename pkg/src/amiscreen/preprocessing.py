"""Column-wise standardization and [0, 1] scaling with persisted parameters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StandardizerParams:
    mean: np.ndarray
    std: np.ndarray  # population standard deviation, divisor N

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        std = np.asarray(self.std, dtype=float)
        if mean.shape != std.shape or mean.ndim != 1:
            raise ValueError("mean and std must be 1-D and the same length")
        if (std < 0).any():
            raise ValueError("std must be non-negative")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std", std)


@dataclass(frozen=True)
class MinMaxParams:
    min: np.ndarray
    max: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.min, dtype=float)
        hi = np.asarray(self.max, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("min and max must be 1-D and the same length")
        if (lo > hi).any():
            raise ValueError("min must not exceed max")
        object.__setattr__(self, "min", lo)
        object.__setattr__(self, "max", hi)


def _check_columns(X: np.ndarray, n_cols: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D matrix")
    if X.shape[1] != n_cols:
        raise ValueError(f"X has {X.shape[1]} columns, fitted parameters have {n_cols}")
    return X


def fit_standardizer(X: np.ndarray) -> StandardizerParams:
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        raise ValueError("cannot fit on an empty matrix")
    return StandardizerParams(mean=X.mean(axis=0), std=X.std(axis=0))


def transform_standardize(X: np.ndarray, p: StandardizerParams) -> np.ndarray:
    """z = (x - mean) / std per column; zero-variance columns map to 0."""
    X = _check_columns(X, p.mean.shape[0])
    safe = np.where(p.std > 0.0, p.std, 1.0)
    z = (X - p.mean) / safe
    z[:, p.std == 0.0] = 0.0
    return z


def fit_minmax(X: np.ndarray) -> MinMaxParams:
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        raise ValueError("cannot fit on an empty matrix")
    return MinMaxParams(min=X.min(axis=0), max=X.max(axis=0))


def transform_minmax(X: np.ndarray, p: MinMaxParams) -> np.ndarray:
    """(x - min) / (max - min) per column; zero-range columns map to 0.

    Values outside the fitted range are not clipped, so transforms of unseen
    rows may leave [0, 1]; clipping would break monotonicity.
    """
    X = _check_columns(X, p.min.shape[0])
    span = p.max - p.min
    safe = np.where(span > 0.0, span, 1.0)
    out = (X - p.min) / safe
    out[:, span == 0.0] = 0.0
    return out


@dataclass(frozen=True)
class ScalerParams:
    """The fitted two-stage pipeline: standardize, then scale to [0, 1]."""

    standardizer: StandardizerParams
    minmax: MinMaxParams
    standardize_numeric_only: bool = False
    numeric_columns: tuple[int, ...] = ()

    @property
    def n_columns(self) -> int:
        return self.standardizer.mean.shape[0]


def fit_scalers(
    X: np.ndarray,
    standardize_numeric_only: bool = False,
    numeric_columns: tuple[int, ...] = (),
) -> ScalerParams:
    """Fit both stages on the same rows.

    By default every column is standardized before min-max scaling. With
    ``standardize_numeric_only`` the first stage touches only the listed
    columns (the alternative reading of the pipeline's step order) while
    min-max still covers all features.
    """
    X = np.asarray(X, dtype=float)
    std_params = fit_standardizer(X)
    if standardize_numeric_only:
        keep = np.ones(X.shape[1], dtype=bool)
        keep[list(numeric_columns)] = False
        mean = std_params.mean.copy()
        std = std_params.std.copy()
        mean[keep] = 0.0
        std[keep] = 1.0
        std_params = StandardizerParams(mean=mean, std=std)
    stage1 = transform_standardize(X, std_params)
    mm_params = fit_minmax(stage1)
    return ScalerParams(
        standardizer=std_params,
        minmax=mm_params,
        standardize_numeric_only=standardize_numeric_only,
        numeric_columns=tuple(numeric_columns),
    )


def apply_scalers(X: np.ndarray, params: ScalerParams) -> np.ndarray:
    return transform_minmax(transform_standardize(X, params.standardizer), params.minmax)
