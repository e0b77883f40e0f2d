"""Seeded synthetic datasets for tests and pipeline dry runs.

Two Gaussian class-conditional clouds; informative features get a
class-mean gap of ``separation`` standard deviations, the rest are
label-independent. Binary schema columns are thresholded at the midpoint
so they land in {0, 1}.

Draw order is fixed (labels, feature matrix, shared noise factor) and all
randomness comes from one PCG64 generator seeded with the spec's integer
seed, so a spec reproduces bit-identical datasets across runs and
platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .schema import FeatureSpec


@dataclass(frozen=True)
class SyntheticSpec:
    n_rows: int
    n_features: int
    separation: float = 1.0
    seed: int = 0
    label_balance: float = 0.5
    n_informative: int | None = None

    def __post_init__(self):
        if self.n_rows < 2:
            raise ValueError("n_rows must be at least 2")
        if self.n_features < 1:
            raise ValueError("n_features must be at least 1")
        if self.separation < 0:
            raise ValueError("separation must be non-negative")
        if not 0.0 < self.label_balance < 1.0:
            raise ValueError("label_balance must lie strictly between 0 and 1")
        if self.n_informative is not None and not 0 <= self.n_informative <= self.n_features:
            raise ValueError("n_informative must lie in [0, n_features]")


def _generic_schema(n_features: int) -> tuple[FeatureSpec, ...]:
    width = max(2, len(str(n_features - 1)))
    return tuple(
        FeatureSpec(f"f{i:0{width}d}", "numeric", "demographic", "synthetic feature")
        for i in range(n_features)
    )


def informative_mask(spec: SyntheticSpec) -> np.ndarray:
    """Boolean mask of which columns carry class signal (leading columns)."""
    k = spec.n_features if spec.n_informative is None else spec.n_informative
    mask = np.zeros(spec.n_features, dtype=bool)
    mask[:k] = True
    return mask


def generate_synthetic(spec: SyntheticSpec, schema=None) -> Dataset:
    """Draw a deterministic dataset for the given spec.

    When a schema is supplied its length must equal ``n_features``; binary
    columns are thresholded to {0, 1}, ordinal columns to {0, 1, 2, 3}.
    """
    if schema is not None and len(schema) != spec.n_features:
        raise ValueError("schema length must equal n_features")
    rng = np.random.default_rng(spec.seed)

    n_pos = int(np.floor(spec.label_balance * spec.n_rows + 0.5))
    n_pos = min(max(n_pos, 1), spec.n_rows - 1)
    y = np.zeros(spec.n_rows, dtype=int)
    y[:n_pos] = 1
    rng.shuffle(y)

    mask = informative_mask(spec)
    shift = np.where(mask, spec.separation / 2.0, 0.0)
    latent = rng.standard_normal((spec.n_rows, spec.n_features))
    if not mask.all():
        # Non-informative items share a latent response-style factor, like
        # the redundancy of real questionnaire items; they stay unit-variance
        # and label-independent.
        factor = rng.standard_normal(spec.n_rows)
        w = np.sqrt(0.8)
        latent[:, ~mask] = np.sqrt(1.0 - w ** 2) * latent[:, ~mask] + w * factor[:, None]
    latent += np.where(y[:, None] == 1, shift[None, :], -shift[None, :])

    if schema is None:
        schema = _generic_schema(spec.n_features)
        X = latent
    else:
        schema = tuple(schema)
        X = latent.copy()
        for c, fs in enumerate(schema):
            if fs.kind == "binary":
                X[:, c] = (latent[:, c] > 0.0).astype(float)
            elif fs.kind == "ordinal-response":
                X[:, c] = np.clip(np.floor(latent[:, c] + 2.0), 0, 3)
    return Dataset(schema, X, y)


def separable_blobs(
    n_rows: int, n_features: int, margin: float = 2.0, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Linearly separable cloud with a guaranteed geometric margin.

    Every row satisfies |u . x| >= margin/2 along a fixed unit direction u,
    with the sign matching its label, so any correct linear separator
    through the origin attains 100% accuracy.
    """
    rng = np.random.default_rng(seed)
    u = np.zeros(n_features)
    u[0] = 1.0
    y = (np.arange(n_rows) % 2).astype(int)
    rng.shuffle(y)
    sign = np.where(y == 1, 1.0, -1.0)
    X = rng.standard_normal((n_rows, n_features))
    # Replace the u-component with a margin-respecting offset.
    X[:, 0] = sign * (margin / 2.0 + np.abs(rng.standard_normal(n_rows)))
    return X, y
