import csv

import numpy as np
import pytest

from amiscreen.data import Dataset
from amiscreen.schema import DEFAULT_SCHEMA, TARGET_COLUMN
from amiscreen.synthetic import SyntheticSpec, generate_synthetic


@pytest.fixture
def ami_dataset() -> Dataset:
    """Questionnaire-shaped synthetic data: 225 rows, 128 positive."""
    spec = SyntheticSpec(
        n_rows=225, n_features=30, separation=2.0, seed=42, label_balance=128 / 225
    )
    return generate_synthetic(spec, schema=DEFAULT_SCHEMA)


@pytest.fixture
def small_dataset() -> Dataset:
    spec = SyntheticSpec(n_rows=60, n_features=6, separation=2.5, seed=7)
    return generate_synthetic(spec)


def write_ami_csv(path, n_rows=60, seed=3, with_id=True, with_tool_columns=True):
    """A raw questionnaire export in the ingestion format."""
    rng = np.random.default_rng(seed)
    header = []
    if with_id:
        header.append("Patient ID")
    header += [s.code for s in DEFAULT_SCHEMA]
    if with_tool_columns:
        header += ["New final tool ASD", "New final Summary ASD"]
    header.append(TARGET_COLUMN)

    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for i in range(n_rows):
            label = "ASD" if rng.random() < 0.55 else "TD"
            row = []
            if with_id:
                row.append(f"P{i:04d}")
            for spec in DEFAULT_SCHEMA:
                if spec.code == "Age in months":
                    row.append(str(int(rng.integers(18, 96))))
                elif spec.code == "Gender":
                    row.append(rng.choice(["male", "female"]))
                else:
                    skew = 0.7 if label == "ASD" else 0.3
                    row.append("yes" if rng.random() < skew else "no")
            if with_tool_columns:
                row += [label, label]
            row.append(label)
            writer.writerow(row)
    return path
