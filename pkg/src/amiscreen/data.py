"""Dataset container, CSV ingestion, response encoding, stratified splitting."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, SchemaError, StratificationError
from .schema import (
    DROPPED_COLUMNS,
    FeatureSpec,
    ID_COLUMN,
    LABEL_ENCODING,
    TARGET_COLUMN,
    schema_codes,
    validate_schema,
)


@dataclass(frozen=True)
class Dataset:
    """An immutable feature matrix with its schema and binary labels.

    Rows of ``X`` follow the schema's column order; ``y`` holds 1 for the
    positive class (condition of interest) and 0 otherwise.
    """

    schema: tuple[FeatureSpec, ...]
    X: np.ndarray
    y: np.ndarray
    ids: tuple[str, ...] | None = None

    def __post_init__(self):
        validate_schema(self.schema)
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=int)
        if X.ndim != 2:
            raise ValueError("X must be a 2-D matrix")
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"row mismatch: X has {X.shape[0]} rows, y has {y.shape[0]}")
        if X.shape[1] != len(self.schema):
            raise ValueError(
                f"column mismatch: X has {X.shape[1]} columns, schema has {len(self.schema)}"
            )
        if not np.isin(y, (0, 1)).all():
            bad = sorted(set(y.tolist()) - {0, 1})
            raise ValueError(f"labels must be 0/1, found {bad}")
        if np.isnan(X).any():
            raise ValueError("X contains missing cells")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if self.ids is not None:
            object.__setattr__(self, "ids", tuple(self.ids))

    @property
    def codes(self) -> list[str]:
        return schema_codes(self.schema)

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    def take(self, rows: np.ndarray) -> "Dataset":
        ids = tuple(self.ids[i] for i in rows) if self.ids is not None else None
        return Dataset(self.schema, self.X[rows], self.y[rows], ids)

    def select_columns(self, codes: list[str]) -> "Dataset":
        index = {s.code: i for i, s in enumerate(self.schema)}
        missing = [c for c in codes if c not in index]
        if missing:
            raise SchemaError(f"unknown feature codes: {missing}")
        cols = [index[c] for c in codes]
        schema = tuple(self.schema[i] for i in cols)
        return Dataset(schema, self.X[:, cols], self.y, self.ids)


def _parse_label(raw: str, row: int) -> int:
    value = raw.strip()
    if value not in LABEL_ENCODING:
        raise ParseError(
            f"row {row}: target value {value!r} is not one of {sorted(LABEL_ENCODING)}",
            row=row,
            column=TARGET_COLUMN,
        )
    return LABEL_ENCODING[value]


def encode_cell(raw: str, spec: FeatureSpec, row: int | None = None) -> float:
    """Encode one raw answer according to its feature's kind and vocabulary."""
    value = raw.strip()
    if value == "":
        raise ParseError(
            f"empty cell in column {spec.code!r}" + (f" at row {row}" if row is not None else ""),
            row=row,
            column=spec.code,
        )
    if spec.kind == "numeric":
        try:
            return float(value)
        except ValueError:
            raise ParseError(
                f"non-numeric value {value!r} in numeric column {spec.code!r}"
                + (f" at row {row}" if row is not None else ""),
                row=row,
                column=spec.code,
            ) from None
    if spec.kind == "binary":
        key = value.lower()
        if key in spec.vocabulary:
            return spec.vocabulary[key]
        # Already-encoded exports carry 0/1 literals.
        if value in ("0", "1", "0.0", "1.0"):
            return float(value)
        raise ParseError(
            f"answer {value!r} is not in the vocabulary of {spec.code!r} "
            f"({sorted(spec.vocabulary)})",
            row=row,
            column=spec.code,
        )
    # ordinal-response: small non-negative integers
    try:
        number = float(value)
    except ValueError:
        raise ParseError(
            f"answer {value!r} in ordinal column {spec.code!r} is not an integer",
            row=row,
            column=spec.code,
        ) from None
    if number < 0 or number != int(number):
        raise ParseError(
            f"answer {value!r} in ordinal column {spec.code!r} must be a small "
            "non-negative integer",
            row=row,
            column=spec.code,
        )
    return number


def decode_cell(value: float, spec: FeatureSpec) -> str:
    """Inverse of :func:`encode_cell` for round-tripping tables."""
    if spec.kind == "binary" and spec.vocabulary:
        for raw, encoded in spec.vocabulary.items():
            if encoded == value:
                return raw
        raise ValueError(f"value {value!r} has no vocabulary entry in {spec.code!r}")
    if value == int(value):
        return str(int(value))
    return repr(value)


def encode_responses(raw: list[dict[str, str]], schema) -> np.ndarray:
    """Encode a table of raw answer strings to a numeric matrix in schema order."""
    validate_schema(schema)
    out = np.empty((len(raw), len(schema)), dtype=float)
    for r, record in enumerate(raw):
        for c, spec in enumerate(schema):
            if spec.code not in record:
                raise SchemaError(f"row {r} is missing column {spec.code!r}")
            out[r, c] = encode_cell(record[spec.code], spec, row=r)
    return out


def decode_responses(X: np.ndarray, schema) -> list[dict[str, str]]:
    X = np.asarray(X, dtype=float)
    if X.shape[1] != len(schema):
        raise ValueError("column count does not match schema")
    return [
        {spec.code: decode_cell(X[r, c], spec) for c, spec in enumerate(schema)}
        for r in range(X.shape[0])
    ]


def load_csv(path, schema=None) -> Dataset:
    """Ingest a raw questionnaire export.

    Drops the ID and tool-result columns when present, maps the target
    column to 1/0, validates every remaining column against the schema,
    and rejects rows with missing cells.
    """
    from .schema import DEFAULT_SCHEMA

    schema = tuple(schema) if schema is not None else DEFAULT_SCHEMA
    validate_schema(schema)
    wanted = {s.code: s for s in schema}

    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, header row required") from None
        header = [h.strip() for h in header]
        if TARGET_COLUMN not in header:
            raise SchemaError(f"missing target column {TARGET_COLUMN!r}")
        extra = [
            h for h in header
            if h not in wanted and h != TARGET_COLUMN and h not in DROPPED_COLUMNS
        ]
        if extra:
            raise SchemaError(f"unknown extra columns: {extra}")
        missing = [c for c in wanted if c not in header]
        if missing:
            raise SchemaError(f"columns required by the schema are absent: {missing}")

        col_of = {name: i for i, name in enumerate(header)}
        target_col = col_of[TARGET_COLUMN]
        id_col = col_of.get(ID_COLUMN)

        rows: list[list[float]] = []
        labels: list[int] = []
        ids: list[str] = []
        for r, record in enumerate(reader):
            if len(record) != len(header):
                raise ParseError(f"row {r}: expected {len(header)} cells, got {len(record)}", row=r)
            labels.append(_parse_label(record[target_col], r))
            rows.append([encode_cell(record[col_of[s.code]], s, row=r) for s in schema])
            if id_col is not None:
                ids.append(record[id_col].strip())

    X = np.array(rows, dtype=float).reshape(len(rows), len(schema))
    y = np.array(labels, dtype=int)
    return Dataset(schema, X, y, tuple(ids) if ids else None)


def stratified_split(d: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Split rows into train/test with per-class proportions within ±1 row.

    The total test size is round(test_fraction * n); per-class quotas are
    allocated largest-remainder so the class balance of each part tracks the
    whole. Deterministic for a fixed seed.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie strictly between 0 and 1")
    y = d.y
    classes = np.unique(y)
    if classes.size < 2:
        raise StratificationError("both classes must be present to stratify")

    n = y.shape[0]
    n_test = int(np.floor(test_fraction * n + 0.5))
    n_test = min(max(n_test, 1), n - 1)

    counts = {int(c): int((y == c).sum()) for c in classes}
    quota = {c: test_fraction * m for c, m in counts.items()}
    base = {c: int(np.floor(q)) for c, q in quota.items()}
    short = n_test - sum(base.values())
    # Hand leftover slots to the largest fractional remainders (ties: lower label).
    order = sorted(counts, key=lambda c: (-(quota[c] - base[c]), c))
    take = dict(base)
    for c in order[:short]:
        take[c] += 1
    for c in counts:
        take[c] = min(take[c], counts[c])

    rng = np.random.default_rng(seed)
    test_rows: list[np.ndarray] = []
    train_rows: list[np.ndarray] = []
    for c in sorted(counts):
        members = np.flatnonzero(y == c)
        perm = rng.permutation(members)
        test_rows.append(perm[: take[c]])
        train_rows.append(perm[take[c]:])
    test_idx = np.sort(np.concatenate(test_rows))
    train_idx = np.sort(np.concatenate(train_rows))
    return d.take(train_idx), d.take(test_idx)
