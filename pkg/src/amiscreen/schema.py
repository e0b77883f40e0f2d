"""Questionnaire schema: feature codes, kinds, answer vocabularies.

The screening instrument has 30 predictor columns: two demographics
(age in months, gender) and 28 yes/no items grouped by symptom domain.
The target column holds the expert diagnosis (ASD or TD). Two tool-result
columns that may appear in raw exports are never part of the predictor
schema and are dropped on ingestion.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .errors import SchemaError

SCHEMA_VERSION = "1"

TARGET_COLUMN = "DSM5 gold standard diagnosis"
ID_COLUMN = "Patient ID"
DROPPED_COLUMNS = ("Patient ID", "New final tool ASD", "New final Summary ASD")

POSITIVE_LABEL = "ASD"
NEGATIVE_LABEL = "TD"
LABEL_ENCODING = {POSITIVE_LABEL: 1, NEGATIVE_LABEL: 0}

KINDS = ("numeric", "binary", "ordinal-response")

DOMAIN_GROUPS = (
    "social-reciprocity",
    "nonverbal",
    "relationship",
    "stereotyped",
    "routine",
    "fixed-interest",
    "sensory",
    "demographic",
)

YES_NO = {"yes": 1.0, "no": 0.0}
GENDER = {"male": 1.0, "female": 0.0}


@dataclass(frozen=True)
class FeatureSpec:
    """One predictor column: its code, kind, domain group, and vocabulary.

    ``vocabulary`` maps accepted raw answer strings to their numeric
    encodings; it is empty for numeric columns (values pass through) and
    for ordinal-response columns (small non-negative integers accepted
    directly).
    """

    code: str
    kind: str
    domain_group: str
    description: str
    vocabulary: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown feature kind {self.kind!r}")
        if self.domain_group not in DOMAIN_GROUPS:
            raise ValueError(f"unknown domain group {self.domain_group!r}")


def _items(prefix: str, count: int, group: str, description: str) -> list[FeatureSpec]:
    return [
        FeatureSpec(f"{prefix}{i}", "binary", group, description, dict(YES_NO))
        for i in range(1, count + 1)
    ]


def _build_default_schema() -> tuple[FeatureSpec, ...]:
    specs = [
        FeatureSpec("Age in months", "numeric", "demographic", "Age of the child in months"),
        FeatureSpec("Gender", "binary", "demographic", "Child's gender", dict(GENDER)),
    ]
    specs += _items("New1a", 8, "social-reciprocity", "Social-emotional reciprocity item")
    specs += _items("New1b", 4, "nonverbal", "Non-verbal communication item")
    specs += _items("New1c", 3, "relationship", "Relationship item")
    specs += _items("New2a", 7, "stereotyped", "Stereotyped movement or speech item")
    specs.append(FeatureSpec("New2b", "binary", "routine", "Routine item", dict(YES_NO)))
    specs.append(FeatureSpec("New2c", "binary", "fixed-interest", "Fixed-interest item", dict(YES_NO)))
    specs += _items("New2d", 4, "sensory", "Sensory symptom item")
    return tuple(specs)


DEFAULT_SCHEMA: tuple[FeatureSpec, ...] = _build_default_schema()


def validate_schema(schema: tuple[FeatureSpec, ...] | list[FeatureSpec]) -> None:
    codes = [s.code for s in schema]
    if len(set(codes)) != len(codes):
        dupes = sorted({c for c in codes if codes.count(c) > 1})
        raise SchemaError(f"duplicate feature codes: {dupes}")


def schema_codes(schema) -> list[str]:
    return [s.code for s in schema]


def schema_to_dict(schema) -> dict:
    """JSON-ready view of a schema, used for the shipped catalog and hashing."""
    return {
        "version": SCHEMA_VERSION,
        "target": TARGET_COLUMN,
        "dropped": list(DROPPED_COLUMNS),
        "labels": dict(LABEL_ENCODING),
        "features": [
            {
                "code": s.code,
                "kind": s.kind,
                "domain_group": s.domain_group,
                "description": s.description,
                "vocabulary": s.vocabulary,
            }
            for s in schema
        ],
    }


def schema_from_dict(doc: dict) -> tuple[FeatureSpec, ...]:
    return tuple(
        FeatureSpec(
            code=f["code"],
            kind=f["kind"],
            domain_group=f["domain_group"],
            description=f.get("description", ""),
            vocabulary={k: float(v) for k, v in f.get("vocabulary", {}).items()},
        )
        for f in doc["features"]
    )


def schema_hash(schema) -> str:
    """Content hash binding artifacts to the schema they were trained with."""
    canonical = json.dumps(schema_to_dict(schema), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
