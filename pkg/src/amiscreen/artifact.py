"""Versioned binary model artifact.

Layout: 8-byte magic, u32 format version, u32 section count, then
length-prefixed sections (4-byte tag, u64 length, payload), all numbers
little-endian. Sections: HEAD (canonical JSON header), SCLR (fitted scaler
arrays), MASK (feature-code list), MODL (family payload: meta JSON plus
named arrays). Serialization is canonical so identical training runs
produce byte-identical files.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from typing import Any

import numpy as np

from .classifiers import MODEL_CLASSES, ClassifierSpec, TrainedClassifier
from .preprocessing import (
    MinMaxParams,
    ScalerParams,
    StandardizerParams,
    apply_scalers,
)

MAGIC = b"AMISCRN1"
FORMAT_VERSION = 1


def canonical_json(obj: Any) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def _pack_arrays(arrays: dict[str, np.ndarray]) -> bytes:
    chunks = [struct.pack("<I", len(arrays))]
    for name in sorted(arrays):
        arr = np.ascontiguousarray(arrays[name])
        if arr.dtype.kind == "f":
            arr = arr.astype("<f8")
        elif arr.dtype.kind in ("i", "u", "b"):
            arr = arr.astype("<i4")
        else:
            raise TypeError(f"array {name!r} has unsupported dtype {arr.dtype}")
        name_b = name.encode("utf-8")
        dtype_b = arr.dtype.str.encode("ascii")
        chunks.append(struct.pack("<H", len(name_b)) + name_b)
        chunks.append(struct.pack("<B", len(dtype_b)) + dtype_b)
        chunks.append(struct.pack("<B", arr.ndim))
        chunks.append(struct.pack(f"<{arr.ndim}Q", *arr.shape) if arr.ndim else b"")
        chunks.append(arr.tobytes(order="C"))
    return b"".join(chunks)


def _unpack_arrays(blob: bytes) -> dict[str, np.ndarray]:
    offset = 0
    (count,) = struct.unpack_from("<I", blob, offset)
    offset += 4
    arrays: dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_len,) = struct.unpack_from("<H", blob, offset)
        offset += 2
        name = blob[offset:offset + name_len].decode("utf-8")
        offset += name_len
        (dtype_len,) = struct.unpack_from("<B", blob, offset)
        offset += 1
        dtype = blob[offset:offset + dtype_len].decode("ascii")
        offset += dtype_len
        (ndim,) = struct.unpack_from("<B", blob, offset)
        offset += 1
        shape = struct.unpack_from(f"<{ndim}Q", blob, offset) if ndim else ()
        offset += 8 * ndim
        size = int(np.prod(shape)) if ndim else 1
        nbytes = size * np.dtype(dtype).itemsize
        arr = np.frombuffer(blob[offset:offset + nbytes], dtype=dtype).reshape(shape)
        offset += nbytes
        arrays[name] = arr.copy()
    return arrays


@dataclass
class ModelArtifact:
    """Everything the screening service needs to reproduce predictions."""

    schema_hash: str
    scalers: ScalerParams
    mask: tuple[str, ...]
    spec: ClassifierSpec
    model: TrainedClassifier
    metadata: dict[str, Any]
    format_version: int = FORMAT_VERSION

    def predict_encoded(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Labels and probabilities for rows already encoded in mask order."""
        scaled = apply_scalers(np.asarray(X, dtype=float), self.scalers)
        proba = self.model.predict_proba(scaled)
        labels = np.argmax(proba, axis=1) if proba.shape[0] else np.empty(0, dtype=int)
        return labels, proba

    def save(self, path) -> None:
        head = canonical_json({
            "format_version": self.format_version,
            "schema_hash": self.schema_hash,
            "family": self.spec.family,
            "hyperparameters": self.spec.hyperparameters,
            "seed": self.spec.seed,
            "n_features": self.model.n_features,
            "metadata": self.metadata,
            "standardize_numeric_only": self.scalers.standardize_numeric_only,
            "numeric_columns": list(self.scalers.numeric_columns),
        })
        sclr = _pack_arrays({
            "mean": self.scalers.standardizer.mean,
            "std": self.scalers.standardizer.std,
            "min": self.scalers.minmax.min,
            "max": self.scalers.minmax.max,
        })
        mask = canonical_json(list(self.mask))
        meta, arrays = self.model.payload()
        meta_b = canonical_json(meta)
        modl = struct.pack("<I", len(meta_b)) + meta_b + _pack_arrays(arrays)

        sections = [(b"HEAD", head), (b"SCLR", sclr), (b"MASK", mask), (b"MODL", modl)]
        with open(path, "wb") as handle:
            handle.write(MAGIC)
            handle.write(struct.pack("<I", self.format_version))
            handle.write(struct.pack("<I", len(sections)))
            for tag, payload in sections:
                handle.write(tag)
                handle.write(struct.pack("<Q", len(payload)))
                handle.write(payload)

    @classmethod
    def load(cls, path) -> "ModelArtifact":
        with open(path, "rb") as handle:
            blob = handle.read()
        if blob[:8] != MAGIC:
            raise ValueError(f"{path}: not a model artifact (bad magic bytes)")
        (version,) = struct.unpack_from("<I", blob, 8)
        if version > FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported artifact format version {version}")
        (n_sections,) = struct.unpack_from("<I", blob, 12)
        offset = 16
        sections: dict[bytes, bytes] = {}
        for _ in range(n_sections):
            tag = blob[offset:offset + 4]
            (length,) = struct.unpack_from("<Q", blob, offset + 4)
            offset += 12
            sections[tag] = blob[offset:offset + length]
            offset += length
        for tag in (b"HEAD", b"SCLR", b"MASK", b"MODL"):
            if tag not in sections:
                raise ValueError(f"{path}: missing {tag.decode()} section")

        head = json.loads(sections[b"HEAD"].decode("utf-8"))
        mask = tuple(json.loads(sections[b"MASK"].decode("utf-8")))
        s = _unpack_arrays(sections[b"SCLR"])
        scalers = ScalerParams(
            standardizer=StandardizerParams(mean=s["mean"], std=s["std"]),
            minmax=MinMaxParams(min=s["min"], max=s["max"]),
            standardize_numeric_only=head.get("standardize_numeric_only", False),
            numeric_columns=tuple(head.get("numeric_columns", [])),
        )
        modl = sections[b"MODL"]
        (meta_len,) = struct.unpack_from("<I", modl, 0)
        meta = json.loads(modl[4:4 + meta_len].decode("utf-8"))
        arrays = _unpack_arrays(modl[4 + meta_len:])

        spec = ClassifierSpec(head["family"], head["hyperparameters"], head["seed"])
        model = MODEL_CLASSES[spec.family].from_payload(
            spec, int(head["n_features"]), meta, arrays
        )
        return cls(
            schema_hash=head["schema_hash"],
            scalers=scalers,
            mask=mask,
            spec=spec,
            model=model,
            metadata=head.get("metadata", {}),
            format_version=version,
        )
