"""HTTP screening service: the question catalog and model predictions.

The artifact and catalog are loaded once at startup and never mutated;
request handling is stateless and submitted answers are not stored
anywhere. Responses carry a non-diagnostic disclaimer.
"""

from __future__ import annotations

import time

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse

from ..artifact import ModelArtifact
from ..catalog import SUPPORTED_LOCALES, QuestionCatalog, load_catalog
from ..data import encode_cell
from ..errors import ParseError
from ..schema import DEFAULT_SCHEMA, LABEL_ENCODING, NEGATIVE_LABEL, POSITIVE_LABEL
from .schemas import (
    CatalogResponse,
    FieldIssue,
    HealthResponse,
    ScreeningRequest,
    ScreeningResponse,
)

DISCLAIMER = (
    "This is a preliminary screening aid, not a medical diagnosis. "
    "Please consult a qualified clinician for a formal assessment."
)


class ServiceState:
    def __init__(self, artifact: ModelArtifact | None, catalog: QuestionCatalog | None,
                 serve_full_catalog: bool = False):
        self.artifact = artifact
        self.catalog = catalog
        self.serve_full_catalog = serve_full_catalog
        self.started_at = time.monotonic()
        self.spec_of = {s.code: s for s in DEFAULT_SCHEMA}
        if artifact is not None and catalog is not None:
            missing = set(artifact.mask) - set(catalog.codes())
            if missing:
                raise ValueError(
                    f"catalog does not cover the artifact's feature mask: {sorted(missing)}"
                )

    @property
    def ready(self) -> bool:
        return self.artifact is not None and self.catalog is not None

    def served_codes(self) -> list[str]:
        if self.serve_full_catalog:
            return self.catalog.codes()
        return list(self.artifact.mask)


def _encode_answers(state: ServiceState, answers: dict) -> np.ndarray:
    mask = list(state.artifact.mask)
    issues: list[FieldIssue] = []
    for code in mask:
        if code not in answers:
            issues.append(FieldIssue(code=code, problem="missing answer"))
    for code in answers:
        if code not in mask:
            issues.append(FieldIssue(code=code, problem="not part of the questionnaire"))
    row = np.empty(len(mask))
    if not issues:
        for c, code in enumerate(mask):
            value = answers[code]
            spec = state.spec_of.get(code)
            try:
                if isinstance(value, (int, float)) and not isinstance(value, bool):
                    row[c] = float(value)
                elif spec is None:
                    row[c] = float(value)
                else:
                    row[c] = encode_cell(str(value), spec)
            except (ParseError, ValueError) as exc:
                issues.append(FieldIssue(code=code, problem=str(exc)))
    if issues:
        raise HTTPException(
            status_code=422,
            detail={
                "detail": "request answers failed validation",
                "issues": [i.model_dump() for i in issues],
            },
        )
    return row.reshape(1, -1)


def create_app(
    artifact_path=None,
    catalog_path=None,
    serve_full_catalog: bool = False,
    artifact: ModelArtifact | None = None,
    catalog: QuestionCatalog | None = None,
) -> FastAPI:
    if artifact is None and artifact_path is not None:
        artifact = ModelArtifact.load(artifact_path)
    if catalog is None:
        try:
            catalog = load_catalog(catalog_path)
        except FileNotFoundError:
            catalog = None
    state = ServiceState(artifact, catalog, serve_full_catalog)

    app = FastAPI(title="amiscreen screening service", version="0.1.0")
    app.state.screening = state

    def require_ready() -> ServiceState:
        if not state.ready:
            raise HTTPException(status_code=503, detail="screening model is not loaded")
        return state

    @app.get("/health", response_model=HealthResponse)
    def health():
        if not state.ready:
            return JSONResponse(
                status_code=503,
                content={"status": "unavailable", "detail": "screening model is not loaded"},
            )
        return HealthResponse(
            status="ok",
            artifact_version=str(state.artifact.format_version),
            catalog_version=state.catalog.version,
            model_family=state.artifact.spec.family,
            uptime_seconds=time.monotonic() - state.started_at,
        )

    @app.get("/catalog", response_model=CatalogResponse)
    def catalog_endpoint(locale: str = Query("en")):
        st = require_ready()
        if locale not in SUPPORTED_LOCALES:
            raise HTTPException(
                status_code=400,
                detail={
                    "detail": f"unsupported locale {locale!r}",
                    "supported_locales": list(SUPPORTED_LOCALES),
                },
            )
        return st.catalog.localized(locale, mask=st.served_codes())

    @app.post("/screen", response_model=ScreeningResponse)
    def screen(request: ScreeningRequest):
        st = require_ready()
        row = _encode_answers(st, request.answers)
        labels, proba = st.artifact.predict_encoded(row)
        p1 = float(proba[0, 1])
        label = POSITIVE_LABEL if int(labels[0]) == LABEL_ENCODING[POSITIVE_LABEL] else NEGATIVE_LABEL
        return ScreeningResponse(
            label=label,
            probability=p1 if label == POSITIVE_LABEL else 1.0 - p1,
            probabilities={POSITIVE_LABEL: p1, NEGATIVE_LABEL: 1.0 - p1},
            model_family=st.artifact.spec.family,
            model_version=str(st.artifact.format_version),
            catalog_version=st.catalog.version,
            disclaimer=DISCLAIMER,
        )

    return app
