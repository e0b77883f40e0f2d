"""Bilingual question catalog backing the screening service and UI."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

SUPPORTED_LOCALES = ("en", "hi")


@dataclass(frozen=True)
class CatalogItem:
    code: str
    kind: str  # choice | number
    text_en: str
    text_hi: str
    options: tuple[dict, ...]  # {value, encoding, label_en, label_hi}

    def text(self, locale: str) -> str:
        return self.text_en if locale == "en" else self.text_hi

    def localized(self, locale: str) -> dict:
        return {
            "code": self.code,
            "kind": self.kind,
            "text": self.text(locale),
            "options": [
                {"value": o["value"], "encoding": o["encoding"], "label": o[f"label_{locale}"]}
                for o in self.options
            ],
        }


@dataclass(frozen=True)
class QuestionCatalog:
    version: str
    items: tuple[CatalogItem, ...]

    def codes(self) -> list[str]:
        return [item.code for item in self.items]

    def subset(self, codes) -> "QuestionCatalog":
        wanted = set(codes)
        missing = wanted - set(self.codes())
        if missing:
            raise ValueError(f"catalog has no items for codes: {sorted(missing)}")
        return QuestionCatalog(
            self.version, tuple(item for item in self.items if item.code in wanted)
        )

    def localized(self, locale: str, mask=None) -> dict:
        if locale not in SUPPORTED_LOCALES:
            raise ValueError(f"unsupported locale {locale!r}")
        catalog = self if mask is None else self.subset(mask)
        return {
            "version": catalog.version,
            "locale": locale,
            "items": [item.localized(locale) for item in catalog.items],
        }


def catalog_from_dict(doc: dict) -> QuestionCatalog:
    items = tuple(
        CatalogItem(
            code=i["code"],
            kind=i["kind"],
            text_en=i["text_en"],
            text_hi=i["text_hi"],
            options=tuple(i.get("options", [])),
        )
        for i in doc["items"]
    )
    for item in items:
        if not item.text_en or not item.text_hi:
            raise ValueError(f"catalog item {item.code!r} is missing a localized text")
    return QuestionCatalog(version=str(doc["version"]), items=items)


def load_catalog(path=None) -> QuestionCatalog:
    """Load a catalog file, or the one shipped with the package."""
    if path is not None:
        with open(path, encoding="utf-8") as handle:
            return catalog_from_dict(json.load(handle))
    raw = resources.files("amiscreen.resources").joinpath("question_catalog.json").read_text("utf-8")
    return catalog_from_dict(json.loads(raw))
