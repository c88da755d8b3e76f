"""Benchmark manifests: style labels, image records, and pair selection."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable


class ManifestError(ValueError):
    """Raised when a manifest fails to parse or validate."""


class StyleId(str, Enum):
    REALISTIC_OIL = "realistic-oil"
    IMPRESSION = "impression"
    ABSTRACT = "abstract"
    INK_PAINTING = "ink-painting"
    CHINESE_FREEHAND = "chinese-freehand"
    ANIME = "anime"
    PHOTO = "photo"

    @classmethod
    def parse(cls, label: str | StyleId) -> StyleId:
        if isinstance(label, StyleId):
            return label
        try:
            return cls(label)
        except ValueError:
            raise ManifestError(f"unknown style label {label!r}") from None

    @property
    def keyword(self) -> str:
        """Natural-language style keyword handed to the language model."""
        return STYLE_KEYWORDS[self]

    def __str__(self) -> str:
        return self.value


STYLE_KEYWORDS = {
    StyleId.REALISTIC_OIL: "realistic oil painting",
    StyleId.IMPRESSION: "impressionist oil painting",
    StyleId.ABSTRACT: "abstract painting",
    StyleId.INK_PAINTING: "Chinese ink painting",
    StyleId.CHINESE_FREEHAND: "freehand Chinese painting",
    StyleId.ANIME: "anime",
    StyleId.PHOTO: "photograph of a real scene",
}

ALL_STYLES: tuple[StyleId, ...] = tuple(StyleId)


def parse_styles(labels: Iterable[str | StyleId]) -> list[StyleId]:
    return [StyleId.parse(s) for s in labels]


@dataclass(frozen=True)
class ImageRecord:
    id: str
    path: str
    style: StyleId
    annotation: str
    subcategory: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ManifestError("record id must be non-empty")
        if not self.annotation:
            raise ManifestError(f"record {self.id!r}: annotation must be non-empty")
        object.__setattr__(self, "style", StyleId.parse(self.style))

    def to_dict(self) -> dict:
        d = {"id": self.id, "path": self.path, "style": self.style.value}
        if self.subcategory is not None:
            d["subcategory"] = self.subcategory
        d["annotation"] = self.annotation
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ImageRecord:
        try:
            return cls(
                id=str(d["id"]),
                path=str(d["path"]),
                style=StyleId.parse(d["style"]),
                annotation=str(d["annotation"]),
                subcategory=d.get("subcategory"),
            )
        except KeyError as exc:
            raise ManifestError(f"record missing field {exc.args[0]!r}") from None


@dataclass(frozen=True)
class DatasetManifest:
    records: tuple[ImageRecord, ...] = ()
    declared_counts: dict[StyleId, int] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        seen: set[str] = set()
        for rec in self.records:
            if rec.id in seen:
                raise ManifestError(f"duplicate record id {rec.id!r}")
            seen.add(rec.id)
        if self.declared_counts is not None:
            declared = {StyleId.parse(k): int(v) for k, v in self.declared_counts.items()}
            object.__setattr__(self, "declared_counts", declared)
            actual = style_stats(self)
            for style in set(declared) | set(actual):
                if declared.get(style, 0) != actual.get(style, 0):
                    raise ManifestError(
                        f"count mismatch for {style.value}: declared "
                        f"{declared.get(style, 0)}, found {actual.get(style, 0)}"
                    )

    def __len__(self) -> int:
        return len(self.records)

    def to_dict(self) -> dict:
        d: dict = {"records": [r.to_dict() for r in self.records]}
        if self.declared_counts is not None:
            d["declared_counts"] = {s.value: n for s, n in self.declared_counts.items()}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> DatasetManifest:
        if not isinstance(d, dict) or not isinstance(d.get("records", []), list):
            raise ManifestError("manifest must be an object with a 'records' list")
        records = [ImageRecord.from_dict(r) for r in d.get("records", [])]
        declared = d.get("declared_counts")
        if declared is not None and not isinstance(declared, dict):
            raise ManifestError("declared_counts must be an object")
        return cls(records=tuple(records), declared_counts=declared)


def load_manifest(path: str | Path) -> DatasetManifest:
    """Load and validate a JSON manifest file."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: {exc}") from exc
    return DatasetManifest.from_dict(doc)


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    Path(path).write_text(json.dumps(manifest.to_dict(), indent=2) + "\n", encoding="utf-8")


def style_stats(manifest: DatasetManifest) -> dict[StyleId, int]:
    counts = Counter(r.style for r in manifest.records)
    return {s: counts[s] for s in ALL_STYLES if counts[s]}


@dataclass(frozen=True)
class ExclusionMask:
    """Input/output styles and explicit pairs to skip. Same-style pairs are always skipped."""

    excluded_input_styles: frozenset[StyleId] = field(default_factory=frozenset)
    excluded_output_styles: frozenset[StyleId] = field(default_factory=frozenset)
    excluded_pairs: frozenset[tuple[StyleId, StyleId]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "excluded_input_styles", frozenset(parse_styles(self.excluded_input_styles)))
        object.__setattr__(self, "excluded_output_styles", frozenset(parse_styles(self.excluded_output_styles)))
        object.__setattr__(
            self,
            "excluded_pairs",
            frozenset((StyleId.parse(a), StyleId.parse(b)) for a, b in self.excluded_pairs),
        )

    def excludes(self, source: StyleId, target: StyleId) -> bool:
        return (
            source == target
            or source in self.excluded_input_styles
            or target in self.excluded_output_styles
            or (source, target) in self.excluded_pairs
        )

    @classmethod
    def benchmark_default(cls) -> ExclusionMask:
        """Abstract never used as input, photo never generated."""
        return cls(
            excluded_input_styles=frozenset({StyleId.ABSTRACT}),
            excluded_output_styles=frozenset({StyleId.PHOTO}),
        )


def select_pairs(
    manifest: DatasetManifest,
    targets: Iterable[StyleId | str],
    mask: ExclusionMask | None = None,
) -> list[tuple[ImageRecord, StyleId]]:
    mask = mask or ExclusionMask()
    targets = parse_styles(targets)
    return [
        (rec, t)
        for rec in manifest.records
        for t in targets
        if not mask.excludes(rec.style, t)
    ]
