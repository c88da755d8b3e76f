"""Image -> text -> tuned text -> image orchestration with audit records."""

from __future__ import annotations

import hashlib
import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable

from .backends import (
    Backends,
    GenerationRequest,
    ObjectLocation,
    ZeroShotScores,
    missing_objects,
)
from .conditioning import SamplerConfig
from .dataset import DatasetManifest, ExclusionMask, ImageRecord, StyleId, select_pairs
from .templates import ELABORATE_TEMPLATE, FUSE_TEMPLATE, PromptTemplate


@dataclass(frozen=True)
class PipelineConfig:
    verify_threshold: float = 0.6
    max_caption_retries: int = 2
    target_style: StyleId | None = None
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.verify_threshold <= 1.0:
            raise ValueError("verify_threshold must lie in [0, 1]")
        if self.max_caption_retries < 0:
            raise ValueError("max_caption_retries must be non-negative")
        if self.target_style is not None:
            object.__setattr__(self, "target_style", StyleId.parse(self.target_style))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["target_style"] = self.target_style.value if self.target_style else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> PipelineConfig:
        known = {"verify_threshold", "max_caption_retries", "target_style", "sampler", "seed"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        d = dict(d)
        if "sampler" in d:
            d["sampler"] = SamplerConfig(**d["sampler"])
        return cls(**d)


def load_config(path: str | Path) -> PipelineConfig:
    return PipelineConfig.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def config_hash(cfg: PipelineConfig) -> str:
    return hashlib.sha256(json.dumps(cfg.to_dict(), sort_keys=True).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ContentDescription:
    caption: str
    objects: tuple[ObjectLocation, ...]
    verification: ZeroShotScores
    verified: bool
    attempts: int
    conditioned: bool = False
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "caption": self.caption,
            "objects": [o.to_dict() for o in self.objects],
            "verification": self.verification.to_dict(),
            "verified": self.verified,
            "attempts": self.attempts,
            "conditioned": self.conditioned,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> ContentDescription:
        return cls(
            caption=d["caption"],
            objects=tuple(ObjectLocation(**o) for o in d["objects"]),
            verification=ZeroShotScores(**d["verification"]),
            verified=d["verified"],
            attempts=d["attempts"],
            conditioned=d.get("conditioned", False),
            warnings=tuple(d.get("warnings", ())),
        )


@dataclass(frozen=True)
class FusedPrompt:
    text: str
    style_description: str
    source: ContentDescription
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        # source is stored once on the RunRecord
        return {
            "text": self.text,
            "style_description": self.style_description,
            "warnings": list(self.warnings),
        }


def _recaption_condition(objects: Iterable[ObjectLocation]) -> str:
    return "focus on the " + ", ".join(o.name for o in objects)


def extract_content(image_ref: str, cfg: PipelineConfig, backends: Backends) -> ContentDescription:
    """Caption, locate objects, and verify them zero-shot.

    When the weakest object score is below ``cfg.verify_threshold`` the image
    is re-captioned with an object-focused condition, up to
    ``cfg.max_caption_retries`` times. The attempt whose minimum score is
    highest is kept (earliest wins on ties). Object detection runs once.
    """
    cap = backends.captioner.caption(image_ref)
    objects = tuple(backends.vqa.locate_objects(image_ref))
    if not objects:
        return ContentDescription(
            caption=cap.caption,
            objects=(),
            verification=ZeroShotScores(),
            verified=True,
            attempts=1,
            warnings=("no objects detected; verification skipped",),
        )

    labels = [o.name for o in objects]
    tau = cfg.verify_threshold
    best_cap, best_scores = cap, backends.verifier.zero_shot_verify(image_ref, labels)
    attempts = 1
    while best_scores.min_score < tau and attempts <= cfg.max_caption_retries:
        cap = backends.captioner.caption(image_ref, _recaption_condition(objects))
        scores = backends.verifier.zero_shot_verify(image_ref, labels)
        attempts += 1
        if scores.min_score > best_scores.min_score:
            best_cap, best_scores = cap, scores

    verified = best_scores.min_score >= tau
    warnings = ()
    if not verified:
        warnings = (
            f"verification failed after {attempts} attempts "
            f"(best min score {best_scores.min_score:.3f} < {tau})",
        )
    return ContentDescription(
        caption=best_cap.caption,
        objects=objects,
        verification=best_scores,
        verified=verified,
        attempts=attempts,
        conditioned=best_cap.conditioned,
        warnings=warnings,
    )


def tune_text(
    content: ContentDescription,
    style: StyleId | str,
    backends: Backends,
    templates: tuple[PromptTemplate, PromptTemplate] = (ELABORATE_TEMPLATE, FUSE_TEMPLATE),
) -> FusedPrompt:
    elaborate_tpl, fuse_tpl = templates
    style = StyleId.parse(style)
    description = backends.llm.elaborate_style(style.keyword, elaborate_tpl)
    text = backends.llm.fuse_prompt(content.caption, list(content.objects), description, fuse_tpl)
    warnings = tuple(
        f"fused prompt omits object {name!r}" for name in missing_objects(text, list(content.objects))
    )
    return FusedPrompt(text, description, content, warnings)


def run_seed(base_seed: int, record_id: str, target: StyleId | str) -> int:
    """Stable per-run seed so batches are reproducible but not all identical."""
    key = f"{base_seed}|{record_id}|{StyleId.parse(target).value}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(key).digest()[:4], "big") & 0x7FFFFFFF


@dataclass(frozen=True)
class RunRecord:
    record_id: str
    input_style: StyleId
    target_style: StyleId
    image_path: str
    status: str
    content: ContentDescription | None = None
    prompt: FusedPrompt | None = None
    request: GenerationRequest | None = None
    image_ref: str | None = None
    failed_stage: str | None = None
    error: str | None = None
    warnings: tuple[str, ...] = ()
    started: float | None = None
    finished: float | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self, timestamps: bool = True) -> dict:
        d = {
            "record_id": self.record_id,
            "input_style": self.input_style.value,
            "target_style": self.target_style.value,
            "image_path": self.image_path,
            "status": self.status,
            "content": self.content.to_dict() if self.content else None,
            "prompt": self.prompt.to_dict() if self.prompt else None,
            "request": self.request.to_wire() if self.request else None,
            "image_ref": self.image_ref,
            "failed_stage": self.failed_stage,
            "error": self.error,
            "warnings": list(self.warnings),
        }
        if timestamps:
            d["started"] = self.started
            d["finished"] = self.finished
        return d

    @classmethod
    def from_dict(cls, d: dict) -> RunRecord:
        content = ContentDescription.from_dict(d["content"]) if d.get("content") else None
        prompt = None
        if d.get("prompt"):
            p = d["prompt"]
            prompt = FusedPrompt(p["text"], p["style_description"], content, tuple(p.get("warnings", ())))
        return cls(
            record_id=d["record_id"],
            input_style=StyleId.parse(d["input_style"]),
            target_style=StyleId.parse(d["target_style"]),
            image_path=d["image_path"],
            status=d["status"],
            content=content,
            prompt=prompt,
            request=GenerationRequest(**d["request"]) if d.get("request") else None,
            image_ref=d.get("image_ref"),
            failed_stage=d.get("failed_stage"),
            error=d.get("error"),
            warnings=tuple(d.get("warnings", ())),
            started=d.get("started"),
            finished=d.get("finished"),
        )

    def to_json(self, timestamps: bool = True) -> str:
        return json.dumps(self.to_dict(timestamps), sort_keys=True, ensure_ascii=False)


def run_variation(
    record: ImageRecord,
    target: StyleId | str,
    cfg: PipelineConfig,
    backends: Backends,
    clock: Callable[[], float] = time.time,
) -> RunRecord:
    """Run all three stages for one (image, target style) pair.

    Identity-style requests raise ``ValueError``. Stage failures do not raise:
    they come back as a ``failed`` record keeping whatever earlier stages produced.
    """
    target = StyleId.parse(target)
    if target == record.style:
        raise ValueError(f"record {record.id!r} is already {target.value}; identity transfer refused")

    rec = RunRecord(record.id, record.style, target, record.path, status="running", started=clock())
    stage = "extract"
    try:
        content = extract_content(record.path, cfg, backends)
        rec = replace(rec, content=content, warnings=content.warnings)
        stage = "tune"
        prompt = tune_text(content, target, backends)
        rec = replace(rec, prompt=prompt, warnings=rec.warnings + prompt.warnings)
        stage = "generate"
        req = GenerationRequest(
            prompt=prompt.text,
            seed=run_seed(cfg.seed, record.id, target),
            total_steps=cfg.sampler.total_steps,
            gate_step=cfg.sampler.gate_step,
        )
        rec = replace(rec, request=req)
        image_ref = backends.generator.generate(req)
    except Exception as exc:  # noqa: BLE001 - any stage failure is recorded, batch continues
        return replace(
            rec,
            status="failed",
            failed_stage=stage,
            error=f"{type(exc).__name__}: {exc}",
            finished=clock(),
        )
    return replace(rec, status="ok", image_ref=image_ref, finished=clock())


def run_batch(
    manifest: DatasetManifest,
    targets: Iterable[StyleId | str],
    mask: ExclusionMask | None,
    cfg: PipelineConfig,
    backends: Backends,
    parallelism: int = 1,
    on_record: Callable[[RunRecord], None] | None = None,
    clock: Callable[[], float] = time.time,
) -> list[RunRecord]:
    """Run every selected pair, ``parallelism`` at a time.

    ``on_record`` is called (serialized) as each run completes, e.g. to append
    to a log, so finished work survives an interrupted batch. The returned list
    is sorted by (record id, target style).
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    pairs = select_pairs(manifest, targets, mask)
    lock = threading.Lock()

    def work(pair: tuple[ImageRecord, StyleId]) -> RunRecord:
        result = run_variation(pair[0], pair[1], cfg, backends, clock=clock)
        if on_record is not None:
            with lock:
                on_record(result)
        return result

    if parallelism == 1:
        results = [work(p) for p in pairs]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(work, pairs))
    return sorted(results, key=lambda r: (r.record_id, r.target_style.value))


def write_log(records: Iterable[RunRecord], path: str | Path, timestamps: bool = True) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(r.to_json(timestamps) + "\n")


def read_log(path: str | Path) -> list[RunRecord]:
    with open(path, encoding="utf-8") as fh:
        return [RunRecord.from_dict(json.loads(line)) for line in fh if line.strip()]
