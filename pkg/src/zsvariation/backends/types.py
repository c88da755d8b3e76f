from __future__ import annotations

import math
from dataclasses import dataclass


class BackendError(RuntimeError):
    """Base class for anything that went wrong talking to a model service."""


class TransportError(BackendError):
    """The service could not be reached (or kept failing) after all retries."""


class BackendTimeout(TransportError):
    pass


class ServiceError(BackendError):
    """The service answered with a non-retryable error body ``{code, message}``."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(f"{status} {code}: {message}")
        self.status = status
        self.code = code
        self.message = message


class SchemaError(BackendError):
    """The service reply did not match the expected body schema."""


@dataclass(frozen=True)
class BackendEndpoint:
    base_url: str
    timeout: float = 30.0
    retries: int = 2

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.retries < 0:
            raise ValueError("retries must be non-negative")


@dataclass(frozen=True)
class CaptionResult:
    caption: str
    conditioned: bool = False


@dataclass(frozen=True)
class ObjectLocation:
    name: str
    position: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("object name must be non-empty")

    def to_dict(self) -> dict:
        return {"name": self.name, "position": self.position}


@dataclass(frozen=True)
class ZeroShotScores:
    labels: tuple[str, ...] = ()
    scores: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "scores", tuple(float(s) for s in self.scores))
        if len(self.labels) != len(self.scores):
            raise ValueError("labels and scores must have equal length")
        if not all(math.isfinite(s) for s in self.scores):
            raise ValueError("scores must be finite")

    @property
    def min_score(self) -> float | None:
        return min(self.scores) if self.scores else None

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "scores": list(self.scores)}


@dataclass(frozen=True)
class GenerationRequest:
    prompt: str
    seed: int
    total_steps: int = 50
    gate_step: int = 30
    style_condition_ref: str | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.gate_step <= self.total_steps:
            raise ValueError(f"gate_step must lie in [0, total_steps], got {self.gate_step}")

    def to_wire(self) -> dict:
        body = {
            "prompt": self.prompt,
            "seed": self.seed,
            "total_steps": self.total_steps,
            "gate_step": self.gate_step,
        }
        if self.style_condition_ref is not None:
            body["style_condition_ref"] = self.style_condition_ref
        return body

