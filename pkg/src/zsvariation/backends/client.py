"""HTTP clients for the captioner, VQA, zero-shot verifier, LLM and generator services.

Every route takes a JSON POST body and answers JSON. Errors carry
``{"code": ..., "message": ...}``. Transport failures, timeouts and 5xx
replies are retried up to ``endpoint.retries`` times; 4xx replies are not.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass

import httpx

from ..templates import PromptTemplate
from .types import (
    BackendEndpoint,
    BackendTimeout,
    CaptionResult,
    GenerationRequest,
    ObjectLocation,
    SchemaError,
    ServiceError,
    TransportError,
    ZeroShotScores,
)

log = logging.getLogger(__name__)


def _nonempty_str(body: dict, key: str, route: str) -> str:
    value = body.get(key)
    if not isinstance(value, str):
        raise SchemaError(f"{route}: reply field {key!r} missing or not a string")
    if not value.strip():
        raise SchemaError(f"{route}: reply field {key!r} is empty")
    return value


def missing_objects(text: str, objects: list[ObjectLocation]) -> list[str]:
    """Object names that do not appear (case-insensitively) in ``text``."""
    low = text.lower()
    return [o.name for o in objects if o.name.lower() not in low]


class ServiceClient:
    """Blocking client for one service base URL. Safe to share between threads."""

    def __init__(self, endpoint: BackendEndpoint):
        self.endpoint = endpoint
        self._http = httpx.Client(base_url=endpoint.base_url.rstrip("/"), timeout=endpoint.timeout)

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> ServiceClient:
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def post(self, route: str, body: dict) -> dict:
        last: Exception | None = None
        for attempt in range(self.endpoint.retries + 1):
            try:
                resp = self._http.post(route, json=body)
            except httpx.TimeoutException as exc:
                last = BackendTimeout(f"{route}: timed out after {self.endpoint.timeout}s")
                last.__cause__ = exc
            except httpx.TransportError as exc:
                last = TransportError(f"{route}: {exc}")
                last.__cause__ = exc
            else:
                if resp.status_code < 400:
                    try:
                        reply = resp.json()
                    except ValueError as exc:
                        raise SchemaError(f"{route}: reply is not JSON") from exc
                    if not isinstance(reply, dict):
                        raise SchemaError(f"{route}: reply must be a JSON object")
                    return reply
                err = _error_from(resp)
                if resp.status_code < 500:
                    raise err
                last = err
            log.debug("%s attempt %d failed: %s", route, attempt + 1, last)
        if isinstance(last, ServiceError):
            raise TransportError(f"{route}: giving up after {self.endpoint.retries + 1} attempts: {last}") from last
        assert last is not None
        raise last

    # -- the five services --------------------------------------------------

    def caption(self, image_ref: str, condition: str | None = None) -> CaptionResult:
        body = {"image_ref": image_ref}
        if condition is not None:
            body["condition"] = condition
        reply = self.post("/caption", body)
        return CaptionResult(_nonempty_str(reply, "caption", "/caption"), condition is not None)

    def locate_objects(self, image_ref: str) -> list[ObjectLocation]:
        reply = self.post("/vqa", {"image_ref": image_ref})
        objects = reply.get("objects")
        if not isinstance(objects, list):
            raise SchemaError("/vqa: reply field 'objects' missing or not a list")
        out = []
        for item in objects:
            if not isinstance(item, dict):
                raise SchemaError("/vqa: object entries must be objects")
            name = _nonempty_str(item, "name", "/vqa")
            position = item.get("position")
            if not isinstance(position, str):
                raise SchemaError(f"/vqa: object {name!r} has no position")
            out.append(ObjectLocation(name, position))
        return out

    def zero_shot_verify(self, image_ref: str, labels: list[str]) -> ZeroShotScores:
        if not labels:
            raise ValueError("zero_shot_verify needs at least one label")
        reply = self.post("/zeroshot", {"image_ref": image_ref, "labels": list(labels)})
        scores = reply.get("scores")
        if not isinstance(scores, list) or len(scores) != len(labels):
            raise SchemaError(f"/zeroshot: expected {len(labels)} scores, got {scores!r}")
        for s in scores:
            if isinstance(s, bool) or not isinstance(s, (int, float)) or not math.isfinite(s) or not 0 <= s <= 1:
                raise SchemaError(f"/zeroshot: score {s!r} outside [0, 1]")
        return ZeroShotScores(tuple(labels), tuple(float(s) for s in scores))

    def elaborate_style(self, style_keyword: str, template: PromptTemplate) -> str:
        if not style_keyword or not style_keyword.strip():
            raise ValueError("style keyword must be non-empty")
        reply = self.post(
            "/llm/elaborate", {"style": style_keyword, "exemplars": template.wire_exemplars()}
        )
        return _nonempty_str(reply, "text", "/llm/elaborate")

    def fuse_prompt(
        self,
        caption: str,
        objects: list[ObjectLocation],
        style_description: str,
        template: PromptTemplate,
    ) -> str:
        """Fuse content and style into one prompt.

        Object names missing from the reply are logged, not raised: the LLM is
        allowed to paraphrase. Callers wanting the list use ``missing_objects``.
        """
        if not caption:
            raise ValueError("caption must be non-empty")
        reply = self.post(
            "/llm/fuse",
            {
                "caption": caption,
                "objects": [o.to_dict() for o in objects],
                "style_text": style_description,
                "exemplars": template.wire_exemplars(),
            },
        )
        text = _nonempty_str(reply, "text", "/llm/fuse")
        for name in missing_objects(text, objects):
            log.warning("fused prompt does not mention object %r", name)
        return text

    def generate(self, req: GenerationRequest) -> str:
        reply = self.post("/generate", req.to_wire())
        return _nonempty_str(reply, "image_ref", "/generate")


def _error_from(resp: httpx.Response) -> ServiceError:
    try:
        body = resp.json()
        code, message = str(body["code"]), str(body["message"])
    except (ValueError, KeyError, TypeError):
        code, message = "http_error", resp.text[:200]
    return ServiceError(resp.status_code, code, message)


@dataclass
class Backends:
    """The five services the pipeline talks to. They may share one client."""

    captioner: ServiceClient
    vqa: ServiceClient
    verifier: ServiceClient
    llm: ServiceClient
    generator: ServiceClient

    @classmethod
    def single(cls, endpoint: BackendEndpoint) -> Backends:
        client = ServiceClient(endpoint)
        return cls(client, client, client, client, client)

    @classmethod
    def from_env(cls, default_url: str | None = None, timeout: float = 30.0, retries: int = 2) -> Backends:
        """Build clients from ``ZSV_<SERVICE>_URL`` variables, falling back to
        ``ZSV_BACKEND_URL`` and then ``default_url``."""
        fallback = os.environ.get("ZSV_BACKEND_URL", default_url)
        clients = {}
        for name in ("captioner", "vqa", "verifier", "llm", "generator"):
            url = os.environ.get(f"ZSV_{name.upper()}_URL", fallback)
            if not url:
                raise ValueError(f"no URL configured for the {name} service")
            clients[name] = ServiceClient(BackendEndpoint(url, timeout, retries))
        return cls(**clients)

    def close(self) -> None:
        for c in {id(c): c for c in vars(self).values()}.values():
            c.close()
