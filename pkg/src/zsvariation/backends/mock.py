"""Fixture-driven mock of all five services, served over loopback HTTP.

Fixture document (JSON). Every top-level route section is optional; a route
whose section is absent answers 404 on every call::

    {
      "latency_ms": 0,
      "caption":  {"images": {"boat.png": {"caption": "...", "conditional": "..."},
                              "*": {"caption": "a picture of {image}"}},
                   "fail_first": 1, "latency_ms": 5},
      "vqa":      {"images": {"boat.png": [{"name": "boat", "position": "center"}]}},
      "zeroshot": {"images": {"boat.png": {"boat": 0.91}},
                   "script": {"dog.png": [{"dog": 0.30}, {"dog": 0.75}]},
                   "default_score": 0.0},
      "elaborate": {"styles": {"anime": "..."}, "default": "{style} with ..."},
      "fuse":     {"replies": {"<caption>": "..."}, "template": "..."},
      "generate": {"prefix": "mock://generated/"}
    }

Any route section may also carry ``"raw": {"<image_ref>": <reply>}`` to send a
verbatim (possibly malformed) reply. ``"script"`` entries are consumed one per
call for that image and the last one repeats.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from collections import Counter
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

ROUTES = {
    "/caption": "caption",
    "/vqa": "vqa",
    "/zeroshot": "zeroshot",
    "/llm/elaborate": "elaborate",
    "/llm/fuse": "fuse",
    "/generate": "generate",
}

DEFAULT_FUSE_TEMPLATE = "{caption}, with {objects}, rendered as {style_text}"


class MockError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status, self.code, self.message = status, code, message


def prompt_digest(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:16]


def default_fixtures() -> dict:
    """Permissive fixtures that answer for any image, used by ``--mock`` runs."""
    return {
        "caption": {
            "images": {
                "*": {
                    "caption": "a scene from {image}",
                    "conditional": "a detailed scene from {image} showing {condition}",
                }
            }
        },
        "vqa": {"images": {"*": [{"name": "figure", "position": "center"}]}},
        "zeroshot": {"default_score": 0.9},
        "elaborate": {"default": "{style}, with its characteristic palette, brushwork and composition"},
        "fuse": {},
        "generate": {},
    }


class MockBackend:
    """Pure request -> reply logic, independent of HTTP."""

    def __init__(self, fixtures: dict):
        if not isinstance(fixtures, dict):
            raise ValueError("fixtures must be a JSON object")
        self.fixtures = fixtures
        self._lock = threading.Lock()
        self.calls: Counter[str] = Counter()
        self._script_pos: Counter[str] = Counter()

    def latency(self, section: str) -> float:
        sec = self.fixtures.get(section) or {}
        ms = sec.get("latency_ms", self.fixtures.get("latency_ms", 0))
        return float(ms) / 1000.0

    def handle(self, route: str, body: dict) -> dict:
        """Answer one request: count it, apply latency and failure injection, reply."""
        with self._lock:
            self.calls[route] += 1
            n = self.calls[route]
        section_name = ROUTES.get(route)
        if section_name is None or section_name not in self.fixtures:
            raise MockError(404, "not_found", f"no fixture for route {route}")
        section = self.fixtures[section_name] or {}
        delay = self.latency(section_name)
        if delay:
            time.sleep(delay)
        if n <= int(section.get("fail_first", 0)):
            raise MockError(503, "injected_failure", f"scripted failure {n} on {route}")
        raw = section.get("raw", {})
        if body.get("image_ref") in raw:
            return raw[body["image_ref"]]
        return getattr(self, f"_{section_name}")(section, body)

    @staticmethod
    def _image_entry(section: dict, image_ref: str):
        images = section.get("images", {})
        if image_ref in images:
            return images[image_ref]
        if "*" in images:
            return images["*"]
        raise MockError(404, "unknown_image", f"no fixture for image {image_ref!r}")

    def _caption(self, section: dict, body: dict) -> dict:
        ref = _require(body, "image_ref")
        entry = self._image_entry(section, ref)
        condition = body.get("condition")
        if condition is None:
            text = entry["caption"]
        else:
            text = entry.get("conditional", entry["caption"] + ", {condition}")
        return {"caption": text.replace("{image}", ref).replace("{condition}", condition or "")}

    def _vqa(self, section: dict, body: dict) -> dict:
        return {"objects": self._image_entry(section, _require(body, "image_ref"))}

    def _zeroshot(self, section: dict, body: dict) -> dict:
        ref = _require(body, "image_ref")
        labels = _require(body, "labels")
        script = section.get("script", {}).get(ref)
        if script:
            with self._lock:
                pos = self._script_pos[ref]
                self._script_pos[ref] += 1
            table = script[min(pos, len(script) - 1)]
        else:
            images = section.get("images", {})
            table = images.get(ref, images.get("*", {}))
        default = section.get("default_score", 0.0)
        return {"scores": [table.get(label, default) for label in labels]}

    def _elaborate(self, section: dict, body: dict) -> dict:
        style = _require(body, "style")
        styles = section.get("styles", {})
        if style in styles:
            return {"text": styles[style]}
        if "default" in section:
            return {"text": section["default"].replace("{style}", style)}
        raise MockError(404, "unknown_style", f"no elaboration for {style!r}")

    def _fuse(self, section: dict, body: dict) -> dict:
        caption = _require(body, "caption")
        replies = section.get("replies", {})
        if caption in replies:
            return {"text": replies[caption]}
        objects = body.get("objects") or []
        obj_text = ", ".join(f"{o['name']} at {o['position']}" for o in objects) or "no distinct objects"
        template = section.get("template", DEFAULT_FUSE_TEMPLATE)
        text = (
            template.replace("{caption}", caption)
            .replace("{objects}", obj_text)
            .replace("{style_text}", body.get("style_text", ""))
        )
        return {"text": text}

    def _generate(self, section: dict, body: dict) -> dict:
        prompt = _require(body, "prompt")
        seed = _require(body, "seed")
        prefix = section.get("prefix", "mock://generated/")
        return {"image_ref": f"{prefix}{prompt_digest(prompt)}-{seed}.png"}


def _require(body: dict, key: str):
    if key not in body:
        raise MockError(400, "bad_request", f"missing field {key!r}")
    return body[key]


class _Handler(BaseHTTPRequestHandler):
    server: _MockHTTPServer

    def do_POST(self) -> None:
        backend = self.server.backend
        try:
            length = int(self.headers.get("Content-Length", 0))
            body = json.loads(self.rfile.read(length) or b"{}")
            if not isinstance(body, dict):
                raise MockError(400, "bad_request", "body must be a JSON object")
            status, reply = 200, backend.handle(self.path, body)
        except MockError as exc:
            status, reply = exc.status, {"code": exc.code, "message": exc.message}
        except json.JSONDecodeError as exc:
            status, reply = 400, {"code": "bad_json", "message": str(exc)}
        data = json.dumps(reply).encode("utf-8")
        try:
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)
        except (BrokenPipeError, ConnectionResetError):
            pass  # client gave up (timeout)

    def log_message(self, format, *args) -> None:
        pass


class _MockHTTPServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, addr, backend: MockBackend):
        super().__init__(addr, _Handler)
        self.backend = backend

    def handle_error(self, request, client_address) -> None:
        pass


class MockServer:
    """Running mock service bound to ``127.0.0.1``. Use as a context manager."""

    def __init__(self, fixtures: dict, port: int = 0):
        self.backend = MockBackend(fixtures)
        self._httpd = _MockHTTPServer(("127.0.0.1", port), self.backend)
        self._thread = threading.Thread(target=self._httpd.serve_forever, args=(0.02,), daemon=True)
        self._thread.start()

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    @property
    def calls(self) -> Counter[str]:
        return self.backend.calls

    def close(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join()

    def __enter__(self) -> MockServer:
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def mock_server(fixtures: str | Path | dict, port: int = 0) -> MockServer:
    """Start a mock server from a fixture file (or an already-parsed dict)."""
    if not isinstance(fixtures, dict):
        fixtures = json.loads(Path(fixtures).read_text(encoding="utf-8"))
    return MockServer(fixtures, port=port)
