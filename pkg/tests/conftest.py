import ipaddress
import json
import socket
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from zsvariation.backends import BackendEndpoint, Backends, mock_server  # noqa: E402

BENCHMARK_COUNTS = {
    "realistic-oil": 804,
    "impression": 908,
    "abstract": 965,
    "ink-painting": 1021,
    "chinese-freehand": 940,
    "anime": 1072,
}

BOAT_FIXTURES = {
    "caption": {
        "images": {
            "boat.png": {
                "caption": "a boat on a river near a bridge",
                "conditional": "a wooden boat in the center of a river with a stone bridge on the left",
            },
            "blank.png": {"caption": "an empty grey canvas"},
        }
    },
    "vqa": {
        "images": {
            "boat.png": [{"name": "boat", "position": "center"}, {"name": "bridge", "position": "left"}],
            "blank.png": [],
        },
        "raw": {"broken.png": {"objects": [{"name": "boat"}]}},
    },
    "zeroshot": {
        "images": {"boat.png": {"boat": 0.91, "bridge": 0.84}},
        "raw": {"weird.png": {"scores": [1.3]}},
    },
    "elaborate": {
        "styles": {
            "realistic oil painting": "rich colours of the oil painting, thick impasto brushwork and warm varnished light",
        },
        "default": "{style} with its usual palette and brushwork",
    },
    "fuse": {},
    "generate": {},
}


def manifest_doc(counts, declared=True, prefix="img"):
    records = []
    for style, n in counts.items():
        for k in range(n):
            records.append(
                {"id": f"{prefix}-{style}-{k:04d}", "path": f"{style}/{k:04d}.jpg", "style": style,
                 "annotation": f"a {style} picture number {k}"}
            )
    doc = {"records": records}
    if declared:
        doc["declared_counts"] = dict(counts)
    return doc


@pytest.fixture
def benchmark_manifest_path(tmp_path):
    p = tmp_path / "benchmark.manifest.json"
    p.write_text(json.dumps(manifest_doc(BENCHMARK_COUNTS)))
    return p


@pytest.fixture
def boat_server():
    with mock_server(BOAT_FIXTURES) as srv:
        yield srv


def make_backends(server, timeout=5.0, retries=2):
    return Backends.single(BackendEndpoint(server.url, timeout=timeout, retries=retries))


@pytest.fixture
def boat_backends(boat_server):
    b = make_backends(boat_server)
    yield b
    b.close()


# -- loopback-only networking and the acceptance summary ---------------------

SUITE_BUDGET_S = 60.0
ACCEPTANCE_LINES: list[str] = []
_session = {}
_real_connect = socket.socket.connect


def _loopback_only(sock, address):
    if sock.family in (socket.AF_INET, socket.AF_INET6):
        host = address[0]
        try:
            loopback = ipaddress.ip_address(host).is_loopback
        except ValueError:
            loopback = host == "localhost"
        if not loopback:
            raise OSError(f"test suite is offline: refused connection to {host}")
    return _real_connect(sock, address)


def pytest_sessionstart(session):
    _session["start"] = time.perf_counter()
    socket.socket.connect = _loopback_only


def pytest_sessionfinish(session, exitstatus):
    socket.socket.connect = _real_connect
    elapsed = time.perf_counter() - _session["start"]
    _session["elapsed"] = elapsed
    if ACCEPTANCE_LINES and elapsed >= SUITE_BUDGET_S and session.exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    elapsed = _session.get("elapsed", time.perf_counter() - _session["start"])
    ok = elapsed < SUITE_BUDGET_S
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
        terminalreporter.write_line(line)
    terminalreporter.write_line(
        f"{'PASS' if ok else 'FAIL'} criterion 10: whole suite offline in {elapsed:.1f}s "
        f"(limit {SUITE_BUDGET_S:.0f}s)"
    )
