"""Binary tensor container files and the JSON index that points at them.

File layout: 8-byte magic ``ZSTDTNS1``, little-endian ``u32`` rank, ``rank``
little-endian ``u32`` dims, then a row-major little-endian float32 payload.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"ZSTDTNS1"


class TensorFormatError(ValueError):
    pass


def write_tensor(path: str | Path, array) -> None:
    arr = np.ascontiguousarray(np.asarray(array, dtype="<f4"))
    header = MAGIC + struct.pack(f"<I{arr.ndim}I", arr.ndim, *arr.shape)
    Path(path).write_bytes(header + arr.tobytes(order="C"))


def read_tensor(path: str | Path) -> np.ndarray:
    """Read a tensor file; values are returned as float64."""
    data = Path(path).read_bytes()
    if data[:8] != MAGIC:
        raise TensorFormatError(f"{path}: bad magic")
    if len(data) < 12:
        raise TensorFormatError(f"{path}: truncated header")
    (rank,) = struct.unpack_from("<I", data, 8)
    offset = 12 + 4 * rank
    if len(data) < offset:
        raise TensorFormatError(f"{path}: truncated dims")
    dims = struct.unpack_from(f"<{rank}I", data, 12)
    count = int(np.prod(dims, dtype=np.int64)) if rank else 1
    if len(data) - offset != 4 * count:
        raise TensorFormatError(
            f"{path}: payload has {len(data) - offset} bytes, expected {4 * count}"
        )
    arr = np.frombuffer(data, dtype="<f4", count=count, offset=offset)
    return arr.reshape(dims).astype(np.float64)


class TensorIndex:
    """Sidecar index mapping run keys and styles to tensor files.

    Layout::

        {
          "runs": {"<record_id>|<target>": {"features": f, "source_text": f,
                                            "result_text": f, "image": f}},
          "style_text": {"<style>": f},
          "reference": {"<style>": f},
          "corpus": {"<style>": [f, ...]}
        }

    Relative file names resolve against the index file's directory.
    """

    def __init__(self, doc: dict, root: str | Path = "."):
        self.doc = doc
        self.root = Path(root)
        self._cache: dict[str, np.ndarray] = {}

    @classmethod
    def load(cls, path: str | Path) -> TensorIndex:
        path = Path(path)
        return cls(json.loads(path.read_text(encoding="utf-8")), root=path.parent)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    def section(self, name: str) -> dict:
        return self.doc.get(name, {})

    def read(self, ref: str) -> np.ndarray:
        if ref not in self._cache:
            self._cache[ref] = read_tensor(self.root / ref)
        return self._cache[ref]

    def exists(self, ref: str) -> bool:
        return (self.root / ref).is_file()


def run_key(record_id: str, target: str) -> str:
    return f"{record_id}|{target}"
