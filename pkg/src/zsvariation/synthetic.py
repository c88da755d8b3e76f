"""Random stand-ins for extractor outputs, for demos and tests.

Real runs get features and embeddings from external networks; this writes
seeded random tensors in the same container and index layout.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

from .pipeline import RunRecord
from .tensors import TensorIndex, run_key, write_tensor


def write_eval_fixture(
    root: str | Path,
    records: Iterable[RunRecord],
    seed: int = 0,
    channels: int = 3,
    size: int = 4,
    emb_dim: int = 8,
    corpus_size: int = 4,
    reference_size: int = 12,
) -> Path:
    """Write tensors for every successful run plus per-target style assets.

    Returns the path of the written ``index.json``.
    """
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    doc: dict = {"runs": {}, "style_text": {}, "reference": {}, "corpus": {}}

    def put(name: str, arr: np.ndarray) -> str:
        write_tensor(root / name, arr)
        return name

    targets = []
    for r in records:
        if not r.ok:
            continue
        key = run_key(r.record_id, r.target_style.value)
        stem = key.replace("|", "__")
        doc["runs"][key] = {
            "features": put(f"{stem}.features.zt", rng.standard_normal((channels, size, size))),
            "source_text": put(f"{stem}.source.zt", rng.standard_normal(emb_dim)),
            "result_text": put(f"{stem}.result.zt", rng.standard_normal(emb_dim)),
            "image": put(f"{stem}.image.zt", rng.standard_normal(emb_dim)),
        }
        if r.target_style.value not in targets:
            targets.append(r.target_style.value)

    for t in targets:
        doc["style_text"][t] = put(f"style_{t}.text.zt", rng.standard_normal(emb_dim))
        doc["reference"][t] = put(f"style_{t}.reference.zt", rng.standard_normal((reference_size, emb_dim)))
        doc["corpus"][t] = [
            put(f"style_{t}.corpus{k}.zt", rng.standard_normal((channels, size, size)))
            for k in range(corpus_size)
        ]

    path = root / "index.json"
    TensorIndex(doc).save(path)
    return path
