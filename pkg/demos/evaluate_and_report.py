"""
From run log to result grid
===========================

Evaluation reads precomputed tensors (features, embeddings, reference sets)
through an index file. ``write_eval_fixture`` fills one with random values,
which stands in for the feature extractors here.
"""

import tempfile
from pathlib import Path

from zsvariation import reference
from zsvariation.dataset import StyleId
from zsvariation.harness import evaluate, grid_from_table, render_grid, render_report, summarize
from zsvariation.pipeline import RunRecord
from zsvariation.synthetic import write_eval_fixture
from zsvariation.tensors import TensorIndex

runs = [
    RunRecord(f"p{k}", StyleId.PHOTO, target, f"p{k}.jpg", status="ok", image_ref="mock://x")
    for k in range(3)
    for target in (StyleId.ANIME, StyleId.IMPRESSION)
]

with tempfile.TemporaryDirectory() as tmp:
    index = TensorIndex.load(write_eval_fixture(Path(tmp), runs, seed=1))
    grid = evaluate(runs, index, method="ours")

print(render_grid(grid, "csv"))
print(render_report(summarize(grid), "csv"))

# %%
# The same renderers handle published numbers. Identity pairs and skipped
# pairs show up as dashes.

ink_rows = {k: v for k, v in reference.STYLE_TRANSFER_BASELINES.items() if k[0] == "ink-painting"}
print(render_grid(grid_from_table(ink_rows), "csv"))
