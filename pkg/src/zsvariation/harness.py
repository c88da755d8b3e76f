"""Metric evaluation over run logs, plus style x method grids and summaries."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import metrics
from .dataset import ALL_STYLES, ExclusionMask, StyleId
from .pipeline import RunRecord
from .tensors import TensorIndex, run_key

METRICS = ("sml", "cms", "fid", "clips")
LOWER_IS_BETTER = {"sml": True, "cms": False, "fid": True, "clips": False}
DASH = "-"


class MissingTensorsError(LookupError):
    def __init__(self, missing: list[str]):
        super().__init__(f"{len(missing)} missing tensor entries:\n  " + "\n  ".join(missing))
        self.missing = missing


@dataclass(frozen=True)
class MetricCell:
    sml: float | None = None
    cms: float | None = None
    fid: float | None = None
    clips: float | None = None
    excluded: bool = False

    def __post_init__(self) -> None:
        if self.excluded and any(getattr(self, m) is not None for m in METRICS):
            raise ValueError("an excluded cell cannot carry metric values")

    def values(self) -> tuple[float | None, ...]:
        return tuple(getattr(self, m) for m in METRICS)


EXCLUDED = MetricCell(excluded=True)


@dataclass
class BenchGrid:
    """Cells keyed by (input style, target style, method).

    Missing combinations are filled with excluded cells on construction, so
    every grid is complete.
    """

    input_styles: list[str]
    target_styles: list[str]
    methods: list[str]
    cells: dict[tuple[str, str, str], MetricCell] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.input_styles = [str(s) for s in self.input_styles]
        self.target_styles = [str(s) for s in self.target_styles]
        self.methods = [str(m) for m in self.methods]
        cells = {(str(i), str(t), str(m)): c for (i, t, m), c in self.cells.items()}
        for key in cells:
            if key[0] not in self.input_styles or key[1] not in self.target_styles or key[2] not in self.methods:
                raise ValueError(f"cell {key} lies outside the grid axes")
        self.cells = {
            (i, t, m): cells.get((i, t, m), EXCLUDED)
            for i in self.input_styles
            for t in self.target_styles
            for m in self.methods
        }

    def cell(self, input_style: str, target_style: str, method: str) -> MetricCell:
        return self.cells[(str(input_style), str(target_style), str(method))]


def grid_from_table(table: Mapping[tuple[str, str, str], Sequence[float | None]]) -> BenchGrid:
    """Grid from ``{(input, target, method): (sml, cms, fid, clips)}``; all-None rows are excluded."""
    inputs, targets, methods = [], [], []
    for i, t, m in table:
        for axis, v in ((inputs, i), (targets, t), (methods, m)):
            if v not in axis:
                axis.append(v)
    cells = {}
    for key, vals in table.items():
        if all(v is None for v in vals):
            cells[key] = EXCLUDED
        else:
            cells[key] = MetricCell(*vals)
    return BenchGrid(inputs, targets, methods, cells)


# -- evaluation --------------------------------------------------------------


def corpus_grams_from_index(index: TensorIndex) -> dict[str, list[np.ndarray]]:
    """Load each style's corpus; 3-D tensors are feature maps, square 2-D tensors are Grams."""
    out = {}
    for style, refs in index.section("corpus").items():
        grams = []
        for ref in refs:
            t = index.read(ref)
            grams.append(metrics.gram(t) if t.ndim == 3 else t)
        out[style] = grams
    return out


def _ordered(styles: Iterable[str]) -> list[str]:
    present = set(styles)
    known = [s.value for s in ALL_STYLES if s.value in present]
    return known + sorted(present - set(known))


def evaluate(
    records: Sequence[RunRecord],
    index: TensorIndex,
    style_corpus_grams: Mapping[str, Sequence] | None = None,
    method: str = "ours",
    mask: ExclusionMask | None = None,
    parallelism: int = 1,
) -> BenchGrid:
    """Score successful runs cell by cell.

    Per run, the index must provide ``features`` (C x H x W map of the output
    image), ``source_text`` / ``result_text`` (caption embeddings) and
    ``image`` (output image embedding), plus ``style_text[target]`` and a
    corpus for the target style. SML, CMS and CLIPS are averaged over the
    cell's runs. FID compares the cell's output image embeddings against
    ``reference[target]`` and is left empty when there is no reference set or
    fewer than two runs. Every missing entry is reported before anything is
    computed.
    """
    mask = mask or ExclusionMask()
    records = [r for r in records if r.ok]
    if style_corpus_grams is None:
        style_corpus_grams = corpus_grams_from_index(index)
    corpus = {str(k): list(v) for k, v in style_corpus_grams.items()}

    runs = index.section("runs")
    style_text = index.section("style_text")
    missing: list[str] = []

    def need(ref: str | None, what: str) -> None:
        if ref is None:
            missing.append(what)
        elif not index.exists(ref):
            missing.append(f"{what} -> {ref} (file not found)")

    for r in records:
        key = run_key(r.record_id, r.target_style.value)
        entry = runs.get(key)
        if entry is None:
            missing.append(f"runs[{key}]")
            continue
        for fld in ("features", "source_text", "result_text", "image"):
            need(entry.get(fld), f"runs[{key}].{fld}")
    for target in sorted({r.target_style.value for r in records}):
        need(style_text.get(target), f"style_text[{target}]")
        if not corpus.get(target):
            missing.append(f"corpus[{target}]")
        ref = index.section("reference").get(target)
        if ref is not None:
            need(ref, f"reference[{target}]")
    if missing:
        raise MissingTensorsError(missing)

    groups: dict[tuple[str, str], list[RunRecord]] = {}
    for r in sorted(records, key=lambda r: (r.record_id, r.target_style.value)):
        groups.setdefault((r.input_style.value, r.target_style.value), []).append(r)

    def score(item: tuple[tuple[str, str], list[RunRecord]]) -> tuple[tuple[str, str], MetricCell]:
        (src, tgt), rs = item
        smls, cmss, clipss, images = [], [], [], []
        text_emb = index.read(style_text[tgt])
        for r in rs:
            e = runs[run_key(r.record_id, tgt)]
            smls.append(metrics.sml(metrics.gram(index.read(e["features"])), corpus[tgt]))
            cmss.append(metrics.cms(index.read(e["source_text"]), index.read(e["result_text"])))
            img = index.read(e["image"]).ravel()
            clipss.append(metrics.clips(img, text_emb))
            images.append(img)
        fid = None
        ref = index.section("reference").get(tgt)
        if ref is not None and len(images) >= 2:
            fid = metrics.fid_from_embeddings(np.stack(images), index.read(ref))
        return (src, tgt), MetricCell(
            sml=float(np.mean(smls)), cms=float(np.mean(cmss)), fid=fid, clips=float(np.mean(clipss))
        )

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            scored = dict(pool.map(score, groups.items()))
    else:
        scored = dict(map(score, groups.items()))

    inputs = _ordered(s for s, _ in groups)
    targets = _ordered(t for _, t in groups)
    cells = {}
    for s in inputs:
        for t in targets:
            if mask.excludes(StyleId.parse(s), StyleId.parse(t)):
                cells[(s, t, method)] = EXCLUDED
            else:
                cells[(s, t, method)] = scored.get((s, t), MetricCell())
    return BenchGrid(inputs, targets, [method], cells)


# -- summaries ---------------------------------------------------------------


@dataclass
class MetricReport:
    aggregates: dict[str, dict[str, float | None]]
    provenance: dict[str, str] = field(default_factory=dict)


def summarize(grid: BenchGrid, provenance: Mapping[str, str] | None = None) -> MetricReport:
    """Unweighted mean of each metric over a method's non-excluded cells."""
    aggregates = {}
    for m in grid.methods:
        row = {}
        for name in METRICS:
            vals = [
                getattr(c, name)
                for (_, _, meth), c in grid.cells.items()
                if meth == m and not c.excluded and getattr(c, name) is not None
            ]
            row[name] = float(np.mean(vals)) if vals else None
        aggregates[m] = row
    return MetricReport(aggregates, dict(provenance or {}))


def make_provenance(manifest_hash: str = "", config_hash: str = "", timestamp: str | None = None) -> dict:
    return {
        "manifest_hash": manifest_hash,
        "config_hash": config_hash,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def digest(text: str | bytes) -> str:
    data = text.encode("utf-8") if isinstance(text, str) else text
    return hashlib.sha256(data).hexdigest()[:16]


# -- rendering ---------------------------------------------------------------


def _fmt(v: float | None) -> str:
    return "" if v is None else repr(float(v))


def _num(s: str) -> float | None:
    return None if s == "" else float(s)


def rank_extrema(grid: BenchGrid) -> dict[tuple[str, str, str], tuple[set[str], set[str]]]:
    """Best and second-best methods per (input, target, metric). Ties share a rank."""
    out = {}
    for i in grid.input_styles:
        for t in grid.target_styles:
            for name in METRICS:
                vals = {
                    m: getattr(grid.cell(i, t, m), name)
                    for m in grid.methods
                    if getattr(grid.cell(i, t, m), name) is not None
                }
                distinct = sorted(set(vals.values()), reverse=not LOWER_IS_BETTER[name])
                best = {m for m, v in vals.items() if distinct and v == distinct[0]}
                second = {m for m, v in vals.items() if len(distinct) > 1 and v == distinct[1]}
                out[(i, t, name)] = (best, second)
    return out


def render_grid(grid: BenchGrid, fmt: str = "csv") -> str:
    """Serialize a grid. ``csv`` and ``json`` round-trip through ``parse_grid``;
    ``markdown`` is for reading (best in bold, runner-up in italics)."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["input_style", "method"] + [f"{t}:{m}" for t in grid.target_styles for m in METRICS])
        for i in grid.input_styles:
            for meth in grid.methods:
                row = [i, meth]
                for t in grid.target_styles:
                    c = grid.cell(i, t, meth)
                    row += [DASH] * 4 if c.excluded else [_fmt(v) for v in c.values()]
                w.writerow(row)
        return buf.getvalue()
    if fmt == "json":
        cells = []
        for (i, t, m), c in grid.cells.items():
            entry = {"input": i, "target": t, "method": m, "excluded": c.excluded}
            for name in METRICS:
                entry[name] = DASH if c.excluded else getattr(c, name)
            cells.append(entry)
        doc = {
            "input_styles": grid.input_styles,
            "target_styles": grid.target_styles,
            "methods": grid.methods,
            "cells": cells,
        }
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "markdown":
        return _render_markdown(grid)
    raise ValueError(f"unknown grid format {fmt!r}")


def _render_markdown(grid: BenchGrid) -> str:
    ranks = rank_extrema(grid)
    lines = []
    for i in grid.input_styles:
        lines.append(f"### input: {i}")
        lines.append("")
        header = ["metric"] + [f"{t} / {m}" for t in grid.target_styles for m in grid.methods]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
        for name in METRICS:
            row = [name]
            for t in grid.target_styles:
                best, second = ranks[(i, t, name)]
                for m in grid.methods:
                    c = grid.cell(i, t, m)
                    v = getattr(c, name)
                    if c.excluded:
                        row.append(DASH)
                    elif v is None:
                        row.append("")
                    elif m in best:
                        row.append(f"**{v:g}**")
                    elif m in second:
                        row.append(f"_{v:g}_")
                    else:
                        row.append(f"{v:g}")
            lines.append("| " + " | ".join(row) + " |")
        lines.append("")
    return "\n".join(lines)


def parse_grid(text: str, fmt: str = "csv") -> BenchGrid:
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], rows[1:]
        if header[:2] != ["input_style", "method"] or (len(header) - 2) % 4:
            raise ValueError("not a grid CSV")
        targets = []
        for col in header[2::4]:
            targets.append(col.rsplit(":", 1)[0])
        inputs, methods, cells = [], [], {}
        for row in body:
            i, meth = row[0], row[1]
            if i not in inputs:
                inputs.append(i)
            if meth not in methods:
                methods.append(meth)
            for k, t in enumerate(targets):
                vals = row[2 + 4 * k : 6 + 4 * k]
                if all(v == DASH for v in vals):
                    cells[(i, t, meth)] = EXCLUDED
                else:
                    cells[(i, t, meth)] = MetricCell(*(_num(v) for v in vals))
        return BenchGrid(inputs, targets, methods, cells)
    if fmt == "json":
        doc = json.loads(text)
        cells = {}
        for c in doc["cells"]:
            key = (c["input"], c["target"], c["method"])
            cells[key] = EXCLUDED if c["excluded"] else MetricCell(*(c[m] for m in METRICS))
        return BenchGrid(doc["input_styles"], doc["target_styles"], doc["methods"], cells)
    raise ValueError(f"unknown grid format {fmt!r}")


def render_report(report: MetricReport, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["method", *METRICS])
        for m, row in report.aggregates.items():
            w.writerow([m] + [_fmt(row[name]) for name in METRICS])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps({"aggregates": report.aggregates, "provenance": report.provenance}, indent=2) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report(text: str, fmt: str = "csv") -> MetricReport:
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        if rows[0] != ["method", *METRICS]:
            raise ValueError("not a summary CSV")
        return MetricReport({r[0]: {n: _num(v) for n, v in zip(METRICS, r[1:])} for r in rows[1:]})
    if fmt == "json":
        doc = json.loads(text)
        return MetricReport(doc["aggregates"], doc.get("provenance", {}))
    raise ValueError(f"unknown report format {fmt!r}")

