"""Command line entry point: ``zsvariation {ingest,run,eval,report,simulate}``.

Exit codes: 0 success, 1 validation/usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import conditioning as cond
from .backends import BackendEndpoint, BackendError, Backends, mock_server
from .backends.mock import default_fixtures
from .dataset import ExclusionMask, ManifestError, load_manifest, parse_styles, style_stats
from .harness import (
    MissingTensorsError,
    digest,
    evaluate,
    make_provenance,
    parse_grid,
    render_grid,
    render_report,
    summarize,
)
from .pipeline import PipelineConfig, config_hash, load_config, read_log, run_batch
from .tensors import TensorIndex, TensorFormatError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _styles(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zsvariation", description="Run the variation pipeline, score its outputs and render result grids.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ingest = sub.add_parser("ingest", help="validate a manifest and print per-style counts")
    ingest.add_argument("--manifest", required=True)

    run = sub.add_parser("run", help="run the pipeline over a manifest")
    run.add_argument("--manifest", required=True)
    run.add_argument("--targets", required=True, type=_styles, help="comma-separated target styles")
    run.add_argument("--mock", action="store_true", help="serve a local mock backend instead of real services")
    run.add_argument("--fixtures", help="mock fixture file (default: built-in permissive fixtures)")
    run.add_argument("--url", help="base URL for all services (else ZSV_*_URL environment variables)")
    run.add_argument("--timeout", type=float, default=30.0)
    run.add_argument("--retries", type=int, default=2)
    run.add_argument("--config", help="PipelineConfig JSON file")
    run.add_argument("--seed", type=int, help="override config seed")
    run.add_argument("--parallelism", type=int, default=1)
    run.add_argument("--exclude-inputs", type=_styles, default=[])
    run.add_argument("--exclude-outputs", type=_styles, default=[])
    run.add_argument("--benchmark-mask", action="store_true", help="skip abstract inputs and photo outputs")
    run.add_argument("--out", help="run log (JSON lines); default stdout")
    run.add_argument("--no-timestamps", action="store_true", help="omit wall-clock fields for byte-stable logs")

    ev = sub.add_parser("eval", help="compute metrics for a run log from a tensor index")
    ev.add_argument("--runs", required=True)
    ev.add_argument("--index", required=True)
    ev.add_argument("--method", default="ours")
    ev.add_argument("--benchmark-mask", action="store_true")
    ev.add_argument("--out", help="grid JSON output; default stdout")

    rep = sub.add_parser("report", help="render a grid JSON file")
    rep.add_argument("--grid", required=True)
    rep.add_argument("--format", choices=["csv", "json", "markdown"], default="csv")
    rep.add_argument("--summary", action="store_true", help="per-method means instead of the full grid")

    sim = sub.add_parser("simulate", help="conditioning simulator demos")
    simsub = sim.add_subparsers(dest="demo", required=True, parser_class=_Parser)
    gate = simsub.add_parser("gate", help="diff gated trajectories under two conditions")
    gate.add_argument("--steps", type=int, default=50)
    gate.add_argument("--gate", type=int, default=30)
    gate.add_argument("--seed", type=int, default=0)
    gate.add_argument("--dim", type=int, default=8)
    gate.add_argument("--tokens", type=int, default=4)
    attn = simsub.add_parser("attention", help="print window-attention weights for a random map")
    attn.add_argument("--size", type=int, default=4)
    attn.add_argument("--window", type=int, default=2)
    attn.add_argument("--channels", type=int, default=4)
    attn.add_argument("--seed", type=int, default=0)
    return p


def cmd_ingest(args) -> int:
    manifest = load_manifest(args.manifest)
    for style, n in style_stats(manifest).items():
        print(f"{style.value}\t{n}")
    print(f"total\t{len(manifest)}")
    return 0


def cmd_run(args) -> int:
    manifest = load_manifest(args.manifest)
    cfg = load_config(args.config) if args.config else PipelineConfig()
    if args.seed is not None:
        cfg = PipelineConfig.from_dict({**cfg.to_dict(), "seed": args.seed})
    if args.parallelism < 1:
        raise UsageError("--parallelism must be >= 1")
    mask = ExclusionMask.benchmark_default() if args.benchmark_mask else ExclusionMask()
    mask = ExclusionMask(
        mask.excluded_input_styles | set(parse_styles(args.exclude_inputs)),
        mask.excluded_output_styles | set(parse_styles(args.exclude_outputs)),
    )
    targets = parse_styles(args.targets)

    server = None
    if args.mock:
        server = mock_server(args.fixtures if args.fixtures else default_fixtures())
        backends = Backends.single(BackendEndpoint(server.url, args.timeout, args.retries))
    elif args.url:
        backends = Backends.single(BackendEndpoint(args.url, args.timeout, args.retries))
    else:
        backends = Backends.from_env(timeout=args.timeout, retries=args.retries)

    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        records = run_batch(manifest, targets, mask, cfg, backends, parallelism=args.parallelism)
        for r in records:
            out.write(r.to_json(timestamps=not args.no_timestamps) + "\n")
    finally:
        backends.close()
        if server is not None:
            server.close()
        if out is not sys.stdout:
            out.close()
    failed = sum(not r.ok for r in records)
    print(f"{len(records)} runs, {failed} failed, config {config_hash(cfg)}", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    records = read_log(args.runs)
    index = TensorIndex.load(args.index)
    mask = ExclusionMask.benchmark_default() if args.benchmark_mask else None
    grid = evaluate(records, index, method=args.method, mask=mask)
    text = render_grid(grid, "json")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_report(args) -> int:
    text = Path(args.grid).read_text(encoding="utf-8")
    grid = parse_grid(text, "json")
    if args.summary:
        fmt = "json" if args.format == "json" else "csv"
        report = summarize(grid, make_provenance(config_hash=digest(text)))
        sys.stdout.write(render_report(report, fmt))
    else:
        sys.stdout.write(render_grid(grid, args.format))
    return 0


def cmd_simulate(args) -> int:
    if args.demo == "gate":
        sampler = cond.SamplerConfig(total_steps=args.steps, gate_step=args.gate)
        rng = np.random.default_rng(args.seed)
        init = rng.standard_normal((args.tokens, args.dim))
        cond_a = rng.standard_normal((args.tokens, args.dim))
        cond_b = rng.standard_normal((args.tokens, args.dim))
        weights = cond.AttentionWeights.from_seed(args.dim, args.seed)
        ta = cond.gated_sample(init, cond_a, sampler, weights)
        tb = cond.gated_sample(init, cond_b, sampler, weights)
        first = cond.first_divergence(ta, tb)
        gap = float(np.abs(ta[-1].latent - tb[-1].latent).max())
        print(f"steps={args.steps} gate={args.gate} seed={args.seed}")
        print(f"first divergence step = {first if first is not None else 'none'}")
        print(f"final max |diff| = {gap:.6g}")
        return 0
    rng = np.random.default_rng(args.seed)
    fm = rng.standard_normal((args.channels, args.size, args.size))
    weights = cond.AttentionWeights.from_seed(args.channels, args.seed)
    for k, win in enumerate(cond.window_partition(fm, cond.WindowConfig(args.window))):
        probs = cond.attention_probs(win, win, weights)
        print(f"window {k}: row sums {np.round(probs.sum(axis=1), 12).tolist()}")
        print(np.array2string(probs, precision=3, suppress_small=True))
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "run": cmd_run,
    "eval": cmd_eval,
    "report": cmd_report,
    "simulate": cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (ManifestError, MissingTensorsError, TensorFormatError, FileNotFoundError,
            json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (BackendError, OSError, RuntimeError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
