"""Small deterministic model of the generator's conditioning path.

Three pieces:

* a window-attention style encoder: the feature map is cut into
  non-overlapping ``w x w`` windows (no shift, no mask) and plain softmax
  self-attention runs inside each window;
* cross-attention from latent tokens onto a condition sequence;
* a gated sampler: a linear-mixing stand-in for the denoiser where the
  condition only enters once the step count passes ``gate_step``.

None of this is a trained network. It exists so the gating contract and the
attention arithmetic can be tested exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import as_feature_map


class ConditioningError(ValueError):
    pass


def as_tokens(values) -> np.ndarray:
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 2 or min(x.shape) < 1:
        raise ConditioningError(f"token sequence must be L x d with L, d >= 1, got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ConditioningError("token sequence contains non-finite values")
    return x


@dataclass(frozen=True)
class AttentionWeights:
    wq: np.ndarray
    wk: np.ndarray
    wv: np.ndarray
    seed: int | None = None

    @property
    def dim(self) -> int:
        return self.wq.shape[0]

    @classmethod
    def from_seed(cls, dim: int, seed: int) -> AttentionWeights:
        """Draw ``Wq, Wk, Wv`` (in that order) as one ``(3, dim, dim)`` block of
        standard normals from ``numpy.random.default_rng(seed)`` (PCG64), scaled
        by ``1/sqrt(dim)``."""
        rng = np.random.default_rng(seed)
        wq, wk, wv = rng.standard_normal((3, dim, dim)) / np.sqrt(dim)
        return cls(wq, wk, wv, seed)

    @classmethod
    def mean_pool(cls, dim: int) -> AttentionWeights:
        """Zero query/key projections and identity values: attention becomes a plain mean."""
        z = np.zeros((dim, dim))
        return cls(z, z.copy(), np.eye(dim))


@dataclass(frozen=True)
class WindowConfig:
    window_size: int

    def __post_init__(self) -> None:
        if self.window_size < 1:
            raise ConditioningError("window_size must be positive")


@dataclass(frozen=True)
class SamplerConfig:
    total_steps: int = 50
    gate_step: int = 30
    alpha: float = 0.95
    beta: float = 0.05

    def __post_init__(self) -> None:
        if self.total_steps < 1:
            raise ConditioningError("total_steps must be positive")
        if not 0 <= self.gate_step <= self.total_steps:
            raise ConditioningError(
                f"gate_step must lie in [0, {self.total_steps}], got {self.gate_step}"
            )


@dataclass(frozen=True)
class LatentState:
    t: int
    latent: np.ndarray


def attention_probs(queries, keys, weights: AttentionWeights) -> np.ndarray:
    """Row-stochastic matrix ``softmax(Q K^T / sqrt(d))``."""
    q = as_tokens(queries) @ weights.wq
    k = as_tokens(keys) @ weights.wk
    scores = q @ k.T / np.sqrt(weights.dim)
    scores -= scores.max(axis=1, keepdims=True)
    p = np.exp(scores)
    p /= p.sum(axis=1, keepdims=True)
    if not np.all(np.isfinite(p)):
        raise ConditioningError("non-finite attention weights")
    return p


def _attend(queries, context, weights: AttentionWeights) -> np.ndarray:
    queries, context = as_tokens(queries), as_tokens(context)
    d = weights.dim
    if queries.shape[1] != d or context.shape[1] != d:
        raise ConditioningError(
            f"token dim mismatch: queries {queries.shape[1]}, context {context.shape[1]}, weights {d}"
        )
    out = attention_probs(queries, context, weights) @ (context @ weights.wv)
    if not np.all(np.isfinite(out)):
        raise ConditioningError("non-finite attention output")
    return out


def window_partition(features, cfg: WindowConfig) -> list[np.ndarray]:
    """Split a C x H x W map into ``w*w``-token windows, both levels row-major."""
    fm = as_feature_map(features)
    c, h, w = fm.shape
    ws = cfg.window_size
    if h % ws or w % ws:
        raise ConditioningError(f"window size {ws} does not divide spatial size {h}x{w}")
    # (C, H/ws, ws, W/ws, ws) -> (H/ws, W/ws, ws, ws, C)
    blocks = fm.reshape(c, h // ws, ws, w // ws, ws).transpose(1, 3, 2, 4, 0)
    return [blocks[i, j].reshape(ws * ws, c) for i in range(h // ws) for j in range(w // ws)]


def window_attention(tokens, weights: AttentionWeights) -> np.ndarray:
    return _attend(tokens, tokens, weights)


def style_encode(features, cfg: WindowConfig, weights: AttentionWeights) -> np.ndarray:
    """Window attention applied independently per window, outputs concatenated in window order."""
    windows = window_partition(features, cfg)
    return np.concatenate([window_attention(win, weights) for win in windows], axis=0)


def cross_attention(query, condition, weights: AttentionWeights) -> np.ndarray:
    return _attend(query, condition, weights)


def gated_sample(init, condition, cfg: SamplerConfig, weights: AttentionWeights) -> list[LatentState]:
    """Run the gated sampler and return all ``total_steps + 1`` states.

    State ``s`` is produced from state ``s - 1``. For ``s <= gate_step`` the
    update is the unconditional ``alpha * x``; afterwards it adds
    ``beta * cross_attention(x, condition)``. With the defaults (50 steps,
    gate 30) the first 30 steps ignore the condition and the last 20 use it.
    """
    x = as_tokens(init)
    condition = as_tokens(condition)
    states = [LatentState(0, x)]
    with np.errstate(over="ignore", invalid="ignore"):
        for s in range(1, cfg.total_steps + 1):
            if s <= cfg.gate_step:
                x = cfg.alpha * x
            else:
                x = cfg.alpha * x + cfg.beta * cross_attention(x, condition, weights)
            if not np.all(np.isfinite(x)):
                raise ConditioningError(f"trajectory diverged at step {s}")
            states.append(LatentState(s, x))
    return states


def first_divergence(a: list[LatentState], b: list[LatentState]) -> int | None:
    """First step whose latents differ bitwise, or None if the trajectories match."""
    for sa, sb in zip(a, b):
        if not np.array_equal(sa.latent, sb.latent):
            return sa.t
    return None
