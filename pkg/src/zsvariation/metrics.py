"""Evaluation metrics over precomputed features and embeddings.

* ``sml``   -- style mean loss: mean squared Frobenius distance from one Gram
  matrix to every Gram of a style corpus.
* ``cms``   -- content matching score: cosine similarity of two caption
  embeddings.
* ``fid``   -- Frechet distance between Gaussian fits of two embedding sets.
* ``clips`` -- CLIP-style score, ``100 * max(cos, 0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

SYM_TOL = 1e-7
FID_CLAMP_TOL = 1e-6


class MetricError(ValueError):
    pass


def _finite(arr: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise MetricError(f"{what} contains non-finite values")
    return arr


def as_feature_map(values) -> np.ndarray:
    """Validate a C x H x W feature map and return it as a float64 array."""
    fm = np.asarray(values, dtype=np.float64)
    if fm.ndim != 3 or min(fm.shape) < 1:
        raise MetricError(f"feature map must be C x H x W with positive dims, got {fm.shape}")
    return _finite(fm, "feature map")


def gram(features) -> np.ndarray:
    """Normalized Gram matrix ``F F^T / (C H W)`` of a C x H x W feature map."""
    fm = as_feature_map(features)
    c = fm.shape[0]
    flat = fm.reshape(c, -1)
    g = flat @ flat.T / fm.size
    return (g + g.T) / 2


def sml(result, targets: Sequence) -> float:
    """Mean over ``targets`` of ``||result - target||_F^2``."""
    if len(targets) == 0:
        raise MetricError("sml needs at least one target Gram")
    res = _finite(np.asarray(result, dtype=np.float64), "result Gram")
    if res.ndim != 2 or res.shape[0] != res.shape[1]:
        raise MetricError(f"Gram matrices must be square, got {res.shape}")
    bad = sorted({np.shape(t) for t in targets if np.shape(t) != res.shape})
    if bad:
        raise MetricError(f"Gram dimension mismatch: result {res.shape}, targets {bad}")
    tgt = _finite(np.stack([np.asarray(t, dtype=np.float64) for t in targets]), "target Gram")
    diff = tgt - res
    return float(np.mean(np.einsum("nij,nij->n", diff, diff)))


def _vec_pair(a, b) -> tuple[np.ndarray, np.ndarray, float, float]:
    a = _finite(np.asarray(a, dtype=np.float64).ravel(), "embedding")
    b = _finite(np.asarray(b, dtype=np.float64).ravel(), "embedding")
    if a.shape != b.shape:
        raise MetricError(f"embedding dims differ: {a.size} vs {b.size}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise MetricError("zero-norm embedding")
    return a, b, na, nb


def cms(a, b) -> float:
    """Cosine similarity of two content embeddings."""
    a, b, na, nb = _vec_pair(a, b)
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))


def clips(image_emb, text_emb) -> float:
    a, b, na, nb = _vec_pair(image_emb, text_emb)
    return float(100.0 * min(max(a @ b / (na * nb), 0.0), 1.0))


@dataclass(frozen=True)
class GaussianStats:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self) -> None:
        mu = np.asarray(self.mean, dtype=np.float64)
        cov = np.asarray(self.covariance, dtype=np.float64)
        if mu.ndim != 1 or cov.shape != (mu.size, mu.size):
            raise MetricError(f"inconsistent stats shapes {mu.shape}, {cov.shape}")
        object.__setattr__(self, "mean", mu)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return self.mean.size


def gaussian_stats(embeddings) -> GaussianStats:
    """Column mean and unbiased sample covariance of an m x n embedding set."""
    x = _finite(np.asarray(embeddings, dtype=np.float64), "embedding set")
    if x.ndim != 2 or x.shape[0] < 2:
        raise MetricError(f"need an m x n embedding set with m >= 2, got shape {x.shape}")
    mu = x.mean(axis=0)
    centered = x - mu
    cov = centered.T @ centered / (x.shape[0] - 1)
    return GaussianStats(mu, (cov + cov.T) / 2)


def _check_psd(s: np.ndarray, tol: float) -> np.ndarray:
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise MetricError(f"expected a square matrix, got {s.shape}")
    _finite(s, "matrix")
    scale = max(1.0, float(np.max(np.abs(s)))) if s.size else 1.0
    if np.max(np.abs(s - s.T), initial=0.0) > tol * scale:
        raise MetricError("matrix is not symmetric")
    return scale


def matrix_sqrt_psd(s, tol: float = SYM_TOL) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition.

    Eigenvalues in ``[-tol * scale, 0)`` are clamped to zero; anything more
    negative is rejected as indefinite.
    """
    s = np.asarray(s, dtype=np.float64)
    scale = _check_psd(s, tol)
    w, v = np.linalg.eigh((s + s.T) / 2)
    if w.size and w.min() < -tol * scale:
        raise MetricError(f"matrix is indefinite (min eigenvalue {w.min():.3g})")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return (root + root.T) / 2


def fid(a: GaussianStats, b: GaussianStats) -> float:
    """``||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 (S_a S_b)^{1/2})``, clamped at zero.

    The trace of ``(S_a S_b)^{1/2}`` is taken as the trace of the PSD root of
    ``S_a^{1/2} S_b S_a^{1/2}``, which shares its eigenvalues.
    """
    if a.dim != b.dim:
        raise MetricError(f"stats dims differ: {a.dim} vs {b.dim}")
    diff = a.mean - b.mean
    root_a = matrix_sqrt_psd(a.covariance)
    middle = root_a @ b.covariance @ root_a
    cross = np.trace(matrix_sqrt_psd((middle + middle.T) / 2))
    traces = float(np.trace(a.covariance) + np.trace(b.covariance))
    value = float(diff @ diff + traces - 2.0 * cross)
    if value < -FID_CLAMP_TOL * max(1.0, traces):
        raise MetricError(f"FID came out negative beyond tolerance: {value}")
    return max(value, 0.0)


def fid_from_embeddings(x, y) -> float:
    return fid(gaussian_stats(x), gaussian_stats(y))
