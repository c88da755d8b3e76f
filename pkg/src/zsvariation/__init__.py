"""Zero-shot stylized image variation: pipeline orchestration and evaluation metrics."""

from .dataset import DatasetManifest, ExclusionMask, ImageRecord, StyleId, load_manifest, select_pairs, style_stats
from .metrics import GaussianStats, clips, cms, fid, gaussian_stats, gram, matrix_sqrt_psd, sml

__version__ = "0.1.0"

__all__ = [
    "DatasetManifest",
    "ExclusionMask",
    "GaussianStats",
    "ImageRecord",
    "StyleId",
    "clips",
    "cms",
    "fid",
    "gaussian_stats",
    "gram",
    "load_manifest",
    "matrix_sqrt_psd",
    "select_pairs",
    "sml",
    "style_stats",
]
