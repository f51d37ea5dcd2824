"""Fixed 45-column feature vector: 9 descriptors for each of 5 modes.

Per-mode block order: mean absolute value, sample std, RMS, skewness, excess
kurtosis, zero-crossing rate (per second), Shannon entropy (bits, 64-bin
amplitude histogram), Hjorth mobility, Hjorth complexity. Modes the
decomposition did not produce contribute all-zero blocks.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .emd import ImfDecomposition, count_zero_crossings
from .errors import CacheFormatError, TooShort

FEATURE_NAMES = ("mean_abs", "std", "rms", "skewness", "kurtosis",
                 "zcr_hz", "entropy_bits", "hjorth_mobility", "hjorth_complexity")
N_BLOCKS = 5
N_FEATURES = N_BLOCKS * len(FEATURE_NAMES)  # 45
ENTROPY_BINS = 64


@dataclass(frozen=True)
class FeatureVector:
    """One 45-dimensional row plus the id of the file it came from."""

    values: np.ndarray
    source_id: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if values.shape != (N_FEATURES,):
            raise ValueError(f"feature vector must have exactly {N_FEATURES} values")
        if not np.all(np.isfinite(values)):
            raise ValueError("feature values must be finite")


@dataclass
class LabeledDataset:
    """Feature rows with parallel binary labels (0/1)."""

    features: np.ndarray          # (n, d)
    labels: np.ndarray            # (n,)
    source_ids: list[str] | None = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("labels must parallel the feature rows")
        if not np.isin(self.labels, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
        if self.source_ids is not None and len(self.source_ids) != len(self.labels):
            raise ValueError("source_ids must parallel the feature rows")

    def __len__(self) -> int:
        return self.labels.size

    @classmethod
    def from_feature_vectors(cls, vectors, labels) -> "LabeledDataset":
        rows = np.vstack([v.values for v in vectors]) if vectors else np.empty((0, N_FEATURES))
        return cls(rows, np.asarray(labels), [v.source_id for v in vectors])


def zero_crossing_rate(samples, sample_rate_hz) -> float:
    """Crossings per second: count (emd convention) * rate / (n - 1)."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 2:
        raise TooShort(f"need >= 2 samples, got {x.size}")
    if sample_rate_hz <= 0:
        raise ValueError("sample rate must be positive")
    return count_zero_crossings(x) * sample_rate_hz / (x.size - 1)


def shannon_entropy(samples, bins: int = ENTROPY_BINS) -> float:
    """Entropy in bits of the amplitude histogram over [min, max]."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 2:
        raise TooShort(f"need >= 2 samples, got {x.size}")
    lo, hi = x.min(), x.max()
    if lo == hi:
        return 0.0
    counts, _ = np.histogram(x, bins=bins, range=(lo, hi))
    p = counts[counts > 0] / x.size
    return float(-(p * np.log2(p)).sum())


def hjorth(samples):
    """(activity, mobility, complexity) with 0 fallbacks for flat inputs.

    activity = population variance; mobility = sqrt(var(dx)/var(x));
    complexity = mobility(dx)/mobility(x), dx the first difference.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 3:
        raise TooShort(f"need >= 3 samples, got {x.size}")
    if x.min() == x.max():
        return 0.0, 0.0, 0.0
    var_x = float(np.var(x))
    dx = np.diff(x)
    var_dx = float(np.var(dx))
    mobility = np.sqrt(var_dx / var_x) if var_x > 0 else 0.0
    ddx = np.diff(dx)
    mobility_dx = np.sqrt(float(np.var(ddx)) / var_dx) if var_dx > 0 else 0.0
    complexity = mobility_dx / mobility if mobility > 0 else 0.0
    return var_x, float(mobility), float(complexity)


def _skewness(x: np.ndarray) -> float:
    if x.min() == x.max():
        return 0.0
    c = x - x.mean()
    m2 = np.mean(c * c)
    return float(np.mean(c**3) / m2**1.5)


def _excess_kurtosis(x: np.ndarray) -> float:
    if x.min() == x.max():
        return 0.0
    c = x - x.mean()
    m2 = np.mean(c * c)
    return float(np.mean(c**4) / (m2 * m2) - 3.0)


def _block(x: np.ndarray, sample_rate_hz) -> np.ndarray:
    _, mobility, complexity = hjorth(x)
    return np.array([
        np.mean(np.abs(x)),
        np.std(x, ddof=1),
        np.sqrt(np.mean(x * x)),
        _skewness(x),
        _excess_kurtosis(x),
        zero_crossing_rate(x, sample_rate_hz),
        shannon_entropy(x),
        mobility,
        complexity,
    ])


def extract_feature_vector(dec: ImfDecomposition, sample_rate_hz) -> FeatureVector:
    """45 features from a decomposition; absent modes give zero blocks."""
    width = len(FEATURE_NAMES)
    values = np.zeros(N_FEATURES)
    for b in range(min(N_BLOCKS, len(dec.imfs))):
        values[b * width:(b + 1) * width] = _block(dec.imfs[b], sample_rate_hz)
    return FeatureVector(values=values, source_id=dec.source_id)


# --- feature cache CSV -------------------------------------------------------

CACHE_HEADER = ["source_id"] + [f"f{i + 1}" for i in range(N_FEATURES)] + ["label"]


def write_feature_cache(path, dataset: LabeledDataset) -> None:
    """CSV with 17-significant-digit floats so values round-trip exactly."""
    ids = dataset.source_ids or [""] * len(dataset)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CACHE_HEADER)
        for sid, row, label in zip(ids, dataset.features, dataset.labels):
            writer.writerow([sid] + [f"{v:.17g}" for v in row] + [str(int(label))])


def read_feature_cache(path) -> LabeledDataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CacheFormatError("empty cache file") from None
        if header != CACHE_HEADER:
            raise CacheFormatError("unexpected cache header")
        ids, rows, labels = [], [], []
        for line_no, rec in enumerate(reader, start=2):
            if len(rec) != len(CACHE_HEADER):
                raise CacheFormatError(f"line {line_no}: wrong column count")
            ids.append(rec[0])
            rows.append([float(v) for v in rec[1:-1]])
            if rec[-1] not in ("0", "1"):
                raise CacheFormatError(f"line {line_no}: label must be 0 or 1")
            labels.append(int(rec[-1]))
    if not rows:
        raise CacheFormatError("cache has no data rows")
    return LabeledDataset(np.asarray(rows), np.asarray(labels), ids)
