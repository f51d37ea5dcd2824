"""Envelope-mean sifting into intrinsic mode functions.

The decomposition follows the classic recipe: find local extrema, draw a
cubic envelope through the maxima and another through the minima, subtract
the envelope mean, repeat until the result behaves like a single oscillatory
mode, then peel it off the running residual. Up to five modes are extracted
by default.

Conventions fixed here (and relied on by the tests):

* extrema are strict neighbours; a plateau flanked by strictly smaller
  (larger) values counts once, at its floor midpoint; endpoints never count
* envelopes are natural cubic splines fitted after mirroring the two nearest
  extrema of each kind about both signal endpoints
* a zero crossing is a pair of consecutive samples with strictly opposite
  nonzero signs; zero samples inherit the previous nonzero sign
* a candidate is accepted as a mode when |crossings - extrema| <= 1 and the
  envelope mean stays within 5% of the peak amplitude
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import InsufficientExtrema, InsufficientKnots, TooShort
from .signal import Signal

#: envelope-mean symmetry bound, relative to peak amplitude
SYMMETRY_TOL = 0.05
#: hard cap on sifting iterations per mode
MAX_SIFT_ITERS = 100
#: default number of modes to extract
DEFAULT_MAX_IMFS = 5


@dataclass(frozen=True)
class ExtremaSet:
    """Sample indices of the local maxima and minima of one signal."""

    maxima_idx: np.ndarray
    minima_idx: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "maxima_idx", np.asarray(self.maxima_idx, dtype=np.intp))
        object.__setattr__(self, "minima_idx", np.asarray(self.minima_idx, dtype=np.intp))


@dataclass(frozen=True)
class ImfCheck:
    """Outcome of the mode test, with the counts that went into it."""

    passed: bool
    zero_crossings: int
    n_maxima: int
    n_minima: int
    envelope_ratio: float  # max |envelope mean| / max |signal|, NaN if no envelope

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class ImfDecomposition:
    """Ordered modes plus final residual; imfs + residual reconstruct the input."""

    imfs: list[np.ndarray]
    residual: np.ndarray
    sift_counts: list[int] = field(default_factory=list)
    source_id: str = ""

    def reconstruction(self) -> np.ndarray:
        out = self.residual.copy()
        for imf in self.imfs:
            out += imf
        return out


def find_local_extrema(samples) -> ExtremaSet:
    """Locate strict local maxima and minima.

    Parameters
    ----------
    samples : array_like
        Real sequence, length >= 3.

    Returns
    -------
    ExtremaSet
        Strictly increasing index lists. A plateau (run of equal values
        flanked by strictly smaller/larger ones) yields its midpoint index,
        rounded down. Endpoints are never extrema.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 3:
        raise TooShort(f"need >= 3 samples, got {x.size}")
    d = np.diff(x)
    nz = np.flatnonzero(d != 0.0)
    if nz.size < 2:
        return ExtremaSet(np.empty(0, np.intp), np.empty(0, np.intp))
    a, b = nz[:-1], nz[1:]
    rising = d[a] > 0.0
    falling = d[b] < 0.0
    mid = (a + 1 + b) // 2
    return ExtremaSet(mid[rising & falling], mid[~rising & ~falling])


def spline_envelope(knot_idx, knot_val, n: int) -> np.ndarray:
    """Natural cubic spline through the knots, sampled at positions 0..n-1.

    Parameters
    ----------
    knot_idx : array_like
        Strictly increasing knot positions. May extend beyond [0, n-1]; the
        curve is only evaluated on the integer grid 0..n-1 (end pieces
        extrapolate when a knot range does not cover the grid).
    knot_val : array_like
        Knot values, same length.
    n : int
        Output length.

    Returns
    -------
    ndarray
        Spline values at 0..n-1. Second derivative is zero at the first and
        last knot (natural boundary).
    """
    xk = np.asarray(knot_idx, dtype=np.float64)
    yk = np.asarray(knot_val, dtype=np.float64)
    if xk.size < 2:
        raise InsufficientKnots(f"need >= 2 knots, got {xk.size}")
    if xk.size != yk.size:
        raise ValueError("knot index/value lengths differ")
    if np.any(np.diff(xk) <= 0):
        raise ValueError("knot indices must be strictly increasing")

    m = xk.size
    h = np.diff(xk)
    M = np.zeros(m)  # second derivatives, natural ends stay zero
    if m > 2:
        # tridiagonal system for the interior second derivatives
        diag = (h[:-1] + h[1:]) / 3.0
        off = h[1:-1] / 6.0
        rhs = np.diff(yk) / h
        rhs = rhs[1:] - rhs[:-1]
        ab = np.zeros((3, m - 2))
        ab[0, 1:] = off
        ab[1, :] = diag
        ab[2, :-1] = off
        M[1:-1] = solve_banded((1, 1), ab, rhs)

    t = np.arange(n, dtype=np.float64)
    i = np.clip(np.searchsorted(xk, t, side="right") - 1, 0, m - 2)
    hi = h[i]
    left = xk[i + 1] - t
    right = t - xk[i]
    return (M[i] * left**3 / (6.0 * hi)
            + M[i + 1] * right**3 / (6.0 * hi)
            + (yk[i] / hi - M[i] * hi / 6.0) * left
            + (yk[i + 1] / hi - M[i + 1] * hi / 6.0) * right)


def _mirrored_knots(idx: np.ndarray, vals: np.ndarray, n: int):
    # Reflect the two nearest extrema about each endpoint to tame end swing.
    left_i = np.array([-idx[1], -idx[0]], dtype=np.float64)
    left_v = np.array([vals[1], vals[0]])
    right_i = np.array([2 * (n - 1) - idx[-1], 2 * (n - 1) - idx[-2]], dtype=np.float64)
    right_v = np.array([vals[-1], vals[-2]])
    return (np.concatenate([left_i, idx.astype(np.float64), right_i]),
            np.concatenate([left_v, vals, right_v]))


def mean_envelope(samples) -> np.ndarray:
    """Average of the maxima spline and the minima spline.

    Needs at least 2 maxima and 2 minima; raises InsufficientExtrema
    otherwise.
    """
    x = np.asarray(samples, dtype=np.float64)
    ext = find_local_extrema(x)
    if ext.maxima_idx.size < 2 or ext.minima_idx.size < 2:
        raise InsufficientExtrema(
            f"{ext.maxima_idx.size} maxima / {ext.minima_idx.size} minima")
    n = x.size
    upper = spline_envelope(*_mirrored_knots(ext.maxima_idx, x[ext.maxima_idx], n), n)
    lower = spline_envelope(*_mirrored_knots(ext.minima_idx, x[ext.minima_idx], n), n)
    return 0.5 * (upper + lower)


def count_zero_crossings(samples) -> int:
    """Count sign flips between consecutive samples.

    Only strictly opposite nonzero signs count; zero samples inherit the
    previous nonzero sign (leading zeros have none and never pair).
    """
    s = np.sign(np.asarray(samples, dtype=np.float64))
    nz = s != 0.0
    if not nz.any():
        return 0
    filled = s[np.maximum.accumulate(np.where(nz, np.arange(s.size), 0))]
    return int(np.sum(filled[:-1] * filled[1:] < 0.0))


def _check_candidate(x: np.ndarray):
    """Mode test plus the envelope it computed (None when unavailable)."""
    ext = find_local_extrema(x)
    n_max, n_min = ext.maxima_idx.size, ext.minima_idx.size
    crossings = count_zero_crossings(x)
    envelope = None
    ratio = float("nan")
    if n_max >= 2 and n_min >= 2:
        n = x.size
        upper = spline_envelope(*_mirrored_knots(ext.maxima_idx, x[ext.maxima_idx], n), n)
        lower = spline_envelope(*_mirrored_knots(ext.minima_idx, x[ext.minima_idx], n), n)
        envelope = 0.5 * (upper + lower)
        peak = np.abs(x).max()
        ratio = float(np.abs(envelope).max() / peak) if peak > 0 else float("inf")
    passed = (abs(crossings - (n_max + n_min)) <= 1
              and n_max >= 2 and n_min >= 2
              and ratio <= SYMMETRY_TOL)
    return ImfCheck(passed, crossings, n_max, n_min, ratio), envelope


def is_imf(samples) -> ImfCheck:
    """Test whether a sequence already behaves like a single mode.

    True iff (a) zero crossings and extrema counts differ by at most one and
    (b) there are >= 2 maxima and >= 2 minima whose envelope mean stays
    within SYMMETRY_TOL of the peak amplitude. The returned object is truthy
    exactly when the test passes and carries the diagnostic counts.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 3:
        raise TooShort(f"need >= 3 samples, got {x.size}")
    check, _ = _check_candidate(x)
    return check


def sift(samples, max_iters: int = MAX_SIFT_ITERS):
    """Extract one mode candidate by repeated envelope-mean subtraction.

    Parameters
    ----------
    samples : array_like
        Sequence with >= 2 maxima and >= 2 minima (InsufficientExtrema
        otherwise).
    max_iters : int
        Cap on subtraction steps.

    Returns
    -------
    (ndarray, int)
        The candidate (unchanged input if it already passes the mode test)
        and the number of subtractions performed.
    """
    x = np.asarray(samples, dtype=np.float64)
    ext = find_local_extrema(x)
    if ext.maxima_idx.size < 2 or ext.minima_idx.size < 2:
        raise InsufficientExtrema(
            f"{ext.maxima_idx.size} maxima / {ext.minima_idx.size} minima")

    h = x.copy()
    iters = 0
    while iters < max_iters:
        check, envelope = _check_candidate(h)
        if check.passed or envelope is None:
            break
        h = h - envelope
        iters += 1
    return h, iters


def decompose(signal: Signal, max_imfs: int = DEFAULT_MAX_IMFS) -> ImfDecomposition:
    """Peel off up to `max_imfs` modes from a signal.

    Stops early when the residual runs out of extrema, or when a sift hits
    the iteration cap without passing the mode test (that candidate is
    discarded so every stored mode genuinely passes). The stored modes plus
    the residual always sum back to the input.
    """
    residual = signal.samples.copy()
    imfs: list[np.ndarray] = []
    counts: list[int] = []
    while len(imfs) < max_imfs:
        if residual.size < 3:
            break
        ext = find_local_extrema(residual)
        if ext.maxima_idx.size < 2 or ext.minima_idx.size < 2:
            break
        h, iters = sift(residual)
        if not is_imf(h):
            break
        imfs.append(h)
        counts.append(iters)
        residual = residual - h
    return ImfDecomposition(imfs=imfs, residual=residual, sift_counts=counts,
                            source_id=signal.source_id)


def write_decomposition_csv(path_or_file, signal: Signal, dec: ImfDecomposition) -> None:
    """Debug dump: columns t, input, imf1..imf5, residual (empty for absent modes)."""
    n_cols = max(DEFAULT_MAX_IMFS, len(dec.imfs))
    header = "t,input," + ",".join(f"imf{i + 1}" for i in range(n_cols)) + ",residual"
    rate = signal.sample_rate_hz
    lines = [header]
    for i in range(signal.samples.size):
        cells = [f"{i / rate:.17g}", f"{signal.samples[i]:.17g}"]
        for k in range(n_cols):
            cells.append(f"{dec.imfs[k][i]:.17g}" if k < len(dec.imfs) else "")
        cells.append(f"{dec.residual[i]:.17g}")
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "w", newline="") as fh:
            fh.write(text)
    else:
        path_or_file.write(text)
