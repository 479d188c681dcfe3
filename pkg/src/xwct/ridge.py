"""Greedy 3D ridge extraction from a squeezed cube.

Each ridge is a per-time path of (frequency bin, chirprate bin) pairs.  A
round seeds at the global magnitude maximum of the remaining cube, grows the
path forward and backward in time inside a bounded jump window with a
quadratic move penalty, then zeroes a guard tube around the extracted path so
the next round locks onto a different component.  Deterministic throughout:
ties resolve to the first candidate in (frequency, chirprate) scan order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .squeeze import SqueezedCube

__all__ = ["RidgeSet", "extract_ridges"]


@dataclass(frozen=True)
class RidgeSet:
    """K extracted ridges: bin indices and their physical values."""

    freq_idx: np.ndarray    # (K, N) indices into the ascending frequency grid
    cr_idx: np.ndarray      # (K, N) indices into the chirprate-bin grid
    if_hz: np.ndarray       # (K, N) frequency values at the ridge
    cr_hzs: np.ndarray      # (K, N) chirprate values at the ridge
    duplicated: np.ndarray  # (K,) True where the cube ran out of ridges

    @property
    def k(self) -> int:
        return self.freq_idx.shape[0]

    @property
    def n(self) -> int:
        return self.freq_idx.shape[1]


def _step(work, m, k_prev, p_prev, jump_f, jump_c, penalty):
    k_lo, k_hi = max(0, k_prev - jump_f), min(work.shape[0], k_prev + jump_f + 1)
    p_lo, p_hi = max(0, p_prev - jump_c), min(work.shape[2], p_prev + jump_c + 1)
    win = work[k_lo:k_hi, m, p_lo:p_hi]
    kk = np.arange(k_lo, k_hi)[:, None] - k_prev
    pp = np.arange(p_lo, p_hi)[None, :] - p_prev
    score = win - penalty * (kk * kk + pp * pp)
    flat = int(np.argmax(score))
    dk, dp = divmod(flat, score.shape[1])
    return k_lo + dk, p_lo + dp


def _march(work, seed_k, seed_m, seed_p, jump_f, jump_c, penalty):
    n = work.shape[1]
    ks = np.empty(n, dtype=np.int64)
    ps = np.empty(n, dtype=np.int64)
    ks[seed_m], ps[seed_m] = seed_k, seed_p
    for m in range(seed_m + 1, n):
        ks[m], ps[m] = _step(work, m, ks[m - 1], ps[m - 1], jump_f, jump_c, penalty)
    for m in range(seed_m - 1, -1, -1):
        ks[m], ps[m] = _step(work, m, ks[m + 1], ps[m + 1], jump_f, jump_c, penalty)
    return ks, ps


def extract_ridges(cube: SqueezedCube, k: int, jump_f: int = 3, jump_c: int = 3,
                   smooth_penalty: float | None = None) -> RidgeSet:
    """Extract ``k`` ridges, strongest first, then sort by initial frequency.

    ``smooth_penalty`` defaults to 0.05 * max |cube|.  If fewer distinct
    ridges remain than requested, the last path is duplicated and flagged.
    """
    if k < 1:
        raise ValueError("need at least one ridge")
    work = np.abs(cube.values).astype(np.float64)
    if not np.any(work > 0):
        raise ValueError("cannot extract ridges from an all-zero cube")
    penalty = 0.05 * float(work.max()) if smooth_penalty is None else smooth_penalty
    n = work.shape[1]
    paths = []
    duplicated = np.zeros(k, dtype=bool)
    for r in range(k):
        peak = float(work.max())
        if peak <= 0.0:
            duplicated[r] = True
            paths.append(paths[-1])
            continue
        seed = np.unravel_index(int(np.argmax(work)), work.shape)
        ks, ps = _march(work, seed[0], seed[1], seed[2], jump_f, jump_c, penalty)
        paths.append((ks, ps))
        for m in range(n):
            work[max(0, ks[m] - jump_f):ks[m] + jump_f + 1, m,
                 max(0, ps[m] - jump_c):ps[m] + jump_c + 1] = 0.0
    freq_idx = np.stack([p[0] for p in paths])
    cr_idx = np.stack([p[1] for p in paths])
    # label components by frequency at the first interior time
    order = np.argsort(freq_idx[:, n // 8], kind="stable")
    freq_idx, cr_idx, duplicated = freq_idx[order], cr_idx[order], duplicated[order]
    return RidgeSet(freq_idx=freq_idx, cr_idx=cr_idx,
                    if_hz=cube.freqs[freq_idx], cr_hzs=cube.gamma_grid[cr_idx],
                    duplicated=duplicated)
