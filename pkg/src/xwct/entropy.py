"""Renyi-entropy concentration measure and automatic window-width selection.

The order-ell entropy of the (scale, time, chirprate) energy distribution is

    E = (log2 sum w |U|^(2 ell) - ell log2 sum w |U|^2) / (1 - ell)

with the cell measure ``w = (da)_j / a_j * dt * dlam`` mirroring the
continuous ``da/a db dlam``.  Smaller E means a more concentrated transform;
the window width sigma is chosen at the minimum of E over a coarse-then-fine
sweep.  Each candidate costs a full j=0 cube, so the sweep streams over
scales and skips those provably negligible for the given signal spectrum.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal import SampledSignal
from .wct import AnalysisGrid, MomentCubeStack
from .window import GaussianWindow, pft_moment_parts

__all__ = ["EntropyCurve", "renyi_entropy", "select_sigma", "entropy_for_sigma"]

DEFAULT_ELL = 2.5
DEFAULT_RANGE = (0.5, 12.0)


@dataclass(frozen=True)
class EntropyCurve:
    """Sampled entropy-vs-sigma curve and its minimizer."""

    sigmas: np.ndarray
    entropies: np.ndarray
    sigma0: float
    at_boundary: bool


def entropy_from_weighted_abs2(abs2: np.ndarray, weights: np.ndarray,
                               ell: float) -> float:
    """Entropy of |U|^2 cells under explicit nonnegative weights."""
    if ell <= 1:
        raise ValueError("entropy order ell must exceed 1")
    s_lo = float(np.sum(weights * abs2))
    if s_lo <= 0:
        raise ValueError("entropy undefined for an identically zero transform")
    s_hi = float(np.sum(weights * abs2**ell))
    return (np.log2(s_hi) - ell * np.log2(s_lo)) / (1.0 - ell)


def _cell_weights(grid: AnalysisGrid) -> np.ndarray:
    return grid.scale_weights() * grid.dt * grid.delta_lambda


def renyi_entropy(stack: MomentCubeStack, ell: float = DEFAULT_ELL) -> float:
    """Entropy of the j = 0 cube of a computed stack."""
    abs2 = np.square(np.abs(stack.cubes[0]).astype(np.float64))
    w = _cell_weights(stack.grid)[:, None, None]
    return entropy_from_weighted_abs2(abs2, w, ell)


def _scale_bounds(window: GaussianWindow, grid: AnalysisGrid,
                  xhat_abs: np.ndarray) -> np.ndarray:
    """Upper bound on max_(m,l) |U| per scale, used to skip empty scales.

    |U| <= (1/N) sum_k |xhat_k| |G_k| and |G_k| <= exp(-2 pi^2 s^2 eta'^2 / d)
    with d the largest chirp broadening on the lambda grid.
    """
    s = window.sigma
    lam_max = np.abs(grid.chirprates).max()
    d = 1.0 + np.square(2.0 * np.pi * s * s * grid.scales**2 * lam_max)
    eta_shift = grid.mu - grid.scales[:, None] * grid.eta[None, :]
    with np.errstate(under="ignore"):
        env = np.exp(-(2.0 * np.pi**2 * s * s) * np.square(eta_shift) / d[:, None])
    return env @ xhat_abs / grid.n


def entropy_for_sigma(x: SampledSignal, sigma: float, grid: AnalysisGrid,
                      ell: float = DEFAULT_ELL, skip_tol: float = 1e-8) -> float:
    """Entropy of the j = 0 cube without materializing it.

    Streams one scale at a time; scales whose bounded peak magnitude is below
    ``skip_tol`` of the largest bound contribute nothing at double precision
    and are skipped (set ``skip_tol=0`` to disable).
    """
    window = GaussianWindow(sigma)
    xhat = np.fft.fft(x.samples)
    bounds = _scale_bounds(window, grid, np.abs(xhat))
    keep = bounds >= skip_tol * bounds.max() if skip_tol > 0 else np.ones(grid.j0, bool)
    w_scale = _cell_weights(grid)
    s_lo = 0.0
    s_hi = 0.0
    for j in np.flatnonzero(keep):
        a = grid.scales[j]
        E, w, _u = pft_moment_parts(window, grid.mu - a * grid.eta[None, :],
                                    (a * a) * grid.chirprates[:, None])
        rows = np.fft.ifft(xhat[None, :] * (w * E), axis=-1)
        abs2 = np.square(rows.real) + np.square(rows.imag)
        s_lo += w_scale[j] * float(abs2.sum())
        s_hi += w_scale[j] * float((abs2**ell).sum())
    if s_lo <= 0:
        raise ValueError("entropy undefined for an identically zero transform")
    return (np.log2(s_hi) - ell * np.log2(s_lo)) / (1.0 - ell)


def select_sigma(x: SampledSignal, grid: AnalysisGrid,
                 sigma_range: tuple[float, float] = DEFAULT_RANGE,
                 coarse_step: float = 0.5, fine_step: float = 0.05,
                 ell: float = DEFAULT_ELL) -> EntropyCurve:
    """Minimize the entropy over sigma: coarse sweep, then a +-0.5 refinement.

    When the minimum sits at an end of the search range the curve is returned
    with ``at_boundary`` set rather than raising; callers decide whether a
    monotone curve is acceptable.
    """
    lo, hi = sigma_range
    if not (0 < lo < hi):
        raise ValueError("need 0 < sigma_lo < sigma_hi")
    coarse = np.arange(lo, hi + 1e-9, coarse_step)
    values = {s: entropy_for_sigma(x, s, grid, ell) for s in coarse}
    center = min(values, key=values.get)
    fine = np.arange(max(lo, center - 0.5), min(hi, center + 0.5) + 1e-9, fine_step)
    for s in fine:
        s = float(round(s, 9))
        if s not in values:
            values[s] = entropy_for_sigma(x, s, grid, ell)
    sigmas = np.array(sorted(values))
    entropies = np.array([values[s] for s in sigmas])
    best = int(np.argmin(entropies))
    sigma0 = float(sigmas[best])
    at_boundary = best in (0, sigmas.size - 1)
    return EntropyCurve(sigmas=sigmas, entropies=entropies, sigma0=sigma0,
                        at_boundary=at_boundary)
