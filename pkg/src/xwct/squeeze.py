"""Synchrosqueezing: reassign cube mass onto (frequency, chirprate) bins.

Every on-mask cell (j, m, l) of a source cube contributes its value times
the cell measure ``(da)_j / a_j * dlam`` to the single (frequency, chirprate)
bin named by the reference fields at that cell; contributions falling outside
either bin grid are dropped.  Binning is exact bookkeeping, so total binned
mass equals total masked in-range source mass by construction.

The multiple (iterated) squeeze composes the reference fields with themselves
n-1 times - evaluating the original fields at the reassigned coordinates,
snapped to the nearest grid cell - and then squeezes the original cube once
with the composed fields.

Bins are per-time independent, so everything streams over blocks of time
samples; peak memory stays far below the cube size.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .reassign import ReferenceFields
from .wct import AnalysisGrid

__all__ = [
    "SqueezedCube",
    "synchrosqueeze",
    "multi_squeeze",
    "compose_fields",
    "squeeze_bin_indices",
]

_TIME_BLOCK = 64


@dataclass(frozen=True)
class SqueezedCube:
    """(frequency, time, chirprate-bin) cube; complex for WCT sources,
    nonnegative real for XWCT magnitude sources."""

    values: np.ndarray
    gamma_grid: np.ndarray
    grid: AnalysisGrid
    source: str
    freq_bins: str

    @property
    def freqs(self) -> np.ndarray:
        return self.grid.freqs


def _gamma_grid_default(grid: AnalysisGrid, delta_gamma: float | None):
    if delta_gamma is None or delta_gamma == grid.delta_lambda:
        return grid.chirprates.copy(), grid.delta_lambda
    n_bins = int(np.floor(2.0 * grid.r0 / delta_gamma))
    if n_bins < 1:
        raise ValueError("delta_gamma too large for the chirprate range")
    return -grid.r0 + np.arange(n_bins) * delta_gamma, delta_gamma


def _freq_edges(grid: AnalysisGrid, freq_bins: str) -> np.ndarray:
    if freq_bins == "log":
        return grid.freq_bin_edges()
    if freq_bins == "uniform":
        lo, hi = grid.freqs[0], grid.freqs[-1]
        step = (hi - lo) / max(grid.j0 - 1, 1)
        return np.concatenate(([lo - 0.5 * step],
                               lo + (np.arange(grid.j0 - 1) + 0.5) * step,
                               [hi + 0.5 * step]))
    raise ValueError(f"unknown freq_bins {freq_bins!r}")


def squeeze_bin_indices(fields: ReferenceFields, grid: AnalysisGrid,
                        gamma_grid: np.ndarray, delta_gamma: float,
                        freq_bins: str = "log", time_slice: slice = slice(None)):
    """Target bins for each cell of a time block: (freq_idx, gamma_idx, valid).

    Frequency bins are the half-open cells (edge_(k-1), edge_k] around the
    grid frequencies; ties at an edge go to the lower bin.  Chirprate bins are
    nearest-neighbor with midpoint ties to the lower index.  ``valid`` is the
    field mask restricted to in-range targets.
    """
    edges = _freq_edges(grid, freq_bins)
    f = fields.if_field[:, time_slice, :]
    k_idx = np.searchsorted(edges[1:-1], f, side="left")
    f_ok = (f > edges[0]) & (f <= edges[-1])
    cr = fields.cr_field[:, time_slice, :]
    u = (cr + grid.r0) / delta_gamma
    p_idx = np.ceil(u - 0.5).astype(np.int64)
    p_ok = (p_idx >= 0) & (p_idx < gamma_grid.size)
    np.clip(p_idx, 0, gamma_grid.size - 1, out=p_idx)
    p_ok &= np.abs(cr - gamma_grid[p_idx]) <= 0.5 * delta_gamma + 1e-12
    valid = fields.mask[:, time_slice, :] & f_ok & p_ok
    return k_idx, p_idx, valid


def synchrosqueeze(source: np.ndarray, fields: ReferenceFields, grid: AnalysisGrid,
                   delta_gamma: float | None = None, freq_bins: str = "log",
                   source_label: str = "wct") -> SqueezedCube:
    """Bin a (J0, N, L) value cube onto (J0, N, P) frequency/chirprate bins."""
    if source.shape != fields.if_field.shape:
        raise ValueError("source cube and fields must share a shape")
    gamma_grid, dgam = _gamma_grid_default(grid, delta_gamma)
    j0, n, _ = source.shape
    p = gamma_grid.size
    is_complex = np.iscomplexobj(source)
    out = np.zeros((j0, n, p), dtype=np.complex128 if is_complex else np.float64)
    weights = (grid.scale_weights() * grid.delta_lambda)[:, None, None]
    for lo in range(0, n, _TIME_BLOCK):
        block = slice(lo, min(lo + _TIME_BLOCK, n))
        nb = block.stop - block.start
        k_idx, p_idx, valid = squeeze_bin_indices(fields, grid, gamma_grid, dgam,
                                                  freq_bins, block)
        m_local = np.broadcast_to(np.arange(nb)[None, :, None], valid.shape)
        flat = ((k_idx.astype(np.int64) * nb + m_local) * p + p_idx)[valid]
        w_cell = np.broadcast_to(weights, valid.shape)[valid]
        vals = source[:, block, :][valid]
        size = j0 * nb * p
        if is_complex:
            vals = vals.astype(np.complex128) * w_cell
            acc = (np.bincount(flat, weights=vals.real, minlength=size)
                   + 1j * np.bincount(flat, weights=vals.imag, minlength=size))
        else:
            acc = np.bincount(flat, weights=vals.astype(np.float64) * w_cell,
                              minlength=size)
        out[:, block, :] = acc.reshape(j0, nb, p)
    return SqueezedCube(values=out, gamma_grid=gamma_grid, grid=grid,
                        source=source_label, freq_bins=freq_bins)


def compose_fields(fields: ReferenceFields, n: int) -> ReferenceFields:
    """Iterate the reassignment map n-1 times through grid snapping.

    Each step evaluates the *original* fields at (mu/IF, b, CR) of the
    previous step, with the scale snapped to the nearest log-grid index and
    the chirprate to the nearest bin; lookups landing off-grid, or on masked
    cells, are masked out.
    """
    if n < 1:
        raise ValueError("need at least one squeeze iteration")
    if n == 1:
        return fields
    grid = fields.grid
    shape = fields.if_field.shape
    if_out = np.zeros(shape, dtype=np.float64)
    cr_out = np.zeros(shape, dtype=np.float64)
    mask_out = np.zeros(shape, dtype=bool)
    for lo in range(0, shape[1], _TIME_BLOCK):
        block = slice(lo, min(lo + _TIME_BLOCK, shape[1]))
        if_cur = fields.if_field[:, block, :]
        cr_cur = fields.cr_field[:, block, :]
        mask_cur = fields.mask[:, block, :].copy()
        m_idx = np.broadcast_to(np.arange(block.start, block.stop)[None, :, None],
                                if_cur.shape)
        for _ in range(n - 1):
            safe_if = np.where(if_cur > 0, if_cur, 1.0)
            j_next = grid.nearest_scale_for(grid.mu / safe_if)
            j_next = np.where(if_cur > 0, j_next, -1)
            l_next = grid.nearest_chirprate(cr_cur)
            ok = mask_cur & (j_next >= 0) & (l_next >= 0)
            src = (np.where(ok, j_next, 0), m_idx, np.where(ok, l_next, 0))
            ok &= fields.mask[src]
            if_cur = np.where(ok, fields.if_field[src], 0.0)
            cr_cur = np.where(ok, fields.cr_field[src], 0.0)
            mask_cur = ok
        if_out[:, block, :] = if_cur
        cr_out[:, block, :] = cr_cur
        mask_out[:, block, :] = mask_cur
    return ReferenceFields(order=fields.order, if_field=if_out, cr_field=cr_out,
                           mask=mask_out, grid=grid)


def multi_squeeze(source: np.ndarray, fields: ReferenceFields, grid: AnalysisGrid,
                  n: int, delta_gamma: float | None = None,
                  freq_bins: str = "log", source_label: str = "mswct") -> SqueezedCube:
    """n-fold synchrosqueeze via composed fields; n = 1 is the plain squeeze."""
    composed = compose_fields(fields, n)
    return synchrosqueeze(source, composed, grid, delta_gamma, freq_bins,
                          source_label=f"{source_label}:{n}")
