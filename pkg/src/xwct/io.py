"""File formats: binary cube dumps, text slice exports, manifests.

Cube dump layout (little-endian throughout):
  magic   5 bytes  b"XWCT1"
  kind    1 byte   b"C" complex payload / b"R" real payload
  dims    3 x int64   J0, N, L
  grids   float64     scales (J0), times (N), chirprates (L)
  payload row-major float64; complex values interleaved re, im
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .wct import AnalysisGrid

MAGIC = b"XWCT1"

__all__ = [
    "write_cube", "read_cube", "write_scale_slice", "write_time_slice",
    "write_ridges", "write_modes", "write_entropy_curve", "sha256_of",
    "write_manifest",
]


def write_cube(path, values: np.ndarray, grid: AnalysisGrid) -> None:
    if values.ndim != 3:
        raise ValueError("cube must be 3-d")
    kind = b"C" if np.iscomplexobj(values) else b"R"
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(kind)
        np.asarray(values.shape, dtype="<i8").tofile(fh)
        grid.scales.astype("<f8").tofile(fh)
        grid.times.astype("<f8").tofile(fh)
        grid.chirprates.astype("<f8").tofile(fh)
        if kind == b"C":
            values.astype("<c16").tofile(fh)
        else:
            values.astype("<f8").tofile(fh)


def read_cube(path):
    """Returns (values, scales, times, chirprates)."""
    with open(path, "rb") as fh:
        magic = fh.read(5)
        if magic != MAGIC:
            raise ValueError(f"{path}: not a cube dump (magic {magic!r})")
        kind = fh.read(1)
        dims = np.fromfile(fh, dtype="<i8", count=3)
        j0, n, n_lam = (int(d) for d in dims)
        scales = np.fromfile(fh, dtype="<f8", count=j0)
        times = np.fromfile(fh, dtype="<f8", count=n)
        chirprates = np.fromfile(fh, dtype="<f8", count=n_lam)
        count = j0 * n * n_lam
        if kind == b"C":
            values = np.fromfile(fh, dtype="<c16", count=count)
        elif kind == b"R":
            values = np.fromfile(fh, dtype="<f8", count=count)
        else:
            raise ValueError(f"{path}: unknown payload kind {kind!r}")
    if values.size != count:
        raise ValueError(f"{path}: truncated payload")
    return values.reshape(j0, n, n_lam), scales, times, chirprates


def _rows(fh, header, columns):
    fh.write(header + "\n")
    for row in zip(*columns):
        fh.write(",".join(repr(float(c)) for c in row) + "\n")


def write_scale_slice(path, values: np.ndarray, grid: AnalysisGrid,
                      scale_index: int) -> None:
    """Fixed-scale (time, chirprate) plane as `b,lambda,abs,re,im` rows."""
    plane = np.asarray(values[scale_index], dtype=np.complex128)
    bb, ll = np.meshgrid(grid.times, grid.chirprates, indexing="ij")
    flat = plane.ravel()
    with open(path, "w") as fh:
        _rows(fh, "b,lambda,abs,re,im",
              (bb.ravel(), ll.ravel(), np.abs(flat), flat.real, flat.imag))


def write_time_slice(path, values: np.ndarray, freqs: np.ndarray,
                     gamma_grid: np.ndarray, time_index: int) -> None:
    """Fixed-time (frequency, chirprate-bin) plane as `xi,gamma,abs,re,im`."""
    plane = np.asarray(values[:, time_index, :], dtype=np.complex128)
    xx, gg = np.meshgrid(freqs, gamma_grid, indexing="ij")
    flat = plane.ravel()
    with open(path, "w") as fh:
        _rows(fh, "xi,gamma,abs,re,im",
              (xx.ravel(), gg.ravel(), np.abs(flat), flat.real, flat.imag))


def write_ridges(path, times: np.ndarray, if_hz: np.ndarray,
                 cr_hzs: np.ndarray) -> None:
    """Same schema as the signal truth table, so files diff directly."""
    k = if_hz.shape[0]
    header = "t," + ",".join(f"if_{i + 1},cr_{i + 1}" for i in range(k))
    cols = [times]
    for i in range(k):
        cols.append(if_hz[i])
        cols.append(cr_hzs[i])
    with open(path, "w") as fh:
        _rows(fh, header, cols)


def write_modes(path, times: np.ndarray, series: np.ndarray) -> None:
    k = series.shape[0]
    header = "t," + ",".join(f"re_{i + 1},im_{i + 1}" for i in range(k))
    cols = [times]
    for i in range(k):
        cols.append(series[i].real)
        cols.append(series[i].imag)
    with open(path, "w") as fh:
        _rows(fh, header, cols)


def write_entropy_curve(path, sigmas: np.ndarray, entropies: np.ndarray) -> None:
    with open(path, "w") as fh:
        _rows(fh, "sigma,entropy", (sigmas, entropies))


def sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(path, config: dict, files) -> None:
    """JSON manifest: full configuration plus name/size/sha256 per file."""
    entries = [{
        "name": f.name,
        "bytes": f.stat().st_size,
        "sha256": sha256_of(f),
    } for f in sorted(files, key=lambda f: f.name)]
    payload = {"config": config, "files": entries}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
