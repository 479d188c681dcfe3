"""IF and chirprate reference fields from the moment cubes.

Order 2 gives fields exact on linear chirps; order 3 on quadratic chirps.
Each order comes in two algebraically equivalent forms:

* ``simplified`` - Gaussian-specialized, built purely from the moment cubes
  ``U^(t^j g)``; this is the production path.
* ``general`` - written in terms of derivative-window transforms ``U^(g')``,
  ``U^(g'')``, ``U^(b g')``, ``U^(b^2 g')``, which for the Gaussian reduce to
  moment cubes through ``g' = -t g / sigma^2``.  Kept executable so the two
  routes can be cross-checked to machine precision.

All arithmetic runs in double precision one scale-slab at a time, so complex64
stacks never get fully upcast in memory.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wct import AnalysisGrid, MomentCubeStack

__all__ = [
    "ReferenceFields",
    "DerivativeCubes",
    "derivative_cubes",
    "second_order_fields",
    "third_order_fields",
]

DEFAULT_EPS_U = 1e-3   # on-mask requires |U| above this fraction of max|U|
DEFAULT_EPS_D = 1e-6   # and the denominator above this fraction of (max|U|)^2


@dataclass(frozen=True)
class ReferenceFields:
    """Per-cell IF (Hz) and chirprate (Hz/s) estimates with a validity mask.

    Off-mask cells hold zeros and must not be read; the squeeze step ignores
    them entirely.
    """

    order: int
    if_field: np.ndarray
    cr_field: np.ndarray
    mask: np.ndarray
    grid: AnalysisGrid

    def __post_init__(self):
        if self.order not in (2, 3):
            raise ValueError("order must be 2 or 3")


@dataclass(frozen=True)
class DerivativeCubes:
    """Transforms with the derivative windows, derived from moment cubes."""

    g1: np.ndarray      # window g'
    g2: np.ndarray      # window g''
    bg1: np.ndarray     # window t g'
    b2g1: np.ndarray    # window t^2 g'


def derivative_cubes(stack: MomentCubeStack) -> DerivativeCubes:
    """Gaussian derivative-window cubes.

    ``g' = -(t/s^2) g`` makes every derivative window a moment window:
    U^(g') = -U^(bg)/s^2, U^(g'') = -U^g/s^2 + U^(b^2 g)/s^4,
    U^(bg') = -U^(b^2 g)/s^2, U^(b^2 g') = -U^(b^3 g)/s^2.
    """
    u0, u1, u2, u3, _u4 = stack.cubes
    inv2 = 1.0 / stack.sigma**2
    return DerivativeCubes(
        g1=-inv2 * np.asarray(u1),
        g2=-inv2 * np.asarray(u0) + inv2 * inv2 * np.asarray(u2),
        bg1=-inv2 * np.asarray(u2),
        b2g1=-inv2 * np.asarray(u3),
    )


def _slab(cube: np.ndarray, j: int) -> np.ndarray:
    return np.asarray(cube[j], dtype=np.complex128)


def _real_of_ratio(num: np.ndarray, den: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Re(num / (i 2 pi den)) where mask holds, zero elsewhere.

    For z = num/den, Re(z / (i 2 pi)) = Im(z) / (2 pi).
    """
    out = np.zeros(num.shape, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = num / den
    np.divide(ratio.imag, 2.0 * np.pi, out=out, where=mask)
    return out


def _thresholds(stack: MomentCubeStack, eps_u: float, eps_d: float,
                eps_u_abs: float | None, eps_d_abs: float | None):
    peak = float(np.abs(stack.cubes[0]).max())
    tu = eps_u_abs if eps_u_abs is not None else eps_u * peak
    td = eps_d_abs if eps_d_abs is not None else eps_d * peak * peak
    return tu, td


def second_order_fields(stack: MomentCubeStack, mode: str = "simplified",
                        eps_u: float = DEFAULT_EPS_U, eps_d: float = DEFAULT_EPS_D,
                        eps_u_abs: float | None = None,
                        eps_d_abs: float | None = None) -> ReferenceFields:
    """Order-2 fields (exact on linear chirps)."""
    if mode not in ("simplified", "general"):
        raise ValueError(f"unknown mode {mode!r}")
    grid = stack.grid
    tu, td = _thresholds(stack, eps_u, eps_d, eps_u_abs, eps_d_abs)
    shape = stack.shape
    if_field = np.zeros(shape, dtype=np.float64)
    cr_field = np.zeros(shape, dtype=np.float64)
    mask = np.zeros(shape, dtype=bool)
    inv2 = 1.0 / stack.sigma**2
    lam = grid.chirprates[None, :]
    for j in range(grid.j0):
        a = grid.scales[j]
        u0 = _slab(stack.cubes[0], j)
        u1 = _slab(stack.cubes[1], j)
        u2 = _slab(stack.cubes[2], j)
        if mode == "simplified":
            den = u1 * u1 - u0 * u2
            num_if = u0 * u1
            num_cr = u0 * u0
        else:
            g1 = -inv2 * u1
            g2 = -inv2 * u0 + inv2 * inv2 * u2
            bg1 = -inv2 * u2
            ichirp = 2j * np.pi * lam * (a * a)
            den = g1 * u1 - u0 * bg1 + ichirp * (u2 * u0 - u1 * u1)
            num_if = u1 * g2 - bg1 * g1 + ichirp * (u2 * g1 - bg1 * u1 - u1 * u0)
            num_cr = u0 * g2 - g1 * g1 + ichirp * (u1 * g1 - bg1 * u0 - u0 * u0)
        m = (np.abs(u0) > tu) & (np.abs(den) > td)
        corr_if = _real_of_ratio(num_if, den, m)
        corr_cr = _real_of_ratio(num_cr, den, m)
        if_field[j] = np.where(m, grid.mu / a - corr_if / a, 0.0)
        cr_field[j] = np.where(m, lam + corr_cr / (a * a), 0.0)
        mask[j] = m
    return ReferenceFields(order=2, if_field=if_field, cr_field=cr_field,
                           mask=mask, grid=grid)


def third_order_fields(stack: MomentCubeStack, mode: str = "simplified",
                       eps_u: float = DEFAULT_EPS_U, eps_d: float = DEFAULT_EPS_D,
                       eps_u_abs: float | None = None,
                       eps_d_abs: float | None = None) -> ReferenceFields:
    """Order-3 fields (exact on quadratic chirps)."""
    if mode not in ("simplified", "general"):
        raise ValueError(f"unknown mode {mode!r}")
    grid = stack.grid
    tu, td = _thresholds(stack, eps_u, eps_d, eps_u_abs, eps_d_abs)
    shape = stack.shape
    if_field = np.zeros(shape, dtype=np.float64)
    cr_field = np.zeros(shape, dtype=np.float64)
    mask = np.zeros(shape, dtype=bool)
    inv2 = 1.0 / stack.sigma**2
    lam = grid.chirprates[None, :]
    for j in range(grid.j0):
        a = grid.scales[j]
        u0 = _slab(stack.cubes[0], j)
        u1 = _slab(stack.cubes[1], j)
        u2 = _slab(stack.cubes[2], j)
        u3 = _slab(stack.cubes[3], j)
        u4 = _slab(stack.cubes[4], j)
        if mode == "simplified":
            num_if = 2.0 * u0 * u1 * (u3 * u1 - u2 * u2) + u0 * u0 * (u2 * u3 - u1 * u4)
            num_cr = 2.0 * u0 * u1 * (u3 * u0 - u1 * u2) + u0 * u0 * (u2 * u2 - u0 * u4)
            den = (u3 * u0 - u2 * u1) ** 2 + (u2 * u2 - u4 * u0) * (u2 * u0 - u1 * u1)
            m = (np.abs(u0) > tu) & (np.abs(den) > td)
            corr_if = _real_of_ratio(num_if, den, m)
            corr_cr = _real_of_ratio(num_cr, den, m)
            if_field[j] = np.where(m, grid.mu / a + corr_if / a, 0.0)
            cr_field[j] = np.where(m, lam - corr_cr / (a * a), 0.0)
        else:
            g1 = -inv2 * u1
            g2 = -inv2 * u0 + inv2 * inv2 * u2
            bg1 = -inv2 * u2
            b2g1 = -inv2 * u3
            ipi_half = 0.5j * np.pi
            lpa = (np.pi**2 * a * a) * lam
            den = (ipi_half * (u1 * u2 - u3 * u0) * (u2 * g1 - b2g1 * u0)
                   - ipi_half * (u2 * u2 - u0 * u4) * (g1 * u1 - bg1 * u0)
                   + lpa * (u3 * u0 - u1 * u2) ** 2
                   + lpa * (u2 * u2 - u0 * u4) * (u2 * u0 - u1 * u1))
            a1 = b2g1 * u0 - g1 * u2 + 2.0 * u1 * u0
            a2 = g2 * u0 - g1 * g1
            a3 = u1 * g1 - bg1 * u0 - u0 * u0
            num_if = (ipi_half * a1 * (u2 * bg1 - b2g1 * u1)
                      + ipi_half * a2 * (u4 * u1 - u3 * u2)
                      + lpa * a1 * (u2 * u2 - u3 * u1)
                      + lpa * a3 * (u3 * u2 - u1 * u4))
            num_cr = (ipi_half * a1 * (u2 * g1 - b2g1 * u0)
                      + ipi_half * a2 * (u4 * u0 - u2 * u2)
                      + lpa * a1 * (u1 * u2 - u3 * u0)
                      + lpa * a3 * (u2 * u2 - u0 * u4))
            m = (np.abs(u0) > tu) & (np.abs(den) > td)
            # Theta = mu/a - (1/a) Re[(g1/u0 + num_if/den) / (i 2 pi)]
            corr_if = _real_of_ratio(g1, u0, m) + _real_of_ratio(num_if, den, m)
            corr_cr = _real_of_ratio(num_cr, den, m)
            if_field[j] = np.where(m, grid.mu / a - corr_if / a, 0.0)
            cr_field[j] = np.where(m, lam + corr_cr / (a * a), 0.0)
        mask[j] = m
    return ReferenceFields(order=3, if_field=if_field, cr_field=cr_field,
                           mask=mask, grid=grid)
