"""Synthetic multicomponent signals with exact phase-derivative ground truth.

Components are complex exponentials ``A exp(i 2 pi phi(t))`` with phase given
in cycles, so the instantaneous frequency ``phi'`` is in Hz and the chirprate
``phi''`` in Hz/s.  Both derivatives are analytic, never finite-differenced.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PolynomialPhase",
    "SinusoidalPhase",
    "ComponentSpec",
    "SampledSignal",
    "synthesize",
    "example_signal",
    "write_signal",
    "read_signal",
    "write_truth",
]


@dataclass(frozen=True)
class PolynomialPhase:
    """Cubic phase ``phi(t) = c0 + c1 t + c2 t^2 + c3 t^3`` (cycles)."""

    c0: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0

    def phase(self, t):
        return self.c0 + t * (self.c1 + t * (self.c2 + t * self.c3))

    def if_hz(self, t):
        return self.c1 + t * (2.0 * self.c2 + t * (3.0 * self.c3))

    def cr_hzs(self, t):
        return 2.0 * self.c2 + 6.0 * self.c3 * t


@dataclass(frozen=True)
class SinusoidalPhase:
    """Phase ``phi(t) = alpha t + sign * beta sin(omega t)`` (cycles)."""

    alpha: float
    beta: float
    omega: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")

    def phase(self, t):
        return self.alpha * t + self.sign * self.beta * np.sin(self.omega * t)

    def if_hz(self, t):
        return self.alpha + self.sign * self.beta * self.omega * np.cos(self.omega * t)

    def cr_hzs(self, t):
        return -self.sign * self.beta * self.omega**2 * np.sin(self.omega * t)


@dataclass(frozen=True)
class ComponentSpec:
    """One mode: a phase model plus a constant amplitude.

    Amplitude is constant by design; a time-varying profile would slot in
    here but nothing downstream generates one.
    """

    phase: PolynomialPhase | SinusoidalPhase
    amplitude: float = 1.0

    def __post_init__(self):
        if not (self.amplitude > 0):
            raise ValueError("amplitude must be positive")


@dataclass(frozen=True)
class SampledSignal:
    """Uniformly sampled complex signal with optional per-component truth.

    ``truth_if``/``truth_cr`` have shape (K, N): instantaneous frequency in
    Hz and chirprate in Hz/s of each component at every sample.
    """

    samples: np.ndarray
    dt: float
    t0: float = 0.0
    truth_if: np.ndarray | None = None
    truth_cr: np.ndarray | None = None
    components: tuple[ComponentSpec, ...] = field(default=())

    def __post_init__(self):
        if self.samples.ndim != 1 or self.samples.size < 2:
            raise ValueError("need a 1-d signal with at least 2 samples")
        if not (self.dt > 0):
            raise ValueError("dt must be positive")
        for truth in (self.truth_if, self.truth_cr):
            if truth is not None and truth.shape[-1] != self.samples.size:
                raise ValueError("truth arrays must have one value per sample")

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.n) * self.dt

    @property
    def duration(self) -> float:
        return self.n * self.dt

    def component_series(self) -> np.ndarray:
        """(K, N) complex array of the individual modes (requires specs)."""
        if not self.components:
            raise ValueError("signal carries no component specs")
        t = self.times
        return np.stack([
            c.amplitude * np.exp(2j * np.pi * c.phase.phase(t)) for c in self.components
        ])


def synthesize(components, n: int, dt: float) -> SampledSignal:
    """Sum of component modes on ``t_n = n dt``, with truth arrays filled.

    Rejects any component whose instantaneous frequency is nonpositive at a
    sample, and (as a sampling-validity guard of this implementation, not a
    model requirement) any IF at or above the Nyquist rate ``1/(2 dt)``.
    """
    components = tuple(components)
    if n < 2:
        raise ValueError("need at least 2 samples")
    if not (dt > 0):
        raise ValueError("dt must be positive")
    if not components:
        raise ValueError("need at least one component")
    t = np.arange(n) * dt
    samples = np.zeros(n, dtype=np.complex128)
    truth_if = np.empty((len(components), n))
    truth_cr = np.empty((len(components), n))
    for k, comp in enumerate(components):
        f = np.asarray(comp.phase.if_hz(t), dtype=np.float64)
        if np.any(f <= 0):
            raise ValueError(f"component {k} has nonpositive IF on the sample grid")
        if np.any(f >= 0.5 / dt):
            raise ValueError(
                f"component {k} has IF at or above Nyquist ({0.5 / dt:g} Hz)")
        samples += comp.amplitude * np.exp(2j * np.pi * comp.phase.phase(t))
        truth_if[k] = f
        truth_cr[k] = comp.phase.cr_hzs(t)
    return SampledSignal(samples=samples, dt=dt, truth_if=truth_if,
                         truth_cr=truth_cr, components=components)


#: sampling used by all three stock test signals
EXAMPLE_DT = 1.0 / 128.0


def example_signal(which: int) -> SampledSignal:
    """The three stock two-component test signals.

    1: pair of linear chirps whose IFs cross once (at t = 4, both 26 Hz),
       8 s record.
    2: pair of cubic-phase chirps crossing at t = 1 and t = 3 (38 Hz), with
       chirprates crossing at t = 2, 4 s record.
    3: sinusoidally modulated pair crossing at t = 1, 3 (41 Hz), chirprates
       crossing at t = 2, 4 s record.
    """
    if which == 1:
        comps = [
            ComponentSpec(PolynomialPhase(c1=42.0, c2=-2.0)),
            ComponentSpec(PolynomialPhase(c1=10.0, c2=2.0)),
        ]
        return synthesize(comps, 8 * 128, EXAMPLE_DT)
    if which == 2:
        # 3(t-2)^3 + 29 t and its mirror, expanded into plain cubics
        comps = [
            ComponentSpec(PolynomialPhase(c0=-24.0, c1=65.0, c2=-18.0, c3=3.0)),
            ComponentSpec(PolynomialPhase(c0=24.0, c1=11.0, c2=18.0, c3=-3.0)),
        ]
        return synthesize(comps, 4 * 128, EXAMPLE_DT)
    if which == 3:
        comps = [
            ComponentSpec(SinusoidalPhase(alpha=41.0, beta=32.0 / np.pi,
                                          omega=np.pi / 2.0, sign=-1)),
            ComponentSpec(SinusoidalPhase(alpha=41.0, beta=32.0 / np.pi,
                                          omega=np.pi / 2.0, sign=1)),
        ]
        return synthesize(comps, 4 * 128, EXAMPLE_DT)
    raise ValueError(f"unknown example id {which!r} (expected 1, 2 or 3)")


def write_signal(path, sig: SampledSignal) -> None:
    """Text dump, one `t,re,im` row per sample, full double precision."""
    with open(path, "w") as fh:
        fh.write("t,re,im\n")
        for t, v in zip(sig.times, sig.samples):
            fh.write(f"{t!r},{v.real!r},{v.imag!r}\n")


def read_signal(path) -> SampledSignal:
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    if data.ndim != 2 or data.shape[1] != 3 or data.shape[0] < 2:
        raise ValueError(f"{path}: expected at least two t,re,im rows")
    t = data[:, 0]
    steps = np.diff(t)
    dt = steps[0]
    if not np.allclose(steps, dt, rtol=1e-9, atol=1e-12):
        raise ValueError(f"{path}: sample times are not uniform")
    return SampledSignal(samples=data[:, 1] + 1j * data[:, 2], dt=float(dt),
                         t0=float(t[0]))


def write_truth(path, sig: SampledSignal) -> None:
    """Sibling truth table: `t,if_1,cr_1,...,if_K,cr_K` rows."""
    if sig.truth_if is None or sig.truth_cr is None:
        raise ValueError("signal has no ground-truth arrays")
    k = sig.truth_if.shape[0]
    header = "t," + ",".join(f"if_{i + 1},cr_{i + 1}" for i in range(k))
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for m, t in enumerate(sig.times):
            cells = [repr(t)]
            for i in range(k):
                cells.append(repr(sig.truth_if[i, m]))
                cells.append(repr(sig.truth_cr[i, m]))
            fh.write(",".join(cells) + "\n")
