"""Wavelet-chirplet analysis of multicomponent signals.

The pipeline: synthesize or load a sampled signal, pick the Gaussian window
width by minimum Renyi entropy, compute the moment-window transform cubes
over (scale, time, chirprate), optionally sharpen the chirprate axis with the
X-ray line-integral transform, synchrosqueeze onto (frequency, chirprate)
bins with 2nd- or 3rd-order reference fields, extract 3D ridges, and retrieve
the modes along them.
"""
from .signal import (ComponentSpec, PolynomialPhase, SampledSignal,
                     SinusoidalPhase, example_signal, synthesize)
from .window import GaussianWindow, pft_moment, pft_quadrature
from .wct import (AnalysisGrid, MomentCubeStack, build_grid,
                  compute_moment_cubes, wct_direct)
from .entropy import EntropyCurve, renyi_entropy, select_sigma
from .xray import XwctCube, compute_xwct
from .reassign import ReferenceFields, derivative_cubes, second_order_fields, \
    third_order_fields
from .squeeze import SqueezedCube, compose_fields, multi_squeeze, synchrosqueeze
from .ridge import RidgeSet, extract_ridges
from .retrieve import (ModeEstimate, estimate_if_cr, retrieve_group,
                       retrieve_simple, rmse_trimmed)
from .pipeline import AnalysisConfig, run_analysis, run_demo

__version__ = "0.1.0"

__all__ = [
    "ComponentSpec", "PolynomialPhase", "SinusoidalPhase", "SampledSignal",
    "synthesize", "example_signal",
    "GaussianWindow", "pft_moment", "pft_quadrature",
    "AnalysisGrid", "MomentCubeStack", "build_grid", "compute_moment_cubes",
    "wct_direct",
    "EntropyCurve", "renyi_entropy", "select_sigma",
    "XwctCube", "compute_xwct",
    "ReferenceFields", "derivative_cubes", "second_order_fields",
    "third_order_fields",
    "SqueezedCube", "synchrosqueeze", "multi_squeeze", "compose_fields",
    "RidgeSet", "extract_ridges",
    "ModeEstimate", "estimate_if_cr", "retrieve_simple", "retrieve_group",
    "rmse_trimmed",
    "AnalysisConfig", "run_analysis", "run_demo",
    "__version__",
]
