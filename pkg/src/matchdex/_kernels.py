"""Kernel dispatch: compiled extension when available, numpy fallback.

The Cython extension ``matchdex._native`` implements the hot inner
loops (Sobel magnitude, temporal correlation accumulation, HOG cell
histograms, the chi-squared feature map and its fused margin kernel,
Levenshtein DP). Import-time selection keeps the two paths behaviorally
identical; set MATCHDEX_PURE=1 to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pure
from ._pure import CHI2_STEP

if os.environ.get("MATCHDEX_PURE", "") == "1":
    _native = None
else:
    try:
        from . import _native  # type: ignore[attr-defined]
    except ImportError:
        _native = None

HAVE_NATIVE = _native is not None
BACKEND = "native" if HAVE_NATIVE else "pure"


def levenshtein(a: str, b: str) -> int:
    if HAVE_NATIVE:
        return _native.levenshtein(a, b)
    return _pure.levenshtein(a, b)


def sobel_magnitude(frame: np.ndarray) -> np.ndarray:
    if HAVE_NATIVE:
        return _native.sobel_magnitude(np.ascontiguousarray(frame, dtype=np.float32))
    return _pure.sobel_magnitude(frame)


def correlation_summed(stack: np.ndarray) -> tuple[np.ndarray, float]:
    if HAVE_NATIVE:
        return _native.correlation_summed(np.ascontiguousarray(stack, dtype=np.uint8))
    return _pure.correlation_summed(stack)


def hog_cell_histograms(mag: np.ndarray, ang: np.ndarray, cell: int, nbins: int) -> np.ndarray:
    if HAVE_NATIVE:
        return _native.hog_cell_histograms(
            np.ascontiguousarray(mag, dtype=np.float32),
            np.ascontiguousarray(ang, dtype=np.float32),
            cell,
            nbins,
        )
    return _pure.hog_cell_histograms(mag, ang, cell, nbins)


def chi2_map(x: np.ndarray, order: int) -> np.ndarray:
    if order not in CHI2_STEP:
        raise ValueError(f"unsupported chi2 map order: {order}")
    if HAVE_NATIVE:
        return _native.chi2_map(
            np.ascontiguousarray(x, dtype=np.float64), order, CHI2_STEP[order]
        )
    return _pure.chi2_map(x, order)


def chi2_map_margins(
    x: np.ndarray, order: int, weights: np.ndarray, bias: float
) -> np.ndarray:
    if order not in CHI2_STEP:
        raise ValueError(f"unsupported chi2 map order: {order}")
    if HAVE_NATIVE:
        return _native.chi2_map_margins(
            np.ascontiguousarray(x, dtype=np.float64),
            order,
            CHI2_STEP[order],
            np.ascontiguousarray(weights, dtype=np.float64),
            float(bias),
        )
    return _pure.chi2_map_margins(x, order, np.asarray(weights, dtype=np.float64), bias)
