"""Rally segmentation: HOG features, a chi-squared-kernel linear
classifier, scalar Kalman smoothing of the margins, and segment
extraction.

Broadcast rallies are filmed from the fixed overhead camera, so
rally-vs-non-rally is a per-frame appearance decision: 9-bin unsigned
HOG over 8x8 cells of the downscaled frame, lifted through the explicit
chi-squared kernel map, scored by a hinge-loss linear model.
"""

from __future__ import annotations

import base64
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import (
    BadDimensions,
    DegenerateData,
    DimensionMismatch,
    EmptySequence,
    NegativeInput,
)

FSTK_MAGIC = b"FSTK"


@dataclass(frozen=True)
class FrameStack:
    """8-bit grayscale frames, shape (count, height, width)."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        p = self.pixels
        if p.ndim != 3 or p.dtype != np.uint8:
            raise BadDimensions("FrameStack needs (count, height, width) uint8")
        if p.shape[1] == 0 or p.shape[2] == 0:
            raise BadDimensions("zero-sized frames")

    @property
    def count(self) -> int:
        return self.pixels.shape[0]

    @property
    def height(self) -> int:
        return self.pixels.shape[1]

    @property
    def width(self) -> int:
        return self.pixels.shape[2]

    def __eq__(self, other) -> bool:
        return isinstance(other, FrameStack) and np.array_equal(self.pixels, other.pixels)


def save_fstk(stack: FrameStack, path: str | Path) -> None:
    """FSTK: magic, little-endian u32 width/height/count, raw frames."""
    with open(path, "wb") as fh:
        fh.write(FSTK_MAGIC)
        fh.write(struct.pack("<III", stack.width, stack.height, stack.count))
        fh.write(np.ascontiguousarray(stack.pixels).tobytes())


def load_fstk(path: str | Path) -> FrameStack:
    data = Path(path).read_bytes()
    if data[:4] != FSTK_MAGIC:
        raise BadDimensions(f"not an FSTK file: {path}")
    width, height, count = struct.unpack_from("<III", data, 4)
    body = data[16:]
    expected = width * height * count
    if len(body) != expected:
        raise BadDimensions(
            f"FSTK payload is {len(body)} bytes, header implies {expected}"
        )
    pixels = np.frombuffer(body, dtype=np.uint8).reshape(count, height, width).copy()
    return FrameStack(pixels)


@dataclass(frozen=True)
class ClassifierConfig:
    downscale_to: tuple[int, int] = (128, 72)  # (width, height)
    hog_bins: int = 9
    cell: int = 8
    block: int = 2
    block_norm_clip: float = 0.2
    chi2_period: int = 3
    c: float = 0.05

    def __post_init__(self) -> None:
        w, h = self.downscale_to
        if w <= 0 or h <= 0 or w % self.cell or h % self.cell:
            raise BadDimensions("downscale dims must be positive multiples of cell")

    def hog_length(self) -> int:
        cx = self.downscale_to[0] // self.cell
        cy = self.downscale_to[1] // self.cell
        blocks = (cx - self.block + 1) * (cy - self.block + 1)
        return blocks * self.block * self.block * self.hog_bins

    def mapped_length(self) -> int:
        return self.hog_length() * (2 * self.chi2_period + 1)

    def to_json(self) -> dict:
        return {
            "downscale_to": list(self.downscale_to),
            "hog_bins": self.hog_bins,
            "cell": self.cell,
            "block": self.block,
            "block_norm_clip": self.block_norm_clip,
            "chi2_period": self.chi2_period,
            "c": self.c,
        }

    @staticmethod
    def from_json(obj: dict) -> "ClassifierConfig":
        return ClassifierConfig(
            downscale_to=tuple(obj["downscale_to"]),
            hog_bins=obj["hog_bins"],
            cell=obj["cell"],
            block=obj["block"],
            block_norm_clip=obj["block_norm_clip"],
            chi2_period=obj["chi2_period"],
            c=obj["c"],
        )


@dataclass(frozen=True)
class Segment:
    """Inclusive frame span of one rally."""

    start_frame: int
    end_frame: int

    def __post_init__(self) -> None:
        if self.start_frame < 0 or self.end_frame < self.start_frame:
            raise BadDimensions(f"bad segment [{self.start_frame}, {self.end_frame}]")

    @property
    def length(self) -> int:
        return self.end_frame - self.start_frame + 1


def bilinear_resize(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Pixel-center-aligned bilinear resampling to (out_h, out_w)."""
    img = np.asarray(img, dtype=np.float32)
    in_h, in_w = img.shape
    ys = (np.arange(out_h) + 0.5) * (in_h / out_h) - 0.5
    xs = (np.arange(out_w) + 0.5) * (in_w / out_w) - 0.5
    ys = np.clip(ys, 0, in_h - 1)
    xs = np.clip(xs, 0, in_w - 1)
    y0 = np.floor(ys).astype(np.int64)
    x0 = np.floor(xs).astype(np.int64)
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    wy = (ys - y0)[:, None]
    wx = (xs - x0)[None, :]
    top = img[y0][:, x0] * (1 - wx) + img[y0][:, x1] * wx
    bot = img[y1][:, x0] * (1 - wx) + img[y1][:, x1] * wx
    return top * (1 - wy) + bot * wy


def _hog_from_resized(small: np.ndarray, cfg: ClassifierConfig) -> np.ndarray:
    padded = np.pad(small, 1, mode="edge")
    gx = padded[1:-1, 2:] - padded[1:-1, :-2]
    gy = padded[2:, 1:-1] - padded[:-2, 1:-1]
    mag = np.hypot(gx, gy).astype(np.float32)
    ang = np.mod(np.arctan2(gy, gx), np.pi).astype(np.float32)
    cells = _kernels.hog_cell_histograms(mag, ang, cfg.cell, cfg.hog_bins)
    cy, cx, nb = cells.shape
    b = cfg.block
    blocks = []
    for by in range(cy - b + 1):
        for bx in range(cx - b + 1):
            v = cells[by : by + b, bx : bx + b].reshape(-1).astype(np.float64)
            norm = np.sqrt(np.sum(v * v))
            if norm > 0:
                v = v / norm
                v = np.minimum(v, cfg.block_norm_clip)
                norm2 = np.sqrt(np.sum(v * v))
                if norm2 > 0:
                    v = v / norm2
            blocks.append(v)
    return np.concatenate(blocks).astype(np.float32)


def hog_descriptor(frame: np.ndarray, cfg: ClassifierConfig = ClassifierConfig()) -> np.ndarray:
    """9-bin unsigned-orientation HOG of the downscaled frame.

    Centered gradients with edge replication, bilinear orientation
    interpolation into 8x8-cell histograms, 2x2-cell blocks normalized
    L2 -> clip 0.2 -> L2.
    """
    frame = np.asarray(frame)
    if frame.ndim != 2 or frame.size == 0:
        raise BadDimensions("hog_descriptor needs a nonempty 2-D frame")
    w, h = cfg.downscale_to
    small = bilinear_resize(frame, w, h)
    return _hog_from_resized(small, cfg)


def chi2_feature_map(x: np.ndarray, period: int = 3) -> np.ndarray:
    """Explicit feature map approximating the additive chi-squared kernel
    k(x, y) = sum_i 2 x_i y_i / (x_i + y_i).

    ``period`` is the map order: each input dimension expands into
    2*period+1 features sampling the kernel spectrum at a frozen
    per-order step. Inner products of mapped vectors approximate k.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if np.any(x < 0):
        raise NegativeInput("chi-squared map is defined on nonnegative inputs")
    out = _kernels.chi2_map(x, int(period))
    return out[0] if single else out


def additive_chi2_kernel(x: np.ndarray, y: np.ndarray) -> float:
    """Exact additive chi-squared kernel (the map's test oracle)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    num = 2.0 * x * y
    den = x + y
    mask = den > 0
    return float(np.sum(num[mask] / den[mask]))


@dataclass(frozen=True)
class RallyModel:
    weights: np.ndarray
    bias: float
    config: ClassifierConfig = field(default_factory=ClassifierConfig)

    def margins(self, hog_features: np.ndarray) -> np.ndarray:
        """Decision margins for raw (unmapped) HOG feature rows."""
        feats = np.asarray(hog_features, dtype=np.float64)
        if feats.ndim == 1:
            feats = feats[None, :]
        if feats.shape[1] * (2 * self.config.chi2_period + 1) != len(self.weights):
            raise DimensionMismatch(
                f"features of dim {feats.shape[1]} vs weights {len(self.weights)}"
            )
        return _kernels.chi2_map_margins(
            feats, self.config.chi2_period, self.weights, self.bias
        )


def save_model(model: RallyModel, path: str | Path) -> None:
    doc = {
        "config": model.config.to_json(),
        "weights_b64": base64.b64encode(
            np.asarray(model.weights, dtype="<f4").tobytes()
        ).decode("ascii"),
        "bias": float(model.bias),
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> RallyModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    weights = np.frombuffer(
        base64.b64decode(doc["weights_b64"]), dtype="<f4"
    ).astype(np.float64)
    return RallyModel(
        weights=weights, bias=float(doc["bias"]),
        config=ClassifierConfig.from_json(doc["config"]),
    )


def train_rally_classifier(
    features: list[np.ndarray] | np.ndarray,
    labels: list[int] | np.ndarray,
    cfg: ClassifierConfig = ClassifierConfig(),
    seed: int = 0,
    epochs: int = 300,
) -> RallyModel:
    """Fit the hinge-loss linear model over chi-squared-mapped features.

    Deterministic full-batch subgradient descent (Pegasos-style step
    schedule) on 0.5*lambda*||w||^2 + mean hinge, lambda = 1/(C*n).
    """
    feats = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if feats.ndim != 2 or feats.shape[0] != y.shape[0]:
        raise DimensionMismatch("features and labels must pair up")
    if not (np.any(y > 0) and np.any(y < 0)):
        raise DegenerateData("training needs both classes")

    x = _kernels.chi2_map(feats, cfg.chi2_period).astype(np.float32)
    yf = y.astype(np.float32)
    n, d = x.shape
    lam = 1.0 / (cfg.c * n)
    rng = np.random.default_rng(seed)
    w = rng.normal(0.0, 1e-6, d).astype(np.float32)
    b = np.float32(0.0)
    for t in range(1, epochs + 1):
        eta = np.float32(1.0 / (lam * t))
        margins = x @ w + b
        coef = np.where(yf * margins < 1.0, yf, np.float32(0.0))
        w = w - eta * (np.float32(lam) * w - (x.T @ coef) / np.float32(n))
        b = b - eta * (-coef.sum() / np.float32(n))
    return RallyModel(weights=w.astype(np.float64), bias=float(b), config=cfg)


def stack_hog_features(stack: FrameStack, cfg: ClassifierConfig) -> np.ndarray:
    """HOG rows for every frame of a stack."""
    out = np.empty((stack.count, cfg.hog_length()), dtype=np.float32)
    for i in range(stack.count):
        out[i] = hog_descriptor(stack.pixels[i], cfg)
    return out


def classify_frames(stack: FrameStack, model: RallyModel) -> list[tuple[int, float]]:
    """Per-frame (sign, margin); stateless across frames."""
    if stack.count == 0:
        return []
    feats = stack_hog_features(stack, model.config)
    margins = model.margins(feats)
    return [(1 if m > 0 else -1, float(m)) for m in margins]


def kalman_smooth(
    margins: list[float] | np.ndarray, q: float = 0.01, r: float = 0.25
) -> np.ndarray:
    """Scalar constant-state Kalman filter with an RTS backward pass."""
    z = np.asarray(margins, dtype=np.float64)
    if z.size == 0:
        raise EmptySequence("kalman_smooth needs at least one value")
    n = z.size
    x_filt = np.empty(n)
    p_filt = np.empty(n)
    x_pred = np.empty(n)
    p_pred = np.empty(n)
    x_filt[0], p_filt[0] = z[0], r
    x_pred[0], p_pred[0] = z[0], r
    for t in range(1, n):
        x_pred[t] = x_filt[t - 1]
        p_pred[t] = p_filt[t - 1] + q
        k = p_pred[t] / (p_pred[t] + r)
        x_filt[t] = x_pred[t] + k * (z[t] - x_pred[t])
        p_filt[t] = (1.0 - k) * p_pred[t]
    x_smooth = x_filt.copy()
    for t in range(n - 2, -1, -1):
        c = p_filt[t] / p_pred[t + 1]
        x_smooth[t] = x_filt[t] + c * (x_smooth[t + 1] - x_pred[t + 1])
    return x_smooth


def extract_rally_segments(
    smoothed: list[float] | np.ndarray, threshold: float = 0.0, min_len: int = 30
) -> list[Segment]:
    """Maximal above-threshold runs; near gaps merged, short runs dropped.

    Gaps shorter than min_len/2 between adjacent runs are bridged before
    runs shorter than min_len are discarded.
    """
    vals = np.asarray(smoothed, dtype=np.float64)
    if vals.size == 0:
        raise EmptySequence("no smoothed values")
    above = vals > threshold
    runs: list[list[int]] = []
    start = None
    for i, flag in enumerate(above):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append([start, i - 1])
            start = None
    if start is not None:
        runs.append([start, len(above) - 1])

    merged: list[list[int]] = []
    for run in runs:
        if merged and run[0] - merged[-1][1] - 1 < min_len / 2:
            merged[-1][1] = run[1]
        else:
            merged.append(run)
    return [Segment(s, e) for s, e in merged if e - s + 1 >= min_len]
