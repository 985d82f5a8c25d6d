"""Scorecard localization by temporal gradient correlation.

The scorecard is the one region that stays put while the camera pans:
per-frame Sobel gradient magnitude is fused with its running temporal
mean, I_r(i,j,t) = (1 - I_x(i,j,t)/max(I_x)) * I_norm(i,j,t), so
persistent mid-strength edges dominate. The time-summed map is
binarized and searched over the four corner windows of size (h/5, w/2);
the winner is cleaned by 3x3 opening/closing and the largest connected
component's tight rectangle is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ._kernels import correlation_summed, sobel_magnitude
from .errors import BadDimensions, DegenerateStack, NoCandidate, TooFewFrames
from .rally import FrameStack

CORNERS = ("tl", "tr", "bl", "br")


@dataclass(frozen=True)
class BBox:
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        if self.w <= 0 or self.h <= 0 or self.x < 0 or self.y < 0:
            raise BadDimensions(f"bad bbox {self}")

    def to_json(self, corner: str | None = None) -> dict:
        doc = {"x": self.x, "y": self.y, "w": self.w, "h": self.h}
        if corner is not None:
            doc["corner"] = corner
        return doc

    @staticmethod
    def from_json(obj: dict) -> "BBox":
        return BBox(obj["x"], obj["y"], obj["w"], obj["h"])

    def iou(self, other: "BBox") -> float:
        x0 = max(self.x, other.x)
        y0 = max(self.y, other.y)
        x1 = min(self.x + self.w, other.x + other.w)
        y1 = min(self.y + self.h, other.y + other.h)
        inter = max(0, x1 - x0) * max(0, y1 - y0)
        union = self.w * self.h + other.w * other.h - inter
        return inter / union if union else 0.0


@dataclass(frozen=True)
class GradientStack:
    """Per-frame gradient maps plus the temporal correlation of Eq.-style
    fusion: i_norm[t] is the mean of i_x over frames 0..t."""

    i_x: np.ndarray
    i_norm: np.ndarray
    i_r: np.ndarray
    global_max: float


def sobel_gradient(frame: np.ndarray) -> np.ndarray:
    """3x3 Sobel magnitude, border pixels via edge replication."""
    frame = np.asarray(frame)
    if frame.ndim != 2 or frame.shape[0] < 3 or frame.shape[1] < 3:
        raise BadDimensions("sobel needs a frame of at least 3x3")
    return sobel_magnitude(frame.astype(np.float32))


def correlation_image(stack: FrameStack) -> GradientStack:
    """Materialized gradient/correlation maps for a (small) stack."""
    if stack.count < 2:
        raise TooFewFrames("temporal correlation needs at least 2 frames")
    i_x = np.stack([sobel_gradient(stack.pixels[t]) for t in range(stack.count)])
    gmax = float(i_x.max())
    if gmax == 0.0:
        raise DegenerateStack("no gradient signal anywhere in the stack")
    csum = np.cumsum(i_x.astype(np.float64), axis=0)
    counts = np.arange(1, stack.count + 1, dtype=np.float64)[:, None, None]
    i_norm = csum / counts
    i_r = (1.0 - i_x / gmax) * i_norm
    return GradientStack(
        i_x=i_x, i_norm=i_norm.astype(np.float32), i_r=i_r.astype(np.float32),
        global_max=gmax,
    )


def _corner_windows(h: int, w: int) -> dict[str, tuple[slice, slice]]:
    wh, ww = h // 5, w // 2
    return {
        "tl": (slice(0, wh), slice(0, ww)),
        "tr": (slice(0, wh), slice(w - ww, w)),
        "bl": (slice(h - wh, h), slice(0, ww)),
        "br": (slice(h - wh, h), slice(w - ww, w)),
    }


def locate_scorecard(
    stack: FrameStack, binarize_quantile: float = 0.90
) -> tuple[BBox, str]:
    """Find the scorecard's bounding rectangle and its corner id."""
    if stack.count < 2:
        raise TooFewFrames("need at least 2 frames")
    if stack.height < 10 or stack.width < 10:
        raise BadDimensions("frame too small for corner search")

    r_sum, gmax = correlation_summed(stack.pixels)
    if gmax == 0.0:
        raise NoCandidate("stack carries no gradient signal")
    binary = r_sum > np.quantile(r_sum, binarize_quantile)

    windows = _corner_windows(stack.height, stack.width)
    counts = {cid: int(binary[win].sum()) for cid, win in windows.items()}
    corner = max(CORNERS, key=lambda cid: counts[cid])

    win = windows[corner]
    patch = binary[win]
    struct = np.ones((3, 3), dtype=bool)
    patch = ndimage.binary_opening(patch, structure=struct)
    patch = ndimage.binary_closing(patch, structure=struct)
    if not patch.any():
        raise NoCandidate("winning corner window is empty after morphology")

    labels, n_labels = ndimage.label(patch, structure=struct)
    sizes = ndimage.sum_labels(np.ones_like(labels), labels, range(1, n_labels + 1))
    biggest = int(np.argmax(sizes)) + 1
    ys, xs = np.nonzero(labels == biggest)
    y0 = int(ys.min()) + win[0].start
    x0 = int(xs.min()) + win[1].start
    box = BBox(
        x=x0, y=y0, w=int(xs.max() - xs.min()) + 1, h=int(ys.max() - ys.min()) + 1
    )
    return box, corner
