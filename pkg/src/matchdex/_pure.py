"""Pure numpy implementations of the hot kernels.

These are the import-time fallback when the compiled extension is
unavailable (or disabled via MATCHDEX_PURE=1). Semantics are identical
to ``_native``; the benchmark suite compares the two.
"""

from __future__ import annotations

import numpy as np

# frozen spectral sampling step per map order, minimax-calibrated so the
# reconstructed kernel signature stays within a few percent of sech(l/2)
# over log-ratios up to 5
CHI2_STEP = {
    1: 0.553388,
    2: 0.456702,
    3: 0.377832,
    4: 0.317967,
    5: 0.342673,
    6: 0.326519,
    7: 0.311553,
    8: 0.290173,
}


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance, two-row dynamic program."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def sobel_magnitude(frame: np.ndarray) -> np.ndarray:
    """3x3 Sobel gradient magnitude with edge replication."""
    f = np.pad(frame.astype(np.float32), 1, mode="edge")
    # horizontal kernel [[-1,0,1],[-2,0,2],[-1,0,1]]
    dx = f[:, 2:] - f[:, :-2]
    gx = dx[:-2] + 2.0 * dx[1:-1] + dx[2:]
    dy = f[2:, :] - f[:-2, :]
    gy = dy[:, :-2] + 2.0 * dy[:, 1:-1] + dy[:, 2:]
    return np.hypot(gx, gy).astype(np.float32)


def correlation_summed(stack: np.ndarray) -> tuple[np.ndarray, float]:
    """Time-summed temporal correlation map and the global gradient max.

    Two passes over the stack (gradients recomputed rather than stored):
    pass one finds the global max of the per-frame gradient magnitude,
    pass two accumulates (1 - Ix/max) * Inorm where Inorm is the running
    temporal mean of Ix.
    """
    count = stack.shape[0]
    gmax = 0.0
    for t in range(count):
        gmax = max(gmax, float(sobel_magnitude(stack[t]).max()))
    r_sum = np.zeros(stack.shape[1:], dtype=np.float64)
    if gmax == 0.0:
        return r_sum, gmax
    csum = np.zeros(stack.shape[1:], dtype=np.float64)
    for t in range(count):
        ix = sobel_magnitude(stack[t]).astype(np.float64)
        csum += ix
        r_sum += (1.0 - ix / gmax) * (csum / (t + 1))
    return r_sum, gmax


def hog_cell_histograms(
    mag: np.ndarray, ang: np.ndarray, cell: int, nbins: int
) -> np.ndarray:
    """Per-cell orientation histograms with bilinear orientation interpolation.

    ``ang`` is the unsigned orientation in [0, pi); each pixel's magnitude
    splits between the two nearest bin centers (wrapping).
    """
    h, w = mag.shape
    cy, cx = h // cell, w // cell
    h, w = cy * cell, cx * cell
    mag = mag[:h, :w].astype(np.float64)
    ang = ang[:h, :w]

    pos = ang * (nbins / np.pi) - 0.5
    b0 = np.floor(pos).astype(np.int64)
    w1 = pos - b0
    b0 %= nbins
    b1 = (b0 + 1) % nbins

    rows = np.repeat(np.arange(cy), cell)[:, None]
    cols = np.repeat(np.arange(cx), cell)[None, :]
    cell_index = rows * cx + cols  # (h, w)

    flat0 = (cell_index * nbins + b0).ravel()
    flat1 = (cell_index * nbins + b1).ravel()
    size = cy * cx * nbins
    hist = np.bincount(flat0, weights=(mag * (1.0 - w1)).ravel(), minlength=size)
    hist += np.bincount(flat1, weights=(mag * w1).ravel(), minlength=size)
    return hist.reshape(cy, cx, nbins).astype(np.float32)


def chi2_map(x: np.ndarray, order: int) -> np.ndarray:
    """Explicit feature map approximating the additive chi-squared kernel.

    ``x`` is (m, d) nonnegative; output is (m, d * (2 * order + 1)) with
    each input dimension expanded into a contiguous block
    [sqrt term, cos_1, sin_1, ..., cos_n, sin_n].
    """
    L = CHI2_STEP[order]
    x = np.asarray(x, dtype=np.float64)
    m, d = x.shape
    width = 2 * order + 1
    out = np.zeros((m, d * width), dtype=np.float32)
    nz = x > 0
    safe = np.where(nz, x, 1.0)
    logx = np.log(safe)
    out[:, 0::width] = np.sqrt(L * x)
    cos1 = np.cos(L * logx)
    sin1 = np.sin(L * logx)
    cos_j, sin_j = cos1, sin1
    for j in range(1, order + 1):
        if j > 1:
            # Chebyshev-style recurrence for cos/sin of j*L*log x
            cos_j, sin_j = (
                cos_j * cos1 - sin_j * sin1,
                sin_j * cos1 + cos_j * sin1,
            )
        amp = np.sqrt((2.0 * L / np.cosh(np.pi * j * L)) * x)
        out[:, 2 * j - 1 :: width] = np.where(nz, amp * cos_j, 0.0)
        out[:, 2 * j :: width] = np.where(nz, amp * sin_j, 0.0)
    return out


def chi2_map_margins(
    x: np.ndarray, order: int, weights: np.ndarray, bias: float, chunk: int = 256
) -> np.ndarray:
    """Fused map-then-dot: margins of the linear model in mapped space."""
    m = x.shape[0]
    out = np.empty(m, dtype=np.float64)
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        out[lo:hi] = chi2_map(x[lo:hi], order) @ weights
    return out + bias
