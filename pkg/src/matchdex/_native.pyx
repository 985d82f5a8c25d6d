# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels; behavioral twin of matchdex._pure."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, cosh, log, sin, sqrt

cnp.import_array()


def levenshtein(str a, str b):
    """Unit-cost edit distance, two-row DP over code points."""
    cdef int la = len(a), lb = len(b)
    if la < lb:
        a, b = b, a
        la, lb = lb, la
    if lb == 0:
        return la
    cdef cnp.ndarray[cnp.int32_t, ndim=1] aa = np.array(
        [ord(c) for c in a], dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] bb = np.array(
        [ord(c) for c in b], dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] prev = np.arange(lb + 1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] cur = np.empty(lb + 1, dtype=np.int32)
    cdef int i, j, sub, best
    for i in range(1, la + 1):
        cur[0] = i
        for j in range(1, lb + 1):
            sub = prev[j - 1] + (aa[i - 1] != bb[j - 1])
            best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            if sub < best:
                best = sub
            cur[j] = best
        prev, cur = cur, prev
    return int(prev[lb])


cdef inline void _sobel_into(const unsigned char[:, :] f, float[:, :] out,
                             Py_ssize_t h, Py_ssize_t w) noexcept nogil:
    cdef Py_ssize_t i, j, im1, ip1, jm1, jp1
    cdef double gx, gy
    for i in range(h):
        im1 = i - 1 if i > 0 else 0
        ip1 = i + 1 if i < h - 1 else h - 1
        for j in range(w):
            jm1 = j - 1 if j > 0 else 0
            jp1 = j + 1 if j < w - 1 else w - 1
            gx = (f[im1, jp1] - f[im1, jm1]) + 2.0 * (f[i, jp1] - f[i, jm1]) \
                 + (f[ip1, jp1] - f[ip1, jm1])
            gy = (f[ip1, jm1] - f[im1, jm1]) + 2.0 * (f[ip1, j] - f[im1, j]) \
                 + (f[ip1, jp1] - f[im1, jp1])
            out[i, j] = <float> sqrt(gx * gx + gy * gy)


def sobel_magnitude(cnp.ndarray[cnp.float32_t, ndim=2] frame):
    """3x3 Sobel gradient magnitude with edge replication."""
    cdef Py_ssize_t h = frame.shape[0], w = frame.shape[1]
    cdef cnp.ndarray[cnp.float32_t, ndim=2] out = np.empty((h, w), dtype=np.float32)
    cdef float[:, :] ov = out
    cdef const float[:, :] fv = frame
    cdef Py_ssize_t i, j, im1, ip1, jm1, jp1
    cdef double gx, gy
    with nogil:
        for i in range(h):
            im1 = i - 1 if i > 0 else 0
            ip1 = i + 1 if i < h - 1 else h - 1
            for j in range(w):
                jm1 = j - 1 if j > 0 else 0
                jp1 = j + 1 if j < w - 1 else w - 1
                gx = (fv[im1, jp1] - fv[im1, jm1]) + 2.0 * (fv[i, jp1] - fv[i, jm1]) \
                     + (fv[ip1, jp1] - fv[ip1, jm1])
                gy = (fv[ip1, jm1] - fv[im1, jm1]) + 2.0 * (fv[ip1, j] - fv[im1, j]) \
                     + (fv[ip1, jp1] - fv[im1, jp1])
                ov[i, j] = <float> sqrt(gx * gx + gy * gy)
    return out


def correlation_summed(cnp.ndarray[cnp.uint8_t, ndim=3] stack):
    """Time-summed (1 - Ix/max) * Inorm map and the global gradient max.

    Two passes; per-frame gradients are recomputed rather than stored.
    """
    cdef Py_ssize_t count = stack.shape[0], h = stack.shape[1], w = stack.shape[2]
    cdef cnp.ndarray[cnp.float32_t, ndim=2] ix = np.empty((h, w), dtype=np.float32)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] csum = np.zeros((h, w), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] r_sum = np.zeros((h, w), dtype=np.float64)
    cdef float[:, :] ixv = ix
    cdef double[:, :] csumv = csum, rv = r_sum
    cdef const unsigned char[:, :, :] sv = stack
    cdef double gmax = 0.0, inv_n
    cdef Py_ssize_t t, i, j
    with nogil:
        for t in range(count):
            _sobel_into(sv[t], ixv, h, w)
            for i in range(h):
                for j in range(w):
                    if ixv[i, j] > gmax:
                        gmax = ixv[i, j]
    if gmax == 0.0:
        return r_sum, 0.0
    with nogil:
        for t in range(count):
            _sobel_into(sv[t], ixv, h, w)
            inv_n = 1.0 / (t + 1)
            for i in range(h):
                for j in range(w):
                    csumv[i, j] += ixv[i, j]
                    rv[i, j] += (1.0 - ixv[i, j] / gmax) * (csumv[i, j] * inv_n)
    return r_sum, gmax


def hog_cell_histograms(cnp.ndarray[cnp.float32_t, ndim=2] mag,
                        cnp.ndarray[cnp.float32_t, ndim=2] ang,
                        int cell, int nbins):
    """Per-cell orientation histograms, bilinear orientation interpolation."""
    cdef Py_ssize_t h = mag.shape[0], w = mag.shape[1]
    cdef Py_ssize_t cy = h // cell, cx = w // cell
    cdef cnp.ndarray[cnp.float64_t, ndim=3] hist = np.zeros(
        (cy, cx, nbins), dtype=np.float64)
    cdef double[:, :, :] hv = hist
    cdef const float[:, :] mv = mag, av = ang
    cdef Py_ssize_t i, j, ci, cj
    cdef double pos, w1, m, pi = np.pi
    cdef int b0, b1
    with nogil:
        for i in range(cy * cell):
            ci = i // cell
            for j in range(cx * cell):
                cj = j // cell
                m = mv[i, j]
                pos = av[i, j] * (nbins / pi) - 0.5
                b0 = <int> pos if pos >= 0.0 else <int> pos - 1
                w1 = pos - b0
                b0 = b0 % nbins
                if b0 < 0:
                    b0 += nbins
                b1 = b0 + 1
                if b1 == nbins:
                    b1 = 0
                hv[ci, cj, b0] += m * (1.0 - w1)
                hv[ci, cj, b1] += m * w1
    return hist.astype(np.float32)


def chi2_map(cnp.ndarray[cnp.float64_t, ndim=2] x, int order, double L):
    """Explicit chi-squared feature map, per-dimension contiguous blocks."""
    cdef Py_ssize_t m = x.shape[0], d = x.shape[1]
    cdef int width = 2 * order + 1
    cdef cnp.ndarray[cnp.float32_t, ndim=2] out = np.zeros(
        (m, d * width), dtype=np.float32)
    cdef float[:, :] ov = out
    cdef const double[:, :] xv = x
    cdef cnp.ndarray[cnp.float64_t, ndim=1] amp_coef = np.empty(order + 1, np.float64)
    cdef double[:] ac = amp_coef
    cdef Py_ssize_t r, i
    cdef int j
    cdef double val, lx, c1, s1, cj, sj, cn, sn, amp, pi = np.pi
    for j in range(1, order + 1):
        ac[j] = 2.0 * L / cosh(pi * j * L)
    with nogil:
        for r in range(m):
            for i in range(d):
                val = xv[r, i]
                if val <= 0.0:
                    continue
                lx = log(val)
                ov[r, i * width] = <float> sqrt(L * val)
                c1 = cos(L * lx)
                s1 = sin(L * lx)
                cj = c1
                sj = s1
                for j in range(1, order + 1):
                    if j > 1:
                        cn = cj * c1 - sj * s1
                        sn = sj * c1 + cj * s1
                        cj = cn
                        sj = sn
                    amp = sqrt(ac[j] * val)
                    ov[r, i * width + 2 * j - 1] = <float> (amp * cj)
                    ov[r, i * width + 2 * j] = <float> (amp * sj)
    return out


def chi2_map_margins(cnp.ndarray[cnp.float64_t, ndim=2] x, int order, double L,
                     cnp.ndarray[cnp.float64_t, ndim=1] weights, double bias):
    """Fused map-then-dot margins; never materializes the mapped matrix."""
    cdef Py_ssize_t m = x.shape[0], d = x.shape[1]
    cdef int width = 2 * order + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef double[:] ov = out
    cdef const double[:, :] xv = x
    cdef const double[:] wv = weights
    cdef cnp.ndarray[cnp.float64_t, ndim=1] amp_coef = np.empty(order + 1, np.float64)
    cdef double[:] ac = amp_coef
    cdef Py_ssize_t r, i, base
    cdef int j
    cdef double val, lx, c1, s1, cj, sj, cn, sn, amp, acc, pi = np.pi
    for j in range(1, order + 1):
        ac[j] = 2.0 * L / cosh(pi * j * L)
    with nogil:
        for r in range(m):
            acc = bias
            for i in range(d):
                val = xv[r, i]
                if val <= 0.0:
                    continue
                base = i * width
                lx = log(val)
                # match the pure path: features round to float32 before the dot
                acc += (<double> <float> sqrt(L * val)) * wv[base]
                c1 = cos(L * lx)
                s1 = sin(L * lx)
                cj = c1
                sj = s1
                for j in range(1, order + 1):
                    if j > 1:
                        cn = cj * c1 - sj * s1
                        sn = sj * c1 + cj * s1
                        cj = cn
                        sj = sn
                    amp = sqrt(ac[j] * val)
                    acc += (<double> <float> (amp * cj)) * wv[base + 2 * j - 1]
                    acc += (<double> <float> (amp * sj)) * wv[base + 2 * j]
            ov[r] = acc
    return out
