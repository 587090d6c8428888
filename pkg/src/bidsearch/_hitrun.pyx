# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hit-and-run chain kernel (hot loop of the centroid solver).

Must stay arithmetic-identical to ``_hitrun_py.run_chain``: same chord
bounds, same summation order in the cut dot products (plain left-to-right,
matching numpy's small-array reduction), same clamping.  Compiled with
fp-contract off so no fused multiply-adds sneak in.
"""

import numpy as np

cimport numpy as cnp


def run_chain(double[::1] x0, double[::1] lower, double[::1] upper,
              double[:, ::1] normals, double[::1] offsets,
              double[:, ::1] dirs, double[::1] uniforms,
              double[:, ::1] out):
    """Walk ``dirs.shape[0]`` chord steps; fill ``out``; return invalid-step count."""
    cdef Py_ssize_t steps = dirs.shape[0]
    cdef Py_ssize_t m = dirs.shape[1]
    cdef Py_ssize_t ncuts = normals.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x_arr = np.array(x0, dtype=np.float64, copy=True)
    cdef double[::1] x = x_arr
    cdef Py_ssize_t s, j, r
    cdef double d, lo_t, hi_t, enter, leave, tmin, tmax
    cdef double along, dot, resid, ratio, t
    cdef double INF = float("inf")
    cdef int invalid = 0

    for s in range(steps):
        tmin = -INF
        tmax = INF
        for j in range(m):
            d = dirs[s, j]
            if d != 0.0:
                lo_t = (lower[j] - x[j]) / d
                hi_t = (upper[j] - x[j]) / d
                if lo_t < hi_t:
                    enter = lo_t
                    leave = hi_t
                else:
                    enter = hi_t
                    leave = lo_t
                if enter > tmin:
                    tmin = enter
                if leave < tmax:
                    tmax = leave
        for r in range(ncuts):
            along = 0.0
            dot = 0.0
            for j in range(m):
                along = along + normals[r, j] * dirs[s, j]
                dot = dot + normals[r, j] * x[j]
            resid = offsets[r] - dot
            if along > 0.0:
                ratio = resid / along
                if ratio < tmax:
                    tmax = ratio
            elif along < 0.0:
                ratio = resid / along
                if ratio > tmin:
                    tmin = ratio
        # Chords below 1e-12 mean the body has (numerically) no interior
        # along this direction; the walker stays put.
        if not (tmax - tmin >= 1e-12) or tmin == -INF or tmax == INF or tmin != tmin or tmax != tmax:
            invalid += 1
            for j in range(m):
                out[s, j] = x[j]
            continue
        t = tmin + uniforms[s] * (tmax - tmin)
        for j in range(m):
            x[j] = x[j] + t * dirs[s, j]
            if x[j] < lower[j]:
                x[j] = lower[j]
            if x[j] > upper[j]:
                x[j] = upper[j]
            out[s, j] = x[j]
    return invalid
