"""Pure-numpy hit-and-run chain kernel (fallback backend).

Mirrors the compiled kernel step for step: identical chord arithmetic,
identical clamping, identical handling of numerically empty chords, so
that both backends walk the same trajectory from the same random stream.
"""

from __future__ import annotations

import numpy as np


def run_chain(x0, lower, upper, normals, offsets, dirs, uniforms, out):
    """Walk ``dirs.shape[0]`` chord steps; fill ``out``; return invalid-step count.

    Each step intersects the ray through the current point with the box and
    every cut (normals @ x <= offsets), then jumps to a uniform point of the
    chord.  A numerically empty chord leaves the point in place.
    """
    x = np.array(x0, dtype=np.float64, copy=True)
    steps = dirs.shape[0]
    have_cuts = normals.shape[0] > 0
    invalid = 0
    for s in range(steps):
        d = dirs[s]
        mask = d != 0.0
        if mask.any():
            dm = d[mask]
            to_lower = (lower[mask] - x[mask]) / dm
            to_upper = (upper[mask] - x[mask]) / dm
            tmin = float(np.minimum(to_lower, to_upper).max())
            tmax = float(np.maximum(to_lower, to_upper).min())
        else:
            tmin, tmax = -np.inf, np.inf
        if have_cuts:
            along = (normals * d).sum(axis=1)
            resid = offsets - (normals * x).sum(axis=1)
            closing = along > 0.0
            if closing.any():
                tmax = min(tmax, float((resid[closing] / along[closing]).min()))
            opening = along < 0.0
            if opening.any():
                tmin = max(tmin, float((resid[opening] / along[opening]).max()))
        # Chords below 1e-12 mean the body has (numerically) no interior
        # along this direction; the walker stays put.
        if not (tmax - tmin >= 1e-12) or not np.isfinite(tmin) or not np.isfinite(tmax):
            invalid += 1
            out[s] = x
            continue
        t = tmin + uniforms[s] * (tmax - tmin)
        x = x + t * d
        np.maximum(x, lower, out=x)
        np.minimum(x, upper, out=x)
        out[s] = x
    return invalid
