"""Backend selection and the shared hit-and-run front end.

The chord-stepping inner loop dominates the centroid solver's runtime, so
it lives in a compiled extension when available; a numpy twin is selected
at import time otherwise.  Set ``BIDSEARCH_KERNEL=python`` or
``BIDSEARCH_KERNEL=compiled`` to force a backend (the latter raises if the
extension is missing).  Random draws happen out here, in numpy, so both
backends consume the identical stream.
"""

from __future__ import annotations

import os

import numpy as np

_requested = os.environ.get("BIDSEARCH_KERNEL", "").strip().lower()
if _requested in ("python", "py"):
    from . import _hitrun_py as _impl

    BACKEND = "python"
elif _requested in ("compiled", "c"):
    from . import _hitrun as _impl  # type: ignore[attr-defined]

    BACKEND = "compiled"
elif _requested == "":
    try:
        from . import _hitrun as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _hitrun_py as _impl

        BACKEND = "python"
else:
    raise ImportError(
        f"BIDSEARCH_KERNEL must be 'compiled' or 'python' (got {_requested!r})"
    )


def active_backend() -> str:
    """Name of the kernel backend in use: 'compiled' or 'python'."""
    return BACKEND


def hit_and_run(
    start: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    normals: np.ndarray,
    offsets: np.ndarray,
    num_samples: int,
    burn_in: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, int]:
    """Hit-and-run chain inside box + cuts; returns (retained samples, invalid count).

    The first ``burn_in`` positions are discarded; the remaining
    ``num_samples`` rows are returned.  ``invalid`` counts steps whose
    chord was numerically empty (the walker stayed put).
    """
    m = start.shape[0]
    steps = burn_in + num_samples
    if steps <= 0:
        raise ValueError("need at least one chain step")
    dirs = rng.standard_normal((steps, m))
    norms = np.sqrt((dirs * dirs).sum(axis=1))
    # A zero normal vector has probability zero; nudge defensively.
    norms[norms == 0.0] = 1.0
    dirs /= norms[:, None]
    uniforms = rng.random(steps)
    out = np.empty((steps, m), dtype=np.float64)
    invalid = _impl.run_chain(
        np.ascontiguousarray(start, dtype=np.float64),
        np.ascontiguousarray(lower, dtype=np.float64),
        np.ascontiguousarray(upper, dtype=np.float64),
        np.ascontiguousarray(normals, dtype=np.float64).reshape(-1, m),
        np.ascontiguousarray(offsets, dtype=np.float64),
        dirs,
        uniforms,
        out,
    )
    return out[burn_in:], int(invalid)
