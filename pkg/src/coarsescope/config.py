"""Numeric tolerances.

All paper bounds are inequalities; a single fixed absolute slack keeps the
checks deterministic.  COARSESCOPE_TOL overrides the default.
"""

from __future__ import annotations

import os

DEFAULT_TOL = 1e-9

TOL = float(os.environ.get("COARSESCOPE_TOL", DEFAULT_TOL))


def get_tol() -> float:
    return TOL
