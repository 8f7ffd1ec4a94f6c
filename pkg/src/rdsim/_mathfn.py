"""Elementary functions that accept numpy inputs or mpmath scalars.

Closed-form profiles and fields are written against these helpers so the
same expression can be evaluated in float64 (vectorised, for the solver and
figure output) or in extended precision (for the residual oracles, where
large coefficients would otherwise drown finite differences in round-off).
"""

import mpmath
import numpy as np


def is_mp(v):
    return isinstance(v, mpmath.mpf)


def exp(v):
    return mpmath.exp(v) if is_mp(v) else np.exp(v)


def sqrt(v):
    return mpmath.sqrt(v) if is_mp(v) else np.sqrt(v)


def positive_part(v):
    if is_mp(v):
        return v if v > 0 else mpmath.mpf(0)
    return np.maximum(v, 0.0)


def where(cond, a, b):
    if is_mp(a) or is_mp(b):
        return a if cond else b
    return np.where(cond, a, b)


def zeros_like(v):
    if is_mp(v):
        return mpmath.mpf(0)
    return np.zeros_like(np.asarray(v, dtype=float))


def ones_like(v):
    if is_mp(v):
        return mpmath.mpf(1)
    return np.ones_like(np.asarray(v, dtype=float))


def isfinite(v):
    if is_mp(v):
        return mpmath.isfinite(v)
    return bool(np.all(np.isfinite(v)))


def promote(value, like):
    """Lift a float parameter to the working precision of ``like``."""
    return mpmath.mpf(value) if is_mp(like) else value
