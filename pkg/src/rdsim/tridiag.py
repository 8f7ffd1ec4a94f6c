"""Thomas algorithm for tridiagonal systems."""

import numpy as np


def solve_tridiagonal(lower, diag, upper, rhs):
    """Solve ``lower[i] u[i-1] + diag[i] u[i] + upper[i] u[i+1] = rhs[i]``.

    All four arrays have length n; ``lower[0]`` and ``upper[-1]`` are ignored.
    No pivoting: the caller is responsible for a well-conditioned (e.g.
    diagonally dominant) matrix.  O(n) work.
    """
    a = np.asarray(lower, dtype=float).tolist()
    b = np.asarray(diag, dtype=float).tolist()
    c = np.asarray(upper, dtype=float).tolist()
    d = np.asarray(rhs, dtype=float).tolist()
    n = len(b)
    if not (len(a) == len(c) == len(d) == n):
        raise ValueError("lower, diag, upper and rhs must have equal length")
    cp = [0.0] * n
    dp = [0.0] * n
    cp[0] = c[0] / b[0] if n > 1 else 0.0
    dp[0] = d[0] / b[0]
    for i in range(1, n):
        m = b[i] - a[i] * cp[i - 1]
        if m == 0.0:
            raise ZeroDivisionError(f"zero pivot at row {i}")
        cp[i] = c[i] / m if i < n - 1 else 0.0
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m
    u = [0.0] * n
    u[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        u[i] = dp[i] - cp[i] * u[i + 1]
    return np.array(u)


def is_diagonally_dominant(lower, diag, upper) -> bool:
    lower = np.asarray(lower, dtype=float).copy()
    upper = np.asarray(upper, dtype=float).copy()
    lower[0] = 0.0
    upper[-1] = 0.0
    return bool(np.all(np.abs(diag) >= np.abs(lower) + np.abs(upper)))
