"""Least-squares line fits used by the sweep reports."""

from __future__ import annotations

import numpy as np

__all__ = ["linear_fit", "loglog_fit"]


def linear_fit(x, y):
    """Ordinary least squares line; returns (slope, intercept, r_squared)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise ValueError("need at least two points to fit a line")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float((resid**2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2


def loglog_fit(x, y):
    """Power-law fit y ~ c * x**slope; returns (slope, log_intercept, r_squared)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if (x <= 0).any() or (y <= 0).any():
        raise ValueError("log-log fit needs positive data")
    return linear_fit(np.log(x), np.log(y))
