"""Quadrature helpers: fixed Gauss-Legendre panels and an adaptive wrapper."""

from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import AccuracyError


@lru_cache(maxsize=32)
def gauss_legendre(n):
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(breaks, n):
    """Gauss-Legendre nodes/weights on consecutive panels ``breaks[i]..breaks[i+1]``."""
    x, w = gauss_legendre(n)
    breaks = np.asarray(breaks, dtype=float)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (hi - lo)
    return (lo + half * (x + 1.0)).ravel(), (half * w).ravel()


def geometric_breaks(a, b, first=0.25):
    """Panel boundaries a, a+first, a+2 first, a+4 first, ... clipped at b."""
    out = [a]
    step = first
    while out[-1] + step < b:
        out.append(out[-1] + step)
        step *= 2.0
    out.append(b)
    return out


def adaptive(func, a, b, epsabs=1e-13, epsrel=1e-12, limit=400, points=None):
    """Adaptive QUADPACK integral of a complex-valued ``func`` over [a, b].

    Returns ``(value, error_estimate)``.  Raises AccuracyError when the
    reported error exceeds ``max(epsabs, epsrel*|value|)`` by more than 100x.
    """
    kwargs = dict(epsabs=epsabs, epsrel=epsrel, limit=limit, complex_func=True, full_output=True)
    if points is not None and np.isfinite(a) and np.isfinite(b):
        kwargs["points"] = points
    val, err, info = integrate.quad(func, a, b, **kwargs)
    err = float(abs(err))
    val = complex(val)
    if err > 100.0 * max(epsabs, epsrel * abs(val)):
        raise AccuracyError(f"adaptive quadrature on [{a}, {b}] reached only {err:.3g}", err)
    return val, err
