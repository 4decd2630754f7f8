"""Completed L-values, periods and Petersson norms of level-one cusp forms."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .errors import AccuracyError, DomainError, PrecisionError
from .specfun import TWO_PI, AccuracyBudget, csum, principal_pow, upper_incomplete_gamma


@dataclass(frozen=True)
class LStarSeriesParams:
    n_terms: int = 40
    budget: AccuracyBudget = field(default_factory=AccuracyBudget)


@dataclass(frozen=True)
class PeterssonQuadParams:
    y_max: float = 12.0
    nx: int = 32
    ny: int = 32

    def __post_init__(self):
        if self.y_max < 2:
            raise ValueError("y_max must be >= 2")
        if self.nx < 8 or self.ny < 8:
            raise ValueError("nx and ny must be >= 8")


def coefficients(f):
    """Numeric coefficient array a(0..N) of an Eigenform or QExpansion."""
    a = np.asarray(f.coeffs)
    if a.dtype == object:
        a = np.array([float(c) for c in a])
    return a


def lstar(f, s, params=LStarSeriesParams()):
    """L*(f, s) = (2 pi)^-s Gamma(s) L(f, s) for any complex s.

    Uses the Mellin integral split at t = 1, which turns each coefficient
    into a pair of upper incomplete Gamma values.
    """
    k = f.weight
    a = coefficients(f)
    n_terms = params.n_terms
    if len(a) - 1 < n_terms:
        raise PrecisionError(f"form has {len(a) - 1} coefficients, lstar asked for {n_terms}")
    s = complex(s)
    sign = (-1) ** (k // 2)
    terms = []
    for n in range(1, n_terms + 1):
        if a[n] == 0:
            continue
        x = TWO_PI * n
        left = principal_pow(x, -s) * upper_incomplete_gamma(s, x, params.budget)
        right = principal_pow(x, s - k) * upper_incomplete_gamma(k - s, x, params.budget)
        terms.append(a[n] * (left + sign * right))
    return csum(terms)


def period(f, n, params=LStarSeriesParams()):
    """r_n(f) = int_0^inf f(it) t^n dt = L*(f, n+1), 0 <= n <= k-2."""
    if not 0 <= n <= f.weight - 2 or int(n) != n:
        raise DomainError(f"period index must be an integer in [0, {f.weight - 2}]")
    return lstar(f, n + 1, params)


def mellin_quadrature(f, s, t_min=0.1, epsrel=1e-12):
    """int_{t_min}^inf f(it) t^(s-1) dt straight from the q-expansion.

    An oracle for :func:`lstar`: it uses neither the functional equation nor
    incomplete Gamma values.  Below ``t_min`` the integrand is of size
    t^(Re s - 1 - k) exp(-2 pi / t) and is dropped; ``f`` needs enough
    coefficients that a(N) exp(-2 pi N t_min) is negligible.
    """
    a = coefficients(f)
    n = np.arange(len(a))
    s = complex(s)
    cutoff = abs(a[-1]) * math.exp(-TWO_PI * (len(a) - 1) * t_min)
    if cutoff > 1e-25:
        raise PrecisionError(f"{len(a) - 1} coefficients are too few for t_min={t_min}")

    def integrand(t):
        return complex(np.dot(a, np.exp(-TWO_PI * n * t))) * principal_pow(t, s - 1.0)

    head, e1 = quadrature.adaptive(integrand, t_min, 1.0, epsabs=1e-16, epsrel=epsrel)
    tail, e2 = quadrature.adaptive(integrand, 1.0, np.inf, epsabs=1e-16, epsrel=epsrel)
    return head + tail


def _petersson_panel(a, k, x, wx, y_lo, y_max, ny):
    # one x-node: integrate |f(x+iy)|^2 y^(k-2) over y in [y_lo, y_max]
    breaks = quadrature.geometric_breaks(y_lo, y_max, first=0.25)
    y, wy = quadrature.panel_nodes(breaks, ny)
    n = np.arange(1, len(a))
    phase = np.exp(2j * math.pi * n * x)
    vals = np.exp(-TWO_PI * np.outer(y, n)) @ (a[1:] * phase)
    return wx * math.fsum(wy * np.abs(vals) ** 2 * y ** (k - 2))


def _petersson_grid(a, k, params, workers):
    xs, wxs = quadrature.panel_nodes([-0.5, 0.0, 0.5], params.nx)
    jobs = [(a, k, x, wx, math.sqrt(1.0 - x * x), params.y_max, params.ny) for x, wx in zip(xs, wxs)]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _petersson_panel(*j), jobs))
    else:
        parts = [_petersson_panel(*j) for j in jobs]
    # fixed-order reduction keeps the result independent of the worker count
    return math.fsum(parts)


def petersson_norm(f, params=PeterssonQuadParams(), target=1e-8, workers=None, return_error=False):
    """<f, f> = int_F |f|^2 y^(k-2) dx dy over the standard fundamental domain.

    The error estimate is the change against a grid with 3/4 of the nodes in
    each direction plus the analytic bound on the cut-off above ``y_max``.
    """
    a = coefficients(f)
    if a[0] != 0:
        raise DomainError("petersson_norm needs a cusp form")
    k = f.weight
    fine = _petersson_grid(a, k, params, workers)
    coarse_params = PeterssonQuadParams(params.y_max, max(8, 3 * params.nx // 4), max(8, 3 * params.ny // 4))
    coarse = _petersson_grid(a, k, coarse_params, workers)
    # past y_max, |f| <= A e^{-2 pi y} with A = sum |a(n)| e^{-2 pi (n-1) y_max}
    n = np.arange(1, len(a))
    amp = float(np.sum(np.abs(a[1:]) * np.exp(-TWO_PI * (n - 1) * params.y_max)))
    rate = 2 * TWO_PI - (k - 2) / params.y_max
    tail = amp**2 * math.exp(-2 * TWO_PI * params.y_max) * params.y_max ** (k - 2) / rate
    err = abs(fine - coarse) + tail
    if not fine > 0 or err > target * fine:
        raise AccuracyError(f"Petersson quadrature error {err:.3g} exceeds target {target:g}", err)
    return (fine, err) if return_error else fine
