"""Complex special functions in double precision.

Everything here works on Python ``complex`` scalars (a few helpers also take
numpy arrays).  Powers always use the principal branch with
``-pi < arg z <= pi``; callers elsewhere in the package go through
:func:`principal_pow` instead of ``**``.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, DomainError, PoleError

PI = math.pi
TWO_PI = 2.0 * math.pi
SQRT_TWO_PI = 2.5066282746310005
LOG_TWO = math.log(2.0)


@dataclass(frozen=True)
class AccuracyBudget:
    abs_tol: float = 1e-16
    rel_tol: float = 1e-15
    max_terms: int = 4000

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise ValueError("tolerances must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_BUDGET = AccuracyBudget()


def csum(values):
    """Compensated sum of complex values (``math.fsum`` on each part)."""
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def _is_nonpositive_integer(z):
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


# ---------------------------------------------------------------- powers


def principal_arg(z):
    """Argument of ``z`` in (-pi, pi]; a negative real maps to +pi even for -0.0j."""
    z = complex(z)
    if z.imag == 0.0 and z.real < 0.0:
        return PI
    return math.atan2(z.imag, z.real)


def principal_log(z):
    z = complex(z)
    if z == 0:
        raise DomainError("logarithm of zero")
    return complex(math.log(abs(z)), principal_arg(z))


def principal_pow(z, w):
    """``z**w = exp(w log z)`` with ``arg z`` in (-pi, pi]."""
    z = complex(z)
    w = complex(w)
    if z == 0:
        raise DomainError("principal_pow: zero base")
    if w == 0:
        return 1.0 + 0.0j
    if z.imag == 0.0 and z.real > 0.0:
        lz = math.log(z.real)
        return cmath.exp(w * lz)
    return cmath.exp(w * principal_log(z))


def principal_pow_array(z, w):
    """Vectorised :func:`principal_pow` for numpy arrays of nonzero bases."""
    z = np.asarray(z, dtype=complex)
    # -0.0 imaginary parts would put negative reals at arg -pi
    z = z.real + 1j * np.where(z.imag == 0.0, 0.0, z.imag)
    return np.exp(np.asarray(w, dtype=complex) * np.log(z))


def _expm1_complex(w):
    w = complex(w)
    a, b = w.real, w.imag
    re = math.expm1(a) * math.cos(b) - 2.0 * math.sin(0.5 * b) ** 2
    im = math.exp(a) * math.sin(b)
    return complex(re, im)


# ----------------------------------------------------------------- Gamma

# Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)


def _lanczos_log_gamma(z):
    # valid for Re z >= 1/2
    ser = _LANCZOS_COEF[0]
    for j in range(1, len(_LANCZOS_COEF)):
        ser += _LANCZOS_COEF[j] / (z + j)
    tmp = z + _LANCZOS_G + 0.5
    return (z + 0.5) * cmath.log(tmp) - tmp + cmath.log(SQRT_TWO_PI * ser / z)


def log_gamma(z):
    """log Gamma(z).

    For Re z >= 1/2 this is the branch continuous from the positive real
    axis.  Left of that line the reflection formula is used and the
    imaginary part is only defined modulo 2*pi.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real >= 0.5:
        return _lanczos_log_gamma(z)
    return cmath.log(PI / cmath.sin(PI * z)) - _lanczos_log_gamma(1.0 - z)


def gamma(z):
    """Gamma function for complex ``z`` (reflection used for Re z < 1/2)."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.imag == 0.0 and z.real == math.floor(z.real) and 0 < z.real <= 171:
        return complex(math.factorial(int(z.real) - 1))
    if z.real >= 0.5:
        return cmath.exp(_lanczos_log_gamma(z))
    return PI / (cmath.sin(PI * z) * cmath.exp(_lanczos_log_gamma(1.0 - z)))


def rgamma(z):
    """1/Gamma(z), zero at the poles of Gamma."""
    if _is_nonpositive_integer(z):
        return 0j
    return 1.0 / gamma(z)


# ------------------------------------------------------------ Pochhammer


def pochhammer(z, m):
    """Rising factorial (z)_m = z (z+1) ... (z+m-1); (z)_0 = 1."""
    if m < 0 or int(m) != m:
        raise DomainError("pochhammer needs a nonnegative integer length")
    z = complex(z)
    out = 1.0 + 0.0j
    for j in range(int(m)):
        out *= z + j
    return out


# ------------------------------------------------------ Bernoulli numbers


@lru_cache(maxsize=None)
def _bernoulli_fractions(n):
    # B_0..B_n via the Akiyama-Tanigawa transform (B_1 = +1/2 convention, unused)
    out = []
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


@lru_cache(maxsize=None)
def _em_coefficients(m_terms):
    """B_{2j}/(2j)! for j = 1..m_terms as floats."""
    b = _bernoulli_fractions(2 * m_terms)
    return np.array([float(b[2 * j] / math.factorial(2 * j)) for j in range(1, m_terms + 1)])


# ------------------------------------------------------------------ zeta

_EM_TERMS = 14


def hurwitz_zeta(s, q, n_direct=None):
    """Hurwitz zeta sum_{n>=0} (n+q)^(-s) by Euler-Maclaurin summation.

    ``s`` may be a scalar or a 1-d array (vectorised over ``s`` for one
    ``q``).  ``q`` may be complex as long as no ``n+q`` lies on the
    nonpositive real axis; powers are principal.  Requires Re s > 1 for the
    defining series, but the formula is the analytic continuation for any
    s != 1.
    """
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    q = complex(q)
    if np.any(s == 1.0):
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    if q.imag == 0.0 and q.real <= 0.0 and q.real == math.floor(q.real):
        raise DomainError("Hurwitz zeta: q is a nonpositive integer")
    smax = float(np.max(np.abs(s)))
    if n_direct is None:
        n_direct = max(25, int(0.35 * smax) + 12)
    n = np.arange(n_direct, dtype=float)
    logs = np.log((n + q).astype(complex) + 0j)
    direct = np.exp(-s[:, None] * logs[None, :])
    head = direct.sum(axis=1)
    big_n = n_direct + q
    log_big = cmath.log(big_n)
    tail = np.exp((1.0 - s) * log_big) / (s - 1.0) + 0.5 * np.exp(-s * log_big)
    coef = _em_coefficients(_EM_TERMS)
    # (s)_{2j-1} N^{-s-2j+1}, built incrementally
    rising = s.copy()
    power = np.exp(-(s + 1.0) * log_big)
    inv_n2 = 1.0 / (big_n * big_n)
    for j in range(_EM_TERMS):
        term = coef[j] * rising * power
        tail = tail + term
        if np.all(np.abs(term) <= 1e-18 * np.abs(head + tail)):
            break
        rising = rising * (s + 2 * j + 1) * (s + 2 * j + 2)
        power = power * inv_n2
    out = head + tail
    return complex(out[0]) if scalar else out


def hurwitz_zeta_grid(s0, n_shift, qs, n_direct=None):
    """Table Z[i, j] = hurwitz_zeta(s0 + j, qs[i]) for j < n_shift, positive real qs.

    Same Euler-Maclaurin scheme as :func:`hurwitz_zeta`, evaluated for a
    whole family at once.
    """
    qs = np.atleast_1d(np.asarray(qs, dtype=float))
    if np.any(qs <= 0):
        raise DomainError("hurwitz_zeta_grid needs positive real q")
    s = complex(s0) + np.arange(n_shift)
    if np.any(s == 1.0):
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    if n_direct is None:
        n_direct = max(25, int(0.35 * float(np.max(np.abs(s)))) + 12)
    logs = np.log(np.arange(n_direct, dtype=float)[None, :] + qs[:, None])
    head = np.exp(-s[None, :, None] * logs[:, None, :]).sum(axis=2)
    log_big = np.log(n_direct + qs)[:, None]
    tail = np.exp((1.0 - s) * log_big) / (s - 1.0) + 0.5 * np.exp(-s * log_big)
    coef = _em_coefficients(_EM_TERMS)
    rising = np.broadcast_to(s, tail.shape).copy()
    power = np.exp(-(s + 1.0) * log_big)
    inv_n2 = np.exp(-2.0 * log_big)
    for j in range(_EM_TERMS):
        term = coef[j] * rising * power
        tail = tail + term
        if np.all(np.abs(term) <= 1e-18 * np.abs(head + tail)):
            break
        rising = rising * (s + 2 * j + 1) * (s + 2 * j + 2)
        power = power * inv_n2
    return head + tail


def zeta_euler_maclaurin(s):
    """Riemann zeta via Euler-Maclaurin tail correction."""
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s.real < 0.0 and abs(s) >= 0.5:
        # the direct head grows like N^(1-s) and cancels; reflect instead
        if _is_nonpositive_integer(s) and int(s.real) % 2 == 0:
            return 0j
        one_minus = 1.0 - s
        return (
            principal_pow(2.0, s)
            * principal_pow(PI, s - 1.0)
            * cmath.sin(0.5 * PI * s)
            * gamma(one_minus)
            * zeta_euler_maclaurin(one_minus)
        )
    n_direct = max(25, int(abs(s.imag) * 0.9) + 15)
    return hurwitz_zeta(s, 1.0, n_direct=n_direct)


@lru_cache(maxsize=64)
def _borwein_weights(n):
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), returned as (d_k - d_n)/d_n
    d = []
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction(math.factorial(n + i - 1) * 4**i, math.factorial(n - i) * math.factorial(2 * i))
        d.append(n * acc)
    dn = d[-1]
    return np.array([float((d[k] - dn) / dn) for k in range(n)])


def _eta_borwein(s):
    n = 30 + int(math.ceil(1.2 * abs(s.imag)))
    w = _borwein_weights(n)
    k = np.arange(n, dtype=float)
    terms = w * np.where(k % 2 == 0, 1.0, -1.0) * np.exp(-s * np.log(k + 1.0))
    return -csum(terms)


def zeta_eta(s):
    """Riemann zeta via Borwein's accelerated alternating (eta) series.

    Used directly for Re s >= 1/2; the functional equation reflects the
    rest of the plane onto that half.
    """
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s.real >= 0.5 or abs(s) < 0.5:
        # the eta series is fine near 0; reflecting there would pass next to the pole
        denom = -_expm1_complex((1.0 - s) * LOG_TWO)  # 1 - 2^(1-s)
        return _eta_borwein(s) / denom
    if _is_nonpositive_integer(s) and int(s.real) % 2 == 0:
        return 0j  # trivial zeros
    one_minus = 1.0 - s
    return (
        principal_pow(2.0, s)
        * principal_pow(PI, s - 1.0)
        * cmath.sin(0.5 * PI * s)
        * gamma(one_minus)
        * zeta_eta(one_minus)
    )


def zeta(s):
    """Riemann zeta for complex ``s != 1``."""
    return zeta_eta(s)


# ------------------------------------------------- incomplete gamma


def _lower_gamma_series(s, x, budget):
    # gamma(s, x) = x^s e^-x sum_n x^n / (s (s+1) ... (s+n))
    term = 1.0 / s
    total = [term]
    for n in range(1, budget.max_terms):
        term *= x / (s + n)
        total.append(term)
        if abs(term) < 1e-17 * abs(total[0]) and n > abs(s):
            break
    else:
        raise AccuracyError("incomplete gamma series did not converge", abs(term))
    return csum(total) * cmath.exp(s * math.log(x) - x)


def _upper_gamma_cf(s, x, budget):
    # modified Lentz on the Legendre continued fraction
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, budget.max_terms):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    else:
        raise AccuracyError("incomplete gamma continued fraction did not converge", abs(delta - 1.0))
    return cmath.exp(s * math.log(x) - x) * h


EULER_GAMMA = 0.57721566490153286061


@lru_cache(maxsize=1)
def _zeta_integers():
    return np.array([zeta_eta(k).real for k in range(2, 64)])


def _expm1_ratio(w):
    # (e^w - 1)/w, continuous at 0
    if abs(w) < 1e-5:
        return 1.0 + w / 2.0 + w * w / 6.0
    return _expm1_complex(w) / w


def _upper_gamma_small_s(s, x, budget):
    # Gamma(s) and x^s/s both blow up like 1/s; subtract them analytically:
    # Gamma(s, x) = (Gamma(1+s) - 1)/s - (x^s - 1)/s - x^s sum_{n>=1} (-x)^n / (n! (s+n))
    k = np.arange(2, 64)
    lg_over_s = -EULER_GAMMA - complex(np.sum(_zeta_integers() * (-s) ** (k - 1) / k))
    lx = math.log(x)
    head = _expm1_ratio(s * lg_over_s) * lg_over_s - _expm1_ratio(s * lx) * lx
    total = []
    term = 1.0
    for n in range(1, budget.max_terms):
        term *= -x / n
        total.append(term / (s + n))
        if abs(term) < 1e-18:
            break
    else:
        raise AccuracyError("incomplete gamma series did not converge", abs(term))
    return head - principal_pow(x, s) * csum(total)


def upper_incomplete_gamma(s, x, budget=DEFAULT_BUDGET):
    """Gamma(s, x) = int_x^inf t^(s-1) e^-t dt for complex s and x > 0."""
    s = complex(s)
    x = float(x)
    if not x > 0:
        raise DomainError("upper_incomplete_gamma needs x > 0")
    if x >= abs(s) + 1.0 or s.real < 0.0:
        # for Re s < 0 the series cancels catastrophically; the fraction still converges
        return _upper_gamma_cf(s, x, budget)
    if abs(s) < 0.5:
        return _upper_gamma_small_s(s, x, budget)
    return gamma(s) - _lower_gamma_series(s, x, budget)


def lower_incomplete_gamma(s, x, budget=DEFAULT_BUDGET):
    s = complex(s)
    x = float(x)
    if not x > 0:
        raise DomainError("lower_incomplete_gamma needs x > 0")
    if x >= abs(s) + 1.0:
        return gamma(s) - _upper_gamma_cf(s, x, budget)
    return _lower_gamma_series(s, x, budget)


# --------------------------------------------------------------- 2F1


def gauss_2f1(a, b, c, z, budget=DEFAULT_BUDGET):
    """Gauss hypergeometric series 2F1(a, b; c; z) for real 0 <= z <= 1/2.

    Summation stops once the current term times 1/(1-rho) drops below the
    tolerance, where rho bounds the ratio of all later terms.
    """
    a, b, c = complex(a), complex(b), complex(c)
    z = float(z)
    if _is_nonpositive_integer(c):
        raise DomainError("2F1: c is a nonpositive integer")
    if not 0.0 <= z <= 0.5:
        raise DomainError("2F1 is only provided for 0 <= z <= 1/2")
    if z == 0.0:
        return 1.0 + 0.0j
    term = 1.0 + 0.0j
    terms = [term]
    running = term
    mag_a, mag_b = abs(a), abs(b)
    for m in range(budget.max_terms):
        term = term * (a + m) * (b + m) / ((c + m) * (m + 1)) * z
        terms.append(term)
        running += term
        if term == 0:
            return csum(terms)
        j = m + 1
        if j > mag_a + mag_b + 1 and j + c.real > 0:
            # ratio bound for all later terms; the factor is decreasing past this point
            g = (j + mag_a) * (j + mag_b) / ((j + c.real) * (j + 1))
            rho = z * max(g, 1.0)
            if rho < 1.0:
                bound = abs(term) * rho / (1.0 - rho)
                if bound < max(budget.abs_tol, budget.rel_tol * abs(running)):
                    return csum(terms)
    raise AccuracyError("2F1 series did not converge within max_terms", abs(term))
