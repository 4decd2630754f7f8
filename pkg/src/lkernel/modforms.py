"""Level-one modular forms as exact rational q-expansions.

Expansions are tuples of :class:`fractions.Fraction`; floats only appear when
an eigenbasis is extracted.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from .errors import DomainError, PrecisionError

DEFAULT_PREC = 64


def _sigma(n, power):
    return sum(d**power for d in range(1, n + 1) if n % d == 0)


@dataclass(frozen=True)
class QExpansion:
    """Truncated q-series a(0) + a(1) q + ... + a(prec) q^prec."""

    weight: int
    prec: int
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != self.prec + 1:
            raise ValueError(f"expected {self.prec + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    @property
    def is_cusp(self):
        return self.coeffs[0] == 0

    def truncate(self, prec):
        if prec > self.prec:
            raise PrecisionError(f"cannot extend precision {self.prec} to {prec}")
        return QExpansion(self.weight, prec, self.coeffs[: prec + 1])

    def __add__(self, other):
        if self.weight != other.weight:
            raise DomainError("cannot add forms of different weight")
        prec = min(self.prec, other.prec)
        return QExpansion(self.weight, prec, [a + b for a, b in zip(self.coeffs, other.coeffs)][: prec + 1])

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return QExpansion(self.weight, self.prec, [c * a for a in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, QExpansion):
            return self.scale(other)
        prec = min(self.prec, other.prec)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(prec + 1):
            out.append(sum(a[i] * b[n - i] for i in range(n + 1) if a[i] and b[n - i]))
        return QExpansion(self.weight + other.weight, prec, out)

    __rmul__ = scale

    def __pow__(self, e):
        if e == 0:
            return QExpansion(0, self.prec, [1] + [0] * self.prec)
        return reduce(lambda x, y: x * y, [self] * e)

    def to_json(self):
        return {
            "weight": self.weight,
            "prec": self.prec,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["weight"]), int(obj["prec"]), [Fraction(c) for c in obj["coeffs"]])


def eisenstein(k, prec=DEFAULT_PREC):
    """E4 or E6, normalised to constant term 1."""
    if k == 4:
        c, p = 240, 3
    elif k == 6:
        c, p = -504, 5
    else:
        raise DomainError("only E4 and E6 are provided; form the rest as products")
    return QExpansion(k, prec, [1] + [c * _sigma(n, p) for n in range(1, prec + 1)])


def delta(prec=DEFAULT_PREC):
    """Ramanujan's Delta = (E4^3 - E6^2)/1728."""
    if prec < 1:
        raise PrecisionError("delta needs prec >= 1")
    e4, e6 = eisenstein(4, prec), eisenstein(6, prec)
    return ((e4**3) - (e6**2)).scale(Fraction(1, 1728))


def delta_eta_product(prec=DEFAULT_PREC):
    """Delta from q * prod (1 - q^n)^24, expanded with integer arithmetic."""
    c = [0] * (prec + 1)
    c[0] = 1
    for n in range(1, prec + 1):
        for _ in range(24):
            for m in range(prec, n - 1, -1):
                c[m] -= c[m - n]
    return QExpansion(12, prec, [0] + c[:prec])


def dim_cusp(k):
    """Dimension of S_k for SL_2(Z)."""
    if k < 0 or k % 2:
        return 0
    if k < 12 or k == 14:
        return 0
    return k // 12 - 1 if k % 12 == 2 else k // 12


def _eisenstein_monomial(m, prec):
    # some E4^a E6^b of weight m (m != 2, m >= 0)
    if m == 0:
        return QExpansion(0, prec, [1] + [0] * prec)
    if m % 4 == 0:
        return eisenstein(4, prec) ** (m // 4)
    if m < 6:
        raise DomainError(f"no modular form of weight {m}")
    out = eisenstein(6, prec)
    if m > 6:
        out = out * eisenstein(4, prec) ** ((m - 6) // 4)
    return out


def victor_miller_basis(k, prec=DEFAULT_PREC):
    """Echelon basis g_1..g_d of S_k with g_i = q^i + O(q^(d+1))."""
    if k < 4 or k % 2:
        raise DomainError("weight must be an even integer >= 4")
    d = dim_cusp(k)
    if d == 0:
        return []
    if prec < d + 1:
        raise PrecisionError(f"prec {prec} too small for dim S_{k} = {d}")
    dl = delta(prec)
    rows = []
    for j in range(1, d + 1):
        rows.append(dl**j * _eisenstein_monomial(k - 12 * j, prec))
    # rows[j] = q^(j+1) + ...; clear the entries above the diagonal
    for i in range(d - 1, -1, -1):
        for j in range(i):
            c = rows[j][i + 1]
            if c:
                rows[j] = rows[j] - rows[i].scale(c)
    return [QExpansion(k, prec, r.coeffs) for r in rows]


def hecke_operator(f, n, prec=None):
    """T_n f for a level-one form, a(m) -> sum_{e | (m, n)} e^(k-1) a(mn/e^2)."""
    if n < 1:
        raise DomainError("Hecke index must be positive")
    max_prec = f.prec // n
    if prec is None:
        prec = max_prec
    if prec > max_prec:
        raise PrecisionError(f"T_{n} needs {n * prec} coefficients, have {f.prec}")
    k = f.weight
    out = []
    for m in range(prec + 1):
        if m == 0:
            # constant term: sigma_{k-1}(n) a(0)
            out.append(f[0] * _sigma(n, k - 1))
            continue
        g = math.gcd(m, n)
        out.append(sum(Fraction(e ** (k - 1)) * f[m * n // (e * e)] for e in range(1, g + 1) if g % e == 0))
    return QExpansion(k, prec, out)


def hecke_matrix(k, n, prec=DEFAULT_PREC, basis=None):
    """Exact matrix of T_n on the echelon basis: T_n g_i = sum_j M[i][j] g_j."""
    if basis is None:
        basis = victor_miller_basis(k, prec)
    d = len(basis)
    rows = []
    for g in basis:
        tg = hecke_operator(g, n, d)
        rows.append([tg[j] for j in range(1, d + 1)])
    return rows


@dataclass(frozen=True)
class Eigenform:
    """Normalised Hecke eigenform; ``coeffs[n]`` is a(n) with a(0) = 0."""

    weight: int
    coeffs: np.ndarray = field(repr=False)
    index: int = 1

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def prec(self):
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self):
        return f"Eigenform(weight={self.weight}, index={self.index}, a(2)={self.coeffs[2]:.10g}, prec={self.prec})"


def _char_roots(m):
    d = len(m)
    if d == 1:
        return [float(m[0][0])]
    if d == 2:
        tr = m[0][0] + m[1][1]
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        disc = tr * tr - 4 * det
        if disc <= 0:
            return None if disc == 0 else []
        r = math.sqrt(disc) if disc.denominator == 1 and disc.numerator < 2**52 else float(disc) ** 0.5
        return sorted([float(tr) / 2 - r / 2, float(tr) / 2 + r / 2])
    return None


def eigenbasis(k, prec=DEFAULT_PREC, basis=None):
    """Normalised Hecke eigenforms of S_k, sorted by a(2) ascending."""
    if basis is None:
        basis = victor_miller_basis(k, prec) if dim_cusp(k) else []
    d = len(basis)
    if d == 0:
        return []
    prec = min(g.prec for g in basis)
    gmat = np.array([[float(g[n]) for n in range(prec + 1)] for g in basis])
    vectors = None
    for p in (2, 3):
        m = hecke_matrix(k, p, basis=basis)
        mf = np.array([[float(x) for x in row] for row in m])
        roots = _char_roots(m) if d <= 2 else None
        if d <= 2 and roots is None:
            continue  # repeated eigenvalue for this operator
        if roots is None:
            vals, vecs = np.linalg.eig(mf.T)
            if np.min(np.abs(np.subtract.outer(vals, vals)) + np.eye(d) * 1e300) < 1e-6 * np.max(np.abs(vals)):
                continue
            vectors = [np.real(vecs[:, i] / vecs[0, i]) for i in range(d)]
        else:
            # left eigenvector of M with first entry 1
            vectors = []
            for lam in roots:
                if d == 1:
                    vectors.append(np.array([1.0]))
                else:
                    # (1, v) M = lam (1, v)  =>  M[0][1] + v M[1][1] = lam v
                    v = float(m[0][1]) / (lam - float(m[1][1]))
                    vectors.append(np.array([1.0, v]))
        break
    if vectors is None:
        raise DomainError(f"T_2 and T_3 both degenerate on S_{k}")
    forms = [v @ gmat for v in vectors]
    forms.sort(key=lambda c: c[2] if prec >= 2 else 0.0)
    return [Eigenform(k, c, i + 1) for i, c in enumerate(forms)]
