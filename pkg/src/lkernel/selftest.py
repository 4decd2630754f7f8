"""Invariant checks across all modules, shared by ``lkernel selftest`` and the test suite.

Each check returns ``(name, ok, detail)``; none of them raise on failure.
"""

import math
from fractions import Fraction

import numpy as np

from . import kernel as K
from .lfunc import lstar, petersson_norm
from .modforms import delta, delta_eta_product, dim_cusp, eigenbasis, hecke_operator, victor_miller_basis
from .specfun import gamma, hurwitz_zeta, zeta, zeta_euler_maclaurin


def _result(name, err, tol):
    return name, bool(err <= tol), f"err={err:.3g} tol={tol:g}"


def check_gamma_reflection():
    worst = 0.0
    for z in (0.3 + 0.7j, 2.5 - 1.2j, 0.1 + 4j):
        lhs = gamma(z) * gamma(1 - z)
        rhs = math.pi / np.sin(math.pi * z)
        worst = max(worst, abs(lhs / rhs - 1))
    return _result("gamma reflection", worst, 1e-13)


def check_zeta_routes():
    worst = 0.0
    for s in (2.5 + 3j, -1.3 + 0.4j, 0.5 + 14.134725j, 7.0):
        worst = max(worst, abs(zeta(s) - zeta_euler_maclaurin(s)) / max(1.0, abs(zeta(s))))
    return _result("zeta eta vs Euler-Maclaurin", worst, 1e-12)


def check_zeta_functional_equation():
    worst = 0.0
    for s in (0.3 + 2j, -2.5 + 1j, 3.7 - 0.5j):
        rhs = 2**s * math.pi ** (s - 1) * np.sin(math.pi * s / 2) * gamma(1 - s) * zeta(1 - s)
        worst = max(worst, abs(zeta(s) - rhs) / abs(zeta(s)))
    return _result("zeta functional equation", worst, 1e-12)


def check_hurwitz_multiplication():
    # sum_{r<m} zeta(s, r/m) = m^s zeta(s)
    s, m = 3.3 + 1.1j, 5
    lhs = sum(hurwitz_zeta(s, r / m) for r in range(1, m + 1))
    return _result("Hurwitz multiplication", abs(lhs - m**s * zeta(s)) / abs(lhs), 1e-12)


def check_delta_routes():
    ok = delta(60).coeffs == delta_eta_product(60).coeffs
    return "Delta: Eisenstein vs eta product", ok, "exact"


def check_hecke():
    problems = []
    for k in (12, 16, 24):
        basis = victor_miller_basis(k, 80)
        for g in basis:
            if hecke_operator(hecke_operator(g, 2), 3, 6).coeffs != hecke_operator(hecke_operator(g, 3), 2, 6).coeffs:
                problems.append(f"T2T3 != T3T2 at k={k}")
        for f in eigenbasis(k, 80, basis):
            a = f.coeffs
            if abs(a[6] - a[2] * a[3]) > 1e-6 * abs(a[6]) + 1e-6:
                problems.append(f"a(6) != a(2)a(3) at k={k}")
            if abs(a[4] - (a[2] ** 2 - 2 ** (k - 1))) > 1e-6 * abs(a[4]) + 1e-6:
                problems.append(f"a(4) recursion at k={k}")
            for p in (2, 3, 5, 7, 11, 13):
                if abs(a[p]) > 2 * p ** ((k - 1) / 2):
                    problems.append(f"Deligne bound fails at k={k}, p={p}")
    return "Hecke multiplicativity and Deligne bound", not problems, "; ".join(problems) or "ok"


def check_lstar_functional_equation():
    worst = 0.0
    for k in (12, 16, 18):
        for f in eigenbasis(k):
            for s in (2.3 + 1j, 4.5, 0.7 - 2j):
                a, b = lstar(f, k - s), (-1) ** (k // 2) * lstar(f, s)
                worst = max(worst, abs(a - b) / abs(a))
    return _result("L* functional equation", worst, 1e-12)


def check_central_zero():
    # (-1)^(k/2) = -1 at k = 18 forces L*(f, 9) = 0
    f = eigenbasis(18)[0]
    v = abs(lstar(f, 9))
    return _result("central zero at k=18", v / abs(lstar(f, 8)), 1e-12)


def check_petersson_scaling():
    f = eigenbasis(12)[0]
    n1, err = petersson_norm(f, return_error=True)
    return _result("Petersson norm error estimate", err / n1, 1e-10)


def check_enumeration(n_max=50):
    fast = sorted(K.enumerate_quadruples(n_max))
    brute = []
    for a in range(1, n_max + 1):
        for d in range(1, n_max // a + 1):
            if a * d < 2:
                continue
            for c in range(1, a * d):
                if (a * d - 1) % c == 0:
                    brute.append(K.MatrixQuadruple(a, (a * d - 1) // c, c, d))
    return "quadruple enumeration vs brute force", fast == sorted(brute), f"{len(fast)} quadruples"


def check_lattice_vs_shells():
    p = K.ParamPoint(14, 7.3, 3.7)
    lat = K.hyper_sum(p, box=24)
    sh = K.hyper_sum_shells(p, 300)
    err = abs(lat.value - sh.value)
    return "lattice sum vs shell sum", bool(err <= 2 * sh.trunc_error + 1e-12), f"diff={err:.3g} shell tail={sh.trunc_error:.3g}"


def check_fold_identity():
    p = K.ParamPoint(12, 6.5, 2.5)
    a = K.mellin_lhs(p, m_max=16, nodes=16)
    b = K.mellin_lhs(p, m_max=16, nodes=16, folded=False)
    return _result("fold identity for the truncated kernel", abs(a - b) / abs(a), 1e-10)


def check_swap_symmetry():
    p = K.ParamPoint(12, 6.5, 2.5)
    a, b = K.spectral_lhs(p), K.spectral_lhs(p.swapped())
    return _result("spectral side symmetric under s <-> s'", abs(a - b) / abs(a), 1e-14)


def check_kernel_symmetry():
    # R_{s,k} / gamma_k(s) = e^{-i pi s} R_{k-s,k} / gamma_k(k-s), exactly for the truncated set
    s, k, t = 4.3 + 0.6j, 12, 1.2
    lhs = K.kernel_value(s, k, t, 20) / K.gamma_k(s, k)
    rhs = np.exp(-1j * math.pi * s) * K.kernel_value(k - s, k, t, 20) / K.gamma_k(k - s, k)
    return _result("kernel s <-> k-s relation", abs(lhs - rhs) / abs(lhs), 1e-12)


def check_theorem_k12():
    p = K.validate_params(12, 5.8 + 1.2j, 3.2 - 1.2j)
    rhs = K.gamma_k(p.s, p.k) * K.rhs_theorem(p).total
    lhs = K.spectral_lhs(p)
    return _result("identity at k=12 against eigenforms", abs(rhs - lhs) / abs(lhs), 1e-6)


def check_empty_space():
    p = K.validate_params(8, 3.6, 1.4)
    res, bound = K.corollary2_residual(p, box=24)
    return _result("vanishing sum at k=8", res, max(1e-8, 10 * bound))


def check_dimensions():
    dims = {k: dim_cusp(k) for k in (8, 10, 12, 14, 16, 18, 24, 26, 36)}
    want = {8: 0, 10: 0, 12: 1, 14: 0, 16: 1, 18: 1, 24: 2, 26: 1, 36: 3}
    ok = dims == want and all(len(victor_miller_basis(k, 40)) == d for k, d in want.items() if k <= 26)
    return "cusp form dimensions", ok, str(dims)


def check_exact_arithmetic():
    g = victor_miller_basis(24, 30)
    ok = all(isinstance(c, Fraction) for c in g[1].coeffs) and g[0][1] == 1 and g[0][2] == 0
    return "echelon basis is exact", ok, "Fraction coefficients"


CHECKS = (
    check_gamma_reflection,
    check_zeta_routes,
    check_zeta_functional_equation,
    check_hurwitz_multiplication,
    check_dimensions,
    check_exact_arithmetic,
    check_delta_routes,
    check_hecke,
    check_lstar_functional_equation,
    check_central_zero,
    check_petersson_scaling,
    check_enumeration,
    check_lattice_vs_shells,
    check_fold_identity,
    check_swap_symmetry,
    check_kernel_symmetry,
    check_theorem_k12,
    check_empty_space,
)


def run_all():
    out = []
    for check in CHECKS:
        try:
            out.append(check())
        except Exception as exc:  # a crash is a failed check, not an aborted suite
            out.append((check.__name__, False, f"{type(exc).__name__}: {exc}"))
    return out
