"""Polynomial root helpers: Durand-Kerner iteration with reality
symmetrization, and exact Sturm-chain counting of real roots for
Fraction-coefficient polynomials.

The two routes are independent: Durand-Kerner produces floating root
locations, the Sturm chain certifies the count of distinct real roots in an
interval with exact rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

REAL_IM_TOL = 1e-9


def durand_kerner(coeffs, max_iter: int = 200, tol: float = 1e-13):
    """All complex roots of sum_k coeffs[k] z^k (ascending, complex).

    Leading zeros are stripped; returns an array of len = degree.
    """
    c = np.asarray(coeffs, dtype=complex)
    while len(c) > 1 and c[-1] == 0:
        c = c[:-1]
    deg = len(c) - 1
    if deg <= 0:
        return np.zeros(0, dtype=complex)
    monic = c / c[-1]

    def p(z):
        out = np.zeros_like(z)
        for ck in monic[::-1]:
            out = out * z + ck
        return out

    scale = 1.0 + max(abs(x) for x in monic[:-1])
    z = scale * (0.4 + 0.9j) ** np.arange(1, deg + 1)
    for _ in range(max_iter):
        delta = np.zeros_like(z)
        for i in range(deg):
            others = np.delete(z, i)
            denom = np.prod(z[i] - others) if deg > 1 else 1.0
            delta[i] = p(np.array([z[i]]))[0] / denom
        z = z - delta
        if np.max(np.abs(delta)) < tol * max(1.0, np.max(np.abs(z))):
            break
    return z


def symmetrize_real(roots, tol: float = REAL_IM_TOL):
    """Snap near-real roots to the real axis and pair the rest conjugately."""
    out = np.array(roots, dtype=complex)
    scale = max(1.0, np.max(np.abs(out)) if out.size else 1.0)
    for i, z in enumerate(out):
        if abs(z.imag) < tol * scale:
            out[i] = complex(z.real, 0.0)
    return out


# -- exact Sturm chain -------------------------------------------------------

def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_div(a, b):
    """Return remainder of a by b, Fraction coefficients ascending."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and _trim(a):
        da, la = len(a) - 1, a[-1]
        if da < db:
            break
        q = la / lb
        for i in range(db + 1):
            a[da - db + i] -= q * b[i]
        a.pop()
        _trim(a)
    return a if a else [Fraction(0)]


def _deriv(p):
    return [k * c for k, c in enumerate(p)][1:] or [Fraction(0)]


def sturm_chain(p):
    p = _trim([Fraction(c) for c in p])
    if not p:
        return []
    chain = [p, _deriv(p)]
    while len(chain[-1]) > 1 or (chain[-1] and chain[-1][0] != 0):
        r = _poly_div(chain[-2], chain[-1])
        r = [-c for c in r]
        if len(r) == 1 and r[0] == 0:
            break
        chain.append(r)
        if len(r) == 1:
            break
    return chain


def _eval_frac(p, x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(p):
        out = out * x + c
    return out


def _sign_changes(chain, x: Fraction) -> int:
    signs = []
    for p in chain:
        v = _eval_frac(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(coeffs, lo, hi) -> int:
    """Number of distinct real roots of the polynomial in (lo, hi].

    Exact: coefficients and endpoints are converted to Fraction.
    """
    p = _trim([Fraction(c) for c in coeffs])
    if len(p) <= 1:
        return 0
    lo, hi = Fraction(lo), Fraction(hi)
    chain = sturm_chain(p)
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def is_squarefree(coeffs) -> bool:
    """True when gcd(p, p') is constant, i.e. all roots are simple."""
    p = _trim([Fraction(c) for c in coeffs])
    if len(p) <= 1:
        return True
    a, b = p, _deriv(p)
    while len(b) > 1 or b[0] != 0:
        a, b = b, _poly_div(a, b)
        if len(b) == 1 and b[0] == 0:
            break
    return len(a) == 1 and a[0] != 0
