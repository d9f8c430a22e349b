"""n-dimensional Gauss sums G_k(A, v) mod p^k.

Definition (normalized): G_k(A, v) = p^{-nk/2} sum_x e^{pi i x^t A x / p^k}
e^{2 pi i v.x / p^k}, x over (Z/p^k)^n, A integer symmetric.

For odd p the half-integer exponent is read p-adically, i.e. the quadratic
phase is x^t A x * inv(2) mod p^k; this agrees with the analytic definition
whenever x^t A x is even (in particular for A = 2aJ) and is the convention
under which congruence invariance and the vanishing criterion are exact
statements about sums mod p^k.  For p = 2 the exponent e^{pi i m / 2^k} is
honored exactly as a 2^{k+1}-th root of unity (well defined for k >= 1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ntheory import CostGuardError, DomainError, kronecker

_BRUTE_GUARD = 10 ** 7


def _check_symmetric(a_matrix: np.ndarray) -> np.ndarray:
    a = np.asarray(a_matrix, dtype=object)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("A must be square")
    if not (a == a.T).all():
        raise DomainError("A must be symmetric")
    return a


def gauss_bruteforce(p: int, k: int, a_matrix, v) -> complex:
    """G_k(A, v) by direct summation over (Z/p^k)^n; guarded at p^{kn} <= 1e7."""
    a = _check_symmetric(a_matrix)
    n = a.shape[0]
    v = [int(t) for t in v]
    if len(v) != n:
        raise DomainError("v has wrong length")
    if k == 0:
        return 1.0 + 0j
    q = p ** k
    if q ** n > _BRUTE_GUARD:
        raise CostGuardError(f"p^(kn) = {q ** n} exceeds brute-force guard")
    # phases as exact residues mod 2q: x^t A x + 2 v.x
    grids = np.meshgrid(*([np.arange(q, dtype=np.int64)] * n), indexing="ij")
    xs = np.stack([g.ravel() for g in grids], axis=1)
    am = (a % (2 * q)).astype(object if q > 40000 else np.int64)
    if am.dtype == object:
        xs = xs.astype(object)
    quad = np.einsum("xi,ij,xj->x", xs, am, xs)
    lin = xs @ np.array(v, dtype=np.int64)
    if p == 2:
        phase = (quad + 2 * lin) % (2 * q)
        total = np.exp(1j * math.pi / q * phase).sum()
    else:
        inv2 = (q + 1) // 2
        phase = (quad * inv2 + lin) % q
        total = np.exp(2j * math.pi / q * phase).sum()
    return complex(total) * p ** (-n * k / 2)


def gauss_1d_closed(p: int, k: int, u: int) -> complex:
    """Closed form of p^{-k/2} sum_{x mod p^k} e(u x^2 / p^k), p odd p!|u;
    for p = 2, of 2^{-k/2} sum e^{2 pi i u x^2 / 2^k} with u odd.

    Matches gauss_bruteforce with A = (2u) exactly (brute force is ground
    truth); zero for p = 2, k = 1.
    """
    if k == 0:
        return 1.0 + 0j
    if p == 2:
        if u % 2 == 0:
            raise DomainError("u must be odd for p = 2")
        if k == 1:
            return 0j
        eps = 1j ** (u % 4)
        return kronecker(2, u % 8) ** k * (1 + eps)
    if u % p == 0:
        raise DomainError("u must be a unit mod p")
    q = p ** k
    eps = 1j if q % 4 == 3 else 1.0 + 0j
    return kronecker(u, q) * eps


@dataclass
class GaussSumValue:
    value: complex
    vanishes: bool
    witness_u: tuple[int, ...] | None


def _vp_fraction(x: Fraction, p: int, cap: int) -> int:
    """p-adic valuation of a p-integral Fraction, capped at cap; 0 -> cap."""
    if x == 0:
        return cap
    num = x.numerator
    v = 0
    while num % p == 0 and v < cap:
        num //= p
        v += 1
    return v


def _diagonalize_padic(a: np.ndarray, p: int):
    """Symmetric congruence diagonalization over Z_(p), p odd.

    Returns (diag, pmat) with pmat^t A pmat = diag(diag) and pmat invertible
    over Z_(p) (entries are Fractions with p-unit denominators).  Pivot is
    the entry of minimal p-valuation, ties to the lowest index.
    """
    n = a.shape[0]
    m = [[Fraction(int(a[i, j])) for j in range(n)] for i in range(n)]
    pm = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    big = 10 ** 9

    def add_col(dst, src, lam):
        # x_dst -> x_dst + lam x_src as a substitution: col/row updates
        for r in range(n):
            m[r][dst] += lam * m[r][src]
        for r in range(n):
            m[dst][r] += lam * m[src][r]
        for r in range(n):
            pm[r][dst] += lam * pm[r][src]

    def swap(i, j):
        for r in range(n):
            m[r][i], m[r][j] = m[r][j], m[r][i]
        m[i], m[j] = m[j], m[i]
        for r in range(n):
            pm[r][i], pm[r][j] = pm[r][j], pm[r][i]

    for idx in range(n):
        best, bi, bj = big + 1, -1, -1
        for i in range(idx, n):
            for j in range(i, n):
                val = _vp_fraction(m[i][j], p, big)
                if val < best:
                    best, bi, bj = val, i, j
        if best > big - 1:
            break  # remaining block is zero
        if bi != bj:
            diag_hit = min((_vp_fraction(m[i][i], p, big), i)
                           for i in range(idx, n))
            if diag_hit[0] == best:
                bi = bj = diag_hit[1]
            else:
                add_col(bi, bj, Fraction(1))  # brings min valuation on-diagonal
        if bi != idx:
            swap(bi, idx)
        piv = m[idx][idx]
        for r in range(idx + 1, n):
            if m[idx][r]:
                add_col(r, idx, -m[idx][r] / piv)
    return [m[i][i] for i in range(n)], pm


def _frac_mod(x: Fraction, q: int) -> int:
    den = x.denominator % q
    return x.numerator % q * pow(den, -1, q) % q


def prop32_reduce(p: int, k: int, a_matrix, v) -> GaussSumValue:
    """Vanishing criterion and phase reduction for G_k(A, v), p odd.

    G_k(A, v) is nonzero iff v = A u is solvable mod p^k; then
    G_k(A, v) = e^{-pi i u^t A u / p^k} G_k(A), evaluated here through the
    p-adic diagonalization of A and the 1-d closed forms.
    """
    if p == 2 or p < 2:
        raise DomainError("prop32_reduce needs an odd prime")
    a = _check_symmetric(a_matrix)
    n = a.shape[0]
    v = [int(t) for t in v]
    if k == 0:
        return GaussSumValue(1.0 + 0j, False, tuple([0] * n))
    q = p ** k
    diag, pm = _diagonalize_padic(a, p)
    # w = P^t v; exact p-integral rationals
    w = [sum(pm[r][i] * v[r] for r in range(n)) for i in range(n)]
    u_tilde = []
    g_val = 1.0 + 0j
    for i in range(n):
        d_mod = _frac_mod(diag[i], q)
        a_i = min(_vp_fraction(Fraction(d_mod), p, k), k)
        w_mod = _frac_mod(w[i], q)
        v_w = _vp_fraction(Fraction(w_mod), p, k)
        if v_w < a_i:
            return GaussSumValue(0j, True, None)
        if a_i >= k:
            u_tilde.append(0)
        else:
            unit = d_mod // p ** a_i
            u_tilde.append(w_mod // p ** a_i * pow(unit, -1, q) % q)
        # 1-d factor p^{-k/2} sum e(inv2 d x^2 / p^k) = p^{a/2} (2u_d | p^{k-a}) eps
        if a_i >= k:
            g_val *= p ** (k / 2)
        else:
            unit = d_mod // p ** a_i
            pk_a = p ** (k - a_i)
            eps = 1j if pk_a % 4 == 3 else 1.0 + 0j
            g_val *= p ** (a_i / 2) * kronecker(2 * unit, pk_a) * eps
    u = [int(sum(_frac_mod(pm[r][i] * u_tilde[i], q) for i in range(n)) % q)
         for r in range(n)]
    quad = sum(int(a[i, j]) * u[i] * u[j] for i in range(n) for j in range(n))
    inv2 = (q + 1) // 2
    phase = cmath.exp(-2j * math.pi * (quad * inv2 % q) / q)
    return GaussSumValue(phase * g_val, False, tuple(u))


def random_unimodular(n: int, p: int, k: int, rng) -> np.ndarray:
    """A random P in GL_n(Z/p^k): entries in [0, p^k), det a unit mod p."""
    q = p ** k
    while True:
        mat = np.array([[rng.randrange(q) for _ in range(n)] for _ in range(n)],
                       dtype=object)
        if _int_det(mat) % p:
            return mat


def _int_det(mat: np.ndarray) -> int:
    n = mat.shape[0]
    if n == 1:
        return int(mat[0, 0])
    if n == 2:
        return int(mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0])
    total = 0
    for j in range(n):
        minor = np.delete(np.delete(mat, 0, axis=0), j, axis=1)
        total += (-1) ** j * int(mat[0, j]) * _int_det(minor)
    return total
