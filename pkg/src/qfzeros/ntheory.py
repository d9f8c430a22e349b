"""Elementary number theory used by the local/global Dirichlet-series machinery.

Factorization, Kronecker/Jacobi/Legendre symbols, Ramanujan sums, the explicit
real characters mod 4 and mod 8, Gauss character sums, and Euler-Maclaurin
evaluators for zeta(s), the Hurwitz zeta(s, a) and Dirichlet L(s, chi).

Everything here is pure and reentrant; the only caches are immutable tables.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

POLE_GUARD = 1e-8

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_LIMIT = 10 ** 6


class DomainError(ValueError):
    """Input outside an operation's stated domain."""


class CostGuardError(RuntimeError):
    """A brute-force evaluation would exceed its cost guard."""


class PoleError(ArithmeticError):
    """Evaluation requested at (or too close to) a pole.

    Carries the pole location and the residue of the offending factor.
    """

    def __init__(self, location: complex, residue: complex, what: str = ""):
        super().__init__(f"pole of {what or 'function'} at s={location} "
                         f"(residue {residue})")
        self.location = location
        self.residue = residue
        self.what = what


@dataclass(frozen=True)
class ComplexPoint:
    """A point s = sigma + i t of the complex plane."""
    sigma: float
    t: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise DomainError("non-finite complex point")

    @classmethod
    def of(cls, s: complex) -> "ComplexPoint":
        s = complex(s)
        return cls(s.real, s.imag)

    def as_complex(self) -> complex:
        return complex(self.sigma, self.t)


@dataclass(frozen=True)
class PrimePower:
    p: int
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise DomainError("negative exponent")
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")

    @property
    def value(self) -> int:
        return self.p ** self.k


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 2^64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int, rng: random.Random) -> int:
    """Brent-cycle Pollard rho; n odd composite, no factor below trial limit."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m, g, r, q = 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(q: int) -> list[PrimePower]:
    """Prime factorization of q >= 1, primes strictly increasing.

    Trial division below 10^6, Pollard rho beyond.
    """
    if q <= 0:
        raise DomainError("factorize needs a positive integer")
    if q >= 2 ** 63:
        raise DomainError("factorize limited to q < 2^63")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while q % p == 0:
            out[p] = out.get(p, 0) + 1
            q //= p
    f = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= q and f < _TRIAL_LIMIT:
        if q % f == 0:
            out[f] = out.get(f, 0) + 1
            q //= f
        else:
            f += wheel[i]
            i = (i + 1) % 8
    stack = [q] if q > 1 else []
    rng = random.Random(q)
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m, rng)
        stack.extend((d, m // d))
    return [PrimePower(p, k) for p, k in sorted(out.items())]


def euler_phi(q: int) -> int:
    out = q
    for pp in factorize(q):
        out -= out // pp.p
    return out


def mobius(q: int) -> int:
    fac = factorize(q)
    if any(pp.k > 1 for pp in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def _jacobi(a: int, b: int) -> int:
    """Jacobi symbol (a|b) for odd b > 0."""
    a %= b
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                result = -result
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            result = -result
        a %= b
    return result if b == 1 else 0


def kronecker(a: int, b: int) -> int:
    """Full Kronecker symbol (a|b), b arbitrary (even, zero or negative).

    Conventions: (a|0) = 1 iff a = +-1; (a|-1) = -1 iff a < 0;
    (a|2) = 0 for even a and +-1 by a mod 8 otherwise.  Completely
    multiplicative in both arguments.
    """
    if b == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if b < 0:
        b = -b
        if a < 0:
            result = -1
    if b % 2 == 0:
        if a % 2 == 0:
            return 0
        tz = (b & -b).bit_length() - 1
        b >>= tz
        if tz % 2 and a % 8 in (3, 5):
            result = -result
    return result * _jacobi(a, b)


def legendre(a: int, p: int) -> int:
    """Legendre symbol for odd prime p (Jacobi for odd b behaves the same)."""
    return _jacobi(a, p)


def ramanujan_sum(q: int, m: int) -> int:
    """Ramanujan sum c_q(m) = sum over (a,q)=1 of e(am/q); integer valued.

    Evaluated multiplicatively from the prime-power three-case table:
    c_{p^t}(m) = 0 / -p^{t-1} / phi(p^t) according to v_p(m) < t-1,
    = t-1, >= t.
    """
    if q < 1:
        raise DomainError("modulus must be positive")
    out = 1
    for pp in factorize(q):
        p, t = pp.p, pp.k
        if m == 0:
            v = t  # v_p(0) treated as +infinity, capped
        else:
            v, mm = 0, abs(m)
            while mm % p == 0 and v < t:
                mm //= p
                v += 1
        if v >= t:
            out *= (p - 1) * p ** (t - 1)
        elif v == t - 1:
            out *= -(p ** (t - 1))
        else:
            return 0
    return out


def ramanujan_sum_direct(q: int, m: int) -> int:
    """Direct summation oracle for c_q(m); O(q)."""
    acc = 0.0
    for a in range(q):
        if math.gcd(a, q) == 1:
            acc += math.cos(2 * math.pi * a * m / q)
    return round(acc)


# ---------------------------------------------------------------------------
# Dirichlet characters

@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character given by its full value table mod q.

    values[a] is chi(a mod q); zero exactly on residues sharing a factor
    with q.  All characters used here take values in {0, +-1, +-i}.
    """
    modulus: int
    values: tuple[complex, ...]
    conductor: int
    label: str = "custom"

    def __call__(self, a: int) -> complex:
        return self.values[a % self.modulus]

    @property
    def is_principal(self) -> bool:
        return all(v == 1 for a, v in enumerate(self.values)
                   if math.gcd(a, self.modulus) == 1)

    def induced_to(self, k: int) -> "DirichletCharacter":
        """The character mod k induced by self (self.modulus | k)."""
        if k % self.modulus:
            raise DomainError("can only induce to a multiple of the modulus")
        vals = tuple(self(a) if math.gcd(a, k) == 1 else 0.0
                     for a in range(k))
        return DirichletCharacter(k, vals, self.conductor, self.label)


_CHAR_TABLES = {
    # residues 1, 3, 5, 7 mod 8 (chi4 read mod 4 on odd residues)
    "chi4": (4, {1: 1, 3: -1}, 4),
    "chi8_1": (8, {1: 1, 3: -1, 5: 1, 7: -1}, 4),   # induced by chi4
    "chi8_2": (8, {1: 1, 3: 1, 5: -1, 7: -1}, 8),   # kronecker(-2|.)
    "chi8_3": (8, {1: 1, 3: -1, 5: -1, 7: 1}, 8),   # kronecker(2|.)
}


@lru_cache(maxsize=None)
def char_table(label: str) -> DirichletCharacter:
    """The explicit real characters mod 4 and mod 8 (printed-table values)."""
    if label not in _CHAR_TABLES:
        raise DomainError(f"unknown character label {label!r}")
    q, odd_vals, cond = _CHAR_TABLES[label]
    vals = tuple(complex(odd_vals[a % q if q == 8 else a % 4]) if a % 2 else 0j
                 for a in range(q))
    return DirichletCharacter(q, vals, cond, label)


def chi4(a: int) -> int:
    """chi4 as a fast integer-valued function."""
    if a % 2 == 0:
        return 0
    return 1 if a % 4 == 1 else -1


def chi8_2(a: int) -> int:
    if a % 2 == 0:
        return 0
    return 1 if a % 8 in (1, 3) else -1


def chi8_3(a: int) -> int:
    if a % 2 == 0:
        return 0
    return 1 if a % 8 in (1, 7) else -1


@lru_cache(maxsize=None)
def legendre_character(p: int) -> DirichletCharacter:
    """The quadratic character mod an odd prime p."""
    if p == 2 or not is_prime(p):
        raise DomainError("need an odd prime")
    vals = tuple(complex(legendre(a, p)) for a in range(p))
    return DirichletCharacter(p, vals, p, "legendre")


def principal_character(q: int) -> DirichletCharacter:
    vals = tuple(1.0 + 0j if math.gcd(a, q) == 1 else 0j for a in range(q))
    return DirichletCharacter(q, vals, 1, "principal")


def gauss_char_sum(k: int, m: int, chi: DirichletCharacter) -> complex:
    """tau_k(m, chi) = sum_{n mod k} chi(n) e(mn/k) by direct summation.

    chi may be given mod a divisor of k; it is then used in induced form
    (zero on residues sharing a factor with k).
    """
    if k % chi.modulus:
        raise DomainError("character modulus must divide k")
    acc = 0j
    for n in range(k):
        v = chi(n) if math.gcd(n, k) == 1 else 0.0
        if v:
            acc += v * cmath.exp(2j * math.pi * m * n / k)
    return acc


# ---------------------------------------------------------------------------
# zeta / Hurwitz zeta / Dirichlet L by Euler-Maclaurin

_EM_TERMS = 50
_EM_CORRECTIONS = 20

_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_complex(z: complex) -> complex:
    """Complex Gamma via Lanczos (g = 7, 9 terms); reflection for Re z < 1/2."""
    z = complex(z)
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma_complex(1.0 - z))
    z -= 1.0
    x = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def _bernoulli_even(count: int) -> list[Fraction]:
    """B_2, B_4, ..., B_{2*count} by the defining recurrence (exact)."""
    n_max = 2 * count
    b = [Fraction(0)] * (n_max + 1)
    b[0] = Fraction(1)
    for m in range(1, n_max + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * b[k]
        b[m] = -acc / (m + 1)
    return [b[2 * j] for j in range(1, count + 1)]


# entry j (0-based) is B_{2(j+1)} / (2(j+1))!
_B2J_OVER_FACT = tuple(float(bj / math.factorial(2 * (j + 1)))
                       for j, bj in enumerate(_bernoulli_even(_EM_CORRECTIONS + 2)))


def _hurwitz_reg(s: complex, a: float, n_terms: int = _EM_TERMS,
                 n_corr: int = _EM_CORRECTIONS) -> complex:
    """zeta(s, a) - 1/(s-1), analytic at s = 1; Euler-Maclaurin.

    Absolute error below ~1e-11 for |s| <= 50, Re(s) >= -10, 0 < a <= 1.
    """
    s = complex(s)
    N = max(n_terms, int(1.5 * abs(s.imag)) + 10)
    acc = 0j
    for k in range(N):
        acc += (k + a) ** (-s)
    w = N + a
    lw = math.log(w)
    # (w^{1-s} - 1)/(s - 1) via expm1 for stability through s = 1
    z = (1 - s) * lw
    if abs(z) < 1e-12:
        acc += -lw * (1.0 + z / 2.0)
    else:
        acc += -lw * (cmath.exp(z) - 1.0) / z
    acc += 0.5 * w ** (-s)
    poch = s
    wpow = w ** (-s - 1)
    w2 = 1.0 / (w * w)
    for j in range(1, n_corr + 1):
        acc += _B2J_OVER_FACT[j - 1] * poch * wpow
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        wpow *= w2
    return acc


# For Re(s) below this, Euler-Maclaurin loses digits to cancellation and the
# functional equation is used instead.
_FUNEQ_SIGMA = -0.25


def _as_fraction(a) -> Fraction:
    fr = Fraction(a).limit_denominator(10 ** 6)
    if float(fr) != float(a):
        raise DomainError("functional-equation branch needs rational a")
    return fr


def hurwitz_zeta(s: complex, a) -> complex:
    """Hurwitz zeta(s, a) for rational a in (0, 1]; pole at s = 1.

    Euler-Maclaurin for Re(s) >= -1/4; the rational-argument functional
    equation (a finite cosine combination of zeta(1-s, r/q)) below, where
    direct summation would cancel catastrophically in double precision.
    """
    fr = _as_fraction(a)
    if not 0 < fr <= 1:
        raise DomainError("hurwitz_zeta needs a in (0, 1]")
    s = complex(s)
    if abs(s - 1) < POLE_GUARD:
        raise PoleError(1.0, 1.0, "hurwitz zeta")
    if s.real >= _FUNEQ_SIGMA:
        return _hurwitz_reg(s, float(fr)) + 1.0 / (s - 1)
    sp = 1.0 - s  # Re(sp) > 1.25: cancellation-free region
    p, q = fr.numerator, fr.denominator
    acc = 0j
    for r in range(1, q + 1):
        acc += cmath.cos(math.pi * sp / 2 - 2 * math.pi * r * p / q) \
            * (_hurwitz_reg(sp, r / q) + 1.0 / (sp - 1))
    return 2.0 * gamma_complex(sp) / (2 * math.pi * q) ** sp * acc


def zeta(s: complex) -> complex:
    """Riemann zeta; simple pole at s = 1 with residue 1."""
    s = complex(s)
    if abs(s - 1) < POLE_GUARD:
        raise PoleError(1.0, 1.0, "zeta")
    if s.real >= _FUNEQ_SIGMA:
        return _hurwitz_reg(s, 1.0) + 1.0 / (s - 1)
    sp = 1.0 - s
    chi = 2.0 ** s * math.pi ** (s - 1) * cmath.sin(math.pi * s / 2) \
        * gamma_complex(sp)
    return chi * (_hurwitz_reg(sp, 1.0) + 1.0 / (sp - 1))


ZETA_RESIDUE_AT_1 = 1.0  # supplied analytically, never computed numerically


def dirichlet_L(s: complex, chi: DirichletCharacter) -> complex:
    """L(s, chi) via q^{-s} sum_a chi(a) zeta(s, a/q).

    For principal chi this is zeta(s) times the finite Euler factors, with
    the pole at s = 1 (residue phi(q)/q) raised as PoleError.  For
    non-principal chi the common Hurwitz pole cancels exactly and the
    regularized form is used, so s = 1 is fine.
    """
    s = complex(s)
    q = chi.modulus
    if chi.is_principal:
        if abs(s - 1) < POLE_GUARD:
            raise PoleError(1.0, euler_phi(q) / q, "principal L")
        out = zeta(s)
        for pp in factorize(q):
            out *= 1.0 - pp.p ** (-s)
        return out
    acc = 0j
    for a in range(1, q + 1):
        v = chi(a)
        if v:
            acc += v * _hurwitz_reg(s, a / q)
    return q ** (-s) * acc


def dirichlet_L_direct(s: complex, chi: DirichletCharacter,
                       terms: int = 20000) -> complex:
    """Truncated Dirichlet series; test oracle for Re(s) comfortably > 1."""
    s = complex(s)
    acc = 0j
    for m in range(1, terms + 1):
        v = chi(m)
        if v:
            acc += v * m ** (-s)
    return acc
