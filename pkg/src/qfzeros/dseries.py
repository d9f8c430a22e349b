"""Euler factors D_p(c, s), the global series D(c, s) = sum S(q, c) q^{-s-n-1}
in its three regimes, the quadratic character attached to (c, J), pole
bookkeeping, and residue extraction.

Closed forms used here (all oracle-tested against truncated sums):

* c = 0:      D(0,s) = Dbar2(0,s) zeta(s+1) zeta(2s+n) / zeta(2s+n+1)
* isotropic:  D(c,s) = Dbar2 * [zeta(2s+n)/zeta(2s+n+1)] * prod_{p|c} T_p,
              T_p = sum_{k<=v_p(c)} p^{-k(s+1)}  (a divisor sum over q | c)
* anisotropic: L-quotient times finitely many polynomial local factors;
              S(p^k, c) vanishes for k > v_p(c^tJc) + 1 (odd p; +3 at p = 2),
              so those factors are exact finite sums of the closed local sums.

with Dbar2(0,s) = (1 - y + d y/2) / (1 - y/2), y = 2^{-(2s+n)}, d the 2-adic
sign constant of the form.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .expsum import (s_factorized, s_local, local_sum_magnitude_bound,
                     float_oracle_ok, _vp, _vp_vec, _VINF)
from .forms import QuadraticForm
from .ntheory import (DirichletCharacter, DomainError, PoleError, euler_phi,
                      factorize, is_prime, kronecker, zeta, dirichlet_L)

_POLE_PROX = 1e-8


class SeriesCase(enum.Enum):
    CZERO = "czero"
    ISOTROPIC = "isotropic"
    ANISOTROPIC = "anisotropic"


def classify(c, form: QuadraticForm) -> SeriesCase:
    if not any(int(t) for t in c):
        return SeriesCase.CZERO
    return SeriesCase.ISOTROPIC if form.ctjc(c) == 0 else SeriesCase.ANISOTROPIC


def two_adic_sign_constant(form: QuadraticForm) -> int:
    """d_{n,J} = +-2^{(n-1)/2} by 2m-n mod 8, m the normalized +1 count."""
    norm, _ = form.normalized_for_two_adic()
    r = (2 * norm.m_plus - norm.n) % 8
    sign = 1 if r in (1, 7) else -1
    return sign * 2 ** ((form.n - 1) // 2)


def dbar2_czero(s: complex, form: QuadraticForm) -> complex:
    """The bounded 2-adic cofactor of D(0, s)."""
    y = 2.0 ** (-(2 * s + form.n))
    d = two_adic_sign_constant(form)
    return (1 - y + d * y / 2) / (1 - y / 2)


def _divisor_sum_tp(p: int, alpha: int, s: complex) -> complex:
    u = complex(p) ** (-(s + 1))
    return sum(u ** k for k in range(alpha + 1))


def _dbar2_iso(c, s: complex, form: QuadraticForm) -> complex:
    """D_2(c,s) (1 - 2^{-(2s+n)}) / (1 - 2^{-(2s+n+1)}) for isotropic c."""
    y = 2.0 ** (-(2 * s + form.n))
    return euler_factor_closed(2, c, s, form) * (1 - y) / (1 - y / 2)


def is_square(m: int) -> bool:
    return m >= 0 and math.isqrt(m) ** 2 == m


@dataclass(frozen=True)
class KappaCharacter:
    """The real character p -> (d_star | p) deciding the secondary pole.

    d_star = (-1)^{(n-1)/2} c^tJ^{-1}c det J; kappa is the Kronecker symbol
    (d_star | .), a Dirichlet character mod 4|d_star| (zero on even
    arguments), trivial exactly when d_star is a perfect square.
    """
    d_star: int
    n: int
    decomposition: str

    @property
    def trivial(self) -> bool:
        return is_square(self.d_star)

    @property
    def modulus(self) -> int:
        return 4 * abs(self.d_star)

    def __call__(self, a: int) -> int:
        if a % 2 == 0:
            return 0
        return kronecker(self.d_star, a)

    def as_table(self) -> DirichletCharacter:
        q = self.modulus
        if q > 200000:
            raise DomainError("kappa table too large to materialize")
        vals = tuple(complex(self(a)) for a in range(q))
        cond = q
        return DirichletCharacter(q, vals, cond, "kappa")


def kappa(c, form: QuadraticForm) -> KappaCharacter:
    if classify(c, form) is not SeriesCase.ANISOTROPIC:
        raise DomainError("kappa is defined for anisotropic c only")
    ctjc = form.ctjc(c)
    sign = -1 if ((form.n - 1) // 2) % 2 else 1
    d_star = sign * ctjc * form.det_j
    decomposition = "chi_c1*eta_c1" if (ctjc * form.det_j) % 4 != 3 else "chi_c2*eta_c2"
    return KappaCharacter(d_star, form.n, decomposition)


# ---------------------------------------------------------------------------
# Euler factors

def _local_pole_guard(p: int, s: complex, n: int, case: SeriesCase):
    dens = []
    if case is SeriesCase.CZERO:
        dens.append(("zeta_p(s+1)", 1 - complex(p) ** (-(s + 1))))
    if case in (SeriesCase.CZERO, SeriesCase.ISOTROPIC):
        dens.append(("zeta_p(2s+n)", 1 - complex(p) ** (-(2 * s + n))))
    for what, den in dens:
        if abs(den) < _POLE_PROX:
            loc = -1.0 if "s+1" in what else (1 - n) / 2
            raise PoleError(loc, 1.0 / math.log(p), f"local factor {what}")


def euler_factor_closed(p: int, c, s: complex, form: QuadraticForm) -> complex:
    """D_p(c, s) in closed form (finite/geometric), exact case analysis."""
    if not is_prime(p):
        raise DomainError("p must be prime")
    s = complex(s)
    n = form.n
    case = classify(c, form)
    _local_pole_guard(p, s, n, case)
    if case is SeriesCase.ANISOTROPIC:
        # S(p^k, c) vanishes beyond k = v_p(ctJc) + 1: the factor is a
        # polynomial in p^{-s} and the closed local sums are summed exactly.
        k_top = _vp(form.ctjc(c), p) + 3
        t = complex(p) ** (-(s + n + 1))
        return sum(s_local(p, k, c, form).value * t ** k for k in range(k_top + 1))
    alpha = _vp_vec(c, p)
    if p == 2:
        x = 2.0 ** complex(-(s + 1))
        y = 2.0 ** (-(2 * s + n))
        d = two_adic_sign_constant(form)
        if case is SeriesCase.CZERO:
            return (1 - y + d * y / 2) / ((1 - x) * (1 - y))
        # isotropic: strata demand 2^{j+1} | c, so the geometric part stops
        # one power earlier than the plain divisor sum
        return _divisor_sum_tp(2, alpha, s) \
            + (_divisor_sum_tp(2, alpha - 1, s) if alpha else 0.0) * (d / 2) * y / (1 - y)
    w = complex(p) ** (-(2 * s + n))
    wp = complex(p) ** (-(2 * s + n + 1))
    core = (1 - wp) / (1 - w)
    if case is SeriesCase.CZERO:
        return core / (1 - complex(p) ** (-(s + 1)))
    return _divisor_sum_tp(p, alpha, s) * core


def euler_factor_truncated(p: int, c, s: complex, form: QuadraticForm,
                           kmax: int = 20, oracle: str = "auto"):
    """Partial sum of D_p(c, s) through k = kmax plus a proved tail bound.

    oracle = 'factorized' forces the O(n q^2) sum for every k (cost-guarded);
    'closed' uses the exact local closed forms; 'auto' switches at p^k = 2000.
    """
    s = complex(s)
    n = form.n
    total = 0j
    t = complex(p) ** (-(s + n + 1))
    for k in range(kmax + 1):
        q = p ** k
        if oracle == "factorized" or (oracle == "auto" and q <= 2000
                                      and float_oracle_ok(q, n)):
            sval = s_factorized(q, c, form)
        else:
            sval = s_local(p, k, c, form).value
        total += sval * t ** k
    sigma = s.real
    r = float(p) ** (-(sigma + n / 2))
    if r >= 1.0:
        return total, math.inf
    bound_c = local_sum_magnitude_bound(p, kmax + 1, c, form) \
        / float(p) ** ((kmax + 1) * (n / 2 + 1))
    tail = bound_c * r ** (kmax + 1) * (kmax + 3) / (1 - r) ** 2
    return total, tail


def _bad_primes(c, form: QuadraticForm) -> list[int]:
    """Odd primes dividing c or c^tJ^{-1}c (the non-generic Euler factors)."""
    ctjc = abs(form.ctjc(c))
    cgcd = 0
    for t in c:
        cgcd = math.gcd(cgcd, abs(int(t)))
    out = set()
    for m in (cgcd, ctjc):
        if m:
            out.update(pp.p for pp in factorize(m) if pp.p != 2)
    return sorted(out)


def rho_factor(p: int, s: complex, kap: KappaCharacter, n: int) -> complex:
    return 1 + kap(p) * complex(p) ** (-(s + n / 2 + 0.5))


def _l_kappa(x: complex, kap: KappaCharacter) -> complex:
    """L(x, kappa); the principal case is rewritten through zeta so its pole
    at x = 1 is explicit."""
    x = complex(x)
    if kap.trivial:
        bad = {2}
        bad.update(pp.p for pp in factorize(abs(kap.d_star)))
        if abs(x - 1) < _POLE_PROX:
            res = 1.0
            for p in sorted(bad):
                res *= 1 - 1.0 / p
            raise PoleError(1.0, res, "principal L")
        out = zeta(x)
        for p in sorted(bad):
            out *= 1 - complex(p) ** (-x)
        return out
    if x.real >= 2.5:
        nmax = 60000
        acc = 0j
        for m in range(1, nmax, 2):
            v = kap(m)
            if v:
                acc += v * complex(m) ** (-x)
        return acc
    return dirichlet_L(x, kap.as_table())


def d_global(c, s: complex, form: QuadraticForm) -> complex:
    """Global D(c, s) assembled from the zeta/L quotients and finite factors."""
    s = complex(s)
    n = form.n
    case = classify(c, form)
    if case is SeriesCase.CZERO:
        for loc, what in ((0.0, "zeta(s+1)"), ((1 - n) / 2, "zeta(2s+n)")):
            if abs(s - loc) < _POLE_PROX:
                raise PoleError(loc, float("nan"), what)
        return dbar2_czero(s, form) * zeta(s + 1) * zeta(2 * s + n) / zeta(2 * s + n + 1)
    if case is SeriesCase.ISOTROPIC:
        if abs(s - (1 - n) / 2) < _POLE_PROX:
            raise PoleError((1 - n) / 2, float("nan"), "zeta(2s+n)")
        out = _dbar2_iso(c, s, form) * zeta(2 * s + n) / zeta(2 * s + n + 1)
        for pp in factorize(_content(c)):
            if pp.p != 2:
                out *= _divisor_sum_tp(pp.p, pp.k, s)
        return out
    kap = kappa(c, form)
    out = _l_kappa(s + n / 2 + 0.5, kap) / _l_kappa(2 * s + n + 1, kap)
    bad = [2] + _bad_primes(c, form)
    for p in bad:
        out *= euler_factor_closed(p, c, s, form) / rho_factor(p, s, kap, n)
    return out


def _content(c) -> int:
    g = 0
    for t in c:
        g = math.gcd(g, abs(int(t)))
    return max(g, 1)


def d_global_truncated(c, s: complex, form: QuadraticForm, qmax: int) -> complex:
    """Direct sum_{q<=qmax} S(q,c) q^{-s-n-1} with S from multiplicativity of
    factorized prime-power sums; the oracle for d_global."""
    s = complex(s)
    n = form.n
    local: dict[int, dict[int, int]] = {}

    def s_of(q: int) -> int:
        out = 1
        for pp in factorize(q):
            out *= local.setdefault(pp.p, {}).setdefault(
                pp.k, s_factorized(pp.p ** pp.k, c, form))
        return out

    return sum(s_of(q) * complex(q) ** (-(s + n + 1)) for q in range(1, qmax + 1))


# ---------------------------------------------------------------------------
# poles and residues

@dataclass
class PoleReport:
    location: complex
    order: int
    source: str
    cancelled: bool
    reason: str = ""


def pole_set(c, form: QuadraticForm) -> list[PoleReport]:
    """Candidate poles of D(c, s) g(c, s) in Re(s) > -n/2 with cancellations.

    c = 0: {0 (cancelled by g(0,0) = 0), -1, (1-n)/2}, the last two merging
    into one order-2 report at n = 3; isotropic: {(1-n)/2}; anisotropic:
    {(1-n)/2} iff kappa is trivial and the finite cofactors are nonzero.
    """
    n = form.n
    s_half = (1 - n) / 2
    case = classify(c, form)
    out: list[PoleReport] = []
    if case is SeriesCase.CZERO:
        out.append(PoleReport(0.0, 1, "zeta(s+1)", True,
                              "residue carries g(0,0) = 0 (kernel swap symmetry)"))
        if n == 3:
            d2 = dbar2_czero(-1.0, form)
            if abs(d2) < 1e-12:
                out.append(PoleReport(-1.0, 1, "zeta(2s+n) * Gamma((s+1)/2)", False,
                                      "2-adic cofactor vanishes (definite n=3 form); "
                                      "double pole degrades to at most simple"))
            else:
                out.append(PoleReport(-1.0, 2, "zeta(2s+n) * Gamma((s+1)/2)", False,
                                      "zeta- and Gamma-poles coincide at n=3"))
        else:
            out.append(PoleReport(-1.0, 1, "Gamma((s+1)/2)", False))
            out.append(PoleReport(s_half, 1, "zeta(2s+n)", False))
        return out
    if case is SeriesCase.ISOTROPIC:
        cof = _dbar2_iso(c, s_half, form)
        for pp in factorize(_content(c)):
            if pp.p != 2:
                cof *= _divisor_sum_tp(pp.p, pp.k, s_half)
        out.append(PoleReport(s_half, 1, "zeta(2s+n)", abs(cof) < 1e-12,
                              "" if abs(cof) >= 1e-12 else "finite cofactor vanishes"))
        return out
    kap = kappa(c, form)
    if not kap.trivial:
        return out
    cof = 1.0 + 0j
    for p in [2] + _bad_primes(c, form):
        cof *= euler_factor_closed(p, c, s_half, form) / rho_factor(p, s_half, kap, n)
    cancelled = abs(cof) < 1e-12
    out.append(PoleReport(s_half, 1, "L(s+n/2+1/2, kappa)", cancelled,
                          "local cofactor vanishes (exceptional case)" if cancelled else ""))
    return out


@dataclass
class CheckRecord:
    name: str
    value: complex
    expect_nonzero: bool
    ok: bool
    note: str = ""


def nonvanishing_checks(c, form: QuadraticForm) -> list[CheckRecord]:
    """The appendix predicates evaluated numerically at the critical points.

    Each record carries the factor value and whether nonvanishing (or, for
    the single documented exceptional configuration, vanishing) held.
    """
    n = form.n
    s_half = (1 - n) / 2
    case = classify(c, form)
    recs: list[CheckRecord] = []
    if case is SeriesCase.CZERO:
        for s0 in (0.0, -1.0, s_half):
            val = dbar2_czero(s0, form)
            # erratum: at n = 3 the definite form has Dbar2(0, -1) = 0 since
            # the sign constant d = -2 there; the printed claim excludes it
            exceptional = (n == 3 and s0 == -1.0 and form.is_definite)
            ok = (abs(val) < 1e-9) if exceptional else (abs(val) >= 1e-6)
            recs.append(CheckRecord(f"A1.1 Dbar2(0, s) at s={s0}", val,
                                    not exceptional, ok,
                                    "definite n=3 zero (documented erratum)"
                                    if exceptional else ""))
        return recs
    if case is SeriesCase.ISOTROPIC:
        val = euler_factor_closed(2, c, s_half, form) \
            * (1 - 2.0 ** (-(2 * s_half + n))) / (1 - 2.0 ** (-(2 * s_half + n + 1)))
        recs.append(CheckRecord("A2.1 2-adic factor", val, True, abs(val) >= 1e-6))
        prod = 1.0 + 0j
        for pp in factorize(_content(c)):
            if pp.p != 2:
                prod *= _divisor_sum_tp(pp.p, pp.k, s_half)
        recs.append(CheckRecord("A2.2 odd finite product", prod, True,
                                prod.real >= 1e-6 and abs(prod.imag) < 1e-9))
        return recs
    kap = kappa(c, form)
    ctjc = form.ctjc(c)
    p_not_c = [p for p in _bad_primes(c, form) if _vp_vec(c, p) == 0]
    p_in_c = [p for p in _bad_primes(c, form) if _vp_vec(c, p) > 0]
    prod = 1.0 + 0j
    for p in p_not_c:
        prod *= euler_factor_closed(p, c, s_half, form) / rho_factor(p, s_half, kap, n)
    recs.append(CheckRecord("A3.1 product over p|ctJc, p!|c", prod, True,
                            prod.real >= 1e-6 and abs(prod.imag) < 1e-9))
    prod = 1.0 + 0j
    for p in p_in_c:
        prod *= euler_factor_closed(p, c, s_half, form) / rho_factor(p, s_half, kap, n)
    recs.append(CheckRecord("A3.2 product over p|c", prod, True,
                            prod.real >= 1e-6 and abs(prod.imag) < 1e-9))
    val = euler_factor_closed(2, c, s_half, form) / rho_factor(2, s_half, kap, n)
    # Resolved by computation: with the oracle-exact 2-adic local sums the
    # 2-adic factor never vanishes here, under either reading of the sign
    # count (the printed n=5 exceptional zero rests on the uncorrected
    # 2-adic formula).  Both would-be exceptional configurations are flagged
    # so the verification suite can report them explicitly.
    printed_exceptional = (n == 5 and ctjc == 1
                           and 4 in (form.m_plus, form.m_minus))
    recs.append(CheckRecord("A3.3 2-adic factor", val, True, abs(val) >= 1e-6,
                            "printed exceptional configuration (tested under "
                            "both sign-count readings); factor is nonzero "
                            "under the corrected local sums"
                            if printed_exceptional else ""))
    return recs


class ResidueInconsistency(ArithmeticError):
    pass


def _contour_coefficient(f, s0: complex, order: int = 1, radius: float = 1e-3,
                         points: int = 32) -> complex:
    """(1/2pi i) oint f(s) (s-s0)^{order-1} ds by the trapezoid rule."""
    acc = 0j
    for j in range(points):
        th = 2 * math.pi * j / points
        z = radius * cmath.exp(1j * th)
        acc += f(s0 + z) * z ** order
    return acc / points


def residue_at(c, form: QuadraticForm, s0: complex, arch) -> complex:
    """Residue of D(c,s) g(c,s) at a reported pole location.

    Analytic route first (known residues of zeta / Gamma / principal L times
    the numerically evaluated cofactor), then a small-circle contour average
    as a cross-check; disagreement beyond 1e-5 (relative to scale) raises.
    """
    n = form.n
    s_half = (1 - n) / 2
    case = classify(c, form)
    s0 = complex(s0)

    if case is SeriesCase.CZERO:
        if abs(s0) < 1e-12:
            analytic = 0.0 + 0j   # residue proportional to g(0,0) = 0

            def f(s):
                return d_global((0,) * n, s, form) * arch.g0_continued(s)
            contour = _contour_coefficient(f, 0.0)
        elif n == 3 and abs(s0 + 1) < 1e-12:
            _, analytic = double_pole_coeffs(form, arch)

            def f(s):
                return d_global((0,) * n, s, form) * arch.g0_continued(s)
            contour = _contour_coefficient(f, -1.0)
        elif abs(s0 + 1) < 1e-12:
            analytic = d_global((0,) * n, -1.0, form) * arch.g0_residue_minus1()

            def f(s):
                return d_global((0,) * n, s, form) * arch.g0_continued(s)
            contour = _contour_coefficient(f, -1.0)
        elif abs(s0 - s_half) < 1e-12:
            cof = dbar2_czero(s_half, form) * zeta(s_half + 1) / zeta(2 * s_half + n + 1)
            analytic = 0.5 * cof * arch.g0_continued(s_half)

            def f(s):
                return d_global((0,) * n, s, form) * arch.g0_continued(s)
            contour = _contour_coefficient(f, s_half)
        else:
            raise DomainError("s0 is not a candidate pole for c = 0")
    elif case is SeriesCase.ISOTROPIC:
        if abs(s0 - s_half) > 1e-12:
            raise DomainError("isotropic series has its pole at (1-n)/2 only")
        cof = _dbar2_iso(c, s_half, form) / zeta(2 * s_half + n + 1)
        for pp in factorize(_content(c)):
            if pp.p != 2:
                cof *= _divisor_sum_tp(pp.p, pp.k, s_half)
        analytic = 0.5 * cof * arch.g_at(c, s_half)

        def f(s):
            return d_global(c, s, form) * arch.g_at(c, s)
        contour = _contour_coefficient(f, s_half)
    else:
        kap = kappa(c, form)
        if not kap.trivial or abs(s0 - s_half) > 1e-12:
            raise DomainError("no pole there for this anisotropic c")
        bad = {2}
        bad.update(pp.p for pp in factorize(abs(kap.d_star)))
        res_l = 1.0
        for p in sorted(bad):
            res_l *= 1 - 1.0 / p
        cof = res_l / _l_kappa(2 * s_half + n + 1, kap)
        for p in [2] + _bad_primes(c, form):
            cof *= euler_factor_closed(p, c, s_half, form) / rho_factor(p, s_half, kap, n)
        analytic = cof * arch.g_at(c, s_half)

        def f(s):
            return d_global(c, s, form) * arch.g_at(c, s)
        contour = _contour_coefficient(f, s_half)

    scale = max(1.0, abs(analytic))
    if abs(analytic - contour) > 1e-5 * scale:
        raise ResidueInconsistency(
            f"analytic {analytic} vs contour {contour} at s0={s0}")
    return analytic


def double_pole_coeffs(form: QuadraticForm, arch) -> tuple[complex, complex]:
    """Laurent coefficients (a_{-2}, a_{-1}) of D(0,s) g(0,s) at s = -1, n = 3.

    a_{-2} is the B log B coefficient of the count; a_{-1} joins the secondary
    term.  phi(s) := (s+1)^2 D g is regular; a_{-2} = phi(-1) evaluated in
    closed form, a_{-1} = phi'(-1) by a five-point stencil on the closed
    factors.
    """
    if form.n != 3:
        raise DomainError("double pole occurs at n = 3 only")
    czero = (0, 0, 0)

    def phi(s):
        return (s + 1) ** 2 * d_global(czero, s, form) * arch.g0_continued(s)

    # a_{-2} analytically: Res zeta(2s+3) = 1/2, Res_s=-1 of g0 known
    a_m2 = dbar2_czero(-1.0, form) * zeta(0) / zeta(2) * 0.5 * arch.g0_residue_minus1()
    h = 2e-3
    a_m1 = (8 * (phi(-1 + h) - phi(-1 - h)) - (phi(-1 + 2 * h) - phi(-1 - 2 * h))) / (12 * h)
    a_m2_num = _contour_coefficient(lambda s: d_global(czero, s, form)
                                    * arch.g0_continued(s), -1.0, order=2)
    if abs(a_m2 - a_m2_num) > 1e-5 * max(1.0, abs(a_m2)):
        raise ResidueInconsistency(f"a_-2 analytic {a_m2} vs contour {a_m2_num}")
    return a_m2, a_m1
