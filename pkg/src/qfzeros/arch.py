"""Archimedean side: the concrete smooth pair (Phi, h) with its normalizing
constant, the exact delta-symbol expansion, oscillatory quadrature for the
Mellin-Fourier factor g(c, s), and the continuation of g(0, s).

Kernel choice.  Base bump(t) = exp(-1/(1-t^2)) on (-1,1);
psi(x) = e * bump(x/4) (support (-4,4), psi(0) = 1) and phi(y) =
c_phi * bump(3y-2) (support (1/3,1), unit integral).  The two-variable pair
is Phi(x, y) = psi(x) phi(|y|): the even extension in the second slot is
what makes the delta identity exact for negative integers as well (the
divisor-pairing argument needs |n|/q on both slots), while the normalizing
sum runs over positive moduli only, keeping c_Q = 1 + O(Q^{-N}).
h(x, y) = Phi(x, y) - Phi(y, x) vanishes on the diagonal.

g(c, s) = int_0^inf y^{s-1} A_c(y) dy with
A_c(y) = int omega(x) h(F(x)/y, y) e(-c.x/y) dx.  A_c is evaluated through
the Fourier decomposition of the kernel slices: each h-term contributes
int K_hat(xi) prod_i J(xi, y; c_i, b_i) dxi with 1-d quadratic-phase
integrals J = int w(t) e(2 pi i (xi b t^2 - c t)/y) dt.  J is computed by
direct Gauss-Legendre when the phase is slow and otherwise through the exact
Fresnel/chirp identity

    J = e^{i sgn(a) pi/4} / sqrt(2|a|) * e^{-i pi c^2/(2 xi b y)}
        * int w_hat(nu) e^{2 pi i nu t*} e^{-i pi nu^2 y/(2 xi b)} dnu,

a = xi b / y, t* = c/(2 xi b), which trades the fast t-oscillation for a
slow nu-integral against the superpolynomially decaying w_hat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .forms import QuadraticForm
from .ntheory import DomainError
from .quadrature import gl_rule, panel_nodes, geometric_edges


class AccuracyError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, msg, value=None, err=None):
        super().__init__(msg)
        self.value = value
        self.err = err


def bump(t):
    """exp(-1/(1-t^2)) on (-1,1), 0 outside; vectorized and smooth."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ti * ti))
    return out


def _integral_of_bump() -> float:
    x, w = panel_nodes(-1.0, 1.0, 400)
    return float(np.dot(w, bump(x)))


I_BUMP = _integral_of_bump()


@dataclass(frozen=True)
class KernelParams:
    psi_halfwidth: float = 4.0
    phi_lo: float = 1.0 / 3.0
    phi_hi: float = 1.0

    def psi(self, x):
        return math.e * bump(np.asarray(x, dtype=float) / self.psi_halfwidth)

    def phi(self, y):
        """Bump on (phi_lo, phi_hi) with unit integral."""
        lo, hi = self.phi_lo, self.phi_hi
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        return bump((np.asarray(y, dtype=float) - mid) / half) / (half * I_BUMP)

    def phi_even(self, y):
        return self.phi(np.abs(np.asarray(y, dtype=float)))

    def h(self, x, y):
        """h(x, y) = Phi(x, y) - Phi(y, x); h(x, x) = 0 identically."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.psi(x) * self.phi_even(y) - self.psi(y) * self.phi_even(x)

    def phi_hat_zero(self) -> float:
        """Fourier transform of phi(|.|) at 0, i.e. 2 * integral(phi)."""
        return 2.0


@dataclass(frozen=True)
class WeightParams:
    halfwidth: float = 2.0

    def w(self, t):
        return math.e * bump(np.asarray(t, dtype=float) / self.halfwidth)

    def omega(self, xs) -> np.ndarray:
        """Product weight on (..., n) coordinate arrays."""
        xs = np.asarray(xs, dtype=float)
        return np.prod(self.w(xs), axis=-1)


@dataclass
class DeltaKernel:
    """Concrete kernel with the modulus scale Q and normalizing constant c_Q.

    c_Q = Q / sum_{q >= 1} Phi(0, q/Q); with this normalization the delta
    expansion below is an exact finite identity for every integer argument.
    """
    params: KernelParams
    q_scale: float

    def __post_init__(self):
        if self.q_scale < 2:
            raise DomainError("need Q >= 2")
        self.c_q = self.q_scale / self._phi_row_sum()

    def _phi_row_sum(self) -> float:
        q_big = self.q_scale * self.params.phi_hi
        qs = np.arange(1, math.ceil(q_big) + 1, dtype=float)
        return float(self.params.phi(qs / self.q_scale).sum())

    def h(self, x, y):
        return self.params.h(x, y)


def delta_expansion(m: int, kernel: DeltaKernel) -> float:
    """c_Q Q^{-1} sum_q q^{-1} sum_{a mod q} e(am/q) h(m/(qQ), q/Q).

    The a-sum is q 1_{q|m}, so this is a finite divisor sum; it equals
    delta_{m=0} exactly up to floating roundoff.
    """
    big_q = kernel.q_scale
    par = kernel.params
    if m == 0:
        qs = np.arange(1, math.ceil(big_q * par.phi_hi) + 1, dtype=float)
        return kernel.c_q / big_q * float(par.h(0.0, qs / big_q).sum())
    total = 0.0
    am = abs(m)
    for q in range(1, am + 1):
        if am % q:
            continue
        total += float(par.h(m / (q * big_q), q / big_q))
    return kernel.c_q / big_q * total


def _cos_transform(func, half_support: float, freqs: np.ndarray) -> np.ndarray:
    """K_hat(f) = 2 int_0^hs K(t) cos(2 pi f t) dt for even K, vectorized."""
    f_max = float(np.max(np.abs(freqs))) if freqs.size else 0.0
    nodes = int(64 + 7 * half_support * f_max)
    pieces = max(1, int(np.ceil(nodes / 3000)))
    edges = np.linspace(0.0, half_support, pieces + 1)
    out = np.zeros_like(np.asarray(freqs, dtype=float))
    per = min(nodes, 3000)
    for i in range(pieces):
        t, wt = panel_nodes(edges[i], edges[i + 1], per)
        vals = func(t) * wt
        out = out + 2.0 * (np.cos(2 * math.pi * np.outer(freqs, t)) @ vals)
    return out


def _decay_cut(func, half_support: float, hint: float, floor: float = 1e-13) -> float:
    """Smallest f beyond which |K_hat| stays below floor (scanned)."""
    grid = np.linspace(0.0, hint, int(hint * 8) + 2)
    vals = np.abs(_cos_transform(func, half_support, grid))
    keep = np.nonzero(vals > floor)[0]
    if keep.size == 0:
        return 1.0
    if keep[-1] == len(grid) - 1:
        return hint  # decay slower than hinted; cap
    return float(grid[keep[-1]] + 1.0)


class _HermiteTransform:
    """Cubic-Hermite interpolated cosine transform of an even kernel slice.

    K_hat and its derivative are tabulated on a uniform frequency grid; the
    piecewise-cubic evaluation is accurate to ~h^4 |K_hat''''|/384, which the
    step below keeps under 1e-9 for the kernels in use.
    """

    def __init__(self, func, half_support: float, f_max: float, step: float = 5e-3):
        self.f_max = f_max
        self.step = step
        self.fs = np.arange(0.0, f_max + 2 * step, step)
        nodes = int(64 + 7 * half_support * (f_max + 1))
        pieces = max(1, int(np.ceil(nodes / 3000)))
        edges = np.linspace(0.0, half_support, pieces + 1)
        val = np.zeros_like(self.fs)
        der = np.zeros_like(self.fs)
        per = min(nodes, 3000)
        for i in range(pieces):
            t, wt = panel_nodes(edges[i], edges[i + 1], per)
            ker = func(t) * wt
            ang = 2 * math.pi * np.outer(self.fs, t)
            val += 2.0 * (np.cos(ang) @ ker)
            der += -4.0 * math.pi * (np.sin(ang) @ (t * ker))
        self.val = val
        self.der = der

    def __call__(self, f) -> np.ndarray:
        f = np.abs(np.asarray(f, dtype=float))
        out_of_range = f >= self.f_max
        f = np.minimum(f, self.f_max)
        idx = np.minimum((f / self.step).astype(int), len(self.fs) - 2)
        u = (f - self.fs[idx]) / self.step
        y0, y1 = self.val[idx], self.val[idx + 1]
        d0, d1 = self.der[idx] * self.step, self.der[idx + 1] * self.step
        u2, u3 = u * u, u * u * u
        out = (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * d0 \
            + (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * d1
        return np.where(out_of_range, 0.0, out)


# ---------------------------------------------------------------------------
# pipeline for A_c(y) and g(c, s)

_CYC_DIRECT = 60.0          # direct GL when the t-phase has fewer cycles
_NODES_PER_CYCLE = 7.0


class GPipeline:
    """Tabulated evaluator of A_c(y) and g(c, s) for one (form, weight, kernel).

    c ranges over integer vectors with |c_i| <= cmax.  A_c is even in every
    component and symmetric under permutations of equal-sign coordinates, so
    values are cached per equivalence class.
    """

    def __init__(self, form: QuadraticForm, kernel: KernelParams = KernelParams(),
                 weight: WeightParams = WeightParams(), cmax: int = 10,
                 ymin: float = 2e-3, xi_order: int = 24, y_order: int = 16):
        self.form = form
        self.kernel = kernel
        self.weight = weight
        self.cmax = cmax
        self.ymin = ymin
        n = form.n
        hw = weight.halfwidth
        self.ymax = 3.0 * n * hw ** 2 + 1.0
        # frequency cutoffs measured from the actual transforms
        self.nu_cut = _decay_cut(weight.w, hw, 80.0, floor=1e-11)
        psi_cut = _decay_cut(kernel.psi, kernel.psi_halfwidth, 60.0, floor=1e-11)
        phi_cut = _decay_cut(lambda u: kernel.phi(np.abs(u)),
                             kernel.phi_hi, 250.0, floor=2e-9)
        self.xi_cut = max(psi_cut, phi_cut)
        # xi grid: node density follows the transforms' own oscillation rate
        # (~psi_halfwidth cycles per unit below psi_cut, ~phi_hi beyond)
        xi_edges = np.concatenate([[1e-4], geometric_edges(0.05, self.xi_cut, 1.45)])
        xs, ws, spacing = [], [], []
        for i in range(len(xi_edges) - 1):
            lo, hi = xi_edges[i], xi_edges[i + 1]
            rate = kernel.psi_halfwidth if lo < psi_cut else kernel.phi_hi
            order = int(max(xi_order, 4.5 * rate * (hi - lo) + 10))
            x, w = panel_nodes(lo, hi, order)
            xs.append(x)
            ws.append(w)
            spacing.append(np.full(order, (hi - lo) / order))
        self.xi = np.concatenate(xs)
        self.xi_w = np.concatenate(ws)
        self.xi_spacing = np.concatenate(spacing)
        # y grid: geometric panels
        y_edges = geometric_edges(ymin, self.ymax, 1.9)
        ys, yw = [], []
        self._ypanels = []
        for i in range(len(y_edges) - 1):
            x, w = panel_nodes(y_edges[i], y_edges[i + 1], y_order)
            ys.append(x)
            yw.append(w)
            self._ypanels.append((y_edges[i], y_edges[i + 1]))
        self.y = np.concatenate(ys)
        self.y_w = np.concatenate(yw)
        # nu grid for the chirp representation (dense enough for the nu^2
        # chirp slope anywhere the direct path is not taken)
        nu_edges = np.arange(-self.nu_cut, self.nu_cut + 4.999, 5.0)
        ns, nw = [], []
        for i in range(len(nu_edges) - 1):
            x, w = panel_nodes(nu_edges[i], nu_edges[i + 1], 96)
            ns.append(x)
            nw.append(w)
        self.nu = np.concatenate(ns)
        self.nu_w = np.concatenate(nw)
        self.w_hat_nu = _cos_transform(weight.w, hw, self.nu) * self.nu_w
        self.psi_hat_xi = _cos_transform(kernel.psi, kernel.psi_halfwidth, self.xi)
        self.phi_hat_xi = _cos_transform(lambda u: kernel.phi(np.abs(u)),
                                         kernel.phi_hi, self.xi)
        self.psi_y = kernel.psi(self.y)
        self.phi_even_y = kernel.phi_even(self.y)
        self._jtab: dict[tuple[int, int], np.ndarray] = {}
        self._atab: dict = {}
        self._class_err: dict = {}

    # -- J evaluation ------------------------------------------------------

    def _j_direct(self, xi: float, y: float, ci: int, b: int, cycles: float) -> complex:
        hw = self.weight.halfwidth
        order = int(24 + _NODES_PER_CYCLE * cycles)
        t, wt = panel_nodes(-hw, hw, order)
        phase = 2 * math.pi * (xi * b * t * t - ci * t) / y
        return complex(np.dot(wt * self.weight.w(t), np.exp(1j * phase)))

    def _j_direct_row(self, xi: float, ci: int, b: int, ys: np.ndarray,
                      cyc_max: float) -> np.ndarray:
        """Direct J for one xi and many y, sized for the fastest phase."""
        hw = self.weight.halfwidth
        order = int(24 + _NODES_PER_CYCLE * cyc_max)
        t, wt = panel_nodes(-hw, hw, order)
        base = wt * self.weight.w(t)
        phase = 2 * math.pi * np.outer(1.0 / ys, xi * b * t * t - ci * t)
        return np.exp(1j * phase) @ base

    def _j_chirp_row(self, xi: float, ci: int, b: int, ys: np.ndarray) -> np.ndarray:
        a_sign = 1.0 if b > 0 else -1.0
        t_star = ci / (2.0 * xi * b)
        env = self.w_hat_nu * np.exp(2j * math.pi * self.nu * t_star)
        chirp = np.exp(-1j * math.pi * np.outer(ys, self.nu * self.nu) / (2.0 * xi * b))
        vals = chirp @ env
        pref = np.exp(1j * a_sign * math.pi / 4) / np.sqrt(2.0 * xi / ys)
        phase0 = np.exp(-1j * math.pi * ci * ci / (2.0 * xi * b * ys))
        return pref * phase0 * vals

    def _j_table(self, ci: int, b: int) -> np.ndarray:
        """J on the (xi, y) grid for one coordinate datum (|ci|, b)."""
        key = (ci, b)
        if key in self._jtab:
            return self._jtab[key]
        hw = self.weight.halfwidth
        out = np.zeros((self.xi.size, self.y.size), dtype=complex)
        cyc = 2 * hw * (2 * hw * self.xi[:, None] + ci) / self.y[None, :] / (2 * math.pi)
        direct_mask = cyc <= _CYC_DIRECT
        # chirp regime requires a stationary point not too far outside supp w
        chirp_ok = self.xi >= max(1e-3, ci / (2 * (hw + 0.6)))
        for ix, xi in enumerate(self.xi):
            row_direct = direct_mask[ix]
            if chirp_ok[ix] and not row_direct.all():
                sel = ~row_direct
                out[ix, sel] = self._j_chirp_row(xi, ci, b, self.y[sel])
            if row_direct.any():
                ys = self.y[row_direct]
                out[ix, row_direct] = self._j_direct_row(
                    xi, ci, b, ys, float(cyc[ix, row_direct].max()))
            # remaining cells (fast phase, no stationary point): superpolynomially
            # small; left at zero and accounted in the class error tally
        self._jtab[key] = out
        return out

    # -- A_c and g ----------------------------------------------------------

    def class_key(self, c) -> tuple:
        return tuple(sorted((abs(int(ci)), b) for ci, b in zip(c, self.form.signs)))

    def a_values(self, c) -> np.ndarray:
        """A_c on the y grid (real), cached per symmetry class."""
        key = self.class_key(c)
        if key in self._atab:
            return self._atab[key]
        prod = np.ones((self.xi.size, self.y.size), dtype=complex)
        for ci, b in key:
            prod *= self._j_table(ci, b)
        err = 0.0
        ctjc = self.form.ctjc(c)
        if ctjc:
            # residual product phase ~ -pi ctJc/(2 xi y): mask xi cells where
            # the grid cannot resolve it (their true contribution is
            # superpolynomially small; the cut error is tallied)
            slope = abs(ctjc) / (4.0 * self.xi[:, None] ** 2 * self.y[None, :])
            bad = slope * self.xi_spacing[:, None] > 0.45
            if bad.any():
                kb = np.maximum(np.abs(self.psi_hat_xi), np.abs(self.phi_hat_xi))
                amp = np.abs(prod) * kb[:, None] * self.xi_w[:, None]
                err += float((amp * bad).sum(axis=0).max())
                prod = np.where(bad, 0.0, prod)
        p_psi = 2.0 * np.real((self.psi_hat_xi * self.xi_w) @ prod)
        p_phi = 2.0 * np.real((self.phi_hat_xi * self.xi_w) @ prod)
        a_vals = p_psi * self.phi_even_y - p_phi * self.psi_y
        self._atab[key] = a_vals
        self._class_err[key] = err
        return a_vals

    def a_bruteforce(self, c, y: float, order_boost: float = 1.0) -> float:
        """Tensor Gauss-Legendre x-integral oracle for A_c(y); moderate y only."""
        n = self.form.n
        hw = self.weight.halfwidth
        cmax = max((abs(int(t)) for t in c), default=0)
        freq = (4.0 * hw + cmax) * 2 * hw / y / (2 * math.pi)
        order = int((24 + 8 * freq) * order_boost)
        if order ** n > 4e7:
            raise AccuracyError("a_bruteforce: too oscillatory for tensor grid")
        t, wt = panel_nodes(-hw, hw, order)
        base = wt * self.weight.w(t)
        grids = np.meshgrid(*([t] * n), indexing="ij")
        xs = np.stack([g.ravel() for g in grids], axis=-1)
        wgrids = np.meshgrid(*([base] * n), indexing="ij")
        wfull = np.ones(xs.shape[0])
        for g in wgrids:
            wfull *= g.ravel()
        fv = self.form.value_array_float(xs)
        hv = self.kernel.h(fv / y, y)
        cx = xs @ np.array([float(t) for t in c])
        integ = hv * np.exp(-2j * math.pi * cx / y)
        return float(np.real(np.dot(wfull, integ)))

    def g_of_s(self, c, s_values) -> np.ndarray:
        """g(c, s) on an array of s, from the tabulated A_c (Mellin sum)."""
        a_vals = self.a_values(c)
        s_arr = np.atleast_1d(np.asarray(s_values, dtype=complex))
        logy = np.log(self.y)
        ypow = np.exp(np.outer(s_arr - 1.0, logy))
        return ypow @ (self.y_w * a_vals)

    def g_single(self, c, s) -> complex:
        return complex(self.g_of_s(c, [s])[0])

    def tail_estimate(self, c, sigma: float) -> float:
        """Bound for the missing (0, ymin) piece of the Mellin integral."""
        a_vals = self.a_values(c)
        nfit = min(8, self.y.size)
        amp = float(np.max(np.abs(a_vals[:nfit])))
        scale = float(self.y[nfit - 1])
        # |A| <= amp * (y/scale)^{3/2} empirically near the bottom end
        expo = sigma + 1.5
        if expo <= 0:
            return math.inf
        return amp * self.ymin ** expo / (scale ** 1.5 * expo)

    def class_error(self, c) -> float:
        self.a_values(c)
        return self._class_err[self.class_key(c)]


# ---------------------------------------------------------------------------
# continued g(0, s): z-route

class G0Continued:
    """g(0, s) continued to Re(s) > -3 through the z-decomposition

        g(0, s) = int_R W(z) [M1_z(s) - M2_z(s)] dz,
        W(z) = prod_i int w(t) e(-z b_i t^2) dt,
        M1_z(s) = int phi(y) psi_hat(zy) y^s dy            (entire),
        M2_z(s) = int_0^inf psi(y) phi_hat(zy) y^s dy      (continued),

    where M2 is continued by subtracting the u = zy integrand value at 0:
    M2_z(s) = z^{-1-s} [ int_0^1 (G_z - G_z(0)) u^s du + G_z(0)/(s+1)
              + int_1^U G_z u^s du ],  G_z(u) = psi(u/z) phi_hat(u).
    The only pole in Re(s) > -3 is s = -1 with residue -phi_hat(0) int W.
    """

    def __init__(self, form: QuadraticForm, kernel: KernelParams = KernelParams(),
                 weight: WeightParams = WeightParams(), zmax: float = 3000.0):
        self.form = form
        self.kernel = kernel
        self.weight = weight
        self.zmax = zmax
        hw = weight.halfwidth
        self.phi_hat0 = kernel.phi_hat_zero()
        self.u_cut = _decay_cut(lambda u: kernel.phi(np.abs(u)), kernel.phi_hi,
                                250.0, floor=1e-10)
        psi_cut = _decay_cut(kernel.psi, kernel.psi_halfwidth, 60.0, floor=1e-11)
        psi_hat = _HermiteTransform(kernel.psi, kernel.psi_halfwidth, psi_cut + 1)
        self.z1_cut = (psi_cut + 1) / kernel.phi_lo
        # z grid; the integrand oscillates in z only through psi_hat(zy) in
        # the M1 piece, which dies beyond z1_cut
        z_edges = np.concatenate([[0.0, 0.25], geometric_edges(0.5, zmax, 1.6)])
        zs, zw = [], []
        for i in range(len(z_edges) - 1):
            lo, hi = z_edges[i], z_edges[i + 1]
            order = 32
            if lo < self.z1_cut:
                order = min(2400, 32 + int(7 * kernel.phi_hi * (min(hi, self.z1_cut) - lo)
                                           * kernel.psi_halfwidth))
            x, w = panel_nodes(lo, hi, order)
            zs.append(x)
            zw.append(w)
        self.z = np.concatenate(zs)
        self.z_w = np.concatenate(zw)
        # Re W(z) on the grid, z > 0
        self.re_w = self._re_w(self.z)
        self.c_w_asym = self.weight.w(0.0) ** form.n * (2.0) ** (-form.n / 2) \
            * np.exp(-1j * math.pi * (form.m_plus - form.m_minus) / 4)
        # M1: y in (phi_lo, phi_hi)
        y1, w1 = panel_nodes(kernel.phi_lo, kernel.phi_hi, 600)
        self.y1 = y1
        self.m1_weights = w1 * kernel.phi(y1)
        live = self.z <= self.z1_cut
        self.psi_hat_zy = np.zeros((self.z.size, y1.size))
        if live.any():
            self.psi_hat_zy[live] = psi_hat(np.outer(self.z[live], y1))
        # M2 tables: u grids
        ua_edges = np.concatenate([geometric_edges(1e-7, 1.0, 3.2)])
        uas, uaw = [], []
        for i in range(len(ua_edges) - 1):
            x, w = panel_nodes(ua_edges[i], ua_edges[i + 1], 14)
            uas.append(x)
            uaw.append(w)
        self.ua = np.concatenate(uas)
        self.ua_w = np.concatenate(uaw)
        uc_edges = geometric_edges(1.0, self.u_cut, 1.8)
        ucs, ucw = [], []
        for i in range(len(uc_edges) - 1):
            x, w = panel_nodes(uc_edges[i], uc_edges[i + 1], 48)
            ucs.append(x)
            ucw.append(w)
        self.uc = np.concatenate(ucs)
        self.uc_w = np.concatenate(ucw)
        self.phi_hat_ua = _cos_transform(lambda u: kernel.phi(np.abs(u)),
                                         kernel.phi_hi, self.ua)
        self.phi_hat_uc = _cos_transform(lambda u: kernel.phi(np.abs(u)),
                                         kernel.phi_hi, self.uc)
        inv_z = 1.0 / self.z
        self.g_a = kernel.psi(np.outer(inv_z, self.ua)) * self.phi_hat_ua - self.phi_hat0
        self.g_c = kernel.psi(np.outer(inv_z, self.uc)) * self.phi_hat_uc
        # z -> infinity limits of the bracket pieces (psi -> 1)
        self.g_a_inf = self.phi_hat_ua - self.phi_hat0
        self.g_c_inf = self.phi_hat_uc

    def _re_w(self, zs: np.ndarray) -> np.ndarray:
        hw = self.weight.halfwidth
        out = np.empty(zs.size)
        for i, z in enumerate(zs):
            cyc = hw * hw * z / (2 * math.pi)
            order = min(6000, int(32 + 7 * cyc))
            t, wt = panel_nodes(0.0, hw, order)
            base = wt * self.weight.w(t)
            ip = 2.0 * np.dot(base, np.exp(-2j * math.pi * z * t * t))
            out[i] = (ip ** self.form.m_plus * np.conj(ip) ** self.form.m_minus).real
        return out

    def int_w(self) -> float:
        """int_R W(z) dz (= the singular integral over the cone), with its
        analytic z-tail appended."""
        main = 2.0 * float(np.dot(self.z_w, self.re_w))
        n = self.form.n
        tail = 2.0 * (self.c_w_asym * self.zmax ** (1 - n / 2) / (n / 2 - 1)).real
        return main + tail

    def z1_integral(self) -> float:
        """int_R Z(z, 1) dz = -(phi_hat(0)/2) int_R W(z) dz."""
        return -0.5 * self.phi_hat0 * self.int_w()

    def g0_residue_minus1(self) -> float:
        return -self.phi_hat0 * self.int_w()

    def _bracket(self, s: complex) -> np.ndarray:
        """M1_z(s) - M2_z(s) on the z grid."""
        s = complex(s)
        m1 = self.psi_hat_zy @ (self.m1_weights * self.y1 ** s)
        ta = self.g_a @ (self.ua_w * self.ua ** s)
        tc = self.g_c @ (self.uc_w * self.uc ** s)
        m2 = self.z ** (-1.0 - s) * (ta + tc + self.phi_hat0 / (s + 1.0))
        return m1 - m2

    def g0_continued(self, s: complex) -> complex:
        """Continued g(0, s) for Re(s) > -3, s != -1."""
        s = complex(s)
        if s.real <= -3.0:
            raise DomainError("continuation implemented for Re(s) > -3")
        if abs(s + 1.0) < 1e-9:
            raise AccuracyError("pole of g(0, s) at s = -1; use the residue")
        main = 2.0 * np.dot(self.z_w * self.re_w, self._bracket(s))
        # analytic tail: psi(u/z) -> 1 bracket limit, W ~ c_w z^{-n/2}
        ta = np.dot(self.ua_w * self.ua ** s, self.g_a_inf)
        tc = np.dot(self.uc_w * self.uc ** s, self.g_c_inf)
        k_inf = ta + tc + self.phi_hat0 / (s + 1.0)
        rho = self.form.n / 2 + s
        tail = -2.0 * (self.c_w_asym * k_inf * self.zmax ** (-rho) / rho)
        return complex(main + tail.real + 1j * tail.imag)


def cone_surface_integral(form: QuadraticForm, weight: WeightParams = WeightParams()) -> float:
    """int over {F = 0} of omega dS/|grad F| for an indefinite n = 3 form;
    independent oracle for int_R W(z) dz."""
    if form.n != 3 or form.is_definite:
        raise DomainError("cone integral implemented for indefinite n = 3")
    # reduce to x^2 + y^2 - z^2 (weights are coordinate-symmetric; an overall
    # sign flip leaves the cone unchanged)
    hw = weight.halfwidth
    r, wr = panel_nodes(0.0, hw, 400)
    th, wth = panel_nodes(0.0, 2 * math.pi, 400)
    rr, tt = np.meshgrid(r, th, indexing="ij")
    vals = weight.w(rr * np.cos(tt)) * weight.w(rr * np.sin(tt)) * weight.w(rr)
    return float(np.einsum("i,j,ij->", wr, wth, vals))


def level_measure_n3(form: QuadraticForm, weight: WeightParams, ts: np.ndarray) -> np.ndarray:
    """Lev(t) = int omega(x) delta(F(x) - t) dx for indefinite n = 3, smooth
    through t = 0 via the v = sqrt(r^2 - t) substitution."""
    if form.n != 3 or form.is_definite:
        raise DomainError("level measure implemented for indefinite n = 3")
    # orient so the singleton sign is the last coordinate and F ~ x^2+y^2-z^2
    plus = form.m_plus
    flip = 1.0 if plus == 2 else -1.0  # (+,+,-)-like vs (+,-,-)-like
    hw = weight.halfwidth
    v, wv = panel_nodes(0.0, hw, 240)
    th, wth = panel_nodes(0.0, 2 * math.pi, 240)
    out = np.empty(ts.size)
    vv, tt = np.meshgrid(v, th, indexing="ij")
    for i, t in enumerate(np.asarray(ts, dtype=float) * flip):
        r2 = vv * vv + t
        valid = r2 >= 0.0
        r = np.sqrt(np.where(valid, r2, 0.0))
        vals = np.where(valid,
                        weight.w(r * np.cos(tt)) * weight.w(r * np.sin(tt))
                        * weight.w(vv), 0.0)
        out[i] = float(np.einsum("i,j,ij->", wv, wth, vals))
    return out


# ---------------------------------------------------------------------------
# facade

class ArchEvaluator:
    """One-stop archimedean evaluator bound to a form, kernel and weight."""

    def __init__(self, form: QuadraticForm, kernel: KernelParams = KernelParams(),
                 weight: WeightParams = WeightParams(), cmax: int = 10,
                 ymin: float = 2e-3, zmax: float = 3000.0):
        self.form = form
        self.kernel = kernel
        self.weight = weight
        self.pipeline = GPipeline(form, kernel, weight, cmax=cmax, ymin=ymin)
        self._g0: G0Continued | None = None
        self.zmax = zmax

    @property
    def g0(self) -> G0Continued:
        if self._g0 is None:
            self._g0 = G0Continued(self.form, self.kernel, self.weight, self.zmax)
        return self._g0

    def g0_continued(self, s: complex) -> complex:
        return self.g0.g0_continued(s)

    def g0_residue_minus1(self) -> float:
        return self.g0.g0_residue_minus1()

    def g_at(self, c, s: complex) -> complex:
        if not any(int(t) for t in c):
            return self.g0_continued(s)
        return self.pipeline.g_single(c, s)

    def int_w(self) -> float:
        return self.g0.int_w()

    def z1_integral(self) -> float:
        return self.g0.z1_integral()


def g_quadrature(c, s: complex, form: QuadraticForm, weight: WeightParams,
                 kernel: KernelParams, tol: float = 1e-6,
                 pipeline: GPipeline | None = None) -> complex:
    """g(c, s) by quadrature with an error estimate checked against tol.

    For c = 0 on an indefinite n = 3 form the small-y end is completed
    exactly through the smooth level measure, which is what makes the
    vanishing of g(0,0) visible at tolerance 1e-6.
    """
    if tol < 1e-6:
        raise DomainError("g_quadrature supports tol >= 1e-6")
    s = complex(s)
    pipe = pipeline if pipeline is not None else GPipeline(form, kernel, weight, cmax=int(max((abs(int(t)) for t in c), default=0)))
    val = pipe.g_single(c, s)
    err = pipe.class_error(c)
    czero = not any(int(t) for t in c)
    if czero and form.n == 3 and not form.is_definite:
        # exact small-y completion: A_0(y) = -psi(y) * y * V(y),
        # V(y) = int phi(|u|) Lev(yu) du over (1/3 < |u| < 1)
        u, wu = panel_nodes(kernel.phi_lo, kernel.phi_hi, 32)
        phi_u = kernel.phi(u)
        y_small, wy = panel_nodes(0.0, pipe.ymin, 48)
        lev_plus = level_measure_n3(form, weight, np.outer(y_small, u).ravel()).reshape(len(y_small), -1)
        lev_minus = level_measure_n3(form, weight, -np.outer(y_small, u).ravel()).reshape(len(y_small), -1)
        v_y = (lev_plus + lev_minus) @ (wu * phi_u)
        integrand = -pipe.kernel.psi(y_small) * v_y * y_small ** s
        val += complex(np.dot(wy, integrand))
    else:
        tail = pipe.tail_estimate(c, s.real)
        err += tail
    if err > tol:
        raise AccuracyError(f"g quadrature error estimate {err} exceeds tol {tol}",
                            value=val, err=err)
    return val
