"""Panel-based Gauss-Legendre quadrature with embedded error estimates.

All integrators here take *vectorized* integrands (ndarray in, ndarray out)
so the heavy kernels in :mod:`qfzeros.arch` stay in numpy.  Error control is
by order doubling on each panel plus worst-panel bisection, capped at a fixed
refinement depth.
"""

from __future__ import annotations

import heapq
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gl_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_nodes(a: float, b: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = gl_rule(order)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def fixed_quad(f, a: float, b: float, order: int = 40) -> complex:
    x, w = panel_nodes(a, b, order)
    return np.dot(w, f(x))


def _panel_value_err(f, a, b, order):
    lo = fixed_quad(f, a, b, order)
    hi = fixed_quad(f, a, b, 2 * order)
    return hi, abs(hi - lo)


def adaptive_integrate(f, a: float, b: float, tol: float = 1e-9,
                       order: int = 15, max_level: int = 12,
                       initial_panels: int = 4):
    """Integrate vectorized ``f`` on [a, b] to absolute tolerance ``tol``.

    Returns ``(value, err_estimate, converged)``.  Refinement bisects the
    worst panel first and stops at ``max_level`` generations, so a stagnating
    estimate is reported rather than looped on.
    """
    edges = np.linspace(a, b, initial_panels + 1)
    heap = []
    for i in range(initial_panels):
        v, e = _panel_value_err(f, edges[i], edges[i + 1], order)
        # heap entries: (-err, insert order, a, b, level, value, err)
        heapq.heappush(heap, (-e, i, edges[i], edges[i + 1], 0, v, e))
    counter = initial_panels
    while True:
        total_err = sum(item[6] for item in heap)
        if total_err <= tol:
            break
        neg_e, _, pa, pb, lvl, pv, pe = heapq.heappop(heap)
        if lvl >= max_level:
            heapq.heappush(heap, (neg_e, counter, pa, pb, lvl, pv, pe))
            break
        mid = 0.5 * (pa + pb)
        for qa, qb in ((pa, mid), (mid, pb)):
            v, e = _panel_value_err(f, qa, qb, order)
            counter += 1
            heapq.heappush(heap, (-e, counter, qa, qb, lvl + 1, v, e))
    value = sum(item[5] for item in heap)
    err = sum(item[6] for item in heap)
    return value, err, err <= tol


def geometric_edges(a: float, b: float, ratio: float = 3.0) -> np.ndarray:
    """Geometrically spaced panel edges from a to b (a > 0)."""
    edges = [a]
    while edges[-1] * ratio < b:
        edges.append(edges[-1] * ratio)
    edges.append(b)
    return np.asarray(edges)


def oscillatory_quad(f, a: float, b: float, cycles: float,
                     base_order: int = 16, nodes_per_cycle: float = 7.0,
                     max_order: int = 2000) -> complex:
    """One-panel GL sized to resolve ``cycles`` full oscillations on [a, b].

    Splits into subpanels when the required order exceeds ``max_order`` per
    panel; caller guarantees cycles is a sound bound on the phase variation.
    """
    need = base_order + int(nodes_per_cycle * max(cycles, 0.0))
    if need <= max_order:
        return fixed_quad(f, a, b, need)
    pieces = int(np.ceil(need / max_order))
    edges = np.linspace(a, b, pieces + 1)
    return sum(fixed_quad(f, edges[i], edges[i + 1], max_order)
               for i in range(pieces))
