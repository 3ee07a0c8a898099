"""Adaptive Gauss panel quadrature with endpoint regularization.

The integrands in this package live on an interval [lo, hi] and may blow up
like an inverse square root at either endpoint. Every panel is therefore
reparametrized quadratically toward the nearer endpoint (s = lo + u**2 resp.
s = hi - v**2), which turns an integrable algebraic endpoint singularity
into a smooth factor no matter how panel edges fall. Integrands receive,
alongside the sample points, the exact distances to both endpoints so they
never compute a catastrophic cancellation like s - lo themselves.

Integrand protocol: f(s, dlo, dhi) -> array, vectorized over numpy arrays,
with dlo = s - lo and dhi = hi - s supplied by the integrator.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from itertools import count

import numpy as np

from .errors import PrecisionError

_NODES_LOW, _WEIGHTS_LOW = np.polynomial.legendre.leggauss(7)
_NODES_HIGH, _WEIGHTS_HIGH = np.polynomial.legendre.leggauss(15)


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy contract for one integration task.

    rel_tol and abs_tol combine as tol = max(abs_tol, rel_tol * |estimate|);
    max_refinement bounds the bisection depth per panel before giving up.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_refinement: int = 26


DEFAULT_QUAD = QuadratureSpec()


def _pair(g, a: float, b: float) -> tuple[float, float]:
    """Low/high order Gauss estimates on [a, b]; returns (value, error)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    low = half * float(np.dot(_WEIGHTS_LOW, g(mid + half * _NODES_LOW)))
    high = half * float(np.dot(_WEIGHTS_HIGH, g(mid + half * _NODES_HIGH)))
    return high, abs(high - low)


_NOISE = 64.0 * np.finfo(float).eps
_MAX_SPLITS = 40_000


def _refine_all(panels, quad: QuadratureSpec, label: str) -> float:
    """Split the panel with the worst error estimate until the summed error
    meets the requested tolerance (or falls below double-precision noise)."""
    heap = []
    order = count()
    total = 0.0
    live_err = 0.0
    for g, a, b in panels:
        value, err = _pair(g, a, b)
        heapq.heappush(heap, (-err, next(order), value, g, a, b,
                              quad.max_refinement))
        total += value
        live_err += err
    frozen_err = 0.0
    for _ in range(_MAX_SPLITS):
        budget = max(quad.abs_tol, quad.rel_tol * abs(total),
                     _NOISE * (abs(total) + quad.abs_tol))
        if frozen_err + live_err <= budget:
            return total
        if not heap or frozen_err > budget:
            break
        neg_err, _, value, g, a, b, depth = heapq.heappop(heap)
        if depth <= 0:
            # cannot be split further; its error stays on the books
            frozen_err += -neg_err
            live_err += neg_err
            continue
        mid = 0.5 * (a + b)
        v1, e1 = _pair(g, a, mid)
        v2, e2 = _pair(g, mid, b)
        total += v1 + v2 - value
        live_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, next(order), v1, g, a, mid, depth - 1))
        heapq.heappush(heap, (-e2, next(order), v2, g, mid, b, depth - 1))
    raise PrecisionError(
        f"quadrature on {label} stalled: error {frozen_err + live_err:.3e} "
        f"above budget {max(quad.abs_tol, quad.rel_tol * abs(total)):.3e}"
    )


def integrate(f, lo, hi, quad: QuadratureSpec = DEFAULT_QUAD,
              breakpoints=(), skip=None) -> float:
    """Integrate f over [lo, hi] to the accuracy demanded by quad.

    breakpoints lists interior abscissae where f is allowed to be merely
    continuous (piece boundaries); panels never straddle them. skip, when
    given, is a predicate skip(a, b) marking panels on which f vanishes
    identically, so they are dropped without evaluation.

    Raises PrecisionError when a panel cannot reach its error budget
    within quad.max_refinement bisections.
    """
    lo = float(lo)
    hi = float(hi)
    if not hi > lo:
        return 0.0
    span = hi - lo

    cuts = sorted({float(c) for c in breakpoints if lo < float(c) < hi})
    if not cuts:
        # both endpoints get their own substituted panel
        cuts = [lo + 0.5 * span]
    edges = [lo, *cuts, hi]

    def g_lo(u):
        usq = u * u
        return f(lo + usq, usq, span - usq) * (2.0 * u)

    def g_hi(v):
        vsq = v * v
        return f(hi - vsq, span - vsq, vsq) * (2.0 * v)

    # Every panel is reparametrized toward the nearer endpoint. The map can
    # regularize only one end, so a panel must not hug both: when a
    # breakpoint sits a hair inside an endpoint, the wide leftover panel
    # touches one singularity and leans on the other, and gets bisected
    # until each half is adjacent to at most one endpoint.
    panels = []

    def emit(a, b):
        width = b - a
        if a - lo < width and hi - b < width:
            mid = 0.5 * (a + b)
            emit(a, mid)
            emit(mid, b)
            return
        if skip is not None and skip(a, b):
            return
        if a - lo <= hi - b:
            panels.append((g_lo, math.sqrt(a - lo), math.sqrt(b - lo)))
        else:
            panels.append((g_hi, math.sqrt(hi - b), math.sqrt(hi - a)))

    for a, b in zip(edges, edges[1:]):
        emit(a, b)

    if not panels:
        return 0.0
    return _refine_all(panels, quad, f"[{lo:.6g}, {hi:.6g}]")
