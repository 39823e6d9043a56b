"""Numerical kernel: adaptive Simpson quadrature, monotone inversion and
finite differences.

All routines are pure functions.  Integrands and inverted functions are
expected to accept and return numpy arrays unless stated otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadBracketError, DiagonalStencilError, DomainError, NonConvergenceError


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise DomainError("tolerances must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1")


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty bracket [{self.lo}, {self.hi}]")


DEFAULT_TOL = Tolerance()

# Simpson levels below this are never accepted; guards against integrands
# that happen to vanish on the coarse nodes.
_MIN_LEVEL = 2
_MAX_INTERVALS = 2_000_000


def _simpson(width, fa, fm, fb):
    return width / 6.0 * (fa + 4.0 * fm + fb)


def integrate(f, a, b, tol=DEFAULT_TOL, points=(), vectorized=True, n_init=16):
    """Adaptive Simpson quadrature of ``f`` over the finite interval [a, b].

    The interval is first cut at the caller-supplied ``points`` (jump
    locations) and into ``n_init`` pieces per segment.  Every pass bisects
    all intervals whose Richardson error estimate exceeds their share of
    ``max(abs_tol, rel_tol * |I|)``; intervals are processed in bulk so a
    vectorised ``f`` is called once per pass.

    Raises :class:`NonConvergenceError` when ``tol.max_iter`` passes (or
    the interval budget) are exhausted.
    """
    a = float(a)
    b = float(b)
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ValueError("integrate needs finite limits; see integrate_decay")
    if a == b:
        return 0.0
    if a > b:
        return -integrate(f, b, a, tol, points, vectorized, n_init)
    fv = f if vectorized else np.vectorize(f, otypes=[float])

    def call(x):
        return np.asarray(fv(x), dtype=float) * np.ones_like(x)

    cuts = sorted({a, b, *(float(p) for p in points if a < p < b)})
    edges = np.concatenate(
        [np.linspace(lo, hi, n_init + 1)[:-1] for lo, hi in zip(cuts[:-1], cuts[1:])]
        + [np.array([b])]
    )
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    vals = call(np.concatenate([edges, mid]))
    f_edges, fm = vals[: edges.size], vals[edges.size:]
    fa, fb = f_edges[:-1], f_edges[1:]
    whole = _simpson(hi - lo, fa, fm, fb)

    total_len = b - a
    accepted = 0.0
    for level in range(tol.max_iter):
        ml = 0.5 * (lo + mid)
        mr = 0.5 * (mid + hi)
        vals = call(np.concatenate([ml, mr]))
        fml, fmr = vals[: lo.size], vals[lo.size:]
        left = _simpson(mid - lo, fa, fml, fm)
        right = _simpson(hi - mid, fm, fmr, fb)
        err = left + right - whole
        if not np.all(np.isfinite(err)):
            bad = np.flatnonzero(~np.isfinite(err))[0]
            raise NonConvergenceError(
                "integrand not finite on a subinterval", worst=(lo[bad], hi[bad])
            )
        estimate = accepted + float(np.sum(left + right))
        budget = max(tol.abs_tol, tol.rel_tol * abs(estimate))
        share = 15.0 * budget * (hi - lo) / total_len
        ok = np.abs(err) <= share if level >= _MIN_LEVEL else np.zeros(lo.size, bool)
        accepted += float(np.sum((left + right + err / 15.0)[ok]))
        keep = ~ok
        if not keep.any():
            return accepted
        if 2 * keep.sum() > _MAX_INTERVALS:
            break
        lo_k, mid_k, hi_k = lo[keep], mid[keep], hi[keep]
        lo = np.concatenate([lo_k, mid_k])
        hi = np.concatenate([mid_k, hi_k])
        fa = np.concatenate([fa[keep], fm[keep]])
        fb = np.concatenate([fm[keep], fb[keep]])
        fm = np.concatenate([fml[keep], fmr[keep]])
        whole = np.concatenate([left[keep], right[keep]])
        mid = np.concatenate([ml[keep], mr[keep]])
    worst = int(np.argmax(np.abs(whole)))
    raise NonConvergenceError(
        f"adaptive Simpson did not converge ({lo.size} open intervals)",
        worst=(float(lo[worst]), float(hi[worst])),
    )


def integrate_decay(f, a, rate, tol=DEFAULT_TOL, u_floor=1e-200):
    """Integrate ``f`` over [a, inf) through the substitution u = exp(-rate (x - a)).

    The transformed integrand f(x(u)) / (rate u) lives on (0, 1]; the
    sliver (0, u_floor) is dropped, which is harmless for integrands that
    decay at least like exp(-rate x).
    """
    if not rate > 0:
        raise ValueError("decay rate must be positive")

    def g(u):
        u = np.maximum(u, u_floor)
        return f(a - np.log(u) / rate) / (rate * u)

    return integrate(g, 0.0, 1.0, tol)


def _default_step(x):
    return np.maximum(1e-5, 1e-5 * np.abs(x))


def invert_monotone(f, target, bracket, tol=DEFAULT_TOL, fprime=None):
    """Solve ``f(x) = target`` for strictly monotone scalar ``f`` on ``bracket``.

    Bisection is always available; when ``fprime`` is given a Newton step
    is tried first and kept only if it stays inside the current bracket.
    """
    lo, hi = float(bracket.lo), float(bracket.hi)
    f_lo, f_hi = f(lo) - target, f(hi) - target
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        if min(abs(f_lo), abs(f_hi)) <= tol.abs_tol:
            return lo if abs(f_lo) <= abs(f_hi) else hi
        raise BadBracketError(
            f"target {target} outside [{min(f_lo, f_hi) + target}, "
            f"{max(f_lo, f_hi) + target}]"
        )
    increasing = f_hi > 0
    x = 0.5 * (lo + hi)
    for _ in range(tol.max_iter):
        fx = f(x) - target
        if abs(fx) <= tol.abs_tol:
            return x
        if (fx > 0) == increasing:
            hi = x
        else:
            lo = x
        x_next = 0.5 * (lo + hi)
        if fprime is not None:
            d = fprime(x)
            if d != 0 and np.isfinite(d):
                newton = x - fx / d
                if lo < newton < hi:
                    x_next = newton
        if hi - lo <= 2.0 * np.finfo(float).eps * max(abs(lo), abs(hi)):
            return x_next  # bracket at floating-point resolution
        x = x_next
    return x


def bisect_monotone(f, target, lo, hi, n_iter=64):
    """Vectorised bisection: solve ``f(x) = target`` elementwise on [lo, hi].

    ``f`` must be monotone on every bracket (direction may differ per
    element) and is evaluated on whole arrays.  Returns the midpoints of
    the final brackets.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    increasing = f(hi) >= f(lo)
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        above = f(mid) > target
        move_hi = above == increasing
        hi = np.where(move_hi, mid, hi)
        lo = np.where(move_hi, lo, mid)
    return 0.5 * (lo + hi)


def derivative(f, x, lo=-np.inf, hi=np.inf, step=None):
    """First derivative by central differences, one-sided near [lo, hi] edges."""
    x = np.asarray(x, dtype=float)
    h = _default_step(x) if step is None else np.broadcast_to(step, x.shape)
    central = (f(np.minimum(x + h, hi)) - f(np.maximum(x - h, lo))) / (
        np.minimum(x + h, hi) - np.maximum(x - h, lo)
    )
    fwd = (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2 * h)) / (2 * h)
    bwd = (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) / (2 * h)
    with np.errstate(invalid="ignore"):
        out = np.where(x - h < lo, fwd, np.where(x + h > hi, bwd, central))
    return out


def mixed_partial(F, x, y, step=None, floor=1e-7):
    """Central four-point estimate of d^2 F / dx dy at (x, y).

    The stencil must not straddle the line x == y, so the step is shrunk
    until 2 * step < |x - y|; :class:`DiagonalStencilError` is raised if
    that pushes it below ``floor * max(1, |x|, |y|)``.
    """
    x = float(x)
    y = float(y)
    h = float(_default_step(max(abs(x), abs(y)))) if step is None else float(step)
    gap = abs(x - y)
    min_h = floor * max(1.0, abs(x), abs(y))
    if x == y:
        raise DiagonalStencilError(f"({x}, {y}) lies on the diagonal")
    while 2.0 * h >= gap:
        h *= 0.5
    if h < min_h:
        raise DiagonalStencilError(f"({x}, {y}) too close to the diagonal")
    return (F(x + h, y + h) - F(x + h, y - h) - F(x - h, y + h) + F(x - h, y - h)) / (
        4.0 * h * h
    )
