"""Exact samplers by inversion.

Uniforms come from a Philox4x64 counter-based generator keyed by
(seed, stream); draw i of a batch lives in counter block i // BLOCK, so a
batch can be produced block by block, in any order or in parallel, and
always yields the same bits.

Two independent samplers are provided for the pseudo-weak law:

* ``structural``: N from its three-point law, then (U, V) from the joint
  law of the minimum and the difference.
* ``conditional``: X from its marginal, then Y from the conditional
  survival given X = x, whose jump at y = x is the diagonal atom.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .characterization import n_law
from .core import PseudoStrongDistribution, PseudoWeakDistribution
from .errors import DomainError, InversionFailure, NegativeConditionalError
from .numerics import bisect_monotone

BLOCK = 1 << 16
_LOG_FLOOR = -700.0  # keeps exp() and h() of the floor normal
_N_ITER = 80


class Tag(enum.IntEnum):
    BELOW = -1  # x < y
    DIAGONAL = 0
    ABOVE = 1  # x > y


@dataclass(frozen=True)
class RngState:
    seed: int
    stream: int = 0
    algorithm: str = "philox4x64"

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64 or not 0 <= int(self.stream) < 2**64:
            raise DomainError("seed and stream must be 64-bit unsigned integers")

    def uniforms(self, block: int, size: int, k: int) -> np.ndarray:
        """(size, k) open-interval uniforms for counter block ``block``."""
        bg = np.random.Philox(key=[int(self.seed), int(self.stream)], counter=[0, int(block), 0, 0])
        raw = bg.random_raw(size * k).astype(np.uint64)
        u = ((raw >> np.uint64(11)).astype(float) + 0.5) * 2.0**-53
        return u.reshape(size, k)


@dataclass
class SampleBatch:
    x: np.ndarray
    y: np.ndarray
    tag: np.ndarray
    seed: int
    method: str
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return self.x.size

    def diagonal_fraction(self) -> float:
        return float(np.mean(self.tag == Tag.DIAGONAL))


def _run_blocks(n, rng, k, worker, workers):
    if n < 1:
        raise DomainError("sample size must be at least 1")
    blocks = [(b, min(BLOCK, n - b * BLOCK)) for b in range((n + BLOCK - 1) // BLOCK)]

    def job(spec):
        b, size = spec
        return worker(rng.uniforms(b, size, k))

    if workers and workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(job, blocks))
    else:
        parts = [job(s) for s in blocks]
    x = np.concatenate([p[0] for p in parts])
    y = np.concatenate([p[1] for p in parts])
    return x, y


def _tags(x, y):
    return np.sign(x - y).astype(np.int8)


def _check(values, xi, what):
    bad = ~np.isfinite(values)
    if bad.any():
        raise InversionFailure(f"{what} inversion failed", draw=float(xi[np.argmax(bad)]))


# ---------------------------------------------------------------------------
# Structural sampler


def _structural_side(d: PseudoWeakDistribution, side: int, xi_w, xi_a):
    """Draw (U, V) given N = side in A = exp(-lam U), W = G(V) coordinates.

    P(A <= a, W <= w | N) = h(a w) q(w) / p with q(w) = 1 - r(G^{-1}(w)) / lam.
    """
    G = d.G1 if side == 1 else d.G2
    g = d.generator
    lam = d.lam

    def q_parts(w):
        z = G.isf(w)
        q = 1.0 - G.hazard(z) / lam
        with np.errstate(divide="ignore", invalid="ignore"):
            qp = G.dhazard(z) / (lam * G.pdf(z))
        return q, np.nan_to_num(qp, nan=0.0, posinf=0.0, neginf=0.0)

    p = 1.0 - G.pdf0 / lam

    def H_w(lw):
        w = np.exp(lw)
        q, _ = q_parts(w)
        return g.h(w) * q / p

    lw = bisect_monotone(H_w, xi_w, _LOG_FLOOR, 0.0, n_iter=_N_ITER)
    w = np.exp(lw)
    q, qp = q_parts(w)
    with np.errstate(invalid="ignore", over="ignore"):
        denom = g.d1(w) * q + g.h(w) * qp

    def Phi(la):
        a = np.exp(la)
        with np.errstate(invalid="ignore", over="ignore"):
            return (a * g.d1(a * w) * q + g.h(a * w) * qp) / denom

    la = bisect_monotone(Phi, xi_a, _LOG_FLOOR, 0.0, n_iter=_N_ITER)
    U = -la / lam
    V = G.isf(w)
    _check(U, xi_a, "conditional U")
    _check(V, xi_w, "V marginal")
    return U, V


def sample_structural(d: PseudoWeakDistribution, n: int, rng: RngState, workers: int = 0) -> SampleBatch:
    p_plus, p0, p_minus = n_law(d)
    if min(p_plus, p0, p_minus) < -1e-12:
        raise DomainError("invalid N-law; rates outside the admissible window")

    def worker(xi):
        m = xi.shape[0]
        x = np.empty(m)
        y = np.empty(m)
        sel_p = xi[:, 0] < p_plus
        sel_m = xi[:, 0] >= p_plus + max(p0, 0.0)
        sel_0 = ~(sel_p | sel_m)
        # N = 0: U from h(exp(-lam u))
        U0 = -np.log(d.generator.inverse(xi[sel_0, 1])) / d.lam
        x[sel_0] = U0
        y[sel_0] = U0
        for side, sel in ((1, sel_p), (2, sel_m)):
            if not sel.any():
                continue
            U, V = _structural_side(d, side, xi[sel, 1], xi[sel, 2])
            far = np.maximum(U + V, np.nextafter(U, np.inf))
            if side == 1:
                x[sel], y[sel] = far, U
            else:
                x[sel], y[sel] = U, far
        return x, y

    x, y = _run_blocks(n, rng, 3, worker, workers)
    return SampleBatch(
        x, y, _tags(x, y), rng.seed, "structural",
        {"exact_derivatives": d.density_is_exact, "stream": rng.stream},
    )


# ---------------------------------------------------------------------------
# Conditional sampler


def _conditional_y(d: PseudoWeakDistribution, x, xi):
    """Y given X = x by inverting S(y | x) = -dF/dx (x, y) / f1(x)."""
    g = d.generator
    lam = d.lam
    G1, G2 = d.G1, d.G2
    f1 = g.d1(G1.sf(x)) * G1.pdf(x)
    ax = np.exp(-lam * x)
    base = g.d1(ax) * ax / f1
    s_minus = base * G1.pdf0
    s_plus = base * (lam - G2.pdf0)
    if np.any(s_minus < s_plus * (1 - 1e-9) - 1e-12):
        raise NegativeConditionalError("conditional survival increases across the diagonal")

    def s_below(yy):
        k = x_b - yy
        a = np.exp(-lam * yy)
        return g.d1(a * G1.sf(k)) * a * G1.pdf(k) / f1_b

    def s_above(lw):
        w = np.exp(lw)
        k = G2.isf(w)
        with np.errstate(invalid="ignore"):
            return g.d1(ax_a * w) * ax_a * (lam * w - G2.pdf(k)) / f1_a

    y = x.copy()
    below = xi > s_minus
    above = xi < s_plus
    if below.any():
        x_b, f1_b = x[below], f1[below]
        y[below] = bisect_monotone(s_below, xi[below], 0.0, x_b, n_iter=_N_ITER)
        y[below] = np.minimum(y[below], np.nextafter(x_b, -np.inf))
    if above.any():
        ax_a, f1_a = ax[above], f1[above]
        lw = bisect_monotone(s_above, xi[above], _LOG_FLOOR, 0.0, n_iter=_N_ITER)
        xa = x[above]
        y[above] = np.maximum(xa + G2.isf(np.exp(lw)), np.nextafter(xa, np.inf))
    _check(y, xi, "conditional Y")
    return y


def sample_conditional(d: PseudoWeakDistribution, n: int, rng: RngState, workers: int = 0) -> SampleBatch:
    def worker(xi):
        x = d.F1.isf(xi[:, 0])
        _check(x, xi[:, 0], "X marginal")
        return x, _conditional_y(d, x, xi[:, 1])

    x, y = _run_blocks(n, rng, 2, worker, workers)
    return SampleBatch(
        x, y, _tags(x, y), rng.seed, "conditional",
        {"exact_derivatives": d.density_is_exact, "stream": rng.stream},
    )


# ---------------------------------------------------------------------------
# Strong sampler


def sample_strong(d: PseudoStrongDistribution, n: int, rng: RngState, workers: int = 0) -> SampleBatch:
    """Conditional method on the Archimedean survival copula u (x) v."""
    g = d.generator

    def worker(xi):
        a = g.inverse(xi[:, 0])
        ha = g.d1(a)

        def cond(lb):
            b = np.exp(lb)
            return g.d1(a * b) * b / ha

        lb = bisect_monotone(cond, xi[:, 1], _LOG_FLOOR, 0.0, n_iter=_N_ITER)
        x = -np.log(a) / d.lam1
        y = -lb / d.lam2
        _check(x, xi[:, 0], "strong X")
        _check(y, xi[:, 1], "strong Y")
        return x, y

    x, y = _run_blocks(n, rng, 2, worker, workers)
    return SampleBatch(x, y, _tags(x, y), rng.seed, "strong", {"stream": rng.stream})


def sample(d, n: int, rng: RngState, method: str = "structural", workers: int = 0) -> SampleBatch:
    if isinstance(d, PseudoStrongDistribution):
        return sample_strong(d, n, rng, workers)
    if method == "structural":
        return sample_structural(d, n, rng, workers)
    if method == "conditional":
        return sample_conditional(d, n, rng, workers)
    raise DomainError(f"unknown sampling method {method!r}")
