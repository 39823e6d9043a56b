"""Laws of U = min(X, Y), N = sign(X - Y), W = (X - U, Y - U) and
V = X - Y for a pseudo-weak distribution, plus the converse
reconstruction of the survival function from the (U, V) law.

Hazards r_i always refer to the base marginals G_i.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PseudoWeakDistribution
from .numerics import Tolerance, integrate


def _arr(x):
    return np.asarray(x, dtype=float)


def u_survival(d: PseudoWeakDistribution, u):
    """P(U >= u) = h(exp(-lam u))."""
    return d.generator.h(np.exp(-d.lam * _arr(u)))


def n_law(d: PseudoWeakDistribution) -> tuple[float, float, float]:
    """(P(N = 1), P(N = 0), P(N = -1))."""
    p_plus = 1.0 - d.G1.pdf0 / d.lam
    p_minus = 1.0 - d.G2.pdf0 / d.lam
    return p_plus, 1.0 - p_plus - p_minus, p_minus


class MinDiffLaw:
    """Joint survival P(U >= u, V >= v)."""

    def __init__(self, parent: PseudoWeakDistribution):
        self.parent = parent

    def survival(self, u, v):
        d = self.parent
        h = d.generator.h
        u, v = np.broadcast_arrays(_arr(u), _arr(v))
        a = np.exp(-d.lam * u)
        k = np.abs(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            pos = h(a * d.G1.sf(k)) * (1.0 - d.G1.hazard(k) / d.lam)
            neg = h(a) + h(a * d.G2.sf(k)) * (d.G2.hazard(k) / d.lam - 1.0)
        neg = np.where(np.isneginf(v), h(a), neg)
        return np.where(v > 0, np.nan_to_num(pos), neg)

    def du(self, u, v):
        """Partial derivative of the joint survival in u."""
        d = self.parent
        hp = d.generator.d1
        lam = d.lam
        u, v = np.broadcast_arrays(_arr(u), _arr(v))
        a = np.exp(-lam * u)
        k = np.abs(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            S1, S2 = d.G1.sf(k), d.G2.sf(k)
            pos = -lam * a * S1 * hp(a * S1) * (1.0 - d.G1.hazard(k) / lam)
            neg = -lam * a * hp(a) - lam * a * S2 * hp(a * S2) * (d.G2.hazard(k) / lam - 1.0)
        return np.where(v > 0, pos, neg)

    __call__ = survival


def uv_joint(d: PseudoWeakDistribution, u, v):
    return MinDiffLaw(d).survival(u, v)


def uw_joint(d: PseudoWeakDistribution, u, w1, w2):
    """P(U >= u, W1 >= w1, W2 >= w2)."""
    h = d.generator.h
    u, w1, w2 = np.broadcast_arrays(_arr(u), _arr(w1), _arr(w2))
    a = np.exp(-d.lam * u)
    k1, k2 = np.maximum(w1, 0.0), np.maximum(w2, 0.0)
    with np.errstate(invalid="ignore"):
        t1 = h(a * d.G1.sf(k1)) * (1.0 - d.G1.hazard(k1) / d.lam)
        t2 = h(a * d.G2.sf(k2)) * (1.0 - d.G2.hazard(k2) / d.lam)
    out = np.where(
        (w1 <= 0) & (w2 <= 0),
        h(a),
        np.where((w1 > 0) & (w2 <= 0), t1, np.where((w1 <= 0) & (w2 > 0), t2, 0.0)),
    )
    return out


def reconstruct_from_uv(d: PseudoWeakDistribution, tol: Tolerance | None = None):
    """Survival evaluator rebuilt from P(U >= u, V >= v) alone.

    For 0 <= x <= y the event {X > x, Y > y} splits into
        P(U > y, V >= 0) + P(x < U < y, x - y < V < U - y)
        + P(U > y, x - y < V < 0) + P(U > x, V <= x - y);
    the second term needs a one-dimensional integral along v = u - y.
    The case x > y uses the swapped law.
    """
    tol = tol or Tolerance(abs_tol=1e-13, rel_tol=1e-12)
    law = MinDiffLaw(d)
    law_sw = MinDiffLaw(d.swapped())

    def lower(L: MinDiffLaw, x: float, y: float) -> float:
        S = L.survival
        t1 = float(S(y, 0.0))
        t3 = float(S(y, x - y) - S(y, 0.0))
        t4 = float(u_survival(L.parent, x) - S(x, x - y))
        if y > x:
            path = integrate(lambda uu: L.du(uu, uu - y), x, y, tol)
        else:
            path = 0.0
        t2 = float(S(x, x - y) - S(y, x - y)) + path
        return t1 + t2 + t3 + t4

    def evaluator(x, y):
        x, y = np.broadcast_arrays(_arr(x), _arr(y))
        out = np.empty(x.shape)
        for idx in np.ndindex(x.shape):
            xi, yi = float(x[idx]), float(y[idx])
            out[idx] = lower(law, xi, yi) if xi <= yi else lower(law_sw, yi, xi)
        return out if out.shape else float(out)

    return evaluator


@dataclass
class IndependenceReport:
    max_deviation: float
    max_z: float
    bound: float
    passed: bool
    counts: dict


def n_u_independence_check(d: PseudoWeakDistribution, batch, u_grid=None, z_crit: float = 3.0):
    """Compare empirical P(N = n, U >= u) with P(N = n) h(exp(-lam u)).

    Passes when the largest absolute deviation lies within z_crit standard
    errors of its own cell; max_z (the worst standardized cell) is reported
    but, taken over many cells, is not the pass criterion.
    """
    from .sampling import Tag

    x, y = batch.x, batch.y
    U = np.minimum(x, y)
    tag = batch.tag
    n = x.size
    if u_grid is None:
        u_grid = np.quantile(U, np.linspace(0.0, 0.9, 10))
    probs = dict(zip((Tag.ABOVE, Tag.DIAGONAL, Tag.BELOW), n_law(d)))
    max_dev = 0.0
    max_z = 0.0
    bound = 0.0
    counts = {}
    for t, p in probs.items():
        sel = tag == t
        counts[int(t)] = int(sel.sum())
        for u in u_grid:
            emp = np.count_nonzero(sel & (U >= u)) / n
            theo = p * float(u_survival(d, u))
            sd = np.sqrt(max(theo * (1 - theo), 1e-300) / n)
            dev = abs(emp - theo)
            if dev > max_dev:
                max_dev = dev
                bound = z_crit * sd
            max_z = max(max_z, dev / sd if theo > 0 else (np.inf if emp > 0 else 0.0))
    return IndependenceReport(max_dev, max_z, bound, bool(max_dev <= bound), counts)
