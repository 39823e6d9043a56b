"""Kendall distribution function, Kendall tau and tail dependence.

The Kendall function of a pseudo-weak law is K(s) = s - H(h^{-1}(s)) with

    H(v) = h'(v) v [2 ln v + (J1(v) + J2(v)) / lam],
    J_i(v) = int_0^{G_i^{-1}(v)} r_i(z)^2 dz,

r_i the hazard of the base marginal G_i.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats
from scipy.integrate import trapezoid

from .core import PseudoWeakDistribution
from .errors import DomainError, NoRegularVariationError, UnstableLimitError
from .generators import Generator, regular_variation
from .numerics import Tolerance, integrate
from .sampling import RngState, SampleBatch, sample


@dataclass
class KendallCurve:
    t: np.ndarray
    K: np.ndarray
    kind: str  # analytic | empirical
    meta: dict = field(default_factory=dict)
    func: Callable | None = field(default=None, repr=False)

    def __iter__(self):
        return iter(zip(self.t.tolist(), self.K.tolist()))


@dataclass(frozen=True)
class TailDep:
    lower: float | None
    upper: float | None
    method: str  # closed_form | transfer_rule | numeric_limit | empirical
    note: str = ""

    def to_lines(self) -> list[str]:
        fmt = lambda v: "" if v is None else repr(float(v))  # noqa: E731
        return [f"lower={fmt(self.lower)}", f"upper={fmt(self.upper)}", f"method={self.method}"]


def default_t_grid(n: int = 101) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)[1:]


# ---------------------------------------------------------------------------
# Kendall function


def kendall_function(d: PseudoWeakDistribution) -> Callable:
    """Vectorized K(s) on [0, 1]."""
    g = d.generator
    lam = d.lam

    def K(s):
        s = np.asarray(s, dtype=float)
        v = g.inverse(s)
        pos = v > 0
        vv = np.where(pos, v, 1.0)
        J = d.G1.squared_hazard_integral(vv) + d.G2.squared_hazard_integral(vv)
        with np.errstate(invalid="ignore", over="ignore"):
            H = g.d1(vv) * vv * (2.0 * np.log(vv) + J / lam)
        out = np.where(pos, s - H, 0.0)
        out = np.where(s >= 1.0, 1.0, out)
        return out if out.shape else float(out)

    return K


def kendall_analytic(d: PseudoWeakDistribution, t_grid=None) -> KendallCurve:
    t = np.asarray(default_t_grid() if t_grid is None else t_grid, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise DomainError("t grid must lie in [0, 1]")
    K = kendall_function(d)
    return KendallCurve(t, np.asarray(K(t), dtype=float), "analytic", {"model": repr(d)}, func=K)


def kendall_empirical(
    d: PseudoWeakDistribution,
    samples: SampleBatch | int,
    t_grid=None,
    seed: int = 0,
    method: str = "structural",
) -> KendallCurve:
    """K_hat(t) = #{i : F(x_i, y_i) <= t} / n."""
    if isinstance(samples, (int, np.integer)):
        samples = sample(d, int(samples), RngState(seed), method)
    t = np.asarray(default_t_grid() if t_grid is None else t_grid, dtype=float)
    w = np.sort(d.survival(samples.x, samples.y))
    K = np.searchsorted(w, t, side="right") / w.size
    return KendallCurve(
        t, K, "empirical", {"model": repr(d), "n": int(w.size), "seed": samples.seed}
    )


def kendall_sup_distance(a: KendallCurve, b: KendallCurve) -> float:
    return float(np.max(np.abs(a.K - b.K)))


def dkw_band(n: int, alpha: float = 0.01) -> float:
    """Half-width of the Dvoretzky-Kiefer-Wolfowitz band at level 1 - alpha."""
    return float(np.sqrt(np.log(2.0 / alpha) / (2.0 * n)))


def kendall_distance_exact(d: PseudoWeakDistribution, batch: SampleBatch) -> float:
    """Kolmogorov distance between the empirical and analytic Kendall laws."""
    K = kendall_function(d)
    w = np.sort(d.survival(batch.x, batch.y))
    n = w.size
    Kw = np.asarray(K(w), dtype=float)
    upper = np.arange(1, n + 1) / n - Kw
    lower = Kw - np.arange(n) / n
    return float(max(upper.max(), lower.max()))


# ---------------------------------------------------------------------------
# Kendall tau


def kendall_tau(curve: KendallCurve, tol: Tolerance | None = None) -> float:
    """tau = 3 - 4 int_0^1 K(t) dt."""
    if curve.func is not None:
        tol = tol or Tolerance(abs_tol=1e-10, rel_tol=1e-10)
        area = integrate(curve.func, 0.0, 1.0, tol, vectorized=True)
    else:
        t = np.concatenate([[0.0], curve.t]) if curve.t[0] > 0 else curve.t
        K = np.concatenate([[0.0], curve.K]) if curve.t[0] > 0 else curve.K
        area = float(trapezoid(K, t))
    return 3.0 - 4.0 * area


def kendall_tau_analytic(d: PseudoWeakDistribution) -> float:
    return kendall_tau(kendall_analytic(d, [1.0]))


def kendall_tau_empirical(batch: SampleBatch) -> float:
    """Tie-adjusted concordance estimator (tau-b)."""
    return float(stats.kendalltau(batch.x, batch.y, variant="b").statistic)


# ---------------------------------------------------------------------------
# Tail dependence


@dataclass
class LimitReport:
    estimate: float
    delta: float
    deltas: list
    raw: list


def taildep_numeric(
    copula: Callable,
    side: str,
    deficit: Callable | None = None,
    k_range: tuple[int, int] = (4, 30),
    max_delta: float = 1e-3,
) -> LimitReport:
    """Corner limit of the defining ratio along u = 2^{-k} or 1 - 2^{-k}.

    ``deficit(s)`` may supply 1 - C(1 - s, 1 - s) without cancellation.
    First-order Richardson: R_k = 2 L_{k+1} - L_k.
    """
    k = np.arange(k_range[0], k_range[1] + 1)
    s = 2.0 ** (-k.astype(float))
    with np.errstate(all="ignore"):
        if side == "lower":
            L = np.asarray(copula(s, s), dtype=float) / s
        elif side == "upper":
            if deficit is not None:
                D = np.asarray(deficit(s), dtype=float)
            else:
                u = 1.0 - s
                D = 1.0 - np.asarray(copula(u, u), dtype=float)
            L = 2.0 - D / s
        else:
            raise DomainError("side must be 'lower' or 'upper'")
    if not np.all(np.isfinite(L)):
        raise UnstableLimitError(f"{side} ratio not finite", estimate=float("nan"))
    R = 2.0 * L[1:] - L[:-1]
    deltas = np.abs(np.diff(R))
    est = float(np.clip(R[-1], 0.0, 1.0))
    # rounding floor of the ratio; a direct upper ratio loses eps / s
    direct = side == "upper" and deficit is None
    noise = (64 * np.finfo(float).eps / s[3:]) if direct else 1e-12
    trend_ok = bool(np.all(deltas[1:] <= deltas[:-1] + noise))
    if deltas[-1] > max_delta or not trend_ok:
        raise UnstableLimitError(
            f"{side} limit not stable (last delta {deltas[-1]:.3g})", estimate=est
        )
    return LimitReport(est, float(deltas[-1]), deltas.tolist(), L.tolist())


def _identical_base(d: PseudoWeakDistribution):
    if d.G1 != d.G2:
        raise DomainError("closed-form tail dependence needs identical base marginals")
    return d.G1


def taildep_base(d: PseudoWeakDistribution) -> TailDep:
    """Tail dependence of the undistorted survival copula."""
    G = _identical_base(d)
    if d.lam > 2 * G.pdf0 * (1 + 1e-12):
        raise DomainError("need lambda <= 2 g(0)")
    upper = 2.0 - d.lam / G.pdf0
    if G.heavy_tailed:
        return TailDep(0.0, upper, "closed_form")
    rep = taildep_numeric(d.base_copula, "lower")
    return TailDep(rep.estimate, upper, "closed_form", note=f"lower numeric, delta={rep.delta:.3g}")


def taildep_distorted(
    base: TailDep,
    g: Generator,
    lower_index: tuple[float, float] | None = None,
    upper_index: tuple[float, float] | None = None,
) -> TailDep:
    """lambda_L -> lambda_L^a and lambda_U -> 2 - (2 - lambda_U)^a."""
    notes = []

    def index(side, given):
        if given is not None:
            return given
        try:
            return regular_variation(g, side)
        except NoRegularVariationError as exc:
            notes.append(str(exc))
            return None

    lo = index("lower", lower_index)
    up = index("upper", upper_index)
    lower = None if (lo is None or base.lower is None) else float(base.lower ** lo[0])
    upper = None if (up is None or base.upper is None) else float(2.0 - (2.0 - base.upper) ** up[0])
    if lower is None and upper is None:
        raise NoRegularVariationError("; ".join(notes) or "no tail indices available")
    return TailDep(lower, upper, "transfer_rule", note="; ".join(notes))


def taildep_model(d: PseudoWeakDistribution) -> TailDep:
    """Closed-form base coefficients pushed through the generator."""
    return taildep_distorted(taildep_base(d), d.generator)


def taildep_model_numeric(d: PseudoWeakDistribution, side: str) -> LimitReport:
    if side == "upper":
        return taildep_numeric(d.copula, "upper", deficit=d.copula_diagonal_deficit)
    return taildep_numeric(d.copula, "lower")
