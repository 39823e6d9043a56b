"""Pseudo-strong and pseudo-weak bivariate lack-of-memory distributions.

The pseudo-weak survival function is

    F(x, y) = h(exp(-lam y) G1(x - y))   for x >= y
    F(x, y) = h(exp(-lam x) G2(y - x))   for x <  y

with base marginals G_i and a generator h.  It carries a singular
component on the diagonal of mass (g1(0) + g2(0)) / lam - 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGeneratorError, OnDiagonalError, RateDomainError
from .generators import (
    Generator,
    Identity,
    exp_h,
    log_concavity_check,
    pseudo_product,
    sigma_h_increasing,
)
from .marginals import Exponential, UnivariateSurvival, distort
from .numerics import Tolerance, integrate

DENSITY_TOL = -1e-9


def _arr(x):
    return np.asarray(x, dtype=float)


class PseudoStrongDistribution:
    """F(x, y) = h(exp(-lam1 x - lam2 y)); survival copula u (x) v."""

    def __init__(self, generator: Generator, lam1: float, lam2: float):
        if not (lam1 > 0 and lam2 > 0):
            raise RateDomainError("strong rates must be positive")
        check = log_concavity_check(generator)
        if not check:
            raise InvalidGeneratorError(
                f"{generator!r}: h^-1 is not log-concave (witness {check.witness:.4g})"
            )
        self.generator = generator
        self.lam1 = float(lam1)
        self.lam2 = float(lam2)
        self.F1 = distort(generator, Exponential(lam1))
        self.F2 = distort(generator, Exponential(lam2))

    def survival(self, x, y):
        return self.generator.h(np.exp(-self.lam1 * _arr(x) - self.lam2 * _arr(y)))

    def copula(self, u, v):
        return pseudo_product(self.generator, u, v)


class PseudoWeakDistribution:
    """h-distortion of a standard weak lack-of-memory survival function."""

    def __init__(
        self,
        generator: Generator,
        marginal1: UnivariateSurvival,
        marginal2: UnivariateSurvival,
        lam: float,
        check: bool = True,
    ):
        if not lam > 0:
            raise RateDomainError("lambda must be positive")
        self.generator = generator
        self.G1 = marginal1
        self.G2 = marginal2
        self.lam = float(lam)
        self.F1 = distort(generator, marginal1)
        self.F2 = distort(generator, marginal2)
        g1, g2 = marginal1.pdf0, marginal2.pdf0
        if check and not (max(g1, g2) <= self.lam * (1 + 1e-12) and self.lam <= (g1 + g2) * (1 + 1e-12)):
            raise RateDomainError(
                f"need max(g1(0), g2(0)) <= lambda <= g1(0) + g2(0); "
                f"got g1(0)={g1:g}, g2(0)={g2:g}, lambda={self.lam:g}"
            )

    def __repr__(self):
        return (
            f"PseudoWeakDistribution({self.generator!r}, {self.G1!r}, {self.G2!r}, "
            f"lam={self.lam!r})"
        )

    @property
    def density_is_exact(self) -> bool:
        return bool(self.generator.exact_derivatives and self.G1.exact and self.G2.exact)

    def swapped(self) -> "PseudoWeakDistribution":
        """The law of (Y, X)."""
        return PseudoWeakDistribution(self.generator, self.G2, self.G1, self.lam, check=False)

    # -- survival -------------------------------------------------------
    def base_survival(self, x, y):
        """G(x, y) = h^{-1}(F(x, y)), the undistorted standard solution."""
        x, y = np.broadcast_arrays(_arr(x), _arr(y))
        above = x >= y
        m = np.minimum(x, y)
        k = np.abs(x - y)
        ls = np.where(above, self.G1.logsf(k), self.G2.logsf(k))
        return np.exp(-self.lam * m + ls)

    def survival(self, x, y):
        return self.generator.h(self.base_survival(x, y))

    def __call__(self, x, y):
        return self.survival(x, y)

    # -- density --------------------------------------------------------
    def wedge_density(self, side: int, m, k):
        """Mixed partial at min = m and |x - y| = k > 0.

        side = 1 is the wedge x > y (marginal 1), side = 2 the wedge x < y.
        """
        G = self.G1 if side == 1 else self.G2
        m, k = np.broadcast_arrays(_arr(m), _arr(k))
        h = self.generator
        lam = self.lam
        a = np.exp(-lam * m)
        S = G.sf(k)
        g = G.pdf(k)
        gp = G.dpdf(k)
        A = a * S
        with np.errstate(invalid="ignore", over="ignore"):
            d2 = h.d2(A)
            term2 = np.where(g * (lam * S - g) == 0, 0.0, d2 * a * g * (lam * S - g))
            out = a * (term2 + h.d1(A) * (lam * g + gp))
        return out

    def density(self, x, y):
        """Absolutely continuous part of the law (off the diagonal)."""
        x, y = np.broadcast_arrays(_arr(x), _arr(y))
        if np.any(x == y):
            raise OnDiagonalError("density is not defined on x == y")
        above = x > y
        m = np.minimum(x, y)
        k = np.abs(x - y)
        return np.where(above, self.wedge_density(1, m, k), self.wedge_density(2, m, k))

    # -- singular component ---------------------------------------------
    def atom_mass(self) -> float:
        return (self.G1.pdf0 + self.G2.pdf0) / self.lam - 1.0

    def atom_tail(self, t):
        """P(X = Y, X >= t)."""
        return exp_h(self.generator, self.lam, t) * self.atom_mass()

    def wedge_masses(self) -> tuple[float, float]:
        """(P(X > Y), P(X < Y))."""
        return 1.0 - self.G1.pdf0 / self.lam, 1.0 - self.G2.pdf0 / self.lam

    # -- copulas --------------------------------------------------------
    def base_copula(self, a, b):
        """Survival copula of the undistorted standard solution."""
        a, b = np.broadcast_arrays(_arr(a), _arr(b))
        z1 = self.G1.isf(a)
        z2 = self.G2.isf(b)
        with np.errstate(invalid="ignore"):
            above = z1 >= z2
            val = np.where(
                above,
                np.exp(-self.lam * z2 + self.G1.logsf(np.abs(z1 - z2))),
                np.exp(-self.lam * z1 + self.G2.logsf(np.abs(z2 - z1))),
            )
        val = np.where((a <= 0) | (b <= 0), 0.0, val)
        return np.where(a >= 1, b, np.where(b >= 1, a, val))

    def copula(self, u, v):
        """Survival copula h(C_G(h^{-1}(u), h^{-1}(v)))."""
        g = self.generator
        return g.h(self.base_copula(g.inverse(u), g.inverse(v)))

    def copula_diagonal_deficit(self, s):
        """1 - C(1 - s, 1 - s), evaluated without cancellation."""
        g = self.generator
        c = g.inverse_complement(_arr(s))
        z1 = self.G1.isf_c(c)
        z2 = self.G2.isf_c(c)
        above = z1 >= z2
        lg = np.where(
            above,
            -self.lam * z2 + self.G1.logsf(np.abs(z1 - z2)),
            -self.lam * z1 + self.G2.logsf(np.abs(z2 - z1)),
        )
        return g.complement(-np.expm1(lg))


# ---------------------------------------------------------------------------


class MOTypeDistribution:
    """exp_h(lam1 x + lam2 y + lam0 max(x, y))."""

    def __init__(self, generator: Generator, lam1: float, lam2: float, lam0: float):
        self.generator = generator
        self.lam1, self.lam2, self.lam0 = float(lam1), float(lam2), float(lam0)
        self.gamma1 = self.lam1 + self.lam0
        self.gamma2 = self.lam2 + self.lam0
        self.lam = self.lam1 + self.lam2 + self.lam0

    def survival(self, x, y):
        x, y = _arr(x), _arr(y)
        t = self.lam1 * x + self.lam2 * y + self.lam0 * np.maximum(x, y)
        return self.generator.h(np.exp(-t))

    def as_weak(self) -> PseudoWeakDistribution:
        return PseudoWeakDistribution(
            self.generator, Exponential(self.gamma1), Exponential(self.gamma2), self.lam
        )


def mo_type(generator: Generator, lam1: float, lam2: float, lam0: float) -> MOTypeDistribution:
    """Pseudo Marshall-Olkin distribution with pseudo-exponential margins."""
    if min(lam1, lam2, lam0) < 0 or not (lam1 + lam0 > 0 and lam2 + lam0 > 0):
        raise RateDomainError("need lam_i >= 0 and lam_i + lam0 > 0")
    g1, g2 = lam1 + lam0, lam2 + lam0
    lam = lam1 + lam2 + lam0
    if not (0 < max(g1, g2) <= lam <= g1 + g2):
        raise RateDomainError("rates violate max(g1, g2) <= lambda <= g1 + g2")
    check = log_concavity_check(generator)
    if not check:
        raise InvalidGeneratorError(f"{generator!r}: h^-1 is not log-concave")
    return MOTypeDistribution(generator, lam1, lam2, lam0)


# ---------------------------------------------------------------------------
# Validity


@dataclass
class ValidityReport:
    verdict: str
    rate_condition: bool
    rate_margin: float
    density_min: float
    density_argmin: tuple[float, float]
    atom: float
    density_exact: bool
    diagnostics: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.verdict != "invalid"

    def to_lines(self) -> list[str]:
        x, y = self.density_argmin
        lines = [
            f"verdict={self.verdict}",
            f"rate_condition={'pass' if self.rate_condition else 'fail'}",
            f"rate_margin={self.rate_margin!r}",
            f"density_min={self.density_min!r}",
            f"density_argmin_x={x!r}",
            f"density_argmin_y={y!r}",
            f"density_mode={'closed_form' if self.density_exact else 'approximate'}",
            f"atom={self.atom!r}",
        ]
        for k, v in self.diagnostics.items():
            if isinstance(v, bool):
                v = "pass" if v else "fail"
            lines.append(f"{k}={v}")
        return lines


def _scan_axes(d: PseudoWeakDistribution, side: int, n: int):
    G = d.G1 if side == 1 else d.G2
    m_max = 40.0 / d.lam
    k_max = max(G.x_max(1e-14), 1e-3)
    m = np.concatenate([[0.0], np.geomspace(1e-9, m_max, n - 1)])
    k = np.geomspace(1e-9, k_max, n)
    return m, k


def _density_scan(d: PseudoWeakDistribution, n: int):
    best = (np.inf, (np.nan, np.nan))
    for side in (1, 2):
        m, k = _scan_axes(d, side, n)
        for _ in range(4):  # initial grid + 3 refinement passes
            M, K = np.meshgrid(m, k, indexing="ij")
            with np.errstate(all="ignore"):
                f = d.wedge_density(side, M, K)
            f = np.where(np.isnan(f), np.inf, f)
            i, j = np.unravel_index(np.argmin(f), f.shape)
            val = float(f[i, j])
            mm, kk = float(M[i, j]), float(K[i, j])
            if val < best[0]:
                xy = (mm + kk, mm) if side == 1 else (mm, mm + kk)
                best = (val, xy)
            # zoom around the minimiser
            i0, i1 = max(i - 1, 0), min(i + 1, m.size - 1)
            j0, j1 = max(j - 1, 0), min(j + 1, k.size - 1)
            m = np.linspace(m[i0], m[i1], n)
            k = np.geomspace(k[j0], k[j1], n) if k[j0] > 0 else np.linspace(k[j0], k[j1], n)
    return best


def validate(d: PseudoWeakDistribution, grid_n: int = 64) -> ValidityReport:
    """Grid certification of the validity system of the pseudo-weak law."""
    g1, g2 = d.G1.pdf0, d.G2.pdf0
    margin = (g1 + g2) - d.lam
    rate_ok = margin >= -1e-12 * max(1.0, d.lam)
    dmin, where = _density_scan(d, grid_n)
    dens_ok = dmin >= DENSITY_TOL
    verdict = "valid_on_grid" if (rate_ok and dens_ok) else "invalid"
    pplus, pminus = d.wedge_masses()
    diag = {
        "wedge_mass_above": pplus,
        "wedge_mass_below": pminus,
        "sigma_h_increasing": sigma_h_increasing(d.generator),
        "dCdu_increasing_in_v": _dcdu_increasing(d),
        "psi_increasing_in_v": _psi_increasing(d),
    }
    return ValidityReport(
        verdict=verdict,
        rate_condition=bool(rate_ok),
        rate_margin=float(margin),
        density_min=float(dmin),
        density_argmin=where,
        atom=float(d.atom_mass()),
        density_exact=d.density_is_exact,
        diagnostics=diag,
    )


def _dcdu_increasing(d: PseudoWeakDistribution, n: int = 40) -> bool:
    u = np.linspace(0.02, 0.98, n)
    v = np.linspace(0.02, 0.98, n)
    U, V = np.meshgrid(u, v, indexing="ij")
    h = 1e-6
    with np.errstate(all="ignore"):
        dC = (d.copula(U + h, V) - d.copula(U - h, V)) / (2 * h)
    return bool(np.all(np.diff(dC, axis=1) >= -1e-6))


def _psi_increasing(d: PseudoWeakDistribution, n: int = 40) -> bool:
    u = np.linspace(0.02, 0.98, n)
    v = np.linspace(0.02, 0.98, n)
    U, V = np.meshgrid(u, v, indexing="ij")
    h = 1e-6
    with np.errstate(all="ignore"):
        C = d.base_copula(U, V)
        psi = (d.base_copula(U + h, V) - d.base_copula(U - h, V)) / (2 * h) / C
    return bool(np.all(np.diff(psi, axis=1) >= -1e-6))


# ---------------------------------------------------------------------------
# Mass accounting


def wedge_mass_integral(d: PseudoWeakDistribution, side: int, tol: Tolerance | None = None) -> float:
    """Integral of the density over one wedge, in (min, |x - y|) coordinates.

    k = s / (1 - s) maps the difference axis onto [0, 1); the min axis is
    cut at 40 / lam, beyond which the remaining mass is below e^-40.
    """
    tol = tol or Tolerance(abs_tol=1e-9, rel_tol=1e-8)

    def inner(m: float) -> float:
        def f(s):
            s = np.asarray(s, dtype=float)
            ok = s < 1
            ss = np.where(ok, s, 0.5)
            k = ss / (1 - ss)
            with np.errstate(all="ignore"):
                val = d.wedge_density(side, m, k) / (1 - ss) ** 2
            return np.where(ok, np.nan_to_num(val), 0.0)

        return integrate(f, 0.0, 1.0, tol, vectorized=True)

    outer = lambda m: np.array([inner(float(x)) for x in np.atleast_1d(m)])  # noqa: E731
    return integrate(outer, 0.0, 40.0 / d.lam, tol, vectorized=True)


def total_mass(d: PseudoWeakDistribution, tol: Tolerance | None = None) -> float:
    """Both wedge integrals plus the diagonal atom; 1 for a valid law."""
    return wedge_mass_integral(d, 1, tol) + wedge_mass_integral(d, 2, tol) + d.atom_mass()


# ---------------------------------------------------------------------------
# Functional aliases


def survival_strong(d: PseudoStrongDistribution, x, y):
    return d.survival(x, y)


def strong_copula(d: PseudoStrongDistribution, u, v):
    return d.copula(u, v)


def survival_weak(d: PseudoWeakDistribution, x, y):
    return d.survival(x, y)


def density_weak(d: PseudoWeakDistribution, x, y):
    return d.density(x, y)


def atom_mass(d: PseudoWeakDistribution) -> float:
    return d.atom_mass()


def atom_tail(d: PseudoWeakDistribution, t):
    return d.atom_tail(t)


def weak_copula(d: PseudoWeakDistribution, u, v):
    return d.copula(u, v)
