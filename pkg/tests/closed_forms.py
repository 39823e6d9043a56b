"""Closed-form Kendall functions transcribed from the worked examples.

Each takes the evaluation grid t plus the model parameters and is compared
against the generic assembly K(s) = s - H(h^{-1}(s)).
"""
import numpy as np


def k_exponential_generic(t, hinv, hprime, a1, a2, lam):
    v = hinv(t)
    return t - hprime(v) * v * (2 * np.log(v) - (a1 + a2) / lam * np.log(v))


def k_mo(t, a1, a2, lam):
    return t * (1 - np.log(t) * (2 - (a1 + a2) / lam))


def k_recip_exp_exponential(t, gamma, a1, a2, lam):
    lt = np.log(t)
    return t * (1 - (gamma - lt) * ((a1 + a2 - 2 * lam) / lam * np.log(1 - lt / gamma)))


def k_exp_ratio_exponential(t, gamma, a1, a2, lam):
    c = np.expm1(gamma)
    q = 1 + t * c
    return t + q * np.log(q) * (a1 + a2 - 2 * lam) / (lam * c) * (np.log(np.log(q)) - np.log(gamma))


def k_pareto_generic(t, hinv, hprime, a1, a2, lam):
    v = hinv(t)
    J = a1**2 * (1 - v ** (1 / a1)) + a2**2 * (1 - v ** (1 / a2))
    return t - hprime(v) * v * (2 * np.log(v) + J / lam)


def k_pareto_identity(t, a1, a2, lam):
    return t * (1 - 2 * np.log(t) - (a1**2 * (1 - t ** (1 / a1)) + a2**2 * (1 - t ** (1 / a2))) / lam)


def k_recip_exp_pareto(t, gamma, a1, a2, lam):
    lt = np.log(t)
    r = 1 - lt / gamma
    inner = (
        a1**2 * (1 - r ** (-1 / a1)) / lam
        + a2**2 * (1 - r ** (-1 / a2)) / lam
        - 2 * np.log(r)
    )
    return t * (1 - (gamma - lt) * inner)


def k_gompertz_generic(t, hinv, hprime, xi1, b1, xi2, b2, lam):
    v = hinv(t)
    J = (xi1 - 1) * b1 * (1 - v) - b1 * np.log(v) + (xi2 - 1) * b2 * (1 - v) - b2 * np.log(v)
    return t - hprime(v) * v * (2 * np.log(v) + J / lam)


def k_gompertz_identity(t, xi1, b1, xi2, b2, lam):
    return t * (
        1 + np.log(t) / lam * (b1 + b2 - 2 * lam) + (1 - t) / lam * (b1 * (1 - xi1) + b2 * (1 - xi2))
    )


def k_gompertz_recip_exp(t, gamma, xi1, b1, xi2, b2, lam):
    lt = np.log(t)
    first = lt * (b2 * (xi2 - 1) + b1 * (xi1 - 1)) / (lt - gamma)
    second = (b2 + b1 - 2 * lam) * np.log(1 - lt / gamma)
    return t * (1 - (first + second) * (gamma - lt) / lam)


def k_exp_complement_pareto(t, theta, beta, gamma, lam):
    c = np.expm1(theta)
    q = c * (1 - t) ** (1 / beta) + 1
    w = 1 - np.log(q) / theta
    pre = beta * theta * w * q * (1 - t) ** ((beta - 1) / beta) / c
    return t - pre * (2 * gamma**2 / lam * (1 - w ** (1 / gamma)) + 2 * np.log(w))
