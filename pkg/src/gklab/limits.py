"""Limiting laws and their self-decomposability data.

Two limit families arise: the standard normal and the mu-fold convolution
power of the Dickman law (the classical Dickman distribution at mu = 1).
Each is packaged with its CDF, quantile, a sampler, and the generating
triplet (c, v, L) of its self-decomposable representation, where L is the
spectral (Levy) function.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

EULER_GAMMA = 0.5772156649015328606

__all__ = [
    "EULER_GAMMA",
    "normal_cdf",
    "normal_quantile",
    "LevyFunction",
    "ZeroLevy",
    "DickmanLevy",
    "SelfDecompTriplet",
    "gaussian_triplet",
    "dickman_triplet",
    "gamma_tau",
    "DickmanCdf",
    "dickman_cdf",
    "dickman_quantile",
    "dickman_sample",
    "QuantileFn",
]


def normal_cdf(x: float) -> float:
    """Standard normal CDF, accurate in both tails."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


# Acklam's rational approximation, then Halley steps to machine precision.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)


def normal_quantile(p: float) -> float:
    """Inverse of the standard normal CDF.

    For p > 1/2 the reflection -quantile(1 - p) is used: 1 - p is exact
    there, and the lower-tail CDF keeps full relative accuracy for the
    polishing steps.
    """
    if not 0.0 < p < 1.0:
        if p == 0.0:
            return -math.inf
        if p == 1.0:
            return math.inf
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if p > 0.5:
        return -normal_quantile(1.0 - p)
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        x = ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
             / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    elif p <= 1.0 - p_low:
        q = p - 0.5
        r = q * q
        x = ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
             / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        x = -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
              / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    for _ in range(2):
        e = normal_cdf(x) - p
        u = e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
        x = x - u / (1.0 + 0.5 * x * u)
    return x


class LevyFunction:
    """Spectral function L on (0, inf), non-decreasing with L(inf) = 0."""

    def value(self, x: float) -> float:
        raise NotImplementedError

    def density(self, y: float) -> float:
        """dL/dy where it exists, else 0."""
        raise NotImplementedError

    def support_hi(self) -> float:
        """Right endpoint of the support of dL."""
        raise NotImplementedError


class ZeroLevy(LevyFunction):
    """L identically 0: no jump part (the Gaussian case)."""

    def value(self, x: float) -> float:
        return 0.0

    def density(self, y: float) -> float:
        return 0.0

    def support_hi(self) -> float:
        return 0.0


class DickmanLevy(LevyFunction):
    """L(x) = mu * ln(x) on (0, 1], L = 0 beyond 1."""

    def __init__(self, mu: float):
        if mu <= 0:
            raise ValueError(f"mu must be positive, got {mu!r}")
        self.mu = float(mu)

    def value(self, x: float) -> float:
        if x <= 0:
            raise ValueError("L is defined on (0, inf)")
        return self.mu * math.log(x) if x < 1.0 else 0.0

    def density(self, y: float) -> float:
        return self.mu / y if 0.0 < y <= 1.0 else 0.0

    def support_hi(self) -> float:
        return 1.0


@dataclass(frozen=True)
class SelfDecompTriplet:
    """Generating triplet (c, v, L): shift, Gaussian variance, spectral fn."""

    c: float
    v: float
    levy: LevyFunction


def gaussian_triplet() -> SelfDecompTriplet:
    """Standard normal: pure Gaussian part."""
    return SelfDecompTriplet(c=0.0, v=1.0, levy=ZeroLevy())


def dickman_triplet(mu: float) -> SelfDecompTriplet:
    """mu-convolution power of the Dickman law: c = pi*mu/4, no Gaussian part.

    c comes from integrating y/(1+y^2) against dL = mu/y dy over (0, 1].
    """
    return SelfDecompTriplet(c=math.pi * mu / 4.0, v=0.0, levy=DickmanLevy(mu))


def gamma_tau(levy: LevyFunction, tau: float, tol: float = 1e-10) -> float:
    """Centering correction at threshold tau.

    gamma_tau = int_0^tau y^3/(1+y^2) dL(y) - int_tau^inf y/(1+y^2) dL(y).
    For dL = mu/y dy on (0, 1] this satisfies c + gamma_tau = mu*min(tau, 1).
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    hi = levy.support_hi()
    inner_hi = min(tau, hi)
    inner = 0.0
    if inner_hi > 0:
        inner, _ = quad(lambda y: y**3 / (1.0 + y * y) * levy.density(y),
                        0.0, inner_hi, epsabs=tol, epsrel=tol)
    outer = 0.0
    if hi > tau:
        outer, _ = quad(lambda y: y / (1.0 + y * y) * levy.density(y),
                        tau, hi, epsabs=tol, epsrel=tol)
    return inner - outer


class DickmanCdf:
    """CDF of the mu-fold Dickman convolution power on a fine grid.

    The density obeys x f(x) = mu * int_{x-1}^{x} f(t) dt with the closed
    form f(x) = e^{-mu*gamma} / Gamma(mu) * x^{mu-1} on (0, 1].  Beyond 1
    the delay equation is stepped by an implicit trapezoid rule on a grid
    aligned to the unit delay.
    """

    def __init__(self, mu: float, step: float = 1e-4, x_hi: float = 40.0):
        if mu <= 0:
            raise ValueError(f"mu must be positive, got {mu!r}")
        self.mu = float(mu)
        self.step = float(step)
        n_unit = int(round(1.0 / step))
        if abs(n_unit * step - 1.0) > 1e-12:
            raise ValueError("step must divide the unit delay exactly")
        self._n_unit = n_unit
        self._build(x_hi)

    def _build(self, x_hi: float) -> None:
        mu, h, n_unit = self.mu, self.step, self._n_unit
        n = int(round(x_hi / h))
        x = np.arange(n + 1) * h
        f = np.zeros(n + 1)
        F = np.zeros(n + 1)
        amp = math.exp(-mu * EULER_GAMMA) / math.gamma(mu)
        with np.errstate(divide="ignore"):
            on_unit = x[1 : n_unit + 1]
            f[1 : n_unit + 1] = amp * on_unit ** (mu - 1.0)
            F[1 : n_unit + 1] = amp / mu * on_unit**mu
        if mu >= 1.0:
            f[0] = amp if mu == 1.0 else 0.0
        # block (1, 2]: the delay equation is a linear ODE with known
        # inhomogeneity (F on (0, 1] is closed form); the integrating
        # factor x^-mu reduces F to a fast-converging power series,
        # sidestepping the f' singularity at x = 1+
        F1 = amp / mu
        i2 = min(2 * n_unit, n)
        if i2 > n_unit:
            xs = x[n_unit + 1 : i2 + 1]
            a = (xs - 1.0) / xs
            n_terms = max(8, int(math.ceil(-60.0 / math.log2(float(a[-1])))))
            expo = mu + 1.0 + np.arange(n_terms)
            integral = (a[:, None] ** expo / expo).sum(axis=1)
            F[n_unit + 1 : i2 + 1] = xs**mu * (F1 - amp * integral)
            f[n_unit + 1 : i2 + 1] = (mu / xs) * (
                F[n_unit + 1 : i2 + 1] - (amp / mu) * (xs - 1.0) ** mu
            )
        # beyond 2: implicit trapezoid on x f(x) = mu (F(x) - F(x-1))
        for i in range(i2 + 1, n + 1):
            xi = x[i]
            rhs = mu * (F[i - 1] + 0.5 * h * f[i - 1] - F[i - n_unit])
            f[i] = rhs / (xi - 0.5 * mu * h)
            F[i] = F[i - 1] + 0.5 * h * (f[i - 1] + f[i])
        self.x = x
        self.f = f
        self.F = F
        self.x_hi = x[-1]

    def total_mass_defect(self) -> float:
        return abs(1.0 - float(self.F[-1]))

    def validate(self, tol: float = 1e-8) -> None:
        defect = self.total_mass_defect()
        if defect > tol:
            raise RuntimeError(
                f"Dickman CDF for mu={self.mu:g} integrates to "
                f"{float(self.F[-1])!r} on [0, {self.x_hi:g}]; "
                f"mass defect {defect:.3e} exceeds {tol:g}"
            )

    def cdf(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        if x <= 1.0:
            amp = math.exp(-self.mu * EULER_GAMMA) / math.gamma(self.mu + 1.0)
            return min(amp * x**self.mu, 1.0)
        if x >= self.x_hi:
            return 1.0
        i = int(x / self.step)
        w = (x - self.x[i]) / self.step
        return min(float((1.0 - w) * self.F[i] + w * self.F[i + 1]), 1.0)

    def quantile(self, p: float, tol: float = 1e-9) -> float:
        if not 0.0 <= p < 1.0:
            raise ValueError(f"p must lie in [0, 1), got {p!r}")
        if p == 0.0:
            return 0.0
        while p > float(self.F[-1]):
            self._build(2.0 * self.x_hi)
        i = int(np.searchsorted(self.F, p, side="left"))
        lo = float(self.x[max(i - 1, 0)])
        hi = float(self.x[i])
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) < p:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


@functools.lru_cache(maxsize=16)
def _dickman_table(mu: float) -> DickmanCdf:
    table = DickmanCdf(mu)
    table.validate()
    return table


def dickman_cdf(x: float, mu: float = 1.0) -> float:
    """CDF of the mu-fold Dickman convolution power."""
    return _dickman_table(float(mu)).cdf(x)


def dickman_quantile(p: float, mu: float = 1.0) -> float:
    """Quantile of the mu-fold Dickman convolution power."""
    return _dickman_table(float(mu)).quantile(p)


def dickman_sample(mu: float, n_samples: int, seed: int,
                   burn_in: int = 1000) -> np.ndarray:
    """Samples via the perpetuity W = U^{1/mu} (1 + W), U uniform.

    The recursion is geometrically ergodic; ``burn_in`` iterations from
    W = 0 leave a bias below machine precision.  Mean is mu.
    """
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu!r}")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    w = np.zeros(n_samples, dtype=np.float64)
    inv_mu = 1.0 / mu
    for _ in range(burn_in):
        u = rng.random(n_samples)
        w = u**inv_mu * (1.0 + w)
    return w


@dataclass(frozen=True)
class QuantileFn:
    """A limit law packaged as (cdf, ppf) with the error-level map q."""

    name: str
    cdf: object
    ppf: object

    def q(self, epsilon: float) -> float:
        """Quantile at level 1 - epsilon^2."""
        if not 0.0 < epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
        return self.ppf(1.0 - epsilon * epsilon)

    @classmethod
    def normal(cls) -> "QuantileFn":
        return cls(name="normal", cdf=normal_cdf, ppf=normal_quantile)

    @classmethod
    def dickman(cls, mu: float) -> "QuantileFn":
        return cls(
            name=f"dickman(mu={mu:g})",
            cdf=lambda x, _m=mu: dickman_cdf(x, _m),
            ppf=lambda p, _m=mu: dickman_quantile(p, _m),
        )
