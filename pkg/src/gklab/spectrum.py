"""Univariate spectrum of the Gaussian-kernel covariance operator.

Each length scale sigma determines a geometric eigenvalue sequence
lambda_k = (1 - omega) * omega**(k-1) with ratio

    omega = (1 + (sigma^2/2) * (1 + sqrt(1 + 4/sigma^2)))**-1.

The module also generates the length-scale sequences used by the
asymptotic scenarios (constant, power law, j*log j, explicit list).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

__all__ = [
    "SigmaSequence",
    "OmegaVector",
    "omega_from_sigma",
    "univariate_eigenvalue",
    "univariate_tail",
    "generate_sigmas",
]


def omega_from_sigma(sigma: float) -> float:
    """Geometric ratio of the eigenvalue sequence for length scale ``sigma``.

    Uses the rearranged form 2 / (2 + s^2 + sqrt(s^4 + 4 s^2)), which avoids
    cancellation as sigma -> 0 (where omega -> 1).
    """
    if not (isinstance(sigma, (int, float)) and math.isfinite(sigma)) or sigma <= 0:
        raise ValueError(f"sigma must be a positive finite real, got {sigma!r}")
    s2 = float(sigma) * float(sigma)
    return 2.0 / (2.0 + s2 + math.sqrt(s2 * s2 + 4.0 * s2))


def _omega_from_sigma_arr(sigmas: np.ndarray) -> np.ndarray:
    s2 = np.asarray(sigmas, dtype=np.float64) ** 2
    return 2.0 / (2.0 + s2 + np.sqrt(s2 * s2 + 4.0 * s2))


def univariate_eigenvalue(omega: float, k: int) -> float:
    """k-th largest eigenvalue (1 - omega) * omega**(k-1), k >= 1."""
    if not 0.0 < omega < 1.0:
        raise ValueError(f"omega must lie in (0, 1), got {omega!r}")
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return (1.0 - omega) * omega ** (k - 1)


def univariate_tail(omega: float, n: int) -> float:
    """Mass of all eigenvalues after the n largest ones: omega**n."""
    if not 0.0 < omega < 1.0:
        raise ValueError(f"omega must lie in (0, 1), got {omega!r}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n!r}")
    return omega**n


@dataclass(frozen=True)
class SigmaSequence:
    """Specification of the length-scale sequence (sigma_j).

    kinds:
      constant  -- sigma_j = sigma
      power     -- sigma_j^2 = beta * j**alpha (exact equality)
      jlogj     -- sigma_j^2 = beta * j * ln(j+1)
      explicit  -- a finite list of positive reals
    """

    kind: str
    sigma: float | None = None
    alpha: float | None = None
    beta: float | None = None
    values: tuple = field(default=())

    def __post_init__(self):
        if self.kind == "constant":
            if self.sigma is None or self.sigma <= 0:
                raise ConfigError("constant kind requires sigma > 0")
        elif self.kind == "power":
            if self.alpha is None or self.alpha <= 0:
                raise ConfigError("power kind requires alpha > 0")
            if self.beta is None or self.beta <= 0:
                raise ConfigError("power kind requires beta > 0")
        elif self.kind == "jlogj":
            if self.beta is None or self.beta <= 0:
                raise ConfigError("jlogj kind requires beta > 0")
        elif self.kind == "explicit":
            if not self.values:
                raise ConfigError("explicit kind requires a non-empty list of values")
            if any(v <= 0 or not math.isfinite(v) for v in self.values):
                raise ConfigError("explicit sigma values must be positive finite reals")
        else:
            raise ConfigError(f"unknown sigma sequence kind {self.kind!r}")

    @classmethod
    def constant(cls, sigma: float) -> "SigmaSequence":
        return cls(kind="constant", sigma=float(sigma))

    @classmethod
    def power(cls, alpha: float, beta: float) -> "SigmaSequence":
        return cls(kind="power", alpha=float(alpha), beta=float(beta))

    @classmethod
    def jlogj(cls, beta: float) -> "SigmaSequence":
        return cls(kind="jlogj", beta=float(beta))

    @classmethod
    def explicit(cls, values) -> "SigmaSequence":
        return cls(kind="explicit", values=tuple(float(v) for v in values))

    def generate(self, d: int) -> np.ndarray:
        """First d length scales sigma_1, ..., sigma_d."""
        if d < 1:
            raise ConfigError(f"d must be a positive integer, got {d!r}")
        j = np.arange(1, d + 1, dtype=np.float64)
        if self.kind == "constant":
            return np.full(d, self.sigma, dtype=np.float64)
        if self.kind == "power":
            return np.sqrt(self.beta * j**self.alpha)
        if self.kind == "jlogj":
            return np.sqrt(self.beta * j * np.log(j + 1.0))
        if len(self.values) < d:
            raise ConfigError(
                f"explicit sigma list has {len(self.values)} entries, need d={d}"
            )
        return np.asarray(self.values[:d], dtype=np.float64)


def generate_sigmas(spec: SigmaSequence, d: int) -> np.ndarray:
    return spec.generate(d)


@dataclass(frozen=True)
class OmegaVector:
    """Per-dimension geometric ratios with their precomputed logarithms.

    log_omegas_abs[j]    = |ln omega_j|
    log_one_minus_abs[j] = |ln (1 - omega_j)|
    """

    omegas: np.ndarray
    log_omegas_abs: np.ndarray
    log_one_minus_abs: np.ndarray

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=np.float64)
        if om.ndim != 1 or om.size == 0:
            raise ValueError("omegas must be a non-empty 1-d array")
        if not np.all((om > 0.0) & (om < 1.0)):
            raise ValueError("every omega must lie strictly inside (0, 1)")

    @property
    def d(self) -> int:
        return int(self.omegas.shape[0])

    @classmethod
    def from_omegas(cls, omegas) -> "OmegaVector":
        om = np.asarray(omegas, dtype=np.float64)
        if om.ndim == 0:
            om = om.reshape(1)
        if om.size == 0 or not np.all((om > 0.0) & (om < 1.0)):
            raise ValueError("every omega must lie strictly inside (0, 1)")
        return cls(
            omegas=om,
            log_omegas_abs=-np.log(om),
            log_one_minus_abs=-np.log1p(-om),
        )

    @classmethod
    def from_sigmas(cls, sigmas) -> "OmegaVector":
        return cls.from_omegas(_omega_from_sigma_arr(np.atleast_1d(sigmas)))

    @classmethod
    def from_spec(cls, spec: SigmaSequence, d: int) -> "OmegaVector":
        return cls.from_sigmas(spec.generate(d))

    def largest_log_eigenvalue_abs(self) -> float:
        """|ln lambda_1| of the product operator: sum_j |ln(1 - omega_j)|."""
        return float(np.sum(self.log_one_minus_abs))
