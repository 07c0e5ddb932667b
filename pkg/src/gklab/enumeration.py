"""Exact complexity and error sequence via ordered product-eigenvalue enumeration.

The d-variate spectrum is the multiset of products
prod_j (1 - omega_j) * omega_j**(k_j - 1) over multi-indices k in N^d.
A best-first frontier search on the lattice emits them in non-increasing
order; each multi-index is generated exactly once from the parent that
incremented its lowest non-1 coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import CapacityError
from .spectrum import OmegaVector

DEFAULT_CAP = 10_000_000

__all__ = [
    "DEFAULT_CAP",
    "EigenIndex",
    "ComplexityResult",
    "enumerate_top",
    "exact_complexity",
    "average_error",
]


@dataclass(frozen=True)
class EigenIndex:
    """One product eigenvalue: its multi-index and log value ln(lambda)."""

    multi_index: tuple
    log_value: float

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


@dataclass(frozen=True)
class ComplexityResult:
    """Either an exact n or a bracketed ln-n estimate.

    mode 'exact': ``n`` is the minimal rank with top-n mass >= 1 - eps^2.
    mode 'convolution': ``ln_n_bracket = (lo, hi)`` encloses ln n.
    """

    epsilon: float
    mode: str
    n: int | None = None
    ln_n_bracket: tuple | None = None
    achieved_cumulative_mass: float = float("nan")
    note: str = ""

    def __post_init__(self):
        if self.mode == "exact":
            if self.n is None or self.n < 1:
                raise ValueError("exact mode requires n >= 1")
        elif self.mode == "convolution":
            if self.ln_n_bracket is None or self.ln_n_bracket[0] > self.ln_n_bracket[1]:
                raise ValueError("convolution mode requires a bracket with lo <= hi")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def ln_n(self) -> float:
        """ln n (exact) or the bracket midpoint."""
        if self.mode == "exact":
            return math.log(self.n)
        return 0.5 * (self.ln_n_bracket[0] + self.ln_n_bracket[1])


def _run(omega: OmegaVector, count_target=-1, mass_target=-1.0,
         cap=DEFAULT_CAP, want_indices=False):
    y, mass, hit_cap, indices = backend.enumerate_products(
        np.ascontiguousarray(omega.log_omegas_abs),
        omega.largest_log_eigenvalue_abs(),
        int(count_target),
        float(mass_target),
        int(cap),
        bool(want_indices),
    )
    if hit_cap:
        raise CapacityError(cap, emitted=len(y))
    return y, mass, indices


def enumerate_top(omega: OmegaVector, count: int | None = None,
                  mass: float | None = None, cap: int = DEFAULT_CAP):
    """The top eigenvalues, largest first, until a stop rule holds.

    Exactly one of ``count`` (emit that many) or ``mass`` (emit until the
    cumulative eigenvalue mass reaches the target) must be given.  Ties
    between equal eigenvalues are returned in lexicographic multi-index
    order.
    """
    if (count is None) == (mass is None):
        raise ValueError("give exactly one of count= or mass=")
    if count is not None and count < 1:
        raise ValueError("count must be >= 1")
    if mass is not None and not 0.0 < mass < 1.0:
        raise ValueError("mass target must lie in (0, 1)")

    y, _, indices = _run(
        omega,
        count_target=-1 if count is None else count,
        mass_target=-1.0 if mass is None else mass,
        cap=cap,
        want_indices=True,
    )
    items = [
        EigenIndex(multi_index=tuple(int(v) for v in indices[r]), log_value=-y[r])
        for r in range(len(y))
    ]
    # deterministic tie order: stable sort runs of equal log-values
    lo = 0
    for hi in range(1, len(items) + 1):
        if hi == len(items) or items[hi].log_value != items[lo].log_value:
            if hi - lo > 1:
                items[lo:hi] = sorted(items[lo:hi], key=lambda e: e.multi_index)
            lo = hi
    return items


def exact_complexity(omega: OmegaVector, epsilon: float,
                     cap: int = DEFAULT_CAP) -> ComplexityResult:
    """Minimal n whose top-n eigenvalue mass reaches 1 - epsilon^2."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    target = 1.0 - epsilon * epsilon
    y, mass, _ = _run(omega, mass_target=target, cap=cap)
    return ComplexityResult(
        epsilon=epsilon,
        mode="exact",
        n=len(y),
        achieved_cumulative_mass=mass,
    )


def average_error(omega: OmegaVector, n: int, cap: int = DEFAULT_CAP) -> float:
    """Normalized 2-average error after the n best terms: sqrt(tail mass)."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n!r}")
    if n == 0:
        return 1.0
    _, mass, _ = _run(omega, count_target=n, cap=cap)
    return math.sqrt(max(1.0 - mass, 0.0))
