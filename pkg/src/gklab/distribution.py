"""Binned spectral distribution on the log-eigenvalue axis.

A product eigenvalue lambda sits at x = |ln lambda|.  The measure built
here carries, per bin of width delta, both the eigenvalue MASS (sums of
lambda) and the eigenvalue COUNT (kept in the log domain; counts reach
e^{a_d} and overflow floats long before d gets interesting).  Mass and
count stay aligned bin-for-bin because both are produced by the same
direct d-fold convolution.

Bin attribution uses floor(position/delta) per dimension, so a point's
binned position understates its true position by less than d*delta; the
bracket logic in ``log_complexity_estimate`` accounts for exactly that.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .enumeration import ComplexityResult
from .errors import RangeError
from .spectrum import OmegaVector

DEFAULT_BIN_WIDTH = 1e-3
TRUNCATION_BUDGET = 1e-15

__all__ = [
    "DEFAULT_BIN_WIDTH",
    "LogSpectralMeasure",
    "CenteredSummandLaw",
    "build_measure",
    "gd_value",
    "log_complexity_estimate",
    "sample_gd",
    "EmpiricalCdf",
]


@dataclass
class LogSpectralMeasure:
    """Binned mass and log-count of the spectrum on the |ln lambda| axis."""

    origin: float
    bin_width: float
    mass: np.ndarray
    log_count: np.ndarray
    n_dims: int
    truncation_tail: float
    dropped_mass: float
    dropped_log_count: float
    _cum_mass: np.ndarray | None = field(default=None, repr=False)
    _cum_log_count: np.ndarray | None = field(default=None, repr=False)

    @property
    def n_bins(self) -> int:
        return int(self.mass.shape[0])

    @property
    def x_max(self) -> float:
        return self.origin + self.n_bins * self.bin_width

    @property
    def total_mass(self) -> float:
        return float(self.cumulative_mass[-1])

    @property
    def truncated_mass_bound(self) -> float:
        """Upper bound on eigenvalue mass missing from the array."""
        return self.truncation_tail + self.dropped_mass

    @property
    def cumulative_mass(self) -> np.ndarray:
        if self._cum_mass is None:
            self._cum_mass = np.cumsum(self.mass)
        return self._cum_mass

    @property
    def cumulative_log_count(self) -> np.ndarray:
        if self._cum_log_count is None:
            self._cum_log_count = np.logaddexp.accumulate(self.log_count)
        return self._cum_log_count

    def copy(self) -> "LogSpectralMeasure":
        return LogSpectralMeasure(
            origin=self.origin,
            bin_width=self.bin_width,
            mass=self.mass.copy(),
            log_count=self.log_count.copy(),
            n_dims=self.n_dims,
            truncation_tail=self.truncation_tail,
            dropped_mass=self.dropped_mass,
            dropped_log_count=self.dropped_log_count,
        )

    def to_csv(self, path_or_file) -> None:
        """Write columns x_left, mass, log_count (only occupied bins)."""
        own = isinstance(path_or_file, (str, bytes))
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x_left", "mass", "log_count"])
            occupied = np.nonzero((self.mass > 0) | (self.log_count > -np.inf))[0]
            for i in occupied:
                w.writerow([
                    repr(self.origin + i * self.bin_width),
                    repr(float(self.mass[i])),
                    repr(float(self.log_count[i])),
                ])
        finally:
            if own:
                fh.close()


@dataclass(frozen=True)
class CenteredSummandLaw:
    """Law of one centered summand: P(k * lattice_step) = (1-omega) omega^k.

    ``probs[k]`` covers k = 0..k_max; ``truncation_tail = omega^(k_max+1)``
    is the mass beyond the truncation.
    """

    lattice_step: float
    probs: np.ndarray
    truncation_tail: float

    @classmethod
    def from_omega(cls, omega: float, tail_budget: float) -> "CenteredSummandLaw":
        if not 0.0 < omega < 1.0:
            raise ValueError(f"omega must lie in (0, 1), got {omega!r}")
        step = -math.log(omega)
        # smallest k_max with omega^(k_max+1) < tail_budget
        k_max = max(0, int(math.ceil(math.log(tail_budget) / math.log(omega))) - 1)
        while omega ** (k_max + 1) >= tail_budget:
            k_max += 1
        k = np.arange(k_max + 1, dtype=np.float64)
        return cls(
            lattice_step=step,
            probs=(1.0 - omega) * omega**k,
            truncation_tail=omega ** (k_max + 1),
        )


def build_measure(omega: OmegaVector, bin_width: float = DEFAULT_BIN_WIDTH,
                  x_max: float | None = None, snapshot_dims=None):
    """d-fold binned convolution of the per-dimension log-spectra.

    The result approximates the distribution of sum_j U_j where
    P(U_j = |ln lambda_{sigma_j,k}|) = lambda_{sigma_j,k} (raw scale:
    a_d = 0, b_d = 1; centering is applied at query time).

    ``snapshot_dims``, when given, returns a dict {d: measure} with copies
    taken after convolving the first d dimensions (d = omega.d included
    automatically).
    """
    if bin_width <= 0:
        raise ValueError(f"bin_width must be positive, got {bin_width!r}")
    d = omega.d
    offset_total = omega.largest_log_eigenvalue_abs()
    if x_max is None:
        x_max = _default_x_max(omega)
    if x_max <= offset_total:
        raise RangeError(
            f"x_max={x_max:g} must exceed the position of the largest "
            f"eigenvalue, {offset_total:g}; increase x_max"
        )

    n_bins = int(math.ceil(x_max / bin_width)) + 1
    mass = np.zeros(n_bins, dtype=np.float64)
    log_count = np.full(n_bins, -np.inf, dtype=np.float64)
    mass[0] = 1.0
    log_count[0] = 0.0

    snapshots = {}
    wanted = set(int(s) for s in snapshot_dims) if snapshot_dims else set()

    tail_budget = TRUNCATION_BUDGET / d
    truncation = 0.0
    dropped_mass = 0.0
    dropped_lc = -np.inf
    support_hi = 1

    for j in range(d):
        w = float(omega.omegas[j])
        law = CenteredSummandLaw.from_omega(w, tail_budget)
        positions = omega.log_one_minus_abs[j] + law.lattice_step * np.arange(
            len(law.probs), dtype=np.float64
        )
        shifts = np.floor(positions / bin_width).astype(np.int64)
        mass, log_count, drop_m, drop_lc = backend.convolve_lattice(
            mass, log_count, shifts, np.ascontiguousarray(law.probs), support_hi
        )
        truncation += law.truncation_tail
        # counts already dropped get multiplied by this dimension's k_max+1
        # lattice points; masses dropped earlier can only move right, so the
        # running total remains a valid bound
        if dropped_lc > -np.inf:
            dropped_lc = dropped_lc + math.log(len(law.probs))
        dropped_lc = np.logaddexp(dropped_lc, drop_lc)
        dropped_mass += drop_m
        support_hi = min(n_bins, support_hi + int(shifts[-1]) + 1)

        if (j + 1) in wanted or (snapshot_dims is not None and j + 1 == d):
            m = LogSpectralMeasure(
                origin=0.0,
                bin_width=bin_width,
                mass=mass.copy(),
                log_count=log_count.copy(),
                n_dims=j + 1,
                truncation_tail=truncation,
                dropped_mass=dropped_mass,
                dropped_log_count=float(dropped_lc),
            )
            snapshots[j + 1] = m

    if snapshot_dims is not None:
        return snapshots
    return LogSpectralMeasure(
        origin=0.0,
        bin_width=bin_width,
        mass=mass,
        log_count=log_count,
        n_dims=d,
        truncation_tail=truncation,
        dropped_mass=dropped_mass,
        dropped_log_count=float(dropped_lc),
    )


def _default_x_max(omega: OmegaVector) -> float:
    """Generous range: mean position plus ten standard deviations."""
    om = omega.omegas
    mean = float(
        np.sum(omega.log_omegas_abs * om / (1.0 - om) + omega.log_one_minus_abs)
    )
    var = float(np.sum(omega.log_omegas_abs**2 * om / (1.0 - om) ** 2))
    return mean + 10.0 * math.sqrt(var) + 1.0


def gd_value(measure: LogSpectralMeasure, a_d: float, b_d: float, x: float) -> float:
    """Accumulated eigenvalue mass of bins with |ln lambda| <= a_d + b_d*x."""
    if b_d <= 0:
        raise ValueError(f"b_d must be positive, got {b_d!r}")
    t = a_d + b_d * x - measure.origin
    if t < 0:
        return 0.0
    idx = int(math.floor(t / measure.bin_width))
    if idx >= measure.n_bins:
        return float(measure.cumulative_mass[-1])
    return float(measure.cumulative_mass[idx])


def log_complexity_estimate(measure: LogSpectralMeasure,
                            epsilon: float) -> ComplexityResult:
    """Bracketed ln n from the binned measure.

    Finds the first bin where accumulated mass reaches 1 - eps^2, then
    brackets ln n by the accumulated log-counts d bins to either side
    (the maximal positional mis-attribution is d * bin_width).
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    thr = 1.0 - epsilon * epsilon
    cum = measure.cumulative_mass
    if cum[-1] < thr:
        raise RangeError(
            f"measure holds total mass {cum[-1]:.6g} < 1 - eps^2 = {thr:.6g}; "
            f"rebuild with x_max larger than {measure.x_max:g}"
        )
    i_star = int(np.searchsorted(cum, thr, side="left"))
    d = measure.n_dims
    clc = measure.cumulative_log_count

    lo_idx = i_star - d
    lo = float(clc[lo_idx]) if lo_idx >= 0 else -np.inf
    lo = max(lo, 0.0)  # n >= 1 always

    hi_idx = i_star + d
    if hi_idx < measure.n_bins:
        hi = float(clc[hi_idx])
    else:
        hi = float(np.logaddexp(clc[-1], measure.dropped_log_count))
    hi = max(hi, lo)

    return ComplexityResult(
        epsilon=epsilon,
        mode="convolution",
        ln_n_bracket=(lo, hi),
        achieved_cumulative_mass=float(cum[i_star]),
    )


@dataclass(frozen=True)
class EmpiricalCdf:
    """Empirical CDF backed by a sorted sample array."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def __call__(self, x) -> float | np.ndarray:
        return np.searchsorted(self.values, x, side="right") / self.n

    def ks_distance(self, cdf) -> float:
        """max |F_n(x) - cdf(x)| over points strictly between sample values.

        Evaluating between observed values keeps the comparison meaningful
        for discrete laws: both step functions are flat there, so atom
        boundaries (where right-continuity conventions differ) are avoided.
        """
        uniq, counts = np.unique(self.values, return_counts=True)
        cum = np.cumsum(counts) / self.n
        if len(uniq) > 1:
            mids = 0.5 * (uniq[:-1] + uniq[1:])
        else:
            mids = np.empty(0)
        xs = np.concatenate(([uniq[0] - 1.0], mids, [uniq[-1] + 1.0]))
        fn = np.concatenate(([0.0], cum[:-1], [1.0]))
        F = np.asarray([cdf(x) for x in xs], dtype=np.float64)
        return float(np.max(np.abs(fn - F)))


def sample_gd(omega: OmegaVector, n_samples: int, seed: int,
              shard_size: int = 1 << 16) -> EmpiricalCdf:
    """Monte Carlo samples of sum_j hat{U}_j (centered summands).

    Each summand is (G_j - 1) * |ln omega_j| with G_j geometric on {1,2,...}
    with success probability 1 - omega_j.  Shards draw from sub-seeds so the
    merged sample is independent of shard scheduling.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    n_shards = (n_samples + shard_size - 1) // shard_size
    children = np.random.SeedSequence(seed).spawn(n_shards)
    steps = omega.log_omegas_abs
    probs = 1.0 - omega.omegas
    chunks = []
    remaining = n_samples
    for ss in children:
        m = min(shard_size, remaining)
        remaining -= m
        rng = np.random.default_rng(ss)
        total = np.zeros(m, dtype=np.float64)
        for p, s in zip(probs, steps):
            total += (rng.geometric(p, size=m) - 1) * s
        chunks.append(total)
    values = np.sort(np.concatenate(chunks))
    return EmpiricalCdf(values=values)
