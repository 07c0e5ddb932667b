"""Normalization sequences, boundedness criteria, and limit-law conditions.

For the structured length-scale scenarios the log-complexity admits
ln n = a_d + q(eps) b_d + o(b_d) with an explicit limit law; this module
produces the (a_d, b_d, law) plan per scenario, decides boundedness of the
complexity, and evaluates the three necessary-and-sufficient conditions
(A), (B), (C) that tie the spectrum to a self-decomposable limit with
triplet (c, v, L).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .limits import (
    QuantileFn,
    SelfDecompTriplet,
    dickman_triplet,
    gamma_tau,
    gaussian_triplet,
)
from .spectrum import OmegaVector, SigmaSequence, omega_from_sigma

__all__ = [
    "NormalizationPlan",
    "normalization_plan",
    "predicted_log_complexity",
    "BoundednessVerdict",
    "boundedness_criterion",
    "hat_a_d",
    "condition_A",
    "condition_B",
    "condition_C",
    "cutoff_index",
    "lemma1_verify",
    "ConditionRow",
    "ConditionReport",
    "condition_report",
]


@dataclass(frozen=True)
class NormalizationPlan:
    """Centering a_d, scaling b_d, and the limit law for one scenario."""

    scenario: str
    law: QuantileFn
    triplet: SelfDecompTriplet
    params: dict = field(default_factory=dict)

    def a_d(self, d: int) -> float:
        if d < 1:
            raise ValueError(f"d must be a positive integer, got {d!r}")
        if self.scenario == "jlogj":
            return 0.0
        if self.scenario == "constant":
            w = self.params["omega"]
            per = -math.log(w) * w / (1.0 - w) + abs(math.log1p(-w))
            return per * d
        omega = OmegaVector.from_spec(self.params["spec"], d)
        return float(
            np.sum(
                omega.log_omegas_abs * omega.omegas / (1.0 - omega.omegas)
                + omega.log_one_minus_abs
            )
        )

    def b_d(self, d: int) -> float:
        if d < 1:
            raise ValueError(f"d must be a positive integer, got {d!r}")
        if self.scenario == "constant":
            return self.params["rho"] * math.sqrt(d)
        if self.scenario == "jlogj":
            return max(math.log(d), 1.0)
        alpha = self.params["alpha"]
        beta = self.params["beta"]
        if alpha == 1.0:
            return math.log(d) ** 1.5 / math.sqrt(3.0 * beta)
        return (
            alpha / math.sqrt((1.0 - alpha) * beta)
            * d ** ((1.0 - alpha) / 2.0) * math.log(d)
        )

    def hat_a(self, d: int) -> float:
        """a_d minus the top-eigenvalue offset, in simplified form.

        Algebraically a_d - sum_j |ln(1 - omega_j)|; computed directly as
        sum_j |ln omega_j| omega_j / (1 - omega_j) (or its negative-offset
        form when a_d = 0) so that the cancellation against the condition
        sums is exact in floating point.
        """
        omega = OmegaVector.from_spec(self.params["spec"], d)
        if self.scenario == "jlogj":
            return -float(np.sum(omega.log_one_minus_abs))
        return float(np.sum(
            omega.log_omegas_abs * omega.omegas / (1.0 - omega.omegas)
        ))

    def a_d_approx(self, d: int) -> float:
        """Leading-order closed form for a_d (exact a_d = a_d(d))."""
        if d < 2:
            raise ValueError("the closed form needs d >= 2")
        if self.scenario == "jlogj":
            return 0.0
        if self.scenario == "constant":
            return self.a_d(d)
        alpha = self.params["alpha"]
        beta = self.params["beta"]
        if alpha == 1.0:
            return math.log(d) ** 2 / (2.0 * beta) + math.log(d) / beta
        return (
            alpha / ((1.0 - alpha) * beta) * d ** (1.0 - alpha) * math.log(d)
            + d ** (1.0 - alpha) / ((1.0 - alpha) * beta)
        )


def normalization_plan(spec: SigmaSequence) -> NormalizationPlan:
    """Plan (a_d, b_d, law) for a structured length-scale scenario."""
    if spec.kind == "constant":
        w = omega_from_sigma(spec.sigma)
        rho = -math.log(w) * math.sqrt(w) / (1.0 - w)
        return NormalizationPlan(
            scenario="constant",
            law=QuantileFn.normal(),
            triplet=gaussian_triplet(),
            params={"spec": spec, "omega": w, "rho": rho},
        )
    if spec.kind == "power":
        if spec.alpha > 1.0:
            raise ValueError(
                "complexity stays bounded in d for alpha > 1; "
                "no normalization applies"
            )
        return NormalizationPlan(
            scenario="power",
            law=QuantileFn.normal(),
            triplet=gaussian_triplet(),
            params={"spec": spec, "alpha": spec.alpha, "beta": spec.beta},
        )
    if spec.kind == "jlogj":
        mu = 1.0 / spec.beta
        return NormalizationPlan(
            scenario="jlogj",
            law=QuantileFn.dickman(mu),
            triplet=dickman_triplet(mu),
            params={"spec": spec, "beta": spec.beta, "mu": mu},
        )
    raise ValueError(
        f"no normalization plan for sigma sequence kind {spec.kind!r}"
    )


def predicted_log_complexity(plan: NormalizationPlan, d: int,
                             epsilon: float) -> float:
    """Leading-order prediction a_d + q(eps) * b_d."""
    return plan.a_d(d) + plan.law.q(epsilon) * plan.b_d(d)


@dataclass(frozen=True)
class BoundednessVerdict:
    """Whether n(eps) stays bounded as d grows, with the deciding sums."""

    verdict: str  # 'bounded' | 'unbounded' | 'inconclusive-numeric'
    reason: str
    partial_sum_omega: float
    partial_sum_inv_sigma_sq: float


def boundedness_criterion(spec: SigmaSequence,
                          probe_d: int = 100_000) -> BoundednessVerdict:
    """Boundedness of the complexity in d.

    The complexity stays bounded for every error level exactly when
    sum_j omega_j (equivalently sum_j sigma_j^{-2}) converges; otherwise
    it tends to infinity.  Structured kinds are decided analytically;
    an explicit list only yields partial sums and a trend.
    """
    d_avail = probe_d if spec.kind != "explicit" else len(spec.values)
    sig = spec.generate(d_avail)
    omega = OmegaVector.from_sigmas(sig)
    s_om = float(np.sum(omega.omegas))
    s_inv = float(np.sum(sig**-2.0))

    if spec.kind == "constant":
        return BoundednessVerdict(
            "unbounded", "constant sigma: sum_j omega_j diverges linearly",
            s_om, s_inv)
    if spec.kind == "power":
        if spec.alpha > 1.0:
            return BoundednessVerdict(
                "bounded",
                f"sigma_j^2 = beta*j^alpha with alpha={spec.alpha:g} > 1: "
                "sum_j sigma_j^-2 converges", s_om, s_inv)
        return BoundednessVerdict(
            "unbounded",
            f"sigma_j^2 = beta*j^alpha with alpha={spec.alpha:g} <= 1: "
            "sum_j sigma_j^-2 diverges", s_om, s_inv)
    if spec.kind == "jlogj":
        return BoundednessVerdict(
            "unbounded",
            "sigma_j^2 = beta*j*ln(j+1): sum_j 1/(j ln j) diverges",
            s_om, s_inv)

    # explicit: compare first and second half of the partial sums
    half = d_avail // 2
    tail = float(np.sum(omega.omegas[half:])) if half >= 1 else s_om
    trend = ("tail half adds {:.3g} of the total {:.3g}".format(tail, s_om))
    return BoundednessVerdict("inconclusive-numeric",
                              "finite explicit list; " + trend, s_om, s_inv)


def hat_a_d(omega: OmegaVector, a_d: float) -> float:
    """Centering after removing the top-eigenvalue offset:
    hat a_d = a_d - sum_j |ln(1 - omega_j)|."""
    return a_d - float(np.sum(omega.log_one_minus_abs))


def condition_A(omega: OmegaVector, b_d: float, tau: float) -> float:
    """sum of omega_j over dimensions with |ln omega_j| > tau * b_d."""
    mask = omega.log_omegas_abs > tau * b_d
    return float(np.sum(omega.omegas[mask]))


def condition_B(omega: OmegaVector, b_d: float, tau: float,
                hat_a: float) -> float:
    """(sum_{|ln omega_j| <= tau b_d} |ln omega_j| omega_j/(1-omega_j)
    - hat_a) / b_d."""
    mask = omega.log_omegas_abs <= tau * b_d
    s = float(np.sum(
        omega.log_omegas_abs[mask] * omega.omegas[mask]
        / (1.0 - omega.omegas[mask])
    ))
    return (s - hat_a) / b_d


def condition_C(omega: OmegaVector, b_d: float, tau: float) -> float:
    """sum_{|ln omega_j| <= tau b_d} |ln omega_j|^2 omega_j/(1-omega_j)^2,
    normalized by b_d^2."""
    mask = omega.log_omegas_abs <= tau * b_d
    s = float(np.sum(
        omega.log_omegas_abs[mask] ** 2 * omega.omegas[mask]
        / (1.0 - omega.omegas[mask]) ** 2
    ))
    return s / (b_d * b_d)


def cutoff_index(omega_j: float, x: float, allow_zero: bool = False) -> int:
    """Smallest index k with k*|ln omega_j| > x.

    By default k ranges over {2, 3, ...} (the range appearing in the
    remainder terms R0..R2); with ``allow_zero`` it ranges over {0, 1, ...}.
    """
    if not 0.0 < omega_j < 1.0:
        raise ValueError(f"omega must lie in (0, 1), got {omega_j!r}")
    if x <= 0:
        raise ValueError(f"x must be positive, got {x!r}")
    step = -math.log(omega_j)
    k = int(math.floor(x / step)) + 1
    while k * step <= x:  # guard against floor rounding at exact multiples
        k += 1
    if not allow_zero and k < 2:
        k = 2
    return k


def _lemma1_lhs(omega: OmegaVector, x: float, tiny: float = 1e-18):
    """The three double series, summed term by term (truncated tails)."""
    s0 = 0.0
    s1 = 0.0
    s2 = 0.0
    for j in range(omega.d):
        w = float(omega.omegas[j])
        step = float(omega.log_omegas_abs[j])
        k_in = int(math.floor(x / step))  # largest k with k*step <= x
        while (k_in + 1) * step <= x:
            k_in += 1
        while k_in >= 1 and k_in * step > x:
            k_in -= 1
        # inside part: k = 1..k_in, exact finite sums
        if k_in >= 1:
            k = np.arange(1, k_in + 1, dtype=np.float64)
            pk = (1.0 - w) * w**k
            m1 = float(np.sum(k * step * pk))
            s1 += m1
            s2 += float(np.sum((k * step) ** 2 * pk)) - m1 * m1
        # outside part: k > k_in, truncate when the tail is negligible
        k_hi = k_in + 1
        n_terms = max(1, int(math.ceil(math.log(tiny) / math.log(w))))
        k = np.arange(k_hi, k_hi + n_terms, dtype=np.float64)
        s0 += float(np.sum((1.0 - w) * w**k))
    return s0, s1, s2


def _lemma1_rhs(omega: OmegaVector, x: float):
    om = omega.omegas
    steps = omega.log_omegas_abs
    inside = steps <= x
    outside = ~inside

    t0 = float(np.sum(om[outside]))
    t1 = float(np.sum(steps[inside] * om[inside] / (1.0 - om[inside])))
    t2 = float(np.sum(steps[inside] ** 2 * om[inside] / (1.0 - om[inside]) ** 2))

    r0 = 0.0
    r1 = 0.0
    r2 = 0.0
    for j in np.nonzero(inside)[0]:
        w = float(om[j])
        s = float(steps[j])
        kj = cutoff_index(w, x)
        wk = w**kj
        r0 += wk
        r1 += s * wk / (1.0 - w) * (kj * (1.0 - w) + w)
        r2 += (s * s * wk / (1.0 - w) ** 2) * (
            kj * kj * (1.0 - w) ** 2 * (1.0 + wk)
            + 2.0 * kj * (1.0 - w) * wk * w
            + (1.0 - w) * w
            + wk * w * w
        )
    return (t0 + r0, t1 - r1, t2 - r2)


def lemma1_verify(omega: OmegaVector, x: float):
    """Residuals |LHS - RHS| of the three tail/moment identities at x.

    LHS are the truncated double series over (j, k); RHS the closed forms
    with remainders R0, R1, R2 built from the cutoff indices k_j(x).
    """
    if x <= 0:
        raise ValueError(f"x must be positive, got {x!r}")
    lhs = _lemma1_lhs(omega, x)
    rhs = _lemma1_rhs(omega, x)
    return tuple(abs(a - b) for a, b in zip(lhs, rhs))


@dataclass(frozen=True)
class ConditionRow:
    """Condition sums at one (d, tau) against their limit targets."""

    d: int
    tau: float
    sum_A: float
    target_A: float
    sum_B: float
    target_B: float
    sum_C: float
    target_C: float


@dataclass(frozen=True)
class ConditionReport:
    """Evaluation of conditions (A), (B), (C) along d for a tau grid."""

    scenario: str
    rows: tuple
    tolerance: float

    def deviations_at_largest_d(self):
        """Per-tau |sum - target| triples at the largest d in the report."""
        d_max = max(r.d for r in self.rows)
        return {
            r.tau: (abs(r.sum_A - r.target_A),
                    abs(r.sum_B - r.target_B),
                    abs(r.sum_C - r.target_C))
            for r in self.rows if r.d == d_max
        }


def condition_report(spec: SigmaSequence, d_values, tau_grid,
                     tolerance: float = 0.1) -> ConditionReport:
    """Evaluate (A), (B), (C) for the scenario's own normalization plan.

    Targets: (A) -> -L(tau), (B) -> c + gamma_tau, (C) -> v, where
    (c, v, L) is the triplet of the plan's limit law.
    """
    plan = normalization_plan(spec)
    trip = plan.triplet
    rows = []
    for d in sorted(int(v) for v in d_values):
        omega = OmegaVector.from_spec(spec, d)
        bd = plan.b_d(d)
        ha = plan.hat_a(d)
        for tau in tau_grid:
            tau = float(tau)
            rows.append(ConditionRow(
                d=d,
                tau=tau,
                sum_A=condition_A(omega, bd, tau),
                target_A=-trip.levy.value(tau),
                sum_B=condition_B(omega, bd, tau, ha),
                target_B=trip.c + gamma_tau(trip.levy, tau),
                sum_C=condition_C(omega, bd, tau),
                target_C=trip.v,
            ))
    return ConditionReport(scenario=plan.scenario, rows=tuple(rows),
                           tolerance=tolerance)
