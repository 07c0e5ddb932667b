import math

import numpy as np
import pytest

from gklab.asymptotics import (
    boundedness_criterion,
    condition_A,
    condition_B,
    condition_C,
    condition_report,
    cutoff_index,
    hat_a_d,
    lemma1_verify,
    normalization_plan,
    predicted_log_complexity,
)
from gklab.spectrum import OmegaVector, SigmaSequence, omega_from_sigma


def test_constant_plan():
    plan = normalization_plan(SigmaSequence.constant(1.0))
    w = omega_from_sigma(1.0)
    s = -math.log(w)
    rho = s * math.sqrt(w) / (1.0 - w)
    assert plan.scenario == "constant"
    assert plan.law.name == "normal"
    assert plan.b_d(100) == pytest.approx(rho * 10.0)
    per = s * w / (1.0 - w) + abs(math.log1p(-w))
    assert plan.a_d(7) == pytest.approx(7.0 * per)
    # hat_a removes the |ln(1-omega)| part
    assert plan.hat_a(7) == pytest.approx(7.0 * s * w / (1.0 - w))


def test_power_plan():
    plan = normalization_plan(SigmaSequence.power(0.5, 2.0))
    d = 50
    assert plan.b_d(d) == pytest.approx(
        0.5 / math.sqrt(0.5 * 2.0) * d**0.25 * math.log(d))
    omega = OmegaVector.from_spec(SigmaSequence.power(0.5, 2.0), d)
    want = float(np.sum(
        omega.log_omegas_abs * omega.omegas / (1 - omega.omegas)
        + omega.log_one_minus_abs))
    assert plan.a_d(d) == pytest.approx(want, rel=1e-12)
    # the two-term closed form is asymptotic; only ballpark agreement is
    # guaranteed at finite d
    assert plan.a_d_approx(10_000) == pytest.approx(
        plan.a_d(10_000), rel=0.2)


def test_power_alpha_one_plan():
    plan = normalization_plan(SigmaSequence.power(1.0, 0.5))
    assert plan.b_d(1000) == pytest.approx(
        math.log(1000.0) ** 1.5 / math.sqrt(1.5))


def test_power_bounded_error():
    with pytest.raises(ValueError, match="bounded"):
        normalization_plan(SigmaSequence.power(1.5, 1.0))


def test_jlogj_plan():
    plan = normalization_plan(SigmaSequence.jlogj(2.0))
    assert plan.a_d(10) == 0.0
    assert plan.b_d(10) == pytest.approx(math.log(10.0))
    assert plan.b_d(2) == 1.0  # max(ln d, 1)
    assert plan.law.name == "dickman(mu=0.5)"
    assert plan.triplet.c == pytest.approx(math.pi / 8.0)


def test_explicit_has_no_plan():
    with pytest.raises(ValueError):
        normalization_plan(SigmaSequence.explicit([1.0, 2.0]))


def test_predicted_log_complexity():
    plan = normalization_plan(SigmaSequence.constant(1.0))
    got = predicted_log_complexity(plan, 100, 0.5)
    assert got == pytest.approx(
        plan.a_d(100) + plan.law.q(0.5) * plan.b_d(100))


def test_boundedness_verdicts():
    assert boundedness_criterion(SigmaSequence.constant(1.0)).verdict == "unbounded"
    assert boundedness_criterion(SigmaSequence.power(1.5, 1.0)).verdict == "bounded"
    assert boundedness_criterion(SigmaSequence.power(1.0, 1.0)).verdict == "unbounded"
    assert boundedness_criterion(SigmaSequence.jlogj(1.0)).verdict == "unbounded"
    v = boundedness_criterion(SigmaSequence.explicit([1.0] * 50))
    assert v.verdict == "inconclusive-numeric"
    assert v.partial_sum_omega > 0


def test_conditions_constant_sigma_exact():
    # once tau*b_d clears |ln omega|, A and B vanish and C equals 1
    spec = SigmaSequence.constant(1.0)
    plan = normalization_plan(spec)
    w = plan.params["omega"]
    rho = plan.params["rho"]
    tau = 0.5
    d_tau = math.ceil((-math.log(w) / (tau * rho)) ** 2)
    for d in (d_tau, d_tau + 13, 4 * d_tau):
        omega = OmegaVector.from_spec(spec, d)
        bd = plan.b_d(d)
        assert condition_A(omega, bd, tau) == 0.0
        assert condition_B(omega, bd, tau, plan.hat_a(d)) == 0.0
        assert condition_C(omega, bd, tau) == pytest.approx(1.0, abs=1e-12)


def test_hat_a_d_generic():
    omega = OmegaVector.from_sigmas([1.0, 2.0])
    a = 5.0
    assert hat_a_d(omega, a) == pytest.approx(
        a - float(np.sum(omega.log_one_minus_abs)))


def test_cutoff_index():
    w = 0.5
    step = math.log(2.0)
    # smallest k >= 2 with k*step > x
    assert cutoff_index(w, 0.1) == 2
    assert cutoff_index(w, 2.0 * step) == 3
    assert cutoff_index(w, 3.5 * step) == 4
    # N0 variant may return 0 or 1
    assert cutoff_index(w, 0.1, allow_zero=True) == 1
    assert cutoff_index(w, step * 0.5, allow_zero=True) == 1
    with pytest.raises(ValueError):
        cutoff_index(1.5, 1.0)


def test_lemma1_residuals_seeded():
    rng = np.random.default_rng(2024)
    for _ in range(25):
        d = int(rng.integers(1, 9))
        omega = OmegaVector.from_omegas(rng.uniform(0.05, 0.95, size=d))
        for x in (0.5, 1.0, 2.0, 5.0):
            assert max(lemma1_verify(omega, x)) <= 1e-10


def test_lemma1_exact_multiples():
    # x landing exactly on a lattice multiple must not break the cutoffs
    omega = OmegaVector.from_omegas([0.5, 0.25])
    step = math.log(2.0)
    for x in (step, 2 * step, 3 * step):
        assert max(lemma1_verify(omega, x)) <= 1e-10


def test_condition_report_shape():
    spec = SigmaSequence.jlogj(1.0)
    rep = condition_report(spec, d_values=[100, 1000], tau_grid=[0.5, 1.0])
    assert rep.scenario == "jlogj"
    assert len(rep.rows) == 4
    r = rep.rows[0]
    assert r.target_C == 0.0
    assert r.target_B == pytest.approx(min(r.tau, 1.0), abs=1e-8)
    devs = rep.deviations_at_largest_d()
    assert set(devs) == {0.5, 1.0}


def test_condition_report_constant_targets():
    rep = condition_report(SigmaSequence.constant(1.0),
                           d_values=[64], tau_grid=[0.5])
    r = rep.rows[0]
    assert r.target_A == 0.0
    assert r.target_B == 0.0
    assert r.target_C == 1.0
    assert r.sum_A == 0.0
    assert r.sum_B == 0.0
    assert r.sum_C == pytest.approx(1.0, abs=1e-12)
