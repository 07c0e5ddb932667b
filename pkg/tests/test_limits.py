import math

import numpy as np
import pytest

from gklab.limits import (
    EULER_GAMMA,
    DickmanCdf,
    DickmanLevy,
    QuantileFn,
    ZeroLevy,
    dickman_cdf,
    dickman_quantile,
    dickman_sample,
    dickman_triplet,
    gamma_tau,
    gaussian_triplet,
    normal_cdf,
    normal_quantile,
)

mp = pytest.importorskip("mpmath")


@pytest.mark.parametrize("p", [1e-12, 1e-6, 0.01, 0.25, 0.5, 0.75,
                               0.9, 0.99, 1 - 1e-6, 1 - 1e-12])
def test_normal_quantile_against_mpmath(p):
    with mp.workdps(40):
        want = float(mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1))
    got = normal_quantile(p)
    assert got == pytest.approx(want, rel=1e-12, abs=1e-13)


def test_normal_cdf_tails():
    assert normal_cdf(0.0) == pytest.approx(0.5, abs=1e-16)
    assert normal_cdf(-8.0) == pytest.approx(
        float(mp.ncdf(-8)), rel=1e-12)
    assert normal_cdf(8.0) + normal_cdf(-8.0) == pytest.approx(1.0, abs=1e-16)


def test_normal_quantile_limits():
    assert normal_quantile(0.0) == -math.inf
    assert normal_quantile(1.0) == math.inf
    with pytest.raises(ValueError):
        normal_quantile(1.2)


def test_dickman_value_at_one():
    # D_1(1) = exp(-euler gamma)
    assert dickman_cdf(1.0, 1.0) == pytest.approx(
        math.exp(-EULER_GAMMA), abs=1e-12)


def test_dickman_value_at_two_frozen():
    # closed form on (1, 2]: D_1(2) = exp(-gamma) * (3 - 2 ln 2)
    want = math.exp(-EULER_GAMMA) * (3.0 - 2.0 * math.log(2.0))
    assert dickman_cdf(2.0, 1.0) == pytest.approx(want, abs=1e-8)


def test_dickman_linear_on_unit_interval():
    # density is exp(-gamma) on (0, 1] for mu = 1
    slope = math.exp(-EULER_GAMMA)
    for x in np.linspace(0.01, 1.0, 100):
        assert dickman_cdf(float(x), 1.0) == pytest.approx(
            slope * x, abs=1e-8)


@pytest.mark.parametrize("mu", [0.3, 0.5, 1.0, 2.0, 4.0])
def test_dickman_total_mass(mu):
    assert DickmanCdf(mu).total_mass_defect() <= 1e-8


@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_dickman_quantile_contract(mu):
    # generalized-inverse contract: the true quantile lies within the
    # bisection interval of width 1e-9 around the returned value
    for p in (0.05, 0.25, 0.5, 0.75, 0.9, 0.99):
        x = dickman_quantile(p, mu)
        assert dickman_cdf(x - 1e-9, mu) <= p + 1e-12
        assert dickman_cdf(x + 1e-9, mu) >= p - 1e-12


def test_dickman_cdf_monotone_and_bounded():
    xs = np.linspace(0.0, 12.0, 400)
    F = [dickman_cdf(float(x), 0.7) for x in xs]
    assert all(0.0 <= v <= 1.0 for v in F)
    assert all(a <= b + 1e-15 for a, b in zip(F, F[1:]))


@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_perpetuity_mean_and_ks(mu):
    n = 100_000
    w = np.sort(dickman_sample(mu, n, seed=321))
    # E W = mu; variance of the law is mu/2
    assert float(w.mean()) == pytest.approx(mu, abs=4.0 * math.sqrt(mu / 2 / n))
    F = np.array([dickman_cdf(float(v), mu) for v in w])
    i = np.arange(1, n + 1)
    ks = max(float(np.max(i / n - F)), float(np.max(F - (i - 1) / n)))
    assert ks < 1.63 / math.sqrt(n)  # 1% KS threshold


def test_dickman_sample_deterministic():
    a = dickman_sample(1.0, 100, seed=5)
    b = dickman_sample(1.0, 100, seed=5)
    np.testing.assert_array_equal(a, b)
    c = dickman_sample(1.0, 100, seed=6)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("tau", [0.25, 0.5, 1.0, 2.0])
def test_gamma_tau_identity(beta, tau):
    # c + gamma_tau = mu * min(tau, 1) for the Dickman triplet
    mu = 1.0 / beta
    trip = dickman_triplet(mu)
    got = trip.c + gamma_tau(trip.levy, tau)
    assert got == pytest.approx(mu * min(tau, 1.0), abs=1e-8)


def test_gamma_tau_large_tau_limit():
    mu = 1.3
    # first integral covers all of (0,1], second is empty
    got = gamma_tau(DickmanLevy(mu), 50.0)
    assert got == pytest.approx(mu * (1.0 - math.pi / 4.0), abs=1e-8)


def test_gamma_tau_zero_levy():
    assert gamma_tau(ZeroLevy(), 0.5) == 0.0


def test_triplets():
    g = gaussian_triplet()
    assert (g.c, g.v) == (0.0, 1.0)
    assert g.levy.value(0.5) == 0.0
    t = dickman_triplet(2.0)
    assert t.c == pytest.approx(math.pi / 2.0)
    assert t.v == 0.0
    assert t.levy.value(0.5) == pytest.approx(2.0 * math.log(0.5))
    assert t.levy.value(3.0) == 0.0


def test_quantile_fn():
    qn = QuantileFn.normal()
    assert qn.q(0.5) == pytest.approx(normal_quantile(0.75))
    qd = QuantileFn.dickman(1.0)
    assert qd.q(0.5) == pytest.approx(dickman_quantile(0.75, 1.0))
    with pytest.raises(ValueError):
        qn.q(1.5)


def test_invalid_mu():
    with pytest.raises(ValueError):
        DickmanCdf(0.0)
    with pytest.raises(ValueError):
        dickman_sample(-1.0, 10, seed=0)
