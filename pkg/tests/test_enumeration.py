import math

import numpy as np
import pytest

from gklab.enumeration import (
    DEFAULT_CAP,
    average_error,
    enumerate_top,
    exact_complexity,
)
from gklab.errors import CapacityError
from gklab.spectrum import OmegaVector, SigmaSequence
from gklab.verify import brute_force_top


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_matches_brute_force(d):
    rng = np.random.default_rng(100 + d)
    for _ in range(3):
        omega = OmegaVector.from_sigmas(rng.uniform(0.3, 3.0, size=d))
        count = int(rng.integers(10, 150))
        got = enumerate_top(omega, count=count)
        want = brute_force_top(omega, count)
        assert len(got) == count
        for g, (wy, widx) in zip(got, want):
            assert -g.log_value == pytest.approx(wy, abs=1e-10)
            assert g.multi_index == widx


def test_tie_order_is_lexicographic():
    # equal sigmas: permuted multi-indices give exactly equal eigenvalues
    omega = OmegaVector.from_spec(SigmaSequence.constant(1.0), 3)
    items = enumerate_top(omega, count=40)
    lo = 0
    vals = [it.log_value for it in items]
    for hi in range(1, len(items) + 1):
        if hi == len(items) or vals[hi] != vals[lo]:
            block = [items[r].multi_index for r in range(lo, hi)]
            assert block == sorted(block)
            lo = hi


def test_eigenvalues_non_increasing_and_consistent():
    omega = OmegaVector.from_sigmas([0.7, 1.3, 2.1])
    items = enumerate_top(omega, count=500)
    vals = [it.value for it in items]
    assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))
    # each value matches its multi-index product
    for it in items[:50]:
        recomputed = float(
            np.sum(
                omega.log_one_minus_abs
                + (np.array(it.multi_index) - 1) * omega.log_omegas_abs
            )
        )
        assert -it.log_value == pytest.approx(recomputed, abs=1e-10)


def test_mass_stop_rule():
    omega = OmegaVector.from_sigmas([1.0, 1.0])
    items = enumerate_top(omega, mass=0.75)
    total = sum(it.value for it in items)
    assert total >= 0.75
    assert total - items[-1].value < 0.75


def test_exact_complexity_small_frozen():
    # sigma = 1: top eigenvalue per factor is 1 - omega with
    # omega = 2/(3+sqrt(5)); n(0.5) = 2 at d=1 and 5 at d=2
    om1 = OmegaVector.from_spec(SigmaSequence.constant(1.0), 1)
    om2 = OmegaVector.from_spec(SigmaSequence.constant(1.0), 2)
    assert exact_complexity(om1, 0.5).n == 2
    assert exact_complexity(om2, 0.5).n == 5


def test_exact_complexity_minimality():
    rng = np.random.default_rng(7)
    omega = OmegaVector.from_sigmas(rng.uniform(0.5, 2.0, size=3))
    for eps in (0.8, 0.5, 0.25):
        n = exact_complexity(omega, eps).n
        assert average_error(omega, n) <= eps
        if n > 1:
            assert average_error(omega, n - 1) > eps


def test_average_error_monotone():
    omega = OmegaVector.from_sigmas([1.0, 1.5])
    errs = [average_error(omega, n) for n in range(0, 40)]
    assert errs[0] == 1.0
    assert all(a >= b for a, b in zip(errs, errs[1:]))


def test_complexity_monotone_in_d_and_eps():
    spec = SigmaSequence.constant(1.2)
    ns = [exact_complexity(OmegaVector.from_spec(spec, d), 0.5).n
          for d in (1, 2, 3, 4)]
    assert ns == sorted(ns)
    om = OmegaVector.from_spec(spec, 3)
    n_eps = [exact_complexity(om, e).n for e in (0.8, 0.5, 0.3, 0.15)]
    assert n_eps == sorted(n_eps)


def test_capacity_error():
    omega = OmegaVector.from_sigmas([1.0] * 4)
    with pytest.raises(CapacityError) as exc:
        enumerate_top(omega, count=10_000, cap=500)
    assert "500" in str(exc.value)
    assert DEFAULT_CAP == 10_000_000


def test_argument_validation():
    omega = OmegaVector.from_sigmas([1.0])
    with pytest.raises(ValueError):
        enumerate_top(omega)
    with pytest.raises(ValueError):
        enumerate_top(omega, count=5, mass=0.5)
    with pytest.raises(ValueError):
        exact_complexity(omega, 0.0)
    with pytest.raises(ValueError):
        exact_complexity(omega, 1.0)
    with pytest.raises(ValueError):
        average_error(omega, -1)


def test_ln_n_property():
    om1 = OmegaVector.from_spec(SigmaSequence.constant(1.0), 1)
    res = exact_complexity(om1, 0.5)
    assert res.ln_n == pytest.approx(math.log(res.n))
