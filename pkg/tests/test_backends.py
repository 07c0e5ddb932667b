import numpy as np
import pytest

from gklab.backend import BACKEND, get_backend
from gklab.distribution import CenteredSummandLaw
from gklab.spectrum import OmegaVector, SigmaSequence


def _both_backends():
    impls = [get_backend("pure")]
    try:
        impls.append(get_backend("compiled"))
    except ImportError:
        pytest.skip("compiled backend unavailable")
    return impls


def test_backend_selected():
    assert BACKEND in ("pure", "compiled")


def test_enumerate_products_parity():
    pure, compiled = _both_backends()
    rng = np.random.default_rng(11)
    for d in (1, 2, 4, 7):
        omega = OmegaVector.from_sigmas(rng.uniform(0.4, 2.5, size=d))
        step = np.ascontiguousarray(omega.log_omegas_abs)
        root = omega.largest_log_eigenvalue_abs()
        for want_idx in (False, True):
            y_p, m_p, cap_p, idx_p = pure.enumerate_products(
                step, root, 300, -1.0, 10**6, want_idx)
            y_c, m_c, cap_c, idx_c = compiled.enumerate_products(
                step, root, 300, -1.0, 10**6, want_idx)
            np.testing.assert_array_equal(y_p, y_c)
            assert m_p == m_c
            assert cap_p == cap_c
            if want_idx:
                np.testing.assert_array_equal(idx_p, idx_c)


def test_enumerate_products_mass_target_parity():
    pure, compiled = _both_backends()
    omega = OmegaVector.from_spec(SigmaSequence.constant(1.0), 3)
    step = np.ascontiguousarray(omega.log_omegas_abs)
    root = omega.largest_log_eigenvalue_abs()
    y_p, m_p, _, _ = pure.enumerate_products(step, root, -1, 0.9, 10**6, False)
    y_c, m_c, _, _ = compiled.enumerate_products(step, root, -1, 0.9, 10**6, False)
    np.testing.assert_array_equal(y_p, y_c)
    assert m_p == m_c


def test_convolve_lattice_parity():
    pure, compiled = _both_backends()
    rng = np.random.default_rng(12)
    n = 5000
    mass = np.zeros(n)
    lc = np.full(n, -np.inf)
    mass[0] = 1.0
    lc[0] = 0.0
    hi = 1
    omega = OmegaVector.from_sigmas(rng.uniform(0.5, 2.0, size=6))
    state_p = (mass.copy(), lc.copy())
    state_c = (mass.copy(), lc.copy())
    for j in range(omega.d):
        law = CenteredSummandLaw.from_omega(float(omega.omegas[j]), 1e-16)
        pos = (omega.log_one_minus_abs[j]
               + law.lattice_step * np.arange(len(law.probs)))
        shifts = np.floor(pos / 1e-3).astype(np.int64)
        probs = np.ascontiguousarray(law.probs)
        mp_, lp_, dp_, dlp_ = pure.convolve_lattice(*state_p, shifts, probs, hi)
        mc_, lc_, dc_, dlc_ = compiled.convolve_lattice(*state_c, shifts, probs, hi)
        np.testing.assert_allclose(mp_, mc_, rtol=0, atol=1e-18)
        np.testing.assert_allclose(lp_, lc_, rtol=1e-13, atol=1e-13)
        assert dp_ == pytest.approx(dc_, rel=1e-12, abs=1e-300)
        assert dlp_ == pytest.approx(dlc_, rel=1e-12) or (
            dlp_ == -np.inf and dlc_ == -np.inf)
        state_p = (mp_, lp_)
        state_c = (mc_, lc_)
        hi = min(n, hi + int(shifts[-1]) + 1)


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        get_backend("gpu")
