import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_force_nu, random_local_symplectic
from gravent.errors import NotPositiveDefinite, NotSymmetric
from gravent.gaussian import (
    DIAGONAL,
    CovarianceMatrix,
    StandardFormParams,
    assemble_standard_form,
    bona_fide_general,
    bona_fide_mask,
    bona_fide_min_eigenvalue,
    bona_fide_standard_form,
    entanglement_measures,
    standard_form_invariants,
    symplectic_eigenvalue,
    symplectic_eigenvalue_batch,
    symplectic_form,
)
from gravent.precision import Precision
from gravent.states import thermal_state, two_mode_squeezed_state


def test_symplectic_form_layout():
    omega = symplectic_form()
    assert omega.shape == (4, 4)
    assert np.array_equal(omega @ omega, -np.eye(4))
    assert omega[0, 1] == 1 and omega[1, 0] == -1 and omega[2, 3] == 1


def test_vacuum_is_separable():
    res = symplectic_eigenvalue(thermal_state(1))
    assert res.nu == pytest.approx(1.0, abs=1e-15)
    assert res.log_negativity == 0


def test_squeezed_vacuum_nu():
    res = symplectic_eigenvalue(two_mode_squeezed_state(1))
    assert res.nu == pytest.approx(math.exp(-1), rel=1e-14)
    assert res.one_minus_nu == pytest.approx(1 - math.exp(-1), rel=1e-14)


def test_thermal_product_state():
    res = symplectic_eigenvalue(thermal_state(2))
    assert res.nu == pytest.approx(2.0, rel=1e-15)
    assert res.Delta == pytest.approx(2.0)
    assert res.det_sigma == pytest.approx(1.0)
    assert res.log_negativity == 0


@pytest.mark.parametrize(
    "nu, negativity, log_neg",
    [(1.0, 0.0, 0.0), (0.5, 0.5, 1.0), (math.exp(-1), (1 - math.exp(-1)) / (2 * math.exp(-1)), 1 / math.log(2))],
)
def test_entanglement_measures(nu, negativity, log_neg):
    n, e = entanglement_measures(nu)
    assert n == pytest.approx(negativity, abs=1e-15)
    assert e == pytest.approx(log_neg, abs=1e-15)


def test_log_negativity_keeps_tiny_deviations():
    _, e = entanglement_measures(1.0, one_minus_nu=1e-19)
    assert e == pytest.approx(1e-19 / math.log(2), rel=1e-12)


def test_extended_log_negativity():
    prec = Precision.extended(50)
    with prec.workspace():
        _, e = entanglement_measures(prec.lib.exp(prec.scalar(-1)), precision=prec)
        assert abs(e - 1 / prec.lib.ln2) < prec.scalar(10) ** -45


def test_rejects_asymmetric_matrix():
    m = np.eye(4) / 2
    m[0, 1] = 1e-3
    with pytest.raises(NotSymmetric):
        CovarianceMatrix(m)


def test_rejects_indefinite_matrix():
    with pytest.raises(NotPositiveDefinite):
        CovarianceMatrix(np.diag([0.5, 0.5, 0.5, -0.1]))


def test_degenerate_spectrum_keeps_full_accuracy(rng):
    # locally squeezed thermal states have both symplectic eigenvalues equal
    for _ in range(200):
        s = random_local_symplectic(rng)
        m = s @ thermal_state(1.5).to_float() @ s.T
        res = symplectic_eigenvalue(CovarianceMatrix.symmetrized(m))
        assert res.nu == pytest.approx(1.5, rel=1e-13)


def test_bona_fide_general_examples():
    assert bona_fide_general(thermal_state(1))
    assert not bona_fide_general(CovarianceMatrix(np.eye(4) * 0.4))
    for r in (0.1, 1.0, 2.0):
        sigma = two_mode_squeezed_state(r)
        assert bona_fide_general(sigma)
        assert abs(bona_fide_min_eigenvalue(sigma)) < 1e-12


def test_bona_fide_standard_form_examples():
    assert bona_fide_standard_form(StandardFormParams(0.5, 0.5, 0.0, 0.0)).passed
    check = bona_fide_standard_form(StandardFormParams(0.4, 0.6, 0.0, 0.0))
    assert not check.passed and DIAGONAL in check.violated
    ch, sh = math.cosh(1) / 2, math.sinh(1) / 2
    assert bona_fide_standard_form(StandardFormParams(ch, ch, sh, -sh)).passed
    # correlations beyond the pure-state boundary
    check = bona_fide_standard_form(StandardFormParams(ch, ch, sh * 1.01, -sh * 1.01))
    assert not check.passed and check.violated


def test_standard_form_check_agrees_with_general(rng):
    a = rng.uniform(0.3, 2.0, 3000)
    b = rng.uniform(0.3, 2.0, 3000)
    half = np.sqrt(a * b)
    c = rng.uniform(-1, 1, 3000) * half
    d = rng.uniform(-1, 1, 3000) * half
    mask = bona_fide_mask(a, b, c, d)
    disagreements = 0
    for i in range(3000):
        p = StandardFormParams(a[i], b[i], c[i], d[i])
        general = bona_fide_min_eigenvalue(assemble_standard_form(p)) >= -1e-12
        disagreements += general != bool(mask[i])
        assert bool(bona_fide_standard_form(p)) == bool(mask[i])
    assert disagreements == 0


def test_thermal_standard_form_is_itself():
    p = standard_form_invariants(thermal_state(1.7))
    assert p.astuple() == pytest.approx((0.85, 0.85, 0.0, 0.0), abs=1e-15)


def test_squeezed_standard_form_round_trip():
    p = standard_form_invariants(two_mode_squeezed_state(1))
    assert p.astuple() == pytest.approx((0.7716, 0.7716, 0.5876, -0.5876), abs=1e-4)
    ch, sh = math.cosh(1) / 2, math.sinh(1) / 2
    assert p.astuple() == pytest.approx((ch, ch, sh, -sh), abs=1e-14)


def test_squeezed_standard_form_extended_precision():
    prec = Precision.extended(50)
    p = standard_form_invariants(two_mode_squeezed_state(1, prec))
    with prec.workspace():
        assert abs(p.c - prec.lib.sinh(prec.scalar(1)) / 2) < prec.scalar(10) ** -45


def test_batch_matches_scalar(rng):
    mats = []
    for _ in range(200):
        s = random_local_symplectic(rng)
        mats.append(s @ two_mode_squeezed_state(rng.uniform(-2, 2)).to_float() @ s.T * rng.uniform(1, 3))
    mats = np.array(mats)
    nu, omn = symplectic_eigenvalue_batch(mats)
    for i, m in enumerate(mats):
        ref = symplectic_eigenvalue(CovarianceMatrix.symmetrized(m))
        assert nu[i] == pytest.approx(ref.nu, rel=1e-12)
        assert omn[i] == pytest.approx(ref.one_minus_nu, rel=1e-9, abs=1e-13)


@settings(max_examples=200, deadline=None)
@given(
    r=st.floats(min_value=-2.5, max_value=2.5),
    theta=st.floats(min_value=1.0, max_value=5.0),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_nu_matches_brute_force_diagonalisation(r, theta, seed):
    s = random_local_symplectic(np.random.default_rng(seed))
    m = theta * (s @ two_mode_squeezed_state(r).to_float() @ s.T)
    res = symplectic_eigenvalue(CovarianceMatrix.symmetrized(m))
    assert res.nu == pytest.approx(brute_force_nu(m), rel=1e-9)
    assert res.nu == pytest.approx(theta * math.exp(-abs(r)), rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(
    a=st.floats(min_value=0.5, max_value=3.0),
    b=st.floats(min_value=0.5, max_value=3.0),
    u=st.floats(min_value=-1.0, max_value=1.0),
    v=st.floats(min_value=-1.0, max_value=1.0),
)
def test_one_minus_nu_consistent_with_nu(a, b, u, v):
    half = math.sqrt(a * b)
    p = StandardFormParams(a, b, u * half, v * half)
    if not bona_fide_standard_form(p):
        return
    res = symplectic_eigenvalue(CovarianceMatrix(assemble_standard_form(p)))
    assert res.nu + res.one_minus_nu == pytest.approx(1.0, abs=1e-12)
    assert res.nu > 0
    assert res.Delta == pytest.approx(a * a + b * b - 2 * p.c * p.d, rel=1e-12, abs=1e-14)
