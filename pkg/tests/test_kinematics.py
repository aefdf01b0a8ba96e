"""Photon-pair relative variables and the resolution diagnostic."""

import math

import numpy as np
import pytest

from bubblehbt.kinematics import (C_UM_PER_PS, PhotonPair, relative_kinematics,
                                  resolution_ratio)


def test_identical_photons_give_origin():
    rk = relative_kinematics(PhotonPair(k1=40.0, k2=40.0, theta=0.0))
    assert rk.q == 0.0
    assert rk.d_omega == 0.0


def test_equal_energy_small_angle():
    # q = 2 k sin(theta/2) for equal wavenumbers
    rk = relative_kinematics(PhotonPair(k1=40.0, k2=40.0, theta=0.05))
    assert rk.q == pytest.approx(2.0 * 40.0 * math.sin(0.025), rel=1e-12)
    assert rk.q == pytest.approx(1.99979, abs=1e-4)
    assert rk.d_omega == 0.0


def test_collinear_unequal_energies():
    rk = relative_kinematics(PhotonPair(k1=40.0, k2=39.9967, theta=0.0))
    assert rk.q == pytest.approx(0.0033, abs=1e-6)
    assert rk.d_omega == pytest.approx(C_UM_PER_PS * 0.0033, rel=1e-9)
    assert rk.d_omega == pytest.approx(0.989, abs=1e-3)


def test_pair_exchange_symmetry():
    rng = np.random.default_rng(11)
    for _ in range(50):
        k1, k2 = rng.uniform(1.0, 100.0, 2)
        theta = rng.uniform(0.0, math.pi)
        a = relative_kinematics(PhotonPair(k1=k1, k2=k2, theta=theta))
        b = relative_kinematics(PhotonPair(k1=k2, k2=k1, theta=theta))
        assert b.q == pytest.approx(a.q, rel=1e-12, abs=1e-12)
        assert b.d_omega == pytest.approx(-a.d_omega, rel=1e-12, abs=1e-12)


def test_energy_difference_bounded_by_momentum_difference():
    rng = np.random.default_rng(12)
    for _ in range(500):
        k1, k2 = rng.uniform(1.0, 100.0, 2)
        theta = rng.uniform(0.0, math.pi)
        rk = relative_kinematics(PhotonPair(k1=k1, k2=k2, theta=theta))
        assert abs(rk.d_omega) <= C_UM_PER_PS * rk.q * (1.0 + 1e-12) + 1e-9


@pytest.mark.parametrize("k1,k2,theta", [
    (0.0, 40.0, 0.1), (-1.0, 40.0, 0.1), (40.0, 40.0, -0.1),
    (40.0, 40.0, 3.5),
])
def test_invalid_pairs_rejected(k1, k2, theta):
    with pytest.raises(ValueError):
        PhotonPair(k1=k1, k2=k2, theta=theta)


def test_resolution_ratio_reference_point():
    r = resolution_ratio(tau=1.0, k=40.0)
    assert r == pytest.approx(1.0 / (C_UM_PER_PS * 40.0), rel=1e-15)
    assert r == pytest.approx(8.34e-5, abs=1e-7)
    assert r < 1e-4


def test_resolution_ratio_scaling():
    assert resolution_ratio(0.1, 40.0) == pytest.approx(8.34e-4, abs=1e-6)
    assert resolution_ratio(1.0, 80.0) == pytest.approx(4.17e-5, abs=1e-7)


def test_resolution_ratio_rejects_nonpositive():
    with pytest.raises(ValueError):
        resolution_ratio(0.0, 40.0)
    with pytest.raises(ValueError):
        resolution_ratio(1.0, -1.0)
