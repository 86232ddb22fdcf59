import math

import numpy as np
import pytest

from driven_jcm.states import (Coherent, DriveState, EvenCat, OddCat, Thermal, cavity_state,
                               fock_coefficients, mean_photon_number)


def test_mean_photon_numbers():
    assert mean_photon_number(EvenCat(1.0)) == pytest.approx(0.762, abs=1e-3)
    assert mean_photon_number(OddCat(1.0)) == pytest.approx(1.313, abs=1e-3)
    assert mean_photon_number(DriveState(2.0)) == 4.0
    assert mean_photon_number(Coherent(1j)) == pytest.approx(1.0)
    assert mean_photon_number(Thermal(0.25)) == 0.25


def test_constructors_reject_bad_input():
    with pytest.raises(ValueError):
        OddCat(0.0)
    with pytest.raises(ValueError):
        EvenCat(0.0)
    with pytest.raises(ValueError):
        Thermal(-0.1)
    with pytest.raises(ValueError):
        DriveState(complex("nan"))
    with pytest.raises(ValueError):
        cavity_state("squeezed", 1.0)


def test_vacuum_coefficients():
    fc = fock_coefficients(Coherent(0), 4)
    assert np.array_equal(fc.amplitudes, [1, 0, 0, 0, 0])
    assert fc.tail_mass == 0


@pytest.mark.parametrize("cls,parity", [(EvenCat, 0), (OddCat, 1)])
def test_cat_parity_and_norm(cls, parity):
    fc = fock_coefficients(cls(1.0 + 0.5j), 20)
    n = np.arange(21)
    assert np.all(fc.amplitudes[n % 2 != parity] == 0)
    assert np.sum(fc.weights) == pytest.approx(1.0, abs=1e-12)
    assert not fc.truncation_warning


def test_thermal_weights():
    fc = fock_coefficients(Thermal(1.0), 200)
    n = np.arange(201)
    assert fc.amplitudes is None
    assert fc.weights.sum() + fc.tail_mass == pytest.approx(1.0, abs=1e-14)
    assert (n * fc.weights).sum() == pytest.approx(1.0, abs=1e-9)


def test_truncation_warning():
    fc = fock_coefficients(Coherent(3.0), 5)
    assert fc.truncation_warning and fc.tail_mass > 0.1


@pytest.mark.parametrize("state", [Coherent(1.2), EvenCat(1.0), OddCat(0.8j), Thermal(0.7)])
def test_moment_consistency(state):
    fc = fock_coefficients(state, 200)
    assert (np.arange(201) * fc.weights).sum() == pytest.approx(mean_photon_number(state), abs=1e-9)
