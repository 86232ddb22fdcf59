import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from driven_jcm.model import (ModelParams, SeriesCapError, evolution_factors, generalized_rabi,
                              log_poisson, poisson_cutoff, quasimode_transform, rabi_arrays,
                              rabi_frequency)

FIG2_EPS = (3 / math.sqrt(10), 1 / math.sqrt(10))


def test_rabi_frequency_values():
    assert rabi_frequency(0, ModelParams.from_eps(1, 0)) == 2.0
    assert rabi_frequency(3, ModelParams.from_eps(1, 0)) == 4.0
    assert rabi_frequency(8, ModelParams.from_eps(1, 1, kappa_eff=0.5)) == pytest.approx(3.0, abs=1e-15)


def test_rabi_frequency_rejects_negative_n():
    with pytest.raises(ValueError):
        rabi_frequency(-1, ModelParams(1.0, 0.0))


def test_params_derived_quantities():
    p = ModelParams(0.3, 0.4, delta=1.0)
    assert p.kappa_eff == pytest.approx(0.5)
    assert p.eps_a ** 2 + p.eps_b ** 2 == pytest.approx(1.0, abs=1e-14)
    q = ModelParams.from_eps(3.0, 1.0, delta_over_keff=6.0, kappa_eff=2.0)
    assert q.eps_a == pytest.approx(3 / math.sqrt(10), abs=1e-15)
    assert q.delta == pytest.approx(12.0)
    assert ModelParams.equal_coupling().is_equal_coupling


@pytest.mark.parametrize("kw", [
    dict(kappa_a=-1.0, kappa_b=1.0),
    dict(kappa_a=0.0, kappa_b=0.0),
    dict(kappa_a=1.0, kappa_b=float("nan")),
    dict(kappa_a=1.0, kappa_b=1.0, delta=float("inf")),
])
def test_params_validation(kw):
    with pytest.raises(ValueError):
        ModelParams(**kw)


def test_evolution_factors_t0():
    f = evolution_factors(7, ModelParams(0.6, 0.8, 3.0), 0.0)
    assert f.F == 1 and f.G == 0


def test_evolution_factors_resonant_quarter_period():
    f = evolution_factors(0, ModelParams.from_eps(1, 0), math.pi / 2)
    assert abs(f.F) < 1e-15
    assert f.G == pytest.approx(-1j, abs=1e-15)


def test_evolution_factors_detuned_unitarity():
    f = evolution_factors(1, ModelParams.from_eps(1, 0, delta_over_keff=6.0), 1.0)
    assert abs(f.F) ** 2 + abs(f.G) ** 2 == pytest.approx(1.0, abs=1e-12)
    assert f.delta_n ** 2 == pytest.approx(36.0 + f.omega_n ** 2, rel=1e-12)


def test_evolution_factors_rejects_negative():
    p = ModelParams(1.0, 1.0)
    with pytest.raises(ValueError):
        evolution_factors(-1, p, 1.0)
    with pytest.raises(ValueError):
        evolution_factors(1, p, -1.0)


def test_rabi_arrays_cap():
    with pytest.raises(SeriesCapError) as e:
        rabi_arrays(50, ModelParams(1.0, 1.0, n_cap=20), 1.0)
    assert e.value.cap == 20


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 5), st.floats(0.0, 5), st.floats(-20, 20), st.floats(0, 200))
def test_unitarity_property(ka, kb, delta, t):
    F, G = rabi_arrays(200, ModelParams(ka, kb, delta), t)
    assert np.max(np.abs(np.abs(F) ** 2 + np.abs(G) ** 2 - 1)) < 1e-12


def test_generalized_rabi_increasing():
    d = generalized_rabi(np.arange(100), ModelParams(0.4, 0.7, 3.0))
    assert np.all(np.diff(d) > 0)


def test_quasimode_examples():
    assert quasimode_transform(1, 0, ModelParams.from_eps(1, 0)) == (1, 0)
    A, B = quasimode_transform(1, 1, ModelParams.equal_coupling())
    assert A == pytest.approx(math.sqrt(2)) and B == pytest.approx(0, abs=1e-15)
    A, B = quasimode_transform(1, 2, ModelParams.from_eps(*FIG2_EPS))
    assert abs(A) ** 2 + abs(B) ** 2 == pytest.approx(5.0, abs=1e-13)


@given(st.complex_numbers(max_magnitude=10), st.complex_numbers(max_magnitude=10),
       st.floats(0.0, 1.0), st.floats(0.01, 1.0))
def test_quasimode_is_rotation(a, b, ea, eb):
    A, B = quasimode_transform(a, b, ModelParams.from_eps(ea, eb))
    assert abs(A) ** 2 + abs(B) ** 2 == pytest.approx(abs(a) ** 2 + abs(b) ** 2, rel=1e-13, abs=1e-13)


def test_log_poisson_matches_direct():
    lam = 3.7
    n = np.arange(30)
    direct = np.array([math.exp(-lam) * lam ** k / math.factorial(k) for k in n])
    assert np.allclose(np.exp(log_poisson(lam, 29)), direct, rtol=1e-12, atol=0)


def test_poisson_cutoff_large_lambda_and_cap():
    p = ModelParams(1.0, 1.0)
    n = poisson_cutoff(400.0, p)
    assert 400 < n < 800
    with pytest.raises(SeriesCapError):
        poisson_cutoff(400.0, ModelParams(1.0, 1.0, n_cap=420))
