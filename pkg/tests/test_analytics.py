import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fwmblockade import SystemParams, solve
from fwmblockade.analytics import (
    BlockadeVerdict,
    NoInterferencePathError,
    Regime,
    SingularAmplitudeSystem,
    amplitude_equations,
    amplitude_model,
    amplitude_model_g2,
    classify,
    cpb_eigenfrequencies,
    cpb_eigenfrequencies_numeric,
    regime_of,
    upb_optimal_drive,
    upb_optimal_E,
    upb_optimal_E_general,
    upb_optimal_g,
)
from fwmblockade.liouvillian import Observables

nonzero = st.floats(-5, 5).filter(lambda x: abs(x) > 1e-2)


def obs(g2, g3=None):
    return Observables(0.01, g2, g3, 0.0, (1.0,))


def test_eigenfrequency_examples():
    assert cpb_eigenfrequencies(0, 4) == pytest.approx((4 * math.sqrt(2), -4 * math.sqrt(2)))
    assert cpb_eigenfrequencies(1, 0) == (2, 2)


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_eigenfrequencies_match_diagonalization(da, g):
    closed = cpb_eigenfrequencies(da, g)
    numeric = cpb_eigenfrequencies_numeric(da, g)
    assert np.allclose(closed, numeric, atol=1e-12, rtol=0)


def test_upb_optimum_examples():
    assert upb_optimal_E(0.1, 3) == pytest.approx(-0.0066667, abs=1e-6)
    assert upb_optimal_g(0.05, 0.01) == pytest.approx(-0.5)
    assert upb_optimal_drive(-0.01, 4) == pytest.approx(math.sqrt(0.02))
    with pytest.raises(NoInterferencePathError):
        upb_optimal_E(0.1, 0)
    with pytest.raises(NoInterferencePathError):
        upb_optimal_g(0.1, 0)
    with pytest.raises(ValueError):
        upb_optimal_drive(0.01, 4)


@given(st.floats(-3, 3), st.floats(0.001, 0.5), nonzero)
def test_general_optimum_reduces_to_simple_form(da, F, g):
    # matched detunings and equal rates
    p = SystemParams(delta_a=da, delta_b=da + 0.7, delta_c=da - 0.7, g=g, F_a=F)
    assert upb_optimal_E_general(p) == pytest.approx(upb_optimal_E(F, g), rel=1e-12, abs=1e-14)


def test_amplitude_equations_shape():
    M, rhs = amplitude_equations(SystemParams(F_a=0.1, g=2, E=0.01))
    assert M.shape == (3, 3)
    assert np.allclose(rhs, [-0.1, 0, -0.01])


@pytest.mark.parametrize("da,F", [(0.0, 0.1), (1.3, 0.05), (-0.7, 0.2)])
def test_amplitude_model_without_coupling(da, F):
    z = da - 0.5j
    amp = amplitude_model(SystemParams(delta_a=da, F_a=F))
    assert amp.c100 == pytest.approx(-F * z / (z ** 2 - F ** 2), rel=1e-12)
    assert amp.c200 / amp.c100 ** 2 == pytest.approx((1 - F ** 2 / z ** 2) / math.sqrt(2), rel=1e-12)
    assert amp.c011 == 0
    assert amp.c000 == 1


def test_amplitude_model_resonant_example():
    amp = amplitude_model(SystemParams(F_a=0.1))
    assert abs(amp.c100 - (-0.2j)) < 0.01


@given(st.floats(-2, 2), st.floats(0.005, 0.1), nonzero)
def test_pump_at_optimum_cancels_two_photon_amplitude(da, F, g):
    p = SystemParams(delta_a=da, delta_b=da + 1, delta_c=da - 1, g=g, F_a=F)
    p = p.with_(E=upb_optimal_E_general(p))
    amp = amplitude_model(p)
    assert abs(amp.c200) < 1e-10 * abs(amp.c100) ** 2 + 1e-15


def test_g2_vanishes_at_simple_optimum():
    p = SystemParams(delta_a=1.5, delta_b=1, delta_c=2, g=3, F_a=0.1, E=upb_optimal_E(0.1, 3))
    assert amplitude_model_g2(p) < 1e-20


@pytest.mark.parametrize("F", [1e-4, 5e-5, 1e-5])
def test_linear_cavity_g2_is_coherent(F):
    assert amplitude_model_g2(SystemParams(delta_a=0.3, F_a=F)) == pytest.approx(1.0, abs=1e-6)


def test_amplitude_g2_minimum_near_optimum():
    base = SystemParams(delta_a=1.5, delta_b=1, delta_c=2, g=3, F_a=0.1)
    Es = np.linspace(-0.012, -0.002, 1001)
    g2 = [amplitude_model_g2(base.with_(E=E)) for E in Es]
    assert Es[int(np.argmin(g2))] == pytest.approx(-0.0066667, abs=2e-5)


def test_amplitude_model_errors():
    with pytest.raises(ValueError):
        amplitude_model_g2(SystemParams())
    with pytest.raises(SingularAmplitudeSystem):
        amplitude_model(SystemParams(kappa_a=1e-20, delta_b=1.0))


@pytest.mark.parametrize("g2,g3,regime", [
    (0.3, 0.1, Regime.SINGLE_PHOTON_BLOCKADE),
    (1.5, 0.5, Regime.TWO_PHOTON_BLOCKADE),
    (1.0, 0.99, Regime.TWO_PHOTON_BLOCKADE),
    (1.5, 3.0, Regime.NONE),
    (None, None, Regime.NONE),
    (1.2, None, Regime.NONE),
])
def test_regime(g2, g3, regime):
    assert regime_of(g2, g3) is regime


def test_classify_examples():
    v = classify(obs(0.01, 0.001), SystemParams(F_a=0.1, g=3, E=-0.0066))
    assert v.regime is Regime.SINGLE_PHOTON_BLOCKADE and v.cpb_condition_met and v.upb_condition_met
    assert v.composite
    v = classify(obs(0.5), SystemParams(F_a=0.1, g=3, E=0.01, delta_a=0.5))
    assert not v.cpb_condition_met and not v.upb_condition_met and not v.composite
    v = classify(obs(0.5), SystemParams(F_a=0.1, g=0, E=0.01))
    assert v.cpb_condition_met and not v.upb_condition_met
    v = classify(obs(None), SystemParams())
    assert v.regime is Regime.NONE
    assert BlockadeVerdict.from_dict(v.to_dict()) == v


def test_master_equation_agrees_with_amplitude_model():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 20:
        p = SystemParams(
            delta_a=rng.uniform(-2, 2), delta_b=rng.uniform(-2, 2), delta_c=rng.uniform(-2, 2),
            g=rng.uniform(-3, 3), F_a=rng.uniform(0.005, 0.02), E=rng.uniform(-0.005, 0.005),
        )
        _, me = solve(p, (4, 3, 3))
        amp = amplitude_model_g2(p)
        assert abs(me.g2 - amp) <= max(0.2 * amp, 0.05), (p, me.g2, amp)
        checked += 1
