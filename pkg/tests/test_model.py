import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fwmblockade import HilbertSpace, SystemParams, build_collapse_channels, build_hamiltonian, commutator, number
from fwmblockade.model import bose_einstein_occupation, detuning_relation_holds, occupation_from_ratio

real = st.floats(-5, 5, allow_nan=False)


def test_zero_params_give_zero_hamiltonian():
    H = build_hamiltonian(SystemParams(), HilbertSpace((3, 2, 2)))
    assert np.count_nonzero(H.matrix) == 0


def test_detuning_only_is_number_operator():
    H = build_hamiltonian(SystemParams(delta_a=1.0), HilbertSpace((2, 1, 1)))
    assert np.allclose(H.matrix, np.diag([0, 1]))


def test_four_wave_mixing_matrix_element():
    s = HilbertSpace((3, 2, 2))
    H = build_hamiltonian(SystemParams(g=1.0), s).matrix
    assert H[s.index(0, 1, 1), s.index(2, 0, 0)] == pytest.approx(math.sqrt(2))
    assert H[s.index(2, 0, 0), s.index(0, 1, 1)] == pytest.approx(math.sqrt(2))


def test_pump_creates_pairs():
    s = HilbertSpace((2, 2, 2))
    E = 0.3 - 0.2j
    H = build_hamiltonian(SystemParams(E=E), s).matrix
    assert H[s.index(0, 1, 1), s.index(0, 0, 0)] == pytest.approx(E)
    assert H[s.index(0, 0, 0), s.index(0, 1, 1)] == pytest.approx(np.conj(E))
    # no beam-splitter exchange between b and c
    assert H[s.index(0, 1, 0), s.index(0, 0, 1)] == 0


def test_drive_matrix_element():
    s = HilbertSpace((3, 1, 1))
    H = build_hamiltonian(SystemParams(F_a=0.2), s).matrix
    assert H[s.index(1, 0, 0), s.index(0, 0, 0)] == pytest.approx(0.2)
    assert H[s.index(2, 0, 0), s.index(1, 0, 0)] == pytest.approx(0.2 * math.sqrt(2))


@given(real, real, real, real, real, real)
def test_hamiltonian_hermitian_for_real_pump(da, db, dc, g, F, E):
    H = build_hamiltonian(SystemParams(da, db, dc, g, F, E), HilbertSpace((3, 2, 2)))
    assert np.max(np.abs(H.matrix - H.matrix.conj().T)) < 1e-12


@given(real, real, real)
def test_undriven_uncoupled_hamiltonian_is_diagonal(da, db, dc):
    H = build_hamiltonian(SystemParams(da, db, dc), HilbertSpace((3, 3, 2))).matrix
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0


@given(st.floats(-5, 5).filter(lambda x: abs(x) > 1e-3))
def test_mixing_term_connects_only_pair_conversion(g):
    s = HilbertSpace((4, 3, 3))
    H = build_hamiltonian(SystemParams(g=g), s).matrix
    for r, c in zip(*np.nonzero(H)):
        m, n, p = s.occupations(c)
        m2, n2, p2 = s.occupations(r)
        assert (m2, n2, p2) in {(m - 2, n + 1, p + 1), (m + 2, n - 1, p - 1)}


def test_mixing_conserves_total_photon_number():
    s = HilbertSpace((4, 3, 3))
    H = build_hamiltonian(SystemParams(delta_a=0.3, delta_b=1, delta_c=-2, g=1.3, E=0.2), s)
    total = number(s, 0) + number(s, 1) + number(s, 2)
    # pair pump breaks total number but conserves n_b - n_c
    assert np.allclose(commutator(H, number(s, 1) - number(s, 2)).matrix, 0)
    H0 = build_hamiltonian(SystemParams(delta_a=0.3, delta_b=1, delta_c=-2, g=1.3), s)
    assert np.allclose(commutator(H0, total).matrix, 0)


def test_zero_temperature_channels():
    chans = build_collapse_channels(SystemParams(), HilbertSpace((2, 2, 2)))
    assert len(chans) == 3
    assert all(ch.rate == 1.0 and ch.label.endswith("-") for ch in chans)


def test_thermal_channel_rates():
    s = HilbertSpace((2, 2, 2))
    chans = {ch.label: ch.rate for ch in build_collapse_channels(SystemParams(n_th_a=0.5), s)}
    assert chans["a-"] == pytest.approx(1.5)
    assert chans["a+"] == pytest.approx(0.5)
    assert len(chans) == 4


def test_kappa_scales_lowering_rate():
    s = HilbertSpace((2, 2, 2))
    chans = {ch.label: ch.rate for ch in build_collapse_channels(SystemParams(kappa_a=2.0), s)}
    assert chans["a-"] == 2.0 and chans["b-"] == 1.0


@pytest.mark.parametrize("bad", [dict(kappa_a=0.0), dict(kappa_b=-1.0), dict(n_th_c=-0.1)])
def test_invalid_params_rejected(bad):
    with pytest.raises(ValueError):
        SystemParams(**bad)


def test_detuning_relation_is_reported_not_enforced():
    assert detuning_relation_holds(SystemParams(delta_a=1.5, delta_b=1, delta_c=2))
    p = SystemParams(delta_a=2, delta_b=1, delta_c=1)
    assert not detuning_relation_holds(p)
    assert p.delta_a == 2


def test_bose_einstein():
    assert bose_einstein_occupation(1e12, 0.0) == 0.0
    assert occupation_from_ratio(math.log(2)) == pytest.approx(1.0)
    assert occupation_from_ratio(math.log(1.1)) == pytest.approx(10.0)
    from scipy import constants

    omega = 2 * math.pi * 5e9
    T = constants.hbar * omega / (constants.k * math.log(2))
    assert bose_einstein_occupation(omega, T) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        bose_einstein_occupation(0.0, 1.0)


def test_params_dict_round_trip():
    p = SystemParams(delta_a=0.5, g=3, F_a=0.1, E=0.01 - 0.002j, n_th_b=0.1)
    assert SystemParams.from_dict(p.to_dict()) == p
    with pytest.raises(ValueError):
        SystemParams.from_dict({"bogus": 1})
