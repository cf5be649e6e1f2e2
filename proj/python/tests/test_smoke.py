import math

import numpy as np
import pytest

import haarquench as hq

BELL = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
GHZ = np.array([1, 0, 0, 0, 0, 0, 0, 1], dtype=complex) / math.sqrt(2)


def test_concurrence_of_bell_and_werner_states():
    assert hq.concurrence_pure(BELL) == pytest.approx(1.0)
    for p in (0.2, 0.5, 0.8):
        rho = hq.with_white_noise(BELL, p)
        assert hq.concurrence_mixed(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-9)


def test_partial_transpose_of_bell_state():
    rho = np.outer(BELL, BELL.conj())
    assert np.linalg.eigvalsh(hq.partial_transpose(rho, 1)).min() == pytest.approx(-0.5)
    assert hq.negativity(rho) == pytest.approx(0.5)


def test_gme_of_ghz_and_product_states():
    g = hq.gme_monotone_pure(GHZ)
    assert g.value == pytest.approx(0.5, abs=1e-5)
    assert g.certificate_valid
    assert g.solver_status == hq.SdpStatus.optimal
    product = np.zeros(8, dtype=complex)
    product[0] = 1
    assert hq.gme_monotone_pure(product).value <= 1e-6


def test_bipartite_gme_matches_negativity():
    rng = np.random.default_rng(3)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    assert hq.gme_bipartite(rho).value == pytest.approx(hq.negativity(rho), abs=1e-6)


def test_states_and_disorder():
    raw = hq.haar_raw(2, seed=5, stream=1)
    assert len(raw) == 8
    assert raw == hq.haar_raw(2, seed=5, stream=1)
    psi = hq.normalize(2, raw)
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    out = hq.inject_disorder(2, raw, [0], hq.DistributionFamily.cauchy_lorentz, 0.5, seed=5)
    assert out[1:] == raw[1:]
    assert out[0] != raw[0]
    with pytest.raises(hq.HaarquenchError):
        hq.normalize(2, [0.0] * 8)


def test_clean_and_quenched_runs():
    c = hq.ExperimentConfig()
    c.n_states = 2000
    c.master_seed = 9
    r = hq.run_clean(c, workers=1)
    assert r.histogram.n_samples == 2000
    assert sum(r.histogram.percentages) == pytest.approx(100.0)
    assert r.histogram.mean == pytest.approx(np.mean(r.values))
    assert r.histogram.std == pytest.approx(np.std(r.values))

    c.n_states = 300
    c.n_disorder_configs = 10
    q = hq.run_quenched(c, workers=2)
    assert q.quenched.n_samples == 300
    assert q.quenched.std < q.clean.std
    assert q.clean_values == hq.run_quenched(c, workers=1).clean_values


def test_config_text_and_presets():
    c = hq.ExperimentConfig.from_text("n_qubits = 3\ntargets = a1,b1\nnoise_p = 0.8\nbin_width = 0.01\n")
    assert c.targets == [0, 2]
    assert c.noise_p == pytest.approx(0.8)
    assert hq.ExperimentConfig.from_text(c.to_text()) == c
    with pytest.raises(ValueError):
        hq.ExperimentConfig.from_text("bogus = 1\n")
    assert "fig1" in hq.preset_names()
    curves = hq.preset("fig4_fourparam", seed=1, scale=0.001)
    assert [name for name, _, _ in curves] == ["clean", "gaussian", "uniform", "cauchy_lorentz"]
    assert curves[1][1].targets == [0, 2, 4, 6]
