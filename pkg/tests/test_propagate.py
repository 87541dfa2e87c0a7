import numpy as np
import pytest

from ptrosen.errors import DecayError, GrowthWindowError, InsufficientDataError, ValidationError
from ptrosen.grid import make_grid, make_grid_2d
from ptrosen.modes import defocusing_mode_1d, focusing_mode_1d, mode_2d
from ptrosen.observables import power
from ptrosen.potential import PotentialParams
from ptrosen.propagate import (
    PropagationConfig,
    absorber_profile,
    aligned_deviation,
    growth_rate_fit,
    phase_rotation_check,
    seed_noise,
    shape_loss_classification,
    split_step,
)


def test_config_validation():
    for bad in (dict(dz=0), dict(dz=-1), dict(z_end=1e-4), dict(record_stride=0),
                dict(record_stride=1.5), dict(absorber_width=0.5), dict(absorber_strength=-1),
                dict(noise_amplitude=-1e-6), dict(dz=float("nan"))):
        with pytest.raises(ValidationError):
            PropagationConfig(**bad)
    assert PropagationConfig(dz=1e-3, z_end=1.0).n_steps == 1000


def test_absorber_profile():
    g = make_grid(10.0, 200)
    r = absorber_profile(g, 0.1)
    assert np.all(r[np.abs(g.points) <= 9.0] == 0)
    assert r[0] == pytest.approx(1.0)
    assert np.all((r >= 0) & (r <= 1))
    assert np.all(absorber_profile(g, 0.0) == 0)
    r2 = absorber_profile(make_grid_2d(10.0, 64), 0.1)
    assert r2.shape == (64, 64) and r2[32, 32] == 0 and r2[0, 32] == pytest.approx(1.0)


def test_noise_is_reproducible():
    a = seed_noise(1000, 1e-3, 7)
    assert np.array_equal(a, seed_noise(1000, 1e-3, 7))
    assert not np.array_equal(a, seed_noise(1000, 1e-3, 8))
    assert np.sqrt(np.mean(np.abs(a) ** 2)) == pytest.approx(1e-3, rel=0.1)


def test_zero_field_stays_zero():
    g = make_grid(20.0, 128)
    t = split_step(np.zeros(128), PotentialParams(0.75, 0.8), 1, g,
                   PropagationConfig(dz=1e-2, z_end=0.5, noise_amplitude=1e-3))
    assert np.all(t.power == 0) and not t.blew_up
    assert len(t) == 6 and t.z[-1] == pytest.approx(0.5)


def test_input_checks(g20):
    p = PotentialParams(0.75, 0.8)
    with pytest.raises(ValidationError):
        split_step(np.zeros(10), p, 1, g20)
    with pytest.raises(ValidationError):
        split_step(np.zeros(512), p, 0, g20)
    bad = np.zeros(512, complex)
    bad[3] = np.nan
    with pytest.raises(ValidationError):
        split_step(bad, p, 1, g20)
    with pytest.raises(DecayError):
        split_step(np.ones(512), p, 1, g20)


def test_hermitian_mode_is_stationary(g20):
    p = PotentialParams(0.0, 0.0)
    m = focusing_mode_1d(p)
    f = m.evaluate(g20)
    t = split_step(f, p, 1, g20, PropagationConfig(dz=1e-3, z_end=1.0, record_stride=100))
    assert abs(t.power[-1] - t.power[0]) < 1e-8
    assert phase_rotation_check(t, m.lam) < 1e-5
    assert aligned_deviation(t, f, m.lam).max() < 1e-4
    assert shape_loss_classification(t, f, m.lam) == "stable"


def test_profile_drift_is_second_order(g20):
    p = PotentialParams(0.75, 0.0)
    m = focusing_mode_1d(p)
    f = m.evaluate(g20)
    drift = []
    for dz in (1e-3, 5e-4):
        t = split_step(f, p, 1, g20, PropagationConfig(dz=dz, z_end=1.0, record_stride=int(round(1 / dz)),
                                                    absorber_strength=0.0))
        drift.append(aligned_deviation(t, f, m.lam)[-1])
    assert 3 <= drift[0] / drift[1] <= 5


def test_fast_growth_peak_rises():
    g = make_grid(20.0, 512)
    p = PotentialParams(0.1, 3.0)
    m = focusing_mode_1d(p)
    t = split_step(m.evaluate(g), p, 1, g,
                   PropagationConfig(dz=1e-3, z_end=4.0, record_stride=50, noise_amplitude=1e-6))
    assert np.max(t.peak_intensity) > 2 * t.peak_intensity[0]
    assert shape_loss_classification(t, m.evaluate(g), m.lam) == "unstable"


def test_blowup_is_flagged():
    g = make_grid(20.0, 256)
    p = PotentialParams(0.1, 3.0)
    m = focusing_mode_1d(p)
    t = split_step(m.evaluate(g), p, 1, g,
                   PropagationConfig(dz=1e-3, z_end=10.0, record_stride=100, noise_amplitude=1e-6))
    assert t.blew_up and 0 < t.blowup_z < 10
    assert np.all(np.isfinite(t.power))
    assert t.metadata()["blew_up"] is True
    assert shape_loss_classification(t, m.evaluate(g), m.lam) == "unstable"


def test_growth_fit_matches_linear_rate(g20):
    p = PotentialParams(0.1, 0.03)
    m = focusing_mode_1d(p)
    f = m.evaluate(g20)
    t = split_step(f, p, 1, g20, PropagationConfig(dz=1e-3, z_end=25.0, record_stride=20,
                                                   noise_amplitude=1e-6, seed=1))
    rate = growth_rate_fit(t, f, m.lam)
    assert rate == pytest.approx(0.3432, rel=0.2)


def test_growth_fit_without_growth(g20):
    p = PotentialParams(0.0, 0.0)
    m = focusing_mode_1d(p)
    f = m.evaluate(g20)
    t = split_step(f, p, 1, g20, PropagationConfig(dz=1e-3, z_end=5.0, record_stride=50,
                                                   noise_amplitude=1e-6))
    with pytest.raises(GrowthWindowError):
        growth_rate_fit(t, f, m.lam)


def test_defocusing_literal_mode_loses_shape_immediately(g20):
    p = PotentialParams(1.0, 0.4)
    m = defocusing_mode_1d(p)
    f = m.evaluate(g20)
    t = split_step(f, p, -1, g20, PropagationConfig(dz=1e-3, z_end=2.0, record_stride=10))
    d = aligned_deviation(t, f, m.lam)
    # not stationary: the deviation grows from the first step, without a noise floor
    assert d[1] > 1e-3 and np.all(np.diff(d[:20]) > 0)
    assert shape_loss_classification(t, f, m.lam) == "unstable"
    with pytest.raises(GrowthWindowError):
        growth_rate_fit(t, f, m.lam)


def test_phase_check_needs_data(g20):
    f = focusing_mode_1d(PotentialParams(0.0, 0.0)).evaluate(g20)
    t = split_step(f, PotentialParams(0, 0), 1, g20,
                   PropagationConfig(dz=1e-2, z_end=0.1, keep_snapshots=False))
    with pytest.raises(InsufficientDataError):
        phase_rotation_check(t, 1.0)
    t = split_step(f, PotentialParams(0, 0), 1, g20, PropagationConfig(dz=1e-2, z_end=0.1))
    with pytest.raises(InsufficientDataError):
        phase_rotation_check(t, 1.0, z_max=0.05)


def test_2d_propagation_runs(g15_2d):
    p = PotentialParams(1.25, 0.5)
    m = mode_2d(p, "derived")
    f = m.evaluate(g15_2d)
    t = split_step(f, p, 1, g15_2d, PropagationConfig(dz=1e-3, z_end=0.05, record_stride=10),
                   w_scale=m.w_scale)
    assert t.snapshots.shape == (6, 256, 256)
    assert t.power[0] == pytest.approx(power(f, g15_2d))
    assert abs(t.power[-1] / t.power[0] - 1) < 1e-3
