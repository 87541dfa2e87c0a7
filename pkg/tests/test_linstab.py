import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptrosen.errors import DimensionMismatchError, SizeBudgetError, ValidationError
from ptrosen.grid import make_grid, make_grid_2d
from ptrosen.linstab import (
    ZERO_RADIUS,
    analyze_mode,
    backward_error,
    build_operators,
    default_tolerance,
    eig_dense,
    fd_d2_matrix,
    fourier_d2_matrix,
    max_growth_rate,
    pairing_defect,
    stability_spectrum,
)
from ptrosen.modes import defocusing_mode_1d, focusing_mode_1d, mode_2d
from ptrosen.potential import PotentialParams


# --- eigensolver ---------------------------------------------------------------

def test_eig_diagonal():
    d = np.array([3.0, -1.0 + 2j, 0.5j, 7.0])
    mu = eig_dense(np.diag(d))
    assert sorted(mu, key=lambda z: (z.real, z.imag)) == pytest.approx(sorted(d, key=lambda z: (z.real, z.imag)))
    for m in mu:
        assert backward_error(np.diag(d), m) < 1e-8


def test_eig_rotation():
    t = 0.3
    R = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
    mu = np.sort_complex(eig_dense(R))
    assert mu == pytest.approx([np.exp(-1j * t), np.exp(1j * t)], abs=1e-14)


def test_eig_companion():
    # z^3 - 6 z^2 + 11 z - 6 = (z-1)(z-2)(z-3)
    C = np.array([[6.0, -11.0, 6.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    mu = np.sort(eig_dense(C).real)
    assert mu == pytest.approx([1.0, 2.0, 3.0], abs=1e-10)
    for m in eig_dense(C):
        assert backward_error(C, m) < 1e-8
    assert backward_error(C, 1.5) > 1e-3


def test_eig_rejects_bad_input():
    with pytest.raises(ValidationError):
        eig_dense(np.ones((2, 3)))
    with pytest.raises(ValidationError):
        eig_dense(np.array([[np.nan]]))


# --- derivative matrices ----------------------------------------------------

def test_fd_matrix_n8():
    g = make_grid(20.0, 8)
    D = fd_d2_matrix(7, g.dx)
    assert D.shape == (7, 7)
    h2 = g.dx ** 2
    assert np.all(np.diag(D) == -2 / h2)
    assert np.all(np.diag(D, 1) == 1 / h2) and np.all(np.diag(D, -1) == 1 / h2)
    assert np.count_nonzero(D) == 7 + 2 * 6


def test_fourier_matrix_exact_on_modes():
    g = make_grid(3.0, 16)
    D = fourier_d2_matrix(g)
    x = g.points
    for m in range(0, 8):
        k = m * np.pi / g.half_width
        e = np.exp(1j * k * x)
        assert np.max(np.abs(D @ e + k * k * e)) < 1e-10 * (1 + k * k)
    # Nyquist mode cos(8 pi x / L) is represented as itself
    kn = 8 * np.pi / g.half_width
    c = np.cos(kn * x)
    assert np.max(np.abs(D @ c + kn * kn * c)) < 1e-9 * kn * kn
    assert np.allclose(D, D.T)


# --- operators ---------------------------------------------------------------

def test_operator_shapes_and_difference(g20, fig1):
    m = focusing_mode_1d(fig1)
    f = m.evaluate(g20)
    ops = build_operators(f, fig1, 1, m.lam, g20, "fourier")
    assert ops.L1.shape == (512, 512)
    diff = ops.L2 - ops.L1
    assert np.allclose(diff, np.diag(2 * np.abs(f) ** 2))
    assert diff[256, 256].real == pytest.approx(6.625, abs=1e-12)
    fd = build_operators(f, fig1, 1, m.lam, g20, "fd")
    assert fd.L1.shape == (511, 511)
    assert fd.block_matrix().shape == (1022, 1022)
    assert fd.nodes == pytest.approx(-fd.nodes[::-1], abs=1e-12)


def test_toy_block_problem():
    # L1 = L2 = -I: M^2 = I, so mu = +-1 and eta = +-i
    from ptrosen.linstab import LinearizationOperators

    g = make_grid(20.0, 8)
    I = -np.eye(1)
    ops = LinearizationOperators(I, I, "fourier", g, np.zeros(1), PotentialParams(0, 0), 1, 0.0)
    s = stability_spectrum(ops)
    assert np.sort_complex(s.etas) == pytest.approx([-1j, 1j])
    assert s.max_growth == pytest.approx(0.0, abs=1e-15)
    assert s.classification == "stable"


def test_operator_argument_checks(g20, g15_2d, fig1):
    f = focusing_mode_1d(fig1).evaluate(g20)
    with pytest.raises(ValidationError):
        build_operators(f, fig1, 1, 0.36, g20, "chebyshev")
    with pytest.raises(ValidationError):
        build_operators(f, fig1, 2, 0.36, g20)
    with pytest.raises(DimensionMismatchError):
        build_operators(f[:-1], fig1, 1, 0.36, g20)
    with pytest.raises(DimensionMismatchError):
        analyze_mode(mode_2d(fig1), g15_2d)
    big = make_grid(40.0, 4096)
    with pytest.raises(SizeBudgetError):
        build_operators(np.zeros(4096), fig1, 1, 0.36, big)


# --- tolerance and classification ------------------------------------------

def test_tolerance_semantics():
    assert default_tolerance(0.36) == pytest.approx(1.36e-6)
    assert default_tolerance(-8.0) == pytest.approx(9e-6)
    etas = np.array([2e-6, -2e-6, 1j])
    assert max_growth_rate(etas, 1e-6) == (2e-6, "unstable")
    assert max_growth_rate(etas, 2e-6)[1] == "stable"
    with pytest.raises(ValidationError):
        max_growth_rate(etas, 0.0)


def test_pairing_defect():
    etas = np.array([1 + 2j, -1 - 2j, 1 - 2j, -1 + 2j, 1e-7])
    assert pairing_defect(etas, "negation") == 0.0
    assert pairing_defect(etas, "conjugation") == 0.0
    assert pairing_defect(np.array([1.0, -1.1]), "negation") == pytest.approx(0.1)
    assert pairing_defect(np.array([1e-5j]), "conjugation") == 0.0
    with pytest.raises(ValidationError):
        pairing_defect(etas, "reflection")


# --- physics -----------------------------------------------------------------

REFERENCE_CASES = [
    (focusing_mode_1d, 0.1, 0.03),
    (focusing_mode_1d, 0.1, 3.0),
    (focusing_mode_1d, 0.75, 0.8),
    (defocusing_mode_1d, 1.0, 0.4),
]


@pytest.mark.parametrize("ctor, a, b", REFERENCE_CASES)
@pytest.mark.parametrize("disc", ["fourier", "fd"])
def test_reference_cases_unstable_and_paired(g20, ctor, a, b, disc):
    s = analyze_mode(ctor(PotentialParams(a, b)), g20, disc)
    assert s.classification == "unstable"
    assert s.max_growth > s.tol
    assert s.negation_defect() < 1e-6
    assert s.conjugation_defect() < 1e-6
    assert s.etas.size == 2 * (512 if disc == "fourier" else 511)
    re = s.etas.real
    assert np.all(np.diff(re) <= 0)


def test_growth_rate_reference_values(g20):
    s = analyze_mode(focusing_mode_1d(PotentialParams(0.1, 0.03)), g20)
    assert s.max_growth == pytest.approx(0.3432, abs=1e-3)
    assert s.meta["n"] == 512 and s.meta["disc"] == "fourier"


@pytest.mark.parametrize("a", [0.0, -0.5, -1.0])
def test_hermitian_window_is_stable(a):
    g = make_grid(20.0, 256)
    s = analyze_mode(focusing_mode_1d(PotentialParams(a, 0.0)), g)
    assert s.classification == "stable"
    assert s.max_growth < 1e-5


@settings(max_examples=6, deadline=None)
@given(st.floats(-2, 2), st.floats(0.01, 3))
def test_spectrum_symmetries_property(a, b):
    g = make_grid(20.0, 128)
    s = analyze_mode(focusing_mode_1d(PotentialParams(a, b)), g)
    assert s.negation_defect() < 1e-6
    assert s.conjugation_defect() < 1e-6
    assert s.unstable


def test_metadata_round_trip(g20):
    s = analyze_mode(focusing_mode_1d(PotentialParams(0.75, 0.8)), g20, "fd", tol=1e-3)
    md = s.to_metadata()
    assert md["tol"] == 1e-3 and md["disc"] == "fd"
    assert md["classification"] == "unstable"
    assert md["max_growth"] == s.max_growth
    assert ZERO_RADIUS < 1e-3
