import numpy as np
import pytest

from kerrcat.fock import FockSpace, KerrCatParams, build_hamiltonian, parity_operator
from kerrcat.spectral import (IllConditionedError, NoRobustPointError,
                              ParityLabelError, RobustLineCache,
                              diagonalize_labeled, energy_gap, gap_derivative,
                              gap_landscape, robust_line, spectrum_at)

SPACE = FockSpace(40)


def test_pure_kerr_labeling():
    # at alpha^2 = 0 the computational pair is |0>, |1> at the top (E = 0)
    space = FockSpace(8)
    spec = spectrum_at(KerrCatParams(), 0.0, space)
    assert spec.gap == pytest.approx(0.0, abs=1e-12)
    assert abs(spec.psi0[0]) == pytest.approx(1.0)
    assert abs(spec.psi1[1]) == pytest.approx(1.0)


@pytest.mark.parametrize("alpha2", [0.5, 1.0, 2.0, 3.0])
def test_zero_detuning_degeneracy(alpha2):
    gap = energy_gap(KerrCatParams.from_alpha2(alpha2), 0.0, SPACE)
    assert abs(gap) < 1e-9


@pytest.mark.parametrize("alpha2", [1.0, 2.0, 3.0])
def test_gap_positive_in_protected_window(alpha2):
    p = KerrCatParams.from_alpha2(alpha2)
    for delta in (0.1, 0.3, 0.6):
        assert energy_gap(p, delta, SPACE) > 0


def test_hellmann_feynman_vs_finite_difference():
    p = KerrCatParams.from_alpha2(2.0)
    h = 1e-6
    for delta in (0.05, 0.2, 0.4):
        hf = gap_derivative(p, delta, SPACE)
        fd = (energy_gap(p, delta + h, SPACE) - energy_gap(p, delta - h, SPACE)) / (2 * h)
        assert hf == pytest.approx(fd, abs=1e-6)


@pytest.mark.parametrize("alpha2", [1.5, 2.0, 2.5, 3.0])
def test_derivative_asymptote(alpha2):
    deriv = gap_derivative(KerrCatParams.from_alpha2(alpha2), 0.0, SPACE)
    asym = 4.0 * alpha2 * np.exp(-2.0 * alpha2)
    assert deriv == pytest.approx(asym, rel=0.15)


# robust-line reference values frozen from a direct bisection of the
# Hellmann-Feynman derivative at dim = 40
ROBUST_REFERENCE = {1.0: 0.3913, 1.5: 0.3503, 2.0: 0.3224, 3.0: 0.2876}


@pytest.mark.parametrize("alpha2,expected", sorted(ROBUST_REFERENCE.items()))
def test_robust_line_reference_points(alpha2, expected):
    assert robust_line(alpha2, SPACE) == pytest.approx(expected, abs=2e-4)


@pytest.mark.parametrize("alpha2", [0.2, 0.5, 0.8])
def test_no_robust_point_for_small_cats(alpha2):
    with pytest.raises(NoRobustPointError):
        robust_line(alpha2, SPACE)


def test_robust_line_derivative_vanishes():
    a2 = 2.0
    d = robust_line(a2, SPACE)
    assert abs(gap_derivative(KerrCatParams.from_alpha2(a2), d, SPACE)) < 1e-8


def test_parity_label_error():
    space = FockSpace(10)
    H = build_hamiltonian(KerrCatParams(), space, {"eps_x": 0.5})
    with pytest.raises(ParityLabelError):
        diagonalize_labeled(H, parity_operator(space))


def test_degenerate_pair_rotated_to_parity_basis():
    spec = spectrum_at(KerrCatParams.from_alpha2(2.0), 0.0, SPACE)
    pi = parity_operator(SPACE)
    for idx, sign in zip(spec.comp_indices, (1, -1)):
        v = spec.states[:, idx]
        assert np.vdot(v, pi @ v).real == pytest.approx(sign, abs=1e-9)


def test_gap_derivative_ill_conditioned_guard():
    # tiny truncation with an engineered near-degeneracy is hard to hit;
    # instead check the guard triggers with an absurdly large tolerance
    with pytest.raises(IllConditionedError):
        gap_derivative(KerrCatParams.from_alpha2(2.0), 0.2, SPACE, neighbor_tol=10.0)


def test_gap_landscape_grid_and_csv(tmp_path):
    land = gap_landscape([0.0, 0.2, 0.4], [1.0, 2.0], FockSpace(30))
    assert land.gap.shape == (3, 2)
    assert np.all(land.gap[0] < 1e-9)  # delta = 0 column degenerate
    path = tmp_path / "land.csv"
    land.to_csv(path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "delta,alpha2,gap,gap_deriv"
    assert len(rows) == 1 + 3 * 2


def test_robust_cache_matches_direct_roots():
    cache = RobustLineCache(1.0, 3.0, FockSpace(30), n_points=40)
    rng = np.random.default_rng(7)
    for a2 in rng.uniform(1.0, 3.0, size=5):
        direct = robust_line(float(a2), FockSpace(30))
        assert abs(float(cache(float(a2))) - direct) < 1e-6


def test_robust_cache_range_guard():
    cache = RobustLineCache(1.0, 2.0, FockSpace(30), n_points=20)
    with pytest.raises(NoRobustPointError):
        cache(0.5)
    with pytest.raises(NoRobustPointError):
        cache(2.5)
