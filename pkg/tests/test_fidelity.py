import numpy as np
import pytest

from kerrcat.fidelity import (InfidelityGrid, average_infidelity,
                              computational_pair, infidelity, simpson_nodes)
from kerrcat.fock import FockSpace, KerrCatParams
from kerrcat.pulses import rot_x, scheme_x

SPACE = FockSpace(30)


def _embed(gate, psi0, psi1, dim):
    P = np.column_stack([psi0, psi1])
    U = np.eye(dim, dtype=complex) - P @ P.conj().T
    return U + P @ gate @ P.conj().T


def test_exact_gate_zero_infidelity():
    p = KerrCatParams.from_alpha2(2.0)
    psi0, psi1 = computational_pair(p, SPACE)
    target = rot_x(np.pi / 2)
    U = _embed(target, psi0, psi1, SPACE.dim)
    assert infidelity(U, target, psi0, psi1) == pytest.approx(0.0, abs=1e-12)


def test_global_phase_invariance():
    p = KerrCatParams.from_alpha2(2.0)
    psi0, psi1 = computational_pair(p, SPACE)
    target = rot_x(np.pi / 2)
    U = np.exp(1j * 0.73) * _embed(target, psi0, psi1, SPACE.dim)
    assert infidelity(U, target, psi0, psi1) == pytest.approx(0.0, abs=1e-12)


def test_full_leakage_is_one():
    p = KerrCatParams.from_alpha2(2.0)
    psi0, psi1 = computational_pair(p, SPACE)
    # permutation moving the pair entirely out of its span
    spec_states = np.eye(SPACE.dim, dtype=complex)
    P = np.column_stack([psi0, psi1])
    comp = P @ P.conj().T
    # build a unitary swapping the pair with two orthogonal directions
    rest = np.linalg.svd(np.eye(SPACE.dim) - comp)[0][:, :2]
    U = np.eye(SPACE.dim, dtype=complex)
    block = np.column_stack([psi0, psi1, rest[:, 0], rest[:, 1]])
    swap = np.zeros((4, 4))
    swap[2, 0] = swap[3, 1] = swap[0, 2] = swap[1, 3] = 1.0
    U = U - block @ block.conj().T + block @ swap @ block.conj().T
    assert infidelity(U, rot_x(np.pi / 2), psi0, psi1) == pytest.approx(1.0, abs=1e-10)


def test_simpson_weights():
    nodes, w = simpson_nodes(5e-3, 11)
    assert len(nodes) == 11
    assert w.sum() == pytest.approx(1.0)
    # exactness on constants and quadratics
    assert np.dot(w, np.ones(11)) == pytest.approx(1.0)
    quad = nodes**2
    assert np.dot(w, quad) == pytest.approx((5e-3) ** 2 / 3.0, rel=1e-12)
    with pytest.raises(ValueError):
        simpson_nodes(1e-3, 10)


def test_grid_average_and_csv(tmp_path):
    nodes, w = simpson_nodes(5e-3, 11)
    infs = 2.0 * nodes**2
    grid = InfidelityGrid(delta_nodes=nodes, weights=w, infidelities=infs)
    assert grid.average == pytest.approx(2 * (5e-3) ** 2 / 3)
    assert grid.worst == pytest.approx(2 * (5e-3) ** 2)
    assert grid.at_zero == pytest.approx(0.0)
    path = tmp_path / "grid.csv"
    grid.to_csv(path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "delta,weight,infidelity"
    assert len(rows) == 12


def test_x_schedule_detuning_profile():
    # at the calibrated amplitude the error is smallest on resonance and
    # grows nearly symmetrically with the detuning offset
    from kerrcat.pulses import seed_eps_x0
    p = KerrCatParams.from_alpha2(2.0)
    s = scheme_x(20.0, seed_eps_x0(20.0, p), p, n_samples=401)
    grid = average_infidelity(s, SPACE, n_steps=300)
    assert grid.at_zero == pytest.approx(grid.infidelities.min(), rel=1e-12)
    assert grid.at_zero < 1e-6
    asym = np.max(np.abs(grid.infidelities - grid.infidelities[::-1]))
    assert asym < 0.5 * grid.worst


def test_average_infidelity_within_bounds():
    p = KerrCatParams.from_alpha2(1.0)
    s = scheme_x(15.0, 0.05, p, n_samples=201)
    grid = average_infidelity(s, SPACE, n_nodes=5, n_steps=200)
    assert np.all(grid.infidelities >= 0.0)
    assert np.all(grid.infidelities <= 1.0 + 1e-9)
    assert grid.average <= grid.worst
