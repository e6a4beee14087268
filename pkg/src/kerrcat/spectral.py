"""Parity-labeled spectra of the driven Kerr oscillator.

The computational pair lives at the *top* of the drift spectrum: at zero
detuning the degenerate even/odd cat states are the highest-energy
eigenstates of H = delta n - K/2 a^dag2 a^2 + eps2/2 (a^2 + a^dag2).
``|0>`` denotes the highest-energy even-parity state and ``|1>`` the
highest-energy odd-parity state; the ladder of "excited" states used for
leakage and DRAG analysis continues downward in energy.

The detuning derivative of the computational gap is evaluated with the
Hellmann-Feynman identity d E_j / d delta = <psi_j| a^dag a |psi_j>.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .fock import (
    FockSpace,
    HamiltonianAssembly,
    InvalidInputError,
    KerrCatParams,
    hermiticity_defect,
    number_operator,
    parity_operator,
)

HERMITICITY_TOL = 1e-12
PARITY_COMM_TOL = 1e-8
DEGENERACY_TOL = 1e-10


class ParityLabelError(ValueError):
    """Hamiltonian does not commute with parity; labels would be meaningless."""


class NoRobustPointError(RuntimeError):
    """No zero of the gap derivative exists in (0, K)."""


class IllConditionedError(RuntimeError):
    """Near-degeneracy with other levels spoils the requested quantity."""


@dataclass(frozen=True)
class LabeledSpectrum:
    """Eigendecomposition with parity labels and computational-state indices.

    energies ascend; ``states[:, k]`` matches ``energies[k]``.
    ``comp_indices = (i0, i1)`` locate the computational states: the
    even- and odd-parity states of highest energy.
    """

    energies: np.ndarray
    states: np.ndarray
    parities: np.ndarray
    comp_indices: tuple[int, int]

    @property
    def psi0(self) -> np.ndarray:
        return self.states[:, self.comp_indices[0]]

    @property
    def psi1(self) -> np.ndarray:
        return self.states[:, self.comp_indices[1]]

    @property
    def gap(self) -> float:
        """Computational gap E_01 = E_1 - E_0."""
        return float(self.energies[self.comp_indices[1]] - self.energies[self.comp_indices[0]])

    def even_indices(self) -> np.ndarray:
        return np.flatnonzero(self.parities > 0)

    def odd_indices(self) -> np.ndarray:
        return np.flatnonzero(self.parities < 0)

    def excited_indices(self, count: int | None = None) -> list[int]:
        """Indices of the ``count`` levels adjacent to the computational pair, by energy."""
        comp = set(self.comp_indices)
        order = np.argsort(self.energies)[::-1]  # descending from the cat manifold
        out = [int(k) for k in order if int(k) not in comp]
        return out if count is None else out[:count]


def _fix_gauge(states: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude Fock coefficient of each column real positive."""
    out = states.copy()
    for k in range(out.shape[1]):
        idx = np.argmax(np.abs(out[:, k]))
        phase = out[idx, k] / abs(out[idx, k])
        out[:, k] /= phase
    return out


def diagonalize_labeled(H: np.ndarray, parity: np.ndarray) -> LabeledSpectrum:
    """Dense Hermitian eigendecomposition with parity labels.

    Within numerically degenerate pairs the eigenvectors are rotated to
    diagonalize the parity operator, so labels stay well defined at the
    delta = 0 degeneracy point.
    """
    if hermiticity_defect(H) > HERMITICITY_TOL:
        raise InvalidInputError("Hamiltonian is not Hermitian")
    scale = np.linalg.norm(H)
    comm = H @ parity - parity @ H
    if scale > 0 and np.linalg.norm(comm) / scale > PARITY_COMM_TOL:
        raise ParityLabelError("Hamiltonian does not commute with the parity operator")

    energies, states = np.linalg.eigh(H)

    # rotate degenerate groups into the parity eigenbasis
    groups = []
    start = 0
    for k in range(1, len(energies) + 1):
        if k == len(energies) or energies[k] - energies[k - 1] > DEGENERACY_TOL:
            if k - start > 1:
                groups.append((start, k))
            start = k
    for lo, hi in groups:
        block = states[:, lo:hi]
        pi_block = block.conj().T @ parity @ block
        pi_block = 0.5 * (pi_block + pi_block.conj().T)
        _, rot = np.linalg.eigh(pi_block)
        states[:, lo:hi] = block @ rot

    states = _fix_gauge(states)
    diag_pi = np.einsum("ij,jk,ki->i", states.conj().T, parity, states).real
    parities = np.where(diag_pi >= 0, 1, -1).astype(int)

    even = np.flatnonzero(parities > 0)
    odd = np.flatnonzero(parities < 0)
    if len(even) == 0 or len(odd) == 0:
        raise ParityLabelError("spectrum lacks one parity sector entirely")
    i0 = int(even[np.argmax(energies[even])])
    i1 = int(odd[np.argmax(energies[odd])])
    return LabeledSpectrum(energies=energies, states=states, parities=parities, comp_indices=(i0, i1))


def spectrum_at(params: KerrCatParams, delta_shift: float, space: FockSpace) -> LabeledSpectrum:
    """Labeled spectrum of the drift Hamiltonian at total detuning delta + Delta."""
    H = HamiltonianAssembly.build(params, space).at({"delta": delta_shift})
    return diagonalize_labeled(H, parity_operator(space))


def energy_gap(params: KerrCatParams, delta_shift: float, space: FockSpace) -> float:
    """Computational gap E_01 = E_1 - E_0 at total detuning delta + Delta."""
    return spectrum_at(params, delta_shift, space).gap


def gap_derivative(
    params: KerrCatParams,
    delta_shift: float,
    space: FockSpace,
    neighbor_tol: float = 1e-8,
) -> float:
    """Detuning derivative of the gap via Hellmann-Feynman.

    d E_01 / d delta = <psi_1|n|psi_1> - <psi_0|n|psi_0>. Valid when the
    computational states are separated from their parity-sector neighbors.
    """
    spec = spectrum_at(params, delta_shift, space)
    n = number_operator(space)
    for idx, sector in zip(spec.comp_indices, (spec.even_indices(), spec.odd_indices())):
        others = spec.energies[sector[sector != idx]]
        if len(others) and np.min(np.abs(others - spec.energies[idx])) < neighbor_tol * params.kerr:
            raise IllConditionedError(
                "computational state nearly degenerate with its parity-sector neighbor"
            )
    n0 = np.vdot(spec.psi0, n @ spec.psi0).real
    n1 = np.vdot(spec.psi1, n @ spec.psi1).real
    return float(n1 - n0)


#: Minimum parity-sector gap (units K) at the robust point for it to count
#: as usable. Below alpha^2 ~ 1 the gap maximum coincides with an avoided
#: crossing of the even computational state and an excited state (sector
#: gap ~0.3 K at alpha^2 = 0.2 vs ~1.4 K at alpha^2 = 1), so the "robust"
#: point is an artifact of state hybridization rather than protection.
ROBUST_SECTOR_GAP_MIN = 1.2


def robust_line(
    alpha2: float,
    space: FockSpace,
    kerr: float = 1.0,
    deriv_tol: float = 1e-9,
    delta_tol: float = 1e-10,
    coarse_points: int = 64,
) -> float:
    """Detuning delta_rob in (0, K) where the gap derivative vanishes.

    Found by bisection on the Hellmann-Feynman derivative after a coarse
    bracket scan. Raises :class:`NoRobustPointError` when the derivative
    does not change sign in (0, K), or when the zero sits on an avoided
    crossing with leakage states, both of which happen for small cat sizes.
    """
    params = KerrCatParams.from_alpha2(alpha2, kerr=kerr)

    def deriv(delta):
        return gap_derivative(params, delta, space)

    grid = np.linspace(kerr / coarse_points, kerr * (1 - 1e-9), coarse_points)
    values = [deriv(d) for d in grid]
    bracket = None
    for k in range(len(grid) - 1):
        if values[k] > 0 and values[k + 1] <= 0:
            bracket = (grid[k], grid[k + 1], values[k], values[k + 1])
            break
    if bracket is None:
        raise NoRobustPointError(
            f"gap derivative has no + -> - sign change in (0, K) at alpha2={alpha2}"
        )
    lo, hi, flo, fhi = bracket
    root = None
    while hi - lo > delta_tol * kerr:
        mid = 0.5 * (lo + hi)
        fmid = deriv(mid)
        if abs(fmid) < deriv_tol:
            root = mid
            break
        if fmid > 0:
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    if root is None:
        root = 0.5 * (lo + hi)

    spec = spectrum_at(params, root, space)
    i0, i1 = spec.comp_indices
    sector_gap = np.inf
    for idx, sector in ((i0, spec.even_indices()), (i1, spec.odd_indices())):
        others = spec.energies[sector[sector != idx]]
        if len(others):
            sector_gap = min(sector_gap, np.min(np.abs(others - spec.energies[idx])))
    if sector_gap < ROBUST_SECTOR_GAP_MIN * kerr:
        raise NoRobustPointError(
            f"gap maximum at alpha2={alpha2} sits on an avoided crossing "
            f"(sector gap {sector_gap:.3g} K); no usable robust point"
        )
    return float(root)


@dataclass(frozen=True)
class GapLandscape:
    """E_01 and its detuning derivative on a (delta, alpha^2) grid."""

    delta_grid: np.ndarray
    alpha2_grid: np.ndarray
    gap: np.ndarray        # shape (n_delta, n_alpha2)
    gap_deriv: np.ndarray  # shape (n_delta, n_alpha2)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["delta", "alpha2", "gap", "gap_deriv"])
            for i, d in enumerate(self.delta_grid):
                for j, a2 in enumerate(self.alpha2_grid):
                    writer.writerow([f"{d:.12g}", f"{a2:.12g}",
                                     f"{self.gap[i, j]:.12g}", f"{self.gap_deriv[i, j]:.12g}"])


def gap_landscape(
    delta_grid: Sequence[float],
    alpha2_grid: Sequence[float],
    space: FockSpace,
    kerr: float = 1.0,
) -> GapLandscape:
    """Evaluate gap and derivative over a rectangular (delta, alpha^2) grid."""
    deltas = np.asarray(delta_grid, dtype=float)
    alpha2s = np.asarray(alpha2_grid, dtype=float)
    gap = np.empty((len(deltas), len(alpha2s)))
    deriv = np.empty_like(gap)
    n = number_operator(space)
    for j, a2 in enumerate(alpha2s):
        params = KerrCatParams.from_alpha2(a2, kerr=kerr)
        for i, d in enumerate(deltas):
            spec = spectrum_at(params, d, space)
            gap[i, j] = spec.gap
            n0 = np.vdot(spec.psi0, n @ spec.psi0).real
            n1 = np.vdot(spec.psi1, n @ spec.psi1).real
            deriv[i, j] = n1 - n0
    return GapLandscape(delta_grid=deltas, alpha2_grid=alpha2s, gap=gap, gap_deriv=deriv)


class RobustLineCache:
    """delta_rob(alpha^2) precomputed on a grid with monotone cubic interpolation."""

    def __init__(self, alpha2_min: float, alpha2_max: float, space: FockSpace,
                 kerr: float = 1.0, n_points: int = 200):
        from scipy.interpolate import PchipInterpolator

        if not alpha2_max > alpha2_min:
            raise InvalidInputError("alpha2_max must exceed alpha2_min")
        self.alpha2_min = alpha2_min
        self.alpha2_max = alpha2_max
        self.kerr = kerr
        self.space = space
        grid = np.linspace(alpha2_min, alpha2_max, n_points)
        values = np.array([robust_line(a2, space, kerr=kerr) for a2 in grid])
        self._interp = PchipInterpolator(grid, values)

    def __call__(self, alpha2) -> np.ndarray | float:
        a2 = np.asarray(alpha2, dtype=float)
        if np.any(a2 < self.alpha2_min - 1e-12) or np.any(a2 > self.alpha2_max + 1e-12):
            raise NoRobustPointError(
                f"alpha2 outside cached robust-line range [{self.alpha2_min}, {self.alpha2_max}]"
            )
        out = self._interp(np.clip(a2, self.alpha2_min, self.alpha2_max))
        return float(out) if np.isscalar(alpha2) else out
