"""Truncated Fock-space operators and the driven Kerr-oscillator Hamiltonian.

All energies are expressed in units of the Kerr nonlinearity K and all
times in units of 1/K, so a typical instance has ``kerr=1.0``.

The Hamiltonian is kept in drift + channels form,

    H(t) = H_drift + sum_c  v_c(t) * O_c,

so time propagation only recombines cached matrices with scalars.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np


class InvalidSpaceError(ValueError):
    """Fock truncation too small to be meaningful."""


class InvalidInputError(ValueError):
    """Non-finite or otherwise unusable numerical input."""


CHANNELS = ("delta", "eps2_mod", "eps_x", "eps_y")


@dataclass(frozen=True)
class FockSpace:
    """Truncated single-mode Fock space of dimension ``dim``."""

    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise InvalidSpaceError(f"Fock dimension must be >= 2, got {self.dim}")


@dataclass(frozen=True)
class KerrCatParams:
    """Static Kerr-cat parameters: Kerr K, two-photon pump eps2_0, base detuning."""

    kerr: float = 1.0
    eps2_0: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if not self.kerr > 0:
            raise InvalidInputError(f"Kerr nonlinearity must be positive, got {self.kerr}")
        if self.eps2_0 < 0:
            raise InvalidInputError(f"eps2_0 must be >= 0, got {self.eps2_0}")

    @property
    def alpha2(self) -> float:
        """Cat size alpha^2 = eps2_0 / K."""
        return self.eps2_0 / self.kerr

    @property
    def alpha(self) -> float:
        return np.sqrt(self.alpha2)

    @classmethod
    def from_alpha2(cls, alpha2: float, kerr: float = 1.0, delta: float = 0.0) -> "KerrCatParams":
        return cls(kerr=kerr, eps2_0=alpha2 * kerr, delta=delta)


def destroy(space: FockSpace) -> np.ndarray:
    """Annihilation operator a with a|n> = sqrt(n)|n-1>."""
    return np.diag(np.sqrt(np.arange(1, space.dim)), 1).astype(complex)


def create(space: FockSpace) -> np.ndarray:
    return destroy(space).conj().T


def number_operator(space: FockSpace) -> np.ndarray:
    return np.diag(np.arange(space.dim)).astype(complex)


def parity_operator(space: FockSpace) -> np.ndarray:
    """Photon-number parity Pi = diag((-1)^n)."""
    return np.diag((-1.0) ** np.arange(space.dim)).astype(complex)


@dataclass(frozen=True)
class HamiltonianAssembly:
    """Drift Hamiltonian plus the coupling operator of each control channel.

    Channels:
      delta    -- number operator (detuning shifts, noise traces)
      eps2_mod -- (a^2 + a^dag^2)/2 (two-photon pump modulation)
      eps_x    -- (a + a^dag)/2 (single-photon drive, X quadrature)
      eps_y    -- -i (a - a^dag)/2 (single-photon drive, Y quadrature)
    """

    params: KerrCatParams
    space: FockSpace
    drift: np.ndarray = field(repr=False)
    channels: Mapping[str, np.ndarray] = field(repr=False)

    @classmethod
    def build(cls, params: KerrCatParams, space: FockSpace) -> "HamiltonianAssembly":
        a = destroy(space)
        ad = a.conj().T
        n = ad @ a
        two_photon = 0.5 * (a @ a + ad @ ad)
        drift = (
            params.delta * n
            - 0.5 * params.kerr * (ad @ ad @ a @ a)
            + params.eps2_0 * two_photon
        )
        channels = {
            "delta": n,
            "eps2_mod": two_photon,
            "eps_x": 0.5 * (a + ad),
            "eps_y": -0.5j * (a - ad),
        }
        return cls(params=params, space=space, drift=drift, channels=channels)

    def at(self, channel_values: Mapping[str, float] | None = None) -> np.ndarray:
        """Instantaneous Hamiltonian for the given channel scalars."""
        H = self.drift.copy()
        if channel_values:
            for name, value in channel_values.items():
                if name not in self.channels:
                    raise InvalidInputError(f"unknown channel {name!r}")
                if not np.isfinite(value):
                    raise InvalidInputError(f"non-finite value for channel {name!r}: {value}")
                if value != 0.0:
                    H = H + value * self.channels[name]
        return H


def build_hamiltonian(
    params: KerrCatParams,
    space: FockSpace,
    channel_values: Mapping[str, float] | None = None,
) -> np.ndarray:
    """Assemble H = (delta+Delta) n - (K/2) a^dag2 a^2 + eps2/2 (a^2+h.c.) + drives."""
    return HamiltonianAssembly.build(params, space).at(channel_values)


def hermiticity_defect(H: np.ndarray) -> float:
    """Relative Frobenius deviation from Hermiticity."""
    scale = np.linalg.norm(H)
    if scale == 0:
        return 0.0
    return np.linalg.norm(H - H.conj().T) / scale
